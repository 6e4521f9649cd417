//! Dense symmetric matrices.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_len, Error, Result};

/// Dense real symmetric matrix stored row-major.
///
/// Construction symmetrizes its input, so `get(i, j) == get(j, i)` holds
/// bit-for-bit for every instance.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    size: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            data: vec![0.0; size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.data[i * size + i] = 1.0;
        }
        m
    }

    /// Matrix with every entry equal to `value`.
    pub fn filled(size: usize, value: f64) -> Self {
        Self {
            size,
            data: vec![value; size * size],
        }
    }

    /// Builds from rows, replacing the input by `(B + Bᵀ) / 2`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for row in rows {
            check_len("matrix row", size, row.len())?;
            data.extend_from_slice(row);
        }
        Self::from_row_major(size, data)
    }

    pub fn from_row_major(size: usize, mut data: Vec<f64>) -> Result<Self> {
        check_len("matrix entries", size * size, data.len())?;
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        for i in 0..size {
            for j in (i + 1)..size {
                let avg = 0.5 * (data[i * size + j] + data[j * size + i]);
                data[i * size + j] = avg;
                data[j * size + i] = avg;
            }
        }
        Ok(Self { size, data })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    /// Adds `value` to both `(i, j)` and `(j, i)`; the diagonal gets it once.
    #[inline]
    pub fn add_sym(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.size + j] += value;
        if i != j {
            self.data[j * self.size + i] += value;
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.size.max(1)).map(<[f64]>::to_vec).take(self.size).collect()
    }

    /// `vᵀ M v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.size);
        let mut total = 0.0;
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            let row = self.row(i);
            let dot: f64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
            total += vi * dot;
        }
        total
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            size: self.size,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&mut self, other: &SymMatrix, factor: f64) {
        assert_eq!(self.size, other.size, "matrix sizes differ");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Sum of absolute entries, `Σ|M_ij|`.
    ///
    /// This is the norm for which `|uᵀ M v| <= ‖u‖∞ ‖v‖∞ ‖M‖` holds, which is
    /// what the discretization bound in [`crate::copositivity::required_k`]
    /// relies on.
    pub fn entrywise_l1(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.size, other.size, "matrix sizes differ");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymMatrix")
            .field("size", &self.size)
            .field("entries", &self.to_rows())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    size: usize,
    entries: Vec<Vec<f64>>,
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile {
            size: self.size,
            entries: self.to_rows(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = MatrixFile::deserialize(deserializer)?;
        if file.entries.len() != file.size {
            return Err(serde::de::Error::custom(format!(
                "`size` is {} but `entries` has {} rows",
                file.size,
                file.entries.len()
            )));
        }
        SymMatrix::from_rows(&file.entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrizes_on_construction() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 3.0]]).unwrap();
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(1, 0), 1.0);
        assert!(m.is_symmetric());
    }

    #[test]
    fn rejects_ragged_and_non_finite() {
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0]]).is_err());
        assert!(matches!(
            SymMatrix::from_rows(&[vec![f64::NAN]]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn quad_form_matches_expansion() {
        let m = SymMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        let v = [1.0 / 3.0, 2.0 / 3.0];
        assert!((m.quad_form(&v) - (1.0 / 9.0 - 4.0 / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let m = SymMatrix::identity(2);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"size":2,"entries":[[1.0,0.0],[0.0,1.0]]}"#);
        let back: SymMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<SymMatrix>(r#"{"size":3,"entries":[[1.0]]}"#).is_err());
    }
}
