use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};

/// `{ s : (s - x)ᵀ P⁻¹ (s - x) <= 1 }`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipsoid {
    center: DVector<f64>,
    shape: DMatrix<f64>,
}

impl Ellipsoid {
    pub fn new(center: Vec<f64>, shape: DMatrix<f64>) -> Result<Self> {
        let m = center.len();
        if m == 0 {
            return Err(Error::InvalidArgument("ellipsoid dimension must be positive".into()));
        }
        check_len("shape rows", m, shape.nrows())?;
        check_len("shape cols", m, shape.ncols())?;
        if (&shape - shape.transpose()).amax() > 1e-12 * shape.amax().max(1.0) {
            return Err(Error::InvalidArgument("shape matrix is not symmetric".into()));
        }
        if shape.clone().cholesky().is_none() {
            return Err(Error::InvalidArgument("shape matrix is not positive definite".into()));
        }
        Ok(Self {
            center: DVector::from_vec(center),
            shape,
        })
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
        }
        let m = center.len();
        Self::new(center, DMatrix::identity(m, m) * (radius * radius))
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        self.center.as_slice()
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    pub fn determinant(&self) -> Result<f64> {
        let chol = self
            .shape
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidArgument("shape matrix is not positive definite".into()))?;
        Ok(chol.l_dirty().diagonal().iter().map(|v| v * v).product())
    }

    pub fn volume(&self) -> Result<f64> {
        Ok(unit_ball_volume(self.dim()) * self.determinant()?.sqrt())
    }

    /// Whether `(s - x)ᵀ P⁻¹ (s - x) <= 1 + slack`.
    pub fn contains(&self, point: &[f64], slack: f64) -> bool {
        let diff = DVector::from_column_slice(point) - &self.center;
        match self.shape.clone().cholesky() {
            Some(chol) => diff.dot(&chol.solve(&diff)) <= 1.0 + slack,
            None => false,
        }
    }

    /// `max { gᵀs : s in the ellipsoid } = gᵀx + √(gᵀPg)`.
    pub fn support(&self, g: &[f64]) -> f64 {
        let g = DVector::from_column_slice(g);
        let spread = g.dot(&(&self.shape * &g)).max(0.0).sqrt();
        g.dot(&self.center) + spread
    }
}

/// Volume of the unit ball in `m` dimensions, `π^{m/2} / Γ(m/2 + 1)`.
pub fn unit_ball_volume(m: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_m = V_{m-2} · 2π / m
    let mut v = if m % 2 == 0 { 1.0 } else { 2.0 };
    let mut d = if m % 2 == 0 { 2 } else { 3 };
    while d <= m {
        v *= 2.0 * std::f64::consts::PI / d as f64;
        d += 2;
    }
    v
}

pub fn ellipsoid_volume(e: &Ellipsoid) -> Result<f64> {
    e.volume()
}

/// Central-cut update: the minimum-volume ellipsoid containing
/// `{ s ∈ e : aᵀs <= aᵀx }`.
pub fn ellipsoid_update(e: &Ellipsoid, a: &[f64]) -> Result<Ellipsoid> {
    let m = e.dim();
    check_len("cut normal", m, a.len())?;
    if m < 2 {
        return Err(Error::InvalidArgument(
            "the ellipsoid update needs dimension >= 2; use bisection".into(),
        ));
    }
    if a.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidArgument("cut normal is zero".into()));
    }
    let a = DVector::from_column_slice(a);
    let pa = &e.shape * &a;
    let apa = a.dot(&pa);
    if !(apa > 0.0 && apa.is_finite()) {
        return Err(Error::Solver(format!(
            "ellipsoid update is numerically degenerate (aᵀPa = {apa})"
        )));
    }
    let mf = m as f64;
    let center = &e.center - &pa * (1.0 / ((mf + 1.0) * apa.sqrt()));
    let mut shape =
        (&e.shape - (&pa * pa.transpose()) * (2.0 / ((mf + 1.0) * apa))) * (mf * mf / (mf * mf - 1.0));
    let sym = (&shape + shape.transpose()) * 0.5;
    shape = sym;
    Ok(Ellipsoid { center, shape })
}

/// `det(P̂) / det(P)` for a central cut in dimension `m`.
pub fn determinant_ratio(m: usize) -> f64 {
    let mf = m as f64;
    (mf * mf / (mf * mf - 1.0)).powi(m as i32) * (mf - 1.0) / (mf + 1.0)
}
