use crate::error::{Error, Result};
use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Two-sided coverage of the confidence band.
pub const BAND_LEVEL: f64 = 0.90;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    /// Usually `1/N`.
    pub x: f64,
    pub y: f64,
    /// Standard error of `y`; weights are `1/σ²`.
    pub sigma: f64,
}

/// `y ≈ c₀ + c₁x + c₂x²` by weighted least squares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFit {
    pub coefficients: [f64; 3],
    /// `(XᵀWX)⁻¹`, taking the `σ` as absolute.
    pub covariance: [[f64; 3]; 3],
    pub intercept: f64,
    pub intercept_stderr: f64,
    pub dof: usize,
    pub chi_squared: f64,
    /// Student-t quantile for [`BAND_LEVEL`] with `dof` degrees of freedom.
    pub t_quantile: f64,
    pub intercept_band: (f64, f64),
}

impl QuadraticFit {
    pub fn value_at(&self, x: f64) -> f64 {
        let c = &self.coefficients;
        c[0] + c[1] * x + c[2] * x * x
    }

    /// Pointwise band `value ± t·√(gᵀCg)` with `g = (1, x, x²)`.
    pub fn band_at(&self, x: f64) -> (f64, f64) {
        let g = [1.0, x, x * x];
        let mut var = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                var += g[i] * self.covariance[i][j] * g[j];
            }
        }
        let half = self.t_quantile * var.max(0.0).sqrt();
        let y = self.value_at(x);
        (y - half, y + half)
    }
}

pub fn finite_size_fit(points: &[FitPoint]) -> Result<QuadraticFit> {
    if points.len() < 4 {
        return Err(Error::InvalidParameters(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }
    for p in points {
        if !(p.sigma.is_finite() && p.sigma > 0.0) || !p.x.is_finite() || !p.y.is_finite() {
            return Err(Error::InvalidParameters(format!("bad fit point {p:?}")));
        }
    }
    let mut normal = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for p in points {
        let g = Vector3::new(1.0, p.x, p.x * p.x);
        let w = 1.0 / (p.sigma * p.sigma);
        normal += w * g * g.transpose();
        rhs += w * p.y * g;
    }
    // Equilibrate before judging the conditioning.
    let d = Vector3::from_fn(|i, _| 1.0 / normal[(i, i)].sqrt());
    if d.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularFit);
    }
    let scaled = Matrix3::from_fn(|i, j| normal[(i, j)] * d[i] * d[j]);
    let eig = SymmetricEigen::new(scaled).eigenvalues;
    let (lo, hi) = (eig.min(), eig.max());
    if !(lo > 1e-13 * hi) {
        return Err(Error::SingularFit);
    }
    let inv_scaled = scaled.try_inverse().ok_or(Error::SingularFit)?;
    let cov = Matrix3::from_fn(|i, j| inv_scaled[(i, j)] * d[i] * d[j]);
    let c = cov * rhs;
    let chi_squared = points
        .iter()
        .map(|p| ((p.y - (c[0] + c[1] * p.x + c[2] * p.x * p.x)) / p.sigma).powi(2))
        .sum();
    let dof = points.len() - 3;
    let t = StudentsT::new(0.0, 1.0, dof as f64)
        .map_err(|e| Error::InvalidParameters(e.to_string()))?
        .inverse_cdf(0.5 + BAND_LEVEL / 2.0);
    let se = cov[(0, 0)].max(0.0).sqrt();
    Ok(QuadraticFit {
        coefficients: [c[0], c[1], c[2]],
        covariance: [
            [cov[(0, 0)], cov[(0, 1)], cov[(0, 2)]],
            [cov[(1, 0)], cov[(1, 1)], cov[(1, 2)]],
            [cov[(2, 0)], cov[(2, 1)], cov[(2, 2)]],
        ],
        intercept: c[0],
        intercept_stderr: se,
        dof,
        chi_squared,
        t_quantile: t,
        intercept_band: (c[0] - t * se, c[0] + t * se),
    })
}
