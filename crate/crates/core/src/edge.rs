//! Edge fluctuations: the scale `sigma`, the edge statistic, the Tracy-Widom GUE law as
//! a Fredholm determinant of the Airy kernel, and Kolmogorov-Smirnov comparison.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::airy::airy_kernel;
use crate::density::DensitySpec;
use crate::error::{Error, Result};
use crate::limit_shape::{residual_at_zero, zdz_derivative, Extended, SupportData};
use crate::partition::Partition;
use crate::quadrature::gauss_legendre;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Convex,
    Concave,
    Critical,
}

pub const CRITICAL_TOL: f64 = 1e-10;

/// Convex iff `int f < c int 1/g`, critical on equality within [`CRITICAL_TOL`].
pub fn branch(spec: &DensitySpec) -> Result<Branch> {
    let r = residual_at_zero(spec)?;
    Ok(if r.abs() < CRITICAL_TOL {
        Branch::Critical
    } else if r < 0.0 {
        Branch::Convex
    } else {
        Branch::Concave
    })
}

/// `lambda_1` in the convex and critical branches, `n - #{i : lambda_i = k}` in the concave one.
pub fn edge_statistic(lambda: &Partition, rows: usize, cols: usize, branch: Branch) -> Result<u32> {
    lambda.check_box(rows, cols)?;
    Ok(match branch {
        Branch::Convex | Branch::Critical => lambda.first(),
        Branch::Concave => rows as u32 - lambda.parts().iter().filter(|&&p| p as usize == cols).count() as u32,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sigma {
    Finite(f64),
    Infinite,
}

impl Sigma {
    pub fn finite(self) -> Option<f64> {
        match self {
            Sigma::Finite(s) => Some(s),
            Sigma::Infinite => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeScaling {
    pub z_plus: Extended,
    pub x_plus: f64,
    pub sigma: Sigma,
    pub branch: Branch,
}

/// `sigma = (2 / (zdz)^3 S(z_+))^{1/3}` with the third derivative reduced at the double
/// critical point to `int 2 f^2 z^2 / (1 - f z)^3 + 2 c g z^2 / (z + g)^3`.
pub fn sigma(spec: &DensitySpec, sup: &SupportData) -> Result<Sigma> {
    let Extended::Finite(z) = sup.z_plus else { return Ok(Sigma::Infinite) };
    if z == 0.0 {
        return Ok(Sigma::Infinite);
    }
    let c = spec.c;
    let d3 = spec.integrate_real(|f, g| {
        let a = 1.0 - f * z;
        let b = z + g;
        2.0 * f * f * z * z / (a * a * a) + 2.0 * c * g * z * z / (b * b * b)
    });
    match d3 {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(Sigma::Finite((2.0 / v).cbrt())),
        Ok(_) | Err(Error::DivergentIntegral(_)) => Ok(Sigma::Infinite),
        Err(e) => Err(e),
    }
}

/// `sigma^{-1} = 2^{-1/3} S'''(z_+)^{1/3} z_+` with the ordinary third derivative
/// `S''' = 2 int f^3/(1 - f z)^3 + 2 c int (1/z^3 - 1/(z + g)^3) - 2 x_+ / z^3`.
pub fn sigma_from_third_derivative(spec: &DensitySpec, sup: &SupportData) -> Result<Sigma> {
    let Extended::Finite(z) = sup.z_plus else { return Ok(Sigma::Infinite) };
    if z == 0.0 {
        return Ok(Sigma::Infinite);
    }
    let c = spec.c;
    let s3 = spec.integrate_real(|f, g| {
        let a = 1.0 - f * z;
        2.0 * f * f * f / (a * a * a) + 2.0 * c * (1.0 / (z * z * z) - 1.0 / ((z + g) * (z + g) * (z + g)))
    });
    match s3 {
        Ok(v) if v.is_finite() => {
            let s3 = v - 2.0 * sup.x_plus / (z * z * z);
            let inv = 2f64.powf(-1.0 / 3.0) * s3.cbrt() * z;
            if inv > 0.0 {
                Ok(Sigma::Finite(1.0 / inv))
            } else {
                Ok(Sigma::Infinite)
            }
        }
        Ok(_) | Err(Error::DivergentIntegral(_)) => Ok(Sigma::Infinite),
        Err(e) => Err(e),
    }
}

/// The constant-density closed form
/// `sigma = (alpha + 1) c^{1/6} / (alpha^{1/6} (sqrt c - sqrt alpha)^{2/3} (1 + sqrt(alpha c))^{2/3})`.
pub fn sigma_constant_closed_form(alpha: f64, c: f64) -> Sigma {
    let d = (c.sqrt() - alpha.sqrt()).abs();
    if d == 0.0 {
        return Sigma::Infinite;
    }
    Sigma::Finite(
        (alpha + 1.0) * c.powf(1.0 / 6.0)
            / (alpha.powf(1.0 / 6.0) * d.powf(2.0 / 3.0) * (1.0 + (alpha * c).sqrt()).powf(2.0 / 3.0)),
    )
}

pub fn edge_scaling(spec: &DensitySpec, sup: &SupportData) -> Result<EdgeScaling> {
    Ok(EdgeScaling { z_plus: sup.z_plus, x_plus: sup.x_plus, sigma: sigma(spec, sup)?, branch: branch(spec)? })
}

/// `(L - x_+ n) / (sigma^{-1} n^{1/3})`.
pub fn edge_rescale(values: &[f64], scaling: &EdgeScaling, n: usize) -> Result<Vec<f64>> {
    let Sigma::Finite(s) = scaling.sigma else { return Err(Error::CriticalRegime) };
    let nf = n as f64;
    let scale = nf.cbrt() / s;
    Ok(values.iter().map(|l| (l - scaling.x_plus * nf) / scale).collect())
}

/// Third derivative check value `(zdz)^3 S(z_+)` from the unreduced formula.
pub fn zdz3_at_edge(spec: &DensitySpec, sup: &SupportData) -> Result<f64> {
    let Extended::Finite(z) = sup.z_plus else { return Err(Error::CriticalRegime) };
    Ok(zdz_derivative(Complex64::new(z, 0.0), sup.x_plus, spec, 3)?.re)
}

/// Map from `[-1, 1]` onto `(s, inf)` or a truncation of it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VariableChange {
    /// `xi = s + scale tan(pi (1 + u) / 4)`.
    Tangent { scale: f64 },
    /// `xi = s + length (1 + u) / 2`, dropping `(s + length, inf)`.
    Truncated { length: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FredholmConfig {
    pub change: VariableChange,
    pub nodes: usize,
    pub max_nodes: usize,
    pub tol: f64,
}

impl Default for FredholmConfig {
    fn default() -> Self {
        FredholmConfig { change: VariableChange::Tangent { scale: 10.0 }, nodes: 16, max_nodes: 512, tol: 1e-10 }
    }
}

/// Quadrature points and weights on `(s, inf)`.
pub fn nystrom_points(s: f64, nodes: usize, change: VariableChange) -> (Vec<f64>, Vec<f64>) {
    let (u, w) = gauss_legendre(nodes);
    let q = std::f64::consts::FRAC_PI_4;
    u.iter()
        .zip(&w)
        .map(|(&u, &w)| match change {
            VariableChange::Tangent { scale } => {
                let a = q * (1.0 + u);
                (s + scale * a.tan(), w * scale * q / (a.cos() * a.cos()))
            }
            VariableChange::Truncated { length } => (s + 0.5 * length * (1.0 + u), 0.5 * length * w),
        })
        .unzip()
}

/// `sqrt(w_i) K_Ai(xi_i, xi_j) sqrt(w_j)`.
pub fn airy_nystrom_matrix(s: f64, nodes: usize, change: VariableChange) -> DMatrix<f64> {
    let (x, w) = nystrom_points(s, nodes, change);
    let sw: Vec<f64> = w.iter().map(|w| w.sqrt()).collect();
    DMatrix::from_fn(nodes, nodes, |i, j| sw[i] * airy_kernel(x[i], x[j]) * sw[j])
}

pub fn smallest_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

fn det_at(s: f64, nodes: usize, change: VariableChange) -> f64 {
    let k = airy_nystrom_matrix(s, nodes, change);
    (DMatrix::identity(nodes, nodes) - k).determinant()
}

/// `det(I - K_Ai)` on `L^2(s, inf)` with node doubling; returns the value and node count.
pub fn fredholm_det(s: f64, cfg: &FredholmConfig) -> Result<(f64, usize)> {
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!("s = {s}")));
    }
    let mut n = cfg.nodes;
    let mut prev = det_at(s, n, cfg.change);
    while 2 * n <= cfg.max_nodes {
        n *= 2;
        let cur = det_at(s, n, cfg.change);
        if (cur - prev).abs() < cfg.tol {
            return Ok((cur, n));
        }
        prev = cur;
    }
    Err(Error::NoConvergence { what: format!("Fredholm determinant at s = {s}"), size: n })
}

/// `F_GUE(s)`.
pub fn tracy_widom_cdf(s: f64) -> Result<f64> {
    tracy_widom_cdf_with(s, &FredholmConfig::default())
}

pub fn tracy_widom_cdf_with(s: f64, cfg: &FredholmConfig) -> Result<f64> {
    Ok(fredholm_det(s, cfg)?.0.clamp(0.0, 1.0))
}

/// `F_GUE` tabulated on a uniform grid, with linear interpolation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwTable {
    pub s: Vec<f64>,
    pub cdf: Vec<f64>,
}

impl TwTable {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        Self::with_config(lo, hi, step, &FredholmConfig::default())
    }

    pub fn with_config(lo: f64, hi: f64, step: f64, cfg: &FredholmConfig) -> Result<Self> {
        if !(step > 0.0 && hi > lo) {
            return Err(Error::InvalidArgument(format!("table [{lo}, {hi}] step {step}")));
        }
        use rayon::prelude::*;
        let n = ((hi - lo) / step).round() as usize;
        let s: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        let mut cdf = s.par_iter().map(|&x| tracy_widom_cdf_with(x, cfg)).collect::<Result<Vec<_>>>()?;
        // Enforce monotonicity against round-off at the level of the tolerance.
        for i in 1..cdf.len() {
            if cdf[i] < cdf[i - 1] {
                cdf[i] = cdf[i - 1];
            }
        }
        Ok(TwTable { s, cdf })
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (s, f) = (&self.s, &self.cdf);
        if x < s[0] {
            return 0.0;
        }
        if x >= s[s.len() - 1] {
            return 1.0;
        }
        let i = s.partition_point(|&v| v <= x).max(1);
        f[i - 1] + (f[i] - f[i - 1]) * (x - s[i - 1]) / (s[i] - s[i - 1])
    }

    /// Smallest tabulated-interpolant `x` with `cdf(x) >= u`.
    pub fn quantile(&self, u: f64) -> f64 {
        let (s, f) = (&self.s, &self.cdf);
        let i = f.partition_point(|&v| v < u);
        if i == 0 {
            return s[0];
        }
        if i >= f.len() {
            return s[s.len() - 1];
        }
        let (a, b) = (f[i - 1], f[i]);
        if b == a {
            return s[i];
        }
        s[i - 1] + (s[i] - s[i - 1]) * (u - a) / (b - a)
    }

    /// `int s dF(s)` over the table, by parts: `s_hi F_hi - s_lo F_lo - int F`.
    pub fn mean(&self) -> f64 {
        let (s, f) = (&self.s, &self.cdf);
        let last = s.len() - 1;
        let integral: f64 = (1..s.len()).map(|i| 0.5 * (s[i] - s[i - 1]) * (f[i] + f[i - 1])).sum();
        s[last] * f[last] - s[0] * f[0] - integral
    }
}

/// `sup_x |F_emp(x) - cdf(x)|`, checking both one-sided limits at each sample.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_statistic_examples() {
        let l = Partition::new(vec![5, 3, 1]).unwrap();
        assert_eq!(edge_statistic(&l, 3, 6, Branch::Convex).unwrap(), 5);
        let l = Partition::new(vec![4, 4, 2]).unwrap();
        assert_eq!(edge_statistic(&l, 3, 4, Branch::Concave).unwrap(), 1);
        assert_eq!(edge_statistic(&Partition::empty(), 3, 4, Branch::Concave).unwrap(), 3);
        assert!(edge_statistic(&l, 2, 4, Branch::Concave).is_err());
    }

    #[test]
    fn closed_form_sigma_example() {
        let s = sigma_constant_closed_form(1.0, 4.0).finite().unwrap();
        assert!((s - 2.0 * 4f64.powf(1.0 / 6.0) / 3f64.powf(2.0 / 3.0)).abs() < 1e-14);
        assert_eq!(sigma_constant_closed_form(2.0, 2.0), Sigma::Infinite);
    }

    #[test]
    fn ks_of_point_mass() {
        let cdf = |x: f64| (0.5 + 0.5 * x.tanh()).clamp(0.0, 1.0);
        let d = ks_distance(&[0.3; 10], cdf).unwrap();
        assert!((d - cdf(0.3).max(1.0 - cdf(0.3))).abs() < 1e-15);
        assert!(matches!(ks_distance(&[], cdf), Err(Error::EmptyInput)));
    }
}
