//! The critical full-support regime `int f = c int 1/g`, where the right edge of the
//! support reaches the corner `x_+ = c` and `lambda_1 - k` has discrete fluctuations.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::density::DensitySpec;
use crate::edge::CRITICAL_TOL;
use crate::error::{Error, Result};
use crate::partition::HalfInt;
use crate::sampler::{monte_carlo, Statistic};
use crate::schur::Specialization;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalData {
    /// `int f - c int 1/g`.
    pub residual: f64,
    /// `S''(0) = int f^2 + c int g^{-2}`.
    pub s2: f64,
}

impl CriticalData {
    pub fn is_critical(&self) -> bool {
        self.residual.abs() < CRITICAL_TOL
    }
}

pub fn critical_residual(spec: &DensitySpec) -> Result<CriticalData> {
    let f1 = spec.integrate_real(|f, _| f)?;
    let inv_g = spec.integrate_real(|_, g| 1.0 / g)?;
    let f2 = spec.integrate_real(|f, _| f * f)?;
    let inv_g2 = spec.integrate_real(|_, g| 1.0 / (g * g))?;
    if !(inv_g.is_finite() && inv_g2.is_finite()) {
        return Err(Error::DivergentIntegral("1/g is not integrable".into()));
    }
    let d = CriticalData { residual: f1 - spec.c * inv_g, s2: f2 + spec.c * inv_g2 };
    if !d.is_critical() && d.residual.abs() < 1e-3 {
        log::warn!("density is near-critical (residual {:e}); edge asymptotics converge slowly", d.residual);
    }
    Ok(d)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `Gamma(m + 1/2)` for any integer `m`, exactly in terms of factorials and `sqrt(pi)`.
pub fn gamma_half_integer(m: i64) -> f64 {
    let sp = std::f64::consts::PI.sqrt();
    if m >= 0 {
        let m = m as u32;
        sp * factorial(2 * m) / (4f64.powi(m as i32) * factorial(m))
    } else {
        let m = (-m) as u32;
        (-4f64).powi(m as i32) * factorial(m) * sp / factorial(2 * m)
    }
}

/// Entry `(i, j)` of the limiting corner kernel on `{0, .., delta - 1}`.
///
/// `sum_{l=0}^{floor((delta - j - 1)/2)}` of
/// `sin(pi (j - i)/2) Gamma(l + (j - i)/2) / (2 pi l!)` when `l + (j - i)/2` is not a
/// nonpositive integer, and `(-1)^l / (2 l! ((i - j)/2 - l)!)` when it is.
pub fn k_crit(i: u32, j: u32, delta: u32) -> f64 {
    assert!(i < delta && j < delta, "indices must lie in 0..delta");
    let d2 = j as i64 - i as i64; // twice (j - i)/2
    let upper = (delta as i64 - j as i64 - 1).div_euclid(2);
    let mut s = 0.0;
    for l in 0..=upper {
        let twice = 2 * l + d2; // twice l + (j - i)/2
        if twice % 2 == 0 {
            let v = twice / 2;
            if v <= 0 {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                s += 0.5 * sign / (factorial(l as u32) * factorial((-v) as u32));
            }
            // Positive integer arguments meet sin(pi (j - i)/2) = 0.
        } else {
            let sin = (std::f64::consts::PI * d2 as f64 / 2.0).sin().round();
            s += sin * gamma_half_integer((twice - 1) / 2) / (2.0 * std::f64::consts::PI * factorial(l as u32));
        }
    }
    s
}

pub fn k_crit_matrix(delta: u32) -> DMatrix<f64> {
    DMatrix::from_fn(delta as usize, delta as usize, |i, j| k_crit(i as u32, j as u32, delta))
}

/// `det (delta_{ij} - K_crit(i, j))` over `0..delta`: the limit of `P(lambda_1 - n c <= -delta)`.
pub fn gap_probability(delta: u32) -> Result<f64> {
    if delta == 0 {
        return Err(Error::InvalidArgument("delta must be at least 1".into()));
    }
    let d = delta as usize;
    Ok((DMatrix::identity(d, d) - k_crit_matrix(delta)).determinant())
}

/// `J(r) = (1/2 pi i) int e^{a z^2} z^r dz` up the imaginary axis, passing `0` on the right.
fn hankel_j(r: i64, a: f64) -> f64 {
    if r >= 0 {
        if r % 2 == 1 {
            return 0.0;
        }
        let mut j = 1.0 / (2.0 * (std::f64::consts::PI * a).sqrt());
        let mut m = 2;
        while m <= r {
            j *= -((m - 1) as f64) / (2.0 * a);
            m += 2;
        }
        j
    } else if r % 2 != 0 {
        let l = ((-1 - r) / 2) as u32;
        a.powi(l as i32) / (2.0 * factorial(l))
    } else {
        // Downward recursion J(r) = -2 a J(r + 2) / (r + 1) from J(0).
        let mut j = hankel_j(0, a);
        let mut q = -2;
        while q >= r {
            j *= -2.0 * a / (q + 1) as f64;
            q -= 2;
        }
        j
    }
}

/// Finite-`n` corner kernel `K_n(h, h')` for half-integers `h, h' >= 1/2` measured
/// down from the corner `k + 1/2`:
/// `sum_{l=0}^{floor(h'/2 - 1/4)} (-a)^l / l! J(h - h' + 2l - 1)` with `a = n S''(0) / 2`.
///
/// Off the diagonal it depends on `n` through `a^{-(h - h')/2}`, a conjugation that
/// leaves determinants unchanged.
pub fn finite_corner_kernel(h: HalfInt, hp: HalfInt, n: usize, spec: &DensitySpec) -> Result<f64> {
    let data = critical_residual(spec)?;
    if !data.is_critical() {
        return Err(Error::NotCritical { residual: data.residual });
    }
    if h.floor() < 0 || hp.floor() < 0 {
        return Err(Error::InvalidArgument("corner positions must be at least 1/2".into()));
    }
    let a = n as f64 * data.s2 / 2.0;
    let upper = hp.floor() / 2;
    let mut s = 0.0;
    let mut coef = 1.0;
    for l in 0..=upper {
        if l > 0 {
            coef *= -a / l as f64;
        }
        s += coef * hankel_j(h.diff(hp) + 2 * l - 1, a);
    }
    Ok(s)
}

/// `det (delta - K_n)` over the corner positions `1/2, .., delta - 1/2`.
pub fn corner_gap_determinant(delta: u32, n: usize, spec: &DensitySpec) -> Result<f64> {
    let d = delta as usize;
    let pos: Vec<HalfInt> = (0..d as i64).map(HalfInt::from_floor).collect();
    let mut m = DMatrix::identity(d, d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] -= finite_corner_kernel(pos[i], pos[j], n, spec)?;
        }
    }
    Ok(m.determinant())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapEstimate {
    pub delta: u32,
    pub theory: f64,
    pub empirical: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Monte Carlo frequencies of `lambda_1 <= k - delta` for each `delta`, with binomial
/// standard errors, from one batch of samples.
pub fn critical_gap_mc(
    spec: &DensitySpec,
    n: usize,
    k: usize,
    deltas: &[u32],
    samples: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<GapEstimate>> {
    let data = critical_residual(spec)?;
    if !data.is_critical() {
        return Err(Error::NotCritical { residual: data.residual });
    }
    if ((spec.c * n as f64) - k as f64).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("k = {k} must equal c n = {}", spec.c * n as f64)));
    }
    let x = Specialization::from_density(spec, n, k)?;
    let batch = monte_carlo(&x, samples, Statistic::FirstRow, seed, workers)?;
    let vals = batch.values.scalars().expect("first row is scalar");
    deltas
        .iter()
        .map(|&d| {
            let hits = vals.iter().filter(|&&v| v + d as u64 <= k as u64).count();
            let p = hits as f64 / samples as f64;
            Ok(GapEstimate {
                delta: d,
                theory: gap_probability(d)?,
                empirical: p,
                stderr: (p * (1.0 - p) / samples as f64).sqrt(),
                samples,
            })
        })
        .collect()
}
