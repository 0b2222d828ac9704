//! Schur polynomials, specializations and the exact dual Schur measure
//! `mu(lambda) = s_lambda(X) s_lambda'(Y) / prod (1 + x_i y_j)` on partitions in an `n x k` box.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::density::DensitySpec;
use crate::error::{Error, Result};
use crate::partition::{HalfInt, Partition};

/// Positive variables `x_1..x_n` and `y_1..y_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Specialization {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl Specialization {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::InvalidArgument("specialization needs at least one x and one y".into()));
        }
        if let Some(v) = x.iter().chain(&y).find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidArgument(format!("variable {v} is not a positive finite number")));
        }
        Ok(Specialization { x, y })
    }

    /// `x_i = f(i / n)`, `y_j = g(j / k)`.
    pub fn from_density(spec: &DensitySpec, n: usize, k: usize) -> Result<Self> {
        let x = (1..=n).map(|i| spec.f.eval(i as f64 / n as f64)).collect();
        let y = (1..=k).map(|j| spec.g.eval(j as f64 / k as f64)).collect();
        Specialization::new(x, y)
    }

    pub fn uniform(n: usize, k: usize, x: f64, y: f64) -> Result<Self> {
        Specialization::new(vec![x; n], vec![y; k])
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn rows(&self) -> usize {
        self.x.len()
    }

    pub fn cols(&self) -> usize {
        self.y.len()
    }

    /// Swaps the roles of `X` and `Y`, which conjugates the measure.
    pub fn transpose(&self) -> Specialization {
        Specialization { x: self.y.clone(), y: self.x.clone() }
    }

    /// Bernoulli parameter `x_i y_j / (1 + x_i y_j)` of site `(i, j)`, 0-based.
    pub fn site_probability(&self, i: usize, j: usize) -> f64 {
        let w = self.x[i] * self.y[j];
        w / (1.0 + w)
    }
}

/// `h_0..=h_max` of the given variables.
pub fn complete_homogeneous(vars: &[f64], max: usize) -> Vec<f64> {
    let mut h = vec![0.0; max + 1];
    h[0] = 1.0;
    for &x in vars {
        for m in 1..=max {
            h[m] += x * h[m - 1];
        }
    }
    h
}

/// `e_0..=e_max` of the given variables.
pub fn elementary(vars: &[f64], max: usize) -> Vec<f64> {
    let mut e = vec![0.0; max + 1];
    e[0] = 1.0;
    for &x in vars {
        for m in (1..=max).rev() {
            e[m] += x * e[m - 1];
        }
    }
    e
}

/// `s_lambda(vars)`, zero if `lambda` has more rows than there are variables.
///
/// Uses whichever Jacobi-Trudi determinant is smaller: the `h` form of size
/// `l(lambda)` or the `e` form of size `lambda_1`. Variables are rescaled by their
/// maximum so the determinant entries stay moderate.
pub fn schur(lambda: &Partition, vars: &[f64]) -> f64 {
    if lambda.is_empty() {
        return 1.0;
    }
    if lambda.len() > vars.len() {
        return 0.0;
    }
    let top = vars.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let scaled: Vec<f64> = vars.iter().map(|v| v / top).collect();
    scaled_schur(lambda, &scaled).max(0.0) * top.powi(lambda.size() as i32)
}

/// Jacobi-Trudi on variables scaled into `(0, 1]`, in double-double arithmetic. The
/// determinant is badly conditioned relative to its entries once the variables spread
/// out, so both the entries and the elimination carry about 32 digits.
fn scaled_schur(lambda: &Partition, scaled: &[f64]) -> f64 {
    let deg = lambda.first() as usize + lambda.len();
    let (parts, seq) = if lambda.len() <= lambda.first() as usize {
        (lambda.parts().to_vec(), dd_complete(scaled, deg))
    } else {
        (lambda.conjugate().parts().to_vec(), dd_elementary(scaled, deg))
    };
    let l = parts.len();
    let at = |m: i64| if m < 0 || m as usize >= seq.len() { TwoFloat::from(0.0) } else { seq[m as usize] };
    let mut m: Vec<Vec<TwoFloat>> =
        (0..l).map(|i| (0..l).map(|j| at(parts[i] as i64 - i as i64 + j as i64)).collect()).collect();
    dd_determinant(&mut m).hi()
}

fn dd_complete(vars: &[f64], max: usize) -> Vec<TwoFloat> {
    let mut h = vec![TwoFloat::from(0.0); max + 1];
    h[0] = TwoFloat::from(1.0);
    for &x in vars {
        for m in 1..=max {
            h[m] = h[m] + h[m - 1] * x;
        }
    }
    h
}

fn dd_elementary(vars: &[f64], max: usize) -> Vec<TwoFloat> {
    let mut e = vec![TwoFloat::from(0.0); max + 1];
    e[0] = TwoFloat::from(1.0);
    for &x in vars {
        for m in (1..=max).rev() {
            e[m] = e[m] + e[m - 1] * x;
        }
    }
    e
}

/// `a / b` to double-double precision; the crate's own quotient is only good to f64.
fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q = a.hi() / b.hi();
    let r = a - b * q;
    TwoFloat::from(q) + r.hi() / b.hi()
}

/// Gaussian elimination with partial pivoting.
fn dd_determinant(m: &mut [Vec<TwoFloat>]) -> TwoFloat {
    let n = m.len();
    let mut det = TwoFloat::from(1.0);
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].hi().abs().total_cmp(&m[b][c].hi().abs())).unwrap();
        if m[p][c].hi() == 0.0 {
            return TwoFloat::from(0.0);
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        let pivot = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            let f = dd_div(row[c], pivot[c]);
            for (x, &v) in row.iter_mut().zip(&pivot).skip(c) {
                *x -= f * v;
            }
        }
    }
    det
}

/// `ln s_lambda(vars)`; `-inf` when it vanishes.
///
/// Handles variables of any magnitude. The determinant still cancels past double-double
/// precision for large shapes with many equal variables (tens of rows); the exact
/// measure is only enumerated in small boxes.
pub fn log_schur(lambda: &Partition, vars: &[f64]) -> f64 {
    if lambda.is_empty() {
        return 0.0;
    }
    if lambda.len() > vars.len() {
        return f64::NEG_INFINITY;
    }
    let top = vars.iter().cloned().fold(0.0, f64::max);
    let scaled: Vec<f64> = vars.iter().map(|v| v / top).collect();
    let det = scaled_schur(lambda, &scaled);
    if det <= 0.0 {
        return f64::NEG_INFINITY;
    }
    det.ln() + lambda.size() as f64 * top.ln()
}

/// `prod_{i,j} (1 + x_i y_j)`.
pub fn e_product(spec: &Specialization) -> f64 {
    spec.x.iter().map(|x| spec.y.iter().map(|y| 1.0 + x * y).product::<f64>()).product()
}

pub fn log_e_product(spec: &Specialization) -> f64 {
    spec.x.iter().map(|x| spec.y.iter().map(|y| (x * y).ln_1p()).sum::<f64>()).sum()
}

/// `mu(lambda)`; zero outside the box.
pub fn measure_weight(lambda: &Partition, spec: &Specialization) -> f64 {
    if !lambda.fits(spec.rows(), spec.cols()) {
        return 0.0;
    }
    let lx = log_schur(lambda, &spec.x);
    let ly = log_schur(&lambda.conjugate(), &spec.y);
    (lx + ly - log_e_product(spec)).exp()
}

/// Default enumeration cap, overridable through `DUAL_SCHUR_MAX_ENUM`.
pub fn default_enumeration_cap() -> u128 {
    std::env::var("DUAL_SCHUR_MAX_ENUM").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(1_000_000)
}

/// The full measure on the box, with probabilities normalized by `prod (1 + x_i y_j)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactDistribution {
    pub rows: usize,
    pub cols: usize,
    /// `(lambda, s_lambda(X) s_lambda'(Y), probability)`.
    pub entries: Vec<(Partition, f64, f64)>,
    /// `prod (1 + x_i y_j)`.
    pub normalization: f64,
}

pub fn enumerate_measure(spec: &Specialization) -> Result<ExactDistribution> {
    enumerate_measure_capped(spec, default_enumeration_cap())
}

pub fn enumerate_measure_capped(spec: &Specialization, cap: u128) -> Result<ExactDistribution> {
    let (n, k) = (spec.rows(), spec.cols());
    let count = Partition::count_in_box(n, k);
    if count > cap {
        return Err(Error::TooLarge { count, cap });
    }
    let norm = e_product(spec);
    let entries = Partition::all_in_box(n, k)
        .into_iter()
        .map(|l| {
            let w = schur(&l, &spec.x) * schur(&l.conjugate(), &spec.y);
            (l, w, w / norm)
        })
        .collect();
    Ok(ExactDistribution { rows: n, cols: k, entries, normalization: norm })
}

impl ExactDistribution {
    pub fn probability(&self, lambda: &Partition) -> f64 {
        self.entries.iter().find(|e| &e.0 == lambda).map_or(0.0, |e| e.2)
    }

    pub fn total_probability(&self) -> f64 {
        self.entries.iter().map(|e| e.2).sum()
    }

    pub fn as_map(&self) -> HashMap<Partition, f64> {
        self.entries.iter().map(|e| (e.0.clone(), e.2)).collect()
    }

    /// Probability that every half-integer in `positions` is occupied.
    pub fn correlation(&self, positions: &[HalfInt]) -> f64 {
        self.entries
            .iter()
            .filter(|(l, _, _)| positions.iter().all(|&a| l.occupies(a)))
            .map(|e| e.2)
            .sum()
    }

    /// Law of `lambda_1` as a vector indexed by its value.
    pub fn first_row_law(&self) -> Vec<f64> {
        let mut law = vec![0.0; self.cols + 1];
        for (l, _, p) in &self.entries {
            law[l.first() as usize] += p;
        }
        law
    }

    /// Expectation of a statistic.
    pub fn expect(&self, stat: impl Fn(&Partition) -> f64) -> f64 {
        self.entries.iter().map(|(l, _, p)| p * stat(l)).sum()
    }
}

/// `mu_{X,Y}(lambda) == mu_{Y,X}(lambda')` within `tol`.
pub fn transpose_symmetry_check(lambda: &Partition, spec: &Specialization, tol: f64) -> bool {
    let a = measure_weight(lambda, spec);
    let b = measure_weight(&lambda.conjugate(), &spec.transpose());
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}
