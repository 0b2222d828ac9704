//! The finite correlation kernel of the Maya point process under the dual Schur measure.
//!
//! With the symbol `F(z) = prod_i (1 - x_i z)^{-1} prod_j (1 + y_j / z)^{-1}` and
//! `G(z, w) = F(z) z^{-m-1/2} F(w)^{-1} w^{m'-1/2}`,
//!
//! `K(m, m') = delta_{m m'} + oint oint [G(z, w) - G(w, w)] / (z - w) dz dw / (2 pi i)^2`
//!
//! where the `z`-contour encloses `0` and every `-y_j` but no `1/x_i`, and the
//! `w`-contour encloses `0`. The difference quotient is regular at `z = w`, so the two
//! circles may cross; when they are nested (`|w| < |z|`) the subtracted term cancels
//! the delta and the usual nested double integral remains. Integrals are evaluated by
//! the trapezoidal rule on circles, doubling the node count until it settles.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::HalfInt;
use crate::schur::Specialization;

const POLE_EPS: f64 = 1e-12;

/// `ln F(z)`, erroring on a pole.
pub fn log_symbol(z: Complex64, spec: &Specialization) -> Result<Complex64> {
    if z.norm() < POLE_EPS {
        return Err(Error::PoleHit(format!("{z}")));
    }
    let mut s = Complex64::new(0.0, 0.0);
    for &x in spec.x() {
        let a = 1.0 - x * z;
        if a.norm() < POLE_EPS {
            return Err(Error::PoleHit(format!("{z}")));
        }
        s -= a.ln();
    }
    for &y in spec.y() {
        let b = z + y;
        if b.norm() < POLE_EPS {
            return Err(Error::PoleHit(format!("{z}")));
        }
        s -= b.ln() - z.ln();
    }
    Ok(s)
}

/// `F(z)`.
pub fn symbol(z: Complex64, spec: &Specialization) -> Result<Complex64> {
    log_symbol(z, spec).map(Complex64::exp)
}

/// `F'(z) / F(z)`.
fn log_symbol_derivative(z: Complex64, spec: &Specialization) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for &x in spec.x() {
        s += x / (1.0 - x * z);
    }
    for &y in spec.y() {
        s += y / (z * (z + y));
    }
    s
}

/// A circle centred on the real axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: f64,
    pub radius: f64,
}

impl Circle {
    pub fn point(&self, theta: f64) -> Complex64 {
        Complex64::new(self.center, 0.0) + Complex64::from_polar(self.radius, theta)
    }

    /// Signed distance to the circle, positive outside.
    fn gap(&self, p: f64) -> f64 {
        (p - self.center).abs() - self.radius
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourConfig {
    pub z: Circle,
    pub w: Circle,
    /// Initial trapezoid nodes per circle.
    pub nodes: usize,
    pub max_nodes: usize,
    /// Stop when successive refinements differ by less than `tol * max(1, |K|)`.
    pub tol: f64,
}

impl ContourConfig {
    pub const DEFAULT_NODES: usize = 64;
    pub const DEFAULT_MAX_NODES: usize = 4096;
    pub const DEFAULT_TOL: f64 = 1e-12;

    fn with_circles(z: Circle, w: Circle) -> Self {
        ContourConfig {
            z,
            w,
            nodes: Self::DEFAULT_NODES,
            max_nodes: Self::DEFAULT_MAX_NODES,
            tol: Self::DEFAULT_TOL,
        }
    }

    /// Default contours.
    ///
    /// When `max x * max y < 1` these are the centred circles of radius
    /// `sqrt(max y / max x)` for `z` and half of it for `w`, which are nested with no
    /// crossing. Otherwise the `z`-circle is shifted left so that it still encloses
    /// `[-max y, 0]` and stays clear of `1 / max x`, and the `w`-circle is a small
    /// circle around `0`; the two then cross, which the difference quotient allows.
    pub fn for_spec(spec: &Specialization) -> Result<Self> {
        let xm = spec.x().iter().cloned().fold(0.0, f64::max);
        let ym = spec.y().iter().cloned().fold(0.0, f64::max);
        let cfg = if xm * ym < 1.0 {
            let r = (ym / xm).sqrt();
            Self::with_circles(Circle { center: 0.0, radius: r }, Circle { center: 0.0, radius: 0.5 * r })
        } else {
            let p = 1.0 / xm;
            let (left, right) = (-(ym + p), 0.5 * p);
            Self::with_circles(
                Circle { center: 0.5 * (left + right), radius: 0.5 * (right - left) },
                Circle { center: 0.0, radius: 0.25 * p },
            )
        };
        cfg.validate(spec)?;
        Ok(cfg)
    }

    /// Contours through the complex saddle point of `F(z) z^{-n t}`, suited to
    /// positions near `n t` with `n` the number of rows.
    ///
    /// Both circles belong to the pencil through the saddle and its conjugate; the
    /// centres are chosen to keep `|F(z) z^{-nt}|` (resp. its inverse on the
    /// `w`-circle) below its saddle value. Falls back to [`ContourConfig::for_spec`]
    /// when `t` lies outside the bulk and no complex saddle exists.
    pub fn saddle_adapted(spec: &Specialization, t: f64) -> Result<Self> {
        let m = spec.rows() as f64 * t;
        let Some(zc) = finite_saddle(spec, m) else {
            return Self::for_spec(spec);
        };
        let action = |z: Complex64| log_symbol(z, spec).map(|l| (l - m * z.ln()).re);
        let sc = action(zc)?;
        let thetas: Vec<f64> = (0..256).map(|i| std::f64::consts::TAU * (i as f64 + 0.5) / 256.0).collect();
        let poles: Vec<f64> =
            spec.x().iter().map(|x| 1.0 / x).chain(spec.y().iter().map(|y| -y)).chain([0.0]).collect();
        let mut centers: Vec<f64> = (-40..=40)
            .map(|i| {
                let beta = i as f64 / 41.0 * std::f64::consts::FRAC_PI_2;
                zc.re - zc.im * beta.tan()
            })
            .collect();
        centers.push(0.0);
        let mut best_z: Option<(f64, f64, Circle)> = None;
        let mut best_w: Option<(f64, f64, Circle)> = None;
        let n_scale = 1e-9 * (1.0 + spec.rows() as f64);
        let better = |cand: (f64, f64), cur: &Option<(f64, f64, Circle)>| match cur {
            None => true,
            Some((o, c, _)) => cand.0 < o - n_scale || (cand.0 <= o + n_scale && cand.1 > *c),
        };
        for &a in &centers {
            let c = Circle { center: a, radius: (zc - a).norm() };
            let clearance = poles.iter().map(|&p| c.gap(p).abs()).fold(f64::INFINITY, f64::min) / c.radius;
            if clearance < 1e-6 {
                continue;
            }
            let vals: Option<Vec<f64>> = thetas.iter().map(|&th| action(c.point(th)).ok()).collect();
            let Some(vals) = vals else { continue };
            if z_admissible(&c, spec) {
                let obj = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - sc;
                if better((obj, clearance), &best_z) {
                    best_z = Some((obj, clearance, c));
                }
            }
            if c.gap(0.0) < 0.0 {
                let obj = sc - vals.iter().cloned().fold(f64::INFINITY, f64::min);
                if better((obj, clearance), &best_w) {
                    best_w = Some((obj, clearance, c));
                }
            }
        }
        match (best_z, best_w) {
            (Some((_, _, z)), Some((_, _, w))) => {
                let cfg = Self::with_circles(z, w);
                cfg.validate(spec)?;
                Ok(cfg)
            }
            _ => Self::for_spec(spec),
        }
    }

    pub fn validate(&self, spec: &Specialization) -> Result<()> {
        if !(self.z.radius > 0.0 && self.w.radius > 0.0 && self.z.radius.is_finite() && self.w.radius.is_finite()) {
            return Err(Error::ContourInfeasible("radii must be positive and finite".into()));
        }
        if self.nodes < 4 || self.max_nodes < self.nodes || !(self.tol > 0.0) {
            return Err(Error::InvalidArgument("nodes, max_nodes or tol out of range".into()));
        }
        if !z_admissible(&self.z, spec) {
            return Err(Error::ContourInfeasible(format!(
                "z-circle {:?} must enclose 0 and every -y_j and exclude every 1/x_i",
                self.z
            )));
        }
        if self.w.gap(0.0) >= 0.0 {
            return Err(Error::ContourInfeasible(format!("w-circle {:?} must enclose 0", self.w)));
        }
        Ok(())
    }
}

fn z_admissible(c: &Circle, spec: &Specialization) -> bool {
    c.gap(0.0) < 0.0 && spec.y().iter().all(|&y| c.gap(-y) < 0.0) && spec.x().iter().all(|&x| c.gap(1.0 / x) > 0.0)
}

/// Upper half plane root of `z F'(z)/F(z) = m`, if any.
pub fn finite_saddle(spec: &Specialization, m: f64) -> Option<Complex64> {
    let phi = |z: Complex64| {
        let mut v = Complex64::new(-m, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for &x in spec.x() {
            let a = 1.0 - x * z;
            v += x * z / a;
            d += x / (a * a);
        }
        for &y in spec.y() {
            let b = z + y;
            v += y / b;
            d -= y / (b * b);
        }
        (v, d)
    };
    let xm = spec.x().iter().cloned().fold(0.0, f64::max);
    let ym = spec.y().iter().cloned().fold(0.0, f64::max);
    let scale = (ym / xm).sqrt();
    let total = (spec.rows() + spec.cols()) as f64;
    for &r in &[1.0, 0.5, 2.0, 0.2, 5.0, 0.05, 20.0] {
        for &ang in &[0.5, 0.25, 0.75, 0.1, 0.9] {
            let mut z = Complex64::from_polar(r * scale, ang * std::f64::consts::PI);
            for _ in 0..200 {
                let (v, d) = phi(z);
                let mut step = v / d;
                // Damping keeps iterates in the upper half plane.
                while (z - step).im <= 0.0 && step.norm() > 1e-300 {
                    step *= 0.5;
                }
                z -= step;
                if step.norm() < 1e-15 * z.norm() {
                    break;
                }
            }
            let (v, _) = phi(z);
            if z.im > 1e-9 * z.norm() && v.norm() < 1e-9 * total && z.re.is_finite() {
                return Some(z);
            }
        }
    }
    None
}

/// A kernel value with its quadrature bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub m: HalfInt,
    pub m_prime: HalfInt,
    pub value: f64,
    pub nodes: usize,
    pub est_error: f64,
}

struct Nodes {
    z: Vec<Complex64>,
    dz: Vec<Complex64>,
    log_fz: Vec<Complex64>,
    log_z: Vec<Complex64>,
    w: Vec<Complex64>,
    dw: Vec<Complex64>,
    log_fw: Vec<Complex64>,
    log_w: Vec<Complex64>,
    dlog_fw: Vec<Complex64>,
}

impl Nodes {
    fn new(spec: &Specialization, cfg: &ContourConfig, n: usize) -> Result<Self> {
        let th = |i: usize| std::f64::consts::TAU * (i as f64 + 0.5) / n as f64;
        let z: Vec<Complex64> = (0..n).map(|i| cfg.z.point(th(i))).collect();
        // w nodes are offset by a quarter step so they do not sit on the z nodes.
        let w: Vec<Complex64> = (0..n).map(|i| cfg.w.point(th(i) + 0.25 * std::f64::consts::TAU / n as f64)).collect();
        let log_fz = z.iter().map(|&z| log_symbol(z, spec)).collect::<Result<Vec<_>>>()?;
        let log_fw = w.iter().map(|&w| log_symbol(w, spec)).collect::<Result<Vec<_>>>()?;
        Ok(Nodes {
            dz: z.iter().map(|&p| (p - cfg.z.center) / n as f64).collect(),
            dw: w.iter().map(|&p| (p - cfg.w.center) / n as f64).collect(),
            log_z: z.iter().map(|z| z.ln()).collect(),
            log_w: w.iter().map(|w| w.ln()).collect(),
            dlog_fw: w.iter().map(|&w| log_symbol_derivative(w, spec)).collect(),
            z,
            w,
            log_fz,
            log_fw,
        })
    }

    /// The kernel value and the absolute sum of the quadrature terms, which sets the
    /// roundoff floor of the value.
    fn kernel(&self, m: HalfInt, mp: HalfInt) -> Result<(f64, f64)> {
        // z^{-m-1/2} and w^{m'-1/2} have integer exponents, so principal logs are safe.
        let ez = -(m.floor() + 1) as f64;
        let ew = mp.floor() as f64;
        let a: Vec<Complex64> = self.log_fz.iter().zip(&self.log_z).map(|(lf, lz)| (lf + ez * lz).exp()).collect();
        let mut total = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for b in 0..self.w.len() {
            let w = self.w[b];
            let bb = (-self.log_fw[b] + ew * self.log_w[b]).exp();
            let diag = ((ew + ez) * self.log_w[b]).exp();
            let mut inner = Complex64::new(0.0, 0.0);
            let mut inner_mass = 0.0;
            for (ai, (&z, &dz)) in a.iter().zip(self.z.iter().zip(&self.dz)) {
                let d = z - w;
                let q = if d.norm() < 1e-9 * (1.0 + w.norm()) {
                    diag * (self.dlog_fw[b] + ez / w)
                } else {
                    inner_mass += (ai * bb).l1_norm() / d.l1_norm() + diag.l1_norm() / d.l1_norm();
                    (ai * bb - diag) / d
                };
                inner += q * dz;
            }
            total += inner * self.dw[b];
            mass += inner_mass * (self.dz[0].l1_norm() * self.dw[b].l1_norm());
        }
        if !total.re.is_finite() {
            return Err(Error::NoConvergence {
                what: "kernel integrand overflows; use saddle-adapted contours".into(),
                size: self.z.len(),
            });
        }
        Ok((total.re + if m == mp { 1.0 } else { 0.0 }, mass))
    }
}

/// `K(m, m')` with node doubling from `cfg.nodes` up to `cfg.max_nodes`.
pub fn correlation_kernel(m: HalfInt, mp: HalfInt, spec: &Specialization, cfg: &ContourConfig) -> Result<KernelValue> {
    let t = kernel_table(&[(m, mp)], spec, cfg)?;
    Ok(t.entries[0])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelTable {
    pub entries: Vec<KernelValue>,
}

/// Kernel values at every requested pair, refined together until all have settled.
pub fn kernel_table(pairs: &[(HalfInt, HalfInt)], spec: &Specialization, cfg: &ContourConfig) -> Result<KernelTable> {
    cfg.validate(spec)?;
    let mut n = cfg.nodes;
    let mut prev: Option<Vec<f64>> = None;
    loop {
        let nodes = Nodes::new(spec, cfg, n)?;
        let cur = pairs.iter().map(|&(a, b)| nodes.kernel(a, b)).collect::<Result<Vec<_>>>()?;
        if let Some(p) = &prev {
            let errs: Vec<f64> = p.iter().zip(&cur).map(|(a, b)| (a - b.0).abs()).collect();
            // Settled: below the tolerance, or down at the roundoff floor of the sum.
            let settled = |e: f64, (v, mass): (f64, f64)| e < cfg.tol * v.abs().max(1.0) || e < 64.0 * f64::EPSILON * mass;
            if errs.iter().zip(&cur).all(|(e, v)| settled(*e, *v)) {
                let entries = pairs
                    .iter()
                    .zip(cur.iter().zip(&errs))
                    .map(|(&(m, m_prime), (&(value, _), &est_error))| KernelValue { m, m_prime, value, nodes: n, est_error })
                    .collect();
                return Ok(KernelTable { entries });
            }
        }
        if 2 * n > cfg.max_nodes {
            return Err(Error::NoConvergence { what: "kernel trapezoid rule".into(), size: n });
        }
        prev = Some(cur.iter().map(|c| c.0).collect());
        n *= 2;
    }
}

/// `[K(a_i, a_j)]` over the given positions.
pub fn kernel_matrix(positions: &[HalfInt], spec: &Specialization, cfg: &ContourConfig) -> Result<DMatrix<f64>> {
    let pairs: Vec<(HalfInt, HalfInt)> =
        positions.iter().flat_map(|&a| positions.iter().map(move |&b| (a, b))).collect();
    let t = kernel_table(&pairs, spec, cfg)?;
    let p = positions.len();
    Ok(DMatrix::from_fn(p, p, |i, j| t.entries[i * p + j].value))
}

/// Probability that every position is occupied, `det [K(a_i, a_j)]`.
pub fn correlation_probability(positions: &[HalfInt], spec: &Specialization, cfg: &ContourConfig) -> Result<f64> {
    if positions.is_empty() {
        return Ok(1.0);
    }
    Ok(kernel_matrix(positions, spec, cfg)?.determinant())
}
