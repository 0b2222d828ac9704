//! Continuum action, its critical points, the support `[x_-, x_+]`, the density `rho`
//! and the limit shape `Omega`.
//!
//! `S(z) = -int ln(1 - f z) - c int ln(1 + g / z) - t ln z` with the integrals over `[0, 1]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::{Density, DensitySpec, QUAD_TOL};
use crate::error::{Error, Result};
use crate::partition::HalfInt;

fn on_singular_set(z: Complex64, spec: &DensitySpec) -> bool {
    if z.norm() == 0.0 {
        return true;
    }
    if z.im.abs() > 1e-14 * z.norm() {
        return false;
    }
    let x = z.re;
    let (fl, fh) = spec.f.range();
    let (gl, gh) = spec.g.range();
    let in_f = x > 0.0 && fh > 0.0 && x >= 1.0 / fh && (fl == 0.0 || x <= 1.0 / fl);
    let in_g = x < 0.0 && -x >= gl && -x <= gh;
    in_f || in_g
}

fn check_point(z: Complex64, spec: &DensitySpec) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) || on_singular_set(z, spec) {
        return Err(Error::SingularPoint(format!("{z}")));
    }
    Ok(())
}

pub fn action(z: Complex64, t: f64, spec: &DensitySpec) -> Result<Complex64> {
    check_point(z, spec)?;
    let a = spec.integrate_fg(|f, _| -(1.0 - f * z).ln())?;
    let b = spec.integrate_fg(|_, g| -(1.0 + g / z).ln())?;
    Ok(a + spec.c * b - t * z.ln())
}

/// `(z d/dz)^order S(z)` from the explicit integrals. Order 1 includes `-t`; the
/// higher orders do not depend on `t`.
pub fn zdz_derivative(z: Complex64, t: f64, spec: &DensitySpec, order: u8) -> Result<Complex64> {
    check_point(z, spec)?;
    let c = spec.c;
    match order {
        1 => Ok(spec.integrate_fg(|f, g| f * z / (1.0 - f * z) + c * g / (z + g))? - t),
        2 => spec.integrate_fg(|f, g| {
            let a = 1.0 - f * z;
            let b = z + g;
            f * z / (a * a) - c * g * z / (b * b)
        }),
        3 => spec.integrate_fg(|f, g| {
            let a = 1.0 - f * z;
            let b = z + g;
            f * z / (a * a) + 2.0 * f * f * z * z / (a * a * a) + c * (-g * z / (b * b) + 2.0 * g * z * z / (b * b * b))
        }),
        _ => Err(Error::InvalidArgument(format!("derivative order {order} not in 1..=3"))),
    }
}

/// `(zdz S, d/dz zdz S)` at once.
fn zdz1_with_slope(z: Complex64, t: f64, spec: &DensitySpec) -> Result<(Complex64, Complex64)> {
    let v = zdz_derivative(z, t, spec, 1)?;
    let d = zdz_derivative(z, t, spec, 2)? / z;
    Ok((v, d))
}

/// Damped Newton for `zdz S(z) = 0` from one starting point; `None` if it leaves the
/// upper half plane for good or stalls.
fn newton_uhp(t: f64, spec: &DensitySpec, z0: Complex64) -> Option<Complex64> {
    let mut z = z0;
    let (mut v, mut d) = zdz1_with_slope(z, t, spec).ok()?;
    for _ in 0..200 {
        if v.norm() < 1e-14 {
            break;
        }
        let step = v / d;
        let mut lam = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let cand = z - step * lam;
            if cand.im > 0.0 {
                if let Ok((cv, cd)) = zdz1_with_slope(cand, t, spec) {
                    if cv.norm() < v.norm() {
                        z = cand;
                        v = cv;
                        d = cd;
                        moved = true;
                        break;
                    }
                }
            }
            lam *= 0.5;
        }
        if !moved {
            break;
        }
    }
    // Off the support the roots are real; Newton may creep up to one from above.
    (v.norm() < 1e-10 && z.im > 1e-10 * z.norm()).then_some(z)
}

/// The root of `zdz S(z) = 0` with `Im z > 0`.
pub fn critical_point(t: f64, spec: &DensitySpec) -> Result<Complex64> {
    critical_point_near(t, spec, None)
}

/// As [`critical_point`], trying `guess` first.
pub fn critical_point_near(t: f64, spec: &DensitySpec, guess: Option<Complex64>) -> Result<Complex64> {
    if let Some(z) = guess.and_then(|g| newton_uhp(t, spec, g)) {
        return Ok(z);
    }
    let scale = {
        let f1 = spec.integrate_real(|f, _| f).unwrap_or(1.0).max(1e-12);
        let g1 = spec.integrate_real(|_, g| g).unwrap_or(1.0).max(1e-12);
        (g1 / f1).sqrt()
    };
    for &r in &[1.0, 0.3, 3.0, 0.1, 10.0, 0.03, 30.0, 0.01, 100.0, 1e-3, 1e3] {
        for &a in &[0.5, 0.25, 0.75, 0.1, 0.9, 0.03, 0.97] {
            let z0 = Complex64::from_polar(r * scale, a * std::f64::consts::PI);
            if let Some(z) = newton_uhp(t, spec, z0) {
                return Ok(z);
            }
        }
    }
    Err(Error::NoRoot { t })
}

/// A real number or the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinity,
}

impl Serialize for Extended {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => s.serialize_f64(*v),
            Extended::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Extended::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Extended::Infinity),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {s}"))),
        }
    }
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }
}

/// Support of the limit density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportData {
    pub z_minus: Extended,
    pub z_plus: Extended,
    pub x_minus: f64,
    pub x_plus: f64,
    /// Density on `[-1, x_-]` and on `[x_+, c]`.
    pub edge_density: [f64; 2],
}

impl SupportData {
    pub fn contains(&self, t: f64) -> bool {
        t > self.x_minus && t < self.x_plus
    }
}

/// `(zdz)^2 S / z`, real on the real axis; its nonzero roots are the double critical points.
fn second_over_z(z: f64, spec: &DensitySpec, tol: f64) -> Option<f64> {
    let c = spec.c;
    spec.integrate_real_tol(|f, g| f / ((1.0 - f * z) * (1.0 - f * z)) - c * g / ((z + g) * (z + g)), tol).ok()
}

fn bisect_root(h: &impl Fn(f64) -> Option<f64>, mut a: f64, mut b: f64, mut fa: f64) -> Option<f64> {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = h(m)?;
        if fm == 0.0 {
            return Some(m);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Sign changes of `coarse` on `grid`, each refined by bisection on `h`.
fn scan_interval(coarse: &impl Fn(f64) -> Option<f64>, h: &impl Fn(f64) -> Option<f64>, grid: Vec<f64>, roots: &mut Vec<f64>) {
    let vals: Vec<Option<f64>> = grid.iter().map(|&z| coarse(z)).collect();
    for i in 0..grid.len() - 1 {
        if let (Some(a), Some(b)) = (vals[i], vals[i + 1]) {
            if a == 0.0 {
                roots.push(grid[i]);
            } else if (a > 0.0) != (b > 0.0) && b != 0.0 {
                let fa = h(grid[i]).unwrap_or(a);
                if let Some(r) = bisect_root(h, grid[i], grid[i + 1], fa) {
                    roots.push(r);
                }
            }
        }
    }
}

/// Points `a + (b - a) p` with `p` logistic in `v`, dense near both ends.
fn two_sided_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| {
            let v = -34.0 + 68.0 * i as f64 / n as f64;
            a + (b - a) / (1.0 + (-v).exp())
        })
        .filter(|&z| z > a && z < b)
        .collect()
}

/// Points `a (1 + e^v)` running from `a` out to infinity on the side of `a`.
fn half_line_grid(a: f64, n: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..=n).map(|i| a * (1.0 + (-34.0 + 64.0 * i as f64 / n as f64).exp())).collect();
    g.sort_by(f64::total_cmp);
    g
}

const DEGENERATE_TOL: f64 = 1e-10;

/// `int f - c int 1/g`; infinite when `1/g` is not integrable.
pub(crate) fn residual_at_zero(spec: &DensitySpec) -> Result<f64> {
    let f1 = spec.integrate_real(|f, _| f)?;
    match spec.integrate_real(|_, g| 1.0 / g) {
        Ok(v) if v.is_finite() => Ok(f1 - spec.c * v),
        Ok(_) | Err(Error::DivergentIntegral(_)) => Ok(f64::NEG_INFINITY),
        Err(e) => Err(e),
    }
}

/// `int 1/f - c int g`; infinite when either diverges.
fn residual_at_infinity(spec: &DensitySpec) -> Result<f64> {
    let inv_f = match spec.integrate_real(|f, _| 1.0 / f) {
        Ok(v) if v.is_finite() => v,
        Ok(_) | Err(Error::DivergentIntegral(_)) => return Ok(f64::INFINITY),
        Err(e) => return Err(e),
    };
    match spec.integrate_real(|_, g| g) {
        Ok(v) if v.is_finite() => Ok(inv_f - spec.c * v),
        Ok(_) | Err(Error::DivergentIntegral(_)) => Ok(f64::NEG_INFINITY),
        Err(e) => Err(e),
    }
}

/// Finds the two real double critical points and the support endpoints.
pub fn support(spec: &DensitySpec) -> Result<SupportData> {
    let (fl, fh) = spec.f.range();
    let (gl, gh) = spec.g.range();
    // Only signs matter on the scan grid, and close to the poles the integrand is too
    // noisy for the full tolerance anyway.
    let coarse = |z: f64| second_over_z(z, spec, 1e-8);
    let h = |z: f64| second_over_z(z, spec, QUAD_TOL).or_else(|| coarse(z));
    let mut roots: Vec<Extended> = Vec::new();
    let mut found = Vec::new();
    const N: usize = 1200;
    // (-inf, -max g)
    if gh.is_finite() {
        scan_interval(&coarse, &h, half_line_grid(-gh, N), &mut found);
    }
    // (-min g, 0)
    if gl > 0.0 {
        scan_interval(&coarse, &h, two_sided_grid(-gl, 0.0, N), &mut found);
    }
    // (0, 1 / max f)
    scan_interval(&coarse, &h, two_sided_grid(0.0, 1.0 / fh, N), &mut found);
    // (1 / min f, inf)
    if fl > 0.0 {
        scan_interval(&coarse, &h, half_line_grid(1.0 / fl, N), &mut found);
    }
    let at_zero = residual_at_zero(spec)?.abs() < DEGENERATE_TOL;
    let at_inf = fl > 0.0 && residual_at_infinity(spec)?.abs() < DEGENERATE_TOL;
    // A degenerate root makes h nearly vanish close to it, where quadrature noise can
    // fake sign changes.
    let scale = spec.integrate_real(|_, g| g)?.max(1e-300) / spec.integrate_real(|f, _| f)?.max(1e-300);
    let scale = scale.sqrt();
    found.retain(|z| !(at_zero && z.abs() < 1e-8 * scale) && !(at_inf && z.abs() > 1e8 * scale));
    roots.extend(found.iter().map(|&z| Extended::Finite(z)));
    if at_zero {
        roots.push(Extended::Finite(0.0));
    }
    if at_inf {
        roots.push(Extended::Infinity);
    }
    if roots.len() != 2 {
        return Err(Error::RootCountMismatch { found: roots.len() });
    }
    let x_of = |r: Extended| -> Result<f64> {
        match r {
            Extended::Infinity => Ok(-1.0),
            Extended::Finite(z) if z == 0.0 => Ok(spec.c),
            Extended::Finite(z) => Ok(zdz_derivative(Complex64::new(z, 0.0), 0.0, spec, 1)?.re),
        }
    };
    let edge = |r: Extended| match r {
        Extended::Infinity => 1.0,
        Extended::Finite(z) if z < 0.0 => 1.0,
        Extended::Finite(_) => 0.0,
    };
    let (xa, xb) = (x_of(roots[0])?, x_of(roots[1])?);
    let (lo, hi) = if xa <= xb { (0, 1) } else { (1, 0) };
    let xs = [xa, xb];
    Ok(SupportData {
        z_minus: roots[lo],
        z_plus: roots[hi],
        x_minus: xs[lo],
        x_plus: xs[hi],
        edge_density: [edge(roots[lo]), edge(roots[hi])],
    })
}

/// `rho(t)`: `arg z(t) / pi` inside the support, the edge values outside it on
/// `[-1, c]`, `1` below `-1` and `0` above `c`.
pub fn density(t: f64, spec: &DensitySpec, sup: &SupportData) -> Result<f64> {
    density_near(t, spec, sup, None).map(|(r, _)| r)
}

fn density_near(t: f64, spec: &DensitySpec, sup: &SupportData, guess: Option<Complex64>) -> Result<(f64, Option<Complex64>)> {
    if t < -1.0 {
        return Ok((1.0, None));
    }
    if t > spec.c {
        return Ok((0.0, None));
    }
    if t <= sup.x_minus {
        return Ok((sup.edge_density[0], None));
    }
    if t >= sup.x_plus {
        return Ok((sup.edge_density[1], None));
    }
    match critical_point_near(t, spec, guess) {
        Ok(z) => Ok((z.arg() / std::f64::consts::PI, Some(z))),
        // Within a hair of an endpoint the root merges with the real axis.
        Err(Error::NoRoot { .. }) if (t - sup.x_minus).min(sup.x_plus - t) < 1e-7 => {
            let side = if t - sup.x_minus < sup.x_plus - t { 0 } else { 1 };
            Ok((sup.edge_density[side], None))
        }
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub u: f64,
    pub omega: f64,
    pub rho: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitShapeCurve {
    pub support: SupportData,
    pub points: Vec<CurvePoint>,
}

impl LimitShapeCurve {
    /// `Omega(u)`, extended by slope `-1` left of the grid and `+1` right of it.
    pub fn eval(&self, u: f64) -> f64 {
        let p = &self.points;
        let (first, last) = (p[0], p[p.len() - 1]);
        if u <= first.u {
            return first.omega + (first.u - u);
        }
        if u >= last.u {
            return last.omega + (u - last.u);
        }
        let i = p.partition_point(|q| q.u <= u).max(1);
        let (a, b) = (p[i - 1], p[i]);
        a.omega + (b.omega - a.omega) * (u - a.u) / (b.u - a.u)
    }
}

/// `Omega(u) = 1 + int_{-1}^u (1 - 2 rho)` by the trapezoidal rule on a grid of the
/// given step over `[-1, c]`, with `x_-` and `x_+` added as nodes.
pub fn limit_curve(spec: &DensitySpec, step: f64) -> Result<LimitShapeCurve> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("grid step {step} must be positive")));
    }
    let sup = support(spec)?;
    let n = ((spec.c + 1.0) / step).ceil() as usize;
    let mut us: Vec<f64> = (0..=n).map(|i| (-1.0 + i as f64 * step).min(spec.c)).collect();
    us.extend([sup.x_minus, sup.x_plus]);
    us.sort_by(f64::total_cmp);
    us.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut guess = None;
    let mut rhos = Vec::with_capacity(us.len());
    for &u in &us {
        let (r, z) = density_near(u, spec, &sup, guess)?;
        guess = z.or(guess).filter(|_| sup.contains(u));
        rhos.push(r);
    }
    let mut points = Vec::with_capacity(us.len());
    let mut omega = 1.0;
    for i in 0..us.len() {
        if i > 0 {
            omega += 0.5 * (us[i] - us[i - 1]) * ((1.0 - 2.0 * rhos[i - 1]) + (1.0 - 2.0 * rhos[i]));
        }
        points.push(CurvePoint { u: us[i], omega, rho: rhos[i] });
    }
    Ok(LimitShapeCurve { support: sup, points })
}

/// `sin(phi (m - m')) / (pi (m - m'))` with `phi = arg z(t)`, and `phi / pi` on the diagonal.
pub fn sine_kernel_limit(t: f64, m: HalfInt, mp: HalfInt, spec: &DensitySpec) -> Result<f64> {
    let phi = critical_point(t, spec)?.arg();
    Ok(sine_kernel(phi, m.diff(mp)))
}

pub fn sine_kernel(phi: f64, d: i64) -> f64 {
    if d == 0 {
        phi / std::f64::consts::PI
    } else {
        (phi * d as f64).sin() / (std::f64::consts::PI * d as f64)
    }
}

/// Closed-form cases used as ground truth for the generic solver.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "example", rename_all = "snake_case")]
pub enum ExampleFamily {
    /// `f = alpha`, `g = 1` (Krawtchouk ensemble).
    Constant { alpha: f64, c: f64 },
    /// `x_i = q^{i-1}`, `y_j = q^{1-j}` with `q = e^{-gamma/n}`: `f = e^{-gamma s}`, `g = e^{gamma c s}`.
    QOpposite { gamma: f64, c: f64 },
    /// `x_i = q^{i-1}`, `y_j = q^{j-1}`: `f = e^{-gamma s}`, `g = e^{-gamma c s}`.
    QAligned { gamma: f64, c: f64 },
}

impl ExampleFamily {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ExampleFamily::Constant { alpha, c } => alpha > 0.0 && c > 0.0 && alpha.is_finite() && c.is_finite(),
            ExampleFamily::QOpposite { gamma, c } | ExampleFamily::QAligned { gamma, c } => {
                gamma != 0.0 && gamma.is_finite() && c > 0.0 && c.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("{self:?}")))
        }
    }

    pub fn c(&self) -> f64 {
        match *self {
            ExampleFamily::Constant { c, .. } | ExampleFamily::QOpposite { c, .. } | ExampleFamily::QAligned { c, .. } => c,
        }
    }

    pub fn density_spec(&self) -> Result<DensitySpec> {
        self.validate()?;
        match *self {
            ExampleFamily::Constant { alpha, c } => DensitySpec::constant(alpha, c),
            ExampleFamily::QOpposite { gamma, c } => DensitySpec::new(Density::exp(-gamma), Density::exp(gamma * c), c),
            ExampleFamily::QAligned { gamma, c } => DensitySpec::new(Density::exp(-gamma), Density::exp(-gamma * c), c),
        }
    }

    /// `(x_-, x_+)`.
    pub fn support(&self) -> Result<(f64, f64)> {
        self.validate()?;
        let e = f64::exp;
        let (a, b) = match *self {
            ExampleFamily::Constant { alpha, c } => {
                let r = 2.0 * (alpha * c).sqrt();
                ((alpha * (c - 1.0) - r) / (alpha + 1.0), (alpha * (c - 1.0) + r) / (alpha + 1.0))
            }
            ExampleFamily::QOpposite { gamma: g, c } => {
                let r = ((e(2.0 * g * c) - 1.0) * (e(2.0 * g) - 1.0)).sqrt();
                let x = |s: f64| -1.0 - 2f64.ln() / g + (1.0 + e(g * (c + 1.0)) + s * r).ln() / g;
                (x(-1.0), x(1.0))
            }
            ExampleFamily::QAligned { gamma: g, c } => {
                let x = |s: f64| c - 1.0 - g.signum() * q_printed_support(g, c, s);
                (x(1.0), x(-1.0))
            }
        };
        Ok((a.min(b), a.max(b)))
    }

    /// `rho(t)` by the arccos formulas, clamped to `[0, 1]` outside the support.
    pub fn rho(&self, t: f64) -> Result<f64> {
        self.validate()?;
        let e = f64::exp;
        let arg = match *self {
            ExampleFamily::Constant { alpha, c } => {
                (alpha * (c - 1.0) + t * (1.0 - alpha)) / (2.0 * (alpha * (c - t) * (t + 1.0)).sqrt())
            }
            ExampleFamily::QOpposite { gamma: g, c } => {
                (-g).signum() * e(g - g * (t + 1.0) / 2.0) / 2.0 * (1.0 - e(g * (c - 1.0)))
                    / ((1.0 - e(g * (t + 1.0))) * (1.0 - e(g * (c - t)))).sqrt()
            }
            ExampleFamily::QAligned { gamma: g, c } => {
                (-g).signum() * e(g / 2.0 * (t + 1.0 - c)) / 2.0
                    * (1.0 - e(g * c) - e(g * (c - t - 1.0)) + e(g * (c - t)))
                    / ((1.0 - e(g * (t + 1.0))) * (1.0 - e(g * (c - t)))).sqrt()
            }
        };
        Ok(arg.clamp(-1.0, 1.0).acos() / std::f64::consts::PI)
    }
}

/// The closed-form endpoint expression printed with the `q`-weights with branch `s = -+1`:
/// `-(sgn g / g) ln((3e^{(c+1)g} - e^{cg} - e^g + 3 + s 2 sqrt2 sqrt((e^g-1)(e^{cg}-1)(e^{(c+1)g}+1))) / (1+e^{cg})^2)`.
///
/// It describes the aligned family after the reflection `t -> c - 1 - sgn(g) t`.
pub fn q_printed_support(g: f64, c: f64, s: f64) -> f64 {
    let e = f64::exp;
    let r = 2.0 * 2f64.sqrt() * ((e(g) - 1.0) * (e(c * g) - 1.0) * (e((c + 1.0) * g) + 1.0)).sqrt();
    let b = 3.0 * e((c + 1.0) * g) - e(c * g) - e(g) + 3.0;
    let d = (1.0 + e(c * g)).powi(2);
    -(g.signum() / g) * ((b + s * r) / d).ln()
}
