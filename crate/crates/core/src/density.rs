//! Weight densities `f`, `g` on `[0, 1]` and the aspect ratio `c`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// A closed family of nonnegative functions on `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Density {
    /// `value`
    Constant { value: f64 },
    /// `a + b s`
    Linear { a: f64, b: f64 },
    /// `scale * exp(gamma s)`
    Exp {
        gamma: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    /// `coeff * s^exponent`
    Power { coeff: f64, exponent: f64 },
    /// Piecewise linear through `(s, value)` points sorted by `s`, covering `[0, 1]`.
    Table { points: Vec<(f64, f64)> },
}

fn one() -> f64 {
    1.0
}

impl Density {
    pub fn constant(value: f64) -> Self {
        Density::Constant { value }
    }

    pub fn exp(gamma: f64) -> Self {
        Density::Exp { gamma, scale: 1.0 }
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Density::Constant { value } => *value,
            Density::Linear { a, b } => a + b * s,
            Density::Exp { gamma, scale } => scale * (gamma * s).exp(),
            Density::Power { coeff, exponent } => coeff * s.powf(*exponent),
            Density::Table { points } => {
                let i = points.partition_point(|p| p.0 <= s).clamp(1, points.len() - 1);
                let (a, fa) = points[i - 1];
                let (b, fb) = points[i];
                fa + (fb - fa) * (s - a) / (b - a)
            }
        }
    }

    /// Interior points where the function is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Density::Table { points } => points.iter().map(|p| p.0).filter(|&s| s > 0.0 && s < 1.0).collect(),
            _ => Vec::new(),
        }
    }

    /// `(inf, sup)` over `(0, 1]`; `sup` may be infinite for negative powers.
    pub fn range(&self) -> (f64, f64) {
        let ends = |a: f64, b: f64| (a.min(b), a.max(b));
        match self {
            Density::Constant { value } => (*value, *value),
            Density::Linear { a, b } => ends(*a, a + b),
            Density::Exp { gamma, scale } => ends(*scale, scale * gamma.exp()),
            Density::Power { coeff, exponent } => {
                let at0 = if *exponent > 0.0 {
                    0.0
                } else if *exponent == 0.0 {
                    *coeff
                } else {
                    f64::INFINITY
                };
                ends(at0, *coeff)
            }
            Density::Table { points } => points
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1))),
        }
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigInvalid(format!("density {name}: {m}")));
        match self {
            Density::Table { points } => {
                if points.len() < 2 {
                    return bad("table needs at least two points".into());
                }
                if points.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return bad("table abscissae must be strictly increasing".into());
                }
                if points[0].0 > 0.0 || points[points.len() - 1].0 < 1.0 {
                    return bad("table must cover [0, 1]".into());
                }
            }
            Density::Power { coeff, exponent } if !coeff.is_finite() || !exponent.is_finite() => {
                return bad("non-finite parameter".into());
            }
            _ => {}
        }
        let (lo, hi) = self.range();
        if lo.is_nan() || lo < 0.0 || hi.is_nan() {
            return bad(format!("must be nonnegative, range is [{lo}, {hi}]"));
        }
        if hi == 0.0 {
            return bad("must not vanish identically".into());
        }
        Ok(())
    }
}

/// The pair of weight densities with aspect ratio `c = k / n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    pub f: Density,
    pub g: Density,
    pub c: f64,
}

pub(crate) const QUAD_TOL: f64 = 1e-14;

impl DensitySpec {
    pub fn new(f: Density, g: Density, c: f64) -> Result<Self> {
        let s = DensitySpec { f, g, c };
        s.validate()?;
        Ok(s)
    }

    /// Constant densities `f = alpha`, `g = 1`.
    pub fn constant(alpha: f64, c: f64) -> Result<Self> {
        DensitySpec::new(Density::constant(alpha), Density::constant(1.0), c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::ConfigInvalid(format!("aspect ratio c = {} must be positive", self.c)));
        }
        self.f.validate("f")?;
        self.g.validate("g")
    }

    pub(crate) fn breaks(&self) -> Vec<f64> {
        let mut b = self.f.breakpoints();
        b.extend(self.g.breakpoints());
        b.sort_by(f64::total_cmp);
        b
    }

    /// `int_0^1 h(f(s), g(s)) ds` with the quadrature used throughout the asymptotics.
    pub(crate) fn integrate_fg<H>(&self, h: H) -> Result<num_complex::Complex64>
    where
        H: Fn(f64, f64) -> num_complex::Complex64,
    {
        self.integrate_fg_tol(h, QUAD_TOL)
    }

    pub(crate) fn integrate_fg_tol<H>(&self, h: H, tol: f64) -> Result<num_complex::Complex64>
    where
        H: Fn(f64, f64) -> num_complex::Complex64,
    {
        quadrature::integrate_complex_split(|s| h(self.f.eval(s), self.g.eval(s)), 0.0, 1.0, &self.breaks(), tol)
    }

    pub(crate) fn integrate_real<H: Fn(f64, f64) -> f64>(&self, h: H) -> Result<f64> {
        self.integrate_real_tol(h, QUAD_TOL)
    }

    pub(crate) fn integrate_real_tol<H: Fn(f64, f64) -> f64>(&self, h: H, tol: f64) -> Result<f64> {
        self.integrate_fg_tol(|f, g| num_complex::Complex64::new(h(f, g), 0.0), tol).map(|z| z.re)
    }
}
