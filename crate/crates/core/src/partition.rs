//! Partitions in an `n x k` box, their Maya diagrams and rotated profiles.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weakly decreasing sequence of positive parts. Zero parts are stripped on construction.
///
/// The bounding box is not stored; operations that depend on it (complement, profile)
/// take the box dimensions explicitly.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("parts {parts:?} are not weakly decreasing")));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("parts {parts:?} contain an interior zero")));
        }
        Ok(Partition { parts })
    }

    /// Builds a partition from parts known to be weakly decreasing.
    pub(crate) fn from_sorted(mut parts: Vec<u32>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The full `rows x cols` rectangle.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        Partition::from_sorted(vec![cols as u32; rows])
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Part `i` with 1-based indexing; zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn first(&self) -> u32 {
        self.part(1)
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// `sum (i - 1) lambda_i`.
    pub fn weighted_size(&self) -> u64 {
        self.parts.iter().enumerate().map(|(i, &p)| i as u64 * p as u64).sum()
    }

    pub fn fits(&self, rows: usize, cols: usize) -> bool {
        self.len() <= rows && self.first() as usize <= cols
    }

    pub fn check_box(&self, rows: usize, cols: usize) -> Result<()> {
        if self.fits(rows, cols) {
            Ok(())
        } else {
            Err(Error::BoxViolation { parts: self.parts.clone(), rows, cols })
        }
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.first() as usize;
        let mut out = vec![0u32; m];
        for &p in &self.parts {
            for c in out.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition::from_sorted(out)
    }

    /// Complement inside the `rows x cols` box: `(k - lambda_n, ..., k - lambda_1)`.
    pub fn complement(&self, rows: usize, cols: usize) -> Result<Partition> {
        self.check_box(rows, cols)?;
        let out = (1..=rows).rev().map(|i| cols as u32 - self.part(i)).collect();
        Ok(Partition::from_sorted(out))
    }

    /// The first `depth` Maya positions `lambda_i - i + 1/2`, strictly decreasing.
    pub fn maya(&self, depth: usize) -> Vec<HalfInt> {
        (1..=depth)
            .map(|i| HalfInt::from_floor(self.part(i) as i64 - i as i64))
            .collect()
    }

    /// Whether the half-integer `a` is occupied in the (infinite) Maya diagram.
    pub fn occupies(&self, a: HalfInt) -> bool {
        let len = self.len() as i64;
        if a.floor() < -len {
            return true;
        }
        (1..=self.len()).any(|i| self.part(i) as i64 - i as i64 == a.floor())
    }

    /// Rotated profile rescaled by `rows`, see [`Profile`].
    pub fn profile(&self, rows: usize, cols: usize) -> Result<Profile> {
        self.check_box(rows, cols)?;
        let n = rows as f64;
        let lo = -(rows as i64) - 1;
        let hi = cols as i64 + 1;
        let depth = rows + 1;
        let maya = self.maya(depth);
        let points = (lo..=hi)
            .map(|u| {
                // Particles above u: those among the first `depth` rows, plus the sea
                // rows depth+1 ..= -u when u is that low (never inside the window).
                let above = maya.iter().filter(|a| a.floor() >= u).count() as i64
                    + (-u - depth as i64).max(0);
                let omega = u + 2 * above;
                (u as f64 / n, omega as f64 / n)
            })
            .collect();
        Ok(Profile { points })
    }

    /// All partitions inside the `rows x cols` box in lexicographic order.
    pub fn all_in_box(rows: usize, cols: usize) -> Vec<Partition> {
        fn rec(rows: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if cur.len() == rows {
                out.push(Partition::from_sorted(cur.clone()));
                return;
            }
            for p in 0..=max {
                cur.push(p);
                rec(rows, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(rows, cols as u32, &mut Vec::with_capacity(rows), &mut out);
        out.sort();
        out
    }

    /// Number of partitions in the box, `binom(rows + cols, rows)`.
    pub fn count_in_box(rows: usize, cols: usize) -> u128 {
        let (a, b) = (rows.min(cols) as u128, (rows + cols) as u128);
        let mut c: u128 = 1;
        for i in 0..a {
            c = c.saturating_mul(b - i) / (i + 1);
        }
        c
    }
}

/// A half-integer `floor + 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub fn from_floor(floor: i64) -> Self {
        HalfInt(floor)
    }

    pub fn new(value: f64) -> Result<Self> {
        let f = value - 0.5;
        if !value.is_finite() || f.fract() != 0.0 {
            return Err(Error::InvalidArgument(format!("{value} is not a half-integer")));
        }
        Ok(HalfInt(f as i64))
    }

    pub fn floor(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 + 0.5
    }

    /// `self - other`, an integer.
    pub fn diff(self, other: HalfInt) -> i64 {
        self.0 - other.0
    }

    pub fn shift(self, by: i64) -> HalfInt {
        HalfInt(self.0 + by)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        HalfInt::new(v).map_err(serde::de::Error::custom)
    }
}

/// Piecewise linear rotated profile `omega(u)` after rescaling both axes by `n`.
///
/// Breakpoints sit at `u = j / n` for integers `j` in `[-n - 1, k + 1]`. Each Maya
/// particle at `a` contributes slope `-1` on `[a - 1/2, a + 1/2]`, so the empty
/// partition gives `|u|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub points: Vec<(f64, f64)>,
}

impl Profile {
    pub fn eval(&self, u: f64) -> f64 {
        let pts = &self.points;
        let (u0, w0) = pts[0];
        let (u1, w1) = pts[pts.len() - 1];
        if u <= u0 {
            return w0 + (u0 - u);
        }
        if u >= u1 {
            return w1 + (u - u1);
        }
        let i = pts.partition_point(|p| p.0 <= u).max(1);
        let (a, fa) = pts[i - 1];
        let (b, fb) = pts[i];
        fa + (fb - fa) * (u - a) / (b - a)
    }

    /// `sup |omega - other|` over the breakpoints of `self`.
    pub fn sup_distance(&self, other: impl Fn(f64) -> f64) -> f64 {
        self.points.iter().map(|&(u, w)| (w - other(u)).abs()).fold(0.0, f64::max)
    }
}
