//! Exact sampling through a Bernoulli environment and dual RSK.
//!
//! Each site `(i, j)` of the `n x k` box carries an independent bit with parameter
//! `x_i y_j / (1 + x_i y_j)`. Dual RSK row insertion maps the 0/1 matrix to a pair of
//! tableaux whose common shape is distributed by the dual Schur measure.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::edge::{edge_statistic, Branch};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::schur::Specialization;

/// Row-major 0/1 matrix on the `n x k` box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub rows: usize,
    pub cols: usize,
    pub bits: Vec<u8>,
}

impl Environment {
    pub fn new(rows: usize, cols: usize, bits: Vec<u8>) -> Result<Self> {
        if bits.len() != rows * cols || bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument(format!("environment needs {} bits in {{0, 1}}", rows * cols)));
        }
        Ok(Environment { rows, cols, bits })
    }

    /// Bit at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j] == 1
    }

    pub fn transpose(&self) -> Environment {
        let mut bits = vec![0u8; self.bits.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                bits[j * self.rows + i] = self.bits[i * self.cols + j];
            }
        }
        Environment { rows: self.cols, cols: self.rows, bits }
    }

    /// Text dump: a `rows cols` header line, then one line of 0/1 characters per row.
    pub fn to_dump(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for row in self.bits.chunks(self.cols) {
            s.extend(row.iter().map(|&b| if b == 1 { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    pub fn from_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let bad = || Error::InvalidArgument("malformed environment dump".into());
        let header: Vec<usize> =
            lines.next().ok_or_else(bad)?.split_whitespace().map(|t| t.parse().map_err(|_| bad())).collect::<Result<_>>()?;
        let [rows, cols] = header[..] else { return Err(bad()) };
        let mut bits = Vec::with_capacity(rows * cols);
        for line in lines.take(rows) {
            for ch in line.trim().chars() {
                bits.push(match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(bad()),
                });
            }
        }
        Environment::new(rows, cols, bits)
    }
}

/// Random stream for sample `index` under `seed`: a ChaCha8 keyed by `seed` on stream `index`.
///
/// Streams are independent of how samples are scheduled across workers.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Bits are drawn in row-major order from one uniform each, so the environment is a
/// pure function of `(spec, rng state)`.
pub fn sample_environment_with(spec: &Specialization, rng: &mut impl Rng) -> Environment {
    let (n, k) = (spec.rows(), spec.cols());
    let mut bits = Vec::with_capacity(n * k);
    for i in 0..n {
        for j in 0..k {
            let u: f64 = rng.random();
            bits.push((u < spec.site_probability(i, j)) as u8);
        }
    }
    Environment { rows: n, cols: k, bits }
}

pub fn sample_environment(spec: &Specialization, seed: u64) -> Environment {
    sample_environment_with(spec, &mut sample_rng(seed, 0))
}

/// Longest chain of ones with `i` weakly and `j` strictly increasing.
///
/// This equals `lambda_1` of the dual RSK shape.
pub fn lpp_statistic(env: &Environment) -> u32 {
    let mut m = vec![0u32; env.cols + 1];
    for i in 0..env.rows {
        let row = &env.bits[i * env.cols..(i + 1) * env.cols];
        // M(i, j) = max(M(i-1, j), M(i, j-1) + w(i, j)); the update runs left to right
        // so m[j] still holds row i-1 when read.
        for j in 0..env.cols {
            let cand = m[j] + row[j] as u32;
            if cand > m[j + 1] {
                m[j + 1] = cand;
            }
        }
    }
    m[env.cols]
}

/// Fused sampling of `lambda_1`: draws bits and runs the chain recursion in one pass.
fn sample_first_row(spec: &Specialization, rng: &mut impl Rng) -> u32 {
    let k = spec.cols();
    let mut m = vec![0u32; k + 1];
    let y = spec.y();
    for &x in spec.x() {
        for j in 0..k {
            let w = x * y[j];
            let u: f64 = rng.random();
            let cand = m[j] + (u < w / (1.0 + w)) as u32;
            if cand > m[j + 1] {
                m[j + 1] = cand;
            }
        }
    }
    m[k]
}

/// Shape of the dual RSK image of the environment.
///
/// Rows `i` are read in order; within a row the columns `j` with a one are inserted
/// increasingly. Insertion of `v` bumps the leftmost entry `>= v`, which keeps rows of
/// the insertion tableau strictly increasing.
pub fn rsk_shape(env: &Environment) -> Partition {
    let mut tab: Vec<Vec<u32>> = Vec::new();
    for i in 0..env.rows {
        for j in 0..env.cols {
            if !env.get(i, j) {
                continue;
            }
            let mut v = j as u32;
            let mut r = 0;
            loop {
                if r == tab.len() {
                    tab.push(vec![v]);
                    break;
                }
                let row = &mut tab[r];
                let pos = row.partition_point(|&e| e < v);
                if pos == row.len() {
                    row.push(v);
                    break;
                }
                v = std::mem::replace(&mut row[pos], v);
                r += 1;
            }
        }
    }
    Partition::from_sorted(tab.iter().map(|r| r.len() as u32).collect())
}

pub fn sample_partition(spec: &Specialization, seed: u64) -> Partition {
    rsk_shape(&sample_environment(spec, seed))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// `lambda_1`.
    FirstRow,
    /// The branch-dependent edge statistic.
    Edge(Branch),
    /// `|lambda|`.
    Size,
    /// The whole partition.
    Shape,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleValues {
    Scalars(Vec<u64>),
    Shapes(Vec<Partition>),
}

impl SampleValues {
    pub fn len(&self) -> usize {
        match self {
            SampleValues::Scalars(v) => v.len(),
            SampleValues::Shapes(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn scalars(&self) -> Option<&[u64]> {
        match self {
            SampleValues::Scalars(v) => Some(v),
            SampleValues::Shapes(_) => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleBatch {
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    pub statistic: Statistic,
    pub values: SampleValues,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// `count` independent samples; sample `i` uses [`sample_rng`]`(seed, i)`.
///
/// `workers = 0` uses the global rayon pool. Output is identical for any worker count.
pub fn monte_carlo(
    spec: &Specialization,
    count: usize,
    statistic: Statistic,
    seed: u64,
    workers: usize,
) -> Result<SampleBatch> {
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let start = Instant::now();
    let (n, k) = (spec.rows(), spec.cols());
    let run = || -> Result<SampleValues> {
        let idx = (0..count as u64).into_par_iter();
        Ok(match statistic {
            Statistic::Shape => SampleValues::Shapes(
                idx.map(|i| rsk_shape(&sample_environment_with(spec, &mut sample_rng(seed, i)))).collect(),
            ),
            Statistic::FirstRow | Statistic::Edge(Branch::Convex) | Statistic::Edge(Branch::Critical) => {
                SampleValues::Scalars(idx.map(|i| sample_first_row(spec, &mut sample_rng(seed, i)) as u64).collect())
            }
            Statistic::Size => SampleValues::Scalars(
                idx.map(|i| rsk_shape(&sample_environment_with(spec, &mut sample_rng(seed, i))).size()).collect(),
            ),
            Statistic::Edge(b @ Branch::Concave) => SampleValues::Scalars(
                idx.map(|i| {
                    let l = rsk_shape(&sample_environment_with(spec, &mut sample_rng(seed, i)));
                    edge_statistic(&l, n, k, b).map(|v| v as u64)
                })
                .collect::<Result<_>>()?,
            ),
        })
    };
    let values = if workers == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(run)?
    };
    Ok(SampleBatch { rows: n, cols: k, seed, statistic, values, wall_time: start.elapsed() })
}
