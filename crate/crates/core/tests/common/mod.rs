//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use dual_schur::partition::Partition;
use dual_schur::sampler::Environment;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for j in c..n {
                a[r][j] -= f * a[c][j];
            }
        }
    }
    d
}

/// `det(x_i^{lambda_j + n - j}) / det(x_i^{n - j})` for distinct variables.
pub fn bialternant(lambda: &Partition, x: &[f64]) -> f64 {
    let n = x.len();
    if lambda.len() > n {
        return 0.0;
    }
    let num = (0..n).map(|i| (0..n).map(|j| x[i].powi((lambda.part(j + 1) as usize + n - 1 - j) as i32)).collect()).collect();
    let den = (0..n).map(|i| (0..n).map(|j| x[i].powi((n - 1 - j) as i32)).collect()).collect();
    det(num) / det(den)
}

/// Schur polynomial by the branching rule over horizontal strips, removing the last
/// variable at each step.
pub fn schur_branching(lambda: &[u32], x: &[f64]) -> f64 {
    let len = lambda.iter().filter(|&&p| p > 0).count();
    if len > x.len() {
        return 0.0;
    }
    if x.is_empty() {
        return 1.0;
    }
    let (last, rest) = x.split_last().unwrap();
    let size: u32 = lambda.iter().sum();
    let mut total = 0.0;
    let mut mu = vec![0u32; lambda.len()];
    fn rec(i: usize, lambda: &[u32], mu: &mut Vec<u32>, size: u32, last: f64, rest: &[f64], total: &mut f64) {
        if i == lambda.len() {
            let s: u32 = mu.iter().sum();
            *total += last.powi((size - s) as i32) * schur_branching(mu, rest);
            return;
        }
        // lambda_{i+1} <= mu_i <= lambda_i
        let lo = lambda.get(i + 1).copied().unwrap_or(0);
        for v in lo..=lambda[i] {
            mu[i] = v;
            rec(i + 1, lambda, mu, size, last, rest, total);
        }
    }
    rec(0, lambda, &mut mu, size, *last, rest, &mut total);
    total
}

/// Number of semistandard tableaux of shape `lambda` with entries in `1..=m`.
pub fn ssyt_count(lambda: &Partition, m: u32) -> u64 {
    let cells: Vec<(usize, usize)> =
        (0..lambda.len()).flat_map(|r| (0..lambda.part(r + 1) as usize).map(move |c| (r, c))).collect();
    let mut fill = vec![vec![0u32; lambda.first() as usize]; lambda.len()];
    fn rec(idx: usize, cells: &[(usize, usize)], fill: &mut Vec<Vec<u32>>, m: u32) -> u64 {
        if idx == cells.len() {
            return 1;
        }
        let (r, c) = cells[idx];
        let lo_row = if c > 0 { fill[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { fill[r - 1][c] + 1 } else { 1 };
        let mut count = 0;
        for v in lo_row.max(lo_col)..=m {
            fill[r][c] = v;
            count += rec(idx + 1, cells, fill, m);
        }
        count
    }
    rec(0, &cells, &mut fill, m)
}

/// Longest chain of ones with `i` weakly and `j` strictly increasing, by exhaustive
/// search over chains built point by point.
pub fn longest_chain(env: &Environment) -> u32 {
    let pts: Vec<(usize, usize)> =
        (0..env.rows).flat_map(|i| (0..env.cols).map(move |j| (i, j))).filter(|&(i, j)| env.get(i, j)).collect();
    fn extend(from: Option<(usize, usize)>, pts: &[(usize, usize)], memo: &mut Vec<Option<u32>>) -> u32 {
        let mut best = 0;
        for (idx, &(i, j)) in pts.iter().enumerate() {
            let ok = match from {
                None => true,
                Some((a, b)) => i >= a && j > b,
            };
            if ok {
                let v = match memo[idx] {
                    Some(v) => v,
                    None => {
                        let v = 1 + extend(Some((i, j)), pts, memo);
                        memo[idx] = Some(v);
                        v
                    }
                };
                best = best.max(v);
            }
        }
        best
    }
    let mut memo = vec![None; pts.len()];
    extend(None, &pts, &mut memo)
}

/// All 0/1 matrices of the given size with their probabilities under site parameters `p`.
pub fn all_environments(rows: usize, cols: usize, p: impl Fn(usize, usize) -> f64) -> Vec<(Environment, f64)> {
    let sites = rows * cols;
    (0u64..1 << sites)
        .map(|mask| {
            let bits: Vec<u8> = (0..sites).map(|s| ((mask >> s) & 1) as u8).collect();
            let prob = (0..sites)
                .map(|s| {
                    let q = p(s / cols, s % cols);
                    if bits[s] == 1 { q } else { 1.0 - q }
                })
                .product();
            (Environment::new(rows, cols, bits).unwrap(), prob)
        })
        .collect()
}

/// Hook lengths and contents of the cells of `lambda`.
pub fn hooks_contents(lambda: &Partition) -> Vec<(u32, i64)> {
    let conj = lambda.conjugate();
    let mut out = Vec::new();
    for r in 0..lambda.len() {
        for c in 0..lambda.part(r + 1) as usize {
            let arm = lambda.part(r + 1) as usize - c - 1;
            let leg = conj.part(c + 1) as usize - r - 1;
            out.push(((arm + leg + 1) as u32, c as i64 - r as i64));
        }
    }
    out
}

/// `s_lambda(1, q, .., q^{n-1})` by the principal hook-content formula.
pub fn principal_schur(lambda: &Partition, n: usize, q: f64) -> f64 {
    let nl = lambda.weighted_size() as i32;
    hooks_contents(lambda).iter().fold(q.powi(nl), |acc, &(h, c)| {
        acc * (1.0 - q.powi(n as i32 + c as i32)) / (1.0 - q.powi(h as i32))
    })
}

/// Seeded generator for test parameters.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(lo..hi)).collect()
}

/// Composite Simpson rule with `panels` (even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `Ai(x) = (1/pi) Im int_0^inf exp(-t^3/3 - x t e^{i pi/3}) e^{i pi/3} dt`, from the
/// contour integral over the rays `arg z = +-pi/3`.
pub fn airy_by_contour(x: f64) -> f64 {
    let e = num_complex::Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    let g = |t: f64| ((-t * t * t / 3.0 - x * t * e).exp() * e).im;
    simpson(g, 0.0, 12.0, 6000) / std::f64::consts::PI
}
