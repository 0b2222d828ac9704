//! Airy function `Ai` and its derivative on the real line.
//!
//! Power series on `[-7, 6]`, asymptotic expansions beyond.

use std::f64::consts::PI;

const AI0: f64 = 0.355_028_053_887_817_239_3;
const AIP0: f64 = 0.258_819_403_792_806_798_4;
const SWITCH_POS: f64 = 6.0;
const SWITCH_NEG: f64 = 7.0;

/// `(Ai(x), Ai'(x))`.
pub fn airy_ai(x: f64) -> (f64, f64) {
    if (-SWITCH_NEG..=SWITCH_POS).contains(&x) {
        series(x)
    } else if x > 0.0 {
        asymptotic_pos(x)
    } else {
        asymptotic_neg(-x)
    }
}

fn series(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f = sum x^{3k} / prod (3j-1)(3j), g = sum x^{3k+1} / prod (3j)(3j+1).
    let (mut f, mut fp) = (1.0, 0.0);
    let (mut g, mut gp) = (x, 1.0);
    let (mut tf, mut tfp) = (1.0, x * x / 2.0);
    let (mut tg, mut tgp) = (x, 1.0);
    fp += tfp;
    for k in 1..200 {
        let kf = k as f64;
        tf *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        tg *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        tgp *= x3 / ((3.0 * kf - 2.0) * (3.0 * kf));
        f += tf;
        g += tg;
        gp += tgp;
        if k >= 2 {
            tfp *= x3 / ((3.0 * kf - 3.0) * (3.0 * kf - 1.0));
            fp += tfp;
        }
        let size = tf.abs() + tg.abs() + tgp.abs() + tfp.abs();
        if size < 1e-18 * (f.abs() + g.abs() + 1.0) {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

/// Coefficients `u_k` and `v_k` of the standard asymptotic expansions.
fn uv(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..count {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * next);
    }
    (u, v)
}

const TERMS: usize = 24;

fn asymptotic_pos(x: f64) -> (f64, f64) {
    let (u, v) = uv(TERMS);
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (mut su, mut sv) = (0.0, 0.0);
    let mut p = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..TERMS {
        let (a, b) = (u[k] * p, v[k] * p);
        if a.abs() > last {
            break;
        }
        last = a.abs();
        su += a;
        sv += b;
        p *= -1.0 / zeta;
    }
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.powf(0.25);
    (e / q * su, -e * q * sv)
}

fn asymptotic_neg(y: f64) -> (f64, f64) {
    let (u, v) = uv(TERMS);
    let zeta = 2.0 / 3.0 * y * y.sqrt();
    // Even and odd parts with alternating signs.
    let (mut ue, mut uo, mut ve, mut vo) = (0.0, 0.0, 0.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..TERMS {
        let term = u[k] / zeta.powi(k as i32);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        let vt = v[k] / zeta.powi(k as i32);
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            ue += sign * term;
            ve += sign * vt;
        } else {
            uo += sign * term;
            vo += sign * vt;
        }
    }
    let ph = zeta - PI / 4.0;
    let q = y.powf(0.25);
    let ai = (ph.cos() * ue + ph.sin() * uo) / (PI.sqrt() * q);
    let aip = q * (ph.sin() * ve - ph.cos() * vo) / PI.sqrt();
    (ai, aip)
}

/// `K_Ai(x, y) = (Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y)`, with `Ai'(x)^2 - x Ai(x)^2` on the diagonal.
pub fn airy_kernel(x: f64, y: f64) -> f64 {
    let (ax, apx) = airy_ai(x);
    if (x - y).abs() < 1e-7 * (1.0 + x.abs()) {
        // First order Taylor expansion in h = y - x; the slope along the diagonal is -Ai(x)^2 / 2.
        let h = y - x;
        let d0 = apx * apx - x * ax * ax;
        let d1 = -ax * ax;
        return d0 + 0.5 * h * d1;
    }
    let (ay, apy) = airy_ai(y);
    (ax * apy - apx * ay) / (x - y)
}
