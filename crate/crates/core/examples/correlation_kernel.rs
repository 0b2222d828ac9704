//! Finite-size correlation kernel by contour quadrature, checked against enumeration,
//! and its bulk sine-kernel limit.

use dual_schur::kernel::{correlation_kernel, correlation_probability, ContourConfig};
use dual_schur::limit_shape::sine_kernel;
use dual_schur::partition::HalfInt;
use dual_schur::schur::{enumerate_measure, Specialization};

fn main() -> dual_schur::Result<()> {
    let spec = Specialization::new(vec![0.3, 0.8, 1.2], vec![0.5, 1.1])?;
    let cfg = ContourConfig::for_spec(&spec)?;
    let exact = enumerate_measure(&spec)?;
    let pair = [HalfInt::new(0.5)?, HalfInt::new(-1.5)?];
    let det = correlation_probability(&pair, &spec, &cfg)?;
    println!("rho(1/2, -3/2): kernel {det:.12}, enumeration {:.12}", exact.correlation(&pair));

    let n = 100;
    let big = Specialization::uniform(n, n, 1.0, 1.0)?;
    let cfg = ContourConfig::saddle_adapted(&big, 0.0)?;
    let m = HalfInt::new(0.5)?;
    for d in 0..4 {
        let k = correlation_kernel(m, m.shift(d), &big, &cfg)?;
        println!("K(m, m + {d}) = {:+.5}  sine {:+.5}  ({} nodes)", k.value, sine_kernel(std::f64::consts::FRAC_PI_2, d), k.nodes);
    }
    Ok(())
}
