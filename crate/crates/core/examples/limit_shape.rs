//! Support, density and limit curve from the saddle-point equations.

use dual_schur::density::{Density, DensitySpec};
use dual_schur::limit_shape::{density, limit_curve, support, ExampleFamily};

fn main() -> dual_schur::Result<()> {
    let fam = ExampleFamily::Constant { alpha: 1.0, c: 4.0 };
    let spec = fam.density_spec()?;
    let sup = support(&spec)?;
    println!("constant alpha = 1, c = 4: x- = {:.12}, x+ = {:.12}", sup.x_minus, sup.x_plus);
    for t in [-0.25, 0.5, 1.5, 3.0] {
        println!("  rho({t}) = {:.10} (closed form {:.10})", density(t, &spec, &sup)?, fam.rho(t)?);
    }

    let spec = DensitySpec::new(Density::Linear { a: 0.5, b: 1.0 }, Density::exp(0.7), 1.5)?;
    let curve = limit_curve(&spec, 0.25)?;
    println!("f = 0.5 + s, g = e^(0.7 s), c = 1.5: support [{:.5}, {:.5}]", curve.support.x_minus, curve.support.x_plus);
    for p in &curve.points {
        println!("  u = {:+.3}  Omega = {:.5}  rho = {:.5}", p.u, p.omega, p.rho);
    }
    Ok(())
}
