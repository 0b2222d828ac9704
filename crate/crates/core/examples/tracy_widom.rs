//! Edge scale, Tracy-Widom distribution and rescaled Monte Carlo edge samples.

use dual_schur::density::DensitySpec;
use dual_schur::edge::{edge_rescale, edge_scaling, ks_distance, tracy_widom_cdf, TwTable};
use dual_schur::limit_shape::support;
use dual_schur::sampler::{monte_carlo, Statistic};
use dual_schur::schur::Specialization;

fn main() -> dual_schur::Result<()> {
    for s in [-3.0, -2.0, -1.0, 0.0, 1.0] {
        println!("F2({s:+}) = {:.12}", tracy_widom_cdf(s)?);
    }
    let table = TwTable::new(-8.0, 6.0, 0.01)?;
    println!("mean {:.6}", table.mean());

    let (n, k) = (100, 200);
    let spec = DensitySpec::constant(1.0, 2.0)?;
    let sup = support(&spec)?;
    let scaling = edge_scaling(&spec, &sup)?;
    println!("x+ = {:.6}, sigma = {:?}", sup.x_plus, scaling.sigma);
    let batch = monte_carlo(&Specialization::from_density(&spec, n, k)?, 4000, Statistic::FirstRow, 3, 0)?;
    let raw: Vec<f64> = batch.values.scalars().expect("scalar").iter().map(|&v| v as f64).collect();
    let r = edge_rescale(&raw, &scaling, n)?;
    println!("rescaled mean {:.4}, KS {:.4}", r.iter().sum::<f64>() / r.len() as f64, ks_distance(&r, |x| table.cdf(x))?);
    Ok(())
}
