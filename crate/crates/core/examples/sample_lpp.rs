//! Bernoulli environments, last passage percolation and dual RSK shapes.

use dual_schur::sampler::{lpp_statistic, monte_carlo, rsk_shape, sample_environment, Statistic};
use dual_schur::schur::Specialization;

fn main() -> dual_schur::Result<()> {
    let spec = Specialization::uniform(6, 8, 1.0, 1.0)?;
    let env = sample_environment(&spec, 7);
    print!("{}", env.to_dump());
    println!("G = {}, shape = {}", lpp_statistic(&env), rsk_shape(&env));

    let big = Specialization::uniform(100, 200, 1.0, 1.0)?;
    let batch = monte_carlo(&big, 2000, Statistic::FirstRow, 1, 0)?;
    let v = batch.values.scalars().expect("scalar statistic");
    let mean = v.iter().sum::<u64>() as f64 / v.len() as f64;
    println!("n = 100, k = 200: mean lambda_1 = {mean:.2} over {} samples ({:.2?})", v.len(), batch.wall_time);
    Ok(())
}
