//! Exact dual Schur measure on a small box: weights, normalization, first-row law.

use dual_schur::schur::{e_product, enumerate_measure, schur, Specialization};

fn main() -> dual_schur::Result<()> {
    let spec = Specialization::new(vec![0.5, 1.0, 2.0], vec![1.5, 0.7])?;
    let d = enumerate_measure(&spec)?;
    println!("{} partitions in the 3 x 2 box, Z = {:.6}", d.entries.len(), d.normalization);
    println!("prod (1 + x_i y_j) = {:.6}", e_product(&spec));
    for (l, w, p) in &d.entries {
        println!("{:>10}  s(X) = {:>9.5}  weight {w:.5}  P = {p:.5}", l.to_string(), schur(l, spec.x()));
    }
    for (i, p) in d.first_row_law().iter().enumerate() {
        println!("P(lambda_1 = {i}) = {p:.5}");
    }
    Ok(())
}
