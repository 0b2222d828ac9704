mod common;

use common::*;
use dual_schur::partition::{HalfInt, Partition};
use dual_schur::schur::*;
use dual_schur::Error;
use proptest::prelude::*;

fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn schur_examples() {
    assert!((schur(&p(&[1]), &[0.3, 1.7]) - 2.0).abs() < 1e-14);
    assert!((schur(&p(&[2, 1]), &[1.0, 1.0, 1.0]) - 8.0).abs() < 1e-12);
    assert_eq!(schur(&p(&[1, 1, 1]), &[0.4, 2.0]), 0.0);
    assert_eq!(schur(&Partition::empty(), &[0.4, 2.0]), 1.0);
}

#[test]
fn jacobi_trudi_matches_bialternant() {
    let mut r = rng(11);
    for n in 1..=5 {
        for l in Partition::all_in_box(n, 4) {
            let x = uniform_vec(&mut r, n, 0.2, 2.0);
            let a = schur(&l, &x);
            let b = bialternant(&l, &x);
            assert!(close(a, b, 1e-8), "{l} {x:?}: {a} vs {b}");
        }
    }
}

#[test]
fn jacobi_trudi_matches_branching_rule() {
    let mut r = rng(12);
    for n in 1..=4 {
        let x = uniform_vec(&mut r, n, 0.1, 3.0);
        for l in Partition::all_in_box(n, 3) {
            let mut parts = l.parts().to_vec();
            parts.resize(n, 0);
            assert!(close(schur(&l, &x), schur_branching(&parts, &x), 1e-11), "{l}");
        }
    }
}

#[test]
fn spread_variables_keep_full_precision() {
    // Nearly full shapes in spread-out variables cancel badly in a plain f64 determinant.
    let mut r = rng(5);
    for n in 1..=4 {
        for _ in 0..100 {
            let x = uniform_vec(&mut r, n, 0.05, 3.0);
            for l in Partition::all_in_box(n, 4) {
                let mut parts = l.parts().to_vec();
                parts.resize(n, 0);
                assert!(close(schur(&l, &x), schur_branching(&parts, &x), 1e-13), "{l} {x:?}");
            }
        }
    }
    let x = [0.05393723488149496, 2.8095273722417216, 2.6409259122829103, 0.23612685111916903];
    let full: f64 = x.iter().product::<f64>().powi(4);
    assert!(close(schur(&p(&[4, 4, 4, 4]), &x), full, 1e-14));
}

#[test]
fn repeated_variables_count_tableaux() {
    for m in 1..=4u32 {
        for l in Partition::all_in_box(m as usize + 1, 4) {
            let ones = vec![1.0; m as usize];
            assert!(close(schur(&l, &ones), ssyt_count(&l, m) as f64, 1e-11), "{l} m={m}");
        }
    }
}

#[test]
fn log_schur_agrees_and_survives_large_arguments() {
    let x = [0.5, 1.5, 2.5];
    let l = p(&[3, 2]);
    assert!((log_schur(&l, &x) - schur(&l, &x).ln()).abs() < 1e-12);
    // s_lambda(c x) = c^{|lambda|} s_lambda(x), far beyond the f64 range of s itself.
    let big: Vec<f64> = x.iter().map(|v| v * 1e150).collect();
    let v = log_schur(&l, &big);
    assert!(schur(&l, &big).is_infinite());
    assert!((v - (5.0 * 1e150f64.ln() + schur(&l, &x).ln())).abs() < 1e-9, "{v}");
}

#[test]
fn elementary_and_complete() {
    let x = [1.0, 2.0, 3.0];
    assert_eq!(elementary(&x, 4), vec![1.0, 6.0, 11.0, 6.0, 0.0]);
    let h = complete_homogeneous(&x, 2);
    assert_eq!(h, vec![1.0, 6.0, 25.0]);
}

#[test]
fn e_product_examples() {
    let s = Specialization::new(vec![0.3, 0.9], vec![1.7]).unwrap();
    let direct = 1.0 + 1.2 * 1.7 + 0.27 * 1.7 * 1.7;
    assert!((e_product(&s) - direct).abs() < 1e-14);
    assert_eq!(e_product(&Specialization::uniform(1, 1, 1.0, 1.0).unwrap()), 2.0);
    assert_eq!(e_product(&Specialization::uniform(2, 2, 1.0, 1.0).unwrap()), 16.0);
    assert!((log_e_product(&s) - direct.ln()).abs() < 1e-14);
}

#[test]
fn measure_weight_examples() {
    let s = Specialization::uniform(1, 1, 1.0, 1.0).unwrap();
    assert!((measure_weight(&Partition::empty(), &s) - 0.5).abs() < 1e-15);
    assert!((measure_weight(&p(&[1]), &s) - 0.5).abs() < 1e-15);
    assert_eq!(measure_weight(&p(&[1, 1]), &s), 0.0);
    assert_eq!(measure_weight(&p(&[2]), &s), 0.0);
}

#[test]
fn constant_specialization_is_dimension_product() {
    // x = alpha, y = 1: mu ~ alpha^{|lambda|} dim_n(lambda) dim_k(lambda').
    let (n, k, alpha) = (2usize, 2usize, 2.0f64);
    let s = Specialization::uniform(n, k, alpha, 1.0).unwrap();
    let e = (1.0 + alpha).powi((n * k) as i32);
    for l in Partition::all_in_box(n, k) {
        let dim = ssyt_count(&l, n as u32) as f64 * ssyt_count(&l.conjugate(), k as u32) as f64;
        let expect = alpha.powi(l.size() as i32) * dim / e;
        assert!(close(measure_weight(&l, &s), expect, 1e-13), "{l}");
    }
}

#[test]
fn enumeration_examples() {
    let d = enumerate_measure(&Specialization::uniform(1, 1, 1.0, 1.0).unwrap()).unwrap();
    assert_eq!(d.entries.len(), 2);
    assert!((d.probability(&Partition::empty()) - 0.5).abs() < 1e-15);
    assert!((d.probability(&p(&[1])) - 0.5).abs() < 1e-15);

    let d = enumerate_measure(&Specialization::uniform(2, 1, 1.0, 1.0).unwrap()).unwrap();
    assert!((d.normalization - 4.0).abs() < 1e-14);
    for (l, v) in [(Partition::empty(), 0.25), (p(&[1]), 0.5), (p(&[1, 1]), 0.25)] {
        assert!((d.probability(&l) - v).abs() < 1e-15, "{l}");
    }
    assert_eq!(d.probability(&p(&[2])), 0.0);
}

#[test]
fn enumeration_cap() {
    let s = Specialization::uniform(6, 6, 1.0, 1.0).unwrap();
    assert!(matches!(enumerate_measure_capped(&s, 100), Err(Error::TooLarge { count: 924, cap: 100 })));
    assert_eq!(enumerate_measure_capped(&s, 924).unwrap().entries.len(), 924);
}

#[test]
fn transpose_symmetry_examples() {
    let s = Specialization::new(vec![1.0, 2.0], vec![1.0, 1.0, 3.0]).unwrap();
    assert!(transpose_symmetry_check(&p(&[2, 1]), &s, 1e-12));
    assert!(transpose_symmetry_check(&Partition::empty(), &s, 1e-12));
}

#[test]
fn principal_weights_match_hook_content_form() {
    // x_i = q^{i-1}, y_j = q^{j-1}: s_lambda and s_lambda' are principal
    // specializations, so mu is proportional to the hook-content product.
    let (n, k, q) = (3usize, 3usize, 0.7f64);
    let x: Vec<f64> = (0..n).map(|i| q.powi(i as i32)).collect();
    let y: Vec<f64> = (0..k).map(|j| q.powi(j as i32)).collect();
    let s = Specialization::new(x, y).unwrap();
    let mut ratios = Vec::new();
    for l in Partition::all_in_box(n, k) {
        let form = principal_schur(&l, n, q) * principal_schur(&l.conjugate(), k, q);
        ratios.push(measure_weight(&l, &s) / form);
    }
    let e = e_product(&s);
    for r in ratios {
        assert!(close(r, 1.0 / e, 1e-12));
    }
}

#[test]
fn exact_distribution_helpers() {
    let s = Specialization::new(vec![0.5, 1.2], vec![0.8, 2.0, 0.3]).unwrap();
    let d = enumerate_measure(&s).unwrap();
    assert!((d.total_probability() - 1.0).abs() < 1e-13);
    let law = d.first_row_law();
    assert_eq!(law.len(), 4);
    assert!((law.iter().sum::<f64>() - 1.0).abs() < 1e-13);
    let mean = d.expect(|l| l.first() as f64);
    let mean2: f64 = law.iter().enumerate().map(|(i, p)| i as f64 * p).sum();
    assert!((mean - mean2).abs() < 1e-13);
    // The topmost particle position k - 1/2 is occupied iff lambda_1 = k.
    let a = HalfInt::new(2.5).unwrap();
    assert!((d.correlation(&[a]) - law[3]).abs() < 1e-13);
    assert_eq!(d.as_map().len(), d.entries.len());
}

fn spec_strategy() -> impl Strategy<Value = Specialization> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(n, k)| {
        (prop::collection::vec(0.01f64..2.0, n), prop::collection::vec(0.01f64..2.0, k))
            .prop_map(|(x, y)| Specialization::new(x, y).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_cauchy_identity(s in spec_strategy()) {
        let sum: f64 = Partition::all_in_box(s.rows(), s.cols())
            .iter()
            .map(|l| schur(l, s.x()) * schur(&l.conjugate(), s.y()))
            .sum();
        prop_assert!(close(sum, e_product(&s), 1e-12), "{} vs {}", sum, e_product(&s));
        let d = enumerate_measure(&s).unwrap();
        prop_assert!(close(d.normalization, e_product(&s), 1e-12));
        prop_assert!((d.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weights_nonnegative_and_transpose_symmetric(s in spec_strategy()) {
        for l in Partition::all_in_box(s.rows(), s.cols()) {
            prop_assert!(measure_weight(&l, &s) >= 0.0);
            prop_assert!(transpose_symmetry_check(&l, &s, 1e-12));
            let a = measure_weight(&l, &s);
            let b = measure_weight(&l.conjugate(), &s.transpose());
            prop_assert!(close(a, b, 1e-12));
        }
    }
}
