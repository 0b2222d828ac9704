use dual_schur::partition::{HalfInt, Partition};
use dual_schur::Error;
use proptest::prelude::*;

fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn halves(v: &[f64]) -> Vec<HalfInt> {
    v.iter().map(|&x| HalfInt::new(x).unwrap()).collect()
}

#[test]
fn construction_normalizes_and_rejects() {
    assert_eq!(p(&[3, 1, 0, 0]).parts(), &[3, 1]);
    assert!(matches!(Partition::new(vec![1, 2]), Err(Error::InvalidArgument(_))));
    assert!(matches!(Partition::new(vec![2, 0, 1]), Err(Error::InvalidArgument(_))));
    assert!(Partition::new(vec![]).unwrap().is_empty());
}

#[test]
fn conjugate_examples() {
    assert_eq!(p(&[2, 2, 2, 1, 1]).conjugate(), p(&[5, 3]));
    assert_eq!(Partition::empty().conjugate(), Partition::empty());
    assert_eq!(p(&[3]).conjugate(), p(&[1, 1, 1]));
}

#[test]
fn complement_examples() {
    assert_eq!(p(&[2, 1]).complement(2, 3).unwrap(), p(&[2, 1]));
    assert_eq!(Partition::empty().complement(2, 2).unwrap(), p(&[2, 2]));
    let l = p(&[3, 1]);
    assert_eq!(l.complement(3, 4).unwrap().complement(3, 4).unwrap(), l);
    assert!(matches!(p(&[5]).complement(2, 4), Err(Error::BoxViolation { .. })));
}

#[test]
fn maya_examples() {
    assert_eq!(p(&[2, 2, 2, 1, 1]).maya(6), halves(&[1.5, 0.5, -0.5, -2.5, -3.5, -5.5]));
    assert_eq!(Partition::empty().maya(3), halves(&[-0.5, -1.5, -2.5]));
    assert_eq!(p(&[1]).maya(2), halves(&[0.5, -1.5]));
}

#[test]
fn occupation_matches_maya() {
    let l = p(&[4, 2, 2]);
    let m = l.maya(10);
    for f in -12..8 {
        let a = HalfInt::from_floor(f);
        assert_eq!(l.occupies(a), m.contains(&a) || f < -10, "{a}");
    }
}

#[test]
fn weighted_size_examples() {
    assert_eq!(p(&[2, 2, 2, 1, 1]).weighted_size(), 13);
    assert_eq!(Partition::empty().weighted_size(), 0);
    assert_eq!(p(&[7]).weighted_size(), 0);
}

#[test]
fn vacuum_profile_is_abs() {
    let pr = Partition::empty().profile(4, 6).unwrap();
    for i in -30..=30 {
        let u = i as f64 / 10.0;
        assert!((pr.eval(u) - u.abs()).abs() < 1e-12, "{u}");
    }
}

#[test]
fn full_box_profile_is_a_tent() {
    let (n, k) = (3usize, 5usize);
    let pr = Partition::rectangle(n, k).profile(n, k).unwrap();
    let nf = n as f64;
    let peak = (k as f64 - nf) / nf;
    let expected = |u: f64| {
        if u <= -1.0 {
            -u
        } else if u <= peak {
            u + 2.0
        } else if u <= k as f64 / nf {
            2.0 * k as f64 / nf - u
        } else {
            u
        }
    };
    for i in -40..=40 {
        let u = i as f64 / 10.0;
        assert!((pr.eval(u) - expected(u)).abs() < 1e-12, "{u}");
    }
    assert!((pr.eval(peak) - (k + n) as f64 / nf).abs() < 1e-12);
}

#[test]
fn single_box_profile() {
    let pr = p(&[1]).profile(1, 1).unwrap();
    for (u, w) in [(-2.0, 2.0), (-1.0, 1.0), (0.0, 2.0), (1.0, 1.0), (2.0, 2.0)] {
        assert!((pr.eval(u) - w).abs() < 1e-12, "{u}");
    }
}

#[test]
fn profile_requires_box() {
    assert!(matches!(p(&[3, 3]).profile(1, 3), Err(Error::BoxViolation { .. })));
}

#[test]
fn involutions_exhaustive_in_4x4() {
    let all = Partition::all_in_box(4, 4);
    assert_eq!(all.len() as u128, Partition::count_in_box(4, 4));
    assert_eq!(all.len(), 70);
    for l in &all {
        assert_eq!(&l.conjugate().conjugate(), l);
        assert_eq!(&l.complement(4, 4).unwrap().complement(4, 4).unwrap(), l);
        assert!(l.conjugate().fits(4, 4));
    }
}

#[test]
fn json_is_a_plain_array() {
    let l = p(&[3, 1, 1]);
    let s = serde_json::to_string(&l).unwrap();
    assert_eq!(s, "[3,1,1]");
    assert_eq!(serde_json::from_str::<Partition>(&s).unwrap(), l);
    assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
}

#[test]
fn half_integers() {
    assert!(HalfInt::new(1.0).is_err());
    assert_eq!(HalfInt::new(-0.5).unwrap().floor(), -1);
    assert_eq!(HalfInt::new(2.5).unwrap().diff(HalfInt::new(-1.5).unwrap()), 4);
    assert_eq!(serde_json::to_string(&HalfInt::from_floor(-2)).unwrap(), "-1.5");
}

fn partition_strategy() -> impl Strategy<Value = (Partition, usize, usize)> {
    (1usize..7, 1usize..7).prop_flat_map(|(n, k)| {
        prop::collection::vec(0..=k as u32, n).prop_map(move |mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            (Partition::new(v).unwrap(), n, k)
        })
    })
}

proptest! {
    #[test]
    fn conjugate_is_involution((l, n, k) in partition_strategy()) {
        prop_assert_eq!(l.conjugate().conjugate(), l.clone());
        prop_assert_eq!(l.conjugate().size(), l.size());
        prop_assert!(l.conjugate().fits(k, n));
    }

    #[test]
    fn maya_gaps((l, n, _k) in partition_strategy()) {
        let m = l.maya(n + 2);
        for i in 0..m.len() - 1 {
            let gap = m[i].diff(m[i + 1]);
            prop_assert!(gap >= 1);
            prop_assert_eq!(gap == 1, l.part(i + 1) == l.part(i + 2));
        }
    }

    #[test]
    fn profile_is_lipschitz_with_vacuum_tails((l, n, k) in partition_strategy()) {
        let pr = l.profile(n, k).unwrap();
        for w in pr.points.windows(2) {
            let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            prop_assert!((slope.abs() - 1.0).abs() < 1e-9);
        }
        let (u0, w0) = pr.points[0];
        let (u1, w1) = pr.points[pr.points.len() - 1];
        prop_assert!((w0 - u0.abs()).abs() < 1e-12);
        prop_assert!((w1 - u1.abs()).abs() < 1e-12);
    }

    #[test]
    fn profile_area_is_size((l, n, k) in partition_strategy()) {
        let pr = l.profile(n, k).unwrap();
        // Both the profile and |u| are linear between breakpoints, so the trapezoid
        // rule is exact.
        let area: f64 = pr.points.windows(2).map(|w| {
            let (a, fa) = w[0];
            let (b, fb) = w[1];
            0.5 * (b - a) * ((fa - a.abs()) + (fb - b.abs()))
        }).sum();
        let nf = n as f64;
        prop_assert!((0.5 * area * nf * nf - l.size() as f64).abs() < 1e-9);
    }

    #[test]
    fn complement_sizes_add_up((l, n, k) in partition_strategy()) {
        let c = l.complement(n, k).unwrap();
        prop_assert_eq!(c.size() + l.size(), (n * k) as u64);
        prop_assert_eq!(c.complement(n, k).unwrap(), l);
    }
}
