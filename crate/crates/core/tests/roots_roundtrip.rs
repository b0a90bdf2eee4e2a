mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use sendovlab::polycore::{find_roots_default, from_roots};

use common::{bottleneck_matching, disk_points, rng};

#[test]
fn matching_finds_the_permutation() {
    let a = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
    let b = [a[2], a[0], a[1] + 1e-3];
    assert!((bottleneck_matching(&a, &b) - 1e-3).abs() < 1e-15);
}

#[test]
fn seeded_round_trips() {
    for seed in 0..100u64 {
        let mut r = rng(seed);
        let degree = 1 + (seed as usize % 12);
        let roots = disk_points(&mut r, degree);
        let p = from_roots(&roots, Complex64::ONE).unwrap();
        let found = find_roots_default(&p).unwrap();
        let err = bottleneck_matching(&roots, &found);
        assert!(err < 1e-8, "seed {seed} degree {degree}: error {err}");
    }
}

fn well_separated(roots: &[Complex64], gap: f64) -> bool {
    roots
        .iter()
        .enumerate()
        .all(|(i, a)| roots[i + 1..].iter().all(|b| (a - b).norm() > gap))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_with_leading(
        pts in prop::collection::vec((0.0f64..1.0, 0.0f64..std::f64::consts::TAU), 1..=12),
        lead_re in 0.5f64..3.0,
        lead_im in -1.0f64..1.0,
    ) {
        let roots: Vec<Complex64> = pts.iter().map(|&(r, a)| Complex64::from_polar(r.sqrt(), a)).collect();
        prop_assume!(well_separated(&roots, 1e-3));
        let p = from_roots(&roots, Complex64::new(lead_re, lead_im)).unwrap();
        let found = find_roots_default(&p).unwrap();
        prop_assert!(bottleneck_matching(&roots, &found) < 1e-8);
        prop_assert!(found.windows(2).all(|w| w[0].re <= w[1].re));
    }
}
