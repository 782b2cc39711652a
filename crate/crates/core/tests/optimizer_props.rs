mod common;

use std::sync::Arc;

use common::{blob, raw};
use polarlab_core::optimizer::{
    check_antitone_coupling, check_monotone_coupling, maximize_lambda, minimize_lambda, Direction, Init, OptProblem,
    OptStatus,
};
use polarlab_core::rearrangement::RearrangementClass;
use polarlab_core::{DomainMask, ScalarField};
use polarlab_oracle::{dense_principal, distinct_permutations};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn class(mask: &Arc<DomainMask>, values: Vec<f64>) -> RearrangementClass {
    RearrangementClass::new(mask.clone(), values).unwrap()
}

/// `(min, max)` of `Λ` over every pair of class members, by dense solves.
fn exhaustive(mask: &Arc<DomainMask>, g: &RearrangementClass, v: &RearrangementClass) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for gp in distinct_permutations(g.sorted_values()) {
        for vp in distinct_permutations(v.sorted_values()) {
            let (lam, _) = dense_principal(&raw(mask), &vp, &gp).unwrap();
            lo = lo.min(lam);
            hi = hi.max(lam);
        }
    }
    (lo, hi)
}

/// Random small classes whose product has at most `cap` members.
fn small_classes(k: usize, rng: &mut ChaCha8Rng, cap: u128) -> (Vec<f64>, Vec<f64>) {
    loop {
        let mut g: Vec<f64> = (0..k).map(|_| f64::from(rng.random_range(0u8..3))).collect();
        g[0] = 2.0;
        let v: Vec<f64> = (0..k).map(|_| if rng.random_bool(0.7) { 0.0 } else { 5.0 }).collect();
        let count = |x: &[f64]| distinct_permutations(x).len() as u128;
        if count(&g) * count(&v) <= cap {
            return (g, v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn minimization_never_raises_lambda(k in 10usize..60, seed in any::<u64>()) {
        let m = blob(k, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g: Vec<f64> = (0..k).map(|_| if rng.random_bool(0.4) { rng.random_range(0.5..2.0) } else { 0.0 }).chain([1.0]).take(k).collect();
        let mut g = g;
        g[0] = 1.0;
        let v: Vec<f64> = (0..k).map(|_| if rng.random_bool(0.3) { rng.random_range(0.0..30.0) } else { 0.0 }).collect();
        let mut p = OptProblem::new(class(&m, g), class(&m, v), Direction::Minimize);
        p.seed = seed;
        let t = minimize_lambda(&p).unwrap();
        for w in t.records.windows(2) {
            prop_assert!(w[1].lambda <= w[0].lambda * (1.0 + 1e-10), "{} -> {}", w[0].lambda, w[1].lambda);
        }
        prop_assert!(t.lambda <= t.lambda0 * (1.0 + 1e-10));
        prop_assert!(p.g_class.contains(&t.g) && p.v_class.contains(&t.v));
        if t.status == OptStatus::Converged {
            prop_assert!(check_monotone_coupling(&t.phi, &t.g).unwrap());
            prop_assert!(check_antitone_coupling(&t.phi, &t.v).unwrap());
        }
    }

    #[test]
    fn minimization_finds_the_exhaustive_optimum(k in 2usize..=6, seed in any::<u64>()) {
        let m = blob(k, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, v) = small_classes(k, &mut rng, 30);
        let (gc, vc) = (class(&m, g), class(&m, v));
        let (lo, _) = exhaustive(&m, &gc, &vc);
        let mut p = OptProblem::new(gc, vc, Direction::Minimize);
        p.seed = seed;
        let t = minimize_lambda(&p).unwrap();
        prop_assert!((t.lambda - lo).abs() <= 1e-9 * lo, "{} vs exhaustive {}", t.lambda, lo);
    }

    #[test]
    fn maximization_on_four_cells(seed in any::<u64>()) {
        let m = blob(4, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, v) = small_classes(4, &mut rng, 30);
        let (gc, vc) = (class(&m, g), class(&m, v));
        let (_, hi) = exhaustive(&m, &gc, &vc);
        let mut p = OptProblem::new(gc, vc, Direction::Maximize);
        p.seed = seed;
        let t = maximize_lambda(&p).unwrap();
        prop_assert!(t.lambda >= (1.0 - 1e-9) * hi, "{} vs exhaustive {}", t.lambda, hi);
        prop_assert!(p.g_class.contains(&t.g) && p.v_class.contains(&t.v));
        for w in t.records.windows(2) {
            prop_assert!(w[1].lambda >= w[0].lambda);
        }
    }
}

#[test]
fn toy_minimum_over_twelve_assignments() {
    let m = blob(4, 1);
    let gc = class(&m, vec![2.0, 1.0, 1.0, 0.0]);
    let vc = class(&m, vec![0.0; 4]);
    assert_eq!(distinct_permutations(gc.sorted_values()).len(), 12);
    let (lo, _) = exhaustive(&m, &gc, &vc);
    for seed in 0..5 {
        let mut p = OptProblem::new(gc.clone(), vc.clone(), Direction::Minimize);
        p.seed = seed;
        let t = minimize_lambda(&p).unwrap();
        assert!((t.lambda - lo).abs() <= 1e-9 * lo);
    }
}

#[test]
fn singleton_classes_take_one_iteration() {
    let m = blob(20, 5);
    let gc = class(&m, vec![1.5; 20]);
    let vc = class(&m, vec![2.0; 20]);
    for dir in [Direction::Minimize, Direction::Maximize] {
        let t = polarlab_core::optimizer::optimize(&OptProblem::new(gc.clone(), vc.clone(), dir)).unwrap();
        assert_eq!(t.records.len(), 1);
        assert_eq!(t.status, OptStatus::Converged);
        assert_eq!(t.lambda, t.lambda0);
    }
}

#[test]
fn given_start_is_used() {
    let m = blob(12, 2);
    let g = ScalarField::new(m.clone(), (0..12).map(|s| if s < 4 { 1.0 } else { 0.0 }).collect()).unwrap();
    let v = ScalarField::zeros(m.clone());
    let mut p = OptProblem::new(class(&m, g.values().to_vec()), class(&m, vec![0.0; 12]), Direction::Minimize);
    p.init = Init::Given { g: g.clone(), v };
    let t = minimize_lambda(&p).unwrap();
    let (lam0, _) = dense_principal(&raw(&m), &[0.0; 12], g.values()).unwrap();
    assert!((t.lambda0 - lam0).abs() <= 1e-9 * lam0);
}

#[test]
fn minimization_is_deterministic_per_seed() {
    let m = blob(40, 8);
    let g: Vec<f64> = (0..40).map(|s| if s % 3 == 0 { 1.0 } else { 0.0 }).collect();
    let mut p = OptProblem::new(class(&m, g), class(&m, vec![0.0; 40]), Direction::Minimize);
    p.seed = 77;
    let a = minimize_lambda(&p).unwrap();
    let b = minimize_lambda(&p).unwrap();
    assert_eq!(a.records, b.records);
    assert_eq!(a.g, b.g);
}
