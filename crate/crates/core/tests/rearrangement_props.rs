mod common;

use common::{field, mask_from_bits, signed_value, sorted};
use polarlab_core::rearrangement::{class_of, extremal_max, extremal_min, is_rearrangement};
use polarlab_core::ScalarField;
use polarlab_oracle::pairing_extremes;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A mask with exactly `n` interior cells in one row.
fn row(n: usize) -> std::sync::Arc<polarlab_core::DomainMask> {
    mask_from_bits(n + 2, 3, 1.0, &[true]).unwrap()
}

fn pairing(f: &ScalarField, h: &ScalarField) -> f64 {
    f.dot(h).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn extremal_members_match_exhaustive_search(
        f0 in prop::collection::vec(signed_value(), 1..=8),
        h0 in prop::collection::vec(signed_value(), 8),
    ) {
        let m = row(f0.len());
        let f = field(&m, &f0);
        let h = field(&m, &h0);
        let class = class_of(&f);
        let (lo, hi) = pairing_extremes(f.values(), h.values());
        let fmax = extremal_max(&class, &h).unwrap();
        let fmin = extremal_min(&class, &h).unwrap();
        prop_assert!(class.contains(&fmax) && class.contains(&fmin));
        prop_assert!(pairing(&fmax, &h) >= hi - 1e-12 * hi.abs().max(1.0));
        prop_assert!(pairing(&fmin, &h) <= lo + 1e-12 * lo.abs().max(1.0));
    }

    #[test]
    fn random_members_sit_between_the_extremes(
        f0 in prop::collection::vec(signed_value(), 1..40),
        h0 in prop::collection::vec(signed_value(), 40),
        seed in any::<u64>(),
    ) {
        let m = row(f0.len());
        let f = field(&m, &f0);
        let h = field(&m, &h0);
        let class = class_of(&f);
        let hi = pairing(&extremal_max(&class, &h).unwrap(), &h);
        let lo = pairing(&extremal_min(&class, &h).unwrap(), &h);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = f0.iter().map(|v| v.abs()).sum::<f64>() * h0.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for _ in 0..25 {
            let mut v = f0.clone();
            v.shuffle(&mut rng);
            let p = pairing(&field(&m, &v), &h);
            prop_assert!(lo <= p + 1e-12 * scale && p <= hi + 1e-12 * scale);
        }
    }

    #[test]
    fn members_share_norms(f0 in prop::collection::vec(signed_value(), 1..30), seed in any::<u64>()) {
        let m = row(f0.len());
        let mut v = f0.clone();
        v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let f = field(&m, &f0);
        let g = field(&m, &v);
        prop_assert!(is_rearrangement(&f, &g).unwrap());
        prop_assert_eq!(sorted(f.values()), sorted(g.values()));
        let l1 = |x: &[f64]| sorted(x).iter().map(|a| a.abs()).sum::<f64>();
        let l2 = |x: &[f64]| sorted(x).iter().map(|a| a * a).sum::<f64>();
        prop_assert_eq!(l1(f.values()), l1(g.values()));
        prop_assert_eq!(l2(f.values()), l2(g.values()));
    }

    #[test]
    fn permuting_tied_profile_values_keeps_the_optimum(
        f0 in prop::collection::vec(signed_value(), 2..20),
        h0 in prop::collection::vec((0u8..3).prop_map(f64::from), 20),
        seed in any::<u64>(),
    ) {
        let m = row(f0.len());
        let f = field(&m, &f0);
        let class = class_of(&f);
        let h = field(&m, &h0);
        let mut shuffled = h.values().to_vec();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        // same multiset of profile values, so the optimal pairings coincide
        let h2 = field(&m, &shuffled);
        let a = pairing(&extremal_max(&class, &h).unwrap(), &h);
        let b = pairing(&extremal_max(&class, &h2).unwrap(), &h2);
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        let a = pairing(&extremal_min(&class, &h).unwrap(), &h);
        let b = pairing(&extremal_min(&class, &h2).unwrap(), &h2);
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
}
