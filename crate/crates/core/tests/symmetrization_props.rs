mod common;

use std::sync::Arc;

use common::{field, sorted, value};
use polarlab_core::geometry::{make_annulus_mask, make_disk_mask, make_steiner_mask, Grid2D, Normal, SteinerShape};
use polarlab_core::polarization::dirichlet_energy;
use polarlab_core::symmetrization::{
    foliated_schwarz_symmetrize, foliated_schwarz_symmetrize_binned, is_foliated_schwarz_symmetric,
    is_schwarz_symmetric, is_steiner_symmetric, schwarz_symmetrize, steiner_symmetrize, RadialBinning,
};
use polarlab_core::{CellIndex, DomainMask, ScalarField};
use proptest::prelude::*;

fn disk(n: usize, r: f64) -> Arc<DomainMask> {
    let g = Grid2D::covering(n, 1.0).unwrap();
    Arc::new(make_disk_mask(g, g.middle(), r).unwrap())
}

fn steiner(n: usize, kind: u8, a: f64, b: f64) -> Arc<DomainMask> {
    let g = Grid2D::covering(n, 1.0).unwrap();
    let shape = match kind {
        0 => SteinerShape::Rectangle { half_width: a, half_height: b },
        1 => SteinerShape::Stadium { half_length: 0.5 * a, radius: 0.3 + 0.2 * b },
        _ => SteinerShape::Ellipse { a, b },
    };
    Arc::new(make_steiner_mask(g, shape).unwrap())
}

fn annulus(n: usize, inner: f64) -> Arc<DomainMask> {
    Arc::new(make_annulus_mask(Grid2D::covering(n, 1.0).unwrap(), 1.0, inner, 0.0).unwrap())
}

fn smooth(mask: &Arc<DomainMask>, a: f64, b: f64, c: f64) -> ScalarField {
    ScalarField::from_fn(mask.clone(), |_, x| 1.5 + (a * x[0] + b * x[1]).sin() + c * x[0] * x[1]).unwrap()
}

fn same_multiset(f: &ScalarField, g: &ScalarField) -> bool {
    sorted(f.values()) == sorted(g.values())
}

fn column_multisets(f: &ScalarField) -> Vec<Vec<f64>> {
    let nx = f.mask().grid().nx;
    let mut cols = vec![Vec::new(); nx];
    for (s, v) in f.values().iter().enumerate() {
        cols[f.mask().cell_of_slot(s).i].push(*v);
    }
    cols.iter().map(|c| sorted(c)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn schwarz_is_an_idempotent_symmetric_rearrangement(
        n in 8usize..24,
        r in 0.3..1.0f64,
        pool in prop::collection::vec(value(), 1..80),
    ) {
        let m = disk(n, r);
        let f = field(&m, &pool);
        let s = schwarz_symmetrize(&f).unwrap();
        prop_assert!(same_multiset(&f, &s));
        prop_assert_eq!(schwarz_symmetrize(&s).unwrap(), s.clone());
        prop_assert!(is_schwarz_symmetric(&s, 0.0).unwrap());
    }

    #[test]
    fn steiner_is_an_idempotent_symmetric_rearrangement(
        n in 8usize..24,
        kind in 0u8..3,
        a in 0.4..1.0f64,
        b in 0.3..1.0f64,
        pool in prop::collection::vec(value(), 1..80),
    ) {
        let m = steiner(n, kind, a, b);
        let f = field(&m, &pool);
        let s = steiner_symmetrize(&f).unwrap();
        prop_assert_eq!(column_multisets(&f), column_multisets(&s));
        prop_assert_eq!(steiner_symmetrize(&s).unwrap(), s.clone());
        prop_assert!(is_steiner_symmetric(&s, 0.0).unwrap());
    }

    #[test]
    fn foliated_is_an_idempotent_symmetric_rearrangement(
        n in 8usize..24,
        inner in 0.0..0.6f64,
        axis in 0usize..8,
        pool in prop::collection::vec(value(), 1..80),
    ) {
        let m = if inner < 0.1 { disk(n, 1.0) } else { annulus(n, inner) };
        let beta = Normal::ALL[axis];
        let f = field(&m, &pool);
        let s = foliated_schwarz_symmetrize(&f, beta).unwrap();
        let bins = RadialBinning::finest(&m);
        for bin in &bins.bins {
            let a: Vec<f64> = bin.iter().map(|&k| f.values()[k]).collect();
            let b: Vec<f64> = bin.iter().map(|&k| s.values()[k]).collect();
            prop_assert_eq!(sorted(&a), sorted(&b));
        }
        prop_assert_eq!(foliated_schwarz_symmetrize(&s, beta).unwrap(), s.clone());
        prop_assert!(is_foliated_schwarz_symmetric(&s, beta, 0.0).unwrap());
    }

    #[test]
    fn coarse_binning_is_still_a_rearrangement(
        n in 8usize..20,
        w in 1.0..4.0f64,
        pool in prop::collection::vec(value(), 1..80),
    ) {
        let m = disk(n, 1.0);
        let f = field(&m, &pool);
        let bins = RadialBinning::new(&m, w * m.grid().h).unwrap();
        let s = foliated_schwarz_symmetrize_binned(&f, Normal::E1, &bins).unwrap();
        prop_assert!(same_multiset(&f, &s));
        prop_assert_eq!(foliated_schwarz_symmetrize_binned(&s, Normal::E1, &bins).unwrap(), s);
    }

    #[test]
    fn schwarz_pairing_grows(
        n in 8usize..20,
        a in prop::collection::vec(value(), 1..60),
        b in prop::collection::vec(value(), 1..60),
    ) {
        let m = disk(n, 1.0);
        let f = field(&m, &a);
        let g = field(&m, &b);
        let lhs = f.dot(&g).unwrap();
        let rhs = schwarz_symmetrize(&f).unwrap().dot(&schwarz_symmetrize(&g).unwrap()).unwrap();
        prop_assert!(lhs <= rhs + 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn symmetrizers_do_not_raise_energy_of_smooth_fields(
        n in 8usize..24,
        a in -4.0..4.0f64,
        b in -4.0..4.0f64,
        c in -1.0..1.0f64,
    ) {
        let m = disk(n, 1.0);
        let f = smooth(&m, a, b, c);
        prop_assert!(dirichlet_energy(&schwarz_symmetrize(&f).unwrap()) <= dirichlet_energy(&f) + 1e-12);
        let m = steiner(n, 2, 0.95, 0.6);
        let f = smooth(&m, a, b, c);
        prop_assert!(dirichlet_energy(&steiner_symmetrize(&f).unwrap()) <= dirichlet_energy(&f) + 1e-12);
    }
}

#[test]
fn schwarz_peak_sits_next_to_the_middle() {
    let m = disk(17, 1.0);
    let f = ScalarField::from_fn(m.clone(), |c: CellIndex, _| ((c.i * 7 + c.j * 3) % 11) as f64 + 0.01 * c.i as f64)
        .unwrap();
    let s = schwarz_symmetrize(&f).unwrap();
    let top = m.cell_of_slot(s.argmax());
    let mid = m.grid().middle2();
    assert!((2 * top.i as i64 - mid[0]).abs() <= 1 && (2 * top.j as i64 - mid[1]).abs() <= 1);
}
