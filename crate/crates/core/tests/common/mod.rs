#![allow(dead_code)]

use std::sync::Arc;

use polarlab_core::geometry::{is_polarization_invariant, polarize_domain, DomainMask, Grid2D, HalfSpace, Normal};
use polarlab_core::ScalarField;
use polarlab_oracle::RawMask;
use proptest::prelude::*;

/// Mask on an `nx × ny` grid whose non-border cells are switched on by `bits`.
pub fn mask_from_bits(nx: usize, ny: usize, h: f64, bits: &[bool]) -> Option<Arc<DomainMask>> {
    let grid = Grid2D::new(nx, ny, h, [0.0, 0.0]).ok()?;
    let mut inside = vec![false; grid.len()];
    let mut k = 0;
    for (idx, slot) in inside.iter_mut().enumerate() {
        if !grid.is_border(grid.cell(idx)) {
            *slot = bits[k % bits.len()];
            k += 1;
        }
    }
    DomainMask::new(grid, inside).ok().map(Arc::new)
}

pub fn raw(mask: &DomainMask) -> RawMask<'_> {
    let g = mask.grid();
    RawMask { nx: g.nx, ny: g.ny, h: g.h, inside: mask.inside() }
}

/// Random mask with between 1 and roughly `(n − 2)²` interior cells.
pub fn arb_mask(max_n: usize) -> impl Strategy<Value = Arc<DomainMask>> {
    (3..=max_n, 3..=max_n, prop::collection::vec(prop::bool::weighted(0.7), 1..64))
        .prop_filter_map("empty mask", |(nx, ny, bits)| mask_from_bits(nx, ny, 1.0, &bits))
}

/// Half-space picked by a normal index and a raw level, snapped into the
/// grid's compatible range.
pub fn half_space_on(grid: &Grid2D, normal: usize, raw_level: i64) -> HalfSpace {
    let normal = Normal::ALL[normal % Normal::ALL.len()];
    let (mx, my) = (2 * (grid.nx as i64 - 1), 2 * (grid.ny as i64 - 1));
    let (lo, hi) = match normal {
        Normal::E1 | Normal::NegE1 => (0, mx),
        Normal::E2 | Normal::NegE2 => (0, my),
        Normal::Diag | Normal::NegDiag => (0, mx + my),
        Normal::AntiDiag | Normal::NegAntiDiag => (-my, mx),
    };
    let mut l = lo + raw_level.rem_euclid(hi - lo + 1);
    let diagonal = !matches!(normal, Normal::E1 | Normal::NegE1 | Normal::E2 | Normal::NegE2);
    if diagonal && l.rem_euclid(2) != 0 {
        l -= 1;
    }
    HalfSpace::from_level2(grid, normal, l)
}

/// A mask made invariant under `H` by polarizing it, together with `H`.
pub fn arb_invariant_mask(max_n: usize) -> impl Strategy<Value = (Arc<DomainMask>, HalfSpace)> {
    (arb_mask(max_n), 0usize..8, any::<i64>()).prop_filter_map("reflection leaves the grid", |(m, n, l)| {
        let h = half_space_on(m.grid(), n, l);
        let p = polarize_domain(&m, &h).ok()?;
        is_polarization_invariant(&p, &h).ok()?.then(|| (Arc::new(p), h))
    })
}

/// Values drawn from a small set so that ties are common.
pub fn value() -> impl Strategy<Value = f64> {
    prop_oneof![(0u8..4).prop_map(f64::from), 0.0..1.0f64]
}

pub fn signed_value() -> impl Strategy<Value = f64> {
    prop_oneof![(-2i8..3).prop_map(f64::from), -1.0..1.0f64]
}

pub fn field(mask: &Arc<DomainMask>, pool: &[f64]) -> ScalarField {
    let v = (0..mask.len()).map(|s| pool[s % pool.len()]).collect();
    ScalarField::new(mask.clone(), v).unwrap()
}

pub fn sorted(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Connected mask of `k` cells grown from the middle of a `(k + 2)`-square
/// grid by attaching random neighbors.
pub fn blob(k: usize, seed: u64) -> Arc<DomainMask> {
    use rand::{Rng, SeedableRng};
    let n = k.max(1) + 2;
    let grid = Grid2D::new(n, n, 1.0 / (n as f64 - 1.0), [0.0, 0.0]).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut inside = vec![false; grid.len()];
    let start = grid.index(polarlab_core::CellIndex::new(n / 2, n / 2));
    inside[start] = true;
    let mut cells = vec![start];
    while cells.len() < k {
        let c = grid.cell(cells[rng.random_range(0..cells.len())]);
        let (di, dj) = [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)][rng.random_range(0..4)];
        let (i, j) = (c.i as i64 + di, c.j as i64 + dj);
        if i < 1 || j < 1 || i >= n as i64 - 1 || j >= n as i64 - 1 {
            continue;
        }
        let idx = grid.index(polarlab_core::CellIndex::new(i as usize, j as usize));
        if !inside[idx] {
            inside[idx] = true;
            cells.push(idx);
        }
    }
    Arc::new(DomainMask::new(grid, inside).unwrap())
}
