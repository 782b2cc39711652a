//! Randomized invariant batteries with a printable pass/fail table.

use std::fmt::Write as _;
use std::sync::Arc;

use polarlab_core::eigensolver::{solve_first, EigenOptions, SparseOperator};
use polarlab_core::geometry::{is_polarization_invariant, polarize_domain, Normal};
use polarlab_core::polarization::{dual_polarize, polarize, reverse_hl_gap};
use polarlab_core::rearrangement::{extremal_max, extremal_min, RearrangementClass};
use polarlab_core::{CellIndex, DomainMask, Grid2D, HalfSpace, ScalarField};
use polarlab_oracle::{dense_principal, pairing_extremes, RawMask};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type PolarizeFn = fn(&ScalarField, &HalfSpace) -> polarlab_core::Result<ScalarField>;

/// Replaceable pieces, so that a deliberately broken implementation can be
/// shown to fail its battery.
#[derive(Clone, Copy)]
pub struct SuiteHooks {
    pub polarize: PolarizeFn,
}

impl Default for SuiteHooks {
    fn default() -> Self {
        Self { polarize }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl BatteryResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub rows: Vec<BatteryResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(BatteryResult::passed)
    }

    pub fn table(&self) -> String {
        let mut out = format!("{:<26} {:>6} {:>9}  status\n", "battery", "cases", "failures");
        for r in &self.rows {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{:<26} {:>6} {:>9}  {status}", r.name, r.cases, r.failures);
            if let Some(msg) = &r.first_failure {
                let _ = writeln!(out, "    first failure: {msg}");
            }
        }
        out
    }
}

/// Connected mask of `k` cells grown from the middle of a `(k + 2)`-square
/// grid by attaching random neighbors.
pub fn random_blob(k: usize, rng: &mut impl Rng) -> Arc<DomainMask> {
    let n = k.max(1) + 2;
    let grid = Grid2D::new(n, n, 1.0 / (n as f64 - 1.0), [0.0, 0.0]).expect("n >= 3");
    let mut inside = vec![false; grid.len()];
    let start = grid.index(CellIndex::new(n / 2, n / 2));
    inside[start] = true;
    let mut cells = vec![start];
    while cells.len() < k {
        let c = grid.cell(cells[rng.random_range(0..cells.len())]);
        let (di, dj) = [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)][rng.random_range(0..4)];
        let (i, j) = (c.i as i64 + di, c.j as i64 + dj);
        if i < 1 || j < 1 || i >= n as i64 - 1 || j >= n as i64 - 1 {
            continue;
        }
        let idx = grid.index(CellIndex::new(i as usize, j as usize));
        if !inside[idx] {
            inside[idx] = true;
            cells.push(idx);
        }
    }
    Arc::new(DomainMask::new(grid, inside).expect("blob is interior"))
}

/// Random grid-compatible half-space; diagonal boundaries pass through cell
/// centers.
pub fn random_half_space(grid: &Grid2D, rng: &mut impl Rng) -> HalfSpace {
    let normal = Normal::ALL[rng.random_range(0..Normal::ALL.len())];
    let (mx, my) = (2 * (grid.nx as i64 - 1), 2 * (grid.ny as i64 - 1));
    let (lo, hi) = match normal {
        Normal::E1 | Normal::NegE1 => (0, mx),
        Normal::E2 | Normal::NegE2 => (0, my),
        Normal::Diag | Normal::NegDiag => (0, mx + my),
        Normal::AntiDiag | Normal::NegAntiDiag => (-my, mx),
    };
    let mut level = rng.random_range(lo..=hi);
    let axis = matches!(normal, Normal::E1 | Normal::NegE1 | Normal::E2 | Normal::NegE2);
    if !axis && level.rem_euclid(2) != 0 {
        level -= 1;
    }
    HalfSpace::from_level2(grid, normal, level)
}

/// A random mask made invariant under a random half-space by polarizing it.
pub fn random_invariant_mask(rng: &mut impl Rng) -> (Arc<DomainMask>, HalfSpace) {
    loop {
        let m = random_blob(rng.random_range(2..=30), rng);
        let h = random_half_space(m.grid(), rng);
        let Ok(p) = polarize_domain(&m, &h) else { continue };
        if is_polarization_invariant(&p, &h) == Ok(true) {
            return (Arc::new(p), h);
        }
    }
}

/// Values from a small pool so that ties are common.
fn tied_values(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| f64::from(rng.random_range(0u8..5))).collect()
}

fn raw(mask: &DomainMask) -> RawMask<'_> {
    let g = mask.grid();
    RawMask { nx: g.nx, ny: g.ny, h: g.h, inside: mask.inside() }
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn battery(
    name: &'static str,
    cases: usize,
    rng: &mut ChaCha8Rng,
    mut case: impl FnMut(&mut ChaCha8Rng) -> Result<(), Failure>,
) -> BatteryResult {
    let mut failures = 0;
    let mut first_failure = None;
    for k in 0..cases {
        let outcome = case(rng);
        if let Err(Failure(msg)) = outcome {
            failures += 1;
            first_failure.get_or_insert(format!("case {k}: {msg}"));
        }
    }
    BatteryResult { name, cases, failures, first_failure }
}

/// Why a single case failed.
struct Failure(String);

impl From<polarlab_core::Error> for Failure {
    fn from(e: polarlab_core::Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure(s)
    }
}

impl From<&str> for Failure {
    fn from(s: &str) -> Self {
        Failure(s.to_string())
    }
}

fn field(mask: &Arc<DomainMask>, values: Vec<f64>) -> Result<ScalarField, Failure> {
    Ok(ScalarField::new(mask.clone(), values)?)
}

/// Runs every battery with `counts` random cases each. Zero counts pass
/// vacuously.
pub fn run_property_suite(seed: u64, counts: usize, hooks: &SuiteHooks) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pol = hooks.polarize;
    let mut rows = Vec::new();

    rows.push(battery("equimeasurability", counts, &mut rng, |rng| {
        let (m, h) = random_invariant_mask(rng);
        let f = field(&m, tied_values(m.len(), rng))?;
        let fh = pol(&f, &h)?;
        if sorted(fh.values()) != sorted(f.values()) {
            return Err("polarized values are not a permutation".into());
        }
        if pol(&fh, &h)? != fh {
            return Err("polarization is not idempotent".into());
        }
        Ok(())
    }));

    rows.push(battery("hardy_littlewood", counts, &mut rng, |rng| {
        let (m, h) = random_invariant_mask(rng);
        let v = field(&m, tied_values(m.len(), rng))?;
        let w = field(&m, tied_values(m.len(), rng))?;
        let pv = pol(&v, &h)?;
        let pw = pol(&w, &h)?;
        let gap = pv.dot(&pw)? - v.dot(&w)?;
        if gap < 0.0 {
            return Err(format!("pairing fell by {}", -gap).into());
        }
        Ok(())
    }));

    rows.push(battery("reverse_hardy_littlewood", counts, &mut rng, |rng| {
        let (m, h) = random_invariant_mask(rng);
        let v = field(&m, tied_values(m.len(), rng))?;
        let w = field(&m, tied_values(m.len(), rng))?;
        let gap = reverse_hl_gap(&v, &w, &h)?;
        let direct = v.dot(&w)? - dual_polarize(&v, &h)?.dot(&pol(&w, &h)?)?;
        if gap < 0.0 || direct < 0.0 {
            return Err(format!("reverse gap {gap}, direct {direct}").into());
        }
        Ok(())
    }));

    rows.push(battery("extremal_brute_force", counts, &mut rng, |rng| {
        let k = rng.random_range(1..=8);
        let m = random_blob(k, rng);
        // dyadic values keep every pairing sum exact
        let vals: Vec<f64> = (0..k).map(|_| f64::from(rng.random_range(-8i8..=8)) / 4.0).collect();
        let hv: Vec<f64> = (0..k).map(|_| f64::from(rng.random_range(-8i8..=8)) / 8.0).collect();
        let class = RearrangementClass::new(m.clone(), vals.clone())?;
        let h = field(&m, hv.clone())?;
        let (lo, hi) = pairing_extremes(&vals, &hv);
        let top = extremal_max(&class, &h)?.dot(&h)?;
        let bottom = extremal_min(&class, &h)?.dot(&h)?;
        if top != hi || bottom != lo {
            return Err(format!("extremal sums ({bottom}, {top}) vs exhaustive ({lo}, {hi})").into());
        }
        Ok(())
    }));

    rows.push(battery("dense_eigen_oracle", counts, &mut rng, |rng| {
        let k = rng.random_range(1..=60);
        let m = random_blob(k, rng);
        let mut g: Vec<f64> =
            (0..k).map(|_| if rng.random_bool(0.5) { rng.random_range(0.1..3.0) } else { 0.0 }).collect();
        g[rng.random_range(0..k)] = 1.0;
        let v: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..20.0)).collect();
        let (lam_ref, phi_ref) = dense_principal(&raw(&m), &v, &g).ok_or("dense oracle found no eigenpair")?;
        let op = SparseOperator::new(&field(&m, v)?);
        let opts = EigenOptions { tol: 1e-12, ..EigenOptions::default() };
        let r = solve_first(&op, &g, &opts)?;
        let err = r.phi.values().iter().zip(&phi_ref).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        if (r.lambda - lam_ref).abs() > 1e-10 * lam_ref || err > 1e-10 {
            return Err(format!("lambda {} vs {lam_ref}, eigenvector error {err:e}", r.lambda).into());
        }
        Ok(())
    }));

    SuiteReport { rows }
}
