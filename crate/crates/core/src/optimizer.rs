//! Extremal eigenvalues over `E(g₀) × E(V₀)` by alternating an eigensolve
//! with extremal rearrangements against `φ²`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::eigensolver::{coercivity_check, solve_first_from, EigenOptions, SparseOperator};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::{DomainMask, Normal};
use crate::rearrangement::{extremal_max, extremal_min, RearrangementClass};
use crate::symmetrization::{foliated_defect, schwarz_defect, steiner_defect};

/// Values within this fraction of the largest are treated as tied when
/// ranking cells by `φ²`, so that assignments do not depend on round-off.
pub const TIE_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone)]
pub enum Init {
    /// Seeded random members of both classes.
    Random,
    /// Start from the given members.
    Given { g: ScalarField, v: ScalarField },
}

#[derive(Debug, Clone)]
pub struct OptProblem {
    pub mask: Arc<DomainMask>,
    pub g_class: RearrangementClass,
    pub v_class: RearrangementClass,
    pub direction: Direction,
    /// Stop once `|Λ_k − Λ_{k−1}|` drops to this; `None` means `1e-10·Λ₀`.
    pub tol_lambda: Option<f64>,
    pub max_iters: usize,
    pub seed: u64,
    pub init: Init,
    /// Independent starts; the best final state wins. Starts after the first
    /// are random members drawn from derived seeds.
    pub restarts: usize,
    /// Masks with at most this many cells get a swap search after each
    /// convergence, since the base scheme alone can stop at a fixed point
    /// that exchanging a few values would improve.
    pub polish_limit: usize,
    pub eigen: EigenOptions,
}

impl OptProblem {
    pub fn new(g_class: RearrangementClass, v_class: RearrangementClass, direction: Direction) -> Self {
        Self {
            mask: g_class.mask().clone(),
            g_class,
            v_class,
            direction,
            tol_lambda: None,
            max_iters: 200,
            seed: 0,
            init: Init::Random,
            restarts: 1,
            polish_limit: 32,
            eigen: EigenOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptStatus {
    Converged,
    Cycled,
    MaxIters,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterRecord {
    pub iter: usize,
    pub lambda: f64,
    pub g_hash: u64,
    pub v_hash: u64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct OptTrace {
    pub records: Vec<IterRecord>,
    pub lambda0: f64,
    pub lambda: f64,
    pub g: ScalarField,
    pub v: ScalarField,
    pub phi: ScalarField,
    pub status: OptStatus,
}

/// FNV-1a over the bit patterns of the values.
pub fn assignment_hash(values: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// Slots grouped by value, ascending; consecutive sorted values closer than
/// `rtol · max|values|` share a group.
pub fn tie_groups(values: &[f64], rtol: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let gap = rtol * scale;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for s in order {
        let v = values[s];
        if groups.is_empty() || v - prev > gap {
            groups.push(Vec::new());
        }
        groups.last_mut().expect("pushed").push(s);
        prev = v;
    }
    groups
}

/// `values` with every tie group collapsed onto one representative value.
pub fn snap_ties(values: &[f64], rtol: f64) -> Vec<f64> {
    let mut out = values.to_vec();
    for grp in tie_groups(values, rtol) {
        let rep = grp.iter().map(|&s| values[s]).fold(f64::NEG_INFINITY, f64::max);
        for s in grp {
            out[s] = rep;
        }
    }
    out
}

fn weight_profile(phi: &ScalarField) -> ScalarField {
    let sq: Vec<f64> = phi.values().iter().map(|p| p * p).collect();
    phi.with_values(snap_ties(&sq, TIE_RTOL)).expect("finite")
}

fn random_member(class: &RearrangementClass, rng: &mut ChaCha8Rng) -> ScalarField {
    let mut v = class.sorted_values().to_vec();
    v.shuffle(rng);
    ScalarField::new(class.mask().clone(), v).expect("class values are finite")
}

fn validate(p: &OptProblem) -> Result<(ScalarField, ScalarField)> {
    for c in [&p.g_class, &p.v_class] {
        if !(Arc::ptr_eq(c.mask(), &p.mask) || **c.mask() == *p.mask) {
            return Err(Error::MaskMismatch);
        }
    }
    if !p.g_class.has_positive() {
        return Err(Error::NoPositiveWeight);
    }
    if p.direction == Direction::Maximize && p.g_class.has_negative() {
        return Err(Error::InvalidParameter("maximization needs g0 >= 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (g, v) = match &p.init {
        Init::Random => (random_member(&p.g_class, &mut rng), random_member(&p.v_class, &mut rng)),
        Init::Given { g, v } => {
            if !p.g_class.contains(g) || !p.v_class.contains(v) {
                return Err(Error::InvalidParameter("initial fields are not members of their classes".into()));
            }
            (g.clone(), v.clone())
        }
    };
    Ok((g, v))
}

struct Solved {
    lambda: f64,
    phi: ScalarField,
    residual: f64,
}

fn solve(g: &ScalarField, v: &ScalarField, opts: &EigenOptions, check: bool, warm: Option<&[f64]>) -> Result<Solved> {
    let op = SparseOperator::new(v);
    if check {
        coercivity_check(&op)?;
    }
    let r = solve_first_from(&op, g.values(), opts, warm)?;
    Ok(Solved { lambda: r.lambda, phi: r.phi, residual: r.residual })
}

/// Alternating scheme: solve for `φ`, then rearrange `g` and `V` against
/// `φ²` (the direction decides which extremal member each receives), and
/// repeat until the assignment stops changing, revisits an earlier state,
/// `Λ` stalls, or the iteration budget runs out.
///
/// Minimization takes the full extremal step every time; it cannot raise
/// `Λ`. Maximization only accepts steps that raise `Λ`: it blends the target
/// ranking into the current one, finds the smallest blend weight that moves
/// any cell, and backs off toward that weight until `Λ` goes up. The back-off
/// starts a few times above the last accepted step, and the full step is
/// tried before the scheme reports convergence.
pub fn optimize(p: &OptProblem) -> Result<OptTrace> {
    let mut best: Option<OptTrace> = None;
    for r in 0..p.restarts.max(1) {
        let mut q = p.clone();
        if r > 0 {
            q.seed = p.seed.wrapping_add((r as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            q.init = Init::Random;
        }
        let t = run_start(&q)?;
        let better = best.as_ref().is_none_or(|b| match p.direction {
            Direction::Minimize => t.lambda < b.lambda,
            Direction::Maximize => t.lambda > b.lambda,
        });
        if better {
            best = Some(t);
        }
    }
    Ok(best.expect("at least one start"))
}

fn run_base(p: &OptProblem) -> Result<OptTrace> {
    match p.direction {
        Direction::Minimize => alternate(p),
        Direction::Maximize => ascend(p),
    }
}

/// One start: the base scheme, then alternating swap search and base scheme
/// until no exchange of two cell values improves `Λ`.
fn run_start(p: &OptProblem) -> Result<OptTrace> {
    let mut t = run_base(p)?;
    if p.mask.len() > p.polish_limit {
        return Ok(t);
    }
    let check = p.v_class.has_negative();
    let tol = p.tol_lambda.unwrap_or(1e-10 * t.lambda0.abs());
    while let Some((g, v)) = improving_swap(p, &t, check, tol)? {
        let mut q = p.clone();
        q.init = Init::Given { g, v };
        let next = run_base(&q)?;
        let offset = t.records.len();
        t.records.extend(next.records.iter().map(|r| IterRecord { iter: r.iter + offset, ..*r }));
        t = OptTrace { records: t.records, lambda0: t.lambda0, ..next };
    }
    Ok(t)
}

fn gain(direction: Direction, from: f64, to: f64) -> f64 {
    match direction {
        Direction::Minimize => from - to,
        Direction::Maximize => to - from,
    }
}

/// Exchanges of two unequal values within `g` (field 0) or within `V` (field 1).
fn swap_moves(t: &OptTrace) -> Vec<(usize, usize, usize)> {
    let mut moves = Vec::new();
    for (which, f) in [&t.g, &t.v].into_iter().enumerate() {
        let vals = f.values();
        for a in 0..vals.len() {
            for b in a + 1..vals.len() {
                if vals[a] != vals[b] {
                    moves.push((which, a, b));
                }
            }
        }
    }
    moves
}

/// First move that, taken alone or followed by a run of the base scheme,
/// carries `Λ` the wanted way by more than `tol`. Moves are single swaps, and
/// on masks with at most a quarter of `polish_limit` cells also pairs of swaps.
fn improving_swap(p: &OptProblem, t: &OptTrace, check: bool, tol: f64) -> Result<Option<(ScalarField, ScalarField)>> {
    let moves = swap_moves(t);
    let n = p.mask.len();
    let mut combos: Vec<Vec<usize>> = (0..moves.len()).map(|i| vec![i]).collect();
    if 4 * n <= p.polish_limit {
        for i in 0..moves.len() {
            for j in i + 1..moves.len() {
                combos.push(vec![i, j]);
            }
        }
    }
    for combo in combos {
        let mut fields = [t.g.values().to_vec(), t.v.values().to_vec()];
        for &m in &combo {
            let (which, a, b) = moves[m];
            fields[which].swap(a, b);
        }
        let [gv, vv] = fields;
        let (g, v) = (t.g.with_values(gv)?, t.v.with_values(vv)?);
        let s = solve(&g, &v, &p.eigen, check, Some(t.phi.values()))?;
        if gain(p.direction, t.lambda, s.lambda) > tol {
            return Ok(Some((g, v)));
        }
        // a move that looks worse can still open the way to a better fixed
        // point, so let the base scheme run from it
        let mut q = p.clone();
        q.init = Init::Given { g, v };
        let t2 = run_base(&q)?;
        if gain(p.direction, t.lambda, t2.lambda) > tol {
            return Ok(Some((t2.g, t2.v)));
        }
    }
    Ok(None)
}

fn alternate(p: &OptProblem) -> Result<OptTrace> {
    let (mut g, mut v) = validate(p)?;
    let check = p.v_class.has_negative();
    let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
    let mut records = Vec::new();
    let mut warm: Option<Vec<f64>> = None;
    let mut best: Option<(f64, ScalarField, ScalarField, ScalarField)> = None;
    let mut lambda0 = f64::NAN;
    let mut tol = p.tol_lambda.unwrap_or(0.0);
    let mut status = OptStatus::MaxIters;
    let mut last: Option<(f64, ScalarField, ScalarField, ScalarField)> = None;

    for k in 0..p.max_iters.max(1) {
        let s = solve(&g, &v, &p.eigen, check, warm.as_deref())?;
        let key = (assignment_hash(g.values()), assignment_hash(v.values()));
        seen.insert(key, k);
        records.push(IterRecord { iter: k, lambda: s.lambda, g_hash: key.0, v_hash: key.1, residual: s.residual });
        if k == 0 {
            lambda0 = s.lambda;
            if p.tol_lambda.is_none() {
                tol = 1e-10 * s.lambda.abs();
            }
        }
        if best.as_ref().is_none_or(|b| s.lambda < b.0) {
            best = Some((s.lambda, g.clone(), v.clone(), s.phi.clone()));
        }
        let stalled = last.as_ref().is_some_and(|l| (l.0 - s.lambda).abs() <= tol);
        last = Some((s.lambda, g.clone(), v.clone(), s.phi.clone()));
        if stalled {
            status = OptStatus::Converged;
            break;
        }

        let w = weight_profile(&s.phi);
        let g_next = extremal_max(&p.g_class, &w)?;
        let v_next = extremal_min(&p.v_class, &w)?;
        warm = Some(s.phi.into_values());
        if g_next == g && v_next == v {
            status = OptStatus::Converged;
            break;
        }
        let next_key = (assignment_hash(g_next.values()), assignment_hash(v_next.values()));
        if seen.contains_key(&next_key) {
            status = OptStatus::Cycled;
            break;
        }
        g = g_next;
        v = v_next;
    }

    // a fixed point or stall reports its own state; a cycle or an exhausted
    // budget reports the best state visited
    let (lambda, g, v, phi) = match status {
        OptStatus::Converged => last.expect("at least one solve"),
        _ => best.expect("at least one solve"),
    };
    Ok(OptTrace { records, lambda0, lambda, g, v, phi, status })
}

/// Ranks in `[0, 1]`, ascending, with tied values sharing their mean rank.
fn unit_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = 0.5 * (i + j) as f64 / (n - 1) as f64;
        for &s in &order[i..=j] {
            out[s] = r;
        }
        i = j + 1;
    }
    out
}

/// Member of `class` ranked by `(1 − t)·current + t·target`, both given as
/// unit ranks where a larger rank receives a larger value.
fn blended(class: &RearrangementClass, current: &[f64], target: &[f64], t: f64) -> Result<ScalarField> {
    let mix: Vec<f64> = current.iter().zip(target).map(|(c, w)| (1.0 - t) * c + t * w).collect();
    let profile = ScalarField::new(class.mask().clone(), mix)?;
    extremal_max(class, &profile)
}

fn ascend(p: &OptProblem) -> Result<OptTrace> {
    let (mut g, mut v) = validate(p)?;
    let check = p.v_class.has_negative();
    let mut s = solve(&g, &v, &p.eigen, check, None)?;
    let lambda0 = s.lambda;
    let tol = p.tol_lambda.unwrap_or(1e-10 * lambda0.abs());
    let mut records = Vec::new();
    let mut status = OptStatus::MaxIters;
    let mut last_gap = None;

    for k in 0..p.max_iters.max(1) {
        let key = (assignment_hash(g.values()), assignment_hash(v.values()));
        records.push(IterRecord { iter: k, lambda: s.lambda, g_hash: key.0, v_hash: key.1, residual: s.residual });
        if k + 1 == p.max_iters.max(1) {
            break;
        }
        let w = weight_profile(&s.phi);
        let w_rank = unit_ranks(w.values());
        // g wants the small weights, V the large ones
        let g_target: Vec<f64> = w_rank.iter().map(|r| 1.0 - r).collect();
        let g_rank = unit_ranks(g.values());
        let v_rank = unit_ranks(v.values());
        let step = |t: f64| -> Result<(ScalarField, ScalarField)> {
            Ok((blended(&p.g_class, &g_rank, &g_target, t)?, blended(&p.v_class, &v_rank, &w_rank, t)?))
        };
        // largest blend weight that still leaves the assignment unchanged
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            let (gm, vm) = step(mid)?;
            if gm == g && vm == v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut accepted = None;
        // accepted steps change slowly, so first back off from a few times the
        // last one, and only then from the full step
        let full = 1.0 - lo;
        let starts = match last_gap {
            Some(l) if 4.0 * l < full => vec![4.0 * l, full],
            _ => vec![full],
        };
        let mut rejected: Option<(ScalarField, ScalarField)> = None;
        'starts: for mut gap in starts {
            while gap > 1e-15 {
                let (g_try, v_try) = step(lo + gap)?;
                gap *= 0.5;
                if g_try == g && v_try == v {
                    break;
                }
                // near `lo` the halving keeps landing on the same assignment
                if rejected.as_ref().is_some_and(|(rg, rv)| *rg == g_try && *rv == v_try) {
                    continue;
                }
                let s_try = solve(&g_try, &v_try, &p.eigen, check, Some(s.phi.values()))?;
                if s_try.lambda > s.lambda {
                    accepted = Some((g_try, v_try, s_try));
                    last_gap = Some(2.0 * gap);
                    break 'starts;
                }
                rejected = Some((g_try, v_try));
            }
        }
        let Some((g_next, v_next, s_next)) = accepted else {
            status = OptStatus::Converged;
            break;
        };
        let gain = s_next.lambda - s.lambda;
        g = g_next;
        v = v_next;
        s = s_next;
        if gain <= tol {
            let key = (assignment_hash(g.values()), assignment_hash(v.values()));
            records.push(IterRecord {
                iter: k + 1,
                lambda: s.lambda,
                g_hash: key.0,
                v_hash: key.1,
                residual: s.residual,
            });
            status = OptStatus::Converged;
            break;
        }
    }
    Ok(OptTrace { records, lambda0, lambda: s.lambda, g, v, phi: s.phi, status })
}

pub fn minimize_lambda(p: &OptProblem) -> Result<OptTrace> {
    let mut q = p.clone();
    q.direction = Direction::Minimize;
    optimize(&q)
}

pub fn maximize_lambda(p: &OptProblem) -> Result<OptTrace> {
    let mut q = p.clone();
    q.direction = Direction::Maximize;
    optimize(&q)
}

fn coupling(phi: &ScalarField, f: &ScalarField, increasing: bool) -> Result<bool> {
    if !phi.same_mask(f) {
        return Err(Error::MaskMismatch);
    }
    let sq: Vec<f64> = phi.values().iter().map(|p| p * p).collect();
    let fv = f.values();
    let mut prev_hi = f64::NEG_INFINITY;
    let mut prev_lo = f64::INFINITY;
    for grp in tie_groups(&sq, TIE_RTOL) {
        let lo = grp.iter().map(|&s| fv[s]).fold(f64::INFINITY, f64::min);
        let hi = grp.iter().map(|&s| fv[s]).fold(f64::NEG_INFINITY, f64::max);
        if increasing && lo < prev_hi {
            return Ok(false);
        }
        if !increasing && hi > prev_lo {
            return Ok(false);
        }
        prev_hi = hi;
        prev_lo = lo;
    }
    Ok(true)
}

/// True when `g` is a non-decreasing function of `φ` (cells tied in `φ` may
/// carry any order).
pub fn check_monotone_coupling(phi: &ScalarField, g: &ScalarField) -> Result<bool> {
    coupling(phi, g, true)
}

/// True when `v` is a non-increasing function of `φ`.
pub fn check_antitone_coupling(phi: &ScalarField, v: &ScalarField) -> Result<bool> {
    coupling(phi, v, false)
}

/// Which symmetry statements apply to an optimizer run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymmetryScenario {
    Disk,
    Steiner,
    ConcentricAnnulus,
    ShiftedAnnulus { outer: f64, inner: f64, shift: f64 },
    Plain,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SymmetryReport {
    pub schwarz_defect_phi: Option<f64>,
    pub schwarz_defect_g: Option<f64>,
    pub steiner_defect_phi: Option<f64>,
    pub steiner_defect_g: Option<f64>,
    /// Common axis minimizing the larger of the foliated defects of `φ` and `g`.
    pub foliation_axis: Option<&'static str>,
    pub foliated_defect_phi: Option<f64>,
    pub foliated_defect_g: Option<f64>,
    /// Defect of `V` about the opposite axis.
    pub foliated_defect_v_opposite: Option<f64>,
    /// Cell center of the largest `φ`, relative to the grid middle.
    pub argmax: [f64; 2],
    pub argmax_in_l_omega: Option<bool>,
    pub g_radial: bool,
}

/// True when cells at the same distance from the grid middle carry equal values.
pub fn is_radial(f: &ScalarField) -> bool {
    let mask = f.mask();
    let m = mask.grid().middle2();
    let mut by_ring: HashMap<i64, f64> = HashMap::new();
    for (s, c) in mask.cells().enumerate() {
        let (dx, dy) = (2 * c.i as i64 - m[0], 2 * c.j as i64 - m[1]);
        let v = f.values()[s];
        if let Some(&u) = by_ring.get(&(dx * dx + dy * dy)) {
            if u != v {
                return false;
            }
        } else {
            by_ring.insert(dx * dx + dy * dy, v);
        }
    }
    true
}

fn best_common_axis(phi: &ScalarField, g: &ScalarField, axes: &[Normal]) -> Result<Option<(Normal, f64, f64)>> {
    let mut best: Option<(Normal, f64, f64)> = None;
    for &beta in axes {
        let (dp, dg) = match (foliated_defect(phi, beta), foliated_defect(g, beta)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(Error::NonRadialMask), _) | (_, Err(Error::NonRadialMask)) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        if best.is_none_or(|b| dp.max(dg) < b.1.max(b.2)) {
            best = Some((beta, dp, dg));
        }
    }
    Ok(best)
}

pub fn symmetry_report(trace: &OptTrace, scenario: SymmetryScenario) -> Result<SymmetryReport> {
    let phi = &trace.phi;
    let grid = *phi.mask().grid();
    let mid = grid.middle();
    let c = grid.center(phi.mask().cell_of_slot(phi.argmax()));
    let argmax = [c[0] - mid[0], c[1] - mid[1]];
    let mut rep = SymmetryReport { argmax, g_radial: is_radial(&trace.g), ..Default::default() };
    match scenario {
        SymmetryScenario::Disk => {
            rep.schwarz_defect_phi = Some(schwarz_defect(phi)?);
            rep.schwarz_defect_g = Some(schwarz_defect(&trace.g)?);
        }
        SymmetryScenario::Steiner => {
            rep.steiner_defect_phi = Some(steiner_defect(phi)?);
            rep.steiner_defect_g = Some(steiner_defect(&trace.g)?);
        }
        SymmetryScenario::ConcentricAnnulus | SymmetryScenario::ShiftedAnnulus { .. } => {
            let axes: &[Normal] = match scenario {
                SymmetryScenario::ShiftedAnnulus { .. } => &[Normal::NegE1],
                _ => &Normal::ALL,
            };
            if let Some((beta, dp, dg)) = best_common_axis(phi, &trace.g, axes)? {
                rep.foliation_axis = Some(beta.name());
                rep.foliated_defect_phi = Some(dp);
                rep.foliated_defect_g = Some(dg);
                rep.foliated_defect_v_opposite = match foliated_defect(&trace.v, beta.opposite()) {
                    Ok(d) => Some(d),
                    Err(Error::NonRadialMask) => None,
                    Err(e) => return Err(e),
                };
            }
            if let SymmetryScenario::ShiftedAnnulus { outer, inner, shift } = scenario {
                rep.argmax_in_l_omega = Some(near_l_omega(argmax, outer, inner, shift, grid.h));
            }
        }
        SymmetryScenario::Plain => {}
    }
    Ok(rep)
}

/// Within one cell width of `{x2 = 0, −(R+r−t)/2 ≤ x1 < min(0, t−r)}`.
pub fn near_l_omega(x: [f64; 2], outer: f64, inner: f64, shift: f64, h: f64) -> bool {
    let lo = -(outer + inner - shift) / 2.0;
    let hi = (shift - inner).min(0.0);
    let dx = if x[0] < lo {
        lo - x[0]
    } else if x[0] > hi {
        x[0] - hi
    } else {
        0.0
    };
    (dx * dx + x[1] * x[1]).sqrt() <= h * (1.0 + 1e-9)
}
