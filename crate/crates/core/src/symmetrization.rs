//! Schwarz, Steiner and foliated Schwarz symmetrization of nonnegative
//! fields, and characterizations of each symmetry through polarizations.
//!
//! All radial notions are taken about the grid middle. Distances are
//! compared exactly as integers in doubled index coordinates.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::{
    half_spaces_containing, half_spaces_parallel, half_spaces_through, is_polarization_invariant, DomainMask,
    HalfSpace, Normal,
};
use crate::polarization::polarize;

/// Doubled displacement of interior slot `s` from the grid middle.
fn offset2(mask: &DomainMask, s: usize) -> [i64; 2] {
    let c = mask.cell_of_slot(s);
    let m = mask.grid().middle2();
    [2 * c.i as i64 - m[0], 2 * c.j as i64 - m[1]]
}

fn d2(p: [i64; 2]) -> i64 {
    p[0] * p[0] + p[1] * p[1]
}

/// Values of `f` sorted non-increasing and written to `slots` in order.
fn assign_sorted(f: &ScalarField, out: &mut [f64], slots: &[usize]) {
    let mut vals: Vec<f64> = slots.iter().map(|&s| f.values()[s]).collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    for (&s, v) in slots.iter().zip(vals) {
        out[s] = v;
    }
}

/// True if every non-border cell strictly closer to the grid middle than
/// some interior cell is itself interior.
pub fn is_disk_mask(mask: &DomainMask) -> bool {
    let grid = mask.grid();
    let m = grid.middle2();
    let far_in = (0..mask.len()).map(|s| d2(offset2(mask, s))).max().unwrap_or(0);
    (0..grid.len()).all(|idx| {
        let c = grid.cell(idx);
        let r = d2([2 * c.i as i64 - m[0], 2 * c.j as i64 - m[1]]);
        grid.is_border(c) || mask.inside()[idx] || r > far_in
    })
}

/// Largest value at the cell nearest the middle, then outward; cells at
/// equal distance are ordered by polar angle, then by index.
pub fn schwarz_symmetrize(f: &ScalarField) -> Result<ScalarField> {
    f.check_nonnegative()?;
    let mask = f.mask();
    if !is_disk_mask(mask) {
        log::warn!("schwarz_symmetrize: mask is not a disk about the grid middle");
    }
    let key = |s: usize| {
        let p = offset2(mask, s);
        let mut a = (p[1] as f64).atan2(p[0] as f64);
        if a < 0.0 {
            a += std::f64::consts::TAU;
        }
        (d2(p), a)
    };
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(a.cmp(&b))
    });
    let mut out = vec![0.0; f.len()];
    assign_sorted(f, &mut out, &order);
    f.with_values(out)
}

/// Row order in which a column run `lo..=hi` receives its sorted values:
/// outward from the midline, the lower row first at equal distance.
fn steiner_order(lo: usize, hi: usize) -> Vec<usize> {
    let n = hi - lo + 1;
    let mut rows = Vec::with_capacity(n);
    if n % 2 == 1 {
        let c = (lo + hi) / 2;
        rows.push(c);
        for k in 1..=n / 2 {
            rows.push(c - k);
            rows.push(c + k);
        }
    } else {
        let a = (lo + hi - 1) / 2;
        for k in 0..n / 2 {
            rows.push(a - k);
            rows.push(a + 1 + k);
        }
    }
    rows
}

pub fn steiner_symmetrize(f: &ScalarField) -> Result<ScalarField> {
    f.check_nonnegative()?;
    let mask = f.mask();
    let runs = mask.steiner_columns()?;
    let mut out = vec![0.0; f.len()];
    for (i, lo, hi) in runs {
        let slots: Vec<usize> = steiner_order(lo, hi)
            .into_iter()
            .map(|j| mask.slot(crate::geometry::CellIndex::new(i, j)).expect("inside run"))
            .collect();
        assign_sorted(f, &mut out, &slots);
    }
    f.with_values(out)
}

/// Interior slots grouped into shells `k·w ≤ r < (k+1)·w` about the grid
/// middle, innermost first; empty shells are dropped.
#[derive(Debug, Clone)]
pub struct RadialBinning {
    pub center: [f64; 2],
    pub bin_width: f64,
    pub bins: Vec<Vec<usize>>,
}

impl RadialBinning {
    pub fn new(mask: &DomainMask, bin_width: f64) -> Result<Self> {
        let h = mask.grid().h;
        if !(bin_width.is_finite() && bin_width >= h) {
            return Err(Error::InvalidParameter(format!("bin width {bin_width} is below the grid spacing {h}")));
        }
        let mut keyed: Vec<(usize, usize)> = (0..mask.len())
            .map(|s| {
                let r = (d2(offset2(mask, s)) as f64).sqrt() * 0.5 * h;
                ((r / bin_width).floor() as usize, s)
            })
            .collect();
        keyed.sort();
        let mut bins: Vec<Vec<usize>> = Vec::new();
        let mut last = usize::MAX;
        for (b, s) in keyed {
            if b != last {
                bins.push(Vec::new());
                last = b;
            }
            bins.last_mut().expect("pushed").push(s);
        }
        Ok(Self { center: mask.grid().middle(), bin_width, bins })
    }

    pub fn finest(mask: &DomainMask) -> Self {
        Self::new(mask, mask.grid().h).expect("h is a valid width")
    }
}

/// Cosine of the angle between the cell offset and `beta`; 1 at the middle.
fn cos_to(mask: &DomainMask, s: usize, beta: Normal) -> f64 {
    let p = offset2(mask, s);
    let r2 = d2(p);
    if r2 == 0 {
        return 1.0;
    }
    beta.dot2_scaled(p) as f64 / ((r2 as f64).sqrt() * beta.dot_scale())
}

/// The masks for which foliated symmetrization about `beta` is defined:
/// those left unchanged by every half-space through the middle containing `beta`.
fn check_radial(mask: &DomainMask, beta: Normal) -> Result<Vec<HalfSpace>> {
    let family = foliated_family(mask, beta);
    for h in &family {
        if !is_polarization_invariant(mask, h)? {
            return Err(Error::NonRadialMask);
        }
    }
    Ok(family)
}

pub fn foliated_schwarz_symmetrize(f: &ScalarField, beta: Normal) -> Result<ScalarField> {
    foliated_schwarz_symmetrize_binned(f, beta, &RadialBinning::finest(f.mask()))
}

/// Within each shell, values sorted non-increasing and assigned by
/// increasing angle from `beta` (ties by index).
pub fn foliated_schwarz_symmetrize_binned(
    f: &ScalarField,
    beta: Normal,
    binning: &RadialBinning,
) -> Result<ScalarField> {
    f.check_nonnegative()?;
    let mask = f.mask();
    check_radial(mask, beta)?;
    let mut out = vec![0.0; f.len()];
    for bin in &binning.bins {
        let mut order = bin.clone();
        order.sort_by(|&a, &b| cos_to(mask, b, beta).total_cmp(&cos_to(mask, a, beta)).then(a.cmp(&b)));
        assign_sorted(f, &mut out, &order);
    }
    f.with_values(out)
}

/// Grid-compatible half-spaces containing the grid middle strictly.
pub fn schwarz_family(mask: &DomainMask) -> Vec<HalfSpace> {
    half_spaces_containing(mask.grid(), mask.grid().middle2())
}

/// Half-spaces with boundary parallel to the Steiner midline and containing it.
pub fn steiner_family(mask: &DomainMask) -> Result<Vec<HalfSpace>> {
    let mid = mask.steiner_midline2().ok_or(Error::NotSteinerMask)?;
    Ok(half_spaces_parallel(mask.grid(), mid))
}

/// Half-spaces whose boundary passes through the grid middle and which contain `beta`.
pub fn foliated_family(mask: &DomainMask, beta: Normal) -> Vec<HalfSpace> {
    half_spaces_through(mask.grid(), mask.grid().middle2(), beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectMetric {
    /// `max |f_H − f|`
    Sup,
    /// `‖f_H − f‖₂ / ‖f‖₂`
    RelativeL2,
}

fn distance(f: &ScalarField, g: &ScalarField, metric: DefectMetric) -> f64 {
    let diff = f.values().iter().zip(g.values()).map(|(a, b)| (a - b).abs());
    match metric {
        DefectMetric::Sup => diff.fold(0.0, f64::max),
        DefectMetric::RelativeL2 => {
            let n = f.norm2();
            if n == 0.0 {
                0.0
            } else {
                diff.map(|d| d * d).sum::<f64>().sqrt() / n
            }
        }
    }
}

/// Largest change of `f` under polarization by any half-space in `family`
/// for which the mask is invariant; the count of such half-spaces is returned too.
pub fn family_defect(f: &ScalarField, family: &[HalfSpace], metric: DefectMetric) -> Result<(f64, usize)> {
    let mut worst: f64 = 0.0;
    let mut used = 0;
    for h in family {
        if !is_polarization_invariant(f.mask(), h)? {
            continue;
        }
        worst = worst.max(distance(&polarize(f, h)?, f, metric));
        used += 1;
    }
    Ok((worst, used))
}

pub fn schwarz_defect(f: &ScalarField) -> Result<f64> {
    Ok(family_defect(f, &schwarz_family(f.mask()), DefectMetric::RelativeL2)?.0)
}

pub fn steiner_defect(f: &ScalarField) -> Result<f64> {
    Ok(family_defect(f, &steiner_family(f.mask())?, DefectMetric::RelativeL2)?.0)
}

pub fn foliated_defect(f: &ScalarField, beta: Normal) -> Result<f64> {
    let family = check_radial(f.mask(), beta)?;
    Ok(family_defect(f, &family, DefectMetric::RelativeL2)?.0)
}

pub fn is_schwarz_symmetric(f: &ScalarField, tol: f64) -> Result<bool> {
    Ok(family_defect(f, &schwarz_family(f.mask()), DefectMetric::Sup)?.0 <= tol)
}

pub fn is_steiner_symmetric(f: &ScalarField, tol: f64) -> Result<bool> {
    Ok(family_defect(f, &steiner_family(f.mask())?, DefectMetric::Sup)?.0 <= tol)
}

pub fn is_foliated_schwarz_symmetric(f: &ScalarField, beta: Normal, tol: f64) -> Result<bool> {
    let family = check_radial(f.mask(), beta)?;
    Ok(family_defect(f, &family, DefectMetric::Sup)?.0 <= tol)
}

/// First admissible direction (in [`Normal::ALL`] order) about which `f` is
/// foliated Schwarz symmetric within `tol` under `metric`. Directions whose
/// half-space family does not preserve the mask are skipped.
pub fn find_foliation_axis_with(f: &ScalarField, tol: f64, metric: DefectMetric) -> Result<Option<Normal>> {
    for beta in Normal::ALL {
        let family = match check_radial(f.mask(), beta) {
            Ok(fam) => fam,
            Err(Error::NonRadialMask) => continue,
            Err(e) => return Err(e),
        };
        if family_defect(f, &family, metric)?.0 <= tol {
            return Ok(Some(beta));
        }
    }
    Ok(None)
}

pub fn find_foliation_axis(f: &ScalarField, tol: f64) -> Result<Option<Normal>> {
    find_foliation_axis_with(f, tol, DefectMetric::Sup)
}

/// Directions sorted by foliated defect, smallest first.
pub fn rank_foliation_axes(f: &ScalarField) -> Result<Vec<(Normal, f64)>> {
    let mut out = Vec::new();
    for beta in Normal::ALL {
        match foliated_defect(f, beta) {
            Ok(d) => out.push((beta, d)),
            Err(Error::NonRadialMask) => {}
            Err(e) => return Err(e),
        }
    }
    out.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal));
    Ok(out)
}
