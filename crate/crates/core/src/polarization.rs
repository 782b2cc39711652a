//! Two-point symmetrization of fields and the paired rearrangement
//! inequalities it satisfies.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::{is_polarization_invariant, HalfSpace, ResolvedHalfSpace, Side};

fn larger(a: f64, b: f64) -> f64 {
    if a >= b {
        a
    } else {
        b
    }
}

fn smaller(a: f64, b: f64) -> f64 {
    if a <= b {
        a
    } else {
        b
    }
}

fn resolve_invariant(f: &ScalarField, h: &HalfSpace) -> Result<ResolvedHalfSpace> {
    let rh = h.resolve(f.mask().grid())?;
    if !is_polarization_invariant(f.mask(), h)? {
        return Err(Error::NotInvariant);
    }
    Ok(rh)
}

/// Zero-extended value of `f` at the mirror of interior slot `s`.
fn mirror_value(f: &ScalarField, rh: &ResolvedHalfSpace, s: usize) -> f64 {
    let c = f.mask().cell_of_slot(s);
    let (i, j) = rh.reflect_signed(c.i as i64, c.j as i64);
    if !f.mask().contains_signed(i, j) {
        return 0.0;
    }
    f.at(crate::geometry::CellIndex::new(i as usize, j as usize))
}

/// `dual = false`: keep the larger value on the H side; `dual = true`: keep
/// the smaller, which is `f_H ∘ σ_H` on an invariant mask.
fn apply(f: &ScalarField, rh: &ResolvedHalfSpace, dual: bool) -> ScalarField {
    let mask = f.mask();
    let vals = f
        .values()
        .iter()
        .enumerate()
        .map(|(s, &here)| {
            let there = mirror_value(f, rh, s);
            match (rh.side(mask.cell_of_slot(s)), dual) {
                (Side::Boundary, _) => here,
                (Side::In, false) | (Side::Out, true) => larger(here, there),
                (Side::Out, false) | (Side::In, true) => smaller(here, there),
            }
        })
        .collect();
    f.with_values(vals).expect("values come from f")
}

/// `f_H`: on H the larger of `f(x)` and `f(σ_H x)`, on the far side the
/// smaller, with `f` extended by zero outside the mask.
pub fn polarize(f: &ScalarField, h: &HalfSpace) -> Result<ScalarField> {
    let rh = resolve_invariant(f, h)?;
    Ok(apply(f, &rh, false))
}

/// `f^H = f_H ∘ σ_H`, evaluated through the zero extension of `f`.
pub fn dual_polarize(f: &ScalarField, h: &HalfSpace) -> Result<ScalarField> {
    let rh = resolve_invariant(f, h)?;
    Ok(apply(f, &rh, true))
}

/// Pairs `(a, b, c, d)`: values of `v` and `w` at an H-side cell and at its
/// mirror, zero where the mirror is exterior. On-boundary cells are skipped.
fn pairs<'a>(
    v: &'a ScalarField,
    w: &'a ScalarField,
    rh: &'a ResolvedHalfSpace,
) -> impl Iterator<Item = (f64, f64, f64, f64)> + 'a {
    (0..v.len())
        .filter(move |&s| rh.side(v.mask().cell_of_slot(s)) == Side::In)
        .map(move |s| (v.values()[s], mirror_value(v, rh, s), w.values()[s], mirror_value(w, rh, s)))
}

/// `Σ v_H w_H − Σ v w`, accumulated pair by pair so that pairs whose order
/// is unchanged contribute exactly zero.
pub fn hardy_littlewood_gap(v: &ScalarField, w: &ScalarField, h: &HalfSpace) -> Result<f64> {
    if !v.same_mask(w) {
        return Err(Error::MaskMismatch);
    }
    if v.check_nonnegative().is_err() {
        w.check_nonnegative()?;
    }
    let rh = resolve_invariant(v, h)?;
    Ok(pairs(v, w, &rh)
        .map(|(a, b, c, d)| {
            // polarization sorts both pairs the same way; a gain appears only
            // when the original pairing was crossed
            if (a - b) * (c - d) < 0.0 {
                (a - b).abs() * (c - d).abs()
            } else {
                0.0
            }
        })
        .sum())
}

/// `Σ v w − Σ v^H w_H` for `w ≥ 0`.
pub fn reverse_hl_gap(v: &ScalarField, w: &ScalarField, h: &HalfSpace) -> Result<f64> {
    if !v.same_mask(w) {
        return Err(Error::MaskMismatch);
    }
    w.check_nonnegative()?;
    let rh = resolve_invariant(v, h)?;
    Ok(pairs(v, w, &rh)
        .map(|(a, b, c, d)| {
            // v^H and w_H are oppositely ordered on every pair
            if (a - b) * (c - d) > 0.0 {
                (a - b).abs() * (c - d).abs()
            } else {
                0.0
            }
        })
        .sum())
}

/// Sum of squared jumps over all stencil links, zero outside the mask.
pub fn dirichlet_energy(f: &ScalarField) -> f64 {
    f.mask().link_energy(f.values())
}
