//! Discrete rearrangement classes: every permutation of a fixed multiset of
//! cell values over the interior of a mask.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::DomainMask;

#[derive(Debug, Clone, PartialEq)]
pub struct RearrangementClass {
    mask: Arc<DomainMask>,
    sorted_values: Vec<f64>,
}

fn desc(a: &f64, b: &f64) -> Ordering {
    b.total_cmp(a)
}

impl RearrangementClass {
    pub fn new(mask: Arc<DomainMask>, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != mask.len() {
            return Err(Error::LengthMismatch { expected: mask.len(), got: values.len() });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(k));
        }
        values.sort_by(desc);
        Ok(Self { mask, sorted_values: values })
    }

    pub fn mask(&self) -> &Arc<DomainMask> {
        &self.mask
    }

    /// Class values, non-increasing.
    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted_values
    }

    pub fn len(&self) -> usize {
        self.sorted_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted_values.is_empty()
    }

    /// Number of distinct members, `n! / Π m_k!`, saturating at `u128::MAX`.
    pub fn member_count(&self) -> u128 {
        let mut count: u128 = 1;
        let mut run = 0u128;
        for k in 0..self.sorted_values.len() {
            run = if k > 0 && self.sorted_values[k].to_bits() == self.sorted_values[k - 1].to_bits() {
                run + 1
            } else {
                1
            };
            // multiply by (k+1)/run, keeping the running value an integer
            count = match count.checked_mul(k as u128 + 1) {
                Some(c) => c / run,
                None => return u128::MAX,
            };
        }
        count
    }

    pub fn contains(&self, f: &ScalarField) -> bool {
        if !(Arc::ptr_eq(&self.mask, f.mask()) || *self.mask == **f.mask()) {
            return false;
        }
        let mut v = f.values().to_vec();
        v.sort_by(desc);
        bits_equal(&v, &self.sorted_values)
    }

    /// True if some class value is strictly positive.
    pub fn has_positive(&self) -> bool {
        self.sorted_values.first().is_some_and(|&v| v > 0.0)
    }

    pub fn has_negative(&self) -> bool {
        self.sorted_values.last().is_some_and(|&v| v < 0.0)
    }

    fn check_profile(&self, h: &ScalarField) -> Result<()> {
        if Arc::ptr_eq(&self.mask, h.mask()) || *self.mask == **h.mask() {
            Ok(())
        } else {
            Err(Error::MaskMismatch)
        }
    }

    fn place(&self, h: &ScalarField, largest_first: bool) -> Result<ScalarField> {
        self.check_profile(h)?;
        let hv = h.values();
        let mut order: Vec<usize> = (0..hv.len()).collect();
        // stable sort keeps ascending slot order among equal h
        if largest_first {
            order.sort_by(|&a, &b| hv[b].total_cmp(&hv[a]));
        } else {
            order.sort_by(|&a, &b| hv[a].total_cmp(&hv[b]));
        }
        let mut out = vec![0.0; hv.len()];
        for (k, &s) in order.iter().enumerate() {
            out[s] = self.sorted_values[k];
        }
        ScalarField::new(self.mask.clone(), out)
    }
}

fn bits_equal(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

pub fn class_of(f0: &ScalarField) -> RearrangementClass {
    let mut v = f0.values().to_vec();
    v.sort_by(desc);
    RearrangementClass { mask: f0.mask().clone(), sorted_values: v }
}

/// Exact (bitwise) equality of the value multisets.
pub fn is_rearrangement(f: &ScalarField, g: &ScalarField) -> Result<bool> {
    if !f.same_mask(g) {
        return Err(Error::MaskMismatch);
    }
    Ok(bits_equal(class_of(f).sorted_values(), class_of(g).sorted_values()))
}

/// Member maximizing `Σ f·h`: the k-th largest value goes to the cell with
/// the k-th largest `h`, equal `h` ordered by cell index.
pub fn extremal_max(class: &RearrangementClass, h: &ScalarField) -> Result<ScalarField> {
    class.place(h, true)
}

/// Member minimizing `Σ f·h`: the k-th largest value goes to the cell with
/// the k-th smallest `h`.
pub fn extremal_min(class: &RearrangementClass, h: &ScalarField) -> Result<ScalarField> {
    class.place(h, false)
}

/// `(f⁺, f⁻)` with `f = f⁺ − f⁻`.
pub fn split_parts(f: &ScalarField) -> (ScalarField, ScalarField) {
    let pos = f.values().iter().map(|&v| if v > 0.0 { v } else { 0.0 }).collect();
    let neg = f.values().iter().map(|&v| if v < 0.0 { -v } else { 0.0 }).collect();
    (f.with_values(pos).expect("finite"), f.with_values(neg).expect("finite"))
}
