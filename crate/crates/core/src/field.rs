use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{CellIndex, DomainMask};

/// Real values on the interior cells of a mask, zero outside.
#[derive(Debug, Clone)]
pub struct ScalarField {
    mask: Arc<DomainMask>,
    values: Vec<f64>,
}

impl PartialEq for ScalarField {
    fn eq(&self, other: &Self) -> bool {
        self.same_mask(other) && self.values == other.values
    }
}

impl ScalarField {
    pub fn new(mask: Arc<DomainMask>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mask.len() {
            return Err(Error::LengthMismatch { expected: mask.len(), got: values.len() });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidValue(k));
        }
        Ok(Self { mask, values })
    }

    pub fn constant(mask: Arc<DomainMask>, c: f64) -> Result<Self> {
        let n = mask.len();
        Self::new(mask, vec![c; n])
    }

    pub fn zeros(mask: Arc<DomainMask>) -> Self {
        let n = mask.len();
        Self { mask, values: vec![0.0; n] }
    }

    /// Field built from each interior cell and its physical center.
    pub fn from_fn(mask: Arc<DomainMask>, mut f: impl FnMut(CellIndex, [f64; 2]) -> f64) -> Result<Self> {
        let grid = *mask.grid();
        let values = mask.cells().map(|c| f(c, grid.center(c))).collect();
        Self::new(mask, values)
    }

    pub fn mask(&self) -> &Arc<DomainMask> {
        &self.mask
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same mask, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.mask.clone(), values)
    }

    /// Zero-extended value at any grid cell.
    pub fn at(&self, c: CellIndex) -> f64 {
        self.mask.slot(c).map_or(0.0, |s| self.values[s])
    }

    pub fn same_mask(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.mask, &other.mask) || *self.mask == *other.mask
    }

    pub(crate) fn check_same_mask(&self, other: &Self) -> Result<()> {
        if self.same_mask(other) {
            Ok(())
        } else {
            Err(Error::MaskMismatch)
        }
    }

    pub fn check_nonnegative(&self) -> Result<()> {
        match self.values.iter().position(|&v| v < 0.0) {
            Some(k) => Err(Error::NegativeValue(k)),
            None => Ok(()),
        }
    }

    pub fn dot(&self, other: &Self) -> Result<f64> {
        self.check_same_mask(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum())
    }

    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Slot of the largest value; the lowest slot wins ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = k;
            }
        }
        best
    }

    /// Mask text followed by one value per interior cell, row-major.
    pub fn to_text(&self) -> String {
        let mut out = self.mask.to_text();
        for v in &self.values {
            let _ = writeln!(out, "{v}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let (mask, rest) = DomainMask::parse_lines(&mut lines)?;
        let values = rest
            .iter()
            .flat_map(|l| l.split_whitespace())
            .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(Arc::new(mask), values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_annulus_mask, Grid2D};

    #[test]
    fn rejects_bad_values() {
        let m = Arc::new(DomainMask::full(Grid2D::new(4, 3, 1.0, [0.0, 0.0]).unwrap()).unwrap());
        assert_eq!(ScalarField::new(m.clone(), vec![1.0]).unwrap_err(), Error::LengthMismatch { expected: 2, got: 1 });
        assert_eq!(ScalarField::new(m, vec![1.0, f64::NAN]).unwrap_err(), Error::InvalidValue(1));
    }

    #[test]
    fn text_round_trip_is_exact() {
        let g = Grid2D::covering(21, 1.0).unwrap();
        let m = Arc::new(make_annulus_mask(g, 1.0, 0.35, 0.1).unwrap());
        let f = ScalarField::from_fn(m, |_, x| (x[0] * 3.1).sin() / 7.0 + x[1] * 1e-17).unwrap();
        let back = ScalarField::from_text(&f.to_text()).unwrap();
        assert_eq!(back, f);
        for (a, b) in back.values().iter().zip(f.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn zero_extension() {
        let m = Arc::new(DomainMask::full(Grid2D::new(3, 3, 1.0, [0.0, 0.0]).unwrap()).unwrap());
        let f = ScalarField::constant(m, 2.5).unwrap();
        assert_eq!(f.at(CellIndex::new(1, 1)), 2.5);
        assert_eq!(f.at(CellIndex::new(0, 1)), 0.0);
    }
}
