//! Binary greymap heatmaps.

use polarlab_core::ScalarField;

/// `P5` image of the whole grid, top row = largest `j`. Interior cells map
/// linearly from `[min, max]` onto grey levels 1..=255; exterior cells are 0.
/// A constant field paints every interior cell 255.
pub fn encode(f: &ScalarField) -> Vec<u8> {
    let mask = f.mask();
    let g = mask.grid();
    let (lo, hi) = (f.min_value(), f.max_value());
    let mut out = format!("P5\n{} {}\n255\n", g.nx, g.ny).into_bytes();
    for j in (0..g.ny).rev() {
        for i in 0..g.nx {
            let c = polarlab_core::CellIndex::new(i, j);
            let px = match mask.slot(c) {
                None => 0,
                Some(s) if hi > lo => 1 + (254.0 * (f.values()[s] - lo) / (hi - lo)).round() as u8,
                Some(_) => 255,
            };
            out.push(px);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use polarlab_core::{DomainMask, Grid2D};
    use std::sync::Arc;

    #[test]
    fn scaling_and_layout() {
        let g = Grid2D::new(4, 3, 1.0, [0.0, 0.0]).unwrap();
        let m = Arc::new(DomainMask::full(g).unwrap());
        let f = ScalarField::new(m, vec![2.0, 4.0]).unwrap();
        let img = encode(&f);
        let header = b"P5\n4 3\n255\n";
        assert_eq!(&img[..header.len()], header);
        let px = &img[header.len()..];
        assert_eq!(px.len(), 12);
        assert_eq!(px, &[0, 0, 0, 0, 0, 1, 255, 0, 0, 0, 0, 0]);
    }
}
