//! First eigenvalue of `−Δφ + Vφ = λ g φ` on masked 2-D grids, optimized over
//! rearrangement classes of `g` and `V`, together with the discrete
//! polarization and symmetrization tools used to inspect the optimizers.

pub mod eigensolver;
pub mod error;
pub mod field;
pub mod geometry;
pub mod optimizer;
pub mod polarization;
pub mod rearrangement;
pub mod symmetrization;

pub use error::{Error, Result};
pub use field::ScalarField;
pub use geometry::{CellIndex, DomainMask, Grid2D, HalfSpace, Normal};
pub use rearrangement::RearrangementClass;
