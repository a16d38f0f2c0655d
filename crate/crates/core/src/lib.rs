//! Picard lattices of blow-ups of the plane, their (-1)- and (-2)-curves,
//! effective and nef cones, and finite-generation verdicts for Cox rings.
//!
//! Classes are written `(d0; m1, ..., mr)` for `d0 l - m1 e1 - ... - mr er`.

pub mod cone;
pub mod config;
pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod verdict;
pub mod weyl;

pub use cone::{ConeDesc, ConeKind, Extremality};
pub use config::SurfaceConfig;
pub use error::{Error, Result};
pub use lattice::{intersect, DivisorClass, SurfaceModel};
pub use verdict::{decide, Status, Verdict};
