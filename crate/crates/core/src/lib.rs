//! Bell inequalities for anyons: fusion-space constructions, Bell operators,
//! braid-generated states, phase gates, and a spin-½ cross-check.

pub mod braid;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod models;
pub mod observables;
pub mod report;
pub mod sector;
pub mod spin;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector};
pub use models::{AnyonModel, Charge, ModelId};
