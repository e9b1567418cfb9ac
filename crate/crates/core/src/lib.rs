//! Graded Betti tables and Castelnuovo–Mumford regularity of special p-Borel
//! monomial ideals, with an independent simplicial-homology oracle,
//! permutohedral cellular resolutions, and iterated mapping-cone checks.

pub mod betti;
pub mod cellular;
pub mod error;
pub mod horseshoe;
pub mod linalg;
pub mod mapcone;
pub mod monomial;
pub mod oracle;
pub mod pborel;
pub mod simplicial;
pub mod special;

pub use betti::{GradedBettiTable, MultigradedBettiTable, Regularity};
pub use error::{Error, Result};
pub use linalg::FieldChar;
pub use monomial::{minimalize, Monomial, MonomialIdeal};
pub use special::SpecialIdealSpec;
