//! Exact computations with Camina p-groups of nilpotence class 2.
//!
//! The crate models these groups by commutator and power data, builds their
//! character tables and power maps over Z[zeta_p], decides Brauer pairs in
//! three independent ways, and classifies small cases up to isomorphism.

pub mod brauer;
pub mod chartable;
pub mod cli;
pub mod constructions;
pub mod cyclotomic;
pub mod enumerate;
pub mod equiv;
pub mod error;
pub mod format;
pub mod fpla;
pub mod group;
pub mod par;
pub mod selftest;

pub use error::{Error, Result};
pub use group::{Element, GroupDatum, SubgroupReport};
