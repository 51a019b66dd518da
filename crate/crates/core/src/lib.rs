//! Second-order Gromov-Witten invariants of rational plane curves, computed
//! on the two-step Semple tower `S₂ → S₁ → P²`, and the characteristic
//! numbers of triple contact derived from them.

pub mod chow;
pub mod contact;
pub mod error;
pub mod expr;
pub mod poly;
pub mod potentials;
pub mod recursion;
pub mod verify;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
