//! Quasi-cyclic LDPC code construction and analysis, charge-system
//! equilibrium mappings, and partition-function estimation.
//!
//! The crate is organized around the exponent matrix: circulant shifts
//! describe a code ([`circulant`]), lifting and coupling build parity-check
//! matrices ([`codes`]), Tanner analysis measures them ([`tanner`]), and the
//! energy modules ([`boltzmann`], [`partition`]) study the landscapes those
//! codes induce. The [`equilibrium`] and [`chargemap`] modules carry charge
//! systems on circles and tori into the same circulant language, and
//! [`gauge`] covers the spherical finite-geometry constructions.

pub mod boltzmann;
pub mod chargemap;
pub mod circulant;
pub mod codes;
pub mod equilibrium;
pub mod error;
pub mod gauge;
pub mod gf2;
pub mod partition;
pub mod tanner;

pub use circulant::{ExponentMatrix, MetExponentMatrix, Shift};
pub use error::{Error, Result};
pub use gf2::BinaryMatrix;
