//! Exact computation engine for cubical constructions, Hochschild mixed
//! complexes and their Z-graded spectral sequences, explicit cocycle
//! verification over finite rings, and critical-prime (Wieferich) scans
//! over Z and quadratic number rings.
//!
//! Everything is exact: integer or Z/m arithmetic throughout, no floating
//! point. Doubly-exponential constructions are protected by feasibility
//! guards that fail loudly rather than truncate silently.

pub mod error;
pub mod guards;
pub mod matrix;
pub mod snf;
pub mod modm;
pub mod fgab;
pub mod complex;
pub mod mixed;
pub mod ring;
pub mod subquot;
pub mod cubical;
pub mod hochschild;
pub mod matring;

pub use error::{HmlError, Result};
