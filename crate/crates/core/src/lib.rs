//! Gap counting in numerical semigroups, partitioned 3-CNF counting oracles,
//! and the zone-encoded reductions that connect them.
//!
//! The crate is organised bottom-up:
//!
//! - [`semigroup`]: generator sets, a bit-packed representability table,
//!   gap listing and counting, Frobenius numbers.
//! - [`sat`]: partitioned formulas and exhaustive #SAT / #1IN3SAT / Π₁ counts.
//! - [`reduction`]: zone layouts, the constructed generator sets and the
//!   one-in-three clause gadget.
//! - [`verify`]: exact checks of the count identities plus a seeded sweep.
//! - [`format`]: versioned JSON documents and a flat TSV stream.

pub mod error;
pub mod format;
pub mod reduction;
pub mod rng;
pub mod sat;
pub mod semigroup;
pub mod verify;

pub use error::{Error, Result};
pub use num_bigint::BigUint;
