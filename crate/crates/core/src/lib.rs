//! Exact renormalised conical zeta values.
//!
//! The library builds up in layers:
//! - [`exact`]: arbitrary precision rational vectors, lattices, and linear
//!   algebra, all deterministic and padding-invariant;
//! - [`cones`]: lattice cones, their faces, transverse cones, subdivisions,
//!   and the Chen family;
//! - [`coalgebra`]: the coproduct on coloured lattice cones;
//! - [`germs`]: meromorphic germs with linear poles at zero, truncated to a
//!   working order, with the holomorphic projection;
//! - [`birkhoff`]: the algebraic Birkhoff factorisation engine over any
//!   coalgebra oracle and target algebra with a splitting;
//! - [`renormalise`]: exponential sums and integrals on cones and the
//!   renormalised conical zeta values themselves, by two independent schemes;
//! - [`checks`]: a self-check corpus exercised by the CLI and the test suite.

pub mod birkhoff;
pub mod checks;
pub mod coalgebra;
pub mod cones;
pub mod error;
pub mod exact;
pub mod germs;
pub mod renormalise;

pub use error::{Error, Result};
