//! Exact verification of quantum error-correcting codes at desk scale.
//!
//! Everything here is dense complex linear algebra on coding spaces of at
//! most eight qubits. The crate is organised bottom-up:
//!
//! - [`linalg`]: matrices, states, tensor products, partial traces,
//!   orthonormalization, unitary completion and entropy.
//! - [`channels`]: interaction-operator ensembles, the built-in noise
//!   catalogue, tensor powers and bounded-error families.
//! - [`codes`]: code subspaces, the correction conditions, the
//!   reduced-density-matrix criterion and qubit-count bounds.
//! - [`recovery`]: constructive recovery synthesis and the equivalent
//!   verification routes.
//! - [`fidelity`]: pure-state, worst-case and entangled-state fidelity.
//! - [`memory`]: iterated noise/recovery cycles.
//! - [`io`]: the JSON and CSV file formats.

pub mod channels;
pub mod codes;
mod error;
pub mod fidelity;
pub mod io;
pub mod linalg;
pub mod memory;
pub mod recovery;
mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;

pub use num_complex::Complex64 as C64;

/// Hard cap on the coding-space dimension (eight qubits).
pub const MAX_DIM: usize = 1 << 8;
