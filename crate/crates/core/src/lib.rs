//! Numerical toolkit for the Yang-Baxter constrained three-body S-matrix.
//!
//! The crate covers the two-body Type-II R-matrix and its braid limit, the
//! factorized and exponential forms of the three-body operator, the
//! entanglement of the states it generates, the gauge-potential Hamiltonians
//! with their spectra and Berry phases, the induced spin chain with its
//! Kitaev-like fermionization and zero-mode analysis, and one-magnon
//! entanglement transfer on a ring.
//!
//! Conventions used throughout:
//!
//! * qubit 1 is the leftmost tensor factor and the most significant bit, so
//!   the basis index of `|klm>` is the binary number `klm`;
//! * `|0> = |up>`, `|1> = |down>`, `S+ = |0><1|`, `S3 = diag(1, -1)`;
//! * sites are 1-based in every public API.

pub mod chain;
pub mod entanglement;
pub mod error;
pub mod format;
pub mod hamiltonian;
pub mod qlinalg;
pub mod rmatrix;
pub mod threebody;
pub mod transfer;
pub mod verify;

pub use error::{Error, Result};
pub use qlinalg::{ComplexMatrix, ComplexVector, C64};
