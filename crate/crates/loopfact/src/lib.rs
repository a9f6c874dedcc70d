//! Factorization of 2×2 loops: triangular/Birkhoff decompositions, root
//! subgroup chains, and the Toeplitz determinant identities that certify
//! them.
//!
//! The crate is organized bottom-up:
//!
//! - [`laurent`]: finitely supported Laurent series, Hardy projections, and
//!   scalar Birkhoff factorization;
//! - [`loop2`]: 2×2 matrix loops, the involutions σ and Θ, membership tests,
//!   pointwise polar and Iwasawa decompositions;
//! - [`toeplitz`]: finite sections of the multiplication operator, exact
//!   determinants of A(g)A(g⁻¹) via finite-rank Hankel products;
//! - [`birkhoff`]: triangular and Birkhoff factorization, stratum detection
//!   in the affine Weyl group, and the non-factorizable counterexample;
//! - [`rootsub`]: root subgroup synthesis/analysis and partial root subgroup
//!   factorization;
//! - [`dets`]: closed-form determinant products and their operator-level
//!   verification;
//! - [`verify`]: the seeded acceptance suites shared by the CLI and the
//!   integration tests.

pub mod birkhoff;
pub mod dets;
pub mod error;
pub mod laurent;
pub mod loop2;
pub mod par;
pub mod rootsub;
pub mod toeplitz;
pub mod verify;

pub use error::{Error, Result};
pub use laurent::LaurentSeries;
pub use loop2::LoopMatrix;
