//! Exact symbolic computation on the standard Podles sphere.
//!
//! The crate implements the coordinate algebras `O(SU_q(2))` and `O(S_q^2)`
//! with exact coefficients in the field of rational functions of `q^(1/2)`
//! extended by square roots, the `U_q(su_2)` actions on them, equivariant
//! projections and their twisted Chern characters, the twisted cyclic
//! (co)homology operators, the Chern-Connes pairings, the orientation
//! 2-cycle, and numeric index computations for the 0-summable Dirac
//! operator on truncated weight bases.
//!
//! Module map:
//! - [`scalar`]: exact coefficient arithmetic (rational functions of
//!   `q^(1/2)` plus managed square roots, q-integers, q-binomials).
//! - [`hopf`]: generator words of `U_q(su_2)`, spin representations
//!   `sigma_l`, the anti-representation `rho_l` and invariance checks.
//! - [`suq2`]: PBW normal form of `O(SU_q(2))`, Haar state, modular
//!   automorphism, weight grading and the orthonormal `v`-basis.
//! - [`podles`]: intrinsic normal form of `O(S_q^2)` and the embedding
//!   into `O(SU_q(2))`.
//! - [`ktheory`]: matrices over the algebras, the twisted dagger, the
//!   equivariant projections `P_N`.
//! - [`cyclic`]: twisted Hochschild/cyclic operators, quantum traces,
//!   Chern characters, cocycles and pairings.
//! - [`spectral`]: Dirac spectrum, truncated operators, real structure
//!   checks, index and q-index.
//! - [`expr`]: text grammar for elements, used by the CLI and cache files.

pub mod cyclic;
pub mod error;
pub mod expr;
pub mod half;
pub mod hopf;
pub mod ktheory;
pub mod podles;
pub mod scalar;
pub mod spectral;
pub mod suq2;

pub use error::Error;
pub use half::Half;
pub use scalar::Scalar;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
