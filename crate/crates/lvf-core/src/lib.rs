//! Exact verification workbench for operator realizations of Lie algebras.
//!
//! The crate builds three calculi with arbitrary-precision scalars and checks
//! their defining identities mechanically:
//!
//! - a sparse Weyl algebra (variables `x[i]`, derivations `d[i]`) together
//!   with the map sending a pairing matrix `A` to the first-order operator
//!   `D(A) = Σ ⟨A e_α, f_β⟩ x_α d_β`, its companions `∂`, `∂̄`, the trace
//!   weight, the bilinear form built from `ε(A,B) = D(A)D(B) + D(AB)`, and
//!   the 2-cocycle it induces;
//! - structure-constant Lie algebras (Witt, Heisenberg–Virasoro,
//!   Schrödinger–Virasoro, custom finite tables) with realization checks
//!   against matrix-built operators on index windows;
//! - a Cuntz-isometry calculus (`s[i]`, `s*[i]` words in normal form) with
//!   the analogous map into span{s_α s_β*}, algebra homotopes, and the
//!   quadrature-mirror-filter wavelet representation on Laurent polynomials.
//!
//! Identities are verified with exact rational or Gaussian-rational scalars;
//! floating point is quarantined to the quadrature, matrix-exponential, and
//! finite-difference oracles in [`numeric`]. Randomized checks draw from a
//! seeded PRNG so every report is reproducible byte for byte.
//!
//! The `parallel` feature (default) runs batch checks and large products on
//! a rayon pool; disabling it falls back to equivalent sequential code.

pub mod scalar;
pub mod index;
pub mod linalg;
pub mod numeric;
pub mod par;
pub mod weyl;
pub mod pairings;
pub mod jsmap;
pub mod liealg;
pub mod cuntz;
pub mod wavelet;
pub mod report;
pub mod sample;
pub mod suites;

pub use index::{HalfIndex, IndexWindow};
pub use report::{CheckResult, Report, Status};
pub use scalar::{GScalar, PiScalar, Rational};
