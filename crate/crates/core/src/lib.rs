//! Finite-dimensional verification kernel for eigenvalue-counting bounds of
//! non-selfadjoint operators.
//!
//! The crate is organised around the objects the bounds are made of:
//!
//! - [`linalg`]: dense complex matrices, eigendecompositions with algebraic and
//!   geometric multiplicities, singular values, PSD functional calculus;
//! - [`antisym`]: antisymmetric N-fold tensor products, lifted operators and
//!   the Gram/trace identities, together with a brute-force full-tensor oracle;
//! - [`jordan`]: Jordan-structured matrices, the chain-breaking corner
//!   perturbation and its closed-form eigenvalue splitting;
//! - [`bsbound`]: the Birman-Schwinger operator at finite dimension and the
//!   half-plane eigenvalue counting bound it controls;
//! - [`schrodinger`]: finite-difference Dirichlet discretizations of
//!   `-laplacian + V` with complex potentials and the spectral functionals
//!   (counting ratios, half-plane/sector/distance-weighted sums);
//! - [`constants`]: the closed-form constants entering the bounds;
//! - [`oracle`]: independent numerical routes (adaptive quadrature, grid plus
//!   golden-section extrema) used to cross-check the closed forms.

pub mod antisym;
pub mod bsbound;
pub mod constants;
pub mod error;
pub mod jordan;
pub mod linalg;
pub mod oracle;
pub mod schrodinger;

pub use error::{Error, Result};
