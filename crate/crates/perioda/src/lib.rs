//! Exact periodicity calculus for dilation differences of discretely
//! supported functions, elliptic divisor certificates, and a numerical
//! Weierstrass verification engine.
//!
//! The crate is organized around six pieces:
//!
//! - [`lattice`]: exact lattices in `Q^r` (membership, fundamental-domain
//!   reduction, joins, adapted bases);
//! - [`sparse`]: the function algebra of lattice-quasi-periodic functions
//!   with finite coset support, dilation differences `f(mx) - f(x)`, and
//!   lazy telescoping sums;
//! - [`reconstruct`]: the constructive periodicity machinery — valuation
//!   walks, dilation chains, and the reconstruction of a periodic function
//!   from a coprime pair of dilation differences, with exact certificates;
//! - [`divisor`]: divisors on `C/Lambda` in exact coordinates, degree and
//!   Abel-Jacobi certificates, special cocycle checks, and the coboundary
//!   solver;
//! - [`weierstrass`]: floating-point Weierstrass `zeta`/`wp` evaluation with
//!   quasi-period and matrix-consistency verification suites;
//! - [`cli`]: the `perioda` command-line front end with JSON reports.
//!
//! [`sampling`] holds the seeded random-instance generators shared by the
//! CLI selftest and the acceptance suite; [`jsonio`] defines the wire
//! formats.

pub mod arith;
pub mod cli;
pub mod divisor;
pub mod error;
pub mod jsonio;
pub mod lattice;
pub mod mat;
pub mod point;
pub mod reconstruct;
pub mod report;
pub mod sampling;
pub mod sparse;
pub mod weierstrass;

pub use error::{Error, Result};
pub use lattice::{adapted_basis, is_adapted_basis, Lattice};
pub use point::{parse_rat, rat_to_string, Point, Rat, Scalar};
pub use sparse::{QuasiPeriodicFn, TelescopeFn, Window};
