//! Exact decision procedures for gradings of rational nilpotent Lie algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`qlinalg`] exact rational matrices, polynomials, factorization over ℚ and lattices;
//! * [`liealg`] Lie algebras given by structure constants, derivations and automorphisms;
//! * [`grading`] verification, classification and basis-aligned search of gradings;
//! * [`specmaps`] spectral criteria on automorphisms (expanding, integer-like, norm profiles);
//! * [`holonomy`] finite holonomy groups and the equivariant criteria;
//! * [`latpow`] powers of integer matrices mapping one lattice into another;
//! * [`cli`] file formats, bundled fixtures and the subcommands of the `nilgrade` binary.
//!
//! Every top-level check reports a [`Verdict`].

// Matrix code indexes rows and columns together; iterator rewrites obscure it.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod grading;
pub mod holonomy;
pub mod latpow;
pub mod liealg;
pub mod qlinalg;
pub mod serial;
pub mod specmaps;
pub mod verdict;

pub use error::{Error, Result};
pub use grading::{Grading, GradingClass, WeightSystem};
pub use liealg::LieAlgebra;
pub use qlinalg::{IntegerLattice, Matrix, Poly, Rational};
pub use verdict::{Decision, Verdict};
