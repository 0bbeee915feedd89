//! Recovering the length of an interval from boundary flux measurements of
//! the heat and wave equations.
//!
//! The crate has forward solvers ([`heat`], [`wave`]), a least-squares
//! reconstruction engine ([`inverse`]) and numerical checks of the
//! uniqueness and stability theory ([`theory`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod heat;
pub mod inverse;
pub mod problem;
pub mod profile;
pub mod rng;
pub mod signal;
pub mod theory;
mod tridiag;
pub mod wave;

pub use error::{Error, Result};
pub use problem::{boundary_flux_left, boundary_flux_right, Grid, HeatProblem, SpaceTimeField, WaveProblem};
pub use profile::{BoundaryInput, Profile};
pub use signal::{trapezoid_integral, Signal, TimeGrid};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/heat.md")]
    mod heat {}
    #[doc = include_str!("../../../book/src/wave.md")]
    mod wave {}
    #[doc = include_str!("../../../book/src/reconstruction.md")]
    mod reconstruction {}
    #[doc = include_str!("../../../book/src/non_uniqueness.md")]
    mod non_uniqueness {}
    #[doc = include_str!("../../../book/src/estimates.md")]
    mod estimates {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
