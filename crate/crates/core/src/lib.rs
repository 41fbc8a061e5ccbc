//! Computational additive combinatorics over finite abelian groups: Fourier
//! analysis, convolution level-sets, Bohr neighborhoods, and the witness-function
//! iteration that controls families of nearby convolutions.

pub mod error;
pub mod group;
pub mod rng;
pub mod spectral;
pub mod convolution;
pub mod bohr;
pub mod witness;
pub mod lemmas;
pub mod constructions;
pub mod cli;

pub use error::{Error, Result};
pub use group::{Character, Group, GroupElement};
pub use spectral::{GroupFunction, IndicatorSet, Spectrum};
