//! Named constructions and the experiment procedures built on them.

mod gaps;
mod interval;
mod probing;
mod pseudorandom;
mod qr;
mod translate;

pub use gaps::{gap_criterion_check, GapReport};
pub use interval::{
    centered_interval, check_interval_dilate, interval_dilate_batch, interval_dilate_construction, max_probe_size,
    random_probe_set, IntervalDilate, IntervalDilateCheck,
};
pub use probing::{probing_set_search, probing_set_size, AdversaryFailure, AdversarySummary, ProbingSetReport, ProbingSearch};
pub use pseudorandom::{pseudorandom_probe_check, PseudorandomReport};
pub use qr::{qr_level_sets_disjoint, qr_uniformity_check, quadratic_residues};
pub use translate::{levelset_bohr_translate, BohrTranslate, BohrTranslateReport};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::spectral::IndicatorSet;

/// Shared free parameters of the experiments.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub group: Group,
    pub theta: f64,
    pub delta: f64,
    pub eps: f64,
    pub gamma: f64,
    pub seed: u64,
    pub trials: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("theta", self.theta), ("delta", self.delta), ("eps", self.eps), ("gamma", self.gamma)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Precondition(format!("{name} = {v} outside (0, 1]")));
            }
        }
        Ok(())
    }
}

pub(crate) fn require_prime_cyclic(group: &Group) -> Result<u64> {
    let n = group.order() as u64;
    if !group.is_cyclic() || !crate::bohr::is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    Ok(n)
}

/// `1_A*1_A(x)` by counting `a ∈ A` with `x − a ∈ A`.
pub(crate) fn self_convolution_at(a: &IndicatorSet, x: usize) -> u64 {
    let g = a.group();
    a.iter().filter(|&y| a.contains(g.sub(x, y))).count() as u64
}

/// `b^e mod m`.
pub(crate) fn mod_pow(base: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = base as u128 % m128;
    let mut acc = 1u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}
