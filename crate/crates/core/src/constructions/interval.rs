//! A dense set with small sumset whose self-convolution is large on a given
//! small probe set: a dilate of a centered interval.

use rayon::prelude::*;
use serde::Serialize;

use super::{mod_pow, require_prime_cyclic, self_convolution_at};
use crate::bohr::dirichlet_simultaneous;
use crate::convolution::sumset;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::rng::CounterRng;
use crate::spectral::{check_same_group, IndicatorSet};

/// `⌊ln N / 2⌋`, the largest admissible probe set.
pub fn max_probe_size(n: u64) -> usize {
    ((n as f64).ln() / 2.0).floor() as usize
}

/// `(start, length)` of `⌈N/3⌉` consecutive residues starting at `−⌊(length−1)/2⌋`.
pub fn centered_interval(n: u64) -> (i64, usize) {
    let len = n.div_ceil(3) as usize;
    (-(((len as i64) - 1) / 2), len)
}

#[derive(Clone, Debug)]
pub struct IntervalDilate {
    /// The simultaneous approximation multiplier `n`.
    pub multiplier: u64,
    /// `n⁻¹ mod N`.
    pub inverse: u64,
    pub interval_start: i64,
    pub interval_len: usize,
    /// `n⁻¹ · B`.
    pub set: IndicatorSet,
}

/// `A = n⁻¹·B`, `B` the centered interval, `n` the first multiplier with every
/// `‖n·s‖ ≤ N^{1−1/(|S|+1)}`.
pub fn interval_dilate_construction(probe: &IndicatorSet) -> Result<IntervalDilate> {
    let g = probe.group();
    let n = require_prime_cyclic(g)?;
    let limit = max_probe_size(n);
    if probe.len() > limit {
        return Err(Error::Precondition(format!(
            "probe set has {} elements, more than ln(N)/2 allows ({limit})",
            probe.len()
        )));
    }
    let xs: Vec<u64> = probe.iter().map(|x| x as u64).collect();
    let multiplier = dirichlet_simultaneous(&xs, n)?;
    let inverse = mod_pow(multiplier, n - 2, n);
    let (start, len) = centered_interval(n);
    let set = IndicatorSet::from_indices(
        g,
        (0..len as i64).map(|j| ((start + j).rem_euclid(n as i64) as u64 * inverse % n) as usize),
    )?;
    Ok(IntervalDilate {
        multiplier,
        inverse,
        interval_start: start,
        interval_len: len,
        set,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalDilateCheck {
    pub probe: Vec<usize>,
    pub multiplier: u64,
    pub size: usize,
    pub sumset_size: usize,
    /// `(x, 1_A*1_A(x))` for `x ∈ S`.
    pub probe_convolution: Vec<(usize, u64)>,
    /// `3|A| ≥ N`.
    pub size_ok: bool,
    /// `3|A+A| < 2N`.
    pub sumset_ok: bool,
    /// `6·1_A*1_A(x) > N` on `S`.
    pub convolution_ok: bool,
    pub findings: Vec<String>,
}

impl IntervalDilateCheck {
    pub fn holds(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Exact integer check of the three conclusions; failures become findings.
pub fn check_interval_dilate(con: &IntervalDilate, probe: &IndicatorSet) -> Result<IntervalDilateCheck> {
    check_same_group(con.set.group(), probe.group())?;
    let n = probe.group().order() as u64;
    let a = &con.set;
    let size = a.len();
    let sumset_size = sumset(a, a)?.len();
    let probe_convolution: Vec<(usize, u64)> = probe.iter().map(|x| (x, self_convolution_at(a, x))).collect();
    let size_ok = 3 * size as u64 >= n;
    let sumset_ok = 3 * (sumset_size as u64) < 2 * n;
    let convolution_ok = probe_convolution.iter().all(|&(_, c)| 6 * c > n);
    let mut findings = Vec::new();
    if !size_ok {
        findings.push(format!("|A| = {size} < N/3 = {:.3}", n as f64 / 3.0));
    }
    if !sumset_ok {
        findings.push(format!("|A+A| = {sumset_size} ≥ 2N/3 = {:.3}", 2.0 * n as f64 / 3.0));
    }
    for &(x, c) in &probe_convolution {
        if 6 * c <= n {
            findings.push(format!("1_A*1_A({x}) = {c} ≤ N/6 = {:.3}", n as f64 / 6.0));
        }
    }
    Ok(IntervalDilateCheck {
        probe: probe.to_vec(),
        multiplier: con.multiplier,
        size,
        sumset_size,
        probe_convolution,
        size_ok,
        sumset_ok,
        convolution_ok,
        findings,
    })
}

/// `size` distinct uniform elements of `Z_N`.
pub fn random_probe_set(group: &Group, size: usize, rng: &mut CounterRng) -> Result<IndicatorSet> {
    if size > group.order() {
        return Err(Error::Precondition(format!("probe size {size} exceeds N = {}", group.order())));
    }
    IndicatorSet::from_indices(group, rng.sample_distinct(group.order(), size))
}

/// Trial `i` draws `S` of size `size` (default `⌊ln N/2⌋`) from `CounterRng::for_trial(seed, i)`.
pub fn interval_dilate_batch(
    group: &Group,
    trials: usize,
    seed: u64,
    size: Option<usize>,
) -> Result<Vec<IntervalDilateCheck>> {
    let n = require_prime_cyclic(group)?;
    let size = size.unwrap_or_else(|| max_probe_size(n));
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = CounterRng::for_trial(seed, i as u64);
            let probe = random_probe_set(group, size, &mut rng)?;
            check_interval_dilate(&interval_dilate_construction(&probe)?, &probe)
        })
        .collect()
}
