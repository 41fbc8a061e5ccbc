//! Random probing sets, validated against structured adversaries with small sumsets.

use rayon::prelude::*;
use serde::Serialize;

use super::ExperimentConfig;
use crate::convolution::{set_convolution, sumset};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::rng::CounterRng;
use crate::spectral::IndicatorSet;

/// `⌊c ε⁻² δ⁻⁶ θ⁻¹⁰ (ln N − ln(δεθ))⌋` before clamping, and the value clamped to `[0, N]`.
pub fn probing_set_size(n: usize, theta: f64, delta: f64, eps: f64, c: f64) -> (f64, usize) {
    let raw = (c * eps.powi(-2) * delta.powi(-6) * theta.powi(-10) * ((n as f64).ln() - (delta * eps * theta).ln())).floor();
    let k = if raw.is_finite() { raw.clamp(0.0, n as f64) as usize } else { n };
    (raw, k)
}

#[derive(Clone, Debug)]
struct Adversary {
    kind: &'static str,
    set: IndicatorSet,
    sumset_size: usize,
    /// `1_A*1_A`.
    counts: Vec<u64>,
    /// `δθ₀²N`.
    threshold: f64,
}

impl Adversary {
    fn small_points(&self) -> usize {
        self.counts.iter().filter(|&&c| c as f64 <= self.threshold).count()
    }

    fn hit_by(&self, probe: &[usize]) -> bool {
        probe.iter().any(|&x| self.counts[x] as f64 <= self.threshold)
    }
}

/// A unit of `Z_N` drawn uniformly.
fn random_unit(n: usize, rng: &mut CounterRng) -> usize {
    loop {
        let u = 1 + rng.below_usize(n - 1);
        if gcd(u, n) == 1 {
            return u;
        }
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Interval of length at least `θN` (cyclic groups only), dilated and translated.
fn interval_adversary(group: &Group, theta: f64, rng: &mut CounterRng) -> Option<IndicatorSet> {
    if !group.is_cyclic() || group.order() < 2 {
        return None;
    }
    let n = group.order();
    let base = (theta * n as f64).ceil() as usize;
    let len = (base + rng.below_usize(n / 10 + 1)).min(n);
    let lambda = random_unit(n, rng);
    let shift = rng.below_usize(n);
    IndicatorSet::from_indices(group, (0..len).map(|j| (j * lambda + shift) % n)).ok()
}

/// Bohr set on one or two random characters with radius chosen so it holds at least `θN` points.
fn bohr_adversary(group: &Group, theta: f64, rng: &mut CounterRng) -> Option<IndicatorSet> {
    let n = group.order();
    if n < 2 {
        return None;
    }
    let d = 1 + rng.below_usize(2);
    let chars: Vec<usize> = (0..d).map(|_| 1 + rng.below_usize(n - 1)).collect();
    let dist: Vec<f64> = (0..n)
        .map(|x| chars.iter().map(|&c| group.char_distance(c, x)).fold(0.0, f64::max))
        .collect();
    let mut sorted = dist.clone();
    sorted.sort_by(f64::total_cmp);
    let need = ((theta * n as f64).ceil() as usize).clamp(1, n);
    let radius = sorted[need - 1];
    let shift = rng.below_usize(n);
    let set = IndicatorSet::from_predicate(group, |x| dist[x] <= radius);
    Some(set.translate(shift))
}

fn build_adversary(cfg: &ExperimentConfig, index: usize, rng: &mut CounterRng) -> Result<Option<Adversary>> {
    let g = &cfg.group;
    let n = g.order() as f64;
    let candidate = if index % 2 == 0 {
        interval_adversary(g, cfg.theta, rng).or_else(|| bohr_adversary(g, cfg.theta, rng))
    } else {
        bohr_adversary(g, cfg.theta, rng)
    };
    let Some(set) = candidate else { return Ok(None) };
    let theta0 = set.density();
    let sumset_size = sumset(&set, &set)?.len();
    if theta0 < cfg.theta || sumset_size as f64 > (1.0 - cfg.eps) * n {
        return Ok(None);
    }
    Ok(Some(Adversary {
        kind: if index % 2 == 0 && g.is_cyclic() { "interval-dilate" } else { "bohr" },
        counts: set_convolution(&set, &set)?,
        threshold: cfg.delta * theta0 * theta0 * n,
        set,
        sumset_size,
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct AdversaryFailure {
    pub adversary_index: usize,
    pub kind: String,
    pub size: usize,
    pub sumset_size: usize,
    pub min_convolution_on_probe: u64,
    pub threshold: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdversarySummary {
    pub index: usize,
    pub kind: String,
    pub size: usize,
    pub sumset_size: usize,
    /// `#{x : 1_A*1_A(x) ≤ δθ₀²N}`.
    pub small_points: usize,
    /// `1 − (1 − small_points/N)^K`.
    pub predicted_hit_probability: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbingSetReport {
    pub k_formula: f64,
    pub k: usize,
    pub probe: Vec<usize>,
    pub attempts: usize,
    /// Adversary draws requested.
    pub trials: usize,
    pub adversaries: Vec<AdversarySummary>,
    /// Draws discarded for `θ₀ < θ` or `|A+A| > (1−ε)N`.
    pub rejected_draws: usize,
    /// Fraction of (attempt, adversary) pairs where the probe hit a small point.
    pub hit_rate: f64,
    pub adversary_failures: Vec<AdversaryFailure>,
    pub passed: bool,
}

/// Search parameters beyond the shared config.
#[derive(Clone, Copy, Debug)]
pub struct ProbingSearch {
    pub adversary_trials: usize,
    /// Overrides the clamped formula for `K`.
    pub k_override: Option<usize>,
    /// Constant `c` in the formula for `K`.
    pub c: f64,
    pub retry_budget: usize,
}

impl Default for ProbingSearch {
    fn default() -> Self {
        Self {
            adversary_trials: 50,
            k_override: None,
            c: 1.0,
            retry_budget: 20,
        }
    }
}

/// Draws `S₀` of size `K` until one meets every adversary's small level-set.
/// Probe attempt `r` uses stream `(0, r)` of the seed; adversary `i` uses `(1, i)`.
pub fn probing_set_search(cfg: &ExperimentConfig, search: &ProbingSearch) -> Result<ProbingSetReport> {
    cfg.validate()?;
    let n = cfg.group.order();
    let (k_formula, k_clamped) = probing_set_size(n, cfg.theta, cfg.delta, cfg.eps, search.c);
    let k = search.k_override.unwrap_or(k_clamped);
    if k > n {
        return Err(Error::Precondition(format!("K = {k} exceeds N = {n}")));
    }
    if search.retry_budget == 0 {
        return Err(Error::Precondition("retry budget must be positive".into()));
    }
    let root = CounterRng::from_seed(cfg.seed);
    let drawn = (0..search.adversary_trials)
        .into_par_iter()
        .map(|i| build_adversary(cfg, i, &mut root.stream(1).stream(i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let rejected_draws = drawn.iter().filter(|a| a.is_none()).count();
    let adversaries: Vec<(usize, Adversary)> = drawn.into_iter().enumerate().filter_map(|(i, a)| a.map(|a| (i, a))).collect();

    let (mut hits, mut pairs) = (0usize, 0usize);
    let mut last = (Vec::new(), Vec::new());
    let mut attempts = 0;
    let mut passed = false;
    for r in 0..search.retry_budget {
        attempts = r + 1;
        let probe = {
            let mut v = root.stream(0).stream(r as u64).sample_distinct(n, k);
            v.sort_unstable();
            v
        };
        let failures: Vec<AdversaryFailure> = adversaries
            .iter()
            .filter(|(_, a)| {
                pairs += 1;
                let hit = a.hit_by(&probe);
                hits += hit as usize;
                !hit
            })
            .map(|(i, a)| AdversaryFailure {
                adversary_index: *i,
                kind: a.kind.to_string(),
                size: a.set.len(),
                sumset_size: a.sumset_size,
                min_convolution_on_probe: probe.iter().map(|&x| a.counts[x]).min().unwrap_or(0),
                threshold: a.threshold,
            })
            .collect();
        passed = failures.is_empty();
        last = (probe, failures);
        if passed {
            break;
        }
    }
    let summaries = adversaries
        .iter()
        .map(|(i, a)| {
            let small = a.small_points();
            AdversarySummary {
                index: *i,
                kind: a.kind.to_string(),
                size: a.set.len(),
                sumset_size: a.sumset_size,
                small_points: small,
                predicted_hit_probability: 1.0 - (1.0 - small as f64 / n as f64).powi(k as i32),
            }
        })
        .collect();
    Ok(ProbingSetReport {
        k_formula,
        k,
        probe: last.0,
        attempts,
        trials: search.adversary_trials,
        adversaries: summaries,
        rejected_draws,
        hit_rate: if pairs == 0 { 1.0 } else { hits as f64 / pairs as f64 },
        adversary_failures: last.1,
        passed,
    })
}
