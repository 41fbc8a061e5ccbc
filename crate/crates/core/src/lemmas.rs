//! Property suites for the three auxiliary inequalities: convolution proximity
//! under uniformity, decay of ordered Fourier coefficients, and Bohr set size
//! with progression extraction.

use rayon::prelude::*;
use serde::Serialize;

use crate::bohr::{ap_in_bohr, ap_length_bound, bohr_cardinality_bound, is_prime, ArithmeticProgression, BohrSet};
use crate::convolution::{convolve, convolve_direct};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::rng::CounterRng;
use crate::spectral::{check_same_group, fourier_transform, uniformity, GroupFunction};

/// Above this order the convolution checks use the fast path.
const DIRECT_LIMIT: usize = 512;

fn require_unit_valued(f: &GroupFunction) -> Result<()> {
    if f.is_unit_interval_valued() {
        Ok(())
    } else {
        Err(Error::Precondition("function must map into [0,1]".into()))
    }
}

fn self_convolution(f: &GroupFunction) -> Result<GroupFunction> {
    if f.len() <= DIRECT_LIMIT {
        convolve_direct(f, f)
    } else {
        convolve(f, f)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProximityCheck {
    /// `𝔼g`.
    pub theta: f64,
    /// `uniformity(g − h)`, measured.
    pub delta1: f64,
    /// `Σ_x |g*g(x) − h*h(x)|²`.
    pub lhs: f64,
    /// `δ₁²(4θ + δ₁)N³`.
    pub rhs: f64,
    pub holds: bool,
}

/// `Σ|g*g − h*h|² ≤ δ₁²(4θ+δ₁)N³` with `θ = 𝔼g` and `δ₁` the measured uniformity of `g − h`.
pub fn convolution_proximity_check(g: &GroupFunction, h: &GroupFunction) -> Result<ProximityCheck> {
    check_same_group(g.group(), h.group())?;
    require_unit_valued(g)?;
    require_unit_valued(h)?;
    let n = g.len() as f64;
    let theta = g.expectation().re;
    let delta1 = uniformity(&g.checked_sub(h)?);
    let gg = self_convolution(g)?;
    let hh = self_convolution(h)?;
    let lhs: f64 = gg.values().iter().zip(hh.values()).map(|(a, b)| (a - b).norm_sqr()).sum();
    let rhs = delta1 * delta1 * (4.0 * theta + delta1) * n.powi(3);
    Ok(ProximityCheck {
        theta,
        delta1,
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-9) + 1e-9 * n * n,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecayProfile {
    /// Rank with the largest `|ĥ(χ_k)| / N√(𝔼h/k)`.
    pub worst_k: usize,
    pub worst_ratio: f64,
    pub holds: bool,
}

/// `|ĥ(χ_k)| ≤ N√(𝔼h/k)` for every rank `k`.
pub fn decay_profile(h: &GroupFunction) -> Result<DecayProfile> {
    require_unit_valued(h)?;
    let n = h.len() as f64;
    let mean = h.expectation().re;
    let spec = fourier_transform(h);
    let mut worst = (1, 0.0f64);
    let mut holds = true;
    for (rank, &c) in spec.order().iter().enumerate() {
        let k = rank + 1;
        let coefficient = spec.coeff(c).norm();
        let bound = n * (mean / k as f64).sqrt();
        holds &= coefficient <= bound * (1.0 + 1e-9) + 1e-9;
        let ratio = if bound > 0.0 { coefficient / bound } else if coefficient > 1e-9 { f64::INFINITY } else { 0.0 };
        if ratio > worst.1 {
            worst = (k, ratio);
        }
    }
    Ok(DecayProfile {
        worst_k: worst.0,
        worst_ratio: worst.1,
        holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BohrCheck {
    pub dimension: usize,
    pub radius: f64,
    pub size: usize,
    /// `(r/2π)^d N`.
    pub size_bound: f64,
    pub size_ok: bool,
    /// Present for prime cyclic groups with `d ≥ 1`, `r > 0`.
    pub ap: Option<ArithmeticProgression>,
    pub ap_length_bound: Option<usize>,
    pub ap_inside: Option<bool>,
    pub ap_long_enough: Option<bool>,
}

impl BohrCheck {
    pub fn holds(&self) -> bool {
        self.size_ok && self.ap_inside.unwrap_or(true) && self.ap_long_enough.unwrap_or(true)
    }
}

/// Size bound, plus progression extraction with an independent membership recheck.
pub fn bohr_check(bohr: &BohrSet) -> Result<BohrCheck> {
    let g = bohr.group();
    let n = g.order();
    let d = bohr.dimension();
    let r = bohr.radius();
    let size = bohr.members().len();
    let size_bound = bohr_cardinality_bound(d, r, n);
    let mut out = BohrCheck {
        dimension: d,
        radius: r,
        size,
        size_bound,
        size_ok: size as f64 >= size_bound * (1.0 - 1e-12),
        ap: None,
        ap_length_bound: None,
        ap_inside: None,
        ap_long_enough: None,
    };
    if g.is_cyclic() && is_prime(n as u64) && d >= 1 && r > 0.0 {
        let ap = ap_in_bohr(bohr)?;
        let elems = ap.element_indices(g)?;
        let inside = elems.iter().all(|&x| {
            bohr.frequencies()
                .iter()
                .all(|&c| (num_complex::Complex64::new(1.0, 0.0) - g.char_eval_index(c, x)).norm() <= r + 1e-12)
        });
        let mut distinct = elems.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let bound = ap_length_bound(d, r, n);
        out.ap_inside = Some(inside && distinct.len() == elems.len());
        out.ap_long_enough = Some(ap.length >= bound);
        out.ap_length_bound = Some(bound);
        out.ap = Some(ap);
    }
    Ok(out)
}

/// A random `[0,1]`-valued function: uniform values, a random set, or sparse small values.
pub fn random_unit_function(group: &Group, rng: &mut CounterRng) -> GroupFunction {
    let n = group.order();
    let values: Vec<f64> = match rng.below(3) {
        0 => (0..n).map(|_| rng.unit()).collect(),
        1 => {
            let p = rng.unit();
            (0..n).map(|_| if rng.bernoulli(p) { 1.0 } else { 0.0 }).collect()
        }
        _ => (0..n).map(|_| if rng.bernoulli(0.2) { rng.unit() } else { 0.0 }).collect(),
    };
    GroupFunction::from_real(group.clone(), values).expect("one value per element")
}

/// A pair `(g, h)`: independent, or `h` a clamped perturbation of `g` of random size.
pub fn random_function_pair(group: &Group, rng: &mut CounterRng) -> (GroupFunction, GroupFunction) {
    let g = random_unit_function(group, rng);
    let h = if rng.bernoulli(0.5) {
        random_unit_function(group, rng)
    } else {
        let scale = rng.unit().powi(3);
        let vals = g
            .real_values()
            .iter()
            .map(|&v| (v + scale * rng.uniform(-1.0, 1.0)).clamp(0.0, 1.0))
            .collect();
        GroupFunction::from_real(group.clone(), vals).expect("one value per element")
    };
    (g, h)
}

/// `d ∈ 1..=max_d` random characters and `r ∈ (0, 2]`.
pub fn random_bohr_set(group: &Group, rng: &mut CounterRng, max_d: usize) -> Result<BohrSet> {
    let d = 1 + rng.below_usize(max_d.max(1));
    let freqs = (0..d).map(|_| rng.below_usize(group.order())).collect();
    let r = 2.0 * (1.0 - rng.unit());
    BohrSet::from_char_indices(group, freqs, r)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteTally {
    pub trials: usize,
    pub violations: usize,
    /// Trial indices of the first few violations.
    pub failing_trials: Vec<usize>,
}

impl SuiteTally {
    fn from_outcomes(outcomes: impl IntoIterator<Item = bool>) -> Self {
        let mut t = SuiteTally::default();
        for (i, ok) in outcomes.into_iter().enumerate() {
            t.trials += 1;
            if !ok {
                t.violations += 1;
                if t.failing_trials.len() < 10 {
                    t.failing_trials.push(i);
                }
            }
        }
        t
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaSuiteReport {
    pub convolution_proximity: SuiteTally,
    pub coefficient_decay: SuiteTally,
    pub bohr_size_and_progression: SuiteTally,
}

impl LemmaSuiteReport {
    pub fn passed(&self) -> bool {
        self.convolution_proximity.violations == 0
            && self.coefficient_decay.violations == 0
            && self.bohr_size_and_progression.violations == 0
    }
}

/// Runs `trials` seeded cases of each suite. Trial `i` of suite `s` draws from
/// `CounterRng::from_seed(seed).stream(s).stream(i)`.
pub fn run_lemma_suites(group: &Group, trials: usize, seed: u64) -> Result<LemmaSuiteReport> {
    let root = CounterRng::from_seed(seed);
    let prox = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = root.stream(0).stream(i as u64);
            let (g, h) = random_function_pair(group, &mut rng);
            convolution_proximity_check(&g, &h).map(|c| c.holds)
        })
        .collect::<Result<Vec<_>>>()?;
    let decay = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = root.stream(1).stream(i as u64);
            decay_profile(&random_unit_function(group, &mut rng)).map(|c| c.holds)
        })
        .collect::<Result<Vec<_>>>()?;
    let bohr = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = root.stream(2).stream(i as u64);
            bohr_check(&random_bohr_set(group, &mut rng, 3)?).map(|c| c.holds())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LemmaSuiteReport {
        convolution_proximity: SuiteTally::from_outcomes(prox),
        coefficient_decay: SuiteTally::from_outcomes(decay),
        bohr_size_and_progression: SuiteTally::from_outcomes(bohr),
    })
}
