//! Bohr neighborhoods, their size bound, arithmetic progressions inside them,
//! and simultaneous Diophantine approximation by exhaustive scan.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Character, Group, GroupElement};
use crate::spectral::IndicatorSet;

/// `ℬ(Λ, r) = {x : |1 − χ(x)| ≤ r for every χ ∈ Λ}`.
#[derive(Debug)]
pub struct BohrSet {
    group: Group,
    frequencies: Vec<usize>,
    radius: f64,
    members: OnceLock<IndicatorSet>,
}

impl Clone for BohrSet {
    fn clone(&self) -> Self {
        let members = OnceLock::new();
        if let Some(m) = self.members.get() {
            let _ = members.set(m.clone());
        }
        Self {
            group: self.group.clone(),
            frequencies: self.frequencies.clone(),
            radius: self.radius,
            members,
        }
    }
}

impl BohrSet {
    pub fn new(group: &Group, frequencies: &[Character], radius: f64) -> Result<Self> {
        let idx = frequencies
            .iter()
            .map(|c| group.character_index(c))
            .collect::<Result<Vec<_>>>()?;
        Self::from_char_indices(group, idx, radius)
    }

    pub fn from_char_indices(group: &Group, frequencies: Vec<usize>, radius: f64) -> Result<Self> {
        if !(0.0..=2.0).contains(&radius) {
            return Err(Error::Precondition(format!("Bohr radius {radius} outside [0, 2]")));
        }
        if let Some(&bad) = frequencies.iter().find(|&&c| c >= group.order()) {
            return Err(Error::Precondition(format!("character index {bad} outside group of order {}", group.order())));
        }
        Ok(Self {
            group: group.clone(),
            frequencies,
            radius,
            members: OnceLock::new(),
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn frequencies(&self) -> &[usize] {
        &self.frequencies
    }

    pub fn characters(&self) -> Vec<Character> {
        self.frequencies.iter().map(|&c| self.group.character(c)).collect()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `d = |Λ|`.
    pub fn dimension(&self) -> usize {
        self.frequencies.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.frequencies
            .iter()
            .all(|&c| self.group.char_distance(c, x) <= self.radius)
    }

    /// Exact membership by evaluating every element, computed once.
    pub fn members(&self) -> &IndicatorSet {
        self.members
            .get_or_init(|| IndicatorSet::from_predicate(&self.group, |x| self.contains(x)))
    }
}

/// `(r / 2π)^d · N`.
pub fn bohr_cardinality_bound(d: usize, r: f64, n: usize) -> f64 {
    (r / (2.0 * PI)).powi(d as i32) * n as f64
}

/// `⌊r N^{1/d} / 2π⌋`, the guaranteed progression length in a prime-order Bohr set.
pub fn ap_length_bound(d: usize, r: f64, n: usize) -> usize {
    if d == 0 {
        return n;
    }
    (r * (n as f64).powf(1.0 / d as f64) / (2.0 * PI)).floor() as usize
}

/// `‖x‖`: the representative of `x mod N` in `(−N/2, N/2]`.
pub fn residue_norm(x: i64, n: u64) -> i64 {
    let n = n as i64;
    let r = x.rem_euclid(n);
    if 2 * r > n {
        r - n
    } else {
        r
    }
}

/// Whether `m ≤ N^{1 − 1/(k+1)}`, decided as `m^{k+1} ≤ N^k` in integers when it fits.
fn within_dirichlet_bound(m: u64, n: u64, k: usize) -> bool {
    let k32 = k as u32;
    match ((m as u128).checked_pow(k32 + 1), (n as u128).checked_pow(k32)) {
        (Some(lhs), Some(rhs)) => lhs <= rhs,
        _ => (k + 1) as f64 * (m as f64).ln() <= k as f64 * (n as f64).ln(),
    }
}

fn check_residues(xs: &[u64], n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("modulus {n} < 2")));
    }
    if let Some(&bad) = xs.iter().find(|&&x| x >= n) {
        return Err(Error::Precondition(format!("residue {bad} not in [0, {n})")));
    }
    Ok(())
}

fn max_residue_norm(step: u64, xs: &[u64], n: u64) -> u64 {
    xs.iter()
        .map(|&x| residue_norm(((step as u128 * x as u128) % n as u128) as i64, n).unsigned_abs())
        .max()
        .unwrap_or(0)
}

/// Smallest `n ∈ [1, N)` with `max_i ‖n·x_i‖ ≤ N^{1−1/(k+1)}`.
///
/// Such `n` always exists (pigeonhole on the `⌊N^{1−1/(k+1)}⌋ + 1` multiples
/// `0, x, 2x, …`), so exhausting the scan means a bug and is reported as
/// [`Error::Internal`]. An empty list returns 1.
pub fn dirichlet_simultaneous(xs: &[u64], n: u64) -> Result<u64> {
    check_residues(xs, n)?;
    let k = xs.len();
    if k == 0 {
        return Ok(1);
    }
    (1..n)
        .find(|&step| within_dirichlet_bound(max_residue_norm(step, xs, n), n, k))
        .ok_or_else(|| Error::Internal(format!("no Dirichlet multiplier found for {xs:?} mod {n}")))
}

/// The `n ∈ [1, N)` minimizing `max_i ‖n·x_i‖`, smallest on ties, with that minimum.
pub fn best_simultaneous_step(xs: &[u64], n: u64) -> Result<(u64, u64)> {
    check_residues(xs, n)?;
    let mut best = (1, max_residue_norm(1, xs, n));
    for step in 2..n {
        if best.1 == 0 {
            break;
        }
        let m = max_residue_norm(step, xs, n);
        if m < best.1 {
            best = (step, m);
        }
    }
    Ok(best)
}

/// `start + j·step` for `0 ≤ j < length`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArithmeticProgression {
    pub start: GroupElement,
    pub step: GroupElement,
    pub length: usize,
}

impl ArithmeticProgression {
    pub fn element_indices(&self, group: &Group) -> Result<Vec<usize>> {
        let start = group.index_of(&self.start)?;
        let step = group.index_of(&self.step)?;
        let mut out = Vec::with_capacity(self.length);
        let mut cur = start;
        for _ in 0..self.length {
            out.push(cur);
            cur = group.add(cur, step);
        }
        Ok(out)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A progression centred at 0 inside a Bohr set over `Z_N`, `N` prime, of
/// length at least `⌊r N^{1/d} / 2π⌋`.
///
/// The step `n` minimizes `m = max_i ‖n·a_i‖`. Since `|1 − e^{iφ}| ≤ |φ|`,
/// every `j·n` with `|j|·m ≤ rN/2π` is a member; the progression is then
/// extended while exact membership still holds. Pigeonhole on `N` points in
/// `(⌈N^{1/d}⌉ − 1)^d` boxes gives `m < N/(⌈N^{1/d}⌉ − 1)`, enough for the bound.
pub fn ap_in_bohr(bohr: &BohrSet) -> Result<ArithmeticProgression> {
    let g = bohr.group();
    let n = g.order();
    if !g.is_cyclic() || !is_prime(n as u64) {
        return Err(Error::Precondition(format!("AP extraction needs Z_N with N prime, got {g}")));
    }
    if bohr.dimension() == 0 {
        return Err(Error::Precondition("AP extraction needs at least one frequency".into()));
    }
    if bohr.radius() <= 0.0 {
        return Err(Error::Precondition("AP extraction needs a positive radius".into()));
    }
    let members = bohr.members();
    let half = (n - 1) / 2;
    let centred = |step: usize, j: usize| ArithmeticProgression {
        start: g.element(g.scale(step, -(j as i64))),
        step: g.element(step),
        length: (2 * j + 1).min(n),
    };
    if members.len() == n {
        return Ok(centred(1 % n, half));
    }
    let freqs: Vec<u64> = bohr.frequencies().iter().map(|&c| c as u64).collect();
    let (step, m) = best_simultaneous_step(&freqs, n as u64)?;
    let step = step as usize;
    // m > 0 here: m = 0 with prime N would make every multiple, hence G, a member.
    let guaranteed = ((bohr.radius() * n as f64) / (2.0 * PI * m as f64)).floor() as usize;
    let mut j = 0;
    while j < half && members.contains(g.scale(step, (j + 1) as i64)) {
        j += 1;
    }
    if j < guaranteed.min(half) {
        return Err(Error::Internal(format!(
            "multiple {} of step {step} left the Bohr set below the guaranteed range {guaranteed}",
            j + 1
        )));
    }
    Ok(centred(step, j))
}
