//! Fourier-pseudorandom probe sets: does `S` meet every translate of a Bohr set?

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::bohr::BohrSet;
use crate::convolution::set_convolution;
use crate::error::{Error, Result};
use crate::spectral::{fourier_transform, IndicatorSet};

#[derive(Clone, Debug, Serialize)]
pub struct PseudorandomReport {
    pub set_size: usize,
    /// `max_{χ≠χ₀} |1̂_S(χ)| / |S|`.
    pub ratio: f64,
    /// `ln` of `(δ³θ^{4.5}√ε/512π)^{2¹⁶δ⁻⁶θ⁻¹⁰ε⁻¹+1}`.
    pub log_theorem_threshold: f64,
    pub theorem_condition: bool,
    /// `δ³θ^{4.5}√ε/128`.
    pub rho: f64,
    /// Radius of `ℬ' = ℬ(Λ, ρ/2)`, or the override.
    pub bohr_radius: f64,
    pub bohr_size: usize,
    /// `|ℬ'|/N`.
    pub operative_threshold: f64,
    pub operative_condition: bool,
    /// `operative_threshold − ratio`.
    pub margin: f64,
    /// `min_t Σ_x g(x+t)1_S(x)` with `g = 1_ℬ'*1_ℬ'`.
    pub min_translate_sum: u64,
    pub worst_translate: usize,
    pub translates_ok: bool,
    pub findings: Vec<String>,
}

impl PseudorandomReport {
    pub fn passed(&self) -> bool {
        self.translates_ok && self.findings.is_empty()
    }
}

/// Compares the nontrivial spectrum of `S` with the theorem's threshold and the
/// operative condition `ratio < |ℬ'|/N`, and checks every translate sum directly.
pub fn pseudorandom_probe_check(
    s: &IndicatorSet,
    theta: f64,
    delta: f64,
    eps: f64,
    lambda: &[usize],
    radius_override: Option<f64>,
) -> Result<PseudorandomReport> {
    let g = s.group();
    let n = g.order();
    if s.is_empty() {
        return Err(Error::Precondition("probe set is empty".into()));
    }
    let spec = fourier_transform(&s.to_function());
    // Coefficients below the transform's noise floor count as zero.
    let raw = spec.max_nontrivial();
    let ratio = if raw <= 1e-9 * s.len() as f64 { 0.0 } else { raw / s.len() as f64 };
    let base = delta.powi(3) * theta.powf(4.5) * eps.sqrt() / (512.0 * PI);
    let exponent = 2f64.powi(16) * delta.powi(-6) * theta.powi(-10) / eps + 1.0;
    let log_theorem_threshold = exponent * base.ln();
    let theorem_condition = ratio == 0.0 || ratio.ln() < log_theorem_threshold;

    let rho = delta.powi(3) * theta.powf(4.5) * eps.sqrt() / 128.0;
    let bohr_radius = radius_override.unwrap_or(rho / 2.0);
    let bohr = BohrSet::from_char_indices(g, lambda.to_vec(), bohr_radius)?;
    let b = bohr.members();
    let operative_threshold = b.len() as f64 / n as f64;
    let operative_condition = ratio < operative_threshold;

    let weights = set_convolution(b, b)?;
    let support: Vec<usize> = (0..n).filter(|&y| weights[y] > 0).collect();
    let sums: Vec<u64> = (0..n)
        .into_par_iter()
        .map(|t| support.iter().filter(|&&y| s.contains(g.sub(y, t))).map(|&y| weights[y]).sum())
        .collect();
    let (worst_translate, &min_translate_sum) = sums.iter().enumerate().min_by_key(|(_, &v)| v).expect("nonempty group");
    let translates_ok = min_translate_sum > 0;
    let mut findings = Vec::new();
    if operative_condition && !translates_ok {
        findings.push(format!("operative condition holds but translate {worst_translate} misses S"));
    }
    Ok(PseudorandomReport {
        set_size: s.len(),
        ratio,
        log_theorem_threshold,
        theorem_condition,
        rho,
        bohr_radius,
        bohr_size: b.len(),
        operative_threshold,
        operative_condition,
        margin: operative_threshold - ratio,
        min_translate_sum,
        worst_translate,
        translates_ok,
        findings,
    })
}
