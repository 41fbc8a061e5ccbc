//! A Bohr translate inside the lower level-set of a set with a large small-convolution region.

use serde::Serialize;

use super::self_convolution_at;
use crate::bohr::BohrSet;
use crate::convolution::set_convolution;
use crate::error::{Error, Result};
use crate::spectral::{fourier_transform, IndicatorSet};

#[derive(Clone, Debug, Serialize)]
pub struct BohrTranslateReport {
    pub theta: f64,
    /// `δ³θ^{5.5}√ε/128`.
    pub delta1: f64,
    /// `⌊4δ₁⁻²θ⌋ + 1` before clamping.
    pub k_formula: f64,
    /// Dimension used, `min(k_formula, N)`.
    pub k: usize,
    /// `2¹⁶δ⁻⁶θ⁻¹⁰ε⁻¹ + 1`.
    pub stated_dimension: f64,
    pub radius: f64,
    pub bohr_size: usize,
    /// `|{x : 1_A*1_A(x) < δ³θ⁶N/128}|`.
    pub hypothesis_count: usize,
    /// `εN`.
    pub hypothesis_needed: f64,
    /// `δθ²N`.
    pub level_threshold: f64,
    pub translate: Option<usize>,
    pub candidates_tried: usize,
    /// Independent elementwise recheck of `x − ℬ`.
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct BohrTranslate {
    pub bohr: BohrSet,
    pub report: BohrTranslateReport,
}

/// Searches `x` in ascending order of `1_A*1_A(x)` (ties by index) for
/// `x − ℬ ⊆ {y : 1_A*1_A(y) < δθ²N}`, `ℬ` built on the top-`k` characters of `1_A`.
pub fn levelset_bohr_translate(a: &IndicatorSet, delta: f64, eps: f64) -> Result<BohrTranslate> {
    let g = a.group();
    let n = g.order();
    let nf = n as f64;
    if a.is_empty() {
        return Err(Error::Precondition("A is empty".into()));
    }
    if !(delta > 0.0 && eps > 0.0) {
        return Err(Error::Precondition(format!("need δ, ε > 0, got {delta}, {eps}")));
    }
    let theta = a.density();
    let counts = set_convolution(a, a)?;
    let small = delta.powi(3) * theta.powi(6) * nf / 128.0;
    let hypothesis_count = counts.iter().filter(|&&c| (c as f64) < small).count();
    if (hypothesis_count as f64) < eps * nf {
        return Err(Error::Precondition(format!(
            "only {hypothesis_count} points below δ³θ⁶N/128 = {small:.6}, need εN = {:.3}",
            eps * nf
        )));
    }
    let delta1 = delta.powi(3) * theta.powf(5.5) * eps.sqrt() / 128.0;
    let k_formula = (4.0 * theta / (delta1 * delta1)).floor() + 1.0;
    let k = if k_formula >= nf { n } else { k_formula as usize };
    let stated_dimension = 2f64.powi(16) * delta.powi(-6) * theta.powi(-10) / eps + 1.0;
    let radius = (delta1 / theta).min(2.0);
    let spec = fourier_transform(&a.to_function());
    let bohr = BohrSet::from_char_indices(g, spec.top(k).to_vec(), radius)?;
    let members = bohr.members().to_vec();

    let level_threshold = delta * theta * theta * nf;
    let mut candidates: Vec<usize> = (0..n).filter(|&x| (counts[x] as f64) < level_threshold).collect();
    candidates.sort_by_key(|&x| (counts[x], x));
    let mut translate = None;
    let mut tried = 0;
    for &x in &candidates {
        tried += 1;
        if members.iter().all(|&b| (counts[g.sub(x, b)] as f64) < level_threshold) {
            translate = Some(x);
            break;
        }
    }
    let verified = translate.is_some_and(|x| {
        members.iter().all(|&b| (self_convolution_at(a, g.sub(x, b)) as f64) < level_threshold)
    });
    Ok(BohrTranslate {
        report: BohrTranslateReport {
            theta,
            delta1,
            k_formula,
            k,
            stated_dimension,
            radius,
            bohr_size: members.len(),
            hypothesis_count,
            hypothesis_needed: eps * nf,
            level_threshold,
            translate,
            candidates_tried: tried,
            verified,
        },
        bohr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{interval_dilate_construction, random_probe_set};
    use crate::group::Group;
    use crate::rng::CounterRng;

    #[test]
    fn progression_at_101() {
        let g = Group::cyclic(101).unwrap();
        let a = IndicatorSet::from_indices(&g, 0..=33).unwrap();
        let t = levelset_bohr_translate(&a, 0.5, 0.3).unwrap();
        assert!(t.report.verified, "{:?}", t.report);
        assert_eq!(t.report.k, 101);
        let x = t.report.translate.unwrap();
        let counts = set_convolution(&a, &a).unwrap();
        for b in t.bohr.members().iter() {
            assert!((counts[g.sub(x, b)] as f64) < t.report.level_threshold);
        }
    }

    #[test]
    fn interval_dilate_at_499() {
        let g = Group::cyclic(499).unwrap();
        let mut rng = CounterRng::for_trial(1, 0);
        let s = random_probe_set(&g, 3, &mut rng).unwrap();
        let a = interval_dilate_construction(&s).unwrap().set;
        let t = levelset_bohr_translate(&a, 1.0, 0.3).unwrap();
        assert!(t.report.verified);
        assert!(t.report.stated_dimension > t.report.k as f64);
    }

    #[test]
    fn full_set_violates_hypothesis() {
        let g = Group::cyclic(31).unwrap();
        assert!(levelset_bohr_translate(&IndicatorSet::full(&g), 0.9, 0.1).is_err());
    }
}
