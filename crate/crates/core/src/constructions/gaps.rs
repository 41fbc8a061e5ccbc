//! Gaps between large convolution values along every difference orbit of `Z_N`.

use rayon::prelude::*;
use serde::Serialize;

use super::require_prime_cyclic;
use crate::convolution::{set_convolution, sumset};
use crate::error::Result;
use crate::spectral::IndicatorSet;

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    /// `δθ²N`.
    pub threshold: f64,
    /// `#{x : 1_A*1_A(x) ≥ δθ²N}`.
    pub large_count: usize,
    /// Largest step count between consecutive large points along `x, x+d, x+2d, …`.
    pub max_gap: usize,
    pub worst_step: usize,
    pub gap_cap: usize,
    pub all_gaps_within: bool,
    pub sumset_size: usize,
    /// `(1−ε)N`.
    pub sumset_target: f64,
    pub sumset_large: bool,
    pub findings: Vec<String>,
}

/// Checks that along every orbit of every step `d ≠ 0`, each large point is
/// followed by another within `gap_cap` steps; if so, `|A+A| ≥ (1−ε)N` is expected.
pub fn gap_criterion_check(a: &IndicatorSet, delta: f64, eps: f64, gap_cap: usize) -> Result<GapReport> {
    let g = a.group();
    let n = require_prime_cyclic(g)? as usize;
    let theta = a.density();
    let threshold = delta * theta * theta * n as f64;
    let counts = set_convolution(a, a)?;
    let large: Vec<bool> = counts.iter().map(|&c| c as f64 >= threshold).collect();
    let large_count = large.iter().filter(|&&b| b).count();
    let (max_gap, worst_step) = if large_count == 0 {
        (0, 1)
    } else {
        (1..n)
            .into_par_iter()
            .map(|d| {
                let start = (0..n).find(|&j| large[j * d % n]).expect("some point is large");
                let (mut last, mut widest) = (start, 0);
                for j in start + 1..=start + n {
                    if large[j * d % n] {
                        widest = widest.max(j - last);
                        last = j;
                    }
                }
                (widest, d)
            })
            .reduce(|| (0, usize::MAX), |x, y| if (y.0, std::cmp::Reverse(y.1)) > (x.0, std::cmp::Reverse(x.1)) { y } else { x })
    };
    let all_gaps_within = max_gap <= gap_cap;
    let sumset_size = sumset(a, a)?.len();
    let sumset_target = (1.0 - eps) * n as f64;
    let sumset_large = sumset_size as f64 >= sumset_target;
    let mut findings = Vec::new();
    if all_gaps_within && !sumset_large {
        findings.push(format!(
            "all gaps ≤ {gap_cap} but |A+A| = {sumset_size} < (1−ε)N = {sumset_target:.3}"
        ));
    }
    Ok(GapReport {
        threshold,
        large_count,
        max_gap,
        worst_step,
        gap_cap,
        all_gaps_within,
        sumset_size,
        sumset_target,
        sumset_large,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    #[test]
    fn full_set() {
        let g = Group::cyclic(101).unwrap();
        let r = gap_criterion_check(&IndicatorSet::full(&g), 0.5, 0.1, 1).unwrap();
        assert_eq!(r.max_gap, 1);
        assert!(r.all_gaps_within && r.sumset_large && r.findings.is_empty());
    }

    #[test]
    fn interval_has_a_long_gap() {
        let g = Group::cyclic(101).unwrap();
        let a = IndicatorSet::from_indices(&g, 0..34).unwrap();
        let cap = (101f64).sqrt().floor() as usize;
        let r = gap_criterion_check(&a, 0.5, 0.2, cap).unwrap();
        assert!(r.sumset_size < 81);
        assert!(!r.all_gaps_within);
        // Along d = 1 the large points form an arc; the gap is N minus its length plus one.
        let arc = r.large_count;
        assert!(r.max_gap >= 101 - arc + 1);
        assert!(r.findings.is_empty());
    }

    #[test]
    fn maximal_cap_is_vacuous() {
        let g = Group::cyclic(53).unwrap();
        let a = IndicatorSet::from_indices(&g, [1, 7, 8, 20]).unwrap();
        let r = gap_criterion_check(&a, 0.5, 0.5, 53).unwrap();
        assert!(r.all_gaps_within);
        assert!(gap_criterion_check(&IndicatorSet::full(&Group::cyclic(12).unwrap()), 0.5, 0.5, 3).is_err());
    }
}
