use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::function::{GroupFunction, IndicatorSet};
use super::transform;
use crate::error::{Error, Result};
use crate::group::Group;

/// All Fourier coefficients of a function, plus their magnitude ordering.
///
/// `order[0], order[1], …` lists character indices by descending `|coeff|`.
/// Magnitudes are first snapped to a grid of `1e-9 · max(1, ‖f‖₁)` so that
/// coefficients equal up to rounding count as ties; ties go to the smaller
/// character index.
#[derive(Clone, Debug)]
pub struct Spectrum {
    group: Group,
    coeffs: Vec<Complex64>,
    order: Vec<usize>,
}

impl Spectrum {
    pub fn from_coefficients(group: Group, coeffs: Vec<Complex64>, l1_scale: f64) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::Precondition(format!(
                "spectrum has {} coefficients but |G| = {}",
                coeffs.len(),
                group.order()
            )));
        }
        let grid = 1e-9 * l1_scale.max(1.0);
        let keys: Vec<u64> = coeffs.iter().map(|c| (c.norm() / grid).round() as u64).collect();
        let mut order: Vec<usize> = (0..coeffs.len()).collect();
        order.sort_by(|&a, &b| keys[b].cmp(&keys[a]).then(a.cmp(&b)));
        Ok(Self { group, coeffs, order })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, char_index: usize) -> Complex64 {
        self.coeffs[char_index]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Character index of `χ_k` (1-based rank, as in `|ĥ(χ_1)| ≥ |ĥ(χ_2)| ≥ …`).
    pub fn ranked(&self, k: usize) -> usize {
        self.order[k - 1]
    }

    /// The first `k` characters in spectrum order.
    pub fn top(&self, k: usize) -> &[usize] {
        &self.order[..k.min(self.order.len())]
    }

    /// `max_{χ ≠ χ₀} |f̂(χ)|` (zero on the trivial group).
    pub fn max_nontrivial(&self) -> f64 {
        self.coeffs.iter().skip(1).map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `Σ_χ |f̂(χ)|²`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn inverse(&self) -> GroupFunction {
        GroupFunction::new(self.group.clone(), transform::inverse(&self.group, &self.coeffs))
            .expect("length preserved by transform")
    }

    /// CSV with columns `char_index, freq_coords, re, im, magnitude, rank`
    /// (rank is 1-based, rows in character-index order).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut rank = vec![0usize; self.order.len()];
        for (r, &c) in self.order.iter().enumerate() {
            rank[c] = r + 1;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["char_index", "freq_coords", "re", "im", "magnitude", "rank"])?;
        for (i, c) in self.coeffs.iter().enumerate() {
            let freq: Vec<String> = self.group.coords_of(i).iter().map(|v| v.to_string()).collect();
            w.write_record([
                i.to_string(),
                freq.join(","),
                format!("{:.12e}", c.re),
                format!("{:.12e}", c.im),
                format!("{:.12e}", c.norm()),
                rank[i].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Fast transform of `f`.
pub fn fourier_transform(f: &GroupFunction) -> Spectrum {
    let coeffs = transform::forward(f.group(), f.values());
    Spectrum::from_coefficients(f.group().clone(), coeffs, f.l1_norm()).expect("length preserved by transform")
}

/// Oracle transform (`O(N²)` direct sum).
pub fn fourier_transform_direct(f: &GroupFunction) -> Spectrum {
    let coeffs = transform::forward_direct(f.group(), f.values());
    Spectrum::from_coefficients(f.group().clone(), coeffs, f.l1_norm()).expect("length preserved by transform")
}

/// `N⁻¹ · max_χ |f̂(χ)|`; `f` is α-uniform iff this is `≤ α`.
pub fn uniformity(f: &GroupFunction) -> f64 {
    let coeffs = transform::forward(f.group(), f.values());
    coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max) / f.group().order() as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayCheck {
    pub holds: bool,
    /// `|f̂(χ_k)|`.
    pub coefficient: f64,
    /// `N·√(𝔼f / k)`.
    pub bound: f64,
}

/// Checks `|f̂(χ_k)| ≤ N√(𝔼f / k)` for `f : G → [0,1]`.
pub fn top_k_decay_check(f: &GroupFunction, k: usize) -> Result<DecayCheck> {
    let n = f.group().order();
    if k == 0 || k > n {
        return Err(Error::Precondition(format!("k = {k} outside [1, {n}]")));
    }
    if !f.is_unit_interval_valued() {
        return Err(Error::Precondition("function must map into [0,1]".into()));
    }
    let spec = fourier_transform(f);
    let coefficient = spec.coeff(spec.ranked(k)).norm();
    let bound = n as f64 * (f.expectation().re / k as f64).sqrt();
    Ok(DecayCheck {
        holds: coefficient <= bound * (1.0 + 1e-9) + 1e-9,
        coefficient,
        bound,
    })
}

/// The quantized top-`k` Fourier data of an indicator set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FourierSignature {
    pub k: usize,
    pub top_chars: Vec<usize>,
    /// `Re, Im` of each top coefficient as integer multiples of `quantum`.
    pub multiples: Vec<i64>,
    #[serde(skip)]
    quantum_bits: u64,
}

impl FourierSignature {
    pub fn quantum(&self) -> f64 {
        f64::from_bits(self.quantum_bits)
    }

    /// The `2k` rounded coordinates.
    pub fn rounded(&self) -> Vec<f64> {
        let q = self.quantum();
        self.multiples.iter().map(|&m| m as f64 * q).collect()
    }
}

/// Top-`k` characters of `1_A` with `Re`/`Im` rounded half-away-from-zero to multiples of `q`.
pub fn fourier_signature(a: &IndicatorSet, k: usize, quantum: f64) -> Result<FourierSignature> {
    let n = a.group().order();
    if k == 0 || k > n {
        return Err(Error::Precondition(format!("k = {k} outside [1, {n}]")));
    }
    if !(quantum > 0.0 && quantum.is_finite()) {
        return Err(Error::Precondition(format!("quantum {quantum} must be positive")));
    }
    let spec = fourier_transform(&a.to_function());
    let top_chars = spec.top(k).to_vec();
    let multiples = top_chars
        .iter()
        .flat_map(|&c| {
            let v = spec.coeff(c);
            [(v.re / quantum).round() as i64, (v.im / quantum).round() as i64]
        })
        .collect();
    Ok(FourierSignature {
        k,
        top_chars,
        multiples,
        quantum_bits: quantum.to_bits(),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::rng::CounterRng;

    fn z(n: usize) -> Group {
        Group::cyclic(n).unwrap()
    }

    #[test]
    fn delta_and_constant() {
        let g = z(8);
        let s = fourier_transform(&IndicatorSet::from_indices(&g, [0]).unwrap().to_function());
        assert!(s.coeffs().iter().all(|c| (c - 1.0).norm() < 1e-12));

        let g = z(6);
        let s = fourier_transform(&GroupFunction::constant(&g, 1.0));
        assert!((s.coeff(0) - 6.0).norm() < 1e-9);
        assert!(s.coeffs()[1..].iter().all(|c| c.norm() < 1e-9));
    }

    #[test]
    fn two_point_set_z4() {
        let g = z(4);
        let s = fourier_transform(&IndicatorSet::from_indices(&g, [0, 1]).unwrap().to_function());
        for a in 0..4 {
            let expected = Complex64::new(1.0, 0.0) + crate::group::root_of_unity(a, 4);
            assert!((s.coeff(a) - expected).norm() < 1e-12);
        }
        assert!(s.coeff(2).norm() < 1e-12);
    }

    #[test]
    fn uniformity_examples() {
        let g = z(9);
        assert_eq!(uniformity(&GroupFunction::zeros(&g)), 0.0);
        assert!((uniformity(&GroupFunction::constant(&g, 1.0)) - 1.0).abs() < 1e-12);

        // 1_A − 1_{A+t}: compare against the direct transform of the difference.
        let g = z(31);
        let a = IndicatorSet::from_indices(&g, [0, 3, 4, 10, 17, 22]).unwrap();
        let diff = a.to_function().checked_sub(&a.translate(5).to_function()).unwrap();
        let direct = fourier_transform_direct(&diff);
        let expected = direct.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max) / 31.0;
        assert!((uniformity(&diff) - expected).abs() < 1e-12);
        let nontrivial_a = fourier_transform(&a.to_function()).max_nontrivial() / 31.0;
        assert!(uniformity(&diff) <= 2.0 * nontrivial_a + 1e-12);
    }

    #[test]
    fn decay_examples() {
        let g = z(10);
        let c = top_k_decay_check(&GroupFunction::constant(&g, 1.0), 1).unwrap();
        assert!(c.holds);
        assert!((c.coefficient - 10.0).abs() < 1e-9 && (c.bound - 10.0).abs() < 1e-12);

        let delta = IndicatorSet::from_indices(&g, [0]).unwrap().to_function();
        let c = top_k_decay_check(&delta, 10).unwrap();
        assert!(c.holds);
        assert!((c.coefficient - 1.0).abs() < 1e-12 && (c.bound - 1.0).abs() < 1e-12);

        assert!(top_k_decay_check(&delta, 0).is_err());
        assert!(top_k_decay_check(&delta, 11).is_err());
        let bad = GroupFunction::constant(&g, 2.0);
        assert!(top_k_decay_check(&bad, 1).is_err());
    }

    #[test]
    fn decay_on_random_sets_z101() {
        let g = z(101);
        let mut rng = CounterRng::from_seed(3);
        for _ in 0..50 {
            let a = IndicatorSet::from_predicate(&g, |_| rng.bernoulli(0.3));
            let f = a.to_function();
            for k in 1..=101 {
                assert!(top_k_decay_check(&f, k).unwrap().holds);
            }
        }
    }

    #[test]
    fn signature_examples() {
        let g = z(5);
        let s = fourier_signature(&IndicatorSet::full(&g), 1, 1.0).unwrap();
        assert_eq!(s.top_chars, vec![0]);
        assert_eq!(s.rounded(), vec![5.0, 0.0]);

        let g = z(4);
        let s = fourier_signature(&IndicatorSet::from_indices(&g, [0]).unwrap(), 2, 0.5).unwrap();
        assert_eq!(s.top_chars, vec![0, 1]);
        assert_eq!(s.rounded(), vec![1.0, 0.0, 1.0, 0.0]);
        assert!(s.rounded().iter().all(|v| (v / 0.5).fract() == 0.0));

        assert!(fourier_signature(&IndicatorSet::full(&g), 5, 1.0).is_err());
        assert!(fourier_signature(&IndicatorSet::full(&g), 1, 0.0).is_err());
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        // 1_{0,1} on Z_4 at a = 1 is 1 + i; with q = 2 both parts sit on a half-quantum.
        let g = z(4);
        let a = IndicatorSet::from_indices(&g, [0, 1]).unwrap();
        let s = fourier_signature(&a, 4, 2.0).unwrap();
        let pos = s.top_chars.iter().position(|&c| c == 1).unwrap();
        assert_eq!(&s.multiples[2 * pos..2 * pos + 2], &[1, 1]);
        let pos = s.top_chars.iter().position(|&c| c == 3).unwrap();
        assert_eq!(&s.multiples[2 * pos..2 * pos + 2], &[1, -1]);
    }

    #[test]
    fn equal_signatures_force_close_spectra() {
        // Randomized search for equal-signature collisions among equal-size sets
        // and translates; each collision must satisfy the sup bound.
        let mut collisions = 0;
        for (n, k, q) in [(16usize, 2usize, 4.0f64), (32, 3, 6.0), (64, 2, 12.0)] {
            let g = z(n);
            let mut rng = CounterRng::for_trial(11, n as u64);
            let size = n / 4;
            let mut buckets: HashMap<FourierSignature, Vec<IndicatorSet>> = HashMap::new();
            for _ in 0..400 {
                let base = IndicatorSet::from_indices(&g, rng.sample_distinct(n, size)).unwrap();
                let shifted = base.translate(rng.below_usize(n));
                for s in [base, shifted] {
                    buckets.entry(fourier_signature(&s, k, q).unwrap()).or_default().push(s);
                }
            }
            for sets in buckets.values() {
                for pair in sets.windows(2) {
                    let (b, c) = (&pair[0], &pair[1]);
                    let sb = fourier_transform_direct(&b.to_function());
                    let sc = fourier_transform_direct(&c.to_function());
                    let sup = (0..n).map(|i| (sb.coeff(i) - sc.coeff(i)).norm()).fold(0.0, f64::max);
                    let tail = sb.coeff(sb.ranked(k)).norm();
                    assert!(sup <= 2.0 * q + 2.0 * tail + 1e-9, "sup {sup} q {q} tail {tail}");
                    collisions += 1;
                }
            }
        }
        assert!(collisions > 0);
    }

    #[test]
    fn spectrum_csv_layout() {
        let g: Group = "Z2xZ2".parse().unwrap();
        let spec = fourier_transform(&IndicatorSet::from_indices(&g, [0, 1]).unwrap().to_function());
        let mut buf = Vec::new();
        spec.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "char_index,freq_coords,re,im,magnitude,rank");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,\"0,0\","));
        assert!(lines[1].ends_with(",1"));
    }
}
