//! Quadratic residues modulo a prime.

use crate::bohr::is_prime;
use crate::convolution::set_convolution;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::spectral::{fourier_transform, IndicatorSet};

/// `{x² mod N : 1 ≤ x ≤ N−1}`.
pub fn quadratic_residues(n: u64) -> Result<IndicatorSet> {
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    let g = Group::cyclic(n as usize)?;
    IndicatorSet::from_indices(&g, (1..n).map(|x| ((x as u128 * x as u128) % n as u128) as usize))
}

fn require_three_mod_four(n: u64) -> Result<()> {
    if !is_prime(n) {
        return Err(Error::NotPrime(n));
    }
    if n % 4 != 3 {
        return Err(Error::Precondition(format!("{n} is not 3 mod 4")));
    }
    Ok(())
}

/// `max_{a ≠ 0} |1̂_A(a)|` for the residues mod a prime `N ≡ 3 (mod 4)`.
pub fn qr_uniformity_check(n: u64) -> Result<f64> {
    require_three_mod_four(n)?;
    Ok(fourier_transform(&quadratic_residues(n)?.to_function()).max_nontrivial())
}

/// For every `t ≠ 0`: the strict level-sets below `N/8` of `A` and `A+t` are
/// exactly `{0}` and `{2t}`, and they are disjoint.
pub fn qr_level_sets_disjoint(n: u64) -> Result<bool> {
    require_three_mod_four(n)?;
    let a = quadratic_residues(n)?;
    let g = a.group().clone();
    let base = set_convolution(&a, &a)?;
    let low = |counts: &[u64]| IndicatorSet::from_predicate(&g, |x| 8 * counts[x] < n);
    if low(&base).to_vec() != vec![0] {
        return Ok(false);
    }
    for t in 1..g.order() {
        let at = a.translate(t);
        let shifted = low(&set_convolution(&at, &at)?);
        if shifted.to_vec() != vec![g.add(t, t)] || !shifted.intersection(&low(&base))?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_examples() {
        assert_eq!(quadratic_residues(7).unwrap().to_vec(), vec![1, 2, 4]);
        assert_eq!(quadratic_residues(11).unwrap().to_vec(), vec![1, 3, 4, 5, 9]);
        assert!(quadratic_residues(9).is_err());
    }

    #[test]
    fn convolution_vanishes_at_zero() {
        let a = quadratic_residues(7).unwrap();
        assert_eq!(set_convolution(&a, &a).unwrap(), vec![0, 1, 1, 2, 1, 2, 2]);
    }

    #[test]
    fn gauss_sum_scale() {
        for n in [7u64, 103, 499] {
            let m = qr_uniformity_check(n).unwrap();
            assert!(m <= (n as f64).sqrt() + 1.0, "N = {n}: {m}");
        }
        assert!(qr_uniformity_check(13).is_err());
    }

    #[test]
    fn disjoint_level_sets_at_103() {
        assert!(qr_level_sets_disjoint(103).unwrap());
    }
}
