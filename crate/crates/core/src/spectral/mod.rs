//! Functions on groups, the Fourier transform, uniformity and ordered spectra.

mod function;
mod spectrum;
pub mod transform;

pub use function::{GroupFunction, IndicatorSet};
pub(crate) use function::check_same_group;
pub use spectrum::{
    fourier_signature, fourier_transform, fourier_transform_direct, top_k_decay_check, uniformity,
    DecayCheck, FourierSignature, Spectrum,
};

#[cfg(test)]
mod tests {
    use num_complex::Complex64;
    use proptest::prelude::*;

    use super::*;
    use crate::group::Group;

    fn arb_function() -> impl Strategy<Value = GroupFunction> {
        prop::collection::vec(1usize..12, 1..4).prop_flat_map(|orders| {
            let g = Group::new(orders).unwrap();
            let n = g.order();
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
                .prop_map(move |v| GroupFunction::new(g.clone(), v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn fast_matches_direct_and_parseval(f in arb_function()) {
            let n = f.group().order() as f64;
            let fast = fourier_transform(&f);
            let direct = fourier_transform_direct(&f);
            let scale = f.l1_norm().max(1.0);
            for (a, b) in fast.coeffs().iter().zip(direct.coeffs()) {
                prop_assert!((a - b).norm() <= 1e-9 * scale);
            }
            let lhs = fast.energy();
            let rhs = n * f.l2_norm_sq();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1e-300));
        }

        #[test]
        fn inverse_recovers(f in arb_function()) {
            let back = fourier_transform(&f).inverse();
            for (a, b) in back.values().iter().zip(f.values()) {
                prop_assert!((a - b).norm() <= 1e-9);
            }
            let direct = transform::inverse_direct(f.group(), fourier_transform_direct(&f).coeffs());
            for (a, b) in direct.iter().zip(f.values()) {
                prop_assert!((a - b).norm() <= 1e-9);
            }
        }

        #[test]
        fn uniformity_is_subadditive(f in arb_function(), scale in -2.0f64..2.0) {
            let g = f.scaled(scale).translated(1);
            let sum = f.checked_add(&g).unwrap();
            prop_assert!(uniformity(&sum) <= uniformity(&f) + uniformity(&g) + 1e-12);
        }

        #[test]
        fn spectrum_order_is_descending(f in arb_function()) {
            let s = fourier_transform(&f);
            let grid = 1e-9 * f.l1_norm().max(1.0);
            for w in s.order().windows(2) {
                prop_assert!(s.coeff(w[0]).norm() + grid >= s.coeff(w[1]).norm());
            }
        }
    }
}
