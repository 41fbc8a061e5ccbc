use levelset_lab::convolution::OperationTable;
use levelset_lab::witness::{build_witness, iteration_cap, verify_witness, CandidateFamily, FourierSupNorm, Norm, SupNorm};
use levelset_lab::{Group, IndicatorSet};
use proptest::prelude::*;

fn config() -> impl Strategy<Value = (usize, u64, Vec<u64>, f64, f64, bool)> {
    (6usize..=20).prop_flat_map(|n| {
        let full = (1u64 << n) - 1;
        (
            Just(n),
            1..=full,
            prop::collection::vec(1..=full, 0..6),
            0.05f64..1.5,
            0.1f64..0.4,
            any::<bool>(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witness_guarantees((n, a_mask, masks, delta1, delta2, sup) in config()) {
        let g = Group::cyclic(n).unwrap();
        let a = IndicatorSet::from_mask(&g, a_mask).unwrap();
        prop_assume!(a.len() as f64 >= delta2 * n as f64);
        let mut sets = vec![a.clone()];
        sets.extend(masks.iter().map(|&m| IndicatorSet::from_mask(&g, m).unwrap()));
        let family = CandidateFamily::explicit(&g, sets).unwrap();
        let norm: &dyn Norm = if sup { &SupNorm } else { &FourierSupNorm };
        let t = OperationTable::addition(&g);

        let r = build_witness(&a, &family, norm, &t, delta1, delta2).unwrap();
        prop_assert!(r.j >= 1 && r.j <= iteration_cap(delta2));
        prop_assert!(verify_witness(&r, &a, &family, norm, &t, delta1, delta2).unwrap());
        let mut prev = a.len();
        for rec in &r.trace {
            prop_assert!((rec.support_size - prev) as f64 >= delta2 * n as f64);
            prev = rec.support_size;
        }

        let again = build_witness(&a, &family, norm, &t, delta1, delta2).unwrap();
        prop_assert_eq!(&r.multiplicity, &again.multiplicity);
        prop_assert_eq!(&r.trace, &again.trace);
    }
}
