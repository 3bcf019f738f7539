use moduli_volume::rational::{int, rat};
use moduli_volume::weights::normalize_draws;
use moduli_volume::{
    classify_geometry, cy_reduced_volume, git_nonempty, localization_breakdown,
    localization_volume, mcmullen_volume, moment_value, positive_fixed_points, wall_report,
    GeometryClass, Rational, WeightVector,
};
use num_traits::Signed;
use proptest::prelude::*;

fn cy_weights(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = WeightVector> {
    n.prop_flat_map(|n| prop::collection::vec(1i64..=30, n))
        .prop_filter_map("a weight reached 1", |draws| normalize_draws(&draws))
}

fn open_unit_weights(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = WeightVector> {
    n.prop_flat_map(|n| prop::collection::vec(1i64..40, n))
        .prop_map(|nums| WeightVector::new(nums.iter().map(|&a| rat(a, 40)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engines_agree_and_are_positive(w in cy_weights(4..=8)) {
        let mc = mcmullen_volume(&w).unwrap();
        prop_assert!(mc.coefficient.is_positive());
        prop_assert_eq!(&mc, &localization_volume(&w).unwrap());
        prop_assert_eq!(&mc, &cy_reduced_volume(&w).unwrap());
    }

    #[test]
    fn permutation_invariance(w in cy_weights(4..=7), seed in any::<u64>()) {
        let n = w.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = w.permuted(&order).unwrap();
        prop_assert_eq!(mcmullen_volume(&w).unwrap(), mcmullen_volume(&p).unwrap());
        prop_assert_eq!(localization_volume(&w).unwrap(), localization_volume(&p).unwrap());
    }

    #[test]
    fn trichotomy(w in open_unit_weights(3..=7)) {
        let total = w.total();
        let expected = if total < int(2) {
            GeometryClass::LogFano
        } else if total == int(2) {
            GeometryClass::LogCalabiYau
        } else {
            GeometryClass::LogGeneralType
        };
        prop_assert_eq!(classify_geometry(&w), expected);
    }

    #[test]
    fn calabi_yau_walls_coincide(w in cy_weights(4..=9)) {
        let report = wall_report(&w).unwrap();
        prop_assert_eq!(&report.hassett_walls, &report.localization_walls);
        let n = w.len();
        for subset in &report.hassett_walls {
            prop_assert!(report.hassett_walls.contains(&subset.complement(n)));
        }
    }

    #[test]
    fn moments_are_antisymmetric_at_calabi_yau(w in cy_weights(4..=8), mask in any::<u64>()) {
        let n = w.len();
        let f = moduli_volume::IndexSubset::from_mask(mask & ((1 << n) - 1));
        prop_assert_eq!(moment_value(&w, &f), -moment_value(&w, &f.complement(n)));
    }

    #[test]
    fn breakdown_matches_volume(w in open_unit_weights(4..=8)) {
        prop_assume!(w.total() <= int(2) && git_nonempty(&w));
        let breakdown = localization_breakdown(&w).unwrap();
        prop_assert_eq!(breakdown.volume(), localization_volume(&w).unwrap());
        let fixed = positive_fixed_points(&w).unwrap();
        prop_assert_eq!(fixed.len(), breakdown.terms.len());
        prop_assert!(fixed.iter().all(|f| f.moment.is_positive()));
    }

    #[test]
    fn uniform_scaling_is_homogeneous(w in cy_weights(4..=8), t in 1i64..100) {
        let factor = rat(t, 100);
        let scaled = w.scaled(&factor).unwrap();
        let base = localization_volume(&w).unwrap();
        let expected: Rational = num_traits::pow(factor, w.len() - 3) * &base.coefficient;
        prop_assert_eq!(localization_volume(&scaled).unwrap().coefficient, expected);
    }
}
