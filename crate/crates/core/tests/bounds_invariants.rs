use proptest::prelude::*;
use twolevel::bounds::{
    iterate_group, lower_bound_low_rank, naive_value, optimal_value, optimal_value_numeric,
    two_level_coefficient, upper_bound_order,
};
use twolevel::{BoundError, Level, Provenance, Support, SymmetryGroup};

#[test]
fn optimum_never_exceeds_naive() {
    for group in SymmetryGroup::ALL {
        let r = optimal_value(group).unwrap();
        assert!(r.optimal_value <= naive_value(group), "{group}");
        assert_eq!(r.provenance, Provenance::Analytic);
    }
}

#[test]
fn analytic_report_is_consistent() {
    for group in SymmetryGroup::ALL {
        let r = optimal_value(group).unwrap();
        assert!(
            (r.g_integral * r.optimal_value - r.c_const).abs() <= 1e-10,
            "{group}"
        );
    }
}

#[test]
fn numeric_optimum_agrees_with_closed_form() {
    for group in SymmetryGroup::ALL {
        let exact = optimal_value(group).unwrap().optimal_value;
        let numeric = optimal_value_numeric(group, 2001).unwrap();
        assert!((numeric.optimal_value - exact).abs() <= 1e-6, "{group}");
        assert_eq!(numeric.provenance, Provenance::Nystrom { nodes: 2001 });
    }
}

#[test]
fn coefficient_small_ranks() {
    let expected = [0, 0, 0, 4, 8, 16, 24, 36, 48, 64, 80, 100];
    for (r, c) in expected.iter().enumerate() {
        assert_eq!(two_level_coefficient(r as u64), *c, "rank {r}");
    }
    // The values quoted for rank 2020 and 2021.
    assert_eq!(two_level_coefficient(2020), 4 * 1010 * 1009);
    assert_eq!(two_level_coefficient(2021), 4 * 1010 * 1010);
}

#[test]
fn lower_bound_reconstructs_from_upper_bound() {
    let lower = lower_bound_low_rank(SymmetryGroup::SOEven, 1, Level::TwoLevel).unwrap();
    let upper = upper_bound_order(SymmetryGroup::SOEven, 4, Level::TwoLevel).unwrap();
    assert!((1.0 - lower - upper * (8.0 / 8.0)).abs() <= 1e-15);

    let lower = lower_bound_low_rank(SymmetryGroup::SOOdd, 1, Level::TwoLevel).unwrap();
    let upper = upper_bound_order(SymmetryGroup::SOOdd, 5, Level::TwoLevel).unwrap();
    assert!((1.0 - lower - upper).abs() <= 1e-15);

    for group in [SymmetryGroup::O, SymmetryGroup::U, SymmetryGroup::Sp] {
        let lower = lower_bound_low_rank(group, 1, Level::TwoLevel).unwrap();
        let upper = upper_bound_order(group, 3, Level::TwoLevel).unwrap();
        assert!((1.0 - lower - upper).abs() <= 1e-15, "{group}");
    }
}

#[test]
fn rank_two_is_rejected_at_two_level() {
    for group in [
        SymmetryGroup::SOEven,
        SymmetryGroup::O,
        SymmetryGroup::U,
        SymmetryGroup::Sp,
    ] {
        let err = upper_bound_order(group, 2, Level::TwoLevel).unwrap_err();
        assert_eq!(err, BoundError::ZeroCoefficient(2));
        assert!(err.to_string().contains("coefficient vanishes at rank 2"));
    }
}

#[test]
fn parity_is_enforced() {
    assert!(matches!(
        upper_bound_order(SymmetryGroup::SOEven, 5, Level::TwoLevel),
        Err(BoundError::ParityMismatch { .. })
    ));
    assert!(matches!(
        upper_bound_order(SymmetryGroup::SOOdd, 6, Level::OneLevel(Support::Two)),
        Err(BoundError::ParityMismatch { .. })
    ));
    assert!(matches!(
        upper_bound_order(SymmetryGroup::U, 7, Level::OneLevel(Support::Two)),
        Err(BoundError::NoReference { .. })
    ));
    assert!(matches!(
        lower_bound_low_rank(SymmetryGroup::U, 2, Level::TwoLevel),
        Err(BoundError::Undefined { .. })
    ));
}

#[test]
fn shorter_iteration_is_weaker() {
    let one = iterate_group(SymmetryGroup::U, 401, 1).unwrap();
    let five = iterate_group(SymmetryGroup::U, 401, 5).unwrap();
    assert!(one.final_bound >= five.final_bound);
    assert_eq!(one.partial_bounds[1], five.partial_bounds[1]);
}

/// Smallest admissible rank `≥ 3` in the `m`-th position of `group`'s class.
fn admissible(group: SymmetryGroup, m: u64) -> u64 {
    match group {
        SymmetryGroup::SOEven => 2 * m + 2,
        SymmetryGroup::SOOdd => 2 * m + 1,
        _ => m + 2,
    }
}

proptest! {
    #[test]
    fn two_level_bound_is_monotone(
        group in prop::sample::select(SymmetryGroup::ALL.to_vec()),
        m in 1u64..5000,
    ) {
        let step = if group.parity().is_some() { 2 } else { 1 };
        let r = admissible(group, m);
        let here = upper_bound_order(group, r, Level::TwoLevel).unwrap();
        let next = upper_bound_order(group, r + step, Level::TwoLevel).unwrap();
        prop_assert!(next <= here);
    }

    #[test]
    fn one_level_bound_is_monotone(m in 1u64..5000) {
        for (group, r) in [(SymmetryGroup::SOEven, 2 * m), (SymmetryGroup::SOOdd, 2 * m + 1)] {
            for support in [Support::Two, Support::Three] {
                let here = upper_bound_order(group, r, Level::OneLevel(support)).unwrap();
                let next = upper_bound_order(group, r + 2, Level::OneLevel(support)).unwrap();
                prop_assert!(next < here);
            }
        }
    }

    #[test]
    fn lower_bounds_grow_with_k(k in 1u64..1000) {
        for group in [SymmetryGroup::SOEven, SymmetryGroup::SOOdd] {
            for level in [Level::TwoLevel, Level::OneLevel(Support::Two), Level::OneLevel(Support::Three)] {
                let here = lower_bound_low_rank(group, k, level).unwrap();
                let next = lower_bound_low_rank(group, k + 1, level).unwrap();
                prop_assert!(next > here && next < 1.0);
            }
        }
    }
}
