mod common;

use common::{gl_integrate, reference_solution};
use proptest::prelude::*;
use twolevel::fnspace::{cumulative, integrate, self_correlate, value_at_zero_from_transform};
use twolevel::{GridFunction, Interval, SymmetryGroup};

fn trig(interval: Interval, n: usize, coeffs: &[(f64, f64)]) -> GridFunction {
    GridFunction::from_fn(interval, n, |x| {
        coeffs.iter().map(|(a, w)| a * (w * x).cos()).sum()
    })
    .unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-5.0..5.0f64, 0.0..10.0f64), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integrate_is_linear(f in coeffs(), g in coeffs(), alpha in -3.0..3.0f64, beta in -3.0..3.0f64) {
        let f = trig(Interval::HALF, 201, &f);
        let g = trig(Interval::HALF, 201, &g);
        let combo = f.zip_with(&g, |a, b| alpha * a + beta * b).unwrap();
        let lhs = integrate(&combo);
        let rhs = alpha * integrate(&f) + beta * integrate(&g);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn correlation_is_even(c in coeffs(), shift in -0.5..0.5f64) {
        let g = GridFunction::from_fn(Interval::HALF, 201, |x| {
            c.iter().map(|(a, w)| a * (w * (x - shift)).cos()).sum()
        }).unwrap();
        prop_assert!(self_correlate(&g).evenness_defect() <= 1e-12);
    }

    #[test]
    fn correlation_at_zero_is_energy(c in coeffs()) {
        let g = trig(Interval::HALF, 2001, &c);
        let corr = self_correlate(&g);
        let energy = integrate(&g.map(|_, v| v * v));
        prop_assert!((corr.eval(0.0) - energy).abs() <= 1e-8);
    }

    #[test]
    fn cumulative_endpoint_matches_integral(c in coeffs(), n in (20usize..400).prop_map(|k| 2 * k + 1)) {
        let f = trig(Interval::TRANSFORM, n, &c);
        let total = cumulative(&f).values()[n - 1];
        prop_assert!((total - integrate(&f)).abs() <= 1e-10);
    }

    #[test]
    fn cumulative_endpoint_matches_integral_with_kink(n in (20usize..400).prop_map(|k| 2 * k + 1)) {
        let f = GridFunction::from_fn(Interval::TRANSFORM, n, |x| (1.0 - x.abs()) * (3.0 * x).cos()).unwrap();
        let total = cumulative(&f).values()[n - 1];
        prop_assert!((total - integrate(&f)).abs() <= 1e-10);
    }
}

#[test]
fn refinement_changes_solution_integrals_little() {
    for group in SymmetryGroup::ALL {
        let g = reference_solution(group);
        let coarse = integrate(&GridFunction::from_fn(Interval::HALF, 2001, g).unwrap());
        let fine = integrate(&GridFunction::from_fn(Interval::HALF, 4001, g).unwrap());
        assert!(
            (coarse - fine).abs() <= 1e-10,
            "{group}: {coarse} vs {fine}"
        );
    }
}

#[test]
fn unitary_correlation_at_zero_matches_reference() {
    let g = reference_solution(SymmetryGroup::U);
    let sampled = GridFunction::from_fn(Interval::HALF, 4001, g).unwrap();
    let corr = self_correlate(&sampled);
    let energy = gl_integrate(|x| g(x) * g(x), -0.5, 0.5, 8);
    assert!((corr.eval(0.0) - energy).abs() < 1e-8);
}

#[test]
fn unitary_correlation_integral_is_square_of_mass() {
    // ∫ (g * ğ) = (∫ g)², an identity the library never uses directly.
    let g = reference_solution(SymmetryGroup::U);
    let sampled = GridFunction::from_fn(Interval::HALF, 2001, g).unwrap();
    let phi0 = value_at_zero_from_transform(&self_correlate(&sampled));
    let mass = gl_integrate(g, -0.5, 0.5, 8);
    assert!(
        (phi0 - mass * mass).abs() < 1e-8,
        "{phi0} vs {}",
        mass * mass
    );
}

#[test]
fn unitary_correlation_matches_pointwise_reference() {
    let g = reference_solution(SymmetryGroup::U);
    let sampled = GridFunction::from_fn(Interval::HALF, 2001, g).unwrap();
    let corr = self_correlate(&sampled);
    for t in [-0.9, -0.5, -0.1, 0.0, 0.25, 0.75, 1.0] {
        let lo = (t - 0.5f64).max(-0.5);
        let hi = (t + 0.5f64).min(0.5);
        let reference = gl_integrate(|y| g(y) * g(y - t), lo, hi, 8);
        assert!((corr.eval(t) - reference).abs() < 1e-10, "t = {t}");
    }
    assert_eq!(corr.eval(1.0), 0.0);
    assert_eq!(corr.eval(-1.0), 0.0);
}

#[test]
fn indicator_correlation_is_triangle() {
    let one = GridFunction::constant(Interval::HALF, 2001, 1.0).unwrap();
    let tri = self_correlate(&one);
    let gap = tri
        .points()
        .map(|(x, v)| (v - (1.0 - x.abs())).abs())
        .fold(0.0, f64::max);
    assert!(gap <= 1e-8);
}
