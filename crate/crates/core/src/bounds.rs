//! Bounds on the order of vanishing at the central point.
//!
//! Keeping only the terms where both zeros sit at the central point, the
//! 2-level density bounds `Σ_r c₂(r) Prob(r)` with `c₂(2m) = 4m(m - 1)` and
//! `c₂(2m + 1) = 4m²`; the 1-level density bounds `Σ_r r Prob(r)`. Upper
//! bounds on `Prob(rank ≥ r)` and lower bounds on low ranks follow by
//! dropping or complementing terms.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fnspace::{integrate, self_correlate, GridError, Interval};
use crate::fredholm::{
    contraction_norm_sq, neumann_iterate_with, solve_quadratic, FredholmError, NystromOperator,
};
use crate::kernels::{
    group_constant, normalize, quadratic_coefficients, weight_kernel, KernelError, Parity,
    SymmetryGroup,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("rank must be at least 1, got {0}")]
    InvalidRank(u64),
    #[error("{group} admits only {parity:?} ranks, got {rank}")]
    ParityMismatch {
        group: SymmetryGroup,
        parity: Parity,
        rank: u64,
    },
    #[error("2-level coefficient vanishes at rank {0}; the 2-level density says nothing there")]
    ZeroCoefficient(u64),
    #[error("no 1-level reference constant for {group} with support {support:?}")]
    NoReference {
        group: SymmetryGroup,
        support: Support,
    },
    #[error("lower bound undefined for {group} at index {k} ({level:?})")]
    Undefined {
        group: SymmetryGroup,
        k: u64,
        level: Level,
    },
    #[error(transparent)]
    Solve(#[from] FredholmError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Support `[-σ, σ]` of the 1-level test function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Support {
    Two,
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level {
    OneLevel(Support),
    TwoLevel,
}

/// Optimal 1-level values taken from the literature.
///
/// Support 2 values are exact expressions; support 3 values are only known
/// as decimals.
pub struct ReferenceConstants;

impl ReferenceConstants {
    pub fn one_level(group: SymmetryGroup, support: Support) -> Option<f64> {
        let cot_quarter = 1.0 / 0.25f64.tan();
        match (group, support) {
            (SymmetryGroup::SOEven, Support::Two) => Some((3.0 + cot_quarter) / 8.0),
            (SymmetryGroup::SOOdd, Support::Two) => Some((5.0 + cot_quarter) / 8.0),
            (SymmetryGroup::SOEven, Support::Three) => Some(0.60363),
            (SymmetryGroup::SOOdd, Support::Three) => Some(1.04304),
            _ => None,
        }
    }

    pub fn source(support: Support) -> &'static str {
        match support {
            Support::Two => "optimal 1-level value, support [-2, 2] (Iwaniec-Luo-Sarnak)",
            Support::Three => "optimal 1-level value, support [-3, 3] (Freeman-Miller)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    Nystrom { nodes: usize },
    NeumannTruncated { terms: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub group: SymmetryGroup,
    pub naive_value: f64,
    pub optimal_value: f64,
    /// `⟨1, g⟩`.
    pub g_integral: f64,
    pub c_const: f64,
    pub provenance: Provenance,
}

/// Objective at `f ≡ 1`: `c (1 + a + b/3 + c/6)`, using `∬|x-y| = 1/3` and
/// `∬(x-y)² = 1/6` over the unit square.
pub fn naive_value(group: SymmetryGroup) -> f64 {
    let k = quadratic_coefficients(group);
    let c = dirac_constant(group);
    c * (1.0 + k.a() + k.b() / 3.0 + k.c() / 6.0)
}

fn dirac_constant(group: SymmetryGroup) -> f64 {
    group_constant(group, 1.0).expect("ratio 1 is positive")
}

/// `c_G / ⟨1, g_G⟩` from the closed-form solution.
pub fn optimal_value(group: SymmetryGroup) -> Result<BoundReport, BoundError> {
    let solution = solve_quadratic(&quadratic_coefficients(group))?;
    let c_const = dirac_constant(group);
    let g_integral = solution.integral();
    Ok(BoundReport {
        group,
        naive_value: naive_value(group),
        optimal_value: c_const / g_integral,
        g_integral,
        c_const,
        provenance: Provenance::Analytic,
    })
}

/// Same as [`optimal_value`] but through a Nyström solve on `nodes` points.
pub fn optimal_value_numeric(
    group: SymmetryGroup,
    nodes: usize,
) -> Result<BoundReport, BoundError> {
    let op = NystromOperator::quadratic(&quadratic_coefficients(group), nodes)?;
    let solution = op.solve()?;
    let c_const = dirac_constant(group);
    Ok(BoundReport {
        group,
        naive_value: naive_value(group),
        optimal_value: c_const / solution.integral,
        g_integral: solution.integral,
        c_const,
        provenance: Provenance::Nystrom { nodes },
    })
}

/// Coefficient of `Prob(r)` in the 2-level central-point inequality.
pub fn two_level_coefficient(rank: u64) -> u64 {
    let m = rank / 2;
    if rank.is_multiple_of(2) {
        4 * m * m.saturating_sub(1)
    } else {
        4 * m * m
    }
}

fn check_rank(group: SymmetryGroup, rank: u64) -> Result<(), BoundError> {
    if rank == 0 {
        return Err(BoundError::InvalidRank(rank));
    }
    if let Some(parity) = group.parity() {
        if !parity.admits(rank) {
            return Err(BoundError::ParityMismatch {
                group,
                parity,
                rank,
            });
        }
    }
    Ok(())
}

fn one_level_constant(group: SymmetryGroup, support: Support) -> Result<f64, BoundError> {
    ReferenceConstants::one_level(group, support).ok_or(BoundError::NoReference { group, support })
}

/// Smallest 2-level coefficient among admissible ranks `≥ rank`.
///
/// `c₂` is non-decreasing, so this is `c₂(rank)` itself; a zero means the
/// 2-level inequality gives no information.
fn tail_coefficient(rank: u64) -> Result<u64, BoundError> {
    match two_level_coefficient(rank) {
        0 => Err(BoundError::ZeroCoefficient(rank)),
        c => Ok(c),
    }
}

/// Upper bound on the proportion vanishing to order at least `rank`.
pub fn upper_bound_order(group: SymmetryGroup, rank: u64, level: Level) -> Result<f64, BoundError> {
    check_rank(group, rank)?;
    match level {
        Level::OneLevel(support) => Ok(one_level_constant(group, support)? / rank as f64),
        Level::TwoLevel => {
            let coefficient = tail_coefficient(rank)?;
            Ok(optimal_value(group)?.optimal_value / coefficient as f64)
        }
    }
}

/// Lower bound on the proportion of low ranks.
///
/// For SO(even) index `k` covers ranks `0, 2, …, 2k`; for SO(odd) ranks
/// `1, 3, …, 2k + 1`. For O, U and Sp only `k = 1`, meaning ranks `≤ 2`, is
/// defined (2-level only): every rank `≥ 3` has coefficient at least
/// `c₂(3) = 4`.
pub fn lower_bound_low_rank(group: SymmetryGroup, k: u64, level: Level) -> Result<f64, BoundError> {
    let undefined = BoundError::Undefined { group, k, level };
    let kf = k as f64;
    match (group, level) {
        (SymmetryGroup::SOEven, Level::TwoLevel) if k >= 1 => {
            Ok(1.0 - optimal_value(group)?.optimal_value / (4.0 * kf * (kf + 1.0)))
        }
        (SymmetryGroup::SOEven, Level::OneLevel(s)) => {
            Ok(1.0 - one_level_constant(group, s)? / (2.0 * kf + 2.0))
        }
        (SymmetryGroup::SOOdd, Level::TwoLevel) => {
            Ok(1.0 - optimal_value(group)?.optimal_value / (4.0 * (kf + 1.0).powi(2)))
        }
        (SymmetryGroup::SOOdd, Level::OneLevel(s)) => {
            Ok(1.0 - one_level_constant(group, s)? / (2.0 * kf + 3.0))
        }
        (SymmetryGroup::O | SymmetryGroup::U | SymmetryGroup::Sp, Level::TwoLevel) if k == 1 => {
            let divisor = two_level_coefficient(3) as f64;
            Ok(1.0 - optimal_value(group)?.optimal_value / divisor)
        }
        _ => Err(undefined),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub order: u64,
    /// Support-2 1-level bound, when a reference constant exists.
    pub one_level: Option<f64>,
    pub two_level: f64,
}

/// Upper bounds for vanishing to order at least `r`, 1-level vs 2-level.
pub fn comparison_table(
    orders: &[u64],
    group: SymmetryGroup,
) -> Result<Vec<ComparisonRow>, BoundError> {
    orders
        .iter()
        .map(|&order| {
            let two_level = upper_bound_order(group, order, Level::TwoLevel)?;
            let one_level = match upper_bound_order(group, order, Level::OneLevel(Support::Two)) {
                Ok(v) => Some(v),
                Err(BoundError::NoReference { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(ComparisonRow {
                order,
                one_level,
                two_level,
            })
        })
        .collect()
}

/// One round of iteration: the optimum for `ψ = (sin πy/πy)²` becomes the
/// fixed test function and the new problem is attacked by the Neumann series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationReport {
    pub group: SymmetryGroup,
    pub nodes: usize,
    pub terms: usize,
    /// `c_{G,φ} = φ̂(0)/φ(0) + shift(G)`.
    pub c_const: f64,
    pub norm_sq: f64,
    pub certified: bool,
    pub nonnegative_terms: bool,
    pub partial_sums: Vec<f64>,
    /// `c / partial_sums[n]` for each `n`.
    pub partial_bounds: Vec<f64>,
    pub final_bound: f64,
    /// `c / ⟨1, g⟩` from a direct solve of the iterated equation.
    pub nystrom_value: f64,
    /// Table value before iterating.
    pub previous_value: f64,
}

/// Builds `φ̂ = g * ğ` from the closed-form optimum on `nodes` points and runs
/// `terms` rounds of the Neumann series on the resulting kernel.
pub fn iterate_group(
    group: SymmetryGroup,
    nodes: usize,
    terms: usize,
) -> Result<IterationReport, BoundError> {
    let solution = solve_quadratic(&quadratic_coefficients(group))?;
    let g = solution.sample(nodes)?;
    let phi_hat = self_correlate(&g);
    debug_assert_eq!(phi_hat.interval(), Interval::TRANSFORM);
    let phi_zero = integrate(&phi_hat);
    let weight = normalize(weight_kernel(group, &phi_hat, phi_zero)?)?;
    let norm_sq = contraction_norm_sq(&weight.kernel);

    let op = NystromOperator::from_grid(&weight.kernel, nodes)?;
    let series = neumann_iterate_with(&op, norm_sq, terms)?;
    let direct = op.solve()?;

    let c = weight.c_const;
    let partial_bounds: Vec<f64> = series.partial_sums.iter().map(|s| c / s).collect();
    Ok(IterationReport {
        group,
        nodes,
        terms,
        c_const: c,
        norm_sq,
        certified: series.certified,
        nonnegative_terms: series.nonnegative_terms,
        final_bound: *partial_bounds.last().expect("at least one term"),
        partial_sums: series.partial_sums,
        partial_bounds,
        nystrom_value: c / direct.integral,
        previous_value: optimal_value(group)?.optimal_value,
    })
}
