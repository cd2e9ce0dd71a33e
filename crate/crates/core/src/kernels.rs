//! Fourier-side weight functions for the 2-level densities.
//!
//! For a fixed test function `ψ` with `supp ψ̂ ⊆ [-1, 1]` the weight against
//! which `φ̂` is integrated is `c·δ(x) + m̃(x)` on `[-1, 1]`. Dividing by `c`
//! gives the normalized kernel `m` that defines the Fredholm operator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fnspace::{cumulative, value_at_zero_from_transform, GridError, GridFunction, Interval};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("ψ̂(0)/ψ(0) must be positive, got {0}")]
    NonPositiveRatio(f64),
    #[error("ψ(0) must be positive, got {0}")]
    NonPositivePsiZero(f64),
    #[error("Dirac coefficient must be positive to normalize, got {0}")]
    NonPositiveConstant(f64),
    #[error("weight is already normalized")]
    AlreadyNormalized,
    #[error("quadratic kernel needs finite coefficients with b >= 0, got ({a}, {b}, {c})")]
    InvalidQuadratic { a: f64, b: f64, c: f64 },
    #[error("transform must be sampled on [-1, 1], got [{0}, {1}]")]
    NotOnTransformInterval(f64, f64),
    #[error("unknown symmetry group {0:?} (expected so-even, so-odd, o, u or sp)")]
    UnknownGroup(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Parity forced on the order of vanishing by the root number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn admits(self, order: u64) -> bool {
        match self {
            Parity::Even => order.is_multiple_of(2),
            Parity::Odd => order % 2 == 1,
        }
    }
}

/// The classical compact groups governing a family's low-lying zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymmetryGroup {
    #[serde(rename = "so-even")]
    SOEven,
    #[serde(rename = "so-odd")]
    SOOdd,
    #[serde(rename = "o")]
    O,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "sp")]
    Sp,
}

impl SymmetryGroup {
    pub const ALL: [SymmetryGroup; 5] = [
        SymmetryGroup::SOEven,
        SymmetryGroup::SOOdd,
        SymmetryGroup::O,
        SymmetryGroup::U,
        SymmetryGroup::Sp,
    ];

    /// Shell-friendly identifier.
    pub fn slug(self) -> &'static str {
        match self {
            SymmetryGroup::SOEven => "so-even",
            SymmetryGroup::SOOdd => "so-odd",
            SymmetryGroup::O => "o",
            SymmetryGroup::U => "u",
            SymmetryGroup::Sp => "sp",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SymmetryGroup::SOEven => "SO(even)",
            SymmetryGroup::SOOdd => "SO(odd)",
            SymmetryGroup::O => "O",
            SymmetryGroup::U => "U",
            SymmetryGroup::Sp => "Sp",
        }
    }

    /// `None` when both parities occur.
    pub fn parity(self) -> Option<Parity> {
        match self {
            SymmetryGroup::SOEven => Some(Parity::Even),
            SymmetryGroup::SOOdd => Some(Parity::Odd),
            _ => None,
        }
    }

    /// Shift added to `ψ̂(0)/ψ(0)` to get the Dirac coefficient.
    fn dirac_shift(self) -> f64 {
        match self {
            SymmetryGroup::Sp => -0.5,
            SymmetryGroup::U => 0.0,
            SymmetryGroup::SOEven | SymmetryGroup::SOOdd | SymmetryGroup::O => 0.5,
        }
    }
}

impl fmt::Display for SymmetryGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SymmetryGroup {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        SymmetryGroup::ALL
            .into_iter()
            .find(|g| g.slug() == key)
            .ok_or_else(|| KernelError::UnknownGroup(s.to_string()))
    }
}

/// The kernel `a + b|x| + c x²` on `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticKernel {
    pub(crate) a: f64,
    pub(crate) b: f64,
    pub(crate) c: f64,
}

impl QuadraticKernel {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, KernelError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || b < 0.0 {
            return Err(KernelError::InvalidQuadratic { a, b, c });
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = x.abs();
        self.a + self.b * t + self.c * t * t
    }

    pub fn sample(&self, n: usize) -> Result<GridFunction, GridError> {
        GridFunction::from_fn(Interval::TRANSFORM, n, |x| self.eval(x))
    }
}

/// Split of the weight into a Dirac coefficient and a kernel on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightDecomposition {
    pub group: SymmetryGroup,
    pub c_const: f64,
    pub kernel: GridFunction,
    pub normalized: bool,
}

/// Dirac coefficient `ψ̂(0)/ψ(0) + shift(G)`.
pub fn group_constant(group: SymmetryGroup, psi_ratio: f64) -> Result<f64, KernelError> {
    if psi_ratio.is_nan() || psi_ratio <= 0.0 {
        return Err(KernelError::NonPositiveRatio(psi_ratio));
    }
    Ok(psi_ratio + group.dirac_shift())
}

/// `ψ̂(x) = (1 - |x|)` on `[-1, 1]`, the transform of `(sin πy / πy)²`.
pub fn triangle_transform(n: usize) -> Result<GridFunction, GridError> {
    GridFunction::from_fn(Interval::TRANSFORM, n, |x| (1.0 - x.abs()).max(0.0))
}

/// Unnormalized weight kernel `m̃_{G,ψ}` for an arbitrary sampled `ψ̂`.
///
/// `psi0` is `ψ(0)`; pass [`value_at_zero_from_transform`] of `psi_hat` when
/// nothing better is known (see [`weight_kernel_from_transform`]).
pub fn weight_kernel(
    group: SymmetryGroup,
    psi_hat: &GridFunction,
    psi0: f64,
) -> Result<WeightDecomposition, KernelError> {
    if psi0.is_nan() || psi0 <= 0.0 {
        return Err(KernelError::NonPositivePsiZero(psi0));
    }
    if psi_hat.interval() != Interval::TRANSFORM {
        return Err(KernelError::NotOnTransformInterval(
            psi_hat.lo(),
            psi_hat.hi(),
        ));
    }
    let ratio = psi_hat.eval(0.0) / psi0;
    let c_const = group_constant(group, ratio)?;
    let running = cumulative(psi_hat);

    // ∫_{|x|-1}^{1-|x|} ψ̂, zero once the limits meet at |x| = 1.
    let symmetric = |x: f64| {
        let t = x.abs();
        if t >= 1.0 {
            0.0
        } else {
            running.eval(1.0 - t) - running.eval(t - 1.0)
        }
    };

    let kernel = psi_hat.map(|x, psi| {
        let linear = 2.0 * psi / psi0 * (x.abs() - 1.0);
        let sym = symmetric(x) / psi0;
        match group {
            SymmetryGroup::SOEven => 0.5 * (ratio + 0.5) + linear - sym,
            SymmetryGroup::SOOdd => 0.5 * (ratio - 1.5) + linear + sym,
            SymmetryGroup::O => 0.5 * (ratio - 0.5) + linear,
            SymmetryGroup::U => psi / psi0 * (x.abs() - 1.0),
            SymmetryGroup::Sp => -0.5 * (ratio - 0.5) + linear + sym,
        }
    });

    Ok(WeightDecomposition {
        group,
        c_const,
        kernel,
        normalized: false,
    })
}

/// [`weight_kernel`] with `ψ(0)` recovered as the integral of `ψ̂`.
pub fn weight_kernel_from_transform(
    group: SymmetryGroup,
    psi_hat: &GridFunction,
) -> Result<WeightDecomposition, KernelError> {
    weight_kernel(group, psi_hat, value_at_zero_from_transform(psi_hat))
}

/// Divides the kernel by the Dirac coefficient; `c_const` is kept.
pub fn normalize(w: WeightDecomposition) -> Result<WeightDecomposition, KernelError> {
    if w.normalized {
        return Err(KernelError::AlreadyNormalized);
    }
    if w.c_const.is_nan() || w.c_const <= 0.0 {
        return Err(KernelError::NonPositiveConstant(w.c_const));
    }
    Ok(WeightDecomposition {
        kernel: w.kernel.scale(1.0 / w.c_const),
        normalized: true,
        ..w
    })
}

/// Normalized kernels for `ψ = (sin πy / πy)²`.
pub fn quadratic_coefficients(group: SymmetryGroup) -> QuadraticKernel {
    let (a, b, c) = match group {
        SymmetryGroup::SOEven => (-1.5, 8.0 / 3.0, -2.0 / 3.0),
        SymmetryGroup::SOOdd => (-5.0 / 6.0, 8.0 / 3.0, -2.0),
        // The x² coefficient follows from the O weight with the triangle
        // transform, (-7/4 + 4|x| - 2x²) / (3/2).
        SymmetryGroup::O => (-7.0 / 6.0, 8.0 / 3.0, -4.0 / 3.0),
        SymmetryGroup::U => (-1.0, 2.0, -1.0),
        SymmetryGroup::Sp => (-2.5, 8.0, -6.0),
    };
    QuadraticKernel { a, b, c }
}
