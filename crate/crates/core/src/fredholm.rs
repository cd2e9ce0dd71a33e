//! Solvers for `g + K g = 1` on `[-1/2, 1/2]`, where
//! `(K f)(x) = ∫ m(x - y) f(y) dy` for an even kernel `m` on `[-1, 1]`.
//!
//! Three routes are provided: the closed form for kernels `a + b|x| + c x²`,
//! a Nyström discretization for arbitrary sampled kernels, and the Neumann
//! series `Σ (-1)^k K^k(1)` for contractive kernels.

use nalgebra::{DMatrix, DVector, LU};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fnspace::{
    accumulate_segment_weights, integrate, quadrature_weights, GridError, GridFunction, Interval,
    Tail,
};
use crate::kernels::QuadraticKernel;

/// Smallest grid accepted by the Nyström solver.
pub const MIN_NYSTROM_NODES: usize = 41;
/// Post-solve bound on the sup-norm residual of the discrete system.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FredholmError {
    #[error("degenerate quadratic kernel (b = {b}, b + c = {sum})")]
    DegenerateKernel { b: f64, sum: f64 },
    #[error("closed-form denominator vanishes ({0:e}); I + K is singular for this kernel")]
    SingularDenominator(f64),
    #[error("Nyström system is singular at this resolution (condition estimate {0:e})")]
    SingularSystem(f64),
    #[error("Nyström residual {0:e} exceeds tolerance")]
    Residual(f64),
    #[error("kernel is not even (defect {0:e})")]
    NotEven(f64),
    #[error("Nyström grid needs an odd node count >= {MIN_NYSTROM_NODES}, got {0}")]
    BadNodeCount(usize),
    #[error("Neumann iteration needs at least one term")]
    NoTerms,
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// `g(x) = A cos(ω x) + C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigSolution {
    pub amplitude: f64,
    pub omega: f64,
    pub offset: f64,
}

impl TrigSolution {
    pub fn eval(&self, x: f64) -> f64 {
        self.amplitude * (self.omega * x).cos() + self.offset
    }

    /// `∫_{-1/2}^{1/2} g`.
    pub fn integral(&self) -> f64 {
        let cosine = if self.omega == 0.0 {
            1.0
        } else {
            2.0 / self.omega * (0.5 * self.omega).sin()
        };
        self.amplitude * cosine + self.offset
    }

    pub fn sample(&self, n: usize) -> Result<GridFunction, GridError> {
        GridFunction::from_fn(Interval::HALF, n, |x| self.eval(x))
    }
}

/// Closed-form solution of `1 = g(x) + ∫ (a + b|x-y| + c(x-y)²) g(y) dy`.
///
/// Differentiating three times shows `g''' + 2b g' = 0`, so the even
/// solution is `A cos(√(2b) x) + C`; the second derivative ties `C` to `A`
/// and the equation itself fixes `A`.
pub fn solve_quadratic(k: &QuadraticKernel) -> Result<TrigSolution, FredholmError> {
    let (a, b, c) = (k.a(), k.b(), k.c());
    if b == 0.0 || b + c == 0.0 {
        return Err(FredholmError::DegenerateKernel { b, sum: b + c });
    }
    let root_b = b.sqrt();
    let half_arg = (b / 2.0).sqrt();
    let (sin_h, cos_h) = half_arg.sin_cos();
    let sqrt2 = std::f64::consts::SQRT_2;

    let poly =
        6.0 * a * b * b + 3.0 * b.powi(3) + 3.0 * b * b * c + b * c * (c - 12.0) - 6.0 * c * c;
    let lead = 6.0 * root_b * (b + c).powi(2) * cos_h;
    let tail = sqrt2 * poly * sin_h;
    let denominator = lead + tail;
    let scale = lead.abs() + tail.abs();
    if denominator.abs() <= 1e-12 * scale.max(1.0) {
        return Err(FredholmError::SingularDenominator(denominator));
    }

    Ok(TrigSolution {
        amplitude: 6.0 * b * root_b * (b + c) / denominator,
        omega: (2.0 * b).sqrt(),
        offset: -6.0 * sqrt2 * b * c * sin_h / denominator,
    })
}

/// Dense quadrature discretization of `K` on an odd grid over `[-1/2, 1/2]`.
///
/// Row `i` integrates over `[-1/2, x_i]` and `[x_i, 1/2]` separately so the
/// kink of `m(x_i - y)` at `y = x_i` always falls on a segment boundary.
/// Odd-length segments take their 3/8-rule block at the end away from `x_i`,
/// which makes row `n - 1 - i` the mirror image of row `i`.
#[derive(Debug, Clone)]
pub struct NystromOperator {
    n: usize,
    h: f64,
    /// Row-major `K_ij = w_ij m(x_i - x_j)`.
    matrix: Vec<f64>,
    outer_weights: Vec<f64>,
}

impl NystromOperator {
    /// Discretizes a kernel given as a function on `[-1, 1]`.
    pub fn new(kernel: impl Fn(f64) -> f64, n: usize) -> Result<Self, FredholmError> {
        if n < MIN_NYSTROM_NODES || n.is_multiple_of(2) {
            return Err(FredholmError::BadNodeCount(n));
        }
        let grid = GridFunction::constant(Interval::HALF, n, 0.0)?;
        let h = grid.step();

        // m at every lag (i - j) h, symmetric by construction.
        let lags: Vec<f64> = (0..n).map(|k| kernel(k as f64 * h)).collect();

        let mut matrix = vec![0.0; n * n];
        let mut w = vec![0.0; n];
        for i in 0..n {
            w.iter_mut().for_each(|v| *v = 0.0);
            accumulate_segment_weights(&mut w[..=i], h, Tail::Start);
            accumulate_segment_weights(&mut w[i..], h, Tail::End);
            let row = &mut matrix[i * n..(i + 1) * n];
            for j in 0..n {
                row[j] = w[j] * lags[i.abs_diff(j)];
            }
        }
        Ok(Self {
            n,
            h,
            matrix,
            outer_weights: quadrature_weights(&grid),
        })
    }

    /// Discretizes a sampled even kernel on `[-1, 1]`.
    pub fn from_grid(m: &GridFunction, n: usize) -> Result<Self, FredholmError> {
        let defect = m.evenness_defect();
        if defect > 1e-10 * m.max_abs().max(1.0) {
            return Err(FredholmError::NotEven(defect));
        }
        Self::new(|x| m.eval(x), n)
    }

    pub fn quadratic(k: &QuadraticKernel, n: usize) -> Result<Self, FredholmError> {
        Self::new(|x| k.eval(x), n)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn node(&self, i: usize) -> f64 {
        if 2 * i < self.n - 1 {
            -0.5 + i as f64 * self.h
        } else {
            0.5 - (self.n - 1 - i) as f64 * self.h
        }
    }

    /// `K f` at the nodes.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.n, "vector length must match the grid");
        self.matrix
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(f).map(|(k, v)| k * v).sum())
            .collect()
    }

    /// `⟨f, 1⟩` by composite Simpson on the grid.
    pub fn inner_with_one(&self, f: &[f64]) -> f64 {
        self.outer_weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    /// `⟨f, g⟩` by composite Simpson on the grid.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        self.outer_weights
            .iter()
            .zip(f.iter().zip(g))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    /// `⟨(I + K) f, f⟩ / ⟨f, 1⟩²`, the normalized objective at `f`.
    pub fn rayleigh_quotient(&self, f: &[f64]) -> f64 {
        let kf = self.apply(f);
        let plus: Vec<f64> = f.iter().zip(&kf).map(|(a, b)| a + b).collect();
        self.inner(&plus, f) / self.inner_with_one(f).powi(2)
    }

    /// `sup |g + K g - 1|` at the nodes.
    pub fn residual(&self, g: &[f64]) -> f64 {
        self.apply(g)
            .iter()
            .zip(g)
            .map(|(kg, g)| (g + kg - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Solves `(I + K) g = 1`.
    ///
    /// The solution of an even kernel is even, so the system is folded onto
    /// the nodes of `[-1/2, 0]` before factoring. The residual of the full
    /// unfolded system is checked afterwards.
    pub fn solve(&self) -> Result<NystromSolution, FredholmError> {
        let n = self.n;
        let mid = (n - 1) / 2;
        let size = mid + 1;
        let folded = DMatrix::from_fn(size, size, |i, j| {
            let row = &self.matrix[i * n..(i + 1) * n];
            let mut v = row[j];
            if j != mid {
                v += row[n - 1 - j];
            }
            if i == j {
                v += 1.0;
            }
            v
        });
        let norm_one = (0..size)
            .map(|j| folded.column(j).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);

        let lu = LU::new(folded);
        let rhs = DVector::from_element(size, 1.0);
        let half = lu
            .solve(&rhs)
            .ok_or(FredholmError::SingularSystem(f64::INFINITY))?;
        let condition = norm_one * inverse_norm_one_estimate(&lu);
        if !condition.is_finite() || condition > CONDITION_LIMIT {
            return Err(FredholmError::SingularSystem(condition));
        }

        let values: Vec<f64> = (0..n).map(|i| half[i.min(n - 1 - i)]).collect();
        let residual = self.residual(&values);
        if residual.is_nan() || residual > RESIDUAL_TOLERANCE {
            return Err(FredholmError::Residual(residual));
        }
        let integral = self.inner_with_one(&values);
        Ok(NystromSolution {
            g: GridFunction::new(-0.5, 0.5, values)?,
            integral,
            residual,
            condition,
        })
    }
}

/// Hager's estimate of `‖A⁻¹‖₁` from an LU factorization.
fn inverse_norm_one_estimate(lu: &LU<f64, nalgebra::Dyn, nalgebra::Dyn>) -> f64 {
    let size = lu.l().nrows();
    let l = lu.l();
    let u = lu.u();
    let solve_transposed = |b: &DVector<f64>| -> Option<DVector<f64>> {
        let y = u.tr_solve_upper_triangular(b)?;
        let mut z = l.tr_solve_lower_triangular(&y)?;
        lu.p().inv_permute_rows(&mut z);
        Some(z)
    };

    let mut x = DVector::from_element(size, 1.0 / size as f64);
    let mut estimate = 0.0;
    for _ in 0..5 {
        let Some(y) = lu.solve(&x) else {
            return f64::INFINITY;
        };
        estimate = y.iter().map(|v| v.abs()).sum::<f64>();
        let signs = y.map(|v| if v >= 0.0 { 1.0 } else { -1.0 });
        let Some(z) = solve_transposed(&signs) else {
            return f64::INFINITY;
        };
        let (j, zmax) =
            z.iter()
                .enumerate()
                .map(|(j, v)| (j, v.abs()))
                .fold(
                    (0, 0.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if zmax <= z.dot(&x) {
            break;
        }
        x.fill(0.0);
        x[j] = 1.0;
    }
    estimate
}

#[derive(Debug, Clone, PartialEq)]
pub struct NystromSolution {
    pub g: GridFunction,
    /// `⟨1, g⟩`.
    pub integral: f64,
    pub residual: f64,
    /// 1-norm condition estimate of the folded system.
    pub condition: f64,
}

/// Solves `(I + K) g = 1` for a sampled even kernel on an `n`-node grid.
pub fn nystrom_solve(m: &GridFunction, n: usize) -> Result<GridFunction, FredholmError> {
    Ok(NystromOperator::from_grid(m, n)?.solve()?.g)
}

/// `∬_{[-1/2,1/2]²} m(x - y)² dx dy = ∫_{-1}^{1} m(t)² (1 - |t|) dt`.
pub fn contraction_norm_sq(m: &GridFunction) -> f64 {
    integrate(&m.map(|t, v| v * v * (1.0 - t.abs()).max(0.0)))
}

/// Partial sums of `Σ (-1)^k ⟨1, K^k(1)⟩` with a contraction certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeumannResult {
    /// `partial_sums[n] = Σ_{k ≤ n} (-1)^k ⟨1, K^k(1)⟩`.
    pub partial_sums: Vec<f64>,
    /// `term_integrals[k] = (-1)^k ⟨1, K^k(1)⟩`.
    pub term_integrals: Vec<f64>,
    pub norm_sq: f64,
    pub certified: bool,
    /// Whether every `(-1)^k K^k(1)` was non-negative at every node.
    pub nonnegative_terms: bool,
}

impl NeumannResult {
    /// Contraction factor `q = ‖m‖` from the double-integral norm.
    pub fn contraction_factor(&self) -> f64 {
        self.norm_sq.sqrt()
    }

    /// `q^{n+1} / (1 - q)` bounds `|⟨1, g⟩ - partial_sums[n]|` when certified.
    pub fn tail_bound(&self, n: usize) -> Option<f64> {
        self.certified.then(|| {
            let q = self.contraction_factor();
            q.powi(n as i32 + 1) / (1.0 - q)
        })
    }

    /// `c / partial_sums[n]`. An upper bound on the optimum when all terms
    /// are non-negative and the series converges, which `certified` guarantees
    /// but does not characterize.
    pub fn truncated_value(&self, c_const: f64, n: usize) -> f64 {
        c_const / self.partial_sums[n]
    }
}

/// Runs `n_max` rounds of the Neumann series on an existing discretization.
pub fn neumann_iterate_with(
    op: &NystromOperator,
    norm_sq: f64,
    n_max: usize,
) -> Result<NeumannResult, FredholmError> {
    if n_max == 0 {
        return Err(FredholmError::NoTerms);
    }
    let mut term = vec![1.0; op.len()];
    let mut partial_sums = Vec::with_capacity(n_max + 1);
    let mut term_integrals = Vec::with_capacity(n_max + 1);
    let mut nonnegative_terms = true;
    let mut total = 0.0;
    for k in 0..=n_max {
        if k > 0 {
            term = op.apply(&term).into_iter().map(|v| -v).collect();
        }
        let scale = term.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        nonnegative_terms &= term.iter().all(|&v| v >= -1e-12 * scale.max(1e-300));
        let integral = op.inner_with_one(&term);
        total += integral;
        term_integrals.push(integral);
        partial_sums.push(total);
    }
    Ok(NeumannResult {
        partial_sums,
        term_integrals,
        norm_sq,
        certified: norm_sq < 1.0,
        nonnegative_terms,
    })
}

/// Neumann partial sums for a sampled kernel on `[-1, 1]`.
///
/// The `[-1/2, 1/2]` grid is chosen so its spacing matches the kernel's when
/// possible, which keeps every kernel lookup on a node.
pub fn neumann_iterate(m: &GridFunction, n_max: usize) -> Result<NeumannResult, FredholmError> {
    let mut n = m.len().div_ceil(2);
    if n.is_multiple_of(2) {
        n += 1;
    }
    let op = NystromOperator::from_grid(m, n.max(MIN_NYSTROM_NODES))?;
    neumann_iterate_with(&op, contraction_norm_sq(m), n_max)
}
