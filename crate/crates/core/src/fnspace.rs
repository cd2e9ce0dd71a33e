//! Sampled real functions on uniform grids.
//!
//! Every [`GridFunction`] carries an odd number of nodes so that composite
//! Simpson panels tile the grid, and so that symmetric intervals always have
//! a node at the origin. Integrands built from `|x|` are only non-smooth at
//! the origin; quadrature splits there so the kink never sits inside a panel.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default node count for production runs.
pub const DEFAULT_NODES: usize = 4001;
/// Node count used by the fast test paths.
pub const FAST_NODES: usize = 401;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("interval [{lo}, {hi}] is empty or not finite")]
    BadInterval { lo: f64, hi: f64 },
    #[error("grid needs an odd node count of at least 3, got {0}")]
    BadNodeCount(usize),
    #[error("sample {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("grids do not match: [{0}, {1}] with {2} nodes vs [{3}, {4}] with {5} nodes")]
    Mismatch(f64, f64, usize, f64, f64, usize),
}

/// A closed interval `[lo, hi]` with `hi > lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// `[-1, 1]`, where the Fourier transforms live.
    pub const TRANSFORM: Interval = Interval { lo: -1.0, hi: 1.0 };
    /// `[-1/2, 1/2]`, the domain of the square-integrable factors.
    pub const HALF: Interval = Interval { lo: -0.5, hi: 0.5 };

    pub fn new(lo: f64, hi: f64) -> Result<Self, GridError> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(GridError::BadInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Real samples at `n` equispaced nodes on `[lo, hi]`, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    lo: f64,
    hi: f64,
    values: Vec<f64>,
}

fn check_node_count(n: usize) -> Result<(), GridError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(GridError::BadNodeCount(n));
    }
    Ok(())
}

impl GridFunction {
    pub fn new(lo: f64, hi: f64, values: Vec<f64>) -> Result<Self, GridError> {
        Interval::new(lo, hi)?;
        check_node_count(values.len())?;
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(GridError::NonFinite { index, value });
        }
        Ok(Self { lo, hi, values })
    }

    /// Samples `f` at `n` nodes of `interval`.
    pub fn from_fn(
        interval: Interval,
        n: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self, GridError> {
        check_node_count(n)?;
        let h = interval.width() / (n - 1) as f64;
        let values = (0..n)
            .map(|i| f(node_position(interval.lo, interval.hi, h, i, n)))
            .collect();
        Self::new(interval.lo, interval.hi, values)
    }

    pub fn constant(interval: Interval, n: usize, value: f64) -> Result<Self, GridError> {
        Self::from_fn(interval, n, |_| value)
    }

    pub fn interval(&self) -> Interval {
        Interval {
            lo: self.lo,
            hi: self.hi,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.len() - 1) as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Position of node `i`. The last node is exactly `hi`, and on symmetric
    /// intervals mirrored nodes are exact negatives of each other.
    pub fn node(&self, i: usize) -> f64 {
        node_position(self.lo, self.hi, self.step(), i, self.len())
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.node(i))
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes().zip(self.values.iter().copied())
    }

    /// Index of the node at `x`, if `x` sits on the grid.
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let pos = (x - self.lo) / self.step();
        let rounded = pos.round();
        if rounded < 0.0 || rounded > (self.len() - 1) as f64 {
            return None;
        }
        ((pos - rounded).abs() <= 1e-9).then_some(rounded as usize)
    }

    /// Linear interpolation between nodes; zero outside `[lo, hi]`.
    pub fn eval(&self, x: f64) -> f64 {
        if let Some(i) = self.node_index(x) {
            return self.values[i];
        }
        if x < self.lo || x > self.hi {
            return 0.0;
        }
        let pos = (x - self.lo) / self.step();
        let i = (pos.floor() as usize).min(self.len() - 2);
        let t = pos - i as f64;
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        let values = self.points().map(|(x, v)| f(x, v)).collect();
        GridFunction {
            lo: self.lo,
            hi: self.hi,
            values,
        }
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        self.len() == other.len() && self.lo == other.lo && self.hi == other.hi
    }

    pub fn zip_with(
        &self,
        other: &GridFunction,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<GridFunction, GridError> {
        if !self.same_grid(other) {
            return Err(GridError::Mismatch(
                self.lo,
                self.hi,
                self.len(),
                other.lo,
                other.hi,
                other.len(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(GridFunction {
            lo: self.lo,
            hi: self.hi,
            values,
        })
    }

    pub fn scale(&self, factor: f64) -> GridFunction {
        self.map(|_, v| v * factor)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|f(x_i) - f(x_{n-1-i})|` over mirrored node pairs.
    pub fn evenness_defect(&self) -> f64 {
        let n = self.len();
        (0..n / 2)
            .map(|i| (self.values[i] - self.values[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }

    /// Interior node sitting at the origin, if any.
    pub fn origin_index(&self) -> Option<usize> {
        if self.lo >= 0.0 || self.hi <= 0.0 {
            return None;
        }
        self.node_index(0.0)
            .filter(|&i| i > 0 && i + 1 < self.len())
    }
}

fn node_position(lo: f64, hi: f64, h: f64, i: usize, n: usize) -> f64 {
    // Fill from both ends so the endpoints and the mirror symmetry are exact.
    if 2 * i < n - 1 {
        lo + i as f64 * h
    } else if i == n - 1 {
        hi
    } else {
        hi - (n - 1 - i) as f64 * h
    }
}

/// Which end of an odd-length segment receives the 3/8-rule block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Tail {
    Start,
    End,
}

/// Adds the quadrature weights of one segment of `weights.len() - 1` equal
/// intervals of width `h` into `weights`.
///
/// Even interval counts use composite Simpson. Odd counts of three or more use
/// Simpson on all but three intervals and the 3/8 rule on the three at the
/// `tail` end; a single interval falls back to the trapezoid. All branches
/// except the trapezoid are exact for cubics.
pub(crate) fn accumulate_segment_weights(weights: &mut [f64], h: f64, tail: Tail) {
    let intervals = weights.len().saturating_sub(1);
    match intervals {
        0 => {}
        1 => {
            weights[0] += 0.5 * h;
            weights[1] += 0.5 * h;
        }
        _ => {
            let (simpson, eighths) = if intervals.is_multiple_of(2) {
                (0..intervals, None)
            } else {
                match tail {
                    Tail::End => (0..intervals - 3, Some(intervals - 3)),
                    Tail::Start => (3..intervals, Some(0)),
                }
            };
            let third = h / 3.0;
            for p in simpson.step_by(2) {
                weights[p] += third;
                weights[p + 1] += 4.0 * third;
                weights[p + 2] += third;
            }
            if let Some(s) = eighths {
                let e = 3.0 * h / 8.0;
                weights[s] += e;
                weights[s + 1] += 3.0 * e;
                weights[s + 2] += 3.0 * e;
                weights[s + 3] += e;
            }
        }
    }
}

pub(crate) fn segment_integral(values: &[f64], h: f64) -> f64 {
    let mut w = vec![0.0; values.len()];
    accumulate_segment_weights(&mut w, h, Tail::End);
    w.iter().zip(values).map(|(w, v)| w * v).sum()
}

/// Quadrature weights for the whole grid, split at the origin when the origin
/// is an interior node. On symmetric grids the weights are mirror symmetric.
pub fn quadrature_weights(f: &GridFunction) -> Vec<f64> {
    let n = f.len();
    let h = f.step();
    let mut w = vec![0.0; n];
    match f.origin_index() {
        Some(mid) => {
            accumulate_segment_weights(&mut w[..=mid], h, Tail::Start);
            accumulate_segment_weights(&mut w[mid..], h, Tail::End);
        }
        None => accumulate_segment_weights(&mut w, h, Tail::End),
    }
    w
}

/// Composite Simpson approximation of the integral over `[lo, hi]`.
pub fn integrate(f: &GridFunction) -> f64 {
    quadrature_weights(f)
        .iter()
        .zip(f.values())
        .map(|(w, v)| w * v)
        .sum()
}

/// Running integral `F(x) = ∫_lo^x f`, sampled on the same grid.
///
/// Uses the same segments and 3/8 placement as [`integrate`], so the last
/// value agrees with the full integral up to round-off.
pub fn cumulative(f: &GridFunction) -> GridFunction {
    let n = f.len();
    let h = f.step();
    let v = f.values();
    let mut out = vec![0.0; n];
    match f.origin_index() {
        Some(mid) => {
            cumulate_segment(&v[..=mid], &mut out[..=mid], h, Tail::Start);
            let base = out[mid];
            cumulate_segment(&v[mid..], &mut out[mid..], h, Tail::End);
            for o in &mut out[mid..] {
                *o += base;
            }
        }
        None => cumulate_segment(v, &mut out, h, Tail::End),
    }
    GridFunction {
        lo: f.lo,
        hi: f.hi,
        values: out,
    }
}

/// Running integral over one segment starting from zero.
fn cumulate_segment(v: &[f64], out: &mut [f64], h: f64, tail: Tail) {
    out[0] = 0.0;
    let intervals = v.len() - 1;
    match intervals {
        0 => {}
        1 => out[1] = 0.5 * h * (v[0] + v[1]),
        m if m % 2 == 0 => cumulate_simpson(v, out, h, 0, m),
        m => match tail {
            Tail::Start => {
                cumulate_eighths(v, out, h, 0);
                cumulate_simpson(v, out, h, 3, m);
            }
            Tail::End => {
                cumulate_simpson(v, out, h, 0, m - 3);
                cumulate_eighths(v, out, h, m - 3);
            }
        },
    }
}

/// Simpson steps from `s` to `e` (an even distance), with the half-panel rule
/// at the odd nodes in between.
fn cumulate_simpson(v: &[f64], out: &mut [f64], h: f64, s: usize, e: usize) {
    for p in (s..e).step_by(2) {
        out[p + 1] = out[p] + h / 12.0 * (5.0 * v[p] + 8.0 * v[p + 1] - v[p + 2]);
        out[p + 2] = out[p] + h / 3.0 * (v[p] + 4.0 * v[p + 1] + v[p + 2]);
    }
}

/// Cubic-exact running integral over the three intervals after `s`.
fn cumulate_eighths(v: &[f64], out: &mut [f64], h: f64, s: usize) {
    let (a, b, c, d) = (v[s], v[s + 1], v[s + 2], v[s + 3]);
    out[s + 1] = out[s] + h / 24.0 * (9.0 * a + 19.0 * b - 5.0 * c + d);
    out[s + 2] = out[s] + h / 3.0 * (a + 4.0 * b + c);
    out[s + 3] = out[s] + 3.0 * h / 8.0 * (a + 3.0 * b + 3.0 * c + d);
}

/// The correlation `(g * ğ)(x) = ∫ g(y) g(y - x) dy` with `ğ(x) = g(-x)`.
///
/// For `g` on `[a, b]` with `n` nodes the result lives on `[a - b, b - a]`
/// with `2n - 1` nodes at the same spacing, so every overlap endpoint is a
/// node of the input grid and no interpolation is needed. The output is even
/// by construction and its value at the origin is `∫ g²`.
pub fn self_correlate(g: &GridFunction) -> GridFunction {
    let n = g.len();
    let h = g.step();
    let width = g.hi - g.lo;
    let v = g.values();
    let mut out = vec![0.0; 2 * n - 1];
    let mut products = Vec::with_capacity(n);
    for shift in 0..n {
        products.clear();
        products.extend((shift..n).map(|j| v[j] * v[j - shift]));
        let value = segment_integral(&products, h);
        out[n - 1 + shift] = value;
        out[n - 1 - shift] = value;
    }
    GridFunction {
        lo: -width,
        hi: width,
        values: out,
    }
}

/// Value at the origin of a function whose Fourier transform is `fhat`.
///
/// When the transform is supported in `[lo, hi]`, Fourier inversion at zero
/// reduces to the plain integral of the transform.
pub fn value_at_zero_from_transform(fhat: &GridFunction) -> f64 {
    integrate(fhat)
}
