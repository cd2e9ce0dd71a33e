//! Test-only reference quadrature, independent of the library's Simpson path.

#![allow(dead_code)]

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite 12-point Gauss-Legendre over `panels` equal pieces of `[lo, hi]`.
pub fn gl_integrate(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let rule = gauss_legendre(12);
    let width = (hi - lo) / panels as f64;
    (0..panels)
        .map(|p| {
            let a = lo + p as f64 * width;
            let mid = a + 0.5 * width;
            rule.iter()
                .map(|(x, w)| w * f(mid + 0.5 * width * x))
                .sum::<f64>()
                * 0.5
                * width
        })
        .sum()
}

/// `sup |g(x) + ∫ m(x - y) g(y) dy - 1|` over `points` equispaced x, with the
/// inner integral split at the kink `y = x`.
pub fn fredholm_residual(m: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, points: usize) -> f64 {
    (0..points)
        .map(|i| {
            let x = -0.5 + i as f64 / (points - 1) as f64;
            let integrand = |y: f64| m(x - y) * g(y);
            let left = gl_integrate(integrand, -0.5, x, 16);
            let right = gl_integrate(integrand, x, 0.5, 16);
            (g(x) + left + right - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

use twolevel::SymmetryGroup;

/// Known closed-form optimal functions for `ψ = (sin πy/πy)²`.
pub fn reference_solution(group: SymmetryGroup) -> fn(f64) -> f64 {
    fn so_even(x: f64) -> f64 {
        let r3 = 3f64.sqrt();
        let u = 2.0 / r3;
        (216.0 * (4.0 * x / r3).cos() + 36.0 * r3 * u.sin())
            / (162.0 * u.cos() - 5.0 * r3 * u.sin())
    }
    fn so_odd(x: f64) -> f64 {
        let r3 = 3f64.sqrt();
        let u = 2.0 / r3;
        (8.0 * (4.0 * x / r3).cos() + 12.0 * r3 * u.sin()) / (11.0 * r3 * u.sin() + 2.0 * u.cos())
    }
    fn o(x: f64) -> f64 {
        let r3 = 3f64.sqrt();
        let u = 2.0 / r3;
        (36.0 * (4.0 * x / r3).cos() + 18.0 * r3 * u.sin()) / (18.0 * u.cos() + 13.0 * r3 * u.sin())
    }
    fn unitary(x: f64) -> f64 {
        (6.0 * (2.0 * x).cos() + 6.0 * 1f64.sin()) / (3.0 * 1f64.cos() + 4.0 * 1f64.sin())
    }
    fn sp(x: f64) -> f64 {
        (8.0 * (4.0 * x).cos() + 12.0 * 2f64.sin()) / (2.0 * 2f64.cos() + 3.0 * 2f64.sin())
    }
    match group {
        SymmetryGroup::SOEven => so_even,
        SymmetryGroup::SOOdd => so_odd,
        SymmetryGroup::O => o,
        SymmetryGroup::U => unitary,
        SymmetryGroup::Sp => sp,
    }
}

/// Known closed-form optimal values for `ψ = (sin πy/πy)²`.
pub fn reference_optimum(group: SymmetryGroup) -> f64 {
    let cot = |x: f64| 1.0 / x.tan();
    let r3 = 3f64.sqrt();
    let c = cot(2.0 / r3);
    match group {
        SymmetryGroup::SOEven => (54.0 * r3 * c - 5.0) / 96.0,
        SymmetryGroup::SOOdd => (33.0 + 2.0 * r3 * c) / 32.0,
        SymmetryGroup::O => (13.0 + 6.0 * r3 * c) / 24.0,
        SymmetryGroup::U => (4.0 + 3.0 * cot(1.0)) / 12.0,
        SymmetryGroup::Sp => (3.0 + 2.0 * cot(2.0)) / 32.0,
    }
}

/// Central differences with fourth-order stencils.
pub fn d1(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

pub fn d2(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}

pub fn d3(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 3.0 * h) + 8.0 * f(x + 2.0 * h) - 13.0 * f(x + h) + 13.0 * f(x - h)
        - 8.0 * f(x - 2.0 * h)
        + f(x - 3.0 * h))
        / (8.0 * h * h * h)
}

/// Steps for the stencils above: large enough that round-off in `g ≈ 10`
/// stays below the residual tolerances, small enough that truncation does too.
pub const STEP_D1: f64 = 1e-3;
pub const STEP_D2: f64 = 1e-3;
pub const STEP_D3: f64 = 5e-3;

/// `⟨(I + K) f, f⟩ / ⟨1, f⟩²` by Gauss-Legendre, with the inner integral
/// split along the diagonal where the kernel has its kink.
pub fn gl_quotient(m: impl Fn(f64) -> f64, f: impl Fn(f64) -> f64) -> f64 {
    let inner = |x: f64| {
        let integrand = |y: f64| m(x - y) * f(y);
        gl_integrate(integrand, -0.5, x, 4) + gl_integrate(integrand, x, 0.5, 4)
    };
    let energy = gl_integrate(|x| f(x) * (f(x) + inner(x)), -0.5, 0.5, 8);
    let mass = gl_integrate(&f, -0.5, 0.5, 8);
    energy / (mass * mass)
}

/// Even trigonometric polynomial `Σ a_k cos(2πk x)`.
pub fn even_trig(coeffs: Vec<f64>) -> impl Fn(f64) -> f64 {
    move |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a * (2.0 * std::f64::consts::PI * k as f64 * x).cos())
            .sum()
    }
}
