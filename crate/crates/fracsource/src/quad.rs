//! Adaptive Gauss-Legendre quadrature on [a, b].
//!
//! 15-point panels, deterministic midpoint bisection, refinement driven by
//! the difference between a panel estimate and the sum of its two halves.
//! Nodes and weights are computed once by Newton iteration on the Legendre
//! recurrence and cached.

use crate::error::{Error, Result};
use std::sync::OnceLock;

const N_NODES: usize = 15;

/// Refinement depth cap; hitting it raises QuadratureFailure.
pub const MAX_DEPTH: usize = 20;

fn gl_nodes() -> &'static [(f64, f64); N_NODES] {
    static NODES: OnceLock<[(f64, f64); N_NODES]> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = N_NODES;
        let mut out = [(0.0f64, 0.0f64); N_NODES];
        for i in 0..n {
            // Chebyshev-like initial guess, then Newton on P_n(x) = 0.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            out[n - 1 - i] = (x, w);
        }
        out
    })
}

/// P_n(x) and its derivative via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for &(x, w) in gl_nodes().iter() {
        s += w * f(c + h * x);
    }
    s * h
}

struct Adaptive<'f, F> {
    f: &'f F,
    sum: f64,
    err: f64,
}

impl<F: Fn(f64) -> f64> Adaptive<'_, F> {
    fn descend(&mut self, a: f64, b: f64, whole: f64, tol: f64, depth: usize) -> Result<()> {
        let mid = 0.5 * (a + b);
        let left = panel(self.f, a, mid);
        let right = panel(self.f, mid, b);
        let diff = (left + right - whole).abs();
        if diff <= tol || depth >= MAX_DEPTH {
            if depth >= MAX_DEPTH && diff > tol {
                return Err(Error::QuadratureFailure { depth });
            }
            self.sum += left + right;
            self.err += diff;
            return Ok(());
        }
        self.descend(a, mid, left, 0.5 * tol, depth + 1)?;
        self.descend(mid, b, right, 0.5 * tol, depth + 1)
    }
}

/// Integrate f over [a, b] to absolute tolerance `tol`, starting from
/// `panels` equal panels (callers scale the count with the oscillation
/// frequency of the integrand). Returns (value, error_estimate).
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    panels: usize,
) -> Result<(f64, f64)> {
    let panels = panels.max(1);
    let mut state = Adaptive {
        f,
        sum: 0.0,
        err: 0.0,
    };
    let width = (b - a) / panels as f64;
    let panel_tol = tol / panels as f64;
    for i in 0..panels {
        let pa = a + i as f64 * width;
        let pb = if i + 1 == panels {
            b
        } else {
            a + (i + 1) as f64 * width
        };
        let whole = panel(state.f, pa, pb);
        state.descend(pa, pb, whole, panel_tol, 0)?;
    }
    Ok((state.sum, state.err))
}
