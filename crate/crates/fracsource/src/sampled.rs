//! Carriers for the measurement data z and h: closed-form evaluators,
//! polynomials (which unlock exact inner products in the basis module), and
//! tabulated samples interpolated by a not-a-knot cubic spline.

use crate::error::{Error, Result};
use std::sync::Arc;

/// Dense polynomial in ascending powers of x.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Polynomial {
        let mut p = Polynomial { coeffs };
        while p.coeffs.len() > 1 && p.coeffs.last() == Some(&0.0) {
            p.coeffs.pop();
        }
        if p.coeffs.is_empty() {
            p.coeffs.push(0.0);
        }
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::new(vec![0.0]);
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(m, &c)| m as f64 * c)
                .collect(),
        )
    }
}

/// Not-a-knot cubic spline on a uniform grid over [0, 1].
#[derive(Clone, Debug)]
pub struct CubicSpline {
    values: Vec<f64>,
    /// Second derivatives at the knots.
    moments: Vec<f64>,
    h: f64,
}

impl CubicSpline {
    pub fn from_uniform(values: &[f64]) -> Result<CubicSpline> {
        let n = values.len();
        if n < 4 {
            return Err(Error::Format(
                "spline interpolation needs at least 4 samples".into(),
            ));
        }
        let h = 1.0 / (n - 1) as f64;
        let r: Vec<f64> = (1..n - 1)
            .map(|i| 6.0 * (values[i - 1] - 2.0 * values[i] + values[i + 1]) / (h * h))
            .collect();
        let mut m = vec![0.0f64; n];
        // Not-a-knot decouples the first and last interior equations:
        // substituting M_0 = 2 M_1 - M_2 into M_0 + 4 M_1 + M_2 = r_1 leaves
        // 6 M_1 = r_1, and symmetrically at the other end.
        m[1] = r[0] / 6.0;
        m[n - 2] = r[n - 3] / 6.0;
        let len = n.saturating_sub(4);
        if len > 0 {
            // Thomas algorithm for M_2..M_{n-3} with the edge moments known.
            let mut diag = vec![4.0f64; len];
            let mut rhs: Vec<f64> = (0..len).map(|j| r[j + 1]).collect();
            rhs[0] -= m[1];
            rhs[len - 1] -= m[n - 2];
            for j in 1..len {
                let w = 1.0 / diag[j - 1];
                diag[j] -= w;
                rhs[j] -= w * rhs[j - 1];
            }
            m[2 + len - 1] = rhs[len - 1] / diag[len - 1];
            for j in (0..len - 1).rev() {
                m[2 + j] = (rhs[j] - m[2 + j + 1]) / diag[j];
            }
        }
        m[0] = 2.0 * m[1] - m[2];
        m[n - 1] = 2.0 * m[n - 2] - m[n - 3];
        Ok(CubicSpline {
            values: values.to_vec(),
            moments: m,
            h,
        })
    }

    fn segment(&self, x: f64) -> (usize, f64, f64) {
        let n = self.values.len();
        let i = ((x / self.h).floor() as isize).clamp(0, n as isize - 2) as usize;
        let x_i = i as f64 * self.h;
        (i, x - x_i, (i + 1) as f64 * self.h - x)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (i, dl, dr) = self.segment(x);
        let h = self.h;
        let (mi, mj) = (self.moments[i], self.moments[i + 1]);
        let (yi, yj) = (self.values[i], self.values[i + 1]);
        mi * dr * dr * dr / (6.0 * h)
            + mj * dl * dl * dl / (6.0 * h)
            + (yi / h - mi * h / 6.0) * dr
            + (yj / h - mj * h / 6.0) * dl
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let (i, dl, dr) = self.segment(x);
        let h = self.h;
        let (mi, mj) = (self.moments[i], self.moments[i + 1]);
        let (yi, yj) = (self.values[i], self.values[i + 1]);
        -mi * dr * dr / (2.0 * h) + mj * dl * dl / (2.0 * h) - (yi / h - mi * h / 6.0)
            + (yj / h - mj * h / 6.0)
    }

    pub fn deriv2(&self, x: f64) -> f64 {
        let (i, dl, dr) = self.segment(x);
        (self.moments[i] * dr + self.moments[i + 1] * dl) / self.h
    }

    fn deriv3(&self, x: f64) -> f64 {
        let (i, _, _) = self.segment(x);
        (self.moments[i + 1] - self.moments[i]) / self.h
    }
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

enum Repr {
    Closure {
        f: Evaluator,
        /// Supplied derivative evaluators, orders 1..=4.
        derivs: Vec<Evaluator>,
    },
    Poly(Polynomial),
    Spline(CubicSpline),
}

/// A function on [0, 1], with optional derivative information.
#[derive(Clone)]
pub struct SampledFunction {
    repr: Arc<Repr>,
}

impl SampledFunction {
    pub fn from_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> SampledFunction {
        SampledFunction {
            repr: Arc::new(Repr::Closure {
                f: Arc::new(f),
                derivs: Vec::new(),
            }),
        }
    }

    pub fn from_fn_with_derivatives<F>(f: F, derivs: Vec<Evaluator>) -> SampledFunction
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SampledFunction {
            repr: Arc::new(Repr::Closure {
                f: Arc::new(f),
                derivs,
            }),
        }
    }

    /// Polynomial data in ascending coefficients; unlocks exact inner
    /// products in the analysis stage.
    pub fn polynomial(coeffs: Vec<f64>) -> SampledFunction {
        SampledFunction {
            repr: Arc::new(Repr::Poly(Polynomial::new(coeffs))),
        }
    }

    /// Tabulated samples on a uniform grid over [0, 1].
    pub fn from_uniform_samples(values: &[f64]) -> Result<SampledFunction> {
        Ok(SampledFunction {
            repr: Arc::new(Repr::Spline(CubicSpline::from_uniform(values)?)),
        })
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match self.repr.as_ref() {
            Repr::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.repr.as_ref() {
            Repr::Closure { f, .. } => f(x),
            Repr::Poly(p) => p.eval(x),
            Repr::Spline(s) => s.eval(x),
        }
    }

    /// Derivative of the given order (1..=4) at x in [0, 1]. Polynomials are
    /// differentiated exactly, splines analytically up to order 3, closures
    /// use supplied evaluators or a 5-point stencil (h = 1e-5, one-sided at
    /// the boundary).
    pub fn derivative(&self, order: usize, x: f64) -> f64 {
        debug_assert!((1..=4).contains(&order));
        match self.repr.as_ref() {
            Repr::Poly(p) => {
                let mut d = p.clone();
                for _ in 0..order {
                    d = d.derivative();
                }
                d.eval(x)
            }
            Repr::Spline(s) => match order {
                1 => s.deriv(x),
                2 => s.deriv2(x),
                3 => s.deriv3(x),
                // piecewise-cubic: fourth derivative vanishes
                _ => 0.0,
            },
            Repr::Closure { f, derivs } => {
                if let Some(d) = derivs.get(order - 1) {
                    return d(x);
                }
                numeric_derivative(|t| f(t), order, x)
            }
        }
    }
}

/// 5-point finite-difference derivative with one-sided stencils near the
/// boundary of [0, 1].
pub fn numeric_derivative<F: Fn(f64) -> f64>(f: F, order: usize, x: f64) -> f64 {
    let h = 1e-5;
    if x >= 2.0 * h && x <= 1.0 - 2.0 * h {
        let g = |i: i32| f(x + i as f64 * h);
        match order {
            1 => (g(-2) - 8.0 * g(-1) + 8.0 * g(1) - g(2)) / (12.0 * h),
            2 => (-g(-2) + 16.0 * g(-1) - 30.0 * g(0) + 16.0 * g(1) - g(2)) / (12.0 * h * h),
            3 => (g(-2) - 2.0 * g(-1) + 2.0 * g(1) - g(2)) / (2.0 * h * h * h),
            _ => (g(-2) - 4.0 * g(-1) + 6.0 * g(0) - 4.0 * g(1) + g(2)) / (h * h * h * h),
        }
    } else {
        let s = if x < 0.5 { 1.0 } else { -1.0 };
        let g = |i: i32| f(x + s * i as f64 * h);
        let d = match order {
            1 => (-25.0 * g(0) + 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4)) / (12.0 * h),
            2 => {
                (35.0 * g(0) - 104.0 * g(1) + 114.0 * g(2) - 56.0 * g(3) + 11.0 * g(4))
                    / (12.0 * h * h)
            }
            3 => (-5.0 * g(0) + 18.0 * g(1) - 24.0 * g(2) + 14.0 * g(3) - 3.0 * g(4))
                / (2.0 * h * h * h),
            _ => (g(0) - 4.0 * g(1) + 6.0 * g(2) - 4.0 * g(3) + g(4)) / (h * h * h * h),
        };
        match order {
            1 | 3 => s * d,
            _ => d,
        }
    }
}
