//! Per-mode 2x2 linear systems tying the snapshot coefficients at the two
//! measurement times to the source coefficient f_{k,n} and the fractional
//! initial trace c_{k,n} = I^{1-gamma} u_{k,n}(0).
//!
//! The coefficient matrix is
//!
//! ```text
//! A(lambda, s, t) = [ t^a E_{a,mu}(-l t^a)   t^{g-1} E_{a,g}(-l t^a) ]
//!                   [ s^a E_{a,mu}(-l s^a)   s^{g-1} E_{a,g}(-l s^a) ]
//! ```
//!
//! with s = Tm < t = T and mu = 1 + alpha in solver use. Its determinant is
//! strictly positive for 0 < alpha <= gamma <= 1, decaying like 1/lambda^2
//! (gamma > alpha) so the 2x2 solve is done by Cramer's rule with
//! fma-compensated products to survive the cancellation at large lambda.

use crate::error::{Error, Result};
use crate::mittag_leffler::{ml_eval, MlQuery, MlResult};

/// ML evaluation tolerance used inside matrix assembly and the forward
/// evolution; fixed so determinant signs and snapshot reproduction do not
/// depend on caller tolerances.
pub const ML_TOL: f64 = 1e-13;

/// The pair (alpha, gamma) defining the two-parameter fractional derivative.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct FractionalOrders {
    alpha: f64,
    gamma: f64,
}

impl FractionalOrders {
    /// Requires 0 < alpha <= gamma <= 1.
    pub fn new(alpha: f64, gamma: f64) -> Result<FractionalOrders> {
        if !(alpha > 0.0 && alpha <= gamma && gamma <= 1.0) {
            return Err(Error::Domain(format!(
                "need 0 < alpha <= gamma <= 1, got alpha = {alpha}, gamma = {gamma}"
            )));
        }
        Ok(FractionalOrders { alpha, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// The measurement times 0 < Tm < T.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TimePair {
    tm: f64,
    t_final: f64,
}

impl TimePair {
    pub fn new(tm: f64, t_final: f64) -> Result<TimePair> {
        if !(tm > 0.0 && tm < t_final) {
            return Err(Error::Domain(format!(
                "need 0 < Tm < T, got Tm = {tm}, T = {t_final}"
            )));
        }
        Ok(TimePair { tm, t_final })
    }

    pub fn tm(&self) -> f64 {
        self.tm
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }
}

/// Assembled 2x2 mode matrix. `lambda` is the eigenvalue entering the ML
/// arguments (lambda_n^2 in solver use; the coupling prefactor uses the
/// unsquared lambda_n, which is deliberately *not* stored here).
#[derive(Copy, Clone, Debug)]
pub struct ModeMatrix {
    pub entries: [[f64; 2]; 2],
    pub lambda: f64,
    pub det: f64,
}

/// Source coefficient and fractional-integral initial coefficient of one mode.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct ModeCoefficients {
    pub f: f64,
    pub c: f64,
}

/// a*d - b*c with fma compensation (Kahan's determinant).
pub fn det2x2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let w = b * c;
    let e = b.mul_add(c, -w);
    let f = a.mul_add(d, -w);
    f - e
}

fn ml(alpha: f64, beta: f64, x: f64) -> Result<MlResult> {
    ml_eval(&MlQuery::new(alpha, beta, 1, x), ML_TOL)
}

/// Assemble A_{alpha,gamma,mu}(lambda, Tm, T).
pub fn assemble(
    orders: FractionalOrders,
    mu: f64,
    lambda: f64,
    times: TimePair,
) -> Result<ModeMatrix> {
    if mu < 2.0 * orders.alpha {
        return Err(Error::Domain(format!(
            "mu = {mu} violates mu >= 2 alpha = {}",
            2.0 * orders.alpha
        )));
    }
    if lambda < 0.0 {
        return Err(Error::Domain("lambda must be >= 0".into()));
    }
    let (a, g) = (orders.alpha, orders.gamma);
    let mut entries = [[0.0f64; 2]; 2];
    for (row, &t) in [times.t_final, times.tm].iter().enumerate() {
        let ta = t.powf(a);
        let x = -lambda * ta;
        entries[row][0] = ta * ml(a, mu, x)?.value;
        entries[row][1] = t.powf(g - 1.0) * ml(a, g, x)?.value;
    }
    let det = det2x2(entries[0][0], entries[0][1], entries[1][0], entries[1][1]);
    Ok(ModeMatrix {
        entries,
        lambda,
        det,
    })
}

/// lambda^2 det(A) for lambda > 0 (det itself at lambda = 0). Positivity is
/// the contract; a non-positive value signals an evaluation bug upstream.
pub fn det_scaled(m: &ModeMatrix) -> Result<f64> {
    if m.det <= 0.0 || m.det < 1e-300 {
        return Err(Error::SingularSystem { det: m.det });
    }
    if m.lambda > 0.0 {
        Ok(m.lambda * m.lambda * m.det)
    } else {
        Ok(m.det)
    }
}

/// Solve A (f, c)^T = (h, z)^T by compensated Cramer's rule.
pub fn solve_mode1(m: &ModeMatrix, h_coef: f64, z_coef: f64) -> Result<ModeCoefficients> {
    if m.det <= 0.0 || m.det < 1e-300 {
        return Err(Error::SingularSystem { det: m.det });
    }
    let f = det2x2(h_coef, m.entries[0][1], z_coef, m.entries[1][1]) / m.det;
    let c = det2x2(m.entries[0][0], h_coef, m.entries[1][0], z_coef) / m.det;
    Ok(ModeCoefficients { f, c })
}

/// Coupling term transferring the paired cosine-family mode into the
/// sine-family dynamics:
///
/// d_n(t) = 2 l_n [ f1 t^{2a} E^2_{a,2a+1}(-l_n^2 t^a)
///                 + c1 t^{a+g-1} E^2_{a,a+g}(-l_n^2 t^a) ].
///
/// `lambda_n` is the unsquared frequency 2 pi n.
pub fn coupling_dn(
    orders: FractionalOrders,
    lambda_n: f64,
    mode1: ModeCoefficients,
    t: f64,
) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::Domain("coupling requires t > 0".into()));
    }
    if lambda_n <= 0.0 {
        return Err(Error::Domain("coupling requires lambda_n > 0".into()));
    }
    let (a, g) = (orders.alpha, orders.gamma);
    let ta = t.powf(a);
    let x = -lambda_n * lambda_n * ta;
    let e_f = ml_eval(&MlQuery::new(a, 2.0 * a + 1.0, 2, x), ML_TOL)?.value;
    let e_c = ml_eval(&MlQuery::new(a, a + g, 2, x), ML_TOL)?.value;
    Ok(2.0 * lambda_n * (mode1.f * ta * ta * e_f + mode1.c * t.powf(a + g - 1.0) * e_c))
}

/// Solve for the sine-family coefficients with the coupling subtracted from
/// the data: A (f2, c2)^T = (h2 - d_n(T), z2 - d_n(Tm))^T.
pub fn solve_mode2(
    m: &ModeMatrix,
    h2: f64,
    z2: f64,
    d_t: f64,
    d_tm: f64,
) -> Result<ModeCoefficients> {
    solve_mode1(m, h2 - d_t, z2 - d_tm)
}
