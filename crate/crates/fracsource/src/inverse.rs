//! End-to-end source reconstruction: extract Psi-coefficients of the two
//! snapshots, solve the 2x2 mode systems, and assemble the source expansion
//! f(x) together with the full solution field u(x, t).
//!
//! The construction is exact at the coefficient level: the linear systems
//! enforce u(., Tm) = z and u(., T) = h mode by mode, so the synthesized
//! snapshots reproduce the Phi-truncations of the data up to evaluation
//! arithmetic.

use crate::basis::{analyze_with_tol, ModeIndex, SeriesField, QUAD_TOL};
use crate::error::{Error, Result};
use crate::forward::SolutionField;
use crate::modes::{
    assemble, coupling_dn, solve_mode1, solve_mode2, FractionalOrders, ModeCoefficients, TimePair,
};
use crate::sampled::SampledFunction;

/// The two measured snapshots u(., Tm) = z and u(., T) = h.
#[derive(Clone)]
pub struct MeasurementPair {
    pub z: SampledFunction,
    pub h: SampledFunction,
    pub times: TimePair,
}

impl MeasurementPair {
    pub fn new(z: SampledFunction, h: SampledFunction, times: TimePair) -> MeasurementPair {
        MeasurementPair { z, h, times }
    }

    /// The linear catalog pair z = 2(1-x), h = 2c(1-x).
    pub fn linear_pair(c: f64, times: TimePair) -> MeasurementPair {
        MeasurementPair {
            z: SampledFunction::polynomial(vec![2.0, -2.0]),
            h: SampledFunction::polynomial(vec![2.0 * c, -2.0 * c]),
            times,
        }
    }

    /// The cubic/quartic catalog pair z = (1/10)[1 - (2x-1)^3],
    /// h = -3x^2(x^2+2) + 8x^3 + 1.
    pub fn polynomial_pair(times: TimePair) -> MeasurementPair {
        MeasurementPair {
            z: SampledFunction::polynomial(vec![0.2, -0.6, 1.2, -0.8]),
            h: SampledFunction::polynomial(vec![1.0, 0.0, -6.0, 8.0, -3.0]),
            times,
        }
    }

    /// Tabulated samples of z and h on a shared uniform x-grid.
    pub fn from_tables(z: &[f64], h: &[f64], times: TimePair) -> Result<MeasurementPair> {
        if z.len() != h.len() {
            return Err(Error::Format(
                "z and h tables must share the grid".into(),
            ));
        }
        Ok(MeasurementPair {
            z: SampledFunction::from_uniform_samples(z)?,
            h: SampledFunction::from_uniform_samples(h)?,
            times,
        })
    }
}

/// Residuals of the regularity hypotheses on the data, plus the fitted decay
/// exponent of the Psi-coefficients. Violations warn; they never abort the
/// reconstruction.
#[derive(Clone, Debug)]
pub struct HypothesisReport {
    /// |z'(0) - z'(1)|, |z(1)|, |z''(1)|
    pub z_residuals: [f64; 3],
    /// |h'(0) - h'(1)|, |h(1)|, |h''(1)|
    pub h_residuals: [f64; 3],
    /// Least-squares slope of log |g_{k,n}| against log l_n over both
    /// snapshots (about -4 for data meeting the hypotheses).
    pub coef_decay_exponent: f64,
}

impl HypothesisReport {
    pub fn worst_residual(&self) -> f64 {
        self.z_residuals
            .iter()
            .chain(self.h_residuals.iter())
            .fold(0.0f64, |m, &r| m.max(r))
    }
}

/// Reconstruction output: the source expansion, the solution field, and the
/// hypothesis diagnostics.
pub struct ReconstructionResult {
    pub source: SeriesField,
    pub solution: SolutionField,
    pub diagnostics: HypothesisReport,
}

fn boundary_residuals(g: &SampledFunction) -> [f64; 3] {
    let d0 = g.derivative(1, 0.0);
    let d1 = g.derivative(1, 1.0);
    [(d0 - d1).abs(), g.eval(1.0).abs(), g.derivative(2, 1.0).abs()]
}

/// Check the data hypotheses (periodic first derivative; value and second
/// derivative vanishing at x = 1) and fit the coefficient decay rate.
pub fn check_hypotheses(m: &MeasurementPair) -> Result<HypothesisReport> {
    let fit_n = 8usize;
    let fz = analyze_with_tol(&m.z, fit_n, QUAD_TOL)?;
    let fh = analyze_with_tol(&m.h, fit_n, QUAD_TOL)?;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for field in [&fz, &fh] {
        for (idx, c) in field.iter() {
            if idx.n() >= 1 && c.abs() > 1e-14 {
                pts.push((idx.lambda().ln(), c.abs().ln()));
            }
        }
    }
    let coef_decay_exponent = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    } else {
        f64::NAN
    };
    Ok(HypothesisReport {
        z_residuals: boundary_residuals(&m.z),
        h_residuals: boundary_residuals(&m.h),
        coef_decay_exponent,
    })
}

/// Run the full reconstruction at truncation N.
pub fn reconstruct(
    m: &MeasurementPair,
    orders: FractionalOrders,
    n: usize,
) -> Result<ReconstructionResult> {
    reconstruct_with_tol(m, orders, n, QUAD_TOL)
}

pub fn reconstruct_with_tol(
    m: &MeasurementPair,
    orders: FractionalOrders,
    n: usize,
    quad_tol: f64,
) -> Result<ReconstructionResult> {
    if n < 1 {
        return Err(Error::Domain("truncation N must be >= 1".into()));
    }
    let diagnostics = check_hypotheses(m)?;
    let z_field = analyze_with_tol(&m.z, n, quad_tol)?;
    let h_field = analyze_with_tol(&m.h, n, quad_tol)?;

    let mu = 1.0 + orders.alpha();

    // Principal mode: lambda_0 = 0.
    let m0 = assemble(orders, mu, 0.0, m.times)?;
    let head = solve_mode1(&m0, h_field.c10, z_field.c10)?;

    let mut source = SeriesField::zeros(n);
    source.c10 = head.f;
    let mut pairs: Vec<(ModeCoefficients, ModeCoefficients)> = Vec::with_capacity(n);

    for i in 1..=n {
        let idx = ModeIndex::new(1, i as u32)?;
        let lambda_n = idx.lambda();
        let mat = assemble(orders, mu, lambda_n * lambda_n, m.times)?;
        let mode1 = solve_mode1(&mat, h_field.c1[i - 1], z_field.c1[i - 1])?;
        let d_t = coupling_dn(orders, lambda_n, mode1, m.times.t_final())?;
        let d_tm = coupling_dn(orders, lambda_n, mode1, m.times.tm())?;
        let mode2 = solve_mode2(&mat, h_field.c2[i - 1], z_field.c2[i - 1], d_t, d_tm)?;
        source.c1[i - 1] = mode1.f;
        source.c2[i - 1] = mode2.f;
        pairs.push((mode1, mode2));
    }

    Ok(ReconstructionResult {
        source,
        solution: SolutionField::new(orders, m.times, head, pairs),
        diagnostics,
    })
}

/// Self-consistency oracle: forward-evolve planted coefficients, take the
/// synthesized snapshots as measurements, reconstruct, and report the
/// largest coefficient recovery error over both families.
pub fn round_trip(
    orders: FractionalOrders,
    times: TimePair,
    n: usize,
    planted_f: &SeriesField,
    planted_c: &SeriesField,
) -> Result<f64> {
    if planted_f.truncation() != n || planted_c.truncation() != n {
        return Err(Error::Domain(
            "planted coefficient fields must match the truncation".into(),
        ));
    }
    let head = ModeCoefficients {
        f: planted_f.c10,
        c: planted_c.c10,
    };
    let pairs: Vec<(ModeCoefficients, ModeCoefficients)> = (0..n)
        .map(|i| {
            (
                ModeCoefficients {
                    f: planted_f.c1[i],
                    c: planted_c.c1[i],
                },
                ModeCoefficients {
                    f: planted_f.c2[i],
                    c: planted_c.c2[i],
                },
            )
        })
        .collect();
    let truth = SolutionField::new(orders, times, head, pairs);

    let z_snap = truth.snapshot(times.tm())?;
    let h_snap = truth.snapshot(times.t_final())?;
    let z = SampledFunction::from_fn(move |x| crate::basis::synthesize(&z_snap, x));
    let h = SampledFunction::from_fn(move |x| crate::basis::synthesize(&h_snap, x));

    let rec = reconstruct(&MeasurementPair::new(z, h, times), orders, n)?;

    let mut worst = (rec.solution.head().f - planted_f.c10)
        .abs()
        .max((rec.solution.head().c - planted_c.c10).abs());
    for i in 0..n {
        let (m1, m2) = rec.solution.pairs()[i];
        worst = worst
            .max((m1.f - planted_f.c1[i]).abs())
            .max((m1.c - planted_c.c1[i]).abs())
            .max((m2.f - planted_f.c2[i]).abs())
            .max((m2.c - planted_c.c2[i]).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::synthesize;
    use crate::gamma::gamma;

    fn orders(a: f64, g: f64) -> FractionalOrders {
        FractionalOrders::new(a, g).unwrap()
    }

    fn times(tm: f64, t: f64) -> TimePair {
        TimePair::new(tm, t).unwrap()
    }

    /// Closed-form principal coefficients for the linear catalog pair.
    fn linear_pair_expected(c: f64, a: f64, g: f64, tm: f64, t: f64) -> (f64, f64) {
        let den = tm.powf(g - 1.0) * t.powf(a) - t.powf(g - 1.0) * tm.powf(a);
        let f10 = gamma(a + 1.0) * (c * tm.powf(g - 1.0) - t.powf(g - 1.0)) / den;
        let c10 = gamma(g) * (t.powf(a) - c * tm.powf(a)) / den;
        (f10, c10)
    }

    #[test]
    fn linear_pair_closed_form() {
        let (a, g, tm, t) = (0.5, 0.5, 0.3, 1.0);
        let c = 2.0;
        let rec = reconstruct(
            &MeasurementPair::linear_pair(c, times(tm, t)),
            orders(a, g),
            4,
        )
        .unwrap();
        let (f10, c10) = linear_pair_expected(c, a, g, tm, t);
        assert!(
            (rec.source.c10 - f10).abs() < 1e-11,
            "f10 {} want {f10}",
            rec.source.c10
        );
        assert!((rec.solution.head().c - c10).abs() < 1e-11);
        // all non-principal coefficients vanish
        for i in 0..4 {
            assert!(rec.source.c1[i].abs() < 1e-13);
            assert!(rec.source.c2[i].abs() < 1e-13);
            assert!(rec.solution.pairs()[i].0.c.abs() < 1e-13);
            assert!(rec.solution.pairs()[i].1.c.abs() < 1e-13);
        }
    }

    #[test]
    fn source_free_case() {
        // c = (Tm/T)^{1-gamma} kills the source.
        let (a, g, tm, t) = (0.6f64, 0.9f64, 0.5f64, 2.0f64);
        let c = (tm / t).powf(1.0 - g);
        let rec = reconstruct(
            &MeasurementPair::linear_pair(c, times(tm, t)),
            orders(a, g),
            3,
        )
        .unwrap();
        let mut sup: f64 = 0.0;
        for i in 0..=200 {
            let x = i as f64 / 200.0;
            sup = sup.max(synthesize(&rec.source, x).abs());
        }
        assert!(sup <= 1e-10, "||f||_inf = {sup:e}");
    }

    #[test]
    fn homogeneous_initial_case() {
        // c = (T/Tm)^alpha gives a vanishing fractional initial trace.
        let (a, g, tm, t) = (0.6f64, 0.9f64, 0.5f64, 2.0f64);
        let c = (t / tm).powf(a);
        let rec = reconstruct(
            &MeasurementPair::linear_pair(c, times(tm, t)),
            orders(a, g),
            3,
        )
        .unwrap();
        assert!(rec.solution.head().c.abs() <= 1e-10);
    }

    #[test]
    fn snapshots_reproduce_data_truncations() {
        let tp = times(0.3, 1.0);
        let m = MeasurementPair::polynomial_pair(tp);
        let o = orders(0.5, 0.5);
        let n = 12;
        let rec = reconstruct(&m, o, n).unwrap();
        let pz = analyze_with_tol(&m.z, n, QUAD_TOL).unwrap();
        let ph = analyze_with_tol(&m.h, n, QUAD_TOL).unwrap();
        let sz = rec.solution.snapshot(tp.tm()).unwrap();
        let sh = rec.solution.snapshot(tp.t_final()).unwrap();
        assert!(sz.max_abs_diff(&pz) < 1e-10, "{:e}", sz.max_abs_diff(&pz));
        assert!(sh.max_abs_diff(&ph) < 1e-10, "{:e}", sh.max_abs_diff(&ph));
    }

    #[test]
    fn hypothesis_report_flags_example_data() {
        let tp = times(0.3, 1.0);
        // Linear pair satisfies everything.
        let lin = check_hypotheses(&MeasurementPair::linear_pair(2.0, tp)).unwrap();
        assert!(lin.worst_residual() < 1e-12);
        // The cubic z has z''(1) = -12/5; everything else holds.
        let rep = check_hypotheses(&MeasurementPair::polynomial_pair(tp)).unwrap();
        assert!((rep.z_residuals[2] - 2.4).abs() < 1e-10);
        assert!(rep.z_residuals[0] < 1e-12);
        assert!(rep.z_residuals[1] < 1e-12);
        assert!(rep.h_residuals.iter().all(|&r| r < 1e-10));
        // z(x) = x violates the endpoint condition.
        let bad = MeasurementPair::new(
            SampledFunction::polynomial(vec![0.0, 1.0]),
            SampledFunction::polynomial(vec![2.0, -2.0]),
            tp,
        );
        let rep = check_hypotheses(&bad).unwrap();
        assert!((rep.z_residuals[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn round_trip_zero_is_exact() {
        let n = 4;
        let err = round_trip(
            orders(0.6, 0.8),
            times(0.3, 1.0),
            n,
            &SeriesField::zeros(n),
            &SeriesField::zeros(n),
        )
        .unwrap();
        assert_eq!(err, 0.0);
    }

    #[test]
    fn round_trip_principal_source() {
        let n = 4;
        let mut f = SeriesField::zeros(n);
        f.c10 = 1.0;
        let err = round_trip(orders(0.6, 0.8), times(0.3, 1.0), n, &f, &SeriesField::zeros(n))
            .unwrap();
        assert!(err <= 1e-9, "round-trip error {err:e}");
    }

    #[test]
    fn reconstruct_is_linear_in_data() {
        let tp = times(0.3, 1.0);
        let o = orders(0.5, 0.8);
        let n = 6;
        let m1 = MeasurementPair::polynomial_pair(tp);
        let m2 = MeasurementPair::linear_pair(1.7, tp);
        let (a, b) = (2.5, -1.25);
        let combo = MeasurementPair::new(
            {
                let (z1, z2) = (m1.z.clone(), m2.z.clone());
                SampledFunction::from_fn(move |x| a * z1.eval(x) + b * z2.eval(x))
            },
            {
                let (h1, h2) = (m1.h.clone(), m2.h.clone());
                SampledFunction::from_fn(move |x| a * h1.eval(x) + b * h2.eval(x))
            },
            tp,
        );
        let r1 = reconstruct(&m1, o, n).unwrap();
        let r2 = reconstruct(&m2, o, n).unwrap();
        let rc = reconstruct(&combo, o, n).unwrap();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let want = a * synthesize(&r1.source, x) + b * synthesize(&r2.source, x);
            let got = synthesize(&rc.source, x);
            assert!(
                (got - want).abs() < 1e-7,
                "linearity broke at x = {x}: {got} vs {want}"
            );
        }
    }
}
