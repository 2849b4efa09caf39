//! Named invariant suites behind the CLI `verify` command. Each check prints
//! one pass/fail line with its observed margin; `quick` uses coarse grids,
//! `full` dense ones.

use crate::basis::{
    analyze, biorthogonality_matrix, synthesize, ModeIndex, SeriesField,
};
use crate::error::Result;
use crate::forward::{residual_mode1, u_mode1, u_mode2, ModeState};
use crate::inverse::{reconstruct, round_trip, MeasurementPair};
use crate::mittag_leffler::{
    check_recurrence, ml_asymptotic, ml_eval, ml_series, MlQuery, X_SWITCH,
};
use crate::modes::{
    assemble, solve_mode1, FractionalOrders, ModeCoefficients, TimePair,
};
use crate::sampled::SampledFunction;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub margin: String,
}

impl CheckResult {
    fn pass(name: &'static str, margin: String) -> CheckResult {
        CheckResult {
            name,
            passed: true,
            margin,
        }
    }

    fn fail(name: &'static str, margin: String) -> CheckResult {
        CheckResult {
            name,
            passed: false,
            margin,
        }
    }

    fn from_bound(name: &'static str, observed: f64, bound: f64) -> CheckResult {
        CheckResult {
            name,
            passed: observed <= bound,
            margin: format!("observed {observed:.3e} vs bound {bound:.3e}"),
        }
    }
}

/// Deterministic seedable generator for the randomized checks
/// (SplitMix64; seeded from FRACSOURCE_SEED when set).
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn from_env() -> SplitMix64 {
        let seed = std::env::var("FRACSOURCE_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0x9E37_79B9_7F4A_7C15);
        SplitMix64::new(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn next_signed(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }
}

fn alpha_beta_grid(level: Level) -> Vec<(f64, f64)> {
    // The series/asymptotic pair covers alpha well past 1; alpha close to 2
    // sits in the documented accuracy gap and is excluded from sweeps.
    let alphas: &[f64] = match level {
        Level::Quick => &[0.3, 0.5, 0.85, 1.0],
        Level::Full => &[0.25, 0.3, 0.5, 0.7, 0.85, 1.0, 1.2, 1.5],
    };
    let betas: &[f64] = match level {
        Level::Quick => &[0.5, 1.0, 1.7],
        Level::Full => &[0.3, 0.5, 1.0, 1.3, 1.7, 2.5],
    };
    let mut grid = Vec::new();
    for &a in alphas {
        for &b in betas {
            grid.push((a, b));
        }
    }
    grid
}

/// Lemma-style boundedness: lambda^rho t^(alpha rho) |E^rho| stays bounded
/// with no growth toward the grid boundary.
fn check_boundedness(level: Level) -> CheckResult {
    let name = "ml_boundedness";
    let lambdas: Vec<f64> = (-3..=6).map(|e| 10f64.powi(e)).collect();
    let ts: Vec<f64> = (-3..=2).map(|e| 10f64.powi(e)).collect();
    let mut global: f64 = 0.0;
    let mut interior: f64 = 0.0;
    for &(a, b) in &alpha_beta_grid(level) {
        for rho in [1u8, 2] {
            for (i, &l) in lambdas.iter().enumerate() {
                for (j, &t) in ts.iter().enumerate() {
                    let x = -l * t.powf(a);
                    if !x.is_finite() {
                        continue;
                    }
                    let r = match ml_eval(&MlQuery::new(a, b, rho, x), 1e-9) {
                        Ok(r) => r,
                        Err(e) => return CheckResult::fail(name, format!("eval failed: {e}")),
                    };
                    let q = l.powi(rho as i32) * t.powf(a * rho as f64) * r.value.abs();
                    global = global.max(q);
                    let li = i > 0 && i + 1 < lambdas.len();
                    let tj = j > 0 && j + 1 < ts.len();
                    if li && tj {
                        interior = interior.max(q);
                    }
                }
            }
        }
    }
    if global.is_finite() && global < 10.0 * interior.max(1.0) {
        CheckResult::pass(
            name,
            format!("max {global:.3e}, interior max {interior:.3e}"),
        )
    } else {
        CheckResult::fail(
            name,
            format!("boundary blow-up: max {global:.3e} vs interior {interior:.3e}"),
        )
    }
}

/// Positivity and monotone decrease of E^rho(-l t^a) and of the weighted
/// t^(g-1) E^rho_{a,g}(-l t^a) in t.
fn check_monotone_decreasing(level: Level) -> CheckResult {
    let name = "ml_monotonicity_decreasing";
    let points = match level {
        Level::Quick => 40,
        Level::Full => 100,
    };
    let combos: &[(f64, f64, u8, f64)] = &[
        (0.5, 0.6, 1, 2.0),
        (0.5, 1.0, 1, 25.0),
        (0.8, 1.0, 1, 5.0),
        (1.0, 1.5, 1, 100.0),
        (0.4, 0.9, 2, 3.0),
        (0.45, 1.0, 2, 50.0),
        (0.3, 0.7, 1, 400.0),
        (0.25, 0.9, 2, 1.0),
        (0.6, 0.8, 1, 10.0),
        (0.9, 1.9, 2, 7.0),
    ];
    let slack = 1e-11;
    let mut worst_step: f64 = f64::NEG_INFINITY;
    for &(a, b, rho, l) in combos {
        if b < a * rho as f64 {
            continue;
        }
        let mut prev = f64::INFINITY;
        for i in 1..=points {
            let t = 100.0 * i as f64 / points as f64;
            let x = -l * t.powf(a);
            let v = match ml_eval(&MlQuery::new(a, b, rho, x), 1e-11) {
                Ok(r) => r.value,
                Err(e) => return CheckResult::fail(name, format!("eval failed: {e}")),
            };
            if v <= 0.0 {
                return CheckResult::fail(
                    name,
                    format!("non-positive value {v:e} at a={a} b={b} rho={rho} t={t}"),
                );
            }
            worst_step = worst_step.max(v - prev);
            prev = v;
        }
        // weighted variant with gamma = b clamped into (alpha rho, 1]
        let g = b.min(1.0);
        if g >= a * rho as f64 {
            let mut prev = f64::INFINITY;
            for i in 1..=points {
                let t = 100.0 * i as f64 / points as f64;
                let x = -l * t.powf(a);
                let v = match ml_eval(&MlQuery::new(a, g, rho, x), 1e-11) {
                    Ok(r) => t.powf(g - 1.0) * r.value,
                    Err(e) => return CheckResult::fail(name, format!("eval failed: {e}")),
                };
                worst_step = worst_step.max(v - prev);
                prev = v;
            }
        }
    }
    CheckResult::from_bound(name, worst_step, slack)
}

/// Monotone increase of t^a E_{a,b}(-l t^a) for 2a <= b.
fn check_monotone_increasing(level: Level) -> CheckResult {
    let name = "ml_monotonicity_increasing";
    let points = match level {
        Level::Quick => 40,
        Level::Full => 100,
    };
    let combos: &[(f64, f64, f64)] = &[
        (0.5, 1.0, 2.0),
        (0.5, 1.5, 30.0),
        (0.3, 0.8, 7.0),
        (0.45, 1.2, 1.0),
        (1.0, 2.0, 60.0),
        (0.7, 1.5, 15.0),
        (0.25, 0.6, 200.0),
        (0.9, 1.8, 3.0),
        (0.6, 1.3, 0.5),
        (0.35, 0.7, 90.0),
    ];
    let mut worst_drop: f64 = f64::NEG_INFINITY;
    for &(a, b, l) in combos {
        if b < 2.0 * a {
            continue;
        }
        let mut prev = f64::NEG_INFINITY;
        for i in 1..=points {
            let t = 100.0 * i as f64 / points as f64;
            let x = -l * t.powf(a);
            let v = match ml_eval(&MlQuery::new(a, b, 1, x), 1e-11) {
                Ok(r) => t.powf(a) * r.value,
                Err(e) => return CheckResult::fail(name, format!("eval failed: {e}")),
            };
            worst_drop = worst_drop.max(prev - v);
            prev = v;
        }
    }
    CheckResult::from_bound(name, worst_drop, 1e-11)
}

/// Recurrence closure over a parameter grid.
fn check_recurrence_closure(level: Level) -> CheckResult {
    let name = "ml_recurrence_closure";
    let (la, lt) = match level {
        Level::Quick => (4usize, 4usize),
        Level::Full => (8, 8),
    };
    let mut failures = 0usize;
    let mut total = 0usize;
    for &(a, b) in &alpha_beta_grid(level) {
        for i in 0..la {
            let lambda = 10f64.powf(-1.0 + 2.0 * i as f64 / (la - 1).max(1) as f64);
            for j in 0..lt {
                let t = 0.05 + 3.0 * j as f64 / (lt - 1).max(1) as f64;
                total += 1;
                if !check_recurrence(a, b, lambda, t, 1e-10) {
                    failures += 1;
                }
            }
        }
    }
    if failures == 0 {
        CheckResult::pass(name, format!("{total} grid points closed at 1e-10"))
    } else {
        CheckResult::fail(name, format!("{failures}/{total} points violated"))
    }
}

/// Series and asymptotic regimes agree at the handover point within the sum
/// of their own error estimates.
fn check_regime_consistency(level: Level) -> CheckResult {
    let name = "ml_regime_consistency";
    let mut worst_ratio: f64 = 0.0;
    for &(a, b) in &alpha_beta_grid(level) {
        let q = MlQuery::new(a, b, 1, -X_SWITCH);
        // series must be admissible at the switch for this comparison
        if X_SWITCH.powf(1.0 / a) > 40.0 {
            continue;
        }
        let s = match ml_series(&q, 1e-13) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let asy = match ml_asymptotic(&q, 1e-3) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let gap = (s.value - asy.value).abs();
        let budget = 2.0 * (s.est_abs_error + asy.est_abs_error);
        if budget > 0.0 {
            worst_ratio = worst_ratio.max(gap / budget);
        }
    }
    CheckResult::from_bound(name, worst_ratio, 1.0)
}

fn check_biorthogonality(level: Level) -> CheckResult {
    let name = "basis_biorthogonality";
    let n = match level {
        Level::Quick => 8,
        Level::Full => 25,
    };
    let g = match biorthogonality_matrix(n) {
        Ok(g) => g,
        Err(e) => return CheckResult::fail(name, format!("quadrature failed: {e}")),
    };
    let mut worst: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - want).abs());
        }
    }
    CheckResult::from_bound(name, worst, 1e-9)
}

/// Coefficient decay l_n^4 |g_{k,n}| bounded for data meeting the endpoint
/// hypotheses (the quartic catalog snapshot).
fn check_coefficient_decay(level: Level) -> CheckResult {
    let name = "basis_coefficient_decay";
    let n = match level {
        Level::Quick => 10,
        Level::Full => 25,
    };
    let h = SampledFunction::polynomial(vec![1.0, 0.0, -6.0, 8.0, -3.0]);
    let field = match analyze(&h, n) {
        Ok(f) => f,
        Err(e) => return CheckResult::fail(name, format!("{e}")),
    };
    let mut bound: f64 = 0.0;
    for (idx, c) in field.iter() {
        if idx.n() >= 1 {
            bound = bound.max(idx.lambda().powi(4) * c.abs());
        }
    }
    // The quartic's exact coefficients give l^4 |c| <= 72 + 360/l.
    CheckResult::from_bound(name, bound, 150.0)
}

fn check_synthesis_boundary() -> CheckResult {
    let name = "basis_synthesis_at_one";
    let mut rng = SplitMix64::new(7);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = 6;
        let mut f = SeriesField::zeros(n);
        f.c10 = rng.next_signed();
        for i in 0..n {
            f.c1[i] = rng.next_signed();
            f.c2[i] = rng.next_signed();
        }
        let v = synthesize(&f, 1.0).abs();
        let scale = f.norm_l1().max(1e-30);
        worst = worst.max(v / scale);
    }
    CheckResult::from_bound(name, worst, 1e-12)
}

fn check_determinant_positivity(level: Level) -> CheckResult {
    let name = "modes_determinant_positivity";
    let n_max = match level {
        Level::Quick => 20,
        Level::Full => 50,
    };
    // The classical corner (1, 1) is capped: its trace-column entries are
    // e^{-lambda t} and the (positive) determinant underflows f64 for
    // lambda Tm beyond ~700.
    let orders_grid: &[(f64, f64, usize)] = &[
        (0.25, 0.25, usize::MAX),
        (0.25, 0.6, usize::MAX),
        (0.5, 0.5, usize::MAX),
        (0.5, 0.8, usize::MAX),
        (0.5, 1.0, usize::MAX),
        (0.7, 0.9, usize::MAX),
        (0.9, 0.95, usize::MAX),
        (0.95, 1.0, usize::MAX),
        (1.0, 1.0, 5),
    ];
    let tp = TimePair::new(0.3, 1.0).unwrap();
    let mut min_det = f64::INFINITY;
    for &(a, g, cap) in orders_grid {
        let o = match FractionalOrders::new(a, g) {
            Ok(o) => o,
            Err(_) => continue,
        };
        for n in 0..=n_max.min(cap) {
            let l = 2.0 * std::f64::consts::PI * n as f64;
            match assemble(o, 1.0 + a, l * l, tp) {
                Ok(m) => {
                    if m.det <= 0.0 {
                        return CheckResult::fail(
                            name,
                            format!("det = {:e} at alpha={a} gamma={g} n={n}", m.det),
                        );
                    }
                    min_det = min_det.min(m.det);
                }
                Err(e) => return CheckResult::fail(name, format!("{e}")),
            }
        }
    }
    CheckResult::pass(name, format!("min det {min_det:.3e} > 0"))
}

/// lambda^2 det bounded below for gamma > alpha, stable under doubling the
/// mode range.
fn check_scaled_determinant(level: Level) -> CheckResult {
    let name = "modes_scaled_determinant_bound";
    let o = FractionalOrders::new(0.6, 0.9).unwrap();
    let tp = TimePair::new(0.3, 1.0).unwrap();
    let n_max = match level {
        Level::Quick => 25,
        Level::Full => 50,
    };
    let scan = |n_hi: usize| -> Result<f64> {
        let mut lo = f64::INFINITY;
        for n in 1..=n_hi {
            let l = 2.0 * std::f64::consts::PI * n as f64;
            let m = assemble(o, 1.6, l * l, tp)?;
            lo = lo.min(crate::modes::det_scaled(&m)?);
        }
        Ok(lo)
    };
    match (scan(n_max / 2), scan(n_max)) {
        (Ok(a), Ok(b)) => {
            let stable = b > 0.0 && (a - b).abs() <= 0.5 * a.abs();
            if stable {
                CheckResult::pass(name, format!("lower bound {b:.4e}, half-range {a:.4e}"))
            } else {
                CheckResult::fail(name, format!("unstable bound: {a:.4e} -> {b:.4e}"))
            }
        }
        (Err(e), _) | (_, Err(e)) => CheckResult::fail(name, format!("{e}")),
    }
}

/// Inverse entries grow no faster than lambda = l_n^2.
fn check_inverse_entry_growth(level: Level) -> CheckResult {
    let name = "modes_inverse_entry_growth";
    let o = FractionalOrders::new(0.7, 0.9).unwrap();
    let tp = TimePair::new(0.3, 1.0).unwrap();
    let n_max = match level {
        Level::Quick => 25,
        Level::Full => 50,
    };
    let mut worst: f64 = 0.0;
    for n in 1..=n_max {
        let l = 2.0 * std::f64::consts::PI * n as f64;
        let lam = l * l;
        let m = match assemble(o, 1.7, lam, tp) {
            Ok(m) => m,
            Err(e) => return CheckResult::fail(name, format!("{e}")),
        };
        let inv_max = m.entries[0][0]
            .abs()
            .max(m.entries[0][1].abs())
            .max(m.entries[1][0].abs())
            .max(m.entries[1][1].abs())
            / m.det;
        worst = worst.max(inv_max / lam);
    }
    CheckResult::from_bound(name, worst, 100.0)
}

fn check_solver_residual(level: Level) -> CheckResult {
    let name = "modes_solver_residual";
    let tp = TimePair::new(0.3, 1.0).unwrap();
    let n_max = match level {
        Level::Quick => 15,
        Level::Full => 40,
    };
    let mut rng = SplitMix64::new(11);
    let mut worst: f64 = 0.0;
    for &(a, g) in &[(0.5, 0.5), (0.6, 0.9), (0.8, 1.0)] {
        let o = FractionalOrders::new(a, g).unwrap();
        for n in 0..=n_max {
            let l = 2.0 * std::f64::consts::PI * n as f64;
            let m = match assemble(o, 1.0 + a, l * l, tp) {
                Ok(m) => m,
                Err(e) => return CheckResult::fail(name, format!("{e}")),
            };
            let h = rng.next_signed();
            let z = rng.next_signed();
            let sol = match solve_mode1(&m, h, z) {
                Ok(s) => s,
                Err(e) => return CheckResult::fail(name, format!("{e}")),
            };
            let r0 = (m.entries[0][0] * sol.f + m.entries[0][1] * sol.c - h).abs();
            let r1 = (m.entries[1][0] * sol.f + m.entries[1][1] * sol.c - z).abs();
            let scale = 1.0 + h.abs().max(z.abs());
            worst = worst.max(r0.max(r1) / scale);
        }
    }
    CheckResult::from_bound(name, worst, 1e-10)
}

/// Mode-equation residual |D u + l^2 u - f| over a parameter grid.
fn check_mode_residual(level: Level) -> CheckResult {
    let name = "forward_mode_equation_residual";
    let combos: &[(f64, f64)] = match level {
        Level::Quick => &[(0.5, 0.5), (0.7, 0.9), (1.0, 1.0)],
        Level::Full => &[(0.3, 0.6), (0.5, 0.5), (0.5, 0.8), (0.7, 0.9), (0.9, 1.0), (1.0, 1.0)],
    };
    let mut worst: f64 = 0.0;
    for &(a, g) in combos {
        let o = FractionalOrders::new(a, g).unwrap();
        for n in [0u32, 1, 3, 8] {
            let idx = if n == 0 {
                ModeIndex::principal()
            } else {
                ModeIndex::new(1, n).unwrap()
            };
            let s = ModeState::new(idx, ModeCoefficients { f: 0.9, c: -0.7 });
            for &t in &[0.1, 0.5, 1.0] {
                match residual_mode1(&s, o, t) {
                    Ok(r) => worst = worst.max(r.abs()),
                    Err(e) => return CheckResult::fail(name, format!("{e}")),
                }
            }
        }
    }
    CheckResult::from_bound(name, worst, 1e-10)
}

/// Tail summability of the synthesized series for data meeting the
/// hypotheses: the per-mode sup contributions must decay.
fn check_mode_tail_decay() -> CheckResult {
    let name = "forward_mode_tail_decay";
    let tp = TimePair::new(0.3, 1.0).unwrap();
    let o = FractionalOrders::new(0.5, 0.5).unwrap();
    let n = 16;
    let rec = match reconstruct(&MeasurementPair::polynomial_pair(tp), o, n) {
        Ok(r) => r,
        Err(e) => return CheckResult::fail(name, format!("{e}")),
    };
    let t = 0.6;
    let mut contributions = Vec::new();
    for i in 1..=n {
        let s1 = rec.solution.mode1_state(i).unwrap();
        let s2 = rec.solution.mode2_state(i).unwrap();
        let u1 = u_mode1(&s1, o, t).unwrap_or(f64::NAN);
        let u2 = u_mode2(&s2, &s1, o, t).unwrap_or(f64::NAN);
        // sup_x |phi_{1,n}| = 4, |phi_{2,n}| = 4
        contributions.push(4.0 * (u1.abs() + u2.abs()));
    }
    let head: f64 = contributions[..n / 2].iter().sum();
    let tail: f64 = contributions[n / 2..].iter().sum();
    let ratio = tail / head.max(1e-300);
    CheckResult::from_bound(name, ratio, 1.0)
}

/// Snapshot interpolation: the reconstructed field reproduces the data
/// truncations at both measurement times.
fn check_snapshot_consistency() -> CheckResult {
    let name = "inverse_snapshot_consistency";
    let tp = TimePair::new(0.3, 1.0).unwrap();
    let o = FractionalOrders::new(0.5, 0.5).unwrap();
    let n = 12;
    let m = MeasurementPair::polynomial_pair(tp);
    let rec = match reconstruct(&m, o, n) {
        Ok(r) => r,
        Err(e) => return CheckResult::fail(name, format!("{e}")),
    };
    let worst = |t: f64, g: &SampledFunction| -> f64 {
        let pn = analyze(g, n).unwrap();
        let snap = rec.solution.snapshot(t).unwrap();
        let mut sup: f64 = 0.0;
        for i in 0..=256 {
            let x = i as f64 / 256.0;
            sup = sup.max((synthesize(&snap, x) - synthesize(&pn, x)).abs());
        }
        sup
    };
    let wz = worst(tp.tm(), &m.z);
    let wh = worst(tp.t_final(), &m.h);
    CheckResult::from_bound(name, wz.max(wh), 1e-9)
}

/// Zero data reconstructs to identically zero coefficients.
fn check_uniqueness_zero() -> CheckResult {
    let name = "inverse_zero_data_uniqueness";
    let tp = TimePair::new(0.3, 1.0).unwrap();
    let o = FractionalOrders::new(0.6, 0.8).unwrap();
    let zero = MeasurementPair::new(
        SampledFunction::polynomial(vec![0.0]),
        SampledFunction::polynomial(vec![0.0]),
        tp,
    );
    match reconstruct(&zero, o, 6) {
        Ok(rec) => {
            let total = rec.source.norm_l1()
                + rec.solution.head().c.abs()
                + rec
                    .solution
                    .pairs()
                    .iter()
                    .map(|(m1, m2)| m1.c.abs() + m2.c.abs())
                    .sum::<f64>();
            CheckResult::from_bound(name, total, 0.0)
        }
        Err(e) => CheckResult::fail(name, format!("{e}")),
    }
}

/// Recovered coefficients scaled by l_n^2 stay bounded (no growth trend)
/// for data meeting the endpoint hypotheses. Both snapshots are multiples of
/// the quartic catalog function, which satisfies every condition; the cubic
/// of the worked example does not (its second derivative survives at x = 1)
/// and genuinely produces growing scaled coefficients.
fn check_recovered_coefficient_bounds() -> CheckResult {
    let name = "inverse_coefficient_bounds";
    let tp = TimePair::new(0.3, 1.0).unwrap();
    let o = FractionalOrders::new(0.5, 0.8).unwrap();
    let n = 16;
    let quartic = vec![1.0, 0.0, -6.0, 8.0, -3.0];
    let m = MeasurementPair::new(
        SampledFunction::polynomial(quartic.clone()),
        SampledFunction::polynomial(quartic.iter().map(|c| 0.7 * c).collect()),
        tp,
    );
    let rec = match reconstruct(&m, o, n) {
        Ok(r) => r,
        Err(e) => return CheckResult::fail(name, format!("{e}")),
    };
    let scaled: Vec<f64> = (1..=n)
        .map(|i| {
            let l = 2.0 * std::f64::consts::PI * i as f64;
            let (m1, m2) = rec.solution.pairs()[i - 1];
            l * l * m1.f.abs().max(m1.c.abs()).max(m2.f.abs()).max(m2.c.abs())
        })
        .collect();
    let head: f64 = scaled[..n / 2].iter().cloned().fold(0.0, f64::max);
    let tail: f64 = scaled[n / 2..].iter().cloned().fold(0.0, f64::max);
    if tail <= 1.5 * head + 1e-12 {
        CheckResult::pass(name, format!("head max {head:.3e}, tail max {tail:.3e}"))
    } else {
        CheckResult::fail(
            name,
            format!("scaled coefficients grow: {head:.3e} -> {tail:.3e}"),
        )
    }
}

/// Randomized planted round trips with decaying coefficients.
fn check_round_trip(level: Level) -> CheckResult {
    let name = "inverse_round_trip";
    let sets = match level {
        Level::Quick => 3,
        Level::Full => 10,
    };
    let n = 8;
    let tp = TimePair::new(0.3, 1.0).unwrap();
    let mut rng = SplitMix64::from_env();
    let mut worst: f64 = 0.0;
    for &(a, g) in &[(0.6, 0.8), (0.5, 0.9), (0.8, 1.0)] {
        let o = FractionalOrders::new(a, g).unwrap();
        for _ in 0..sets {
            let mut pf = SeriesField::zeros(n);
            let mut pc = SeriesField::zeros(n);
            pf.c10 = rng.next_signed();
            pc.c10 = rng.next_signed();
            for i in 0..n {
                let l = 2.0 * std::f64::consts::PI * (i + 1) as f64;
                let decay = 1.0 / (l * l);
                pf.c1[i] = rng.next_signed() * decay;
                pf.c2[i] = rng.next_signed() * decay;
                pc.c1[i] = rng.next_signed() * decay;
                pc.c2[i] = rng.next_signed() * decay;
            }
            match round_trip(o, tp, n, &pf, &pc) {
                Ok(err) => worst = worst.max(err),
                Err(e) => return CheckResult::fail(name, format!("{e}")),
            }
        }
    }
    CheckResult::from_bound(name, worst, 1e-7)
}

/// Method-of-lines heat integrator for the classical limit alpha = gamma = 1
/// with the nonlocal flux condition u_x(0) = u_x(1) and u(1) = 0. Returns
/// u(., t_target) on the given grid.
pub fn heat_mol(
    source: &dyn Fn(f64) -> f64,
    initial: &dyn Fn(f64) -> f64,
    t_target: f64,
    m: usize,
) -> Vec<f64> {
    let dx = 1.0 / m as f64;
    let mut u: Vec<f64> = (0..=m).map(|j| initial(j as f64 * dx)).collect();
    u[m] = 0.0;
    let f: Vec<f64> = (0..=m).map(|j| source(j as f64 * dx)).collect();
    let close = |u: &mut Vec<f64>| {
        // -3u0 + 4u1 - u2 = -4u_{M-1} + u_{M-2}  (u_M = 0)
        u[0] = (4.0 * u[1] - u[2] + 4.0 * u[m - 1] - u[m - 2]) / 3.0;
    };
    close(&mut u);
    let dt = 0.2 * dx * dx;
    let steps = (t_target / dt).ceil() as usize;
    let dt = t_target / steps as f64;
    let rhs = |u: &Vec<f64>| -> Vec<f64> {
        let mut d = vec![0.0; m + 1];
        for j in 1..m {
            d[j] = (u[j - 1] - 2.0 * u[j] + u[j + 1]) / (dx * dx) + f[j];
        }
        d
    };
    for _ in 0..steps {
        let k1 = rhs(&u);
        let mut u2: Vec<f64> = (0..=m).map(|j| u[j] + 0.5 * dt * k1[j]).collect();
        close(&mut u2);
        let k2 = rhs(&u2);
        let mut u3: Vec<f64> = (0..=m).map(|j| u[j] + 0.5 * dt * k2[j]).collect();
        close(&mut u3);
        let k3 = rhs(&u3);
        let mut u4: Vec<f64> = (0..=m).map(|j| u[j] + dt * k3[j]).collect();
        close(&mut u4);
        let k4 = rhs(&u4);
        for j in 1..m {
            u[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        close(&mut u);
    }
    u
}

/// Classical-limit comparison on the linear catalog data; returns the
/// sup-norm gap between the spectral forward solution and the integrator.
pub fn classical_limit_error(c: f64, t_eval: f64) -> Result<f64> {
    let o = FractionalOrders::new(1.0, 1.0)?;
    let tp = TimePair::new(0.5, 1.0)?;
    let rec = reconstruct(&MeasurementPair::linear_pair(c, tp), o, 4)?;
    let f10 = rec.source.c10;
    let c10 = rec.solution.head().c;
    let m = 128;
    let u = heat_mol(
        &move |x| 2.0 * f10 * (1.0 - x),
        &move |x| 2.0 * c10 * (1.0 - x),
        t_eval,
        m,
    );
    let mut worst: f64 = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        let x = j as f64 / m as f64;
        let v = rec.solution.evaluate(x, t_eval)?;
        worst = worst.max((v - uj).abs());
    }
    Ok(worst)
}

fn check_classical_limit() -> CheckResult {
    let name = "forward_classical_limit";
    let mut worst: f64 = 0.0;
    for &t in &[0.1, 0.5, 1.0] {
        match classical_limit_error(2.0, t) {
            Ok(e) => worst = worst.max(e),
            Err(e) => return CheckResult::fail(name, format!("{e}")),
        }
    }
    CheckResult::from_bound(name, worst, 1e-6)
}

/// Run every named invariant suite at the given level.
pub fn run_all(level: Level) -> Vec<CheckResult> {
    let mut results = vec![
        check_boundedness(level),
        check_monotone_decreasing(level),
        check_monotone_increasing(level),
        check_recurrence_closure(level),
        check_regime_consistency(level),
        check_biorthogonality(level),
        check_coefficient_decay(level),
        check_synthesis_boundary(),
        check_determinant_positivity(level),
        check_scaled_determinant(level),
        check_inverse_entry_growth(level),
        check_solver_residual(level),
        check_mode_residual(level),
        check_mode_tail_decay(),
        check_snapshot_consistency(),
        check_uniqueness_zero(),
        check_recovered_coefficient_bounds(),
        check_round_trip(level),
    ];
    if level == Level::Full {
        results.push(check_classical_limit());
    }
    results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_is_green() {
        for r in run_all(Level::Quick) {
            assert!(r.passed, "{} failed: {}", r.name, r.margin);
        }
    }

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let v = SplitMix64::new(1).next_signed();
        assert!((-1.0..1.0).contains(&v));
    }
}
