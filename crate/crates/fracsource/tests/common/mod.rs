//! Shared test oracles, independent of the library's evaluation paths:
//! a slow direct double-double summation of the defining series, a
//! continued-fraction erfc, and the reference fixture reader.

use fracsource::dd::Dd;
use fracsource::gamma::recip_gamma_dd;
use std::path::PathBuf;

/// Direct Prabhakar series in double-double, each term built from scratch
/// (Pochhammer ratio by explicit product, no shared recurrences with the
/// implementation). Valid while |x|^(1/alpha) stays within the double-double
/// cancellation budget (~45).
pub fn prabhakar_series_dd(alpha: f64, beta: f64, rho: u32, x: f64, terms: usize) -> f64 {
    let mut sum = Dd::ZERO;
    for k in 0..terms {
        // Gamma(rho+k) / (Gamma(rho) k!) = prod_{j=1..k} (rho + j - 1) / j
        let mut poch = Dd::ONE;
        for j in 1..=k {
            poch = poch.mul_f64((rho as f64 + j as f64 - 1.0) / j as f64);
        }
        let mut pow = Dd::ONE;
        for _ in 0..k {
            pow = pow.mul_f64(x);
        }
        let arg = Dd::from_f64(alpha).mul_f64(k as f64).add_f64(beta);
        let term = poch.mul(pow).mul(recip_gamma_dd(arg));
        sum = sum.add(term);
        if k > 8 && term.to_f64().abs() < 1e-25 * sum.to_f64().abs().max(1.0) {
            break;
        }
    }
    sum.to_f64()
}

/// erfc(x) for x >= 0: Taylor series below 2, Lentz continued fraction above.
pub fn erfc(x: f64) -> f64 {
    assert!(x >= 0.0);
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
    if x < 2.0 {
        // erf(x) = 2/sqrt(pi) sum (-1)^k x^{2k+1} / (k! (2k+1)), in dd
        let mut term = Dd::from_f64(x);
        let mut sum = Dd::ZERO;
        let x2 = x * x;
        let mut k = 0.0f64;
        loop {
            sum = sum.add(term.div_f64(2.0 * k + 1.0));
            term = term.mul_f64(-x2).div_f64(k + 1.0);
            k += 1.0;
            if term.to_f64().abs() < 1e-22 || k > 80.0 {
                break;
            }
        }
        1.0 - 2.0 * inv_sqrt_pi * sum.to_f64()
    } else {
        // erfc(x) = e^{-x^2} / (sqrt(pi) F) with the continued fraction
        // F = x + (1/2)/(x + (2/2)/(x + (3/2)/(x + ...))), evaluated backward.
        let mut f = x;
        for j in (1..=80).rev() {
            f = x + (j as f64 / 2.0) / f;
        }
        (-x * x).exp() * inv_sqrt_pi / f
    }
}

/// One fixture record: query plus 22-significant-digit reference value.
#[derive(Debug, Clone, Copy)]
pub struct FixtureCase {
    pub alpha: f64,
    pub beta: f64,
    pub rho: u8,
    pub x: f64,
    pub value: f64,
}

pub fn load_fixture() -> Vec<FixtureCase> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", "ml_reference.txt"]
        .iter()
        .collect();
    let text = std::fs::read_to_string(&path).expect("fixture table present");
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(f.len(), 5, "bad fixture record: {line}");
        out.push(FixtureCase {
            alpha: f[0].parse().unwrap(),
            beta: f[1].parse().unwrap(),
            rho: f[2].parse().unwrap(),
            x: f[3].parse().unwrap(),
            value: f[4].parse().unwrap(),
        });
    }
    assert!(out.len() >= 30, "fixture unexpectedly small");
    out
}
