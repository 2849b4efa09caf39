//! Gamma-function kernels: a Lanczos-class approximation in double precision,
//! a Spouge approximation in double-double, and sign-exact `sinpi`/`cospi`
//! helpers used for reflection and for the trigonometric basis.
//!
//! The reciprocal gamma is the quantity the Mittag-Leffler machinery actually
//! consumes: it is finite everywhere and must be *exactly* zero at the poles
//! 0, -1, -2, ... so that vanishing terms of the algebraic asymptotic
//! expansion drop out instead of polluting it.

use crate::dd::Dd;
use std::sync::OnceLock;

/// Lanczos coefficients (Pugh's variant, as used by statrs), accurate to
/// ~1e-15 relative over the real line after reflection.
const GAMMA_DK: &[f64] = &[
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

const GAMMA_R: f64 = 10.900511;
const TWO_SQRT_E_OVER_PI: f64 = 1.860382734205265717;

/// sin(pi x) with exact zeros at integer x (|x| < 2^51).
pub fn sinpi(x: f64) -> f64 {
    let mut r = x - 2.0 * (x / 2.0).floor();
    let mut sign = 1.0;
    if r >= 1.0 {
        r -= 1.0;
        sign = -1.0;
    }
    if r > 0.5 {
        r = 1.0 - r;
    }
    sign * (std::f64::consts::PI * r).sin()
}

/// cos(pi x) with exact zeros at half-integer x and exact +-1 at integer x.
pub fn cospi(x: f64) -> f64 {
    sinpi(0.5 - x)
}

/// Gamma(x) for x not a non-positive integer; +-inf at the poles.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        let s = GAMMA_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(GAMMA_DK[0], |s, (i, &d)| s + d / (i as f64 - x));
        std::f64::consts::PI
            / (sinpi(x) * s * TWO_SQRT_E_OVER_PI * ((0.5 - x + GAMMA_R) / std::f64::consts::E).powf(0.5 - x))
    } else {
        let s = GAMMA_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(GAMMA_DK[0], |s, (i, &d)| s + d / (x + i as f64 - 1.0));
        s * TWO_SQRT_E_OVER_PI * ((x - 0.5 + GAMMA_R) / std::f64::consts::E).powf(x - 0.5)
    }
}

/// ln |Gamma(x)| for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let s = GAMMA_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(GAMMA_DK[0], |s, (i, &d)| s + d / (x + i as f64 - 1.0));
    s.ln() + TWO_SQRT_E_OVER_PI.ln() + (x - 0.5) * ((x - 0.5 + GAMMA_R) / std::f64::consts::E).ln()
}

/// 1/Gamma(x) on the whole real line. Exactly 0.0 at x = 0, -1, -2, ...,
/// and 0.0 past the overflow threshold of Gamma.
pub fn recip_gamma(x: f64) -> f64 {
    if x >= 0.5 {
        if x > 170.6 {
            // Gamma overflows f64; its reciprocal underflows harmlessly.
            let lg = ln_gamma(x);
            return if lg > 745.0 { 0.0 } else { (-lg).exp() };
        }
        1.0 / gamma(x)
    } else {
        // Reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi.
        let s = sinpi(x);
        if s == 0.0 {
            return 0.0;
        }
        let y = 1.0 - x;
        if y > 170.6 {
            let t = (s.abs().ln() + ln_gamma(y) - std::f64::consts::PI.ln()).exp();
            return if s > 0.0 { t } else { -t };
        }
        s * gamma(y) / std::f64::consts::PI
    }
}

// --- Stirling series in double-double -------------------------------------

/// ln(2 pi)/2 to double-double precision.
const HALF_LN_2PI: Dd = Dd {
    hi: 0.9189385332046728,
    lo: -3.8782941580672414e-17,
};

/// Arguments below this are shifted up before the Stirling series applies.
const STIRLING_MIN: f64 = 30.0;

/// B_{2n} / (2n (2n-1)) as exact integer ratios, n = 1..=13. With z >= 30 the
/// truncation sits near 1e-34.
const STIRLING_NUM_DEN: [(f64, f64); 13] = [
    (1.0, 12.0),
    (-1.0, 360.0),
    (1.0, 1260.0),
    (-1.0, 1680.0),
    (1.0, 1188.0),
    (-691.0, 360360.0),
    (1.0, 156.0),
    (-3617.0, 122400.0),
    (43867.0, 244188.0),
    (-174611.0, 125400.0),
    (77683.0, 5796.0),
    (-236364091.0, 1506960.0),
    (8553103.0, 3900.0),
];

fn stirling_coeffs() -> &'static [Dd; 13] {
    static COEFFS: OnceLock<[Dd; 13]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut c = [Dd::ZERO; 13];
        for (i, &(n, d)) in STIRLING_NUM_DEN.iter().enumerate() {
            c[i] = Dd::from_f64(n).div_f64(d);
        }
        c
    })
}

/// ln Gamma(z) in double-double for z >= STIRLING_MIN.
fn ln_gamma_stirling(z: Dd) -> Dd {
    let inv = z.recip();
    let inv2 = inv.mul(inv);
    let coeffs = stirling_coeffs();
    let mut pow = inv;
    let mut s = Dd::ZERO;
    for &c in coeffs.iter() {
        s = s.add(c.mul(pow));
        pow = pow.mul(inv2);
    }
    // (z - 1/2) ln z - z + ln(2 pi)/2 + S(z)
    z.add_f64(-0.5).mul(z.ln()).sub(z).add(HALF_LN_2PI).add(s)
}

/// 1/Gamma(x) in double-double, with exact zeros at the poles. Arguments in
/// [0.5, STIRLING_MIN) are shifted upward through Gamma(x+1) = x Gamma(x);
/// x < 0.5 goes through reflection with the sign-exact sinpi.
pub fn recip_gamma_dd(x: Dd) -> Dd {
    if x.hi >= 0.5 {
        let mut shift = Dd::ONE;
        let mut z = x;
        while z.hi < STIRLING_MIN {
            shift = shift.mul(z);
            z = z.add_f64(1.0);
        }
        let lg = ln_gamma_stirling(z);
        if lg.hi > 745.0 {
            return Dd::ZERO;
        }
        // 1/Gamma(x) = shift / Gamma(z)
        shift.mul(lg.neg().exp())
    } else {
        let s = x.sinpi();
        if s.hi == 0.0 && s.lo == 0.0 {
            return Dd::ZERO;
        }
        // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi, and Gamma(1-x) = 1/rg(1-x)
        let y = Dd::ONE.sub(x);
        let rg_y = recip_gamma_dd(y);
        s.div(Dd::PI.mul(rg_y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_known_values() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(2.0) - 1.0).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        // Gamma(-0.5) = -2 sqrt(pi)
        assert!((gamma(-0.5) + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn recip_gamma_exact_pole_zeros() {
        for n in 0..60 {
            assert_eq!(recip_gamma(-(n as f64)), 0.0, "pole at -{n}");
        }
        assert_eq!(recip_gamma(-171.0), 0.0);
    }

    #[test]
    fn recip_gamma_matches_gamma() {
        for &x in &[0.1, 0.7, 1.5, 3.25, 10.0, 100.0, -0.5, -1.5, -20.3] {
            let rg = recip_gamma(x);
            let g = gamma(x);
            assert!(
                (rg * g - 1.0).abs() < 1e-12,
                "recip_gamma({x}) * gamma({x}) = {}",
                rg * g
            );
        }
    }

    #[test]
    fn recip_gamma_underflow_is_zero() {
        assert_eq!(recip_gamma(200.0), 0.0);
        assert_eq!(recip_gamma(1000.0), 0.0);
    }

    #[test]
    fn dd_gamma_half_integer() {
        // Gamma(0.5) = sqrt(pi) = 1.772453850905516 + -7.666586499825799e-17
        let rg = recip_gamma_dd(Dd::from_f64(0.5));
        let g = rg.recip();
        let err = g.sub(Dd::new(1.772453850905516, -7.666586499825799e-17));
        assert!(err.to_f64().abs() < 1e-29, "err = {:e}", err.to_f64());
    }

    #[test]
    fn dd_gamma_factorials() {
        let mut expect = 1.0f64;
        for n in 1..=20u32 {
            // Gamma(n) = (n-1)!
            let rg = recip_gamma_dd(Dd::from_f64(n as f64));
            let g = rg.recip().to_f64();
            assert!(
                (g - expect).abs() <= 1e-13 * expect,
                "Gamma({n}) = {g}, want {expect}"
            );
            expect *= n as f64;
        }
    }

    #[test]
    fn dd_gamma_reflection_zeros() {
        for n in 0..40 {
            let rg = recip_gamma_dd(Dd::from_f64(-(n as f64)));
            assert_eq!(rg.to_f64(), 0.0);
        }
    }

    #[test]
    fn dd_gamma_negative_argument() {
        // Gamma(-1.5) = 4 sqrt(pi) / 3
        let rg = recip_gamma_dd(Dd::from_f64(-1.5));
        let want = 3.0 / (4.0 * std::f64::consts::PI.sqrt());
        assert!((rg.to_f64() - want).abs() < 1e-15 * want.abs());
    }

    #[test]
    fn sinpi_cospi_special_points() {
        assert_eq!(sinpi(3.0), 0.0);
        assert_eq!(sinpi(-7.0), 0.0);
        assert_eq!(cospi(0.5), 0.0);
        assert_eq!(cospi(2.5), 0.0);
        assert_eq!(cospi(0.0), 1.0);
        assert_eq!(cospi(1.0), -1.0);
        assert_eq!(cospi(2.0), 1.0);
        assert!((sinpi(0.25) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }
}
