//! Double-double arithmetic: unevaluated sums `hi + lo` of two floats giving
//! roughly 106 bits of significand.
//!
//! The Mittag-Leffler power series suffers cancellation that grows like
//! exp(|x|^(1/alpha)); summing it in double-double keeps the absolute error
//! near machine level everywhere the series regime is selected. Only the
//! operations needed by that path (and by the Spouge reciprocal gamma) are
//! implemented here.

/// A double-double number `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Requires |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Exact product via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// pi to double-double precision.
    pub const PI: Dd = Dd {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };
    /// ln 2 to double-double precision.
    pub const LN2: Dd = Dd {
        hi: 0.6931471805599453,
        lo: 2.3190468138462996e-17,
    };
    /// sqrt(2 pi) to double-double precision.
    pub const SQRT_2PI: Dd = Dd {
        hi: 2.5066282746310007,
        lo: -1.8328579980459167e-16,
    };

    #[inline]
    pub fn from_f64(a: f64) -> Dd {
        Dd { hi: a, lo: 0.0 }
    }

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s1, s2 + self.lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (s1, s2) = quick_two_sum(q1, q2);
        Dd { hi: s1, lo: s2 }.add_f64(q3)
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        self.div(Dd::from_f64(b))
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    /// Scale by a power of two (exact).
    #[inline]
    pub fn ldexp(self, n: i32) -> Dd {
        let f = pow2(n);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        // One Newton step on the f64 seed doubles the accurate digits.
        let x = 1.0 / self.hi.sqrt();
        let ax = self.mul_f64(x);
        let err = self.sub(ax.mul(ax));
        ax.add(err.mul_f64(x * 0.5))
    }

    /// exp(self) for |self| < ~690; underflows to zero below that range.
    pub fn exp(self) -> Dd {
        let a = self.to_f64();
        if a < -745.0 {
            return Dd::ZERO;
        }
        if a > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        let m = (a / std::f64::consts::LN_2).round();
        let r = self.sub(Dd::LN2.mul_f64(m));
        // |r| <= ln2/2; Taylor terms fall below 1e-35 by k = 30.
        let mut sum = Dd::ONE;
        let mut term = Dd::ONE;
        for k in 1..32 {
            term = term.mul(r).div_f64(k as f64);
            sum = sum.add(term);
            if term.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        sum.ldexp(m as i32)
    }

    /// Natural log via one Newton correction of the f64 seed.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let y0 = Dd::from_f64(self.hi.ln());
        // y1 = y0 + x*exp(-y0) - 1
        let e = y0.neg().exp();
        y0.add(self.mul(e)).add_f64(-1.0)
    }

    /// sin(pi * self) with exact zeros at integer arguments.
    pub fn sinpi(self) -> Dd {
        // Reduce modulo 2 exactly; the double floor is exact for |x| < 2^51.
        let n = (self.hi / 2.0).floor() * 2.0;
        let mut r = self.add_f64(-n);
        if r.hi < 0.0 {
            r = r.add_f64(2.0);
        }
        let mut sign = 1.0;
        if r.hi >= 1.0 {
            r = r.add_f64(-1.0);
            sign = -1.0;
        }
        if r.hi > 0.5 {
            r = Dd::from_f64(1.0).sub(r);
        }
        if r.hi == 0.0 && r.lo == 0.0 {
            return Dd::ZERO;
        }
        let x = Dd::PI.mul(r);
        let x2 = x.mul(x);
        let mut term = x;
        let mut sum = x;
        let mut k = 1.0f64;
        loop {
            term = term.mul(x2).div_f64(-((2.0 * k) * (2.0 * k + 1.0)));
            sum = sum.add(term);
            k += 1.0;
            if term.hi.abs() < 1e-36 * sum.hi.abs() || k > 24.0 {
                break;
            }
        }
        sum.mul_f64(sign)
    }
}

fn pow2(n: i32) -> f64 {
    f64::from_bits(((1023 + n.clamp(-1022, 1023)) as u64) << 52)
}
