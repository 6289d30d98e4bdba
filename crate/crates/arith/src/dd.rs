//! Compensated double-double arithmetic (~106-bit mantissa).
//!
//! A value is an unevaluated sum `hi + lo` of two doubles with
//! `|lo| <= ulp(hi)/2`. The error-free transforms `two_sum` and `two_prod`
//! (the latter via fused multiply-add) make the basic operations accurate to
//! roughly 1e-31 relative error, which comfortably exceeds the 80-bit
//! precision the analytic layers need.
//!
//! Provided: arithmetic operators, square/cube/sixth roots by Newton
//! refinement from a double seed, small-argument `exp`, exact conversion
//! from big integers and big-integer ratios, and decimal-literal parsing.

use core::cmp::Ordering;
use core::ops::{Add, Div, Mul, Neg, Sub};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Double-double value `hi + lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact conversion from a machine integer (both halves exact).
    pub fn from_i64(x: i64) -> Dd {
        let hi = x as f64;
        // hi is within 2^11 of x, so the difference fits i64 exactly.
        let lo = (x - hi as i64) as f64;
        Dd::new(hi, lo)
    }

    pub fn from_u64(x: u64) -> Dd {
        let hi = x as f64;
        let lo = if hi as u64 >= x {
            -(((hi as u64) - x) as f64)
        } else {
            (x - hi as u64) as f64
        };
        Dd::new(hi, lo)
    }

    /// Conversion from a big integer, correct to double-double precision.
    pub fn from_bigint(x: &BigInt) -> Dd {
        let hi = x.to_f64().unwrap_or(f64::INFINITY);
        if !hi.is_finite() {
            return Dd::from_f64(hi);
        }
        // hi rounds x to 53 bits; the residual fits in a double again after
        // one more rounding, giving ~106 correct bits.
        let hi_int = big_from_f64(hi);
        let lo = (x - hi_int).to_f64().unwrap_or(0.0);
        Dd::new(hi, lo)
    }

    /// Conversion of an exact ratio `num / den`, `den != 0`.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Dd {
        debug_assert!(!den.is_zero(), "ratio denominator must be nonzero");
        // Scale so the integer quotient carries at least 120 significant
        // bits, then divide by the exact power of two.
        let shift = 128i64 + den.bits() as i64 - num.bits() as i64;
        let shift = shift.clamp(0, 4096) as u64;
        let q = (num << shift) / den;
        let d = Dd::from_bigint(&q);
        d * Dd::from_f64(2f64.powi(-(shift as i32)))
    }

    /// Parse a plain decimal literal such as `"-0.5772156649015328606065"`.
    ///
    /// Exact: the digits become an integer numerator over a power of ten.
    pub fn from_decimal(s: &str) -> Option<Dd> {
        let s = s.trim();
        let (neg, rest) = match s.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match rest.split_once('.') {
            Some((i, f)) => (i, f),
            None => (rest, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let mut digits = String::with_capacity(int_part.len() + frac_part.len());
        digits.push_str(int_part);
        digits.push_str(frac_part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let num: BigInt = digits.parse().ok()?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let v = Dd::from_ratio(&num, &den);
        Some(if neg { -v } else { v })
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    /// Integer power by binary exponentiation.
    pub fn powi(self, mut e: i32) -> Dd {
        if e == 0 {
            return Dd::ONE;
        }
        let inv = e < 0;
        e = e.abs();
        let mut base = self;
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        if inv {
            acc.recip()
        } else {
            acc
        }
    }

    /// Square root by one Newton step from the double seed.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative double-double");
        let s = self.hi.sqrt();
        let sd = Dd::from_f64(s);
        let e = (self - sd * sd).hi / (2.0 * s);
        Dd::new(s, e)
    }

    /// Cube root (sign-preserving) by one Newton step in double-double.
    pub fn cbrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        let neg = self.hi < 0.0;
        let a = self.abs();
        let y0 = Dd::from_f64(a.hi.cbrt());
        // y1 = y0 - (y0^3 - a) / (3 y0^2)
        let y2 = y0 * y0;
        let y = y0 - (y2 * y0 - a) / (Dd::from_f64(3.0) * y2);
        // One more step for full double-double accuracy.
        let y2 = y * y;
        let y = y - (y2 * y - a) / (Dd::from_f64(3.0) * y2);
        if neg {
            -y
        } else {
            y
        }
    }

    /// Sixth root of a nonnegative value.
    pub fn root6(self) -> Dd {
        self.cbrt().sqrt()
    }

    /// `exp(x)` for small arguments (|x| <= 0.1) by Taylor series; accurate
    /// to double-double precision there, which is all the tail-bound
    /// bracketing needs.
    pub fn exp_small(self) -> Dd {
        debug_assert!(self.hi.abs() <= 0.1, "exp_small domain is |x| <= 0.1");
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for k in 1..=24 {
            term = term * self / Dd::from_f64(k as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-35 {
                break;
            }
        }
        sum
    }
}

fn big_from_f64(x: f64) -> BigInt {
    // Exact: decompose the double into mantissa * 2^exp.
    debug_assert!(x.is_finite());
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e2) = if exp == 0 {
        (frac, -1074i64)
    } else {
        (frac | (1 << 52), exp - 1075)
    };
    let m = BigInt::from(mant) * sign;
    if e2 >= 0 {
        m << (e2 as u64)
    } else {
        m >> ((-e2) as u64)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let e = e + self.lo + rhs.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd::new(hi, lo + q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

/// Compensated running sum of double-double values.
#[derive(Debug, Clone, Copy, Default)]
pub struct DdSum {
    acc: f64,
    acc_lo: f64,
}

impl DdSum {
    pub fn new() -> DdSum {
        DdSum {
            acc: 0.0,
            acc_lo: 0.0,
        }
    }

    #[inline]
    pub fn add(&mut self, x: Dd) {
        let t = Dd::new(self.acc, self.acc_lo) + x;
        self.acc = t.hi;
        self.acc_lo = t.lo;
    }

    pub fn value(&self) -> Dd {
        Dd::new(self.acc, self.acc_lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_identities() {
        let a = Dd::from_decimal("0.1").unwrap();
        let b = Dd::from_decimal("0.2").unwrap();
        let c = a + b;
        let d = Dd::from_decimal("0.3").unwrap();
        assert!((c - d).to_f64().abs() < 1e-31);
    }

    #[test]
    fn sqrt_and_roots() {
        let two = Dd::from_f64(2.0);
        let r = two.sqrt();
        assert!((r * r - two).to_f64().abs() < 1e-30);
        let x = Dd::from_f64(10.0).powi(12);
        let s = x.root6();
        assert!((s - Dd::from_f64(100.0)).to_f64().abs() < 1e-25);
        let c = Dd::from_f64(-27.0).cbrt();
        assert!((c + Dd::from_f64(3.0)).to_f64().abs() < 1e-30);
    }

    #[test]
    fn ratio_conversion_precision() {
        // 1/3 to ~31 digits.
        let third = Dd::from_ratio(&BigInt::from(1), &BigInt::from(3));
        let err = (third * Dd::from_f64(3.0) - Dd::ONE).to_f64().abs();
        assert!(err < 1e-31, "1/3 reconstruction error {err}");
    }

    #[test]
    fn bigint_roundtrip() {
        let x: BigInt = "123456789012345678901234567890".parse().unwrap();
        let d = Dd::from_bigint(&x);
        let back = Dd::from_ratio(&x, &BigInt::from(1));
        assert!((d - back).to_f64().abs() <= d.to_f64().abs() * 1e-30);
    }

    #[test]
    fn exp_small_matches_f64() {
        for &t in &[1e-7f64, -3e-5, 0.05] {
            let e = Dd::from_f64(t).exp_small().to_f64();
            assert!((e - t.exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn powi_negative() {
        let x = Dd::from_f64(2.0).powi(-3);
        assert!((x.to_f64() - 0.125).abs() < 1e-30);
    }
}
