//! Exact integer primitives shared by the rest of the workspace.
//!
//! Provides:
//! * [`ExactInt`], an arbitrary-precision signed integer (re-export of
//!   `num_bigint::BigInt`), comfortable far beyond 10^160;
//! * [`factorize`] / [`Factorization`]: trial-division factorization with a
//!   configurable prime bound and exact perfect-power handling of the
//!   remaining cofactor;
//! * [`valuation`], [`moebius`], [`kronecker`], [`kfree_split`],
//!   [`squarefree_count`];
//! * deterministic 64-bit primality testing and small prime sieves;
//! * [`dd`], compensated double-double floating point (~106-bit mantissa)
//!   for the analytic layers.
//!
//! Everything in this crate other than `dd` is exact: no floating point is
//! involved in any integer result.

pub mod dd;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision signed integer used across the workspace.
pub type ExactInt = BigInt;

/// Default trial-division bound for [`factorize`].
pub const DEFAULT_TRIAL_BOUND: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    /// The requested operation is undefined for zero input.
    #[error("{0} is undefined for zero input")]
    ZeroInput(&'static str),
    /// A complete factorization was required but a cofactor resisted the
    /// trial bound. Callers must treat this as failure, never guess.
    #[error("incomplete factorization: unfactored cofactor {cofactor}")]
    UnfactoredCofactor { cofactor: ExactInt },
    /// Argument outside the documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Result of [`factorize`]: `n = sign * prod(p_i^e_i) * unfactored_cofactor`.
///
/// Invariants: the primes `p_i` are strictly increasing, every exponent is
/// at least 1, and `unfactored_cofactor` is either 1 or has no prime factor
/// at or below the trial bound used to produce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// True when the factored integer was negative.
    pub negative: bool,
    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub factors: Vec<(ExactInt, u32)>,
    /// 1 when the factorization is complete.
    pub unfactored_cofactor: ExactInt,
}

impl Factorization {
    /// True when no unfactored part remains.
    pub fn is_complete(&self) -> bool {
        self.unfactored_cofactor.is_one()
    }

    /// Reconstruct the (signed) input integer.
    pub fn product(&self) -> ExactInt {
        let mut acc = self.unfactored_cofactor.clone();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        if self.negative {
            -acc
        } else {
            acc
        }
    }

    /// Exponent of `p` among the recorded factors (0 when absent).
    pub fn exponent_of(&self, p: &ExactInt) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }
}

/// Factorize `n` by trial division up to [`DEFAULT_TRIAL_BOUND`].
pub fn factorize(n: &ExactInt) -> Result<Factorization, ArithError> {
    factorize_with(n, DEFAULT_TRIAL_BOUND)
}

/// Factorize `n` by trial division up to `trial_bound`, then reduce the
/// remaining cofactor with exact perfect-power detection.
///
/// A cofactor `c > 1` left after trial division has no prime factor at or
/// below the bound. If `c = d^k` with `k` maximal and `d <= trial_bound^2`,
/// then `d` is certified prime (a composite `d` would need a factor at most
/// `sqrt(d) <= trial_bound`, all of which were removed) and `(d, k)` is
/// recorded; otherwise `c` is surfaced as `unfactored_cofactor`.
pub fn factorize_with(n: &ExactInt, trial_bound: u64) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput("factorize"));
    }
    let negative = n.is_negative();
    let mut rest = n.abs();
    let mut factors: Vec<(ExactInt, u32)> = Vec::new();

    let mut push = |p: u64, e: u32, factors: &mut Vec<(ExactInt, u32)>| {
        factors.push((ExactInt::from(p), e));
    };

    // Small primes first, then the 6k+-1 wheel.
    for p in [2u64, 3] {
        if p > trial_bound {
            break;
        }
        let mut e = 0u32;
        let pb = ExactInt::from(p);
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            push(p, e, &mut factors);
        }
    }
    let mut p = 5u64;
    while p <= trial_bound {
        // Stop early once p^2 exceeds the remainder: the rest is 1 or prime.
        if ExactInt::from(p) * ExactInt::from(p) > rest {
            break;
        }
        for q in [p, p + 2] {
            if q > trial_bound {
                break;
            }
            let qb = ExactInt::from(q);
            if (&rest % &qb).is_zero() {
                let mut e = 0u32;
                while (&rest % &qb).is_zero() {
                    rest /= &qb;
                    e += 1;
                }
                push(q, e, &mut factors);
            }
        }
        p += 6;
    }

    let mut unfactored = ExactInt::one();
    if !rest.is_one() {
        let certified = ExactInt::from(trial_bound) * ExactInt::from(trial_bound);
        // Exact perfect-power reduction: find the largest k with rest = d^k.
        let bits = rest.bits();
        let mut reduced = false;
        let mut k = if bits > 1 { (bits + 1) as u32 } else { 2 };
        while k >= 2 {
            let d = rest.nth_root(k);
            if d.pow(k) == rest {
                if d <= certified {
                    factors.push((d, k));
                    reduced = true;
                }
                break;
            }
            k -= 1;
        }
        if !reduced {
            if rest <= certified {
                factors.push((rest, 1));
            } else {
                unfactored = rest;
            }
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    debug_assert!(
        factors.windows(2).all(|w| w[0].0 < w[1].0),
        "factor list must be strictly increasing"
    );
    Ok(Factorization {
        negative,
        factors,
        unfactored_cofactor: unfactored,
    })
}

/// p-adic valuation of `n` (the exponent of the exact power of `p` dividing
/// `n`). Errors on `n = 0`, where the valuation is not finite.
pub fn valuation(n: &ExactInt, p: &ExactInt) -> Result<u32, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput("valuation"));
    }
    if p < &ExactInt::from(2) {
        return Err(ArithError::InvalidArgument(format!(
            "valuation base must be at least 2, got {p}"
        )));
    }
    let mut v = 0u32;
    let mut rest = n.abs();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            break;
        }
        rest = q;
        v += 1;
    }
    Ok(v)
}

/// Convenience valuation for machine-size inputs.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Moebius function of `n >= 1`: 0 when a square divides `n`, otherwise
/// `(-1)^(number of prime factors)`.
///
/// Complete for all of `u64`: after trial division the remaining cofactor is
/// classified exactly (1, a prime, a prime square, or a product of two
/// distinct primes) using a square test and a deterministic primality test.
pub fn moebius(n: u64) -> Result<i8, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroInput("moebius"));
    }
    let mut rest = n;
    let mut omega = 0u32;
    let mut d = 2u64;
    while d <= 10_000_000 && d * d <= rest {
        if rest % d == 0 {
            rest /= d;
            if rest % d == 0 {
                return Ok(0);
            }
            omega += 1;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if rest <= 100_000_000_000_000 {
            // Trial division reached sqrt(rest), so the cofactor is prime.
            omega += 1;
        } else {
            let r = rest.sqrt();
            if r * r == rest {
                return Ok(0);
            }
            if is_prime_u64(rest) {
                omega += 1;
            } else {
                // No factor below 10^7, not a square, not prime: the
                // cofactor is a product of two distinct primes.
                omega += 2;
            }
        }
    }
    Ok(if omega % 2 == 0 { 1 } else { -1 })
}

/// Kronecker symbol `(a | n)` in full generality, including `n <= 0` and
/// even `n`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    // (a | 0) is 1 exactly for a = +-1.
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result: i8 = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // Factor out twos from n using the supplementary law at 2.
    let table2 = |a: i128| -> i8 {
        match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        }
    };
    let mut twos = 0u32;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 {
            result *= table2(a);
        }
    }
    // Now n is odd and positive: Jacobi with quadratic reciprocity.
    a = a.rem_euclid(n);
    while a != 0 {
        let mut t = 0u32;
        while a % 2 == 0 {
            a /= 2;
            t += 1;
        }
        if t % 2 == 1 {
            result *= table2(n);
        }
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Split `n >= 1` as `n = e^k * n0` with `e` maximal, so `n0` is k-power
/// free. Requires a complete factorization; an unfactored cofactor is
/// surfaced as an error instead of guessing.
pub fn kfree_split(n: &ExactInt, k: u32) -> Result<(ExactInt, ExactInt), ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput("kfree_split"));
    }
    if n.is_negative() || k < 2 {
        return Err(ArithError::InvalidArgument(format!(
            "kfree_split needs n >= 1 and k >= 2, got n = {n}, k = {k}"
        )));
    }
    let fac = factorize(n)?;
    if !fac.is_complete() {
        return Err(ArithError::UnfactoredCofactor {
            cofactor: fac.unfactored_cofactor,
        });
    }
    let mut e = ExactInt::one();
    let mut n0 = ExactInt::one();
    for (p, v) in &fac.factors {
        e *= p.pow(v / k);
        n0 *= p.pow(v % k);
    }
    Ok((e, n0))
}

/// Number of squarefree integers in `[1, x]`, by the Moebius identity
/// `K(x) = sum_{d <= sqrt x} mu(d) floor(x / d^2)` with a segmented Moebius
/// sieve over `d`.
pub fn squarefree_count(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let dmax = x.sqrt();
    let base_primes = primes_up_to(dmax.sqrt().max(2));
    let mut total: i64 = 0;
    const SEG: u64 = 1 << 20;
    let mut lo = 1u64;
    while lo <= dmax {
        let hi = (lo + SEG - 1).min(dmax);
        let len = (hi - lo + 1) as usize;
        let mut mu = vec![1i8; len];
        let mut rem = vec![0u64; len];
        for (i, r) in rem.iter_mut().enumerate() {
            *r = lo + i as u64;
        }
        for &p in &base_primes {
            if p * p > hi {
                break;
            }
            let p2 = p * p;
            let mut m = lo.div_ceil(p2) * p2;
            while m <= hi {
                mu[(m - lo) as usize] = 0;
                m += p2;
            }
            let mut m = lo.div_ceil(p) * p;
            while m <= hi {
                let i = (m - lo) as usize;
                if mu[i] != 0 {
                    mu[i] = -mu[i];
                    while rem[i] % p == 0 {
                        rem[i] /= p;
                    }
                }
                m += p;
            }
        }
        for i in 0..len {
            if mu[i] != 0 {
                // A leftover part > 1 is a single prime factor beyond the
                // base sieve.
                let m = if rem[i] > 1 { -mu[i] } else { mu[i] };
                let d = lo + i as u64;
                total += m as i64 * (x / (d * d)) as i64;
            }
        }
        lo = hi + 1;
    }
    debug_assert!(total >= 0, "squarefree count must be nonnegative");
    total as u64
}

/// Deterministic Miller-Rabin for `u64` (exact for the full range).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes up to `n` inclusive (simple bit sieve).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if !comp[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                comp[m] = true;
                m += p;
            }
        }
    }
    out
}

/// Smallest-prime-factor table for `0..=n`; `spf[0] = spf[1] = 0`.
///
/// Used by the census layers to factor common-factor values quickly.
pub fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut m = i;
            while m <= n {
                if spf[m] == 0 {
                    spf[m] = i as u32;
                }
                m += i;
            }
        }
    }
    spf
}

/// Greatest common divisor of two machine integers.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Floor of the sixth root of a nonnegative big integer.
pub fn floor_sixth_root(x: &ExactInt) -> ExactInt {
    debug_assert!(!x.is_negative());
    x.nth_root(6)
}

/// Convert to u64 if it fits.
pub fn to_u64(x: &ExactInt) -> Option<u64> {
    x.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fac_pairs(n: i64) -> Vec<(u64, u32)> {
        let f = factorize(&ExactInt::from(n)).unwrap();
        assert!(f.is_complete());
        f.factors
            .iter()
            .map(|(p, e)| (p.to_u64().unwrap(), *e))
            .collect()
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(fac_pairs(26364), vec![(2, 2), (3, 1), (13, 3)]);
        let one = factorize(&ExactInt::one()).unwrap();
        assert!(one.factors.is_empty() && one.is_complete());
        // -918330048 = -(2^6 * 3^15); reconstructs 27 * 5832^2.
        let f = factorize(&ExactInt::from(-918330048i64)).unwrap();
        assert!(f.negative);
        assert_eq!(
            f.factors,
            vec![(ExactInt::from(2), 6), (ExactInt::from(3), 15)]
        );
        assert_eq!(f.product(), ExactInt::from(-918330048i64));
        assert_eq!(
            ExactInt::from(27) * ExactInt::from(5832).pow(2),
            ExactInt::from(918330048i64)
        );
    }

    #[test]
    fn factorize_zero_is_domain_error() {
        assert_eq!(
            factorize(&ExactInt::zero()),
            Err(ArithError::ZeroInput("factorize"))
        );
    }

    #[test]
    fn factorize_perfect_power_cofactor() {
        // p^2 for a prime above the trial bound but below its square:
        // found via the power check, root certified prime.
        let p = ExactInt::from(10_000_019u64);
        let f = factorize_with(&(&p * &p), 10_000).unwrap();
        assert_eq!(f.factors, vec![(p, 2)]);
        assert!(f.is_complete());
    }

    #[test]
    fn factorize_leaves_hard_cofactor() {
        // Two distinct large primes: must stay unfactored, never guessed.
        let p = ExactInt::from(1_000_003u64);
        let q = ExactInt::from(1_000_033u64);
        let f = factorize_with(&(&p * &q), 1000).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.unfactored_cofactor, p * q);
    }

    #[test]
    fn valuation_examples() {
        let v = |n: i64, p: u32| valuation(&ExactInt::from(n), &ExactInt::from(p)).unwrap();
        assert_eq!(v(5832, 3), 6);
        assert_eq!(v(7, 2), 0);
        assert_eq!(v(-324, 3), 4);
        assert!(valuation(&ExactInt::zero(), &ExactInt::from(2)).is_err());
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(1).unwrap(), 1);
        assert_eq!(moebius(6).unwrap(), 1);
        assert_eq!(moebius(12).unwrap(), 0);
        assert_eq!(moebius(30).unwrap(), -1);
        assert!(moebius(0).is_err());
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(13, 3), 1);
        assert_eq!(kronecker(-1, 5), 1);
        assert_eq!(kronecker(2, 3), -1);
        // Even and nonpositive second arguments.
        assert_eq!(kronecker(3, 8), -1);
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(2, 0), 0);
        // (-3 | -5) = (-3 | -1) * (-3 | 5) = (-1) * (-1) = 1.
        assert_eq!(kronecker(-3, -5), 1);
        assert_eq!(kronecker(5, -1), 1);
        assert_eq!(kronecker(-5, -1), -1);
    }

    #[test]
    fn kfree_split_examples() {
        let s = |n: i64, k: u32| {
            let (e, n0) = kfree_split(&ExactInt::from(n), k).unwrap();
            (e.to_i64().unwrap(), n0.to_i64().unwrap())
        };
        assert_eq!(s(72, 3), (2, 9));
        assert_eq!(s(1, 2), (1, 1));
        assert_eq!(s(117, 3), (1, 117));
    }

    #[test]
    fn kfree_split_unfactored_is_error() {
        // Force an unfactored cofactor through the default bound by a
        // product of two 9-digit primes.
        let p = ExactInt::from(1_000_000_007u64);
        let q = ExactInt::from(1_000_000_009u64);
        let n = p * q;
        match kfree_split(&n, 2) {
            Err(ArithError::UnfactoredCofactor { cofactor }) => assert_eq!(cofactor, n),
            other => panic!("expected unfactored error, got {other:?}"),
        }
    }

    #[test]
    fn squarefree_count_examples() {
        assert_eq!(squarefree_count(1), 1);
        assert_eq!(squarefree_count(10), 7);
        assert_eq!(squarefree_count(100), 61);
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561));
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn spf_table_consistency() {
        let spf = smallest_prime_factors(1000);
        for i in 2..=1000usize {
            let p = spf[i] as usize;
            assert!(p >= 2 && i % p == 0);
            for q in 2..p {
                assert!(i % q != 0);
            }
        }
    }
}
