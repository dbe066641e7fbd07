//! Logarithms of binomial coefficients.
//!
//! Two independent routes: the exact one forms `C(a, b)` as a big integer and
//! takes a single logarithm; the gamma route sums Stirling series for
//! `ln Gamma`. [`log_binomial`] uses the exact route up to
//! [`EXACT_LIMIT`] and the gamma route beyond it.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hp::{self, HpFloat};

/// Largest `a` evaluated through the exact big-integer route.
pub const EXACT_LIMIT: u64 = 10_000;

const BERNOULLI_TERMS: usize = 80;

pub fn binomial(a: u64, b: u64) -> BigUint {
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

fn check(a: u64, b: u64) -> Result<()> {
    if b > a {
        return Err(Error::Domain(format!("log_binomial needs b <= a (got a = {a}, b = {b})")));
    }
    Ok(())
}

/// `ln C(a, b)` at `prec` bits.
pub fn log_binomial(a: u64, b: u64, prec: u32) -> Result<HpFloat> {
    if a <= EXACT_LIMIT {
        log_binomial_exact(a, b, prec)
    } else {
        log_binomial_gamma(a, b, prec)
    }
}

pub fn log_binomial_exact(a: u64, b: u64, prec: u32) -> Result<HpFloat> {
    check(a, b)?;
    let c = binomial(a, b);
    if c.is_one() {
        return Ok(HpFloat::zero(prec));
    }
    Ok(HpFloat::from_biguint(&c, prec + 32).ln().with_prec(prec))
}

pub fn log_binomial_gamma(a: u64, b: u64, prec: u32) -> Result<HpFloat> {
    check(a, b)?;
    if b == 0 || b == a {
        return Ok(HpFloat::zero(prec));
    }
    let wp = prec + 64 + (64 - a.leading_zeros());
    let v = log_factorial(a, wp) - log_factorial(b, wp) - log_factorial(a - b, wp);
    Ok(v.with_prec(prec))
}

/// `ln n! = ln Gamma(n + 1)` through the Stirling series, shifting small
/// arguments upward with an exact rising product.
pub fn log_factorial(n: u64, prec: u32) -> HpFloat {
    let wp = prec + 32;
    let z = n + 1;
    let z0 = (wp as u64) / 2 + 20;
    if z >= z0 {
        return ln_gamma_stirling(z, wp).with_prec(prec);
    }
    let mut rising = BigUint::one();
    for i in z..z0 {
        rising *= i;
    }
    let shifted = ln_gamma_stirling(z0, wp);
    (shifted - HpFloat::from_biguint(&rising, wp).ln()).with_prec(prec)
}

fn ln_gamma_stirling(z: u64, wp: u32) -> HpFloat {
    let zf = HpFloat::from_u64(z, wp);
    let half = HpFloat::from_ratio(&BigInt::one(), &BigInt::from(2), wp);
    let ln_z = zf.ln();
    let two_pi = hp::pi(wp).mul_pow2(1);
    let mut acc = (&zf - &half) * &ln_z - &zf + two_pi.ln().mul_pow2(-1);
    let z2 = &zf * &zf;
    let mut zpow = zf.clone();
    for (j, b) in bernoulli_even().iter().enumerate().skip(1) {
        // B_{2j} / (2j (2j-1) z^{2j-1})
        let j = j as i64;
        let coeff = b / BigRational::from_integer(BigInt::from(2 * j * (2 * j - 1)));
        let term = HpFloat::from_rational(&coeff, wp) / &zpow;
        acc = &acc + &term;
        if term.is_zero() || term.ilog2().unwrap() < acc.ilog2().unwrap() - wp as i64 - 4 {
            break;
        }
        zpow = &zpow * &z2;
    }
    acc
}

/// `B_0, B_2, B_4, ...` as exact rationals.
fn bernoulli_even() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = 2 * BERNOULLI_TERMS;
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
        b.push(BigRational::one());
        for m in 1..=n {
            let mut s = BigRational::zero();
            let mut c = BigInt::one(); // C(m+1, k)
            for (k, bk) in b.iter().enumerate() {
                s += bk * BigRational::from_integer(c.clone());
                c = c * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b.into_iter().step_by(2).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: &HpFloat, b: &HpFloat) -> f64 {
        if b.is_zero() {
            return a.abs().to_f64();
        }
        ((a - b) / b).abs().to_f64()
    }

    #[test]
    fn small_values() {
        let v = log_binomial(4, 2, 128).unwrap();
        let want = HpFloat::from_i64(6, 128).ln();
        assert!(rel_err(&v, &want) < 1e-35);
        for n in [0, 1, 7, 500] {
            assert!(log_binomial(n, 0, 128).unwrap().is_zero());
        }
        assert!(log_binomial(3, 4, 128).is_err());
    }

    #[test]
    fn bernoulli_known_values() {
        let b = bernoulli_even();
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(b[1], q(1, 6));
        assert_eq!(b[2], q(-1, 30));
        assert_eq!(b[3], q(1, 42));
        assert_eq!(b[6], q(691, 2730) * q(-1, 1));
    }

    #[test]
    fn gamma_route_matches_exact_at_2000_choose_1000() {
        let exact = log_binomial_exact(2000, 1000, 256).unwrap();
        let gamma = log_binomial_gamma(2000, 1000, 256).unwrap();
        assert!(rel_err(&gamma, &exact) < 1e-60, "{}", rel_err(&gamma, &exact));
    }

    #[test]
    fn log_factorial_small() {
        let lf = log_factorial(5, 200);
        let want = HpFloat::from_i64(120, 200).ln();
        assert!(rel_err(&lf, &want) < 1e-55);
        assert!(log_factorial(0, 200).abs() < HpFloat::from_f64(1e-55, 200));
    }

    #[test]
    fn large_arguments_are_finite() {
        let v = log_binomial(4_000_000_000, 2_000_000_000, 256).unwrap();
        // ln C(2m, m) ~ 2m ln 2 - ln(pi m)/2
        let approx = 4.0e9 * std::f64::consts::LN_2 - 0.5 * (std::f64::consts::PI * 2.0e9).ln();
        assert!((v.to_f64() - approx).abs() < 1e-3);
    }
}
