//! Arbitrary-precision binary floating point.
//!
//! An [`HpFloat`] is `mantissa * 2^exponent` where the mantissa is a signed
//! big integer holding exactly `prec` significant bits (or is zero). Every
//! operation rounds its result to the larger of its operands' precisions,
//! round-half-away-from-zero. Transcendentals (`ln`, `exp`) are evaluated at a
//! few dozen guard bits above the target and then rounded, which makes them
//! faithful but not always correctly rounded.
//!
//! The exponent is an `i64`, so magnitudes such as `1 / C(4e9, 2e9)` are
//! representable without overflow.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Smallest precision accepted by constructors.
pub const MIN_PREC: u32 = 16;

const GUARD: u32 = 32;

#[derive(Clone, Debug)]
pub struct HpFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn normalize(mant: BigInt, exp: i64, prec: u32) -> HpFloat {
    if mant.is_zero() {
        return HpFloat::zero(prec);
    }
    let bits = mant.bits() as i64;
    let target = prec as i64;
    if bits > target {
        let shift = (bits - target) as u64;
        let (sign, mag) = (mant.sign(), mant.magnitude().clone());
        let half = &mag >> (shift - 1);
        let mut rounded: BigUint = (half + 1u32) >> 1u32;
        let mut exp = exp + shift as i64;
        if rounded.bits() as i64 > target {
            rounded >>= 1u32;
            exp += 1;
        }
        HpFloat {
            mant: BigInt::from_biguint(sign, rounded),
            exp,
            prec,
        }
    } else {
        let shift = (target - bits) as u64;
        HpFloat {
            mant: mant << shift,
            exp: exp - shift as i64,
            prec,
        }
    }
}

impl HpFloat {
    pub fn zero(prec: u32) -> Self {
        HpFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec: prec.max(MIN_PREC),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        normalize(BigInt::from(v), 0, prec.max(MIN_PREC))
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        normalize(BigInt::from(v), 0, prec.max(MIN_PREC))
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        normalize(v.clone(), 0, prec.max(MIN_PREC))
    }

    pub fn from_biguint(v: &BigUint, prec: u32) -> Self {
        normalize(BigInt::from(v.clone()), 0, prec.max(MIN_PREC))
    }

    /// Nearest value to `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let wide = prec + GUARD;
        let q = Self::from_bigint(num, wide) / Self::from_bigint(den, wide);
        q.with_prec(prec)
    }

    pub fn from_rational(q: &num_rational::BigRational, prec: u32) -> Self {
        Self::from_ratio(q.numer(), q.denom(), prec)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let sign = bits >> 63;
        let exp_field = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp_field == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_field - 1075)
        };
        let m = if sign == 1 {
            -BigInt::from(m)
        } else {
            BigInt::from(m)
        };
        normalize(m, e, prec.max(MIN_PREC))
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        normalize(self.mant.clone(), self.exp, prec.max(MIN_PREC))
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        HpFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Exponent of the leading bit: `2^e <= |x| < 2^(e+1)`. `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64 - 1)
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        HpFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            let den = BigInt::one() << (-self.exp) as u64;
            self.mant.div_floor(&den)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (self.mant.abs() >> shift as u64).to_u64().unwrap_or(u64::MAX);
        let v = ldexp(top as f64, self.exp + shift);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative value");
        if self.is_zero() {
            return self.clone();
        }
        let want = 2 * (self.prec as i64 + 2);
        let mut shift = want - self.mant.bits() as i64;
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = if shift >= 0 {
            self.mant.magnitude() << shift as u64
        } else {
            self.mant.magnitude() >> (-shift) as u64
        };
        let root = m.sqrt();
        normalize(BigInt::from(root), (self.exp - shift) / 2, self.prec)
    }

    pub fn powi(&self, n: i64) -> Self {
        let wide = self.with_prec(self.prec + GUARD);
        let mut base = wide.clone();
        let mut acc = HpFloat::one(wide.prec);
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        if n < 0 {
            acc = HpFloat::one(wide.prec) / acc;
        }
        acc.with_prec(self.prec)
    }

    /// Natural logarithm. Panics on non-positive input.
    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "ln of non-positive value");
        let top = self.ilog2().expect("nonzero");
        let wp = self.prec + GUARD + 64;
        // m in [1, 2)
        let mut m = HpFloat {
            mant: self.mant.clone(),
            exp: -(self.mant.bits() as i64 - 1),
            prec: self.prec,
        }
        .with_prec(wp);
        let mut e = top;
        // move m into [2/3, 4/3]
        if m > HpFloat::from_ratio(&BigInt::from(4), &BigInt::from(3), 32) {
            m = m.mul_pow2(-1);
            e += 1;
        }
        let one = HpFloat::one(wp);
        let t = (&m - &one) / (&m + &one);
        let mut acc = atanh_series(&t).mul_pow2(1);
        if e != 0 {
            acc = acc + ln2(wp) * HpFloat::from_i64(e, wp);
        }
        acc.with_prec(self.prec)
    }

    pub fn exp(&self) -> Self {
        if self.is_zero() {
            return HpFloat::one(self.prec);
        }
        let approx = self.to_f64() / std::f64::consts::LN_2;
        assert!(approx.abs() < 4.0e18, "exp argument out of range");
        let n = approx.round() as i64;
        let n_bits = 64 - n.unsigned_abs().leading_zeros();
        let wp = self.prec + GUARD + n_bits + 16;
        let x = self.with_prec(wp);
        let r = if n == 0 {
            x
        } else {
            x - ln2(wp) * HpFloat::from_i64(n, wp)
        };
        let squarings = 12u32;
        let r = r.mul_pow2(-(squarings as i64));
        let mut sum = HpFloat::one(wp);
        let mut term = HpFloat::one(wp);
        let mut i = 1i64;
        loop {
            term = &(&term * &r) / &HpFloat::from_i64(i, wp);
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
            if term.ilog2().unwrap() < sum.ilog2().unwrap() - wp as i64 - 2 {
                break;
            }
            i += 1;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum.mul_pow2(n).with_prec(self.prec)
    }

    /// Decimal rendering with `digits` significant digits.
    ///
    /// Values whose decimal exponent lies in `[-6, 30)` print positionally,
    /// everything else in `d.ddd…e±X` form.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let (e10, scaled) = self.decimal_digits(digits);
        let mut s = scaled.to_string();
        // rounding may leave trailing zeros; trim them (keep at least one digit)
        while s.len() > 1 && s.ends_with('0') {
            s.pop();
        }
        let sign = if self.is_negative() { "-" } else { "" };
        if (-6..30).contains(&e10) {
            let point = e10 + 1;
            if point <= 0 {
                format!("{sign}0.{}{s}", "0".repeat((-point) as usize))
            } else if point as usize >= s.len() {
                format!("{sign}{s}{}", "0".repeat(point as usize - s.len()))
            } else {
                let (a, b) = s.split_at(point as usize);
                format!("{sign}{a}.{b}")
            }
        } else if s.len() == 1 {
            format!("{sign}{s}e{e10}")
        } else {
            let (a, b) = s.split_at(1);
            format!("{sign}{a}.{b}e{e10}")
        }
    }

    /// Returns `(e10, m)` with `m` having exactly `digits` decimal digits and
    /// `|x| ~= m * 10^(e10 - digits + 1)`.
    fn decimal_digits(&self, digits: usize) -> (i64, BigUint) {
        let top = self.ilog2().unwrap();
        if top.abs() < 1 << 20 {
            let mut e10 = (top as f64 * std::f64::consts::LOG10_2).floor() as i64;
            loop {
                let m = self.scaled_round(digits as i64 - 1 - e10);
                let len = m.to_string().len();
                if len > digits {
                    e10 += 1;
                } else if len < digits {
                    e10 -= 1;
                } else {
                    return (e10, m);
                }
            }
        }
        // enormous magnitudes: go through log10
        let wp = self.prec + GUARD + 64;
        let x = self.abs().with_prec(wp);
        let ln10 = HpFloat::from_i64(10, wp).ln();
        let l = x.ln() / ln10.clone();
        let e10 = l.floor();
        let frac = l - HpFloat::from_bigint(&e10, wp);
        let mant = (frac * ln10).exp();
        let pow = HpFloat::from_bigint(&BigInt::from(10u32).pow(digits as u32 - 1), wp);
        let m = (mant * pow + HpFloat::from_ratio(&BigInt::one(), &BigInt::from(2), wp)).floor();
        let e10 = e10.to_i64().expect("decimal exponent fits i64");
        let m = m.magnitude().clone();
        if m.to_string().len() > digits {
            (e10 + 1, m / 10u32)
        } else {
            (e10, m)
        }
    }

    fn scaled_round(&self, k: i64) -> BigUint {
        let mut num: BigUint = self.mant.magnitude().clone();
        let mut den = BigUint::one();
        if k >= 0 {
            num *= BigUint::from(10u32).pow(k as u32);
        } else {
            den *= BigUint::from(10u32).pow((-k) as u32);
        }
        if self.exp >= 0 {
            num <<= self.exp as u64;
        } else {
            den <<= (-self.exp) as u64;
        }
        (num * 2u32 + &den) / (den * 2u32)
    }

    /// Digits needed to show `prec` bits.
    pub fn decimal_digits_for(prec: u32) -> usize {
        ((prec as f64) * std::f64::consts::LOG10_2).ceil() as usize
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// `atanh(t) = t + t^3/3 + t^5/5 + ...` for small `|t|`.
fn atanh_series(t: &HpFloat) -> HpFloat {
    let wp = t.prec;
    if t.is_zero() {
        return HpFloat::zero(wp);
    }
    let t2 = t * t;
    let mut power = t.clone();
    let mut acc = t.clone();
    let mut k = 1i64;
    loop {
        power = &power * &t2;
        if power.is_zero() {
            break;
        }
        let term = &power / &HpFloat::from_i64(2 * k + 1, wp);
        acc = &acc + &term;
        if term.ilog2().unwrap() < acc.ilog2().unwrap_or(0) - wp as i64 - 2 {
            break;
        }
        k += 1;
    }
    acc
}

/// `atan(1/q)` for an integer `q >= 2`.
fn atan_inv(q: i64, wp: u32) -> HpFloat {
    let x = HpFloat::from_ratio(&BigInt::one(), &BigInt::from(q), wp);
    let x2 = &x * &x;
    let mut power = x.clone();
    let mut acc = x;
    let mut k = 1i64;
    loop {
        power = &power * &x2;
        let term = &power / &HpFloat::from_i64(2 * k + 1, wp);
        acc = if k % 2 == 1 { &acc - &term } else { &acc + &term };
        if term.ilog2().unwrap() < acc.ilog2().unwrap() - wp as i64 - 2 {
            break;
        }
        k += 1;
    }
    acc
}

type ConstCache = Mutex<HashMap<u32, HpFloat>>;

fn cached(cache: &'static OnceLock<ConstCache>, prec: u32, f: impl FnOnce(u32) -> HpFloat) -> HpFloat {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().unwrap().get(&prec) {
        return v.clone();
    }
    let v = f(prec + GUARD).with_prec(prec);
    map.lock().unwrap().insert(prec, v.clone());
    v
}

/// `ln 2` at the given precision.
pub fn ln2(prec: u32) -> HpFloat {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    cached(&CACHE, prec, |wp| {
        let third = HpFloat::from_ratio(&BigInt::one(), &BigInt::from(3), wp);
        atanh_series(&third).mul_pow2(1)
    })
}

/// `pi` at the given precision (Machin's formula).
pub fn pi(prec: u32) -> HpFloat {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    cached(&CACHE, prec, |wp| {
        atan_inv(5, wp).mul_pow2(4) - atan_inv(239, wp).mul_pow2(2)
    })
}

fn add_impl(a: &HpFloat, b: &HpFloat, negate_b: bool) -> HpFloat {
    let prec = a.prec.max(b.prec);
    let bm = if negate_b { -b.mant.clone() } else { b.mant.clone() };
    if a.is_zero() {
        return normalize(bm, b.exp, prec);
    }
    if b.is_zero() {
        return normalize(a.mant.clone(), a.exp, prec);
    }
    let (hi_m, hi_e, lo_m, lo_e) = if a.exp >= b.exp {
        (a.mant.clone(), a.exp, bm, b.exp)
    } else {
        (bm, b.exp, a.mant.clone(), a.exp)
    };
    let diff = (hi_e - lo_e) as u64;
    let hi_top = hi_e + hi_m.bits() as i64;
    let lo_top = lo_e + lo_m.bits() as i64;
    if hi_top - lo_top > prec as i64 + 4 {
        // the smaller operand sits entirely below the rounding position
        let sticky = if lo_m.is_negative() { -1 } else { 1 };
        let wide = (hi_m << (prec as u64 + 8)) + BigInt::from(sticky);
        return normalize(wide, hi_e - (prec as i64 + 8), prec);
    }
    if lo_top - hi_top > prec as i64 + 4 {
        let sticky = if hi_m.is_negative() { -1 } else { 1 };
        let wide = (lo_m << (prec as u64 + 8)) + BigInt::from(sticky);
        return normalize(wide, lo_e - (prec as i64 + 8), prec);
    }
    normalize((hi_m << diff) + lo_m, lo_e, prec)
}

fn mul_impl(a: &HpFloat, b: &HpFloat) -> HpFloat {
    let prec = a.prec.max(b.prec);
    normalize(&a.mant * &b.mant, a.exp + b.exp, prec)
}

fn div_impl(a: &HpFloat, b: &HpFloat) -> HpFloat {
    assert!(!b.is_zero(), "division by zero");
    let prec = a.prec.max(b.prec);
    if a.is_zero() {
        return HpFloat::zero(prec);
    }
    let shift = (prec as i64 + 4 + b.mant.bits() as i64 - a.mant.bits() as i64).max(0);
    let num = &a.mant << shift as u64;
    let (q, r) = num.div_rem(&b.mant);
    // sticky bit keeps round-half decisions honest
    let q = (q << 1u32) + if r.is_zero() { BigInt::zero() } else { BigInt::from(q_sign(&a.mant, &b.mant)) };
    normalize(q, a.exp - shift - b.exp - 1, prec)
}

fn q_sign(a: &BigInt, b: &BigInt) -> i32 {
    if a.is_negative() == b.is_negative() {
        1
    } else {
        -1
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&HpFloat> for &HpFloat {
            type Output = HpFloat;
            fn $m(self, rhs: &HpFloat) -> HpFloat {
                $body(self, rhs)
            }
        }
        impl $tr<HpFloat> for HpFloat {
            type Output = HpFloat;
            fn $m(self, rhs: HpFloat) -> HpFloat {
                $body(&self, &rhs)
            }
        }
        impl $tr<&HpFloat> for HpFloat {
            type Output = HpFloat;
            fn $m(self, rhs: &HpFloat) -> HpFloat {
                $body(&self, rhs)
            }
        }
        impl $tr<HpFloat> for &HpFloat {
            type Output = HpFloat;
            fn $m(self, rhs: HpFloat) -> HpFloat {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| add_impl(a, b, false));
binop!(Sub, sub, |a, b| add_impl(a, b, true));
binop!(Mul, mul, mul_impl);
binop!(Div, div, div_impl);

impl Neg for HpFloat {
    type Output = HpFloat;
    fn neg(self) -> HpFloat {
        HpFloat {
            mant: -self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Neg for &HpFloat {
    type Output = HpFloat;
    fn neg(self) -> HpFloat {
        -self.clone()
    }
}

impl PartialEq for HpFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HpFloat {}

impl PartialOrd for HpFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HpFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let ta = self.ilog2().unwrap();
        let tb = other.ilog2().unwrap();
        let mag = if ta != tb {
            ta.cmp(&tb)
        } else {
            let e = self.exp.min(other.exp);
            let a = self.mant.magnitude() << (self.exp - e) as u64;
            let b = other.mant.magnitude() << (other.exp - e) as u64;
            a.cmp(&b)
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl fmt::Display for HpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or_else(|| HpFloat::decimal_digits_for(self.prec));
        f.write_str(&self.to_decimal(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn close(a: &HpFloat, b: &HpFloat, rel_bits: i64) -> bool {
        let d = (a - b).abs();
        match (d.ilog2(), b.ilog2()) {
            (None, _) => true,
            (Some(dl), Some(bl)) => dl <= bl - rel_bits,
            (Some(_), None) => false,
        }
    }

    #[test]
    fn ln2_digits() {
        // 50 digits of ln 2
        let s = ln2(P).to_decimal(50);
        assert_eq!(s, "0.69314718055994530941723212145817656807550013436026");
    }

    #[test]
    fn pi_digits() {
        let s = pi(P).to_decimal(50);
        assert_eq!(s, "3.1415926535897932384626433832795028841971693993751");
    }

    #[test]
    fn exp_ln_roundtrip() {
        for v in [1e-30, 0.5, 1.0, 3.75, 1234.5, 2.0e9, 7.0e15] {
            let x = HpFloat::from_f64(v, P);
            let back = x.ln().exp();
            assert!(close(&back, &x, 240), "{v}: {back}");
        }
    }

    #[test]
    fn exp_of_large_negative_is_representable() {
        let x = HpFloat::from_f64(-2.7e9, P);
        let y = x.exp();
        assert!(y.is_positive());
        let back = y.ln();
        assert!(close(&back, &x, 220));
    }

    #[test]
    fn e_digits() {
        let e = HpFloat::one(P).exp();
        assert_eq!(e.to_decimal(40), "2.718281828459045235360287471352662497757");
    }

    #[test]
    fn sqrt_two() {
        let s = HpFloat::from_i64(2, P).sqrt();
        assert_eq!(s.to_decimal(40), "1.41421356237309504880168872420969807857");
        let sq = &s * &s;
        assert!(close(&sq, &HpFloat::from_i64(2, P), 250));
    }

    #[test]
    fn ordering_and_signs() {
        let a = HpFloat::from_f64(-1.5, P);
        let b = HpFloat::from_f64(0.25, P);
        assert!(a < b);
        assert!(-&a > b);
        assert_eq!((&a + &HpFloat::from_f64(1.5, P)).signum(), 0);
        assert_eq!(HpFloat::from_f64(-2.5, P).floor(), BigInt::from(-3));
    }

    #[test]
    fn ratio_and_decimal() {
        let third = HpFloat::from_ratio(&BigInt::from(1), &BigInt::from(3), P);
        assert_eq!(third.to_decimal(10), "0.3333333333");
        let big = HpFloat::from_f64(6.02214076e23, P);
        assert_eq!(big.to_decimal(9), "602214076000000000000000");
        let tiny = HpFloat::from_f64(1.5e-40, 128);
        assert_eq!(tiny.to_decimal(3), "1.5e-40");
        let huge = HpFloat::from_f64(-1e6, P).exp();
        assert!(huge.to_decimal(12).ends_with("e-434295"), "{}", huge.to_decimal(12));
    }

    #[test]
    fn to_f64_matches() {
        for v in [1.0, -3.25, 1e-300, 6.5e200, 0.1] {
            assert_eq!(HpFloat::from_f64(v, P).to_f64(), v);
        }
    }
}
