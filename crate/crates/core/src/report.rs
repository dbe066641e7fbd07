//! Report records shared by every check and by the command-line front end.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::hp::HpFloat;

/// Outcome of a single check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesisNotMet,
    Informational,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::HypothesisNotMet => "hypothesis-not-met",
            Verdict::Informational => "informational",
        }
    }
}

/// One row of output. `margin` is `rhs - lhs` rendered at full precision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub params: BTreeMap<String, String>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub margin: Option<String>,
    pub verdict: Verdict,
}

impl CheckReport {
    pub fn new(check_name: impl Into<String>, verdict: Verdict) -> Self {
        CheckReport {
            check_name: check_name.into(),
            params: BTreeMap::new(),
            lhs: None,
            rhs: None,
            margin: None,
            verdict,
        }
    }

    /// A bare value with no comparison attached.
    pub fn value(check_name: impl Into<String>, value: String) -> Self {
        let mut r = CheckReport::new(check_name, Verdict::Informational);
        r.lhs = Some(value);
        r
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_comparison(mut self, cmp: &Comparison, digits: usize) -> Self {
        self.lhs = Some(cmp.lhs.to_decimal(digits));
        self.rhs = Some(cmp.rhs.to_decimal(digits));
        self.margin = Some(cmp.margin.to_decimal(digits));
        self
    }
}

/// `lhs <= rhs`, with the margin `rhs - lhs` kept for reporting.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub lhs: HpFloat,
    pub rhs: HpFloat,
    pub margin: HpFloat,
    pub holds: bool,
}

impl Comparison {
    pub fn le(lhs: HpFloat, rhs: HpFloat) -> Self {
        let margin = &rhs - &lhs;
        let holds = !margin.is_negative();
        Comparison {
            lhs,
            rhs,
            margin,
            holds,
        }
    }

    /// Strict `lhs < rhs`.
    pub fn lt(lhs: HpFloat, rhs: HpFloat) -> Self {
        let mut c = Comparison::le(lhs, rhs);
        c.holds = c.margin.is_positive();
        c
    }

    /// Decided exactly on rationals; the floats are for display only.
    pub fn le_exact(lhs: &BigRational, rhs: &BigRational, prec: u32) -> Self {
        let margin = rhs - lhs;
        Comparison {
            lhs: HpFloat::from_rational(lhs, prec),
            rhs: HpFloat::from_rational(rhs, prec),
            margin: HpFloat::from_rational(&margin, prec),
            holds: lhs <= rhs,
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.holds {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Decimal rendering of an exact rational, rounded half-up to `digits`
/// significant digits after the integer part. Terminating expansions that fit
/// are printed exactly, trailing zeros removed.
pub fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    if q.is_integer() {
        return q.numer().to_string();
    }
    let digits = digits.max(1);
    let neg = q.is_negative();
    let a = q.numer().abs();
    let b = q.denom().clone();
    let ten = BigInt::from(10);
    let ip = &a / &b;
    let scale = if ip.is_zero() {
        let mut z = 1;
        let mut t = &a * &ten;
        while t < b {
            t *= &ten;
            z += 1;
        }
        z + digits - 1
    } else {
        digits.saturating_sub(ip.to_string().len())
    };
    let scaled = &a * ten.pow(scale as u32);
    let m: BigInt = (scaled * 2 + &b) / (&b * 2);
    let mut body = m.to_string();
    if body.len() <= scale {
        body = "0".repeat(scale - body.len() + 1) + &body;
    }
    let (int_part, frac) = body.split_at(body.len() - scale);
    let frac = frac.trim_end_matches('0');
    let mut out = String::new();
    if neg && !(m.is_zero()) {
        out.push('-');
    }
    out.push_str(int_part);
    if !frac.is_empty() {
        out.push('.');
        out.push_str(frac);
    }
    out
}
