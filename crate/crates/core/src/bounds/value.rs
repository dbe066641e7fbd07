use crate::error::{Error, Result};
use crate::hp::HpFloat;

/// Natural logarithm of a bound, kept as the ordered list of terms it was
/// assembled from.
#[derive(Clone, Debug)]
pub struct BoundValue {
    pub log_value: HpFloat,
    pub precision_bits: u32,
    pub derivation: Vec<Term>,
}

#[derive(Clone, Debug)]
pub struct Term {
    pub label: &'static str,
    pub value: HpFloat,
}

impl BoundValue {
    /// `log_value` is the left-to-right sum of `terms`.
    pub fn from_terms(precision_bits: u32, terms: Vec<Term>) -> Self {
        let log_value = terms
            .iter()
            .fold(HpFloat::zero(precision_bits), |acc, t| acc + &t.value);
        BoundValue {
            log_value,
            precision_bits,
            derivation: terms,
        }
    }

    pub fn term(&self, label: &str) -> Option<&HpFloat> {
        self.derivation
            .iter()
            .find(|t| t.label == label)
            .map(|t| &t.value)
    }

    /// Re-sums the derivation and checks it against `log_value` within
    /// `2^(8 - precision_bits)` relative to `max(1, |log_value|)`.
    pub fn derivation_consistent(&self) -> bool {
        let resum = self
            .derivation
            .iter()
            .fold(HpFloat::zero(self.precision_bits), |acc, t| acc + &t.value);
        let diff = (&resum - &self.log_value).abs();
        let scale = self.log_value.abs().ilog2().unwrap_or(0).max(0);
        match diff.ilog2() {
            None => true,
            Some(e) => e <= scale + 8 - self.precision_bits as i64,
        }
    }
}

/// Parameters shared by the bound family.
#[derive(Clone, Debug)]
pub struct BoundParams {
    pub k: u64,
    pub l: u64,
    pub r: u32,
    pub c: f64,
    pub d: f64,
    pub a: f64,
}

impl BoundParams {
    pub fn new(k: u64, l: u64, r: u32) -> Result<Self> {
        let p = BoundParams {
            k,
            l,
            r,
            c: 1.0,
            d: 1.0,
            a: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 || self.l < 1 {
            return Err(Error::InvalidArgument("k and l must be >= 1".into()));
        }
        if self.r < 4 {
            return Err(Error::InvalidArgument("r must be >= 4".into()));
        }
        let finite_pos = |v: f64| v.is_finite() && v > 0.0;
        if !finite_pos(self.c) || !finite_pos(self.d) {
            return Err(Error::InvalidArgument("c and d must be finite and positive".into()));
        }
        if !(self.a.is_finite() && self.a >= 0.0) {
            return Err(Error::InvalidArgument("A must be finite and nonnegative".into()));
        }
        Ok(())
    }
}
