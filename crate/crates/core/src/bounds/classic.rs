//! The upper-bound family: Erdős–Szekeres, Graham–Rödl, Thomason and the
//! `r^{c r^2} exp(-phi_r) C(k+l, k)` bound, plus the exact recurrence table.

use std::collections::BTreeMap;

use crate::bounds::binom::log_binomial;
use crate::bounds::smooth::phi;
use crate::bounds::value::{BoundValue, Term};
use crate::error::{Error, Result};
use crate::hp::HpFloat;

pub const LOG_BINOMIAL: &str = "log C(k+l, k)";

fn check_kl(k: u64, l: u64) -> Result<()> {
    if k < 1 || l < 1 {
        return Err(Error::InvalidArgument(format!("k, l must be >= 1 (got {k}, {l})")));
    }
    Ok(())
}

fn log_choose(k: u64, l: u64, prec: u32) -> Result<HpFloat> {
    log_binomial(k + l, k, prec)
}

/// `r(k+1, l+1) <= C(k+l, k)`.
pub fn es_bound(k: u64, l: u64, prec: u32) -> Result<BoundValue> {
    check_kl(k, l)?;
    Ok(BoundValue::from_terms(
        prec,
        vec![Term {
            label: LOG_BINOMIAL,
            value: log_choose(k, l, prec)?,
        }],
    ))
}

/// `6 C(k+l, k) / ln ln(k+l)`.
pub fn graham_rodl_bound(k: u64, l: u64, prec: u32) -> Result<BoundValue> {
    check_kl(k, l)?;
    let wp = prec + 32;
    let s = HpFloat::from_u64(k + l, wp);
    let lnln = s.ln().ln();
    if !lnln.is_positive() {
        return Err(Error::Domain(format!(
            "ln ln(k+l) must be positive (k + l = {})",
            k + l
        )));
    }
    Ok(BoundValue::from_terms(
        prec,
        vec![
            Term {
                label: "ln 6",
                value: HpFloat::from_i64(6, prec).ln(),
            },
            Term {
                label: LOG_BINOMIAL,
                value: log_choose(k, l, prec)?,
            },
            Term {
                label: "-ln ln ln(k+l)",
                value: (-lnln.ln()).with_prec(prec),
            },
        ],
    ))
}

/// `exp(-(l/2k) ln k + A sqrt(ln k)) C(k+l, k)` for `k >= l`.
pub fn thomason_bound(k: u64, l: u64, a: f64, prec: u32) -> Result<BoundValue> {
    check_kl(k, l)?;
    if k < l || k < 2 {
        return Err(Error::Domain(format!("Thomason's bound needs k >= l and k >= 2 (got {k}, {l})")));
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidArgument("A must be finite and nonnegative".into()));
    }
    let ln_k = HpFloat::from_u64(k, prec).ln();
    let ratio = HpFloat::from_u64(l, prec) / HpFloat::from_u64(2 * k, prec);
    let a = HpFloat::from_f64(a, prec);
    Ok(BoundValue::from_terms(
        prec,
        vec![
            Term {
                label: LOG_BINOMIAL,
                value: log_choose(k, l, prec)?,
            },
            Term {
                label: "-(l/2k) ln k",
                value: -(ratio * &ln_k),
            },
            Term {
                label: "A sqrt(ln k)",
                value: a * ln_k.sqrt(),
            },
        ],
    ))
}

pub const R_POWER: &str = "c r^2 ln r";
pub const MINUS_PHI: &str = "-phi_r(k, l)";

/// `r^{c r^2} exp(-phi_r(k, l)) C(k+l, k)`.
pub fn conlon_bound(k: u64, l: u64, r: u32, c: f64, prec: u32) -> Result<BoundValue> {
    check_kl(k, l)?;
    if r < 4 {
        return Err(Error::InvalidArgument(format!("r must be >= 4 (got {r})")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidArgument("c must be finite and positive".into()));
    }
    Ok(BoundValue::from_terms(
        prec,
        vec![
            Term {
                label: R_POWER,
                value: r_power_term(r, c, prec),
            },
            Term {
                label: MINUS_PHI,
                value: -phi(
                    r,
                    &HpFloat::from_u64(k, prec),
                    &HpFloat::from_u64(l, prec),
                )?,
            },
            Term {
                label: LOG_BINOMIAL,
                value: log_choose(k, l, prec)?,
            },
        ],
    ))
}

/// `c r^2 ln r`.
pub fn r_power_term(r: u32, c: f64, prec: u32) -> HpFloat {
    let rr = HpFloat::from_u64(r as u64, prec);
    HpFloat::from_f64(c, prec) * &rr * &rr * rr.ln()
}

/// Upper bounds on `r(a, b)` for `1 <= a <= k_max`, `1 <= b <= l_max`.
///
/// Entries start from `r(1, b) = r(a, 1) = 1` and `r(2, b) = b`, then follow
/// `r(a, b) <= r(a-1, b) + r(a, b-1)`, replaced by a supplied known value
/// wherever one exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamseyTable {
    k_max: u32,
    l_max: u32,
    values: Vec<u128>,
    exact: Vec<bool>,
}

impl RamseyTable {
    pub fn get(&self, a: u32, b: u32) -> Option<u128> {
        self.index(a, b).map(|i| self.values[i])
    }

    /// Whether the entry is a known exact value (base case or supplied).
    pub fn is_exact(&self, a: u32, b: u32) -> Option<bool> {
        self.index(a, b).map(|i| self.exact[i])
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.k_max, self.l_max)
    }

    /// Value or an error naming the missing entry.
    pub fn require(&self, a: u32, b: u32) -> Result<u128> {
        self.get(a, b).ok_or(Error::MissingTableEntry { a, b })
    }

    fn index(&self, a: u32, b: u32) -> Option<usize> {
        if a == 0 || b == 0 || a > self.k_max || b > self.l_max {
            return None;
        }
        Some(((a - 1) * self.l_max + (b - 1)) as usize)
    }
}

pub fn es_recurrence_table(
    k_max: u32,
    l_max: u32,
    known: &BTreeMap<(u32, u32), u128>,
) -> Result<RamseyTable> {
    if k_max == 0 || l_max == 0 {
        return Err(Error::InvalidArgument("table dimensions must be >= 1".into()));
    }
    // symmetric closure of the supplied values
    let mut exact_values: BTreeMap<(u32, u32), u128> = BTreeMap::new();
    for (&(a, b), &v) in known {
        if a == 0 || b == 0 {
            return Err(Error::Validation(format!("r({a}, {b}) is not defined")));
        }
        for key in [(a, b), (b, a)] {
            if let Some(&prev) = exact_values.get(&key) {
                if prev != v {
                    return Err(Error::Validation(format!(
                        "conflicting values for r({a}, {b}): {prev} and {v}"
                    )));
                }
            }
            exact_values.insert(key, v);
        }
    }
    let mut table = RamseyTable {
        k_max,
        l_max,
        values: vec![0; (k_max * l_max) as usize],
        exact: vec![false; (k_max * l_max) as usize],
    };
    for a in 1..=k_max {
        for b in 1..=l_max {
            let base = match (a.min(b), a.max(b)) {
                (1, _) => Some(1u128),
                (2, m) => Some(m as u128),
                _ => None,
            };
            let supplied = exact_values.get(&(a, b)).copied();
            let i = table.index(a, b).unwrap();
            let (value, exact) = match (base, supplied) {
                (Some(v), Some(s)) if s != v => {
                    return Err(Error::Validation(format!(
                        "supplied r({a}, {b}) = {s} contradicts the base value {v}"
                    )))
                }
                (Some(v), _) => (v, true),
                (None, s) => {
                    let bound = table.values[table.index(a - 1, b).unwrap()]
                        .checked_add(table.values[table.index(a, b - 1).unwrap()])
                        .ok_or_else(|| Error::Validation(format!("r({a}, {b}) overflows u128")))?;
                    match s {
                        Some(s) if s > bound => {
                            return Err(Error::Validation(format!(
                                "supplied r({a}, {b}) = {s} exceeds the recurrence bound {bound}"
                            )))
                        }
                        Some(s) => (s, true),
                        None => (bound, false),
                    }
                }
            };
            table.values[i] = value;
            table.exact[i] = exact;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 192;

    fn ln(v: i64) -> HpFloat {
        HpFloat::from_i64(v, P).ln()
    }

    fn near(a: &HpFloat, b: &HpFloat) -> bool {
        (a - b).abs() < HpFloat::from_f64(1e-50, P)
    }

    #[test]
    fn es_examples() {
        assert!(near(&es_bound(2, 2, P).unwrap().log_value, &ln(6)));
        assert!(near(&es_bound(1, 9, P).unwrap().log_value, &ln(10)));
        assert!(near(&es_bound(3, 3, P).unwrap().log_value, &ln(20)));
    }

    #[test]
    fn recurrence_table_values() {
        let t = es_recurrence_table(6, 6, &BTreeMap::new()).unwrap();
        assert_eq!(t.get(3, 3), Some(6));
        assert_eq!(t.get(4, 4), Some(20));
        for b in 1..=6 {
            assert_eq!(t.get(2, b), Some(b as u128));
            assert_eq!(t.get(1, b), Some(1));
        }
        for a in 1..=6 {
            for b in 1..=6 {
                assert_eq!(t.get(a, b), t.get(b, a));
            }
        }
        assert_eq!(t.get(7, 1), None);
    }

    #[test]
    fn recurrence_table_known_values_tighten() {
        let known = BTreeMap::from([((3, 4), 9u128), ((3, 3), 6)]);
        let t = es_recurrence_table(5, 5, &known).unwrap();
        assert_eq!(t.get(4, 3), Some(9));
        assert_eq!(t.is_exact(4, 3), Some(true));
        assert_eq!(t.get(4, 4), Some(18));
        assert_eq!(t.is_exact(4, 4), Some(false));
    }

    #[test]
    fn recurrence_table_rejects_inconsistent_values() {
        let too_big = BTreeMap::from([((3, 3), 7u128)]);
        assert!(matches!(es_recurrence_table(4, 4, &too_big), Err(Error::Validation(_))));
        let wrong_base = BTreeMap::from([((2, 4), 3u128)]);
        assert!(matches!(es_recurrence_table(4, 4, &wrong_base), Err(Error::Validation(_))));
        let conflicting = BTreeMap::from([((3, 4), 9u128), ((4, 3), 8)]);
        assert!(es_recurrence_table(4, 4, &conflicting).is_err());
    }

    #[test]
    fn graham_rodl_example_and_domain() {
        let v = graham_rodl_bound(8, 8, P).unwrap();
        // ln(6 C(16, 8) / ln ln 16), C(16,8) = 12870
        let lnln16 = HpFloat::from_i64(16, P).ln().ln();
        let want = ln(6 * 12870) - lnln16.ln();
        assert!(near(&v.log_value, &want));
        assert!(matches!(graham_rodl_bound(1, 1, P), Err(Error::Domain(_))));
        assert!(graham_rodl_bound(1, 2, P).is_ok());
    }

    #[test]
    fn graham_rodl_monotone_in_k() {
        for l in [1u64, 3, 8, 20] {
            let mut prev = graham_rodl_bound(16, l, 96).unwrap().log_value;
            for k in 17..80 {
                let cur = graham_rodl_bound(k, l, 96).unwrap().log_value;
                assert!(cur > prev, "k = {k}, l = {l}");
                prev = cur;
            }
        }
    }

    #[test]
    fn thomason_examples() {
        let k = 400;
        let t0 = thomason_bound(k, k, 0.0, P).unwrap();
        let es = es_bound(k, k, P).unwrap();
        let want = &es.log_value - ln(k as i64).mul_pow2(-1);
        assert!(near(&t0.log_value, &want));
        let t1 = thomason_bound(k, 300, 0.5, P).unwrap();
        assert!(t1.log_value > thomason_bound(k, 300, 0.0, P).unwrap().log_value);
        let big = thomason_bound(1_000_000, 1_000_000, 1.0, P).unwrap();
        assert!(big.log_value < es_bound(1_000_000, 1_000_000, P).unwrap().log_value);
        assert!(thomason_bound(3, 5, 1.0, P).is_err());
    }

    #[test]
    fn conlon_terms() {
        let v = conlon_bound(50, 70, 4, 1.0, P).unwrap();
        let es = es_bound(50, 70, P).unwrap();
        // r = 4: 16 c ln 4 on top of the binomial
        let want = &es.log_value + HpFloat::from_i64(16, P) * ln(4);
        assert!(near(&v.log_value, &want));
        assert!(v.derivation_consistent());
        assert!(v.term(MINUS_PHI).unwrap().is_zero());
    }
}
