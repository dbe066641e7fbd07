//! Numeric verification of the analytic facts the bound rests on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::bounds::binom::log_binomial;
use crate::bounds::classic::r_power_term;
use crate::bounds::smooth::{alpha, alpha_knots, alpha_piece, kappa, phi, Piece};
use crate::error::{Error, Result};
use crate::hp::HpFloat;
use crate::report::Comparison;

/// Rate bounds for `f = exp(-phi_r)`.
///
/// `gamma_cap`/`delta_cap` are the quantities with `1/(4(k+l))` slack;
/// `gamma`/`delta` are the widened variants with `1/(2(k+l))`.
#[derive(Clone, Debug)]
pub struct RateBounds {
    pub gamma: HpFloat,
    pub delta: HpFloat,
    pub gamma_cap: HpFloat,
    pub delta_cap: HpFloat,
}

pub fn gamma_delta_caps(r: u32, k: u64, l: u64, prec: u32) -> Result<RateBounds> {
    if k < 1 || l < 1 {
        return Err(Error::InvalidArgument("k, l must be >= 1".into()));
    }
    let kf = HpFloat::from_u64(k, prec);
    let lf = HpFloat::from_u64(l, prec);
    let s = &kf + &lf;
    let a = alpha(r, &(&lf / &kf))?;
    let ln_s = s.ln();
    let base = &a.value / &s;
    let k_slope = &a.d1 * &lf * &ln_s / (&kf * &kf);
    let l_slope = &a.d1 * &ln_s / &kf;
    let quarter = HpFloat::one(prec) / (s.mul_pow2(2));
    let half = HpFloat::one(prec) / (s.mul_pow2(1));
    Ok(RateBounds {
        gamma_cap: &base - &k_slope + &quarter,
        delta_cap: &base + &l_slope + &quarter,
        gamma: &base - &k_slope + &half,
        delta: &base + &l_slope + &half,
    })
}

/// Worst margins of the profile bounds over a uniform grid on `[0, 2]`.
#[derive(Clone, Debug)]
pub struct Lemma51Report {
    pub r: u32,
    pub grid_size: usize,
    /// `min alpha(x)` over grid points in `[0, 1]`.
    pub min_value: f64,
    /// `min ((r-4)/2 x - alpha(x))` over grid points in `[0, 1]`.
    pub upper_margin: f64,
    /// `min (r^2 - |alpha'(x)|)`.
    pub d1_margin: f64,
    /// `min (20 r^3 - |alpha''(x)|)`.
    pub d2_margin: f64,
    /// `max |alpha' - central difference of alpha|` away from the knots.
    pub fd_d1_error: f64,
    /// `max |alpha'' - central difference of alpha'|` away from the knots.
    pub fd_d2_error: f64,
    /// Largest one-sided jump of `alpha`, `alpha'` or `alpha''` across the
    /// knots, computed exactly.
    pub knot_jump: f64,
    pub fd_points: usize,
}

/// Step of the central differences, `2^-30`.
pub const FD_STEP_LOG2: i64 = -30;
pub const FD_TOLERANCE: f64 = 1e-6;
pub const KNOT_TOLERANCE: f64 = 1e-9;
const FD_PREC: u32 = 160;

impl Lemma51Report {
    pub fn bounds_hold(&self) -> bool {
        self.min_value >= 0.0
            && self.upper_margin >= 0.0
            && self.d1_margin >= 0.0
            && self.d2_margin >= 0.0
    }

    pub fn smoothness_holds(&self) -> bool {
        self.fd_d1_error <= FD_TOLERANCE
            && self.fd_d2_error <= FD_TOLERANCE
            && self.knot_jump <= KNOT_TOLERANCE
    }

    pub fn holds(&self) -> bool {
        self.bounds_hold() && self.smoothness_holds()
    }
}

/// Bounds are scanned in `f64`. The finite differences are taken at 160 bits
/// so that cancellation does not swamp the `1e-6` tolerance.
pub fn lemma51_check(r: u32, grid_size: usize) -> Result<Lemma51Report> {
    if r < 4 {
        return Err(Error::InvalidArgument(format!("r must be >= 4 (got {r})")));
    }
    if grid_size < 100 {
        return Err(Error::InvalidArgument("grid_size must be >= 100".into()));
    }
    let rf = r as f64;
    let d1_cap = rf * rf;
    let d2_cap = 20.0 * rf * rf * rf;
    let knots = alpha_knots(r);
    let h = HpFloat::one(FD_PREC).mul_pow2(FD_STEP_LOG2);
    let two_h = h.mul_pow2(1);
    let hf = h.to_f64();
    let mut rep = Lemma51Report {
        r,
        grid_size,
        min_value: f64::INFINITY,
        upper_margin: f64::INFINITY,
        d1_margin: f64::INFINITY,
        d2_margin: f64::INFINITY,
        fd_d1_error: 0.0,
        fd_d2_error: 0.0,
        knot_jump: 0.0,
        fd_points: 0,
    };
    let denom = BigInt::from(grid_size - 1);
    for i in 0..grid_size {
        let xq = HpFloat::from_ratio(&BigInt::from(2 * i), &denom, FD_PREC);
        let x = xq.to_f64();
        let a = alpha(r, &x)?;
        if x <= 1.0 {
            rep.min_value = rep.min_value.min(a.value);
            rep.upper_margin = rep.upper_margin.min((rf - 4.0) / 2.0 * x - a.value);
        }
        rep.d1_margin = rep.d1_margin.min(d1_cap - a.d1.abs());
        rep.d2_margin = rep.d2_margin.min(d2_cap - a.d2.abs());
        if x < 2.0 * hf || knots.iter().any(|k| (x - k).abs() < 2.0 * hf) {
            continue;
        }
        let mid = alpha(r, &xq)?;
        let plus = alpha(r, &(&xq + &h))?;
        let minus = alpha(r, &(&xq - &h))?;
        let fd1 = (plus.value - minus.value) / &two_h;
        let fd2 = (plus.d1 - minus.d1) / &two_h;
        rep.fd_d1_error = rep.fd_d1_error.max((mid.d1 - fd1).abs().to_f64());
        rep.fd_d2_error = rep.fd_d2_error.max((mid.d2 - fd2).abs().to_f64());
        rep.fd_points += 1;
    }
    rep.knot_jump = knot_jump(r);
    Ok(rep)
}

/// Exact comparison of the neighbouring pieces' derivatives at each knot.
fn knot_jump(r: u32) -> f64 {
    let ri = r as i64;
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let pairs = [
        (q(2 * ri - 1, 2 * ri), Piece::Flat, Piece::Ramp),
        (q(1, 1), Piece::Ramp, Piece::MirroredRamp),
        (q(2 * ri, 2 * ri - 1), Piece::MirroredRamp, Piece::MirroredFlat),
    ];
    let mut worst = 0.0f64;
    for (x, left, right) in pairs {
        let a = alpha_piece(r, left, &x);
        let b = alpha_piece(r, right, &x);
        for diff in [a.value - b.value, a.d1 - b.d1, a.d2 - b.d2] {
            let d = HpFloat::from_rational(&diff, 64).abs().to_f64();
            worst = worst.max(d);
        }
    }
    worst
}

/// Minimum of `kappa_r - alpha_r - 1/2` over `[1 - 1/r, 1]`.
#[derive(Clone, Debug)]
pub struct KappaMarginReport {
    pub r: u32,
    pub grid_size: usize,
    pub min_margin: BigRational,
    pub argmin: BigRational,
    pub margin_at_left: BigRational,
    pub margin_at_one: BigRational,
}

impl KappaMarginReport {
    pub fn holds(&self) -> bool {
        self.min_margin >= BigRational::from_integer(BigInt::from(0))
    }
}

/// Evaluated exactly over the grid `x_i = 1 - 1/r + i / (r (grid - 1))`.
pub fn kappa_margin_check(r: u32, grid_size: usize) -> Result<KappaMarginReport> {
    if r < 5 {
        return Err(Error::InvalidArgument(format!(
            "the kappa margin is only claimed for r >= 5 (got {r})"
        )));
    }
    if grid_size < 2 {
        return Err(Error::InvalidArgument("grid_size must be >= 2".into()));
    }
    let ri = r as i64;
    let steps = (grid_size - 1) as i64;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let margin_at = |x: &BigRational| -> Result<BigRational> {
        Ok(kappa(r, x)? - alpha(r, x)?.value - half.clone())
    };
    let mut min_margin: Option<(BigRational, BigRational)> = None;
    let mut first = None;
    let mut last = None;
    for i in 0..=steps {
        let x = BigRational::new(
            BigInt::from((ri - 1) * steps + i),
            BigInt::from(ri * steps),
        );
        let m = margin_at(&x)?;
        if i == 0 {
            first = Some(m.clone());
        }
        if i == steps {
            last = Some(m.clone());
        }
        if min_margin.as_ref().is_none_or(|(best, _)| m < *best) {
            min_margin = Some((m, x));
        }
    }
    let (min_margin, argmin) = min_margin.expect("non-empty grid");
    Ok(KappaMarginReport {
        r,
        grid_size,
        min_margin,
        argmin,
        margin_at_left: first.unwrap(),
        margin_at_one: last.unwrap(),
    })
}

fn check_m(r: u32, m: u64) -> Result<()> {
    if m != 1 && m != 2 && m != (r as u64 - 1) {
        return Err(Error::InvalidArgument(format!(
            "m must be 1, 2 or r - 1 = {} (got {m})",
            r - 1
        )));
    }
    Ok(())
}

/// `200 r^10`, the threshold above which the rate inequalities are claimed.
pub fn rate_threshold(r: u32) -> u128 {
    200 * (r as u128).pow(10)
}

fn check_rate_range(r: u32, k: u64, l: u64) -> Result<()> {
    let t = rate_threshold(r);
    if (k as u128) < t || (l as u128) < t {
        return Err(Error::HypothesisRange(format!(
            "k and l must be >= 200 r^10 = {t} (got k = {k}, l = {l})"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Lemma52Report {
    pub r: u32,
    pub k: u64,
    pub l: u64,
    pub m: u64,
    /// `exp(phi(k,l) - phi(k-m,l)) <= 1 + m Gamma`
    pub k_step: Comparison,
    /// `exp(phi(k,l) - phi(k,l-m)) <= 1 + m Delta`
    pub l_step: Comparison,
}

impl Lemma52Report {
    pub fn holds(&self) -> bool {
        self.k_step.holds && self.l_step.holds
    }
}

pub fn lemma52_check(r: u32, k: u64, l: u64, m: u64, prec: u32) -> Result<Lemma52Report> {
    if r < 4 {
        return Err(Error::InvalidArgument(format!("r must be >= 4 (got {r})")));
    }
    check_m(r, m)?;
    check_rate_range(r, k, l)?;
    let caps = gamma_delta_caps(r, k, l, prec)?;
    let f = |v: u64| HpFloat::from_u64(v, prec);
    let phi_kl = phi(r, &f(k), &f(l))?;
    let lhs_k = (&phi_kl - phi(r, &f(k - m), &f(l))?).exp();
    let lhs_l = (&phi_kl - phi(r, &f(k), &f(l - m))?).exp();
    let one = HpFloat::one(prec);
    Ok(Lemma52Report {
        r,
        k,
        l,
        m,
        k_step: Comparison::le(lhs_k, &one + f(m) * &caps.gamma_cap),
        l_step: Comparison::le(lhs_l, &one + f(m) * &caps.delta_cap),
    })
}

/// Ratio inequalities for `f_r(a, b) = max(1, (2N)^r exp(-phi_r(a, b)))`.
#[derive(Clone, Debug)]
pub struct FRatioReport {
    pub r: u32,
    pub k: u64,
    pub l: u64,
    pub m: u64,
    pub big_n: HpFloat,
    /// `ln n` where `n = floor(f_r(k,l) C(k+l,k))`.
    pub log_n: HpFloat,
    /// `(1 + 1/n) f(k-m,l)/f(k,l) <= 1 + m gamma`
    pub k_step: Comparison,
    /// `(1 + 1/n) f(k,l-m)/f(k,l) <= 1 + m delta`
    pub l_step: Comparison,
    /// Whether the truncation at 1 was active at any of the evaluated points.
    pub truncated: bool,
}

impl FRatioReport {
    pub fn holds(&self) -> bool {
        self.k_step.holds && self.l_step.holds
    }
}

/// Default `N = max(200 r^10, r^{c r}) + 1`.
pub fn default_big_n(r: u32, c: f64, prec: u32) -> HpFloat {
    let rf = HpFloat::from_u64(r as u64, prec);
    let a = HpFloat::from_bigint(&BigInt::from(rate_threshold(r)), prec);
    let b = (HpFloat::from_f64(c, prec) * &rf * rf.ln()).exp();
    let m = if a > b { a } else { b };
    m + HpFloat::one(prec)
}

pub fn f_ratio_check(
    r: u32,
    k: u64,
    l: u64,
    m: u64,
    c: f64,
    big_n: Option<HpFloat>,
    prec: u32,
) -> Result<FRatioReport> {
    if r < 4 {
        return Err(Error::InvalidArgument(format!("r must be >= 4 (got {r})")));
    }
    check_m(r, m)?;
    check_rate_range(r, k, l)?;
    let wp = prec + 32;
    let big_n = big_n.unwrap_or_else(|| default_big_n(r, c, wp)).with_prec(wp);
    let log_scale = HpFloat::from_u64(r as u64, wp) * big_n.mul_pow2(1).ln();
    let f = |v: u64| HpFloat::from_u64(v, wp);
    let mut truncated = false;
    let mut log_f = |a: u64, b: u64| -> Result<HpFloat> {
        let raw = &log_scale - phi(r, &f(a), &f(b))?;
        if raw.is_negative() {
            truncated = true;
            Ok(HpFloat::zero(wp))
        } else {
            Ok(raw)
        }
    };
    let lf_kl = log_f(k, l)?;
    let lf_k = log_f(k - m, l)?;
    let lf_l = log_f(k, l - m)?;
    // n = floor(f C) differs from f C by less than one; at these sizes the
    // relative difference sits far below the working precision.
    let log_n = &lf_kl + log_binomial(k + l, k, wp)?;
    let inflate = HpFloat::one(wp) + (-&log_n).exp();
    let caps = gamma_delta_caps(r, k, l, wp)?;
    let one = HpFloat::one(wp);
    let k_mid = &inflate * (&lf_k - &lf_kl).exp();
    let l_mid = &inflate * (&lf_l - &lf_kl).exp();
    let round = |c: Comparison| Comparison {
        lhs: c.lhs.with_prec(prec),
        rhs: c.rhs.with_prec(prec),
        margin: c.margin.with_prec(prec),
        holds: c.holds,
    };
    Ok(FRatioReport {
        r,
        k,
        l,
        m,
        big_n: big_n.with_prec(prec),
        log_n: log_n.with_prec(prec),
        k_step: round(Comparison::le(k_mid, &one + f(m) * &caps.gamma)),
        l_step: round(Comparison::le(l_mid, &one + f(m) * &caps.delta)),
        truncated,
    })
}

/// Per-condition verdicts of the fundamental lemma's hypotheses.
#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    /// `k gamma + l delta <= (r-3)/2 * l/k`, decided exactly.
    pub main: Comparison,
    /// `k >= l` and `l >= (1 - 1/r) k`.
    pub order: (Comparison, Comparison),
    /// `|gamma| < r ln k / k` and `|delta| < r ln k / k`.
    pub rates: (Comparison, Comparison),
    /// `ln f(k,l) >= -r (l/k) ln k`; absent when no `f` value was supplied.
    pub f_floor: Option<Comparison>,
    /// `k > r^{cr}` and `l > r^{cr}`, compared in log space.
    pub size: (Comparison, Comparison),
}

impl AdmissibilityReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.order.0.holds
            && self.order.1.holds
            && self.rates.0.holds
            && self.rates.1.holds
            && self.f_floor.as_ref().is_none_or(|c| c.holds)
            && self.size.0.holds
            && self.size.1.holds
    }

    /// `(name, comparison)` for every evaluated condition, main inequality last.
    pub fn conditions(&self) -> Vec<(&'static str, &Comparison)> {
        let mut v = vec![
            ("k >= l", &self.order.0),
            ("l >= (1 - 1/r) k", &self.order.1),
            ("|gamma| < r ln k / k", &self.rates.0),
            ("|delta| < r ln k / k", &self.rates.1),
        ];
        if let Some(f) = &self.f_floor {
            v.push(("ln f(k,l) >= -r (l/k) ln k", f));
        }
        v.push(("k > r^(c r)", &self.size.0));
        v.push(("l > r^(c r)", &self.size.1));
        v.push(("k gamma + l delta <= (r-3)/2 * l/k", &self.main));
        v
    }
}

#[allow(clippy::too_many_arguments)]
pub fn admissibility(
    k: u64,
    l: u64,
    r: u32,
    gamma: &BigRational,
    delta: &BigRational,
    c: f64,
    log_f: Option<&HpFloat>,
    prec: u32,
) -> Result<AdmissibilityReport> {
    if k < 1 || l < 1 || r < 4 {
        return Err(Error::InvalidArgument("need k, l >= 1 and r >= 4".into()));
    }
    let int = |v: u64| BigRational::from_integer(BigInt::from(v));
    let (kq, lq, rq) = (int(k), int(l), int(r as u64));
    let main_lhs = &kq * gamma + &lq * delta;
    let main_rhs = (&rq - int(3)) * &lq / (int(2) * &kq);
    let main = Comparison::le_exact(&main_lhs, &main_rhs, prec);

    let order = (
        Comparison::le_exact(&lq, &kq, prec),
        Comparison::le_exact(&((int(1) - int(1) / &rq) * &kq), &lq, prec),
    );

    let hp = |q: &BigRational| HpFloat::from_rational(q, prec);
    let kf = HpFloat::from_u64(k, prec);
    let ln_k = kf.ln();
    let rate_cap = HpFloat::from_u64(r as u64, prec) * &ln_k / &kf;
    let rates = (
        Comparison::lt(hp(&gamma.abs()), rate_cap.clone()),
        Comparison::lt(hp(&delta.abs()), rate_cap),
    );

    let f_floor = log_f.map(|lf| {
        let floor = -(HpFloat::from_u64(r as u64, prec) * HpFloat::from_u64(l, prec) / &kf * &ln_k);
        Comparison::le(floor, lf.clone())
    });

    let log_threshold = HpFloat::from_f64(c, prec)
        * HpFloat::from_u64(r as u64, prec)
        * HpFloat::from_u64(r as u64, prec).ln();
    let size = (
        Comparison::lt(log_threshold.clone(), ln_k),
        Comparison::lt(log_threshold, HpFloat::from_u64(l, prec).ln()),
    );

    Ok(AdmissibilityReport {
        main,
        order,
        rates,
        f_floor,
        size,
    })
}

/// The choice of `r` on the diagonal `k = l`.
#[derive(Clone, Debug)]
pub struct OptimalR {
    /// `floor(d ln k / (2c ln ln k))` before clamping.
    pub formula_r_raw: i64,
    /// `max(formula_r_raw, r_min)`.
    pub r: u32,
    /// `c r^2 ln r - (r-4)/4 ln 2k`: the exponent the `phi`-bound gives over
    /// `C(2k, k)` at `r`.
    pub theorem_exponent: HpFloat,
    /// `c r^2 ln r - d r ln k`: the exponent of `r^{c r^2} / k^{d r}`, the
    /// quantity the formula for `r` approximately minimises.
    pub power_exponent: HpFloat,
    /// Exact minimisers over the scan window `[r_min, 4 r + 8]`.
    pub scan_r_theorem: u32,
    pub scan_theorem_exponent: HpFloat,
    pub scan_r_power: u32,
    pub scan_power_exponent: HpFloat,
}

pub fn theorem_exponent(k: u64, r: u32, c: f64, prec: u32) -> HpFloat {
    let two_k = HpFloat::from_u64(2 * k, prec);
    let coeff = HpFloat::from_ratio(&BigInt::from(r as i64 - 4), &BigInt::from(4), prec);
    r_power_term(r, c, prec) - coeff * two_k.ln()
}

pub fn power_exponent(k: u64, r: u32, c: f64, d: f64, prec: u32) -> HpFloat {
    let ln_k = HpFloat::from_u64(k, prec).ln();
    r_power_term(r, c, prec)
        - HpFloat::from_f64(d, prec) * HpFloat::from_u64(r as u64, prec) * ln_k
}

pub fn optimal_r(k: u64, c: f64, d: f64, r_min: u32, prec: u32) -> Result<OptimalR> {
    if k < 17 {
        return Err(Error::Domain(format!("optimal_r needs k >= 17 (got {k})")));
    }
    if !(c.is_finite() && c > 0.0 && d.is_finite() && d > 0.0) {
        return Err(Error::InvalidArgument("c and d must be finite and positive".into()));
    }
    if r_min < 4 {
        return Err(Error::InvalidArgument("r_min must be >= 4".into()));
    }
    let ln_k = HpFloat::from_u64(k, prec).ln();
    let raw = HpFloat::from_f64(d, prec) * &ln_k / (HpFloat::from_f64(2.0 * c, prec) * ln_k.ln());
    let formula_r_raw = raw.floor().try_into().unwrap_or(i64::MAX);
    let r = formula_r_raw.clamp(r_min as i64, u32::MAX as i64 / 8) as u32;
    let mut best_t: Option<(u32, HpFloat)> = None;
    let mut best_p: Option<(u32, HpFloat)> = None;
    for cand in r_min..=(4 * r + 8) {
        let t = theorem_exponent(k, cand, c, prec);
        let p = power_exponent(k, cand, c, d, prec);
        if best_t.as_ref().is_none_or(|(_, b)| t < *b) {
            best_t = Some((cand, t));
        }
        if best_p.as_ref().is_none_or(|(_, b)| p < *b) {
            best_p = Some((cand, p));
        }
    }
    let (scan_r_theorem, scan_theorem_exponent) = best_t.expect("non-empty window");
    let (scan_r_power, scan_power_exponent) = best_p.expect("non-empty window");
    Ok(OptimalR {
        formula_r_raw,
        r,
        theorem_exponent: theorem_exponent(k, r, c, prec),
        power_exponent: power_exponent(k, r, c, d, prec),
        scan_r_theorem,
        scan_theorem_exponent,
        scan_r_power,
        scan_power_exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn caps_for_r4_are_quarter_slack() {
        let caps = gamma_delta_caps(4, 1000, 900, P).unwrap();
        let want = HpFloat::one(P) / HpFloat::from_i64(4 * 1900, P);
        assert_eq!(caps.gamma_cap, want);
        assert_eq!(caps.delta_cap, want);
    }

    #[test]
    fn caps_differ_only_through_the_slope_term() {
        let (k, l) = (10_000u64, 9_950u64);
        let caps = gamma_delta_caps(5, k, l, P).unwrap();
        let x = HpFloat::from_u64(l, P) / HpFloat::from_u64(k, P);
        let a1 = alpha(5, &x).unwrap().d1;
        let kf = HpFloat::from_u64(k, P);
        let ln_s = HpFloat::from_u64(k + l, P).ln();
        let want = -(&a1 * HpFloat::from_u64(l, P) * &ln_s / (&kf * &kf)) - &a1 * &ln_s / &kf;
        let diff = &caps.gamma_cap - &caps.delta_cap;
        assert!((diff - want).abs() < HpFloat::from_f64(1e-70, P));
        // on the diagonal alpha'(1) = 0, so the two coincide
        let diag = gamma_delta_caps(5, 5000, 5000, P).unwrap();
        assert_eq!(diag.gamma_cap, diag.delta_cap);
    }

    #[test]
    fn caps_decay_like_log_k_over_k() {
        let mut prev = f64::INFINITY;
        for e in 3..=9 {
            let k = 10u64.pow(e);
            let caps = gamma_delta_caps(6, k, k, 128).unwrap();
            let scaled = caps.gamma_cap.to_f64() * k as f64 / (k as f64).ln();
            assert!(scaled < 1.0, "k = {k}: {scaled}");
            assert!(caps.gamma_cap.to_f64() < prev);
            prev = caps.gamma_cap.to_f64();
        }
    }

    #[test]
    fn lemma51_r4_has_full_caps() {
        let rep = lemma51_check(4, 1000).unwrap();
        assert_eq!(rep.min_value, 0.0);
        assert_eq!(rep.d1_margin, 16.0);
        assert_eq!(rep.d2_margin, 20.0 * 64.0);
        assert!(rep.holds());
    }

    #[test]
    fn lemma51_small_orders() {
        for r in 5..=8 {
            let rep = lemma51_check(r, 2000).unwrap();
            assert!(rep.holds(), "{rep:?}");
            assert!(rep.fd_points > 1900);
        }
        assert!(lemma51_check(5, 50).is_err());
    }

    #[test]
    fn kappa_margin_examples() {
        let rep = kappa_margin_check(5, 101).unwrap();
        assert_eq!(rep.margin_at_one, q(1, 4));
        assert!(rep.holds());
        // at x = 0.9 = 1 - 1/(2r): kappa = 0.9, alpha = 0
        let x = q(9, 10);
        let m = kappa(5, &x).unwrap() - alpha(5, &x).unwrap().value - q(1, 2);
        assert_eq!(m, q(2, 5));
        assert!(kappa_margin_check(4, 100).is_err());
    }

    #[test]
    fn lemma52_hypothesis_range_is_distinct() {
        let err = lemma52_check(5, 1000, 1000, 1, P).unwrap_err();
        assert!(matches!(err, Error::HypothesisRange(_)));
        assert!(matches!(lemma52_check(5, 2_000_000_000, 2_000_000_000, 3, P), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn lemma52_r4_is_trivial() {
        let k = 300_000_000u64;
        let rep = lemma52_check(4, k, k, 3, P).unwrap();
        assert_eq!(rep.k_step.lhs, HpFloat::one(P));
        assert!(rep.holds());
    }

    #[test]
    fn lemma52_r5_diagonal() {
        for m in [1, 2, 4] {
            let rep = lemma52_check(5, 2_000_000_000, 2_000_000_000, m, P).unwrap();
            assert!(rep.holds(), "m = {m}");
            assert!(rep.k_step.margin.is_positive());
            assert!(rep.l_step.margin.is_positive());
        }
    }

    #[test]
    fn f_ratio_examples() {
        let k = 2_000_000_000u64;
        for m in [1, 4] {
            let rep = f_ratio_check(5, k, k, m, 1.0, None, P).unwrap();
            assert!(rep.holds(), "m = {m}: {rep:?}");
            assert!(!rep.truncated);
        }
        let rep = f_ratio_check(4, 300_000_000, 300_000_000, 3, 1.0, None, P).unwrap();
        assert!(rep.holds());
    }

    #[test]
    fn admissibility_examples() {
        let (k, r) = (1000u64, 7u32);
        let g = q(r as i64 - 3, 4 * k as i64);
        let rep = admissibility(k, k, r, &g, &g, 1.0, None, P).unwrap();
        assert!(rep.main.holds);
        assert!(rep.main.margin.is_zero());

        let rep = admissibility(1000, 800, 7, &g, &g, 1.0, None, P).unwrap();
        assert!(!rep.order.1.holds);

        let big = q(2 * 7 * 7, 1000); // 2 r ln k / k > r ln k / k for ln 1000 < 7
        let rep = admissibility(1000, 1000, 7, &big, &g, 1.0, None, P).unwrap();
        assert!(!rep.rates.0.holds);
        assert!(rep.rates.1.holds);
    }

    #[test]
    fn optimal_r_clamps_and_scans() {
        let o = optimal_r(1_000_000, 1.0, 1.0, 5, P).unwrap();
        assert_eq!(o.formula_r_raw, 2);
        assert_eq!(o.r, 5);
        assert!(o.scan_theorem_exponent <= o.theorem_exponent);
        assert!(o.scan_power_exponent <= o.power_exponent);
        assert!(optimal_r(16, 1.0, 1.0, 5, P).is_err());
    }
}
