//! Degree-regularity and quasirandomness bounds, evaluated on a concrete
//! colouring.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::cliques::has_clique;
use super::gh::gh_fast;
use super::pattern::PatternGraph;
use super::BalancedView;
use crate::error::{Error, Result};
use crate::hp::HpFloat;
use crate::report::{Comparison, Verdict};

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Tally of one family of inequalities `value <= bound` over many points.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundTally {
    pub checked: usize,
    pub violations: usize,
    /// Smallest `bound - value` seen.
    pub worst_margin: Option<BigRational>,
    /// Where the worst margin occurred: `(x, x)` for row bounds.
    pub worst_at: Option<(usize, usize)>,
}

impl BoundTally {
    fn record(&mut self, margin: BigRational, at: (usize, usize)) {
        self.checked += 1;
        if margin.is_negative() {
            self.violations += 1;
        }
        if self.worst_margin.as_ref().is_none_or(|w| margin < *w) {
            self.worst_margin = Some(margin);
            self.worst_at = Some(at);
        }
    }

    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Row-sum and path-sum bounds, in two variants: sums over all `y`, and sums
/// with `y` kept off the vertices already in use.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma31Report {
    pub k: u64,
    pub l: u64,
    /// No red `K_{k+1}`.
    pub avoids_red: bool,
    /// No blue `K_{l+1}`.
    pub avoids_blue: bool,
    pub row_lower: BoundTally,
    pub row_upper: BoundTally,
    pub path: BoundTally,
    pub row_lower_distinct: BoundTally,
    pub row_upper_distinct: BoundTally,
    pub path_distinct: BoundTally,
    /// Largest value of the two degenerate terms `g(x,x)g(x,z) + g(x,z)g(z,z)
    /// = -2p g(x,z)` over ordered pairs.
    pub degenerate_max: Option<BigRational>,
}

impl Lemma31Report {
    pub fn hypothesis_holds(&self) -> bool {
        self.avoids_red && self.avoids_blue
    }

    /// The bounds with sums over all `y`.
    pub fn holds(&self) -> bool {
        self.row_lower.holds() && self.row_upper.holds() && self.path.holds()
    }

    pub fn verdict(&self) -> Verdict {
        match (self.hypothesis_holds(), self.holds()) {
            (false, _) => Verdict::HypothesisNotMet,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::Fail,
        }
    }
}

pub fn lemma31_check(
    v: &BalancedView<'_>,
    k: u64,
    l: u64,
    gamma: &BigRational,
    delta: &BigRational,
) -> Result<Lemma31Report> {
    v.check_kl(k, l)?;
    let c = v.coloring();
    let n = c.n();
    let blue = c.blue_rows();
    let avoids_red = !has_clique(c.red_rows(), n, c.words(), (k + 1).min(usize::MAX as u64) as usize);
    let avoids_blue = !has_clique(&blue, n, c.words(), (l + 1).min(usize::MAX as u64) as usize);

    let nq = int(n as u64);
    let s = int(k + l);
    let lower = -(int(l) * delta * &nq / &s);
    let upper = int(k) * gamma * &nq / &s;
    let path_bound = int(2 * k.max(l)) / (&s * &s) * (int(k) * gamma + int(l) * delta) * &nq + BigRational::one();
    let p = v.p().clone();

    let mut rep = Lemma31Report {
        k,
        l,
        avoids_red,
        avoids_blue,
        row_lower: BoundTally::default(),
        row_upper: BoundTally::default(),
        path: BoundTally::default(),
        row_lower_distinct: BoundTally::default(),
        row_upper_distinct: BoundTally::default(),
        path_distinct: BoundTally::default(),
        degenerate_max: None,
    };
    for x in 0..n {
        let row = v.balanced_row_sum(x)?;
        // y = x contributes g(x, x) = -p
        let row_distinct = &row + &p;
        rep.row_lower.record(&row - &lower, (x, x));
        rep.row_upper.record(&upper - &row, (x, x));
        rep.row_lower_distinct.record(&row_distinct - &lower, (x, x));
        rep.row_upper_distinct.record(&upper - &row_distinct, (x, x));
    }
    let two_p = &p + &p;
    for x in 0..n {
        for z in 0..n {
            if x == z {
                continue;
            }
            let all = v.path2_sum(x, z)?;
            let degenerate = -(&two_p * v.g(x, z)?);
            let distinct = &all - &degenerate;
            rep.path.record(&path_bound - &all, (x, z));
            rep.path_distinct.record(&path_bound - &distinct, (x, z));
            if rep.degenerate_max.as_ref().is_none_or(|m| degenerate > *m) {
                rep.degenerate_max = Some(degenerate);
            }
        }
    }
    Ok(rep)
}

/// The quasirandomness hypothesis `sum_y g(x,y) g(y,z) <= nu n` (and, where
/// used, `|sum_y g(x,y)| <= mu n`) measured on the colouring.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub mu_emp: BigRational,
    pub nu_emp: Option<BigRational>,
    pub passed: bool,
    pub reason: Option<String>,
}

/// An inequality that is only judged once its hypotheses pass.
#[derive(Clone, Debug)]
pub struct GatedCheck {
    pub gate: Gate,
    /// Exact value of the bounded sum (before taking absolute values).
    pub sum: BigRational,
    /// `|sum| <= bound`; absent when the gate fails.
    pub comparison: Option<Comparison>,
}

impl GatedCheck {
    pub fn verdict(&self) -> Verdict {
        match &self.comparison {
            Some(c) if self.gate.passed => c.verdict(),
            _ => Verdict::HypothesisNotMet,
        }
    }
}

fn gate(v: &BalancedView<'_>, mu: Option<&BigRational>, nu: &BigRational) -> Gate {
    let mu_emp = v.mu();
    let nu_emp = v.nu_emp();
    let mut reason = None;
    if !nu.is_positive() {
        reason = Some(format!("nu = {nu} is not positive"));
    } else if *nu > BigRational::one() {
        reason = Some(format!("nu = {nu} exceeds 1"));
    } else if let Some(e) = nu_emp.as_ref().filter(|e| *e > nu) {
        reason = Some(format!("measured nu = {e} exceeds the supplied nu = {nu}"));
    } else if let Some(m) = mu {
        if m.is_negative() {
            reason = Some(format!("mu = {m} is negative"));
        } else if mu_emp > *m {
            reason = Some(format!("measured mu = {mu_emp} exceeds the supplied mu = {m}"));
        }
    }
    Gate {
        mu_emp,
        nu_emp,
        passed: reason.is_none(),
        reason,
    }
}

/// `|sum_y sum_x g(y,x_1)...g(y,x_d) h(x)| <= sqrt2 nu^{d/2} n^{c+d+1} +
/// n^{c+d} / (sqrt2 nu^{d/2+1})` for `h` a product of balanced-function
/// factors over `x_1..x_{c+d}` (given as a pattern on those `c + d` vertices,
/// `None` meaning `h = 1`).
pub fn lemma32_check(
    v: &BalancedView<'_>,
    d: usize,
    c: usize,
    nu: &BigRational,
    h: Option<&PatternGraph>,
    prec: u32,
) -> Result<GatedCheck> {
    let xs = c + d;
    if let Some(h) = h {
        if h.vertices() != xs {
            return Err(Error::InvalidArgument(format!(
                "h must be a pattern on c + d = {xs} vertices (got {})",
                h.vertices()
            )));
        }
    }
    // vertex 0 is y, vertices 1..=c+d are the x_i
    let mut edges: Vec<(usize, usize)> = (1..=d).map(|i| (0, i)).collect();
    if let Some(h) = h {
        edges.extend(h.edges().iter().map(|&(a, b)| (a + 1, b + 1)));
    }
    let pattern = PatternGraph::new(xs + 1, &edges)?;
    let sum = gh_fast(v, &pattern)?;
    let g = gate(v, None, nu);
    let comparison = g.passed.then(|| {
        let n = HpFloat::from_u64(v.n() as u64, prec);
        let sqrt2 = HpFloat::from_i64(2, prec).sqrt();
        let nu_h = HpFloat::from_rational(nu, prec);
        let nu_half_d = nu_h.sqrt().powi(d as i64);
        let n_pow = n.powi(xs as i64);
        let rhs = &sqrt2 * &nu_half_d * &n_pow * &n + &n_pow / (&sqrt2 * &nu_half_d * &nu_h);
        Comparison::le(HpFloat::from_rational(&sum.abs(), prec), rhs)
    });
    Ok(GatedCheck {
        gate: g,
        sum,
        comparison,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkKind {
    Path,
    Cycle,
}

/// Path sums `g(x_1,x_2)...g(x_{l-1},x_l)` and cycle sums over `l` vertices,
/// against `2 mu^e nu^{floor(l/2)-1} n^l + 2 mu^e / nu^3 n^{l-1}` with
/// `e = l + 1 - 2 floor(l/2)`, and `2 nu^{floor(l/2)} n^l + (2/nu) n^{l-1}`.
/// Decided exactly.
pub fn lemma33_check(
    v: &BalancedView<'_>,
    length: usize,
    kind: WalkKind,
    mu: &BigRational,
    nu: &BigRational,
    prec: u32,
) -> Result<GatedCheck> {
    if length < 3 {
        return Err(Error::InvalidArgument(format!("length must be >= 3 (got {length})")));
    }
    let pattern = match kind {
        WalkKind::Path => PatternGraph::path(length)?,
        WalkKind::Cycle => PatternGraph::cycle(length)?,
    };
    let sum = gh_fast(v, &pattern)?;
    let g = gate(v, Some(mu), nu);
    let comparison = g.passed.then(|| {
        let n = int(v.n() as u64);
        let n_l = n.pow(length as i32);
        let n_l1 = n.pow(length as i32 - 1);
        let half = (length / 2) as i32;
        let two = int(2);
        let rhs = match kind {
            WalkKind::Path => {
                let mu_e = mu.pow(length as i32 + 1 - 2 * half);
                &two * &mu_e * nu.pow(half - 1) * &n_l + &two * &mu_e / nu.pow(3) * &n_l1
            }
            WalkKind::Cycle => &two * nu.pow(half) * &n_l + &two / nu * &n_l1,
        };
        Comparison::le_exact(&sum.abs(), &rhs, prec)
    });
    Ok(GatedCheck {
        gate: g,
        sum,
        comparison,
    })
}

/// Moments of the balanced function at `p = k/(k+l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColoringStats {
    /// `(k+l) sum_{x,y} g / n^2`
    pub s: BigRational,
    /// `(k+l) sum_{x,y,z} g(x,y) g(y,z) g(z,x) / n^3`
    pub t: BigRational,
    /// `max_x |sum_y g(x,y)| / n`
    pub mu: BigRational,
    /// `max_{x != z} sum_y g(x,y) g(y,z) / n`; absent for `n = 1`.
    pub nu_emp: Option<BigRational>,
    /// `(r-3)/(k+l)`
    pub nu_cap: BigRational,
    pub degrees: Vec<usize>,
}

pub fn coloring_stats(v: &BalancedView<'_>, k: u64, l: u64, r: u32) -> Result<ColoringStats> {
    v.check_kl(k, l)?;
    if r < 3 {
        return Err(Error::InvalidArgument(format!("r must be >= 3 (got {r})")));
    }
    let n = int(v.n() as u64);
    let kl = int(k + l);
    let triangle = gh_fast(v, &PatternGraph::cycle(3)?)?;
    Ok(ColoringStats {
        s: &kl * v.total_sum() / (&n * &n),
        t: &kl * triangle / (&n * &n * &n),
        mu: v.mu(),
        nu_emp: v.nu_emp(),
        nu_cap: int(r as u64 - 3) / &kl,
        degrees: v.coloring().red_degrees(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::coloring::Coloring;
    use crate::search::paley;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn pentagon() -> Coloring {
        Coloring::from_fn(5, |x, y| matches!(y - x, 1 | 4)).unwrap()
    }

    #[test]
    fn lemma31_pentagon() {
        let c = pentagon();
        let v = BalancedView::for_kl(&c, 2, 2).unwrap();
        let rep = lemma31_check(&v, 2, 2, &q(1, 1), &q(1, 1)).unwrap();
        assert!(rep.hypothesis_holds());
        assert_eq!(rep.row_lower.checked, 5);
        assert_eq!(rep.path.checked, 20);
        // row sums are -1/2 against bounds -5/2 and 5/2
        assert_eq!(rep.row_lower.worst_margin, Some(q(2, 1)));
        assert_eq!(rep.verdict(), Verdict::Pass);
    }

    #[test]
    fn lemma31_flags_hypothesis() {
        let c = Coloring::complete(6, true).unwrap();
        let v = BalancedView::for_kl(&c, 2, 2).unwrap();
        let rep = lemma31_check(&v, 2, 2, &q(1, 1), &q(1, 1)).unwrap();
        assert!(!rep.avoids_red);
        assert!(rep.avoids_blue);
        assert_eq!(rep.verdict(), Verdict::HypothesisNotMet);
        assert_eq!(rep.row_upper.checked, 6);
    }

    #[test]
    fn lemma31_large_caps_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = Coloring::from_fn(9, |_, _| rng.gen_bool(0.4)).unwrap();
        let v = BalancedView::for_kl(&c, 2, 3).unwrap();
        let big = q(9, 1);
        let rep = lemma31_check(&v, 2, 3, &big, &big).unwrap();
        assert!(rep.holds());
        assert!(rep.row_lower_distinct.holds() && rep.path_distinct.holds());
        assert!(lemma31_check(&v, 1, 1, &big, &big).is_err());
    }

    #[test]
    fn lemma32_examples() {
        let c = pentagon();
        let v = BalancedView::new(&c, q(1, 2)).unwrap();
        let nu = v.nu_emp().unwrap();
        let rep = lemma32_check(&v, 2, 0, &nu, None, 128).unwrap();
        assert_eq!(rep.verdict(), Verdict::Pass, "{rep:?}");
        let smaller = &nu / BigInt::from(2);
        let rep = lemma32_check(&v, 2, 0, &smaller, None, 128).unwrap();
        assert!(!rep.gate.passed);
        assert_eq!(rep.verdict(), Verdict::HypothesisNotMet);
        let h = PatternGraph::path(2).unwrap();
        assert!(lemma32_check(&v, 2, 1, &nu, Some(&h), 128).is_err());
    }

    #[test]
    fn lemma33_examples() {
        let p17 = paley(17).unwrap();
        let v = BalancedView::new(&p17, q(1, 2)).unwrap();
        let (mu, nu) = (v.mu(), v.nu_emp().unwrap());
        let rep = lemma33_check(&v, 4, WalkKind::Cycle, &mu, &nu, 128).unwrap();
        assert_eq!(rep.verdict(), Verdict::Pass, "{rep:?}");

        let c5 = pentagon();
        let v = BalancedView::new(&c5, q(1, 2)).unwrap();
        let (mu, nu) = (v.mu(), v.nu_emp().unwrap());
        let rep = lemma33_check(&v, 3, WalkKind::Path, &mu, &nu, 128).unwrap();
        assert_eq!(rep.verdict(), Verdict::Pass, "{rep:?}");
        assert!(lemma33_check(&v, 2, WalkKind::Path, &mu, &nu, 128).is_err());
    }

    #[test]
    fn stats_examples() {
        let c = Coloring::complete(6, true).unwrap();
        let v = BalancedView::for_kl(&c, 2, 2).unwrap();
        let st = coloring_stats(&v, 2, 2, 4).unwrap();
        assert_eq!(st.s, q(4, 3));
        assert_eq!(st.nu_cap, q(1, 4));
        assert_eq!(st.degrees, vec![5; 6]);

        let c5 = pentagon();
        let v = BalancedView::for_kl(&c5, 2, 2).unwrap();
        let st = coloring_stats(&v, 2, 2, 4).unwrap();
        let mut naive = BigRational::zero();
        for x in 0..5 {
            for y in 0..5 {
                for z in 0..5 {
                    naive += v.g(x, y).unwrap() * v.g(y, z).unwrap() * v.g(z, x).unwrap();
                }
            }
        }
        assert_eq!(st.t, q(4, 125) * naive);
    }
}
