//! Explicit red/blue colourings of `K_n` and the balanced-function moments
//! computed on them.
//!
//! Everything here is exact: `p` is rational, and sums over the balanced
//! function are carried as integers over a power of `p`'s denominator.

mod audit;
pub mod cliques;
mod gh;
mod lemmas;
mod pattern;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use audit::{
    clique_extension_audit, fundamental_audit, AuditTerm, CliqueExtensionReport, FundamentalAudit,
    ResidualMode,
};
pub use gh::{expansion_identity_check, gh_fast, gh_naive, ExpansionCheck, NAIVE_TUPLE_LIMIT};
pub use lemmas::{
    coloring_stats, lemma31_check, lemma32_check, lemma33_check, BoundTally, ColoringStats, Gate,
    GatedCheck, Lemma31Report, WalkKind,
};
pub use pattern::PatternGraph;

/// A red/blue colouring of the edges of `K_n`, stored as red adjacency rows
/// packed into 64-bit words. Blue is the complement off the diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    n: usize,
    words: usize,
    red: Vec<u64>,
}

impl Coloring {
    /// All edges blue.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("a colouring needs n >= 1".into()));
        }
        let words = n.div_ceil(64);
        Ok(Coloring {
            n,
            words,
            red: vec![0; n * words],
        })
    }

    pub fn complete(n: usize, red: bool) -> Result<Self> {
        Self::from_fn(n, |_, _| red)
    }

    /// `f(x, y)` is queried once per pair with `x < y`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut c = Self::new(n)?;
        for y in 1..n {
            for x in 0..y {
                if f(x, y) {
                    c.set(x, y, true);
                }
            }
        }
        Ok(c)
    }

    pub fn from_red_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut c = Self::new(n)?;
        for &(x, y) in edges {
            c.check_pair(x, y)?;
            c.set(x, y, true);
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Words per adjacency row.
    pub fn words(&self) -> usize {
        self.words
    }

    pub fn check_vertex(&self, x: usize) -> Result<()> {
        if x >= self.n {
            return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
        }
        Ok(())
    }

    fn check_pair(&self, x: usize, y: usize) -> Result<()> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Err(Error::InvalidArgument(format!("expected distinct vertices, got {x} twice")));
        }
        Ok(())
    }

    /// Panics if either vertex is out of range. The diagonal is never red.
    #[inline]
    pub fn is_red(&self, x: usize, y: usize) -> bool {
        assert!(x < self.n && y < self.n, "vertex out of range");
        self.red[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    /// Colours the edge `xy`; a no-op on the diagonal.
    pub fn set(&mut self, x: usize, y: usize, red: bool) {
        assert!(x < self.n && y < self.n, "vertex out of range");
        if x == y {
            return;
        }
        for (a, b) in [(x, y), (y, x)] {
            let w = &mut self.red[a * self.words + b / 64];
            if red {
                *w |= 1 << (b % 64);
            } else {
                *w &= !(1 << (b % 64));
            }
        }
    }

    pub fn red_row(&self, x: usize) -> &[u64] {
        &self.red[x * self.words..(x + 1) * self.words]
    }

    /// Flat red adjacency, `n` rows of [`words`](Self::words) words.
    pub fn red_rows(&self) -> &[u64] {
        &self.red
    }

    /// Flat blue adjacency in the same layout.
    pub fn blue_rows(&self) -> Vec<u64> {
        self.complement().red
    }

    /// Swaps the two colours.
    pub fn complement(&self) -> Coloring {
        let mut out = self.clone();
        let tail = self.n % 64;
        for x in 0..self.n {
            let row = &mut out.red[x * self.words..(x + 1) * self.words];
            for w in row.iter_mut() {
                *w = !*w;
            }
            if tail != 0 {
                row[self.words - 1] &= (1u64 << tail) - 1;
            }
            row[x / 64] &= !(1 << (x % 64));
        }
        out
    }

    pub fn red_edge_count(&self) -> usize {
        self.red.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn red_degree(&self, x: usize) -> Result<usize> {
        self.check_vertex(x)?;
        Ok(self.degree_unchecked(x))
    }

    fn degree_unchecked(&self, x: usize) -> usize {
        self.red_row(x).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn red_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|x| self.degree_unchecked(x)).collect()
    }

    /// Common red neighbours of `x` and `y`.
    pub fn codegree(&self, x: usize, y: usize) -> Result<usize> {
        self.check_pair(x, y)?;
        Ok(self
            .red_row(x)
            .iter()
            .zip(self.red_row(y))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum())
    }

    /// Monochromatic triangles from the degree sequence alone.
    pub fn goodman_triangles(&self) -> Result<u128> {
        let n = self.n as u128;
        if n < 3 {
            return Err(Error::InvalidArgument("triangle counts need n >= 3".into()));
        }
        let c2 = |m: u128| m * m.saturating_sub(1) / 2;
        let sum: u128 = self
            .red_degrees()
            .into_iter()
            .map(|d| c2(d as u128) + c2(n - 1 - d as u128))
            .sum();
        let c3 = n * (n - 1) * (n - 2) / 6;
        Ok((sum - c3) / 2)
    }

    pub fn count_red_cliques(&self, r: usize) -> Result<u128> {
        if r == 0 || r > self.n {
            return Err(Error::InvalidArgument(format!(
                "clique size must lie in 1..={} (got {r})",
                self.n
            )));
        }
        Ok(cliques::count_cliques(&self.red, self.n, self.words, r))
    }

    pub fn count_blue_cliques(&self, r: usize) -> Result<u128> {
        self.complement().count_red_cliques(r)
    }

    /// Ordered red `r`-tuples: `r!` times the clique count.
    pub fn ordered_red_tuples(&self, r: usize) -> Result<BigInt> {
        let count = self.count_red_cliques(r)?;
        let fact: BigInt = (1..=r as u64).map(BigInt::from).product();
        Ok(BigInt::from(count) * fact)
    }

    /// True when there is no red `K_a` and no blue `K_b`.
    pub fn avoids(&self, a: usize, b: usize) -> bool {
        let blue = self.blue_rows();
        !cliques::has_clique(&self.red, self.n, self.words, a)
            && !cliques::has_clique(&blue, self.n, self.words, b)
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Coloring(n = {})", self.n)?;
        for x in 0..self.n {
            let row: String = (0..self.n)
                .map(|y| match (x == y, self.is_red(x, y)) {
                    (true, _) => '-',
                    (false, true) => 'R',
                    (false, false) => 'B',
                })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// A colouring together with a reference density `p`, giving the balanced
/// function `g(x, y) = A(x, y) - p` with `A(x, x) = 0`.
///
/// With `p = a/b`, the scaled matrix `G = b g` is integral: `b - a` on red
/// edges and `-a` elsewhere, including the diagonal.
#[derive(Clone, Debug)]
pub struct BalancedView<'a> {
    coloring: &'a Coloring,
    p: BigRational,
    num: i64,
    den: i64,
    scaled: Vec<i64>,
}

impl<'a> BalancedView<'a> {
    pub fn new(coloring: &'a Coloring, p: BigRational) -> Result<Self> {
        if !(p.is_positive() && p < BigRational::from_integer(1.into())) {
            return Err(Error::InvalidArgument(format!("p must lie in (0, 1) (got {p})")));
        }
        let (num, den) = match (p.numer().to_i64(), p.denom().to_i64()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::InvalidArgument("p's numerator and denominator must fit in 64 bits".into())),
        };
        let n = coloring.n();
        let mut scaled = vec![-num; n * n];
        for x in 0..n {
            for y in 0..n {
                if coloring.is_red(x, y) {
                    scaled[x * n + y] = den - num;
                }
            }
        }
        Ok(BalancedView {
            coloring,
            p,
            num,
            den,
            scaled,
        })
    }

    /// The view at `p = k / (k + l)`.
    pub fn for_kl(coloring: &'a Coloring, k: u64, l: u64) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidArgument("k and l must be >= 1".into()));
        }
        Self::new(coloring, BigRational::new(k.into(), (k + l).into()))
    }

    pub fn coloring(&self) -> &'a Coloring {
        self.coloring
    }

    pub fn n(&self) -> usize {
        self.coloring.n()
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    /// Denominator of `p` in lowest terms; `g = G / den`.
    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    /// `G(x, y) = den * g(x, y)`.
    #[inline]
    pub fn scaled(&self, x: usize, y: usize) -> i64 {
        self.scaled[x * self.n() + y]
    }

    pub fn scaled_matrix(&self) -> &[i64] {
        &self.scaled
    }

    pub fn g(&self, x: usize, y: usize) -> Result<BigRational> {
        self.coloring.check_vertex(x)?;
        self.coloring.check_vertex(y)?;
        Ok(self.over_den(BigInt::from(self.scaled(x, y)), 1))
    }

    /// `value / den^power` as a reduced rational.
    pub fn over_den(&self, value: BigInt, power: u32) -> BigRational {
        BigRational::new(value, BigInt::from(self.den).pow(power))
    }

    fn check_kl(&self, k: u64, l: u64) -> Result<()> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidArgument("k and l must be >= 1".into()));
        }
        let want = BigRational::new(k.into(), (k + l).into());
        if want != self.p {
            return Err(Error::InvalidArgument(format!(
                "view has p = {}, but k/(k+l) = {want}",
                self.p
            )));
        }
        Ok(())
    }

    /// `sum_y g(x, y)` over all `y`, the diagonal included: `d_x - p n`.
    pub fn balanced_row_sum(&self, x: usize) -> Result<BigRational> {
        self.coloring.check_vertex(x)?;
        Ok(self.over_den(BigInt::from(self.scaled_row_sum(x)), 1))
    }

    fn scaled_row_sum(&self, x: usize) -> i128 {
        let n = self.n();
        self.scaled[x * n..(x + 1) * n].iter().map(|&v| v as i128).sum()
    }

    /// `sum_y g(x, y) g(y, z)` over all `y`, including `y = x` and `y = z`.
    pub fn path2_sum(&self, x: usize, z: usize) -> Result<BigRational> {
        self.coloring.check_pair(x, z)?;
        Ok(self.over_den(self.scaled_path2(x, z), 2))
    }

    fn scaled_path2(&self, x: usize, z: usize) -> BigInt {
        let n = self.n();
        let s: i128 = (0..n)
            .map(|y| self.scaled(x, y) as i128 * self.scaled(y, z) as i128)
            .sum();
        BigInt::from(s)
    }

    /// `max_x |sum_y g(x, y)| / n`.
    pub fn mu(&self) -> BigRational {
        let best = (0..self.n())
            .map(|x| self.scaled_row_sum(x).abs())
            .max()
            .unwrap_or(0);
        self.over_den(BigInt::from(best), 1) / BigInt::from(self.n())
    }

    /// `max_{x != z} sum_y g(x, y) g(y, z) / n`; `None` when `n = 1`.
    pub fn nu_emp(&self) -> Option<BigRational> {
        let n = self.n();
        let mut best: Option<BigInt> = None;
        for x in 0..n {
            for z in (x + 1)..n {
                let v = self.scaled_path2(x, z);
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
        }
        best.map(|b| self.over_den(b, 2) / BigInt::from(n))
    }

    /// `sum_{x,y} g(x, y)`.
    pub fn total_sum(&self) -> BigRational {
        let s: i128 = self.scaled.iter().map(|&v| v as i128).sum();
        self.over_den(BigInt::from(s), 1)
    }
}

/// `C(n, k)` for small arguments.
pub(crate) fn choose(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
