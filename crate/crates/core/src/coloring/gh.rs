//! Moments `g_H = sum over all r-tuples of prod_{ij in E(H)} g(x_i, x_j)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::pattern::PatternGraph;
use super::BalancedView;
use crate::error::{Error, Result};

/// `gh_naive` refuses patterns with more than this many tuples.
pub const NAIVE_TUPLE_LIMIT: u128 = 100_000_000;

/// Integer arithmetic that may report overflow. `i128` is tried first and
/// the computation is redone over `BigInt` if it overflows.
trait Exact: Clone + Send + Sync + Sized {
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
}

impl Exact for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
}

impl Exact for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
}

fn with_fallback(small: impl Fn() -> Option<i128>, big: impl Fn() -> Option<BigInt>) -> BigInt {
    match small() {
        Some(v) => BigInt::from(v),
        None => big().expect("BigInt arithmetic cannot overflow"),
    }
}

fn tuple_count(n: usize, r: usize) -> Option<u128> {
    (n as u128).checked_pow(r as u32)
}

/// Exact `g_H` by enumerating all `n^r` tuples.
pub fn gh_naive(v: &BalancedView<'_>, h: &PatternGraph) -> Result<BigRational> {
    let n = v.n();
    let r = h.vertices();
    match tuple_count(n, r) {
        Some(t) if t <= NAIVE_TUPLE_LIMIT => {}
        _ => {
            return Err(Error::SizeGuard(format!(
                "{n}^{r} tuples exceeds the naive limit of {NAIVE_TUPLE_LIMIT}"
            )))
        }
    }
    // back[i]: neighbours j < i, so each edge is multiplied in once all its
    // endpoints are assigned
    let mut back = vec![Vec::new(); r];
    for &(a, b) in h.edges() {
        back[b].push(a);
    }
    let g = v.scaled_matrix();
    let total = with_fallback(|| naive_sum::<i128>(g, n, &back), || naive_sum::<BigInt>(g, n, &back));
    Ok(v.over_den(total, h.edge_count() as u32))
}

fn naive_sum<A: Exact>(g: &[i64], n: usize, back: &[Vec<usize>]) -> Option<A> {
    let parts: Vec<Option<A>> = (0..n)
        .into_par_iter()
        .map(|x0| {
            let mut assign = vec![0usize; back.len()];
            assign[0] = x0;
            dfs::<A>(g, n, back, &mut assign, 1, A::from_i64(1))
        })
        .collect();
    let mut total = A::from_i64(0);
    for p in parts {
        total = total.add(&p?)?;
    }
    Some(total)
}

fn dfs<A: Exact>(g: &[i64], n: usize, back: &[Vec<usize>], assign: &mut [usize], i: usize, prod: A) -> Option<A> {
    if i == back.len() {
        return Some(prod);
    }
    let mut total = A::from_i64(0);
    for x in 0..n {
        assign[i] = x;
        let mut p = prod.clone();
        for &j in &back[i] {
            p = p.mul(&A::from_i64(g[assign[j] * n + x]))?;
        }
        total = total.add(&dfs(g, n, back, assign, i + 1, p)?)?;
    }
    Some(total)
}

/// `1^T G^m 1`.
fn walk_sum<A: Exact>(g: &[i64], n: usize, m: usize) -> Option<A> {
    let mut vec = vec![A::from_i64(1); n];
    for _ in 0..m {
        let mut next = Vec::with_capacity(n);
        for x in 0..n {
            let mut acc = A::from_i64(0);
            for (y, vy) in vec.iter().enumerate() {
                acc = acc.add(&A::from_i64(g[x * n + y]).mul(vy)?)?;
            }
            next.push(acc);
        }
        vec = next;
    }
    let mut total = A::from_i64(0);
    for v in vec {
        total = total.add(&v)?;
    }
    Some(total)
}

/// `trace(G^m)` for `m >= 1`.
fn closed_walk_sum<A: Exact>(g: &[i64], n: usize, m: usize) -> Option<A> {
    let base: Vec<A> = g.iter().map(|&v| A::from_i64(v)).collect();
    let mut pow = base.clone();
    for _ in 1..m.saturating_sub(1) {
        let mut next = Vec::with_capacity(n * n);
        for x in 0..n {
            for z in 0..n {
                let mut acc = A::from_i64(0);
                for y in 0..n {
                    acc = acc.add(&pow[x * n + y].mul(&base[y * n + z])?)?;
                }
                next.push(acc);
            }
        }
        pow = next;
    }
    if m == 1 {
        let mut t = A::from_i64(0);
        for x in 0..n {
            t = t.add(&base[x * n + x])?;
        }
        return Some(t);
    }
    // trace(P G) = sum_{x,y} P[x][y] G[y][x]
    let mut t = A::from_i64(0);
    for x in 0..n {
        for y in 0..n {
            t = t.add(&pow[x * n + y].mul(&base[y * n + x])?)?;
        }
    }
    Some(t)
}

/// Exact `g_H`, factorised over the components of `H`. Paths and cycles go
/// through powers of the scaled matrix; other components are enumerated over
/// their own vertices only.
pub fn gh_fast(v: &BalancedView<'_>, h: &PatternGraph) -> Result<BigRational> {
    let n = v.n();
    let g = v.scaled_matrix();
    let mut acc = BigRational::one();
    for comp in h.components() {
        let sub = h.induced(&comp)?;
        let e = sub.edge_count();
        let value = if comp.len() == 1 {
            BigRational::from_integer(BigInt::from(n))
        } else if sub.as_path().is_some() {
            let s = with_fallback(|| walk_sum::<i128>(g, n, e), || walk_sum::<BigInt>(g, n, e));
            v.over_den(s, e as u32)
        } else if sub.is_cycle() {
            let s = with_fallback(|| closed_walk_sum::<i128>(g, n, e), || closed_walk_sum::<BigInt>(g, n, e));
            v.over_den(s, e as u32)
        } else {
            gh_naive(v, &sub)?
        };
        if value.is_zero() {
            return Ok(value);
        }
        acc *= value;
    }
    Ok(acc)
}

/// Both sides of the clique expansion for `r`-tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionCheck {
    pub r: usize,
    /// Ordered red `r`-tuples, `r!` times the red `K_r` count.
    pub lhs: BigInt,
    /// `sum_{H subset K_r} p^{C(r,2) - e(H)} g_H`.
    pub rhs: BigRational,
    pub equal: bool,
}

/// Largest `r` for which all `2^{C(r,2)}` subgraphs are enumerated.
pub const EXPANSION_MAX_R: usize = 4;

pub fn expansion_identity_check(v: &BalancedView<'_>, r: usize) -> Result<ExpansionCheck> {
    if r == 0 || r > EXPANSION_MAX_R {
        return Err(Error::SizeGuard(format!(
            "the exhaustive expansion is limited to 1 <= r <= {EXPANSION_MAX_R} (got {r})"
        )));
    }
    let lhs = if r > v.n() {
        BigInt::zero()
    } else {
        v.coloring().ordered_red_tuples(r)?
    };
    let pairs = (r * (r - 1) / 2) as i32;
    let mut rhs = BigRational::zero();
    for h in PatternGraph::all_subgraphs(r)? {
        let weight = v.p().pow(pairs - h.edge_count() as i32);
        rhs += weight * gh_fast(v, &h)?;
    }
    let equal = rhs == BigRational::from_integer(lhs.clone());
    Ok(ExpansionCheck { r, lhs, rhs, equal })
}
