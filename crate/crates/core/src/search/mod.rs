//! Exhaustive backtracking over colourings of `K_n` avoiding a red `K_a`
//! and a blue `K_b`.
//!
//! Edges are coloured in column-major order `(0,1), (0,2), (1,2), (0,3), ...`,
//! so each new edge is checked against the cliques already present among the
//! earlier vertices. The red neighbourhood of vertex 0 is forced to be a
//! prefix `1..=d`, which every colouring reaches by relabelling. The first
//! few edges are expanded up front and the resulting subtrees are searched in
//! parallel.

mod paley;

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::coloring::Coloring;
use crate::error::{Error, Result};

pub use paley::paley;

/// Largest `n` supported by the bitmask state.
pub const MAX_N: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop at the first witness.
    First,
    /// Walk the whole tree, counting witnesses.
    Exhaust,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    WitnessFound,
    ExhaustedUnsat,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::WitnessFound => "witness-found",
            SearchStatus::ExhaustedUnsat => "exhausted-unsat",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<Coloring>,
    /// Witnesses under the symmetry breaking; only counted in exhaust mode.
    pub witness_count: Option<u128>,
    pub nodes_explored: u128,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub n_guard: usize,
    /// Edges expanded before the tree is split into parallel subproblems.
    pub split_edges: usize,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Write one status line per finished subproblem to standard error.
    pub progress: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            n_guard: 20,
            split_edges: 12,
            threads: None,
            progress: false,
        }
    }
}

/// No red `K_a` and no blue `K_b`, by clique counting on both colours.
pub fn verify_avoidance(c: &Coloring, a: usize, b: usize) -> bool {
    let none = |col: &Coloring, k: usize| k > col.n() || col.count_red_cliques(k).is_ok_and(|v| v == 0);
    none(c, a) && none(&c.complement(), b)
}

#[derive(Clone)]
struct State {
    red: Vec<u64>,
    blue: Vec<u64>,
    /// Edges coloured so far.
    depth: usize,
}

struct Problem {
    n: usize,
    a: usize,
    b: usize,
    edges: Vec<(usize, usize)>,
}

/// Whether `adj` restricted to `cand` holds a `k`-clique.
fn clique_in(adj: &[u64], cand: u64, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if (cand.count_ones() as usize) < k {
        return false;
    }
    if k == 1 {
        return true;
    }
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        // only later vertices, so each clique is tried once
        if clique_in(adj, rest & adj[v], k - 1) {
            return true;
        }
    }
    false
}

/// Adding edge `ij` to `adj` keeps it free of `K_forbid`.
fn can_add(adj: &[u64], i: usize, j: usize, forbid: usize) -> bool {
    if forbid <= 2 {
        return false;
    }
    !clique_in(adj, adj[i] & adj[j], forbid - 2)
}

enum Walk {
    Done,
    Stop,
}

struct Counter<'a> {
    nodes: u128,
    witnesses: u128,
    first: Option<State>,
    mode: SearchMode,
    /// Abort when a lower-indexed subproblem already has a witness.
    cancel: Option<(&'a AtomicUsize, usize)>,
}

impl Problem {
    fn new(n: usize, a: usize, b: usize) -> Self {
        let edges = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        Problem { n, a, b, edges }
    }

    fn root(&self) -> State {
        State {
            red: vec![0; self.n],
            blue: vec![0; self.n],
            depth: 0,
        }
    }

    /// Colours allowed for the next edge, red first.
    fn choices(&self, s: &State) -> [Option<bool>; 2] {
        let (i, j) = self.edges[s.depth];
        let mut red_ok = can_add(&s.red, i, j, self.a);
        if i == 0 && j >= 2 && s.red[0] >> (j - 1) & 1 == 0 {
            red_ok = false;
        }
        let blue_ok = can_add(&s.blue, i, j, self.b);
        [red_ok.then_some(true), blue_ok.then_some(false)]
    }

    fn apply(&self, s: &mut State, red: bool) {
        let (i, j) = self.edges[s.depth];
        let adj = if red { &mut s.red } else { &mut s.blue };
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
        s.depth += 1;
    }

    fn undo(&self, s: &mut State, red: bool) {
        s.depth -= 1;
        let (i, j) = self.edges[s.depth];
        let adj = if red { &mut s.red } else { &mut s.blue };
        adj[i] &= !(1 << j);
        adj[j] &= !(1 << i);
    }

    /// All states at depth `limit` reachable from the root, in search order.
    fn frontier(&self, limit: usize, nodes: &mut u128) -> Vec<State> {
        fn go(p: &Problem, s: &mut State, limit: usize, nodes: &mut u128, out: &mut Vec<State>) {
            if s.depth == limit {
                out.push(s.clone());
                return;
            }
            for red in p.choices(s).into_iter().flatten() {
                *nodes += 1;
                p.apply(s, red);
                go(p, s, limit, nodes, out);
                p.undo(s, red);
            }
        }
        let mut out = Vec::new();
        go(self, &mut self.root(), limit, nodes, &mut out);
        out
    }

    fn walk(&self, s: &mut State, c: &mut Counter<'_>) -> Walk {
        if let Some((best, me)) = c.cancel {
            if best.load(Ordering::Relaxed) < me {
                return Walk::Stop;
            }
        }
        if s.depth == self.edges.len() {
            c.witnesses += 1;
            if c.first.is_none() {
                c.first = Some(s.clone());
            }
            return match c.mode {
                SearchMode::First => Walk::Stop,
                SearchMode::Exhaust => Walk::Done,
            };
        }
        for red in self.choices(s).into_iter().flatten() {
            c.nodes += 1;
            self.apply(s, red);
            let w = self.walk(s, c);
            self.undo(s, red);
            if let Walk::Stop = w {
                return Walk::Stop;
            }
        }
        Walk::Done
    }

    fn to_coloring(&self, s: &State) -> Result<Coloring> {
        Coloring::from_fn(self.n, |x, y| s.red[x] >> y & 1 == 1)
    }
}

struct SubResult {
    nodes: u128,
    witnesses: u128,
    first: Option<State>,
    finished: bool,
}

pub fn search(n: usize, a: usize, b: usize, mode: SearchMode) -> Result<SearchOutcome> {
    search_with(n, a, b, mode, &SearchOptions::default())
}

pub fn search_with(n: usize, a: usize, b: usize, mode: SearchMode, opts: &SearchOptions) -> Result<SearchOutcome> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if a < 2 || b < 2 {
        return Err(Error::InvalidArgument(format!("clique sizes must be >= 2 (got {a}, {b})")));
    }
    if n > opts.n_guard.min(MAX_N) {
        return Err(Error::SizeGuard(format!(
            "n = {n} exceeds the search guard of {}",
            opts.n_guard.min(MAX_N)
        )));
    }
    let start = Instant::now();
    let run = || run_search(n, a, b, mode, opts);
    let outcome = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    if let Some(w) = &outcome.witness {
        if !verify_avoidance(w, a, b) {
            return Err(Error::Validation("search produced a colouring that fails verification".into()));
        }
    }
    Ok(SearchOutcome {
        elapsed: start.elapsed(),
        ..outcome
    })
}

fn run_search(n: usize, a: usize, b: usize, mode: SearchMode, opts: &SearchOptions) -> Result<SearchOutcome> {
    let p = Problem::new(n, a, b);
    let split = opts.split_edges.min(p.edges.len());
    let mut nodes = 0u128;
    let frontier = p.frontier(split, &mut nodes);
    let best = AtomicUsize::new(usize::MAX);
    let total = frontier.len();
    let results: Vec<SubResult> = frontier
        .into_par_iter()
        .enumerate()
        .map(|(idx, mut s)| {
            let mut c = Counter {
                nodes: 0,
                witnesses: 0,
                first: None,
                mode,
                cancel: (mode == SearchMode::First).then_some((&best, idx)),
            };
            let w = p.walk(&mut s, &mut c);
            let finished = matches!(w, Walk::Done) || c.first.is_some();
            if c.first.is_some() {
                best.fetch_min(idx, Ordering::Relaxed);
            }
            if opts.progress {
                let _ = writeln!(
                    std::io::stderr(),
                    "{{\"subproblem\":{idx},\"of\":{total},\"depth\":{split},\"nodes\":{},\"witness\":{}}}",
                    c.nodes,
                    c.first.is_some()
                );
            }
            SubResult {
                nodes: c.nodes,
                witnesses: c.witnesses,
                first: c.first,
                finished,
            }
        })
        .collect();

    let winner = results.iter().position(|r| r.first.is_some());
    let counted = match (mode, winner) {
        (SearchMode::First, Some(w)) => &results[..=w],
        _ => &results[..],
    };
    debug_assert!(counted.iter().all(|r| r.finished));
    nodes += counted.iter().map(|r| r.nodes).sum::<u128>();
    let witness = match winner {
        Some(w) => Some(p.to_coloring(results[w].first.as_ref().expect("winner has a witness"))?),
        None => None,
    };
    Ok(SearchOutcome {
        status: if witness.is_some() {
            SearchStatus::WitnessFound
        } else {
            SearchStatus::ExhaustedUnsat
        },
        witness,
        witness_count: (mode == SearchMode::Exhaust).then(|| results.iter().map(|r| r.witnesses).sum()),
        nodes_explored: nodes,
        elapsed: Duration::ZERO,
    })
}

/// Result of scanning `n = 1, 2, ...` for the first unsatisfiable size.
#[derive(Clone, Debug)]
pub struct RamseyOutcome {
    pub a: usize,
    pub b: usize,
    /// `r(a, b)` when resolved within `n_max`.
    pub value: Option<usize>,
    /// A colouring of `K_{value-1}` avoiding both cliques.
    pub witness: Option<Coloring>,
    /// `(n, status, nodes)` for every size searched.
    pub steps: Vec<(usize, SearchStatus, u128)>,
}

pub fn ramsey_number(a: usize, b: usize, n_max: usize) -> Result<RamseyOutcome> {
    ramsey_number_with(a, b, n_max, &SearchOptions::default())
}

pub fn ramsey_number_with(a: usize, b: usize, n_max: usize, opts: &SearchOptions) -> Result<RamseyOutcome> {
    if a < 2 || b < 2 {
        return Err(Error::InvalidArgument(format!("clique sizes must be >= 2 (got {a}, {b})")));
    }
    let mut out = RamseyOutcome {
        a,
        b,
        value: None,
        witness: None,
        steps: Vec::new(),
    };
    let mut last_witness = None;
    for n in 1..=n_max {
        let res = search_with(n, a, b, SearchMode::First, opts)?;
        out.steps.push((n, res.status, res.nodes_explored));
        match res.status {
            SearchStatus::WitnessFound => last_witness = res.witness,
            SearchStatus::ExhaustedUnsat => {
                out.value = Some(n);
                out.witness = last_witness;
                return Ok(out);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_masks() {
        // triangle 0-1-2 plus pendant 3
        let adj = [0b0110, 0b0101, 0b1011, 0b0100];
        assert!(clique_in(&adj, 0b1111, 3));
        assert!(!clique_in(&adj, 0b1111, 4));
        assert!(!clique_in(&adj, 0b1011, 3));
        assert!(!can_add(&adj, 0, 3, 2));
    }

    #[test]
    fn r33_is_six() {
        let five = search(5, 3, 3, SearchMode::First).unwrap();
        assert_eq!(five.status, SearchStatus::WitnessFound);
        let w = five.witness.unwrap();
        assert_eq!(w.red_edge_count(), 5);
        assert!(w.red_degrees().iter().all(|&d| d == 2));
        let six = search(6, 3, 3, SearchMode::Exhaust).unwrap();
        assert_eq!(six.status, SearchStatus::ExhaustedUnsat);
        assert_eq!(ramsey_number(3, 3, 10).unwrap().value, Some(6));
    }

    #[test]
    fn two_column() {
        for b in 2..=6 {
            let res = ramsey_number(2, b, 10).unwrap();
            assert_eq!(res.value, Some(b));
            // the all-blue K_{b-1}
            let w = res.witness.unwrap();
            assert_eq!((w.n(), w.red_edge_count()), (b - 1, 0));
        }
    }

    #[test]
    fn colour_swap_symmetry() {
        for n in 3..=8 {
            let ab = search(n, 3, 4, SearchMode::First).unwrap().status;
            let ba = search(n, 4, 3, SearchMode::First).unwrap().status;
            assert_eq!(ab, ba, "n = {n}");
        }
    }

    #[test]
    fn deterministic_node_counts() {
        let opts = |t| SearchOptions {
            threads: Some(t),
            ..SearchOptions::default()
        };
        let one = search_with(8, 3, 4, SearchMode::First, &opts(1)).unwrap();
        let four = search_with(8, 3, 4, SearchMode::First, &opts(4)).unwrap();
        assert_eq!(one.nodes_explored, four.nodes_explored);
        assert_eq!(one.witness, four.witness);
        let e1 = search_with(6, 3, 3, SearchMode::Exhaust, &opts(1)).unwrap();
        let e3 = search_with(6, 3, 3, SearchMode::Exhaust, &opts(3)).unwrap();
        assert_eq!(e1.nodes_explored, e3.nodes_explored);
    }

    #[test]
    fn exhaust_counts_witnesses() {
        let res = search(5, 3, 3, SearchMode::Exhaust).unwrap();
        // pentagons on 5 labelled vertices whose red neighbours of 0 are {1, 2}
        assert_eq!(res.witness_count, Some(2));
    }

    #[test]
    fn guards() {
        assert!(matches!(search(21, 3, 3, SearchMode::First), Err(Error::SizeGuard(_))));
        assert!(search(5, 1, 3, SearchMode::First).is_err());
    }

    #[test]
    fn verify_examples() {
        let pent = paley(5).unwrap();
        assert!(verify_avoidance(&pent, 3, 3));
        assert!(!verify_avoidance(&Coloring::complete(3, true).unwrap(), 3, 3));
        assert!(verify_avoidance(&paley(17).unwrap(), 4, 4));
    }
}
