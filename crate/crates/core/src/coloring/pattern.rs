use crate::error::{Error, Result};

/// Largest pattern accepted. Naive evaluation is `n^r` tuples.
pub const MAX_PATTERN_VERTICES: usize = 8;

/// A labelled graph `H` on vertices `0..r`, edges stored as sorted `(i, j)`
/// with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternGraph {
    r: usize,
    edges: Vec<(usize, usize)>,
}

impl PatternGraph {
    pub fn new(r: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if r == 0 || r > MAX_PATTERN_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "pattern graphs need 1..={MAX_PATTERN_VERTICES} vertices (got {r})"
            )));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= r || b >= r {
                return Err(Error::InvalidArgument(format!("edge ({a}, {b}) outside 0..{r}")));
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("loop at vertex {a}")));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(PatternGraph { r, edges: norm })
    }

    pub fn empty(r: usize) -> Result<Self> {
        Self::new(r, &[])
    }

    pub fn complete(r: usize) -> Result<Self> {
        let edges: Vec<_> = (0..r).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        Self::new(r, &edges)
    }

    /// Path through `vertices` vertices.
    pub fn path(vertices: usize) -> Result<Self> {
        let edges: Vec<_> = (1..vertices).map(|i| (i - 1, i)).collect();
        Self::new(vertices, &edges)
    }

    pub fn cycle(vertices: usize) -> Result<Self> {
        if vertices < 3 {
            return Err(Error::InvalidArgument("cycles need at least 3 vertices".into()));
        }
        let mut edges: Vec<_> = (1..vertices).map(|i| (i - 1, i)).collect();
        edges.push((0, vertices - 1));
        Self::new(vertices, &edges)
    }

    /// The `mask`-th labelled spanning subgraph of `K_r`: bit `i` selects the
    /// `i`-th pair in the order `(0,1), (0,2), (1,2), (0,3), ...`.
    pub fn from_mask(r: usize, mask: u64) -> Result<Self> {
        let pairs = all_pairs(r);
        if pairs.len() < 64 && mask >> pairs.len() != 0 {
            return Err(Error::InvalidArgument("mask selects pairs beyond K_r".into()));
        }
        let edges: Vec<_> = pairs
            .into_iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        Self::new(r, &edges)
    }

    /// All `2^{C(r,2)}` labelled spanning subgraphs of `K_r`.
    pub fn all_subgraphs(r: usize) -> Result<Vec<Self>> {
        let m = r * r.saturating_sub(1) / 2;
        if m > 20 {
            return Err(Error::SizeGuard(format!("2^{m} subgraphs of K_{r}")));
        }
        (0..1u64 << m).map(|mask| Self::from_mask(r, mask)).collect()
    }

    pub fn vertices(&self) -> usize {
        self.r
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.r];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Adds one isolated vertex, labelled `r`.
    pub fn with_isolated_vertex(&self) -> Result<Self> {
        Self::new(self.r + 1, &self.edges)
    }

    /// `self` on `0..r`, `other` shifted to `r..r + other.r`.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(a, b)| (a + self.r, b + self.r)));
        Self::new(self.r + other.r, &edges)
    }

    /// Connected components, each sorted ascending, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.r];
        let mut out = Vec::new();
        for s in 0..self.r {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for &(a, b) in &self.edges {
                    let w = if a == v {
                        b
                    } else if b == v {
                        a
                    } else {
                        continue;
                    };
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// The subgraph induced on `vs`, relabelled `0..vs.len()` in the given order.
    pub fn induced(&self, vs: &[usize]) -> Result<Self> {
        let pos = |v: usize| vs.iter().position(|&u| u == v);
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((pos(a)?, pos(b)?)))
            .collect();
        Self::new(vs.len(), &edges)
    }

    /// For a connected graph: the vertices in path order, if it is a path.
    pub(crate) fn as_path(&self) -> Option<Vec<usize>> {
        let deg = self.degrees();
        if self.edges.len() + 1 != self.r || deg.iter().any(|&d| d > 2) {
            return None;
        }
        if self.r == 1 {
            return Some(vec![0]);
        }
        let start = deg.iter().position(|&d| d == 1)?;
        Some(self.walk_from(start))
    }

    /// For a connected graph: whether it is a single cycle.
    pub(crate) fn is_cycle(&self) -> bool {
        self.r >= 3 && self.edges.len() == self.r && self.degrees().iter().all(|&d| d == 2)
    }

    fn walk_from(&self, start: usize) -> Vec<usize> {
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = self.edges.iter().find_map(|&(a, b)| {
                let w = if a == cur {
                    b
                } else if b == cur {
                    a
                } else {
                    return None;
                };
                (w != prev && !order.contains(&w)).then_some(w)
            });
            match next {
                Some(w) => {
                    prev = cur;
                    cur = w;
                    order.push(w);
                }
                None => return order,
            }
        }
    }
}

/// Pairs of `K_r` in column-major order.
pub fn all_pairs(r: usize) -> Vec<(usize, usize)> {
    (0..r).flat_map(|j| (0..j).map(move |i| (i, j))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_and_guards() {
        let h = PatternGraph::new(3, &[(1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(h.edges(), &[(0, 1), (1, 2)]);
        assert!(PatternGraph::new(3, &[(0, 0)]).is_err());
        assert!(PatternGraph::new(3, &[(0, 3)]).is_err());
        assert!(PatternGraph::new(9, &[]).is_err());
        assert!(PatternGraph::new(0, &[]).is_err());
    }

    #[test]
    fn subgraph_enumeration() {
        let all = PatternGraph::all_subgraphs(4).unwrap();
        assert_eq!(all.len(), 64);
        assert_eq!(all[63], PatternGraph::complete(4).unwrap());
        assert_eq!(all[0], PatternGraph::empty(4).unwrap());
    }

    #[test]
    fn shapes() {
        let p = PatternGraph::new(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(p.as_path(), Some(vec![1, 3, 0, 2]));
        assert!(!p.is_cycle());
        let c = PatternGraph::cycle(5).unwrap();
        assert!(c.is_cycle());
        assert_eq!(c.as_path(), None);
        let star = PatternGraph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.as_path(), None);
        assert_eq!(star.max_degree(), 3);
        assert_eq!(PatternGraph::empty(1).unwrap().as_path(), Some(vec![0]));
    }

    #[test]
    fn components_and_induced() {
        let two = PatternGraph::new(2, &[(0, 1)]).unwrap();
        let h = two.disjoint_union(&two).unwrap().with_isolated_vertex().unwrap();
        assert_eq!(h.components(), vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert_eq!(h.induced(&[2, 3]).unwrap(), two);
    }
}
