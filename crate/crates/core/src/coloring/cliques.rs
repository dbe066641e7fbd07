//! Clique counting on packed adjacency rows.
//!
//! Rows are `n` runs of `words` 64-bit words. Vertices are relabelled in
//! degeneracy order so that each clique is found once, from its earliest
//! vertex, by intersecting forward neighbourhoods.

fn bit(row: &[u64], y: usize) -> bool {
    row[y / 64] >> (y % 64) & 1 == 1
}

/// Smallest-last ordering: repeatedly removes a vertex of minimum remaining
/// degree. Returns the removal order.
pub fn degeneracy_order(rows: &[u64], n: usize, words: usize) -> Vec<usize> {
    let mut deg: Vec<usize> = (0..n)
        .map(|x| rows[x * words..(x + 1) * words].iter().map(|w| w.count_ones() as usize).sum())
        .collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertices remain");
        removed[v] = true;
        order.push(v);
        let row = &rows[v * words..(v + 1) * words];
        for u in 0..n {
            if !removed[u] && bit(row, u) {
                deg[u] -= 1;
            }
        }
    }
    order
}

/// Forward neighbourhoods in the relabelled graph: row `i` holds the
/// neighbours `j > i` of the `i`-th vertex of `order`.
fn forward_rows(rows: &[u64], n: usize, words: usize, order: &[usize]) -> Vec<u64> {
    let mut out = vec![0u64; n * words];
    for (i, &v) in order.iter().enumerate() {
        let row = &rows[v * words..(v + 1) * words];
        for (j, &u) in order.iter().enumerate().skip(i + 1) {
            if bit(row, u) {
                out[i * words + j / 64] |= 1 << (j % 64);
            }
        }
    }
    out
}

fn count_in(fwd: &[u64], words: usize, cand: &[u64], need: usize, scratch: &mut Vec<Vec<u64>>) -> u128 {
    if need == 0 {
        return 1;
    }
    if need == 1 {
        return cand.iter().map(|w| w.count_ones() as u128).sum();
    }
    let mut next = scratch.pop().unwrap_or_else(|| vec![0; words]);
    let mut total = 0u128;
    for (wi, &word) in cand.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            let u = wi * 64 + w.trailing_zeros() as usize;
            w &= w - 1;
            let row = &fwd[u * words..(u + 1) * words];
            let mut any = 0u64;
            for i in 0..words {
                next[i] = cand[i] & row[i];
                any |= next[i];
            }
            if any != 0 {
                total += count_in(fwd, words, &next, need - 1, scratch);
            }
        }
    }
    scratch.push(next);
    total
}

/// Number of `r`-vertex cliques. `r = 0` counts the empty clique once.
pub fn count_cliques(rows: &[u64], n: usize, words: usize, r: usize) -> u128 {
    if r == 0 {
        return 1;
    }
    if r > n {
        return 0;
    }
    if r == 1 {
        return n as u128;
    }
    let order = degeneracy_order(rows, n, words);
    let fwd = forward_rows(rows, n, words, &order);
    let mut scratch = Vec::new();
    (0..n)
        .map(|i| count_in(&fwd, words, &fwd[i * words..(i + 1) * words], r - 1, &mut scratch))
        .sum()
}

fn find_in(fwd: &[u64], words: usize, cand: &[u64], need: usize) -> bool {
    if need == 0 {
        return true;
    }
    let size: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
    if size < need {
        return false;
    }
    if need == 1 {
        return true;
    }
    let mut next = vec![0u64; words];
    for (wi, &word) in cand.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            let u = wi * 64 + w.trailing_zeros() as usize;
            w &= w - 1;
            let row = &fwd[u * words..(u + 1) * words];
            for i in 0..words {
                next[i] = cand[i] & row[i];
            }
            if find_in(fwd, words, &next, need - 1) {
                return true;
            }
        }
    }
    false
}

/// Whether any `r`-clique exists.
pub fn has_clique(rows: &[u64], n: usize, words: usize, r: usize) -> bool {
    if r == 0 {
        return true;
    }
    if r > n {
        return false;
    }
    let order = degeneracy_order(rows, n, words);
    let fwd = forward_rows(rows, n, words, &order);
    (0..n).any(|i| find_in(&fwd, words, &fwd[i * words..(i + 1) * words], r - 1))
}

/// Calls `f` with every `r`-clique, vertices ascending, in lexicographic order.
pub fn for_each_clique(rows: &[u64], n: usize, words: usize, r: usize, mut f: impl FnMut(&[usize])) {
    fn go(
        rows: &[u64],
        words: usize,
        n: usize,
        start: usize,
        cand: &[u64],
        need: usize,
        stack: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if need == 0 {
            f(stack);
            return;
        }
        for u in start..n {
            if !bit(cand, u) {
                continue;
            }
            let row = &rows[u * words..(u + 1) * words];
            let next: Vec<u64> = cand.iter().zip(row).map(|(a, b)| a & b).collect();
            stack.push(u);
            go(rows, words, n, u + 1, &next, need - 1, stack, f);
            stack.pop();
        }
    }
    if r == 0 || r > n {
        if r == 0 {
            f(&[]);
        }
        return;
    }
    let mut all = vec![u64::MAX; words];
    if n % 64 != 0 {
        all[words - 1] = (1u64 << (n % 64)) - 1;
    }
    let mut stack = Vec::with_capacity(r);
    go(rows, words, n, 0, &all, r, &mut stack, &mut f);
}
