//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's own linear algebra or search code.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::io::Write;

use vmkit::Graph;

/// One result line, written past the test harness capture so it shows up in
/// plain `cargo test` output.
pub fn report(id: u32, name: &str, ok: bool, detail: &str) {
    let line = format!(
        "ACCEPTANCE C{id:02} {} {name}: {detail}\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

/// Adjacency rows of `g` in label order.
pub fn rows(g: &Graph) -> Vec<u64> {
    let vs = g.vertices();
    vs.iter()
        .map(|&u| {
            vs.iter()
                .enumerate()
                .filter(|&(_, &w)| g.has_edge(u, w))
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect()
}

/// Rank over GF(2) by an xor basis indexed by leading bit.
pub fn rank2(vectors: impl IntoIterator<Item = u64>) -> usize {
    let mut basis = [0u64; 64];
    let mut r = 0;
    for mut x in vectors {
        while x != 0 {
            let top = 63 - x.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = x;
                r += 1;
                break;
            }
            x ^= basis[top];
        }
    }
    r
}

/// Rank of the A × (V∖A) adjacency block, A given as a position mask.
pub fn cut_rank_mask(rows: &[u64], a: u64) -> usize {
    let all = if rows.len() == 64 { u64::MAX } else { (1u64 << rows.len()) - 1 };
    rank2((0..rows.len()).filter(|i| a >> i & 1 == 1).map(|i| rows[i] & all & !a))
}

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// Canonical code of an n-vertex graph (n ≤ 8): the largest edge code over
/// all orderings that respect a colour refinement of the vertices.
pub fn canonical_code(n: usize, adj: &[u8]) -> u64 {
    let mut colors: Vec<usize> = adj.iter().map(|r| r.count_ones() as usize).collect();
    let mut ncolors = 0;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|i| {
                let mut ns: Vec<usize> = (0..n).filter(|&j| adj[i] >> j & 1 == 1).map(|j| colors[j]).collect();
                ns.sort_unstable();
                (colors[i], ns)
            })
            .collect();
        let distinct: BTreeSet<&(usize, Vec<usize>)> = sigs.iter().collect();
        let order: Vec<&(usize, Vec<usize>)> = distinct.into_iter().collect();
        colors = sigs.iter().map(|s| order.binary_search(&s).unwrap()).collect();
        if order.len() == ncolors {
            break;
        }
        ncolors = order.len();
    }
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); ncolors];
    for (i, &c) in colors.iter().enumerate() {
        cells[c].push(i);
    }
    let pairs = pair_index(n);
    let mut best = 0u64;
    let mut perm = Vec::with_capacity(n);
    let mut used = 0u8;
    fn rec(
        cells: &[Vec<usize>],
        ci: usize,
        perm: &mut Vec<usize>,
        used: &mut u8,
        adj: &[u8],
        pairs: &[(usize, usize)],
        best: &mut u64,
    ) {
        if ci == cells.len() {
            let code = pairs
                .iter()
                .enumerate()
                .filter(|(_, &(i, j))| adj[perm[i]] >> perm[j] & 1 == 1)
                .fold(0u64, |c, (k, _)| c | 1 << k);
            *best = (*best).max(code);
            return;
        }
        let placed = perm.len();
        let cell_start = cells[..ci].iter().map(|c| c.len()).sum::<usize>();
        if placed == cell_start + cells[ci].len() {
            rec(cells, ci + 1, perm, used, adj, pairs, best);
            return;
        }
        for &v in &cells[ci] {
            if *used >> v & 1 == 0 {
                *used |= 1 << v;
                perm.push(v);
                rec(cells, ci, perm, used, adj, pairs, best);
                perm.pop();
                *used &= !(1 << v);
            }
        }
    }
    rec(&cells, 0, &mut perm, &mut used, adj, &pairs, &mut best);
    best
}

pub fn graph_from_pair_code(n: usize, code: u64) -> Graph {
    let edges: Vec<(u32, u32)> = pair_index(n)
        .into_iter()
        .enumerate()
        .filter(|(k, _)| code >> k & 1 == 1)
        .map(|(_, (i, j))| (i as u32, j as u32))
        .collect();
    Graph::from_edges(0..n as u32, edges).unwrap()
}

/// One representative per isomorphism class, for each n in 0..=max_n.
pub fn isomorphism_classes(max_n: usize) -> Vec<Vec<Graph>> {
    assert!(max_n <= 8);
    let mut by_n: Vec<Vec<u64>> = vec![vec![0]];
    for n in 1..=max_n {
        let mut next = BTreeSet::new();
        for &code in &by_n[n - 1] {
            let mut adj = vec![0u8; n];
            for (k, (i, j)) in pair_index(n - 1).into_iter().enumerate() {
                if code >> k & 1 == 1 {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
            for nb in 0..1u16 << (n - 1) {
                let mut a = adj.clone();
                a[n - 1] = nb as u8;
                for (i, row) in a.iter_mut().enumerate().take(n - 1) {
                    if nb >> i & 1 == 1 {
                        *row |= 1 << (n - 1);
                    }
                }
                next.insert(canonical_code(n, &a));
            }
        }
        by_n.push(next.into_iter().collect());
    }
    by_n.iter()
        .enumerate()
        .map(|(n, codes)| codes.iter().map(|&c| graph_from_pair_code(n, c)).collect())
        .collect()
}

/// Every labeled graph on 0..n.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    (0..1u64 << (n * n.saturating_sub(1) / 2)).map(move |c| Graph::from_code(n, c))
}

/// Rank-width by enumerating every subcubic tree whose leaves are the vertices.
pub fn rank_width_brute_force(g: &Graph) -> usize {
    let n = g.len();
    if n <= 1 {
        return 0;
    }
    let r = rows(g);
    // Leaves are nodes 0..n; internal nodes follow.
    let mut best = usize::MAX;
    let mut trees = vec![vec![(0usize, 1usize)]];
    for leaf in 2..n {
        let mut grown = Vec::new();
        for t in &trees {
            let internal = n + leaf - 2;
            for e in 0..t.len() {
                let (a, b) = t[e];
                let mut nt = t.clone();
                nt[e] = (a, internal);
                nt.push((internal, b));
                nt.push((internal, leaf));
                grown.push(nt);
            }
        }
        trees = grown;
    }
    for t in &trees {
        let width = t
            .iter()
            .map(|&(a, b)| cut_rank_mask(&r, side_leaves(t, a, b, n)))
            .max()
            .unwrap();
        best = best.min(width);
    }
    best
}

/// Leaves reachable from `a` without crossing edge (a, b), as a position mask.
fn side_leaves(t: &[(usize, usize)], a: usize, b: usize, n: usize) -> u64 {
    let mut mask = 0u64;
    let mut stack = vec![(a, b)];
    while let Some((x, from)) = stack.pop() {
        if x < n {
            mask |= 1 << x;
        }
        for &(p, q) in t {
            let y = if p == x { q } else if q == x { p } else { continue };
            if y != from {
                stack.push((y, x));
            }
        }
    }
    mask
}
