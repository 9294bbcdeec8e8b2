//! Rank-decompositions and exact rank-width by dynamic programming over subsets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf2::cut_rank_mask;
use crate::graph::{Graph, Vertex};

/// Default cap on |V| for [`rank_width_exact`]; the DP costs O(3^n).
pub const DEFAULT_RANKWIDTH_LIMIT: usize = 12;

/// A subcubic tree together with a bijection from graph vertices onto its leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankDecomposition {
    /// Adjacency lists of the tree nodes `0..tree.len()`.
    pub tree: Vec<Vec<usize>>,
    pub leaf_map: BTreeMap<Vertex, usize>,
}

impl RankDecomposition {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.tree.iter().enumerate() {
            for &b in ns {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Checks the tree and leaf-map invariants against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidDecomposition(m.to_string()));
        let t = self.tree.len();
        if t < 2 {
            return bad("the tree needs at least two nodes");
        }
        let mut degree_sum = 0;
        for (a, ns) in self.tree.iter().enumerate() {
            if ns.len() > 3 {
                return bad(&format!("node {a} has degree {} > 3", ns.len()));
            }
            let distinct: BTreeSet<usize> = ns.iter().copied().collect();
            if distinct.len() != ns.len() || distinct.contains(&a) {
                return bad(&format!("node {a} has a loop or a repeated neighbor"));
            }
            for &b in ns {
                if b >= t || !self.tree[b].contains(&a) {
                    return bad(&format!("edge ({a}, {b}) is not symmetric"));
                }
            }
            degree_sum += ns.len();
        }
        if degree_sum / 2 != t - 1 {
            return bad("edge count differs from node count minus one");
        }
        let mut seen = vec![false; t];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for &b in &self.tree[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        if seen.contains(&false) {
            return bad("the tree is disconnected");
        }
        let leaves: BTreeSet<usize> = (0..t).filter(|&a| self.tree[a].len() == 1).collect();
        let image: BTreeSet<usize> = self.leaf_map.values().copied().collect();
        let keys: BTreeSet<Vertex> = self.leaf_map.keys().copied().collect();
        if keys != g.vertex_set() {
            return bad("leaf map domain differs from the vertex set");
        }
        if image.len() != self.leaf_map.len() || image != leaves {
            return bad("leaf map is not a bijection onto the leaves");
        }
        Ok(())
    }

    /// Position mask of the graph vertices on the `b` side of tree edge (a, b).
    fn side_mask(&self, g: &Graph, a: usize, b: usize) -> u64 {
        let mut node_to_pos = vec![None; self.tree.len()];
        for (&v, &leaf) in &self.leaf_map {
            node_to_pos[leaf] = g.position(v);
        }
        let mut mask = 0u64;
        let mut stack = vec![(b, a)];
        while let Some((x, from)) = stack.pop() {
            if let Some(p) = node_to_pos[x] {
                mask |= 1 << p;
            }
            for &y in &self.tree[x] {
                if y != from {
                    stack.push((y, x));
                }
            }
        }
        mask
    }

    /// Tree edges as indented lines, leaves shown by their vertex label.
    pub fn render(&self) -> String {
        let names: BTreeMap<usize, Vertex> = self.leaf_map.iter().map(|(&v, &l)| (l, v)).collect();
        let name = |a: usize| match names.get(&a) {
            Some(v) => format!("v{v}"),
            None => format!("t{a}"),
        };
        let mut out = String::new();
        if self.tree.is_empty() {
            return out;
        }
        let root = (0..self.tree.len()).find(|a| self.tree[*a].len() != 1).unwrap_or(0);
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some((a, from, depth)) = stack.pop() {
            for &b in self.tree[a].iter().rev() {
                if b != from {
                    let _ = writeln!(out, "{}{} -- {}", "  ".repeat(depth), name(a), name(b));
                    stack.push((b, a, depth + 1));
                }
            }
        }
        out
    }
}

/// Maximum cut-rank over the tree edges of `d`.
pub fn decomposition_width(g: &Graph, d: &RankDecomposition) -> Result<usize> {
    d.validate(g)?;
    Ok(d.edges()
        .into_iter()
        .map(|(a, b)| cut_rank_mask(g, d.side_mask(g, a, b)))
        .max()
        .unwrap_or(0))
}

/// Exact rank-width with a witness decomposition, for |V| up to the default cap.
pub fn rank_width_exact(g: &Graph) -> Result<(usize, Option<RankDecomposition>)> {
    rank_width_exact_with_limit(g, DEFAULT_RANKWIDTH_LIMIT)
}

/// Exact rank-width. Graphs with at most one vertex have width 0 and no witness.
pub fn rank_width_exact_with_limit(
    g: &Graph,
    limit: usize,
) -> Result<(usize, Option<RankDecomposition>)> {
    let n = g.len();
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "rank-width vertex count",
            actual: n,
            limit,
        });
    }
    if n <= 1 {
        return Ok((0, None));
    }
    let full = (1usize << n) - 1;
    let cut: Vec<u8> = (0..=full).map(|s| cut_rank_mask(g, s as u64) as u8).collect();
    let mut dp = vec![u8::MAX; full + 1];
    // best[s] is the part of the split of s containing its lowest vertex.
    let mut best = vec![0usize; full + 1];
    for s in 1..=full {
        if s.count_ones() == 1 {
            dp[s] = cut[s];
            continue;
        }
        let low = s & s.wrapping_neg();
        let rest = s & !low;
        // Enumerate s1 = low | t for every proper t ⊂ rest.
        let mut t = (rest.wrapping_sub(1)) & rest;
        loop {
            let s1 = low | t;
            let s2 = s & !s1;
            let w = dp[s1].max(dp[s2]).max(cut[s]);
            if w < dp[s] {
                dp[s] = w;
                best[s] = s1;
            }
            if t == 0 {
                break;
            }
            t = (t - 1) & rest;
        }
    }

    let mut tree: Vec<Vec<usize>> = Vec::new();
    let mut leaf_map = BTreeMap::new();
    fn build(
        s: usize,
        g: &Graph,
        best: &[usize],
        tree: &mut Vec<Vec<usize>>,
        leaf_map: &mut BTreeMap<Vertex, usize>,
    ) -> usize {
        let id = tree.len();
        tree.push(Vec::new());
        if s.count_ones() == 1 {
            leaf_map.insert(g.label(s.trailing_zeros() as usize), id);
            return id;
        }
        for part in [best[s], s & !best[s]] {
            let c = build(part, g, best, tree, leaf_map);
            tree[id].push(c);
            tree[c].push(id);
        }
        id
    }
    let s1 = best[full];
    let a = build(s1, g, &best, &mut tree, &mut leaf_map);
    let b = build(full & !s1, g, &best, &mut tree, &mut leaf_map);
    tree[a].push(b);
    tree[b].push(a);
    let d = RankDecomposition { tree, leaf_map };
    debug_assert_eq!(decomposition_width(g, &d).ok(), Some(dp[full] as usize));
    Ok((dp[full] as usize, Some(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    /// Width of every cubic tree with leaves 0..n, by inserting leaf k into each
    /// edge of every tree on k leaves. Degree-2 nodes never lower the width, so
    /// cubic trees suffice.
    fn brute_force_width(g: &Graph) -> usize {
        let n = g.len();
        if n <= 1 {
            return 0;
        }
        let mut best = usize::MAX;
        let mut edges: Vec<(usize, usize)> = vec![(0, 1)];
        fn rec(g: &Graph, k: usize, nodes: usize, edges: &mut Vec<(usize, usize)>, best: &mut usize) {
            let n = g.len();
            if k == n {
                let mut tree = vec![Vec::new(); nodes];
                for &(a, b) in edges.iter() {
                    tree[a].push(b);
                    tree[b].push(a);
                }
                let leaf_map = (0..n).map(|i| (g.label(i), i)).collect();
                let d = RankDecomposition { tree, leaf_map };
                *best = (*best).min(decomposition_width(g, &d).unwrap());
                return;
            }
            for e in 0..edges.len() {
                let (a, b) = edges[e];
                // Subdivide (a, b) with node `mid` and hang leaf k from it.
                let mid = nodes;
                edges[e] = (a, mid);
                edges.push((mid, b));
                edges.push((mid, k));
                rec(g, k + 1, nodes + 1, edges, best);
                edges.pop();
                edges.pop();
                edges[e] = (a, b);
            }
        }
        // Leaves take node ids 0..n; internal nodes are numbered from n.
        if n == 2 {
            return decomposition_width(
                g,
                &RankDecomposition {
                    tree: vec![vec![1], vec![0]],
                    leaf_map: [(g.label(0), 0), (g.label(1), 1)].into_iter().collect(),
                },
            )
            .unwrap();
        }
        edges.clear();
        // Start from the star on leaves 0, 1, 2 with center n.
        edges.extend([(0, n), (1, n), (2, n)]);
        rec(g, 3, n + 1, &mut edges, &mut best);
        best
    }

    #[test]
    fn decomposition_width_examples() {
        let star3 = |g: &Graph| RankDecomposition {
            tree: vec![vec![3], vec![3], vec![3], vec![0, 1, 2]],
            leaf_map: g.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect(),
        };
        let k3 = Graph::complete(&[1, 2, 3]).unwrap();
        assert_eq!(decomposition_width(&k3, &star3(&k3)).unwrap(), 1);
        let p3 = Graph::path(&[1, 2, 3]).unwrap();
        assert_eq!(decomposition_width(&p3, &star3(&p3)).unwrap(), 1);
        let e3 = Graph::edgeless([1, 2, 3]).unwrap();
        assert_eq!(decomposition_width(&e3, &star3(&e3)).unwrap(), 0);
    }

    #[test]
    fn invalid_decompositions_are_rejected() {
        let p3 = Graph::path(&[1, 2, 3]).unwrap();
        let one = RankDecomposition { tree: vec![vec![]], leaf_map: BTreeMap::new() };
        assert!(matches!(decomposition_width(&p3, &one), Err(Error::InvalidDecomposition(_))));
        let missing = RankDecomposition {
            tree: vec![vec![3], vec![3], vec![3], vec![0, 1, 2]],
            leaf_map: [(1, 0), (2, 1)].into_iter().collect(),
        };
        assert!(decomposition_width(&p3, &missing).is_err());
        let internal = RankDecomposition {
            tree: vec![vec![3], vec![3], vec![3], vec![0, 1, 2]],
            leaf_map: [(1, 0), (2, 1), (3, 3)].into_iter().collect(),
        };
        assert!(decomposition_width(&p3, &internal).is_err());
        let cycle = RankDecomposition {
            tree: vec![vec![1, 2], vec![0, 2], vec![0, 1]],
            leaf_map: [(1, 0), (2, 1), (3, 2)].into_iter().collect(),
        };
        assert!(decomposition_width(&p3, &cycle).is_err());
    }

    #[test]
    fn rank_width_known_values() {
        for n in 2..=8u32 {
            let labels: Vec<Vertex> = (0..n).collect();
            assert_eq!(rank_width_exact(&Graph::complete(&labels).unwrap()).unwrap().0, 1);
            assert_eq!(rank_width_exact(&Graph::path(&labels).unwrap()).unwrap().0, 1);
        }
        let c5 = Graph::cycle(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(brute_force_width(&c5), 2);
        assert_eq!(rank_width_exact(&c5).unwrap().0, 2);
    }

    #[test]
    fn degenerate_sizes() {
        assert_eq!(rank_width_exact(&Graph::empty()).unwrap(), (0, None));
        assert_eq!(rank_width_exact(&Graph::edgeless([7]).unwrap()).unwrap(), (0, None));
        let (w, d) = rank_width_exact(&Graph::path(&[3, 8]).unwrap()).unwrap();
        assert_eq!(w, 1);
        assert_eq!(d.unwrap().tree.len(), 2);
    }

    #[test]
    fn limit_is_enforced() {
        let g = Graph::edgeless(0..13).unwrap();
        let err = rank_width_exact(&g).unwrap_err();
        assert!(err.is_limit());
        assert!(rank_width_exact_with_limit(&g, 13).is_ok());
    }

    #[test]
    fn dp_matches_brute_force_for_all_graphs_up_to_five() {
        for n in 0..=5usize {
            for code in 0..1u64 << (n * n.saturating_sub(1) / 2) {
                let g = Graph::from_code(n, code);
                let (w, d) = rank_width_exact(&g).unwrap();
                assert_eq!(w, brute_force_width(&g), "{g:?}");
                if let Some(d) = d {
                    assert_eq!(decomposition_width(&g, &d).unwrap(), w);
                }
            }
        }
    }

    #[test]
    fn dp_matches_brute_force_on_random_six_vertex_graphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let labels: Vec<Vertex> = (0..6).collect();
        for _ in 0..60 {
            let g = Graph::random(&labels, 0.5, &mut rng).unwrap();
            assert_eq!(rank_width_exact(&g).unwrap().0, brute_force_width(&g), "{g:?}");
        }
    }

    #[test]
    fn render_lists_every_edge() {
        let (_, d) = rank_width_exact(&Graph::cycle(&[0, 1, 2, 3, 4]).unwrap()).unwrap();
        let d = d.unwrap();
        let text = d.render();
        assert_eq!(text.lines().count(), d.edges().len());
        assert!(text.contains("v4"));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..=8).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (Just(n), 0..(1u64 << pairs)).prop_map(|(n, c)| Graph::from_code(n, c))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn lc_invariance_and_deletion_monotonicity(g in arb_graph(), k in 0usize..8) {
            let v = g.vertices()[k % g.len()];
            let (w, d) = rank_width_exact(&g).unwrap();
            prop_assert_eq!(rank_width_exact(&g.local_complement(v).unwrap()).unwrap().0, w);
            prop_assert!(rank_width_exact(&g.delete_vertex(v).unwrap()).unwrap().0 <= w);
            if let Some(d) = d {
                prop_assert_eq!(decomposition_width(&g, &d).unwrap(), w);
            }
        }
    }
}
