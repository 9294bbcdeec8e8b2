//! Labeled simple graphs and the local-complementation calculus.
//!
//! A [`Graph`] stores its vertex labels in ascending order together with one
//! adjacency bit-row per vertex; bit `j` of row `i` is set when the `i`-th and
//! `j`-th smallest labels are adjacent. Identity is defined by the label set
//! and the edge set, so two graphs built in different ways compare equal when
//! they describe the same labeled graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Upper bound on the number of vertices of a [`Graph`] (one `u64` row each).
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    labels: Vec<Vertex>,
    rows: Vec<u64>,
}

/// Ordered list of vertices naming local complementations, first entry applied first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LcSequence(pub Vec<Vertex>);

impl LcSequence {
    pub fn new() -> Self {
        LcSequence(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn push(&mut self, v: Vertex) {
        self.0.push(v);
    }

    /// `self` followed by `other`.
    pub fn then(mut self, other: &LcSequence) -> LcSequence {
        self.0.extend_from_slice(&other.0);
        self
    }

    /// The same entries in reverse order; undoes `self` since every τ_v is an involution.
    pub fn reversed(&self) -> LcSequence {
        LcSequence(self.0.iter().rev().copied().collect())
    }
}

impl From<Vec<Vertex>> for LcSequence {
    fn from(v: Vec<Vertex>) -> Self {
        LcSequence(v)
    }
}

impl fmt::Display for LcSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// SHA-256 digest of a graph's labels and adjacency rows.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphDigest(pub [u8; 32]);

impl fmt::Display for GraphDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GraphDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GraphDigest({self})")
    }
}

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterate the set bits of `mask`, lowest first.
#[inline]
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl Graph {
    pub fn empty() -> Graph {
        Graph {
            labels: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// Edgeless graph on the given labels.
    pub fn edgeless<I: IntoIterator<Item = Vertex>>(labels: I) -> Result<Graph> {
        let mut labels: Vec<Vertex> = labels.into_iter().collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        if labels.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                got: labels.len(),
                max: MAX_VERTICES,
            });
        }
        let rows = vec![0; labels.len()];
        Ok(Graph { labels, rows })
    }

    /// Graph on `labels` with the given edges. Self-loops, duplicate edges and
    /// endpoints outside `labels` are rejected.
    pub fn from_edges<I, E>(labels: I, edges: E) -> Result<Graph>
    where
        I: IntoIterator<Item = Vertex>,
        E: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::edgeless(labels)?;
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let a = g.pos(u)?;
            let b = g.pos(v)?;
            if g.rows[a] >> b & 1 == 1 {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.rows[a] |= 1 << b;
            g.rows[b] |= 1 << a;
        }
        Ok(g)
    }

    /// Graph whose vertex set is exactly the endpoints of `edges`.
    pub fn from_edge_list(edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        let labels: BTreeSet<Vertex> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        Graph::from_edges(labels, edges.iter().copied())
    }

    pub(crate) fn from_rows(labels: Vec<Vertex>, rows: Vec<u64>) -> Graph {
        let g = Graph { labels, rows };
        debug_assert!(g.validate().is_ok(), "from_rows produced an invalid graph");
        g
    }

    pub fn path(labels: &[Vertex]) -> Result<Graph> {
        Graph::from_edges(labels.iter().copied(), labels.windows(2).map(|w| (w[0], w[1])))
    }

    pub fn cycle(labels: &[Vertex]) -> Result<Graph> {
        if labels.len() < 3 {
            return Err(Error::InvalidArgument("a cycle needs at least 3 vertices".into()));
        }
        let n = labels.len();
        Graph::from_edges(
            labels.iter().copied(),
            (0..n).map(|i| (labels[i], labels[(i + 1) % n])),
        )
    }

    pub fn complete(labels: &[Vertex]) -> Result<Graph> {
        let mut g = Graph::edgeless(labels.iter().copied())?;
        let full = low_mask(g.len());
        for i in 0..g.len() {
            g.rows[i] = full & !(1 << i);
        }
        Ok(g)
    }

    pub fn star(center: Vertex, leaves: &[Vertex]) -> Result<Graph> {
        Graph::from_edges(
            std::iter::once(center).chain(leaves.iter().copied()),
            leaves.iter().map(|&l| (center, l)),
        )
    }

    /// Erdős–Rényi graph on `labels` with edge probability `p`.
    pub fn random<R: Rng + ?Sized>(labels: &[Vertex], p: f64, rng: &mut R) -> Result<Graph> {
        let mut g = Graph::edgeless(labels.iter().copied())?;
        let n = g.len();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    g.rows[i] |= 1 << j;
                    g.rows[j] |= 1 << i;
                }
            }
        }
        Ok(g)
    }

    /// Graph on `0..n` whose edges are selected by the bits of `code`, pairs
    /// (i, j) with i < j taken in lexicographic order. Enumerating `code` over
    /// `0..2^(n(n-1)/2)` visits every labeled graph on `0..n` once.
    pub fn from_code(n: usize, code: u64) -> Graph {
        assert!(n <= 11, "edge code only covers graphs up to 11 vertices");
        let mut rows = vec![0u64; n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if code >> k & 1 == 1 {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
                k += 1;
            }
        }
        Graph::from_rows((0..n as Vertex).collect(), rows)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Vertex labels in ascending order.
    pub fn vertices(&self) -> &[Vertex] {
        &self.labels
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.labels.iter().copied().collect()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.labels.binary_search(&v).is_ok()
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.labels.binary_search(&v).ok()
    }

    pub(crate) fn pos(&self, v: Vertex) -> Result<usize> {
        self.position(v).ok_or(Error::UnknownVertex(v))
    }

    pub(crate) fn label(&self, pos: usize) -> Vertex {
        self.labels[pos]
    }

    /// Adjacency row of the vertex at position `pos`.
    pub(crate) fn row(&self, pos: usize) -> u64 {
        self.rows[pos]
    }

    pub(crate) fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Bitmask (over positions) of all vertices.
    pub(crate) fn full_mask(&self) -> u64 {
        low_mask(self.len())
    }

    pub(crate) fn mask_of<'a, I: IntoIterator<Item = &'a Vertex>>(&self, vs: I) -> Result<u64> {
        let mut m = 0u64;
        for &v in vs {
            m |= 1 << self.pos(v)?;
        }
        Ok(m)
    }

    pub(crate) fn labels_of(&self, mask: u64) -> BTreeSet<Vertex> {
        bits(mask).map(|i| self.labels[i]).collect()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        match (self.position(u), self.position(v)) {
            (Some(a), Some(b)) => self.rows[a] >> b & 1 == 1,
            _ => false,
        }
    }

    pub fn degree(&self, v: Vertex) -> Result<usize> {
        Ok(self.rows[self.pos(v)?].count_ones() as usize)
    }

    pub fn neighbors(&self, v: Vertex) -> Result<BTreeSet<Vertex>> {
        Ok(self.labels_of(self.rows[self.pos(v)?]))
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in bits(self.rows[i] >> (i + 1)) {
                out.push((self.labels[i], self.labels[i + 1 + j]));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Vertices of degree zero.
    pub fn isolated_vertices(&self) -> BTreeSet<Vertex> {
        (0..self.len())
            .filter(|&i| self.rows[i] == 0)
            .map(|i| self.labels[i])
            .collect()
    }

    /// Connected components as position masks, ordered by smallest member.
    pub(crate) fn component_masks(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                for i in bits(frontier) {
                    next |= self.rows[i];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<BTreeSet<Vertex>> {
        self.component_masks().into_iter().map(|m| self.labels_of(m)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.component_masks().len() <= 1
    }

    /// Checks the structural invariants: sorted distinct labels, symmetric
    /// adjacency, empty diagonal, no bits beyond the vertex count.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { got: n, max: MAX_VERTICES });
        }
        if self.rows.len() != n {
            return Err(Error::Inconsistent("row count differs from vertex count".into()));
        }
        if let Some(w) = self.labels.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::DuplicateVertex(w[1]));
        }
        let full = self.full_mask();
        for i in 0..n {
            let r = self.rows[i];
            if r & !full != 0 {
                return Err(Error::Inconsistent(format!("row {i} has bits beyond the vertex count")));
            }
            if r >> i & 1 == 1 {
                return Err(Error::SelfLoop(self.labels[i]));
            }
            for j in bits(r) {
                if self.rows[j] >> i & 1 == 0 {
                    return Err(Error::Inconsistent(format!(
                        "adjacency is not symmetric at ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// In-place τ at position `p`: XOR the row of `p` into every neighbor's row
    /// and clear the diagonal bit that this toggles.
    pub(crate) fn local_complement_at(&mut self, p: usize) {
        let nv = self.rows[p];
        for u in bits(nv) {
            self.rows[u] ^= nv & !(1u64 << u);
        }
    }

    /// Local complementation τ_v: complements the subgraph induced on N(v).
    pub fn local_complement(&self, v: Vertex) -> Result<Graph> {
        let p = self.pos(v)?;
        let mut g = self.clone();
        g.local_complement_at(p);
        Ok(g)
    }

    pub(crate) fn pivot_at(&mut self, a: usize, b: usize) {
        self.local_complement_at(b);
        self.local_complement_at(a);
        self.local_complement_at(b);
    }

    /// Pivot along the edge (u, v), i.e. τ_v ∘ τ_u ∘ τ_v.
    pub fn pivot(&self, u: Vertex, v: Vertex) -> Result<Graph> {
        let a = self.pos(u)?;
        let b = self.pos(v)?;
        if self.rows[a] >> b & 1 == 0 {
            return Err(Error::NotAnEdge(u, v));
        }
        let mut g = self.clone();
        g.pivot_at(a, b);
        Ok(g)
    }

    /// Neighbor with the smallest label, the partner of the canonical pivot at `v`.
    pub fn canonical_pivot_partner(&self, v: Vertex) -> Result<Option<Vertex>> {
        let r = self.rows[self.pos(v)?];
        Ok((r != 0).then(|| self.labels[r.trailing_zeros() as usize]))
    }

    /// T_v: pivot on (v, min N(v)), or the graph unchanged when `v` is isolated.
    pub fn canonical_pivot(&self, v: Vertex) -> Result<Graph> {
        match self.canonical_pivot_partner(v)? {
            Some(u) => self.pivot(v, u),
            None => Ok(self.clone()),
        }
    }

    pub(crate) fn delete_at(&self, p: usize) -> Graph {
        let mut labels = self.labels.clone();
        labels.remove(p);
        let low = low_mask(p);
        let rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != p)
            .map(|(_, &r)| (r & low) | ((r >> (p + 1)) << p))
            .collect();
        Graph { labels, rows }
    }

    /// G ∖ v.
    pub fn delete_vertex(&self, v: Vertex) -> Result<Graph> {
        Ok(self.delete_at(self.pos(v)?))
    }

    pub(crate) fn induced_mask(&self, mask: u64) -> Graph {
        let keep: Vec<usize> = bits(mask).collect();
        let labels = keep.iter().map(|&i| self.labels[i]).collect();
        let rows = keep
            .iter()
            .map(|&i| {
                let r = self.rows[i];
                keep.iter()
                    .enumerate()
                    .filter(|&(_, &j)| r >> j & 1 == 1)
                    .fold(0u64, |acc, (k, _)| acc | 1 << k)
            })
            .collect();
        Graph { labels, rows }
    }

    /// G[U].
    pub fn induced_subgraph(&self, subset: &BTreeSet<Vertex>) -> Result<Graph> {
        Ok(self.induced_mask(self.mask_of(subset)?))
    }

    /// τ_m(G), applying the entries of `m` first to last.
    pub fn apply_sequence(&self, m: &LcSequence) -> Result<Graph> {
        let mut g = self.clone();
        for v in m.iter() {
            let p = g.pos(v)?;
            g.local_complement_at(p);
        }
        Ok(g)
    }

    /// Deterministic digest: equal labeled graphs hash equal.
    pub fn canonical_hash(&self) -> GraphDigest {
        let mut h = Sha256::new();
        h.update((self.len() as u64).to_le_bytes());
        for &l in &self.labels {
            h.update(l.to_le_bytes());
        }
        for &r in &self.rows {
            h.update(r.to_le_bytes());
        }
        GraphDigest(h.finalize().into())
    }

    /// Disjoint union; fails when the label sets intersect.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let labels: Vec<Vertex> = self.labels.iter().chain(&other.labels).copied().collect();
        let edges = self.edges().into_iter().chain(other.edges());
        Graph::from_edges(labels, edges)
    }

    /// Serialize to the text format read by [`Graph::from_str`].
    pub fn to_text(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.len(), edges.len());
        if !self.isolated_vertices().is_empty() {
            s.push_str("V:");
            for l in &self.labels {
                s.push_str(&format!(" {l}"));
            }
            s.push('\n');
        }
        for (u, v) in edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph {{ V: {:?}, E: {:?} }}", self.labels, self.edges())
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V={:?} E={:?}", self.labels, self.edges())
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_label(tok: &str, line: usize) -> Result<Vertex> {
    tok.parse::<Vertex>()
        .map_err(|_| parse_err(line, format!("`{tok}` is not a nonnegative integer label")))
}

impl FromStr for Graph {
    type Err = Error;

    /// Text format: a header `n m`, an optional `V: l1 l2 ...` line listing
    /// vertices (needed for isolated ones), then `m` lines `u v`.
    fn from_str(s: &str) -> Result<Graph> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing `n m` header"))?;
        let nums: Vec<&str> = header.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(parse_err(hl, "header must be `n m`"));
        }
        let n: usize = nums[0].parse().map_err(|_| parse_err(hl, "bad vertex count"))?;
        let m: usize = nums[1].parse().map_err(|_| parse_err(hl, "bad edge count"))?;

        let mut labels = BTreeSet::new();
        let mut edges = Vec::with_capacity(m);
        let mut seen = BTreeSet::new();
        let mut first = true;
        for (ln, line) in lines {
            if first {
                first = false;
                if let Some(rest) = line.strip_prefix("V:") {
                    for tok in rest.split_whitespace() {
                        if !labels.insert(parse_label(tok, ln)?) {
                            return Err(parse_err(ln, format!("vertex {tok} listed twice")));
                        }
                    }
                    continue;
                }
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(parse_err(ln, "edge lines must be `u v`"));
            }
            let u = parse_label(toks[0], ln)?;
            let v = parse_label(toks[1], ln)?;
            if u == v {
                return Err(parse_err(ln, format!("self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(parse_err(ln, format!("duplicate edge {u} {v}")));
            }
            labels.insert(u);
            labels.insert(v);
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(parse_err(hl, format!("header announces {m} edges, found {}", edges.len())));
        }
        if labels.len() != n {
            return Err(parse_err(hl, format!("header announces {n} vertices, found {}", labels.len())));
        }
        Graph::from_edges(labels, edges)
    }
}

/// Serialized as `{"vertices": [...], "edges": [[u, v], ...]}`.
impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Graph", 2)?;
        st.serialize_field("vertices", self.vertices())?;
        st.serialize_field("edges", &self.edges())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Graph, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<Vertex>,
            edges: Vec<(Vertex, Vertex)>,
        }
        let raw = Raw::deserialize(d)?;
        Graph::from_edges(raw.vertices, raw.edges).map_err(serde::de::Error::custom)
    }
}

/// Breadth-first distances from `v`; unreachable vertices are absent.
pub fn bfs_distances(g: &Graph, v: Vertex) -> Result<BTreeMap<Vertex, usize>> {
    let start = g.pos(v)?;
    let mut dist = vec![usize::MAX; g.len()];
    dist[start] = 0;
    let mut q = VecDeque::from([start]);
    while let Some(i) = q.pop_front() {
        for j in bits(g.row(i)) {
            if dist[j] == usize::MAX {
                dist[j] = dist[i] + 1;
                q.push_back(j);
            }
        }
    }
    Ok((0..g.len())
        .filter(|&i| dist[i] != usize::MAX)
        .map(|i| (g.label(i), dist[i]))
        .collect())
}
