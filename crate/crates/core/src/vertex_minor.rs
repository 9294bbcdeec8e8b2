//! LC orbits, LC-equivalence and the three-way branching vertex-minor search.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphDigest, LcSequence, Vertex};

/// Default cap on |V| for orbit enumeration.
pub const DEFAULT_ORBIT_LIMIT: usize = 10;

/// The LC orbit of a graph as a BFS tree: every member records the member it
/// was reached from and the vertex complemented to get there.
#[derive(Clone, Debug)]
pub struct LcOrbit {
    members: Vec<Graph>,
    parent: Vec<Option<(usize, Vertex)>>,
    index: HashMap<GraphDigest, usize>,
}

impl LcOrbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The starting graph is member 0.
    pub fn members(&self) -> &[Graph] {
        &self.members
    }

    pub fn root(&self) -> &Graph {
        &self.members[0]
    }

    pub fn find(&self, g: &Graph) -> Option<usize> {
        self.index.get(&g.canonical_hash()).copied()
    }

    pub fn contains(&self, g: &Graph) -> bool {
        self.find(g).is_some()
    }

    /// Sequence taking the root to member `i`.
    pub fn sequence_to(&self, mut i: usize) -> LcSequence {
        let mut rev = Vec::new();
        while let Some((p, v)) = self.parent[i] {
            rev.push(v);
            i = p;
        }
        rev.reverse();
        LcSequence(rev)
    }

    pub fn into_set(self) -> HashSet<Graph> {
        self.members.into_iter().collect()
    }
}

pub fn lc_orbit(g: &Graph) -> Result<LcOrbit> {
    lc_orbit_with_limit(g, DEFAULT_ORBIT_LIMIT)
}

/// Closure of `g` under single local complementations, breadth first.
pub fn lc_orbit_with_limit(g: &Graph, limit: usize) -> Result<LcOrbit> {
    if g.len() > limit {
        return Err(Error::LimitExceeded {
            what: "orbit vertex count",
            actual: g.len(),
            limit,
        });
    }
    let mut orbit = LcOrbit {
        members: vec![g.clone()],
        parent: vec![None],
        index: HashMap::from([(g.canonical_hash(), 0)]),
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for p in 0..g.len() {
            // τ at an isolated vertex is the identity.
            if orbit.members[i].row(p) == 0 {
                continue;
            }
            let mut next = orbit.members[i].clone();
            next.local_complement_at(p);
            let d = next.canonical_hash();
            if let std::collections::hash_map::Entry::Vacant(e) = orbit.index.entry(d) {
                let j = orbit.members.len();
                e.insert(j);
                orbit.members.push(next);
                orbit.parent.push(Some((i, g.label(p))));
                queue.push_back(j);
            }
        }
    }
    Ok(orbit)
}

/// A sequence m with τ_m(g) = h, or `None` if h is outside the orbit of g.
pub fn lc_equivalent(g: &Graph, h: &Graph) -> Result<Option<LcSequence>> {
    lc_equivalent_with_limit(g, h, DEFAULT_ORBIT_LIMIT)
}

pub fn lc_equivalent_with_limit(g: &Graph, h: &Graph, limit: usize) -> Result<Option<LcSequence>> {
    if g.vertices() != h.vertices() {
        return Err(Error::VertexSetMismatch);
    }
    let orbit = lc_orbit_with_limit(g, limit)?;
    Ok(orbit.find(h).map(|i| orbit.sequence_to(i)))
}

/// (g∖v, τ_v(g)∖v, T_v(g)∖v).
pub fn candidate_graphs(g: &Graph, v: Vertex) -> Result<[Graph; 3]> {
    Ok([
        g.delete_vertex(v)?,
        g.local_complement(v)?.delete_vertex(v)?,
        g.canonical_pivot(v)?.delete_vertex(v)?,
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VmWitness {
    /// τ_sequence(g) induced on `target_vertices` equals the target.
    pub sequence: LcSequence,
    pub target_vertices: BTreeSet<Vertex>,
    /// Isolated target vertices handled by measurement instead of the search.
    pub stripped: BTreeSet<Vertex>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Recursive calls, including the root.
    pub expansions: u64,
    pub base_cases: u64,
    pub memo_hits: u64,
}

/// The branching search over deletion, complement-then-delete and
/// pivot-then-delete at each vertex outside the target.
#[derive(Clone, Debug)]
pub struct VertexMinorSearch {
    pub memoize: bool,
    pub orbit_limit: usize,
    stats: SearchStats,
}

impl Default for VertexMinorSearch {
    fn default() -> Self {
        VertexMinorSearch::new()
    }
}

struct SearchCtx<'a> {
    target: &'a Graph,
    orbit: &'a LcOrbit,
    failed: HashSet<Graph>,
}

impl VertexMinorSearch {
    pub fn new() -> Self {
        VertexMinorSearch {
            memoize: true,
            orbit_limit: DEFAULT_ORBIT_LIMIT,
            stats: SearchStats::default(),
        }
    }

    pub fn unmemoized() -> Self {
        VertexMinorSearch {
            memoize: false,
            ..VertexMinorSearch::new()
        }
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    /// A sequence m with τ_m(g)[V(h)] = h, or `None` if h is not a vertex-minor of g.
    pub fn run(&mut self, g: &Graph, h: &Graph) -> Result<Option<VmWitness>> {
        self.stats = SearchStats::default();
        if !h.vertices().iter().all(|&v| g.contains(v)) {
            return Ok(None);
        }
        let orbit = lc_orbit_with_limit(h, self.orbit_limit)?;
        let mut ctx = SearchCtx {
            target: h,
            orbit: &orbit,
            failed: HashSet::new(),
        };
        let found = self.search(g.clone(), &mut ctx);
        Ok(found.map(|seq| {
            debug_assert_eq!(
                g.apply_sequence(&seq)
                    .and_then(|x| x.induced_subgraph(&h.vertex_set()))
                    .as_ref(),
                Ok(h)
            );
            VmWitness {
                sequence: seq,
                target_vertices: h.vertex_set(),
                stripped: BTreeSet::new(),
            }
        }))
    }

    fn search(&mut self, g: Graph, ctx: &mut SearchCtx<'_>) -> Option<LcSequence> {
        self.stats.expansions += 1;
        let extra = (0..g.len()).find(|&p| !ctx.target.contains(g.label(p)));
        let Some(p) = extra else {
            self.stats.base_cases += 1;
            // g = τ_s(h) implies τ_{reverse s}(g) = h.
            return ctx.orbit.find(&g).map(|i| ctx.orbit.sequence_to(i).reversed());
        };
        if self.memoize && ctx.failed.contains(&g) {
            self.stats.memo_hits += 1;
            return None;
        }
        let v = g.label(p);
        let isolated = g.row(p) == 0;

        let z = g.delete_at(p);
        if let Some(rest) = self.search(z, ctx) {
            return Some(rest);
        }
        // With deg(v) = 0 both rewrites fix g, so their branches repeat the first.
        if !isolated {
            let mut y = g.clone();
            y.local_complement_at(p);
            if let Some(rest) = self.search(y.delete_at(p), ctx) {
                return Some(LcSequence(vec![v]).then(&rest));
            }
            let q = g.row(p).trailing_zeros() as usize;
            let u = g.label(q);
            let mut x = g.clone();
            x.pivot_at(p, q);
            if let Some(rest) = self.search(x.delete_at(p), ctx) {
                return Some(LcSequence(vec![u, v, u]).then(&rest));
            }
        }
        if self.memoize {
            ctx.failed.insert(g);
        }
        None
    }
}

pub fn is_vertex_minor(g: &Graph, h: &Graph) -> Result<Option<VmWitness>> {
    VertexMinorSearch::new().run(g, h)
}

/// Independent check: does some member of the orbit of g induce h on V(h)?
pub fn vm_oracle_exhaustive(g: &Graph, h: &Graph) -> Result<bool> {
    vm_oracle_in_orbit(&lc_orbit(g)?, h)
}

/// [`vm_oracle_exhaustive`] against a precomputed orbit.
pub fn vm_oracle_in_orbit(orbit: &LcOrbit, h: &Graph) -> Result<bool> {
    let g = orbit.root();
    if !h.vertices().iter().all(|&v| g.contains(v)) {
        return Ok(false);
    }
    let mask = g.mask_of(h.vertices())?;
    Ok(orbit.members().iter().any(|m| m.induced_mask(mask) == *h))
}

/// Qubit-minor test: isolated target vertices are removed before the search,
/// since measuring a qubit and resetting it to |+⟩ isolates it.
pub fn is_qubit_minor(g: &Graph, h: &Graph) -> Result<Option<VmWitness>> {
    if !h.vertices().iter().all(|&v| g.contains(v)) {
        return Ok(None);
    }
    let stripped = h.isolated_vertices();
    let core: BTreeSet<Vertex> = h.vertex_set().difference(&stripped).copied().collect();
    let h_core = h.induced_subgraph(&core)?;
    Ok(is_vertex_minor(g, &h_core)?.map(|w| VmWitness { stripped, ..w }))
}

/// Is the complete graph on `nodes` (equivalently a GHZ state) a vertex-minor of g?
pub fn has_ghz_minor(g: &Graph, nodes: &BTreeSet<Vertex>) -> Result<Option<VmWitness>> {
    if let Some(&v) = nodes.iter().find(|&&v| !g.contains(v)) {
        return Err(Error::UnknownVertex(v));
    }
    if nodes.len() < 2 {
        return Err(Error::InvalidArgument("a GHZ target needs at least two vertices".into()));
    }
    let labels: Vec<Vertex> = nodes.iter().copied().collect();
    is_vertex_minor(g, &Graph::complete(&labels)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[Vertex]) -> BTreeSet<Vertex> {
        vs.iter().copied().collect()
    }

    fn check_witness(g: &Graph, h: &Graph, w: &VmWitness) {
        let got = g.apply_sequence(&w.sequence).unwrap().induced_subgraph(&h.vertex_set()).unwrap();
        assert_eq!(&got, h);
    }

    #[test]
    fn orbit_examples() {
        let e = Graph::path(&[3, 5]).unwrap();
        assert_eq!(lc_orbit(&e).unwrap().len(), 1);
        let star = Graph::star(0, &[1, 2, 3]).unwrap();
        assert!(lc_orbit(&star).unwrap().contains(&Graph::complete(&[0, 1, 2, 3]).unwrap()));
        // P3 on {1,2,3}: the three paths (each vertex as middle) and the triangle.
        let p3 = Graph::path(&[1, 2, 3]).unwrap();
        let orbit = lc_orbit(&p3).unwrap();
        assert_eq!(orbit.len(), 4);
        for i in 0..orbit.len() {
            assert_eq!(p3.apply_sequence(&orbit.sequence_to(i)).unwrap(), orbit.members()[i]);
        }
    }

    #[test]
    fn orbit_limit() {
        let g = Graph::edgeless(0..11).unwrap();
        assert!(lc_orbit(&g).unwrap_err().is_limit());
    }

    #[test]
    fn lc_equivalence_examples() {
        let p3 = Graph::path(&[1, 2, 3]).unwrap();
        assert_eq!(lc_equivalent(&p3, &p3).unwrap(), Some(LcSequence::new()));
        let star = Graph::star(0, &[1, 2, 3]).unwrap();
        let k4 = Graph::complete(&[0, 1, 2, 3]).unwrap();
        assert_eq!(lc_equivalent(&star, &k4).unwrap(), Some(LcSequence(vec![0])));
        assert_eq!(lc_equivalent(&p3, &Graph::edgeless([1, 2, 3]).unwrap()).unwrap(), None);
        assert_eq!(
            lc_equivalent(&p3, &Graph::path(&[1, 2, 4]).unwrap()),
            Err(Error::VertexSetMismatch)
        );
    }

    #[test]
    fn candidate_examples() {
        let g = Graph::from_edges([1, 2, 3], [(1, 2)]).unwrap();
        let [a, b, c] = candidate_graphs(&g, 3).unwrap();
        assert!(a == b && b == c && a == g.delete_vertex(3).unwrap());

        // Triangle at 1: deletion keeps edge 23, τ1 removes it, the pivot on
        // (1, 2) toggles nothing between 2 and 3 after deletion: τ2 τ1 τ2 with
        // 1 and 3 both adjacent to 2 leaves 23 present.
        let t = Graph::complete(&[1, 2, 3]).unwrap();
        let [a, b, c] = candidate_graphs(&t, 1).unwrap();
        assert_eq!(a, Graph::path(&[2, 3]).unwrap());
        assert_eq!(b, Graph::edgeless([2, 3]).unwrap());
        assert_eq!(c, t.apply_sequence(&vec![2, 1, 2].into()).unwrap().delete_vertex(1).unwrap());

        let p = Graph::path(&[1, 2, 3]).unwrap();
        let [a, b, c] = candidate_graphs(&p, 2).unwrap();
        assert_eq!(a, Graph::edgeless([1, 3]).unwrap());
        assert_eq!(b, Graph::path(&[1, 3]).unwrap());
        // The pivot on edge (2, 1) swaps 1 and 2, so 3 ends up adjacent to 1.
        assert_eq!(c, Graph::path(&[1, 3]).unwrap());
        assert!(candidate_graphs(&p, 7).is_err());
    }

    #[test]
    fn vertex_minor_examples() {
        let g = Graph::cycle(&[0, 1, 2, 3, 4]).unwrap();
        let w = is_vertex_minor(&g, &g).unwrap().unwrap();
        assert!(w.sequence.is_empty());

        let star = Graph::star(0, &[1, 2, 3]).unwrap();
        let k3 = Graph::complete(&[1, 2, 3]).unwrap();
        let w = is_vertex_minor(&star, &k3).unwrap().unwrap();
        check_witness(&star, &k3, &w);
        assert_eq!(w.sequence, LcSequence(vec![0]));

        let e = Graph::edgeless([1, 2]).unwrap();
        assert_eq!(is_vertex_minor(&e, &Graph::path(&[1, 2]).unwrap()).unwrap(), None);
        assert_eq!(is_vertex_minor(&e, &Graph::path(&[1, 5]).unwrap()).unwrap(), None);
    }

    #[test]
    fn memo_does_not_change_answers() {
        for n in 1..=5usize {
            for code in 0..1u64 << (n * (n - 1) / 2) {
                let g = Graph::from_code(n, code);
                for hcode in 0..1u64 << 3 {
                    let h = Graph::from_code(3.min(n), hcode & ((1 << (3.min(n) * (3.min(n) - 1) / 2)) - 1));
                    let a = VertexMinorSearch::new().run(&g, &h).unwrap();
                    let b = VertexMinorSearch::unmemoized().run(&g, &h).unwrap();
                    assert_eq!(a, b);
                    assert_eq!(a.is_some(), vm_oracle_exhaustive(&g, &h).unwrap());
                    if let Some(w) = a {
                        check_witness(&g, &h, &w);
                    }
                }
            }
        }
    }

    #[test]
    fn qubit_minor_strips_isolated_targets() {
        let g = Graph::path(&[1, 2]).unwrap();
        let h = Graph::edgeless([1, 2]).unwrap();
        assert_eq!(is_vertex_minor(&g, &h).unwrap(), None);
        let w = is_qubit_minor(&g, &h).unwrap().unwrap();
        assert_eq!(w.stripped, set(&[1, 2]));
        assert!(w.target_vertices.is_empty());

        let g = Graph::path(&[0, 1, 2, 3]).unwrap();
        let h = Graph::from_edges([0, 2, 3], [(2, 3)]).unwrap();
        let w = is_qubit_minor(&g, &h).unwrap().unwrap();
        assert_eq!(w.stripped, set(&[0]));
        assert_eq!(w.target_vertices, set(&[2, 3]));
        assert!(is_qubit_minor(&g, &Graph::edgeless([0, 9]).unwrap()).unwrap().is_none());
        assert_eq!(is_qubit_minor(&g, &g).unwrap().unwrap().sequence, LcSequence::new());
    }

    #[test]
    fn ghz_examples() {
        let star = Graph::star(0, &[1, 2, 3]).unwrap();
        let w = has_ghz_minor(&star, &set(&[1, 2, 3])).unwrap().unwrap();
        check_witness(&star, &Graph::complete(&[1, 2, 3]).unwrap(), &w);

        let p5 = Graph::path(&[0, 1, 2, 3, 4]).unwrap();
        let nodes = set(&[0, 2, 4]);
        let expected = vm_oracle_exhaustive(&p5, &Graph::complete(&[0, 2, 4]).unwrap()).unwrap();
        assert_eq!(has_ghz_minor(&p5, &nodes).unwrap().is_some(), expected);

        let two = Graph::from_edges([0, 1, 2, 3], [(0, 1), (2, 3)]).unwrap();
        assert_eq!(has_ghz_minor(&two, &set(&[0, 2])).unwrap(), None);
        assert!(has_ghz_minor(&two, &set(&[0, 9])).is_err());
        assert!(has_ghz_minor(&two, &set(&[0])).is_err());
    }

    #[test]
    fn expansions_bounded_by_ternary_tree() {
        for n in 3..=9u32 {
            let labels: Vec<Vertex> = (0..n).collect();
            let g = Graph::path(&labels).unwrap();
            let h = Graph::path(&[0, n - 1]).unwrap();
            let mut s = VertexMinorSearch::unmemoized();
            assert!(s.run(&g, &h).unwrap().is_some());
            let bound = (3u64.pow(n - 1) - 1) / 2;
            assert!(s.stats().expansions <= bound, "n={n}: {:?}", s.stats());
        }
    }
}
