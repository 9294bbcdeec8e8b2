//! Eulerian vectors of the isotropic system of a graph, the graphs they
//! describe, and switchings between them.
//!
//! A tripartition (Xe, Ye, Ze) is read through the formula family: with Γ the
//! adjacency matrix, a vector of the system is determined by a set Q, and its
//! entry at w lies in X, Y, Z or none according to whether w ∈ Q and whether
//! |N_w ∩ Q| is odd. The tripartition is Eulerian iff the only such vector
//! supported inside it is zero, which is the linear condition that the rows
//! e_w (w ∈ Xe), Γ_w (w ∈ Ye) and Γ_w + e_w (w ∈ Ze) are independent.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::eval::{evaluate, Evaluator, Program};
use super::family::{adj_formula, eul, member, EULERIAN_VARS};
use super::formula::Assignment;
use crate::error::{Error, Result};
use crate::gf2::{inverse_u64, rank_u64};
use crate::graph::{bits, Graph, LcSequence, Vertex};

/// Which part of a tripartition a vertex lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Part {
    X,
    Y,
    Z,
}

impl Part {
    pub const ALL: [Part; 3] = [Part::X, Part::Y, Part::Z];
}

/// An Eulerian tripartition of V(g) for a fixed graph g.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EulerianVector {
    pub x: BTreeSet<Vertex>,
    pub y: BTreeSet<Vertex>,
    pub z: BTreeSet<Vertex>,
}

impl EulerianVector {
    /// Checks that (x, y, z) is an Eulerian tripartition of V(g).
    pub fn new(g: &Graph, x: BTreeSet<Vertex>, y: BTreeSet<Vertex>, z: BTreeSet<Vertex>) -> Result<EulerianVector> {
        let masks = tripartition_masks(g, &x, &y, &z)?;
        if !is_partition(g, masks) {
            return Err(Error::NotAPartition);
        }
        if !eulerian_masks(g, masks) {
            return Err(Error::NotEulerian);
        }
        Ok(EulerianVector { x, y, z })
    }

    /// (V, ∅, ∅), the vector describing g itself.
    pub fn initial(g: &Graph) -> EulerianVector {
        EulerianVector {
            x: g.vertex_set(),
            y: BTreeSet::new(),
            z: BTreeSet::new(),
        }
    }

    pub fn part_of(&self, v: Vertex) -> Option<Part> {
        if self.x.contains(&v) {
            Some(Part::X)
        } else if self.y.contains(&v) {
            Some(Part::Y)
        } else if self.z.contains(&v) {
            Some(Part::Z)
        } else {
            None
        }
    }

    /// The same vector with v moved into `part`.
    pub fn with_part(&self, v: Vertex, part: Part) -> EulerianVector {
        let mut out = self.clone();
        out.x.remove(&v);
        out.y.remove(&v);
        out.z.remove(&v);
        match part {
            Part::X => out.x.insert(v),
            Part::Y => out.y.insert(v),
            Part::Z => out.z.insert(v),
        };
        out
    }

    /// Assigns the three parts to the variables Xe, Ye and Ze.
    pub fn to_assignment(&self) -> Assignment {
        let [xe, ye, ze] = EULERIAN_VARS;
        Assignment::new()
            .with_set(xe, self.x.iter().copied())
            .with_set(ye, self.y.iter().copied())
            .with_set(ze, self.z.iter().copied())
    }

    /// Reads Xe, Ye and Ze back from an assignment.
    pub fn from_assignment(g: &Graph, a: &Assignment) -> Result<EulerianVector> {
        let get = |name: &str| {
            a.set(name)
                .cloned()
                .ok_or_else(|| Error::UnboundVariable(name.to_string()))
        };
        let [xe, ye, ze] = EULERIAN_VARS;
        EulerianVector::new(g, get(xe)?, get(ye)?, get(ze)?)
    }

    fn masks(&self, g: &Graph) -> Result<(u64, u64, u64)> {
        tripartition_masks(g, &self.x, &self.y, &self.z)
    }
}

fn tripartition_masks(
    g: &Graph,
    x: &BTreeSet<Vertex>,
    y: &BTreeSet<Vertex>,
    z: &BTreeSet<Vertex>,
) -> Result<(u64, u64, u64)> {
    Ok((g.mask_of(x)?, g.mask_of(y)?, g.mask_of(z)?))
}

fn is_partition(g: &Graph, (x, y, z): (u64, u64, u64)) -> bool {
    x & y == 0 && x & z == 0 && y & z == 0 && x | y | z == g.full_mask()
}

/// The constraint rows whose kernel is the set of vectors supported inside
/// the tripartition.
fn constraint_rows(g: &Graph, (x, y, _z): (u64, u64, u64)) -> Vec<u64> {
    (0..g.len())
        .map(|w| {
            let bit = 1u64 << w;
            if x & bit != 0 {
                bit
            } else if y & bit != 0 {
                g.row(w)
            } else {
                g.row(w) | bit
            }
        })
        .collect()
}

fn eulerian_masks(g: &Graph, masks: (u64, u64, u64)) -> bool {
    rank_u64(constraint_rows(g, masks)) == g.len()
}

/// Linear-algebra test of the Eulerian formula; a non-partition is not Eulerian.
pub fn is_eulerian(g: &Graph, x: &BTreeSet<Vertex>, y: &BTreeSet<Vertex>, z: &BTreeSet<Vertex>) -> Result<bool> {
    let masks = tripartition_masks(g, x, y, z)?;
    Ok(is_partition(g, masks) && eulerian_masks(g, masks))
}

/// The Eulerian formula evaluated by brute force.
pub fn is_eulerian_bruteforce(
    g: &Graph,
    x: &BTreeSet<Vertex>,
    y: &BTreeSet<Vertex>,
    z: &BTreeSet<Vertex>,
) -> Result<bool> {
    tripartition_masks(g, x, y, z)?;
    let [xe, ye, ze] = EULERIAN_VARS;
    let a = Assignment::new()
        .with_set(xe, x.iter().copied())
        .with_set(ye, y.iter().copied())
        .with_set(ze, z.iter().copied());
    evaluate(g, &eul(xe, ye, ze), &a)
}

/// Linear-algebra test of the membership formula: Q must be Y ∪ Z and the
/// vertices with an odd number of neighbors in Q must be exactly X ∪ Z.
pub fn is_member(g: &Graph, x: &BTreeSet<Vertex>, y: &BTreeSet<Vertex>, z: &BTreeSet<Vertex>) -> Result<bool> {
    let (x, y, z) = tripartition_masks(g, x, y, z)?;
    if x & y != 0 || x & z != 0 || y & z != 0 {
        return Ok(false);
    }
    let q = y | z;
    let odd = (0..g.len())
        .filter(|&w| (g.row(w) & q).count_ones() % 2 == 1)
        .fold(0u64, |m, w| m | 1 << w);
    Ok(odd == x | z)
}

pub fn is_member_bruteforce(
    g: &Graph,
    x: &BTreeSet<Vertex>,
    y: &BTreeSet<Vertex>,
    z: &BTreeSet<Vertex>,
) -> Result<bool> {
    let a = Assignment::new()
        .with_set("X", x.iter().copied())
        .with_set("Y", y.iter().copied())
        .with_set("Z", z.iter().copied());
    evaluate(g, &member("X", "Y", "Z"), &a)
}

/// Every Eulerian vector of g, in lexicographic order of the per-vertex parts.
pub fn eulerian_vectors(g: &Graph) -> Vec<EulerianVector> {
    let n = g.len();
    let mut out = Vec::new();
    let mut digits = vec![0u8; n];
    loop {
        let mut m = (0u64, 0u64, 0u64);
        for (w, d) in digits.iter().enumerate() {
            match d {
                0 => m.0 |= 1 << w,
                1 => m.1 |= 1 << w,
                _ => m.2 |= 1 << w,
            }
        }
        if eulerian_masks(g, m) {
            out.push(EulerianVector {
                x: g.labels_of(m.0),
                y: g.labels_of(m.1),
                z: g.labels_of(m.2),
            });
        }
        // Advance the base-3 counter, most significant digit at vertex 0.
        let Some(i) = (0..n).rev().find(|&i| digits[i] < 2) else {
            return out;
        };
        digits[i] += 1;
        digits[i + 1..].iter_mut().for_each(|d| *d = 0);
    }
}

/// The graph described by an Eulerian vector: u ~ v iff u lies in the
/// support of the base vector of v.
pub fn graph_from_eulerian(g: &Graph, a: &EulerianVector) -> Result<Graph> {
    let masks = a.masks(g)?;
    if !is_partition(g, masks) {
        return Err(Error::NotAPartition);
    }
    let inv = inverse_u64(&constraint_rows(g, masks)).ok_or(Error::NotEulerian)?;
    let n = g.len();
    let mut rows = vec![0u64; n];
    for v in 0..n {
        // Q solves M·Q = e_v, i.e. Q is column v of the inverse.
        let q = (0..n).filter(|&i| inv[i] >> v & 1 == 1).fold(0u64, |m, i| m | 1 << i);
        let support = (0..n)
            .filter(|&w| q >> w & 1 == 1 || (g.row(w) & q).count_ones() % 2 == 1)
            .fold(0u64, |m, w| m | 1 << w);
        rows[v] = support & !(1 << v);
    }
    // Adj(u, v) is read with v as the base vertex.
    let mut sym = vec![0u64; n];
    for v in 0..n {
        for u in bits(rows[v]) {
            sym[u] |= 1 << v;
        }
    }
    debug_assert_eq!(sym, rows, "base-vector supports must be symmetric");
    Ok(Graph::from_rows(g.vertices().to_vec(), sym))
}

/// [`graph_from_eulerian`] evaluated through the adjacency formula.
pub fn graph_from_eulerian_bruteforce(g: &Graph, a: &EulerianVector) -> Result<Graph> {
    if !is_eulerian_bruteforce(g, &a.x, &a.y, &a.z)? {
        return Err(Error::NotEulerian);
    }
    let mut prog = Program::new();
    let [xe, ye, ze] = EULERIAN_VARS;
    let c = prog.compile(&adj_formula("u", "v", xe, ye, ze))?;
    let mut ev = Evaluator::new(&prog, g)?;
    let base = a.to_assignment();
    let mut edges = Vec::new();
    for &u in g.vertices() {
        for &v in g.vertices() {
            if u < v {
                let asg = base.clone().with_vertex("u", u).with_vertex("v", v);
                if ev.evaluate(&c, &asg)? {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::from_edges(g.vertices().iter().copied(), edges)
}

/// The unique other Eulerian vector that differs from `a` only at v.
pub fn switch(g: &Graph, a: &EulerianVector, v: Vertex) -> Result<EulerianVector> {
    let current = a.part_of(v).ok_or(Error::UnknownVertex(v))?;
    if !is_eulerian(g, &a.x, &a.y, &a.z)? {
        return Err(Error::NotEulerian);
    }
    let found: Vec<EulerianVector> = Part::ALL
        .into_iter()
        .filter(|&p| p != current)
        .map(|p| a.with_part(v, p))
        .filter(|b| eulerian_masks(g, b.masks(g).expect("labels already checked")))
        .collect();
    match <[EulerianVector; 1]>::try_from(found) {
        Ok([b]) => Ok(b),
        Err(found) => Err(Error::Inconsistent(format!(
            "{} Eulerian vectors differ from the input only at vertex {v}",
            found.len()
        ))),
    }
}

/// A sequence m with τ_m(g) = graph_from_eulerian(g, a), built by switching
/// the initial vector and `a` towards each other one vertex at a time.
pub fn switching_sequence(g: &Graph, a: &EulerianVector) -> Result<LcSequence> {
    if !is_eulerian(g, &a.x, &a.y, &a.z)? {
        return Err(Error::NotEulerian);
    }
    let mut from = EulerianVector::initial(g);
    let mut to = a.clone();
    let mut m1 = LcSequence::new();
    let mut m2 = LcSequence::new();
    for &v in g.vertices() {
        if from.part_of(v) == to.part_of(v) {
            continue;
        }
        let from_s = switch(g, &from, v)?;
        let to_s = switch(g, &to, v)?;
        // Of the four values at v at most three are distinct.
        if from_s.part_of(v) == to.part_of(v) {
            from = from_s;
            m1.push(v);
        } else if to_s.part_of(v) == from.part_of(v) {
            to = to_s;
            m2.push(v);
        } else if from_s.part_of(v) == to_s.part_of(v) {
            from = from_s;
            to = to_s;
            m1.push(v);
            m2.push(v);
        } else {
            return Err(Error::Inconsistent(format!("four distinct values at vertex {v}")));
        }
    }
    debug_assert_eq!(from, to);
    Ok(m1.then(&m2.reversed()))
}
