//! Pauli measurements on graphs and one-round extraction plans.
//!
//! A plan applies the local Cliffords of an LC sequence, measures a set of
//! qubits in the standard basis simultaneously, and then corrects every
//! surviving qubit with a Z whose exponent is the parity of the outcomes
//! observed on its measured neighbors.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, Graph, LcSequence, Vertex};
use crate::vertex_minor::is_qubit_minor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub vertex: Vertex,
    pub basis: Basis,
    /// `false` for the +1 eigenvalue, `true` for −1.
    pub outcome: bool,
}

/// Graph left behind by a Pauli measurement of `v`, up to local Cliffords.
pub fn measure_update(g: &Graph, v: Vertex, basis: Basis) -> Result<Graph> {
    match basis {
        Basis::Z => g.delete_vertex(v),
        Basis::Y => g.local_complement(v)?.delete_vertex(v),
        Basis::X => g.canonical_pivot(v)?.delete_vertex(v),
    }
}

/// Outcome map restricted to `measured`, failing on a missing entry.
fn outcome_mask(h: &Graph, measured: u64, outcomes: &BTreeMap<Vertex, bool>) -> Result<u64> {
    let mut ones = 0u64;
    for p in bits(measured) {
        let v = h.label(p);
        match outcomes.get(&v) {
            Some(true) => ones |= 1 << p,
            Some(false) => {}
            None => return Err(Error::MissingOutcome(v)),
        }
    }
    Ok(ones)
}

/// Corrections for every vertex of `keep` after measuring the vertices of
/// `measured` in Z: the parity of the −1 outcomes among its measured neighbors.
pub fn z_corrections_for(
    h: &Graph,
    measured: &BTreeSet<Vertex>,
    keep: &BTreeSet<Vertex>,
    outcomes: &BTreeMap<Vertex, bool>,
) -> Result<BTreeMap<Vertex, bool>> {
    let ones = outcome_mask(h, h.mask_of(measured)?, outcomes)?;
    let mut out = BTreeMap::new();
    for &v in keep {
        let p = h.pos(v)?;
        out.insert(v, (h.row(p) & ones).count_ones() % 2 == 1);
    }
    Ok(out)
}

/// Z-corrections on `target` and the sign parity |E(h[ones])| mod 2 when every
/// vertex outside `target` is measured in Z.
pub fn z_corrections(
    h: &Graph,
    target: &BTreeSet<Vertex>,
    outcomes: &BTreeMap<Vertex, bool>,
) -> Result<(BTreeMap<Vertex, bool>, bool)> {
    let tmask = h.mask_of(target)?;
    let measured = h.full_mask() & !tmask;
    let ones = outcome_mask(h, measured, outcomes)?;
    let corrections = z_corrections_for(h, &h.labels_of(measured), target, outcomes)?;
    Ok((corrections, phase_parity(h, ones)))
}

fn phase_parity(h: &Graph, ones: u64) -> bool {
    let twice: u32 = bits(ones).map(|p| (h.row(p) & ones).count_ones()).sum();
    (twice / 2) % 2 == 1
}

/// Clifford stage, one parallel round of Z measurements and the Z corrections
/// that deliver the target graph state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionPlan {
    pub clifford_stage: LcSequence,
    /// τ_{clifford_stage}(G), the graph that is measured.
    pub rewritten_graph: Graph,
    pub measured: Vec<Vertex>,
    /// Vertices of the target that carry edges.
    pub target: BTreeSet<Vertex>,
    /// For each target vertex, the measured neighbors whose outcome parity
    /// decides its Z correction.
    pub correction_sets: BTreeMap<Vertex, BTreeSet<Vertex>>,
    pub boundary: BTreeSet<Vertex>,
    /// Unmeasured vertices outside the target, with their induced graph.
    pub residual: Graph,
    pub residual_corrections: BTreeMap<Vertex, BTreeSet<Vertex>>,
    /// Isolated target vertices: measured, then rotated back to |+⟩ by H followed by Z^outcome.
    pub reset_to_plus: BTreeSet<Vertex>,
}

impl ExtractionPlan {
    pub fn measured_set(&self) -> BTreeSet<Vertex> {
        self.measured.iter().copied().collect()
    }

    /// Checks the structural invariants against the source graph.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedPlan(m));
        let h = g.apply_sequence(&self.clifford_stage)?;
        if h != self.rewritten_graph {
            return bad("rewritten graph differs from the Clifford stage applied to G".into());
        }
        let measured = self.measured_set();
        if measured.len() != self.measured.len() {
            return bad("a vertex is measured twice".into());
        }
        if !measured.is_disjoint(&self.target) {
            return bad("a target vertex is measured".into());
        }
        let all = g.vertex_set();
        if !measured.is_subset(&all) || !self.target.is_subset(&all) {
            return bad("plan mentions vertices outside G".into());
        }
        if !self.reset_to_plus.is_subset(&measured) {
            return bad("reset vertices must be measured".into());
        }
        let mut boundary = BTreeSet::new();
        for &v in &self.target {
            let outside: BTreeSet<Vertex> = h.neighbors(v)?.difference(&self.target).copied().collect();
            if self.correction_sets.get(&v) != Some(&outside) {
                return bad(format!("correction set of {v} differs from its outside neighborhood"));
            }
            if !outside.is_subset(&measured) {
                return bad(format!("correction set of {v} contains unmeasured vertices"));
            }
            boundary.extend(outside);
        }
        if self.correction_sets.len() != self.target.len() {
            return bad("correction sets cover vertices outside the target".into());
        }
        if boundary != self.boundary {
            return bad("boundary differs from the outside neighborhood of the target".into());
        }
        let rest: BTreeSet<Vertex> = all
            .difference(&measured)
            .filter(|v| !self.target.contains(v))
            .copied()
            .collect();
        if self.residual.vertex_set() != rest || h.induced_subgraph(&rest)? != self.residual {
            return bad("residual is not the graph induced on the unmeasured remainder".into());
        }
        for &r in &rest {
            let m: BTreeSet<Vertex> = h.neighbors(r)?.intersection(&measured).copied().collect();
            if self.residual_corrections.get(&r) != Some(&m) {
                return bad(format!("residual correction set of {r} is wrong"));
            }
        }
        if self.residual_corrections.len() != rest.len() {
            return bad("residual corrections cover unexpected vertices".into());
        }
        // After deleting the measured vertices the target is its own union of components.
        let after = h.induced_subgraph(&all.difference(&measured).copied().collect())?;
        for &v in &self.target {
            if !after.neighbors(v)?.is_subset(&self.target) {
                return bad(format!("target vertex {v} keeps an edge outside the target"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges = |g: &Graph| -> Vec<[Vertex; 2]> { g.edges().into_iter().map(|(u, v)| [u, v]).collect() };
        serde_json::json!({
            "sequence": self.clifford_stage,
            "measured": self.measured,
            "corrections": self.correction_sets,
            "boundary": self.boundary,
            "residual_edges": edges(&self.residual),
            "residual_vertices": self.residual.vertices(),
            "residual_corrections": self.residual_corrections,
            "target": self.target,
            "target_edges": edges(&self.rewritten_graph.induced_subgraph(&self.target).unwrap_or_else(|_| Graph::empty())),
            "reset_to_plus": self.reset_to_plus,
        })
    }
}

/// Plan extracting `h` from `g`, or `None` if `h` is not a qubit-minor of `g`.
///
/// With `preserve_rest` only the boundary of the target (and the isolated
/// target vertices) is measured, so the remaining vertices keep their
/// entanglement as a separate residual graph state.
pub fn plan_extraction(g: &Graph, h: &Graph, preserve_rest: bool) -> Result<Option<ExtractionPlan>> {
    let Some(w) = is_qubit_minor(g, h)? else {
        return Ok(None);
    };
    let hh = g.apply_sequence(&w.sequence)?;
    let target = w.target_vertices.clone();
    let mut correction_sets = BTreeMap::new();
    let mut boundary = BTreeSet::new();
    for &v in &target {
        let outside: BTreeSet<Vertex> = hh.neighbors(v)?.difference(&target).copied().collect();
        boundary.extend(outside.iter().copied());
        correction_sets.insert(v, outside);
    }
    let measured: BTreeSet<Vertex> = if preserve_rest {
        boundary.union(&w.stripped).copied().collect()
    } else {
        g.vertex_set().difference(&target).copied().collect()
    };
    let rest: BTreeSet<Vertex> = g
        .vertex_set()
        .difference(&measured)
        .filter(|v| !target.contains(v))
        .copied()
        .collect();
    let residual = hh.induced_subgraph(&rest)?;
    let mut residual_corrections = BTreeMap::new();
    for &r in &rest {
        residual_corrections.insert(r, hh.neighbors(r)?.intersection(&measured).copied().collect());
    }
    let plan = ExtractionPlan {
        clifford_stage: w.sequence,
        rewritten_graph: hh,
        measured: measured.into_iter().collect(),
        target,
        correction_sets,
        boundary,
        residual,
        residual_corrections,
        reset_to_plus: w.stripped,
    };
    debug_assert!(plan.validate(g).is_ok());
    Ok(Some(plan))
}

/// What a plan delivers for a particular set of outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalState {
    pub target_graph: Graph,
    /// Z applied to target vertices whose entry is `true`.
    pub corrections: BTreeMap<Vertex, bool>,
    pub residual: Graph,
    pub residual_corrections: BTreeMap<Vertex, bool>,
    /// Measured vertices other than the reset ones, left in |outcome⟩.
    pub measured_outcomes: BTreeMap<Vertex, bool>,
    pub reset_to_plus: BTreeSet<Vertex>,
    /// Parity of the edges among measured vertices with outcome 1; a global sign.
    pub phase_parity: bool,
}

/// Applies the outcome-dependent corrections of `plan`.
pub fn replay_plan(plan: &ExtractionPlan, outcomes: &BTreeMap<Vertex, bool>) -> Result<FinalState> {
    let h = &plan.rewritten_graph;
    let measured = plan.measured_set();
    if let Some(&v) = outcomes.keys().find(|v| !measured.contains(v)) {
        return Err(Error::MalformedPlan(format!("outcome given for unmeasured vertex {v}")));
    }
    let ones = outcome_mask(h, h.mask_of(&measured)?, outcomes)?;
    let corrections = z_corrections_for(h, &measured, &plan.target, outcomes)?;
    let residual_corrections = z_corrections_for(h, &measured, &plan.residual.vertex_set(), outcomes)?;
    let measured_outcomes = measured
        .iter()
        .filter(|v| !plan.reset_to_plus.contains(v))
        .map(|&v| (v, outcomes[&v]))
        .collect();
    Ok(FinalState {
        target_graph: h.induced_subgraph(&plan.target)?,
        corrections,
        residual: plan.residual.clone(),
        residual_corrections,
        measured_outcomes,
        reset_to_plus: plan.reset_to_plus.clone(),
        phase_parity: phase_parity(h, ones),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[Vertex]) -> BTreeSet<Vertex> {
        vs.iter().copied().collect()
    }

    #[test]
    fn measurement_updates() {
        let t = Graph::complete(&[1, 2, 3]).unwrap();
        assert_eq!(measure_update(&t, 1, Basis::Z).unwrap(), Graph::path(&[2, 3]).unwrap());
        assert_eq!(measure_update(&t, 1, Basis::Y).unwrap(), Graph::edgeless([2, 3]).unwrap());
        let g = Graph::from_edges([1, 2, 3], [(1, 2)]).unwrap();
        assert_eq!(measure_update(&g, 3, Basis::X).unwrap(), g.delete_vertex(3).unwrap());
        assert!(measure_update(&g, 8, Basis::X).is_err());
    }

    #[test]
    fn correction_examples() {
        let star = Graph::star(0, &[1, 2, 3]).unwrap();
        let target = set(&[1, 2, 3]);
        let (c, phase) = z_corrections(&star, &target, &[(0, false)].into()).unwrap();
        assert!(c.values().all(|&b| !b) && !phase);
        let (c, phase) = z_corrections(&star, &target, &[(0, true)].into()).unwrap();
        assert!(c.values().all(|&b| b) && !phase);
        assert_eq!(z_corrections(&star, &target, &BTreeMap::new()), Err(Error::MissingOutcome(0)));

        let p = Graph::path(&[1, 2, 3]).unwrap();
        let (c, phase) = z_corrections(&p, &set(&[3]), &[(1, true), (2, true)].into()).unwrap();
        assert!(phase);
        assert_eq!(c, [(3, true)].into());
    }

    #[test]
    fn star_plan() {
        let star = Graph::star(0, &[1, 2, 3]).unwrap();
        let k3 = Graph::complete(&[1, 2, 3]).unwrap();
        let plan = plan_extraction(&star, &k3, false).unwrap().unwrap();
        plan.validate(&star).unwrap();
        assert_eq!(plan.clifford_stage, LcSequence(vec![0]));
        assert_eq!(plan.measured, vec![0]);
        assert_eq!(plan.boundary, set(&[0]));
        let fin = replay_plan(&plan, &[(0, true)].into()).unwrap();
        assert_eq!(fin.target_graph, k3);
        assert!(fin.corrections.values().all(|&b| b));
        let fin = replay_plan(&plan, &[(0, false)].into()).unwrap();
        assert!(fin.corrections.values().all(|&b| !b));
    }

    #[test]
    fn disjoint_edges_keep_the_rest() {
        let g = Graph::from_edges([0, 1, 2, 3], [(0, 1), (2, 3)]).unwrap();
        let h = Graph::path(&[0, 1]).unwrap();
        let plan = plan_extraction(&g, &h, true).unwrap().unwrap();
        plan.validate(&g).unwrap();
        assert!(plan.boundary.is_empty() && plan.measured.is_empty());
        assert_eq!(plan.residual, Graph::path(&[2, 3]).unwrap());
        let plain = plan_extraction(&g, &h, false).unwrap().unwrap();
        assert_eq!(plain.measured, vec![2, 3]);
        assert!(plain.residual.is_empty());
    }

    #[test]
    fn non_minor_has_no_plan() {
        let g = Graph::from_edges([0, 1, 2, 3], [(0, 1), (2, 3)]).unwrap();
        assert!(plan_extraction(&g, &Graph::path(&[0, 2]).unwrap(), false).unwrap().is_none());
    }

    #[test]
    fn isolated_targets_are_reset() {
        let g = Graph::path(&[0, 1, 2, 3]).unwrap();
        let h = Graph::from_edges([0, 2, 3], [(2, 3)]).unwrap();
        let plan = plan_extraction(&g, &h, true).unwrap().unwrap();
        plan.validate(&g).unwrap();
        assert_eq!(plan.reset_to_plus, set(&[0]));
        assert!(plan.measured.contains(&0));
        let json = plan.to_json();
        assert_eq!(json["reset_to_plus"], serde_json::json!([0]));
        assert!(json.get("residual_edges").is_some());
    }

    #[test]
    fn replay_rejects_bad_outcomes() {
        let star = Graph::star(0, &[1, 2, 3]).unwrap();
        let plan = plan_extraction(&star, &Graph::complete(&[1, 2, 3]).unwrap(), false).unwrap().unwrap();
        assert_eq!(replay_plan(&plan, &BTreeMap::new()), Err(Error::MissingOutcome(0)));
        assert!(matches!(replay_plan(&plan, &[(0, true), (1, true)].into()), Err(Error::MalformedPlan(_))));
    }

    #[test]
    fn graph_serde_round_trip() {
        let g = Graph::from_edges([0, 4, 9], [(0, 9)]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<Graph>(&s).unwrap(), g);
        assert!(serde_json::from_str::<Graph>(r#"{"vertices":[1],"edges":[[1,1]]}"#).is_err());
    }
}
