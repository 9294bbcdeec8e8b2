//! Statevector checks of the graph rules: local complementation, stabilizers,
//! Pauli measurements and extraction plans.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::clifford::{dagger, gate, single_qubit_cliffords, Mat2};
use super::state::{
    apply_local_clifford_uv, apply_stabilizer, equal_up_to_global_phase, graph_state, max_distance, StateVector,
};
use crate::error::{Error, Result};
use crate::extraction::{replay_plan, Basis, ExtractionPlan};
use crate::graph::{Graph, LcSequence, Vertex};

/// Tolerance for exact-structure comparisons.
pub const STRUCTURE_TOL: f64 = 1e-9;

/// U_v^{(G)}|G⟩ = |τ_v(G)⟩ up to global phase.
pub fn verify_lc_rule(g: &Graph, v: Vertex, tol: f64) -> Result<bool> {
    let lhs = apply_local_clifford_uv(&graph_state(g)?, g, v)?;
    Ok(equal_up_to_global_phase(&lhs, &graph_state(&g.local_complement(v)?)?, tol))
}

/// Applies U_{v} along m, each with respect to the current graph; returns
/// the state and the final graph.
pub fn apply_lc_sequence(state: &StateVector, g: &Graph, m: &LcSequence) -> Result<(StateVector, Graph)> {
    let mut s = state.clone();
    let mut cur = g.clone();
    for v in m.iter() {
        s = apply_local_clifford_uv(&s, &cur, v)?;
        cur = cur.local_complement(v)?;
    }
    Ok((s, cur))
}

/// Largest deviation of g_v|G⟩ from |G⟩ over all v.
pub fn stabilizer_deviation(g: &Graph) -> Result<f64> {
    let s = graph_state(g)?;
    let mut worst = 0.0f64;
    for &v in g.vertices() {
        worst = worst.max(max_distance(&apply_stabilizer(&s, g, v)?, &s)?);
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeReport {
    pub outcome: bool,
    pub probability: f64,
    pub matched: bool,
    /// Index into [`single_qubit_cliffords`] for each qubit of the search region.
    pub cliffords: BTreeMap<Vertex, usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleReport {
    pub vertex: Vertex,
    pub basis: Basis,
    pub passed: bool,
    pub outcomes: Vec<OutcomeReport>,
}

/// Z: exact equality with (1/√2)|x⟩_v ⊗ Z_{N_v}^x|G∖v⟩. Y and X: the
/// measured state on V∖v equals |τ_v(G)∖v⟩ or |T_v(G)∖v⟩ after some local
/// Clifford on the qubits the correction can touch.
pub fn verify_measurement_rule(g: &Graph, v: Vertex, basis: Basis) -> Result<RuleReport> {
    let state = graph_state(g)?;
    let neighbors = g.neighbors(v)?;
    let mut outcomes = Vec::new();
    for x in [false, true] {
        let (post, p) = state.project(v, basis, x)?;
        let report = match basis {
            Basis::Z => check_z(g, v, x, &post, p)?,
            _ if g.degree(v)? == 0 && basis == Basis::X => check_isolated_x(g, v, x, &post, p)?,
            _ => {
                let (target, region) = match basis {
                    Basis::Y => (g.local_complement(v)?.delete_vertex(v)?, neighbors.clone()),
                    _ => {
                        let u0 = g.canonical_pivot_partner(v)?.expect("v has a neighbor");
                        let mut region: BTreeSet<Vertex> = neighbors.union(&g.neighbors(u0)?).copied().collect();
                        region.remove(&v);
                        (g.canonical_pivot(v)?.delete_vertex(v)?, region)
                    }
                };
                check_up_to_lc(v, basis, x, post, p, &target, &region)?
            }
        };
        outcomes.push(report);
    }
    Ok(RuleReport {
        vertex: v,
        basis,
        passed: outcomes.iter().all(|o| o.matched),
        outcomes,
    })
}

fn report(outcome: bool, probability: f64, matched: bool, detail: String) -> OutcomeReport {
    OutcomeReport { outcome, probability, matched, cliffords: BTreeMap::new(), detail }
}

fn half(p: f64) -> bool {
    (p - 0.5).abs() <= STRUCTURE_TOL
}

fn check_z(g: &Graph, v: Vertex, x: bool, post: &StateVector, p: f64) -> Result<OutcomeReport> {
    let mut rest = graph_state(&g.delete_vertex(v)?)?;
    if x {
        for u in g.neighbors(v)? {
            rest.apply_1q(u, &gate::Z)?;
        }
    }
    let ones = if x { BTreeSet::from([v]) } else { BTreeSet::new() };
    let mut expected = StateVector::basis(&[v], &ones)?.tensor(&rest)?;
    expected.scale(std::f64::consts::FRAC_1_SQRT_2);
    let d = max_distance(post, &expected)?;
    let ok = d <= STRUCTURE_TOL && half(p);
    Ok(report(x, p, ok, format!("max amplitude deviation {d:.3e}")))
}

fn check_isolated_x(g: &Graph, v: Vertex, x: bool, post: &StateVector, p: f64) -> Result<OutcomeReport> {
    // |+⟩ is the +1 eigenstate of X, so the outcome is certain.
    if x {
        return Ok(report(x, p, p <= STRUCTURE_TOL, "outcome has probability zero".into()));
    }
    let mut s = post.clone();
    s.apply_1q(v, &gate::H)?;
    let rest = s.factor_out(v, false)?;
    let ok = (p - 1.0).abs() <= STRUCTURE_TOL
        && equal_up_to_global_phase(&rest, &graph_state(&g.delete_vertex(v)?)?, STRUCTURE_TOL);
    Ok(report(x, p, ok, "isolated vertex".into()))
}

fn check_up_to_lc(
    v: Vertex,
    basis: Basis,
    x: bool,
    mut post: StateVector,
    p: f64,
    target: &Graph,
    region: &BTreeSet<Vertex>,
) -> Result<OutcomeReport> {
    post.normalize();
    // Rotate the measured eigenbasis onto the computational basis.
    if basis == Basis::Y {
        post.apply_1q(v, &gate::S_DAG)?;
    }
    post.apply_1q(v, &gate::H)?;
    let rest = match post.factor_out(v, x) {
        Ok(r) => r,
        Err(Error::NotFactorizable(_)) => {
            return Ok(report(x, p, false, "measured qubit not in the expected eigenstate".into()));
        }
        Err(e) => return Err(e),
    };
    let found = find_local_cliffords(&rest, target, region, STRUCTURE_TOL)?;
    let matched = found.is_some() && half(p);
    Ok(OutcomeReport {
        outcome: x,
        probability: p,
        matched,
        detail: if found.is_some() {
            format!("local Clifford found on {} qubits", region.len())
        } else {
            "no local Clifford on the region maps the state to the target".into()
        },
        cliffords: found.unwrap_or_default(),
    })
}

/// Cliffords C_w (w ∈ region) with state = ⊗C_w|target⟩ up to phase, found by
/// backtracking; a stabilizer generator of the target is checked as soon as
/// every region qubit in its support has been fixed.
pub fn find_local_cliffords(
    state: &StateVector,
    target: &Graph,
    region: &BTreeSet<Vertex>,
    tol: f64,
) -> Result<Option<BTreeMap<Vertex, usize>>> {
    if state.labels() != target.vertices() {
        return Err(Error::DimensionMismatch("state and target differ in qubits".into()));
    }
    let order: Vec<Vertex> = region.iter().copied().collect();
    for w in &order {
        state.qubit(*w)?;
    }
    // Generators become checkable once the last region qubit in their support is fixed.
    let mut ready: Vec<Vec<Vertex>> = vec![Vec::new(); order.len() + 1];
    for &w in target.vertices() {
        let mut support = target.neighbors(w)?;
        support.insert(w);
        let last = order.iter().rposition(|r| support.contains(r)).map_or(0, |i| i + 1);
        ready[last].push(w);
    }
    let stabilized = |s: &StateVector, ws: &[Vertex]| -> Result<bool> {
        for &w in ws {
            if max_distance(&apply_stabilizer(s, target, w)?, s)? > tol {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if !stabilized(state, &ready[0])? {
        return Ok(None);
    }
    let inverses: Vec<Mat2> = single_qubit_cliffords().iter().map(dagger).collect();
    let goal = graph_state(target)?;
    let mut chosen = Vec::new();
    let found = search(state, &order, &ready, &inverses, &goal, tol, &mut chosen, &stabilized)?;
    Ok(found.then(|| order.iter().copied().zip(chosen).collect()))
}

#[allow(clippy::too_many_arguments)]
fn search(
    s: &StateVector,
    order: &[Vertex],
    ready: &[Vec<Vertex>],
    inverses: &[Mat2],
    goal: &StateVector,
    tol: f64,
    chosen: &mut Vec<usize>,
    stabilized: &dyn Fn(&StateVector, &[Vertex]) -> Result<bool>,
) -> Result<bool> {
    let d = chosen.len();
    if d == order.len() {
        return Ok(equal_up_to_global_phase(s, goal, tol));
    }
    for (i, inv) in inverses.iter().enumerate() {
        let mut next = s.clone();
        next.apply_1q(order[d], inv)?;
        if !stabilized(&next, &ready[d + 1])? {
            continue;
        }
        chosen.push(i);
        if search(&next, order, ready, inverses, goal, tol, chosen, stabilized)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// Measures `measured` in Z with the given outcomes and checks
/// (√2)^k · raw = (−1)^{|E(G_x)|} |x⟩ ⊗ Z^y |G[V′]⟩, where G_x is induced on
/// the outcome-1 vertices and y_w is the parity of w's outcome-1 neighbors.
pub fn verify_multi_z(g: &Graph, outcomes: &BTreeMap<Vertex, bool>, tol: f64) -> Result<bool> {
    let mut s = graph_state(g)?;
    for (&v, &x) in outcomes {
        s = s.project(v, Basis::Z, x)?.0;
        s.scale(std::f64::consts::SQRT_2);
    }
    let measured: BTreeSet<Vertex> = outcomes.keys().copied().collect();
    let ones: BTreeSet<Vertex> = outcomes.iter().filter(|(_, &x)| x).map(|(&v, _)| v).collect();
    let kept: BTreeSet<Vertex> = g.vertex_set().difference(&measured).copied().collect();
    let mut rest = graph_state(&g.induced_subgraph(&kept)?)?;
    for &w in &kept {
        if g.neighbors(w)?.intersection(&ones).count() % 2 == 1 {
            rest.apply_1q(w, &gate::Z)?;
        }
    }
    let labels: Vec<Vertex> = measured.iter().copied().collect();
    let mut expected = StateVector::basis(&labels, &ones)?.tensor(&rest)?;
    if g.induced_subgraph(&ones)?.edge_count() % 2 == 1 {
        expected.scale(-1.0);
    }
    Ok(max_distance(&s, &expected)? <= tol)
}

/// Runs a plan on |G⟩ for the given outcomes and compares the result with
/// |x⟩ on kept measured qubits ⊗ |+⟩ on reset qubits ⊗ |target⟩ ⊗ |residual⟩.
pub fn verify_plan(g: &Graph, plan: &ExtractionPlan, outcomes: &BTreeMap<Vertex, bool>, tol: f64) -> Result<bool> {
    let fin = replay_plan(plan, outcomes)?;
    let (mut s, cur) = apply_lc_sequence(&graph_state(g)?, g, &plan.clifford_stage)?;
    if cur != plan.rewritten_graph {
        return Err(Error::MalformedPlan("Clifford stage does not produce the rewritten graph".into()));
    }
    for &v in &plan.measured {
        s = s.project(v, Basis::Z, outcomes[&v])?.0;
        s.scale(std::f64::consts::SQRT_2);
    }
    for (&w, &z) in fin.corrections.iter().chain(&fin.residual_corrections) {
        if z {
            s.apply_1q(w, &gate::Z)?;
        }
    }
    for &r in &fin.reset_to_plus {
        s.apply_1q(r, &gate::H)?;
        if outcomes[&r] {
            s.apply_1q(r, &gate::Z)?;
        }
    }
    let kept: Vec<Vertex> = fin.measured_outcomes.keys().copied().collect();
    let ones: BTreeSet<Vertex> = fin.measured_outcomes.iter().filter(|(_, &x)| x).map(|(&v, _)| v).collect();
    let reset: Vec<Vertex> = fin.reset_to_plus.iter().copied().collect();
    let expected = StateVector::basis(&kept, &ones)?
        .tensor(&StateVector::plus(&reset)?)?
        .tensor(&graph_state(&fin.target_graph)?)?
        .tensor(&graph_state(&fin.residual)?)?;
    Ok(equal_up_to_global_phase(&s, &expected, tol))
}
