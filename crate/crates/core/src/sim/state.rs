//! Dense statevectors over labeled qubits.
//!
//! Qubit `i` is the `i`-th smallest label and corresponds to bit `i` of the
//! basis index.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::clifford::{gate, Mat2};
use crate::error::{Error, Result};
use crate::extraction::Basis;
use crate::graph::{bits, Graph, Vertex};

/// Default cap on the number of simulated qubits.
pub const DEFAULT_SIM_LIMIT: usize = 12;

/// Singular values below this are zero.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Singular values in [RANK_THRESHOLD, this) make a rank ambiguous.
const RANK_GAP: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    labels: Vec<Vertex>,
    amps: Vec<Complex64>,
}

fn check_labels(labels: &[Vertex]) -> Result<()> {
    if let Some(w) = labels.windows(2).find(|w| w[0] >= w[1]) {
        return Err(if w[0] == w[1] {
            Error::DuplicateVertex(w[0])
        } else {
            Error::InvalidArgument("qubit labels must be sorted".into())
        });
    }
    if labels.len() > 24 {
        return Err(Error::LimitExceeded { what: "statevector qubits", actual: labels.len(), limit: 24 });
    }
    Ok(())
}

impl StateVector {
    /// Wraps amplitudes for the given sorted labels.
    pub fn from_amplitudes(labels: Vec<Vertex>, amps: Vec<Complex64>) -> Result<StateVector> {
        check_labels(&labels)?;
        if amps.len() != 1 << labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {} qubits",
                amps.len(),
                labels.len()
            )));
        }
        Ok(StateVector { labels, amps })
    }

    /// The computational basis state with the qubits in `ones` set to 1.
    pub fn basis(labels: &[Vertex], ones: &BTreeSet<Vertex>) -> Result<StateVector> {
        check_labels(labels)?;
        let mut idx = 0usize;
        for v in ones {
            let p = labels.binary_search(v).map_err(|_| Error::UnknownVertex(*v))?;
            idx |= 1 << p;
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << labels.len()];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(StateVector { labels: labels.to_vec(), amps })
    }

    /// |+⟩ on every qubit.
    pub fn plus(labels: &[Vertex]) -> Result<StateVector> {
        check_labels(labels)?;
        let a = Complex64::new((0.5f64).powf(labels.len() as f64 / 2.0), 0.0);
        Ok(StateVector { labels: labels.to_vec(), amps: vec![a; 1 << labels.len()] })
    }

    pub fn labels(&self) -> &[Vertex] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, c: f64) {
        self.amps.iter_mut().for_each(|a| *a *= c);
    }

    /// Scales to unit norm; a zero vector is left unchanged.
    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.scale(1.0 / n);
        }
    }

    pub fn qubit(&self, v: Vertex) -> Result<usize> {
        self.labels.binary_search(&v).map_err(|_| Error::UnknownVertex(v))
    }

    pub fn apply_1q(&mut self, v: Vertex, m: &Mat2) -> Result<()> {
        let bit = 1usize << self.qubit(v)?;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_cz(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let mask = (1usize << self.qubit(u)?) | (1usize << self.qubit(v)?);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.labels != other.labels {
            return Err(Error::DimensionMismatch("states on different qubits".into()));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Tensor product; the two label sets must be disjoint.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let mut labels: Vec<Vertex> = self.labels.iter().chain(&other.labels).copied().collect();
        labels.sort_unstable();
        check_labels(&labels)?;
        let pos = |v: &Vertex| labels.binary_search(v).expect("merged label");
        let a_pos: Vec<usize> = self.labels.iter().map(pos).collect();
        let b_pos: Vec<usize> = other.labels.iter().map(pos).collect();
        let spread = |idx: usize, ps: &[usize]| ps.iter().enumerate().fold(0usize, |m, (i, &p)| m | (idx >> i & 1) << p);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << labels.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let ia = spread(i, &a_pos);
            for (j, b) in other.amps.iter().enumerate() {
                amps[ia | spread(j, &b_pos)] = a * b;
            }
        }
        Ok(StateVector { labels, amps })
    }

    /// Applies (I + (−1)^outcome σ)/2 on qubit v; returns the unnormalized
    /// projected state and its probability relative to the input norm.
    pub fn project(&self, v: Vertex, basis: Basis, outcome: bool) -> Result<(StateVector, f64)> {
        let sigma = match basis {
            Basis::X => gate::X,
            Basis::Y => gate::Y,
            Basis::Z => gate::Z,
        };
        let sign = if outcome { -1.0 } else { 1.0 };
        let mut p = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in p.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                let id = if r == c { 1.0 } else { 0.0 };
                *x = (Complex64::new(id, 0.0) + sigma[r][c] * sign) * 0.5;
            }
        }
        let mut out = self.clone();
        out.apply_1q(v, &p)?;
        let before = self.norm().powi(2);
        let prob = if before > 0.0 { out.norm().powi(2) / before } else { 0.0 };
        Ok((out, prob))
    }

    /// Removes qubit v, which must be in the basis state |outcome⟩.
    pub fn factor_out(&self, v: Vertex, outcome: bool) -> Result<StateVector> {
        let q = self.qubit(v)?;
        let bit = 1usize << q;
        let tol = 1e-9 * self.norm().max(1e-300);
        let want = if outcome { bit } else { 0 };
        if self.amps.iter().enumerate().any(|(i, a)| i & bit != want && a.norm() > tol) {
            return Err(Error::NotFactorizable(v));
        }
        let low = bit - 1;
        let amps = (0..self.amps.len() / 2)
            .map(|j| self.amps[(j & low) | ((j & !low) << 1) | want])
            .collect();
        let mut labels = self.labels.clone();
        labels.remove(q);
        Ok(StateVector { labels, amps })
    }
}

/// |G⟩ = ∏_{e∈E} CZ_e |+⟩^{⊗V}, with at most `limit` qubits.
pub fn graph_state_with_limit(g: &Graph, limit: usize) -> Result<StateVector> {
    if g.len() > limit {
        return Err(Error::LimitExceeded { what: "graph-state qubits", actual: g.len(), limit });
    }
    let n = g.len();
    let a = (0.5f64).powf(n as f64 / 2.0);
    let amps = (0..1u64 << n)
        .map(|idx| {
            let twice: u32 = bits(idx).map(|p| (g.row(p) & idx).count_ones()).sum();
            Complex64::new(if (twice / 2) % 2 == 0 { a } else { -a }, 0.0)
        })
        .collect();
    Ok(StateVector { labels: g.vertices().to_vec(), amps })
}

pub fn graph_state(g: &Graph) -> Result<StateVector> {
    graph_state_with_limit(g, DEFAULT_SIM_LIMIT)
}

fn same_qubits(state: &StateVector, g: &Graph) -> Result<()> {
    if state.labels() != g.vertices() {
        return Err(Error::DimensionMismatch("state and graph have different vertex sets".into()));
    }
    Ok(())
}

/// U_v = exp(−iπ/4 X_v) ∏_{u∈N_v} exp(iπ/4 Z_u), with N_v taken in g.
pub fn apply_local_clifford_uv(state: &StateVector, g: &Graph, v: Vertex) -> Result<StateVector> {
    same_qubits(state, g)?;
    let mut out = state.clone();
    for u in g.neighbors(v)? {
        out.apply_1q(u, &gate::exp_z_quarter())?;
    }
    out.apply_1q(v, &gate::exp_minus_x_quarter())?;
    Ok(out)
}

/// The stabilizer generator g_v = X_v ∏_{u∈N_v} Z_u applied to `state`.
pub fn apply_stabilizer(state: &StateVector, g: &Graph, v: Vertex) -> Result<StateVector> {
    same_qubits(state, g)?;
    let mut out = state.clone();
    out.apply_1q(v, &gate::X)?;
    for u in g.neighbors(v)? {
        out.apply_1q(u, &gate::Z)?;
    }
    Ok(out)
}

/// Whether b = e^{iθ} a with every amplitude within `tol`.
pub fn equal_up_to_global_phase(a: &StateVector, b: &StateVector, tol: f64) -> bool {
    let Ok(overlap) = a.inner(b) else {
        return false;
    };
    let phase = if overlap.norm() > 1e-300 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.amps.iter().zip(&b.amps).all(|(x, y)| (x * phase - y).norm() <= tol)
}

/// Maximum amplitude-wise distance, without phase freedom.
pub fn max_distance(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.labels != b.labels {
        return Err(Error::DimensionMismatch("states on different qubits".into()));
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
}

/// log₂ of the Schmidt rank of `state` across (A, complement).
pub fn schmidt_rank_log2(state: &StateVector, a: &BTreeSet<Vertex>) -> Result<usize> {
    let mut amask = 0usize;
    for v in a {
        amask |= 1 << state.qubit(*v)?;
    }
    let n = state.num_qubits();
    let a_pos: Vec<usize> = (0..n).filter(|p| amask >> p & 1 == 1).collect();
    let b_pos: Vec<usize> = (0..n).filter(|p| amask >> p & 1 == 0).collect();
    let gather = |idx: usize, ps: &[usize]| ps.iter().enumerate().fold(0usize, |m, (i, &p)| m | (idx >> p & 1) << i);
    let mut m = DMatrix::<Complex64>::zeros(1 << a_pos.len(), 1 << b_pos.len());
    for (idx, amp) in state.amps.iter().enumerate() {
        m[(gather(idx, &a_pos), gather(idx, &b_pos))] = *amp;
    }
    let sv = m.singular_values();
    if let Some(&s) = sv.iter().find(|&&s| (RANK_THRESHOLD..RANK_GAP).contains(&s)) {
        return Err(Error::AmbiguousSpectrum(s));
    }
    let rank = sv.iter().filter(|&&s| s >= RANK_THRESHOLD).count();
    if !rank.is_power_of_two() {
        return Err(Error::Inconsistent(format!("Schmidt rank {rank} is not a power of two")));
    }
    Ok(rank.trailing_zeros() as usize)
}
