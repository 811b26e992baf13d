//! Deciding projective-unitary equivalence of state tuples.
//!
//! Pure tuples: two tuples with identical frame graphs are PU equivalent
//! exactly when their gauge-fixed Gram matrices coincide; closeness is
//! quantitative via the Procrustes stability bound
//!
//!   (1/N) Σ (1 - Tr(Uψ_iU†φ_i)) ≤ (1+√2)² ‖(G̃^Ψ)‡‖_∞ ‖G̃^Ψ-G̃^Φ‖₂² / N,
//!
//! valid when rank(G̃^Ψ) ≥ rank(G̃^Φ) and ‖G̃^Ψ-G̃^Φ‖₂‖(G̃^Ψ)‡‖_∞^{1/2} ≤ 1/2.
//!
//! Mixed tuples: Bargmann invariants of degree up to d² form a complete
//! invariant set, so the decider compares degree-capped fingerprints, one
//! value per cyclic class of index sequences.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gram::{
    build_frame_graph, choose_spanning_tree, reconstruct_gram, representatives_of,
    DEFAULT_ZERO_THRESHOLD, RANK_CUTOFF,
};
use crate::jsonc;
use crate::states::{bargmann, StateTuple};

/// Verdict of an equivalence decision, with alignment diagnostics when the
/// Procrustes path ran.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// Pure path: Frobenius distance of the gauge-fixed Gram matrices.
    /// Mixed path: max entrywise fingerprint deviation.
    pub gram_distance: f64,
    pub aligning_unitary: Option<DMatrix<Complex64>>,
    /// Mean infidelity of the aligned representative vectors.
    pub avg_infidelity: Option<f64>,
    /// Mean infidelity of the aligned original states, when amplitudes were
    /// available.
    pub avg_infidelity_states: Option<f64>,
    pub bound_value: Option<f64>,
    pub bound_applicable: bool,
    pub reason: Option<String>,
}

impl EquivalenceReport {
    fn plain(equivalent: bool, distance: f64, reason: Option<String>) -> Self {
        Self {
            equivalent,
            gram_distance: distance,
            aligning_unitary: None,
            avg_infidelity: None,
            avg_infidelity_states: None,
            bound_value: None,
            bound_applicable: false,
            reason,
        }
    }
}

impl Serialize for EquivalenceReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("EquivalenceReport", 8)?;
        st.serialize_field("equivalent", &self.equivalent)?;
        st.serialize_field("gram_distance", &self.gram_distance)?;
        st.serialize_field(
            "aligning_unitary",
            &self.aligning_unitary.as_ref().map(jsonc::matrix_rows),
        )?;
        st.serialize_field("avg_infidelity", &self.avg_infidelity)?;
        st.serialize_field("avg_infidelity_states", &self.avg_infidelity_states)?;
        st.serialize_field("bound_value", &self.bound_value)?;
        st.serialize_field("bound_applicable", &self.bound_applicable)?;
        st.serialize_field("reason", &self.reason)?;
        st.end()
    }
}

fn paired_graphs(
    psi: &StateTuple,
    phi: &StateTuple,
) -> Result<std::result::Result<(crate::gram::FrameGraph, crate::gram::FrameGraph), String>> {
    if psi.len() != phi.len() {
        return Err(Error::DimensionMismatch { expected: psi.len(), actual: phi.len() });
    }
    let ga = build_frame_graph(psi, DEFAULT_ZERO_THRESHOLD)?;
    let gb = build_frame_graph(phi, DEFAULT_ZERO_THRESHOLD)?;
    if ga.edges() != gb.edges() {
        return Ok(Err("frame graphs differ".into()));
    }
    Ok(Ok((ga, gb)))
}

/// Gauge-fixed full Gram matrices of two tuples over the same graph and the
/// same per-component spanning trees.
fn paired_grams(
    psi: &StateTuple,
    phi: &StateTuple,
    graph_a: &crate::gram::FrameGraph,
    graph_b: &crate::gram::FrameGraph,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let n = psi.len();
    let mut full_a = DMatrix::from_element(n, n, Complex64::ZERO);
    let mut full_b = DMatrix::from_element(n, n, Complex64::ZERO);
    for comp in graph_a.components() {
        let tree = choose_spanning_tree(graph_a, &comp)?;
        let ga = reconstruct_gram(psi, graph_a, &tree)?;
        let gb = reconstruct_gram(phi, graph_b, &tree)?;
        for (a, &i) in comp.iter().enumerate() {
            for (b, &j) in comp.iter().enumerate() {
                full_a[(i - 1, j - 1)] = ga.entries[(a, b)];
                full_b[(i - 1, j - 1)] = gb.entries[(a, b)];
            }
        }
    }
    Ok((full_a, full_b))
}

/// Exact PU-equivalence decision for pure tuples: equivalent iff the
/// gauge-fixed Gram matrices agree to `tol` in Frobenius norm.
pub fn pure_equivalent(psi: &StateTuple, phi: &StateTuple, tol: f64) -> Result<EquivalenceReport> {
    let graphs = match paired_graphs(psi, phi)? {
        Ok(g) => g,
        Err(reason) => return Ok(EquivalenceReport::plain(false, f64::INFINITY, Some(reason))),
    };
    let (ga, gb) = paired_grams(psi, phi, &graphs.0, &graphs.1)?;
    let distance = (&ga - &gb).norm();
    Ok(EquivalenceReport::plain(distance <= tol, distance, None))
}

/// Operator norm of the Moore-Penrose pseudo-inverse of a PSD matrix:
/// 1/λ_min over eigenvalues above the rank cutoff.
fn pseudo_inverse_norm(g: &DMatrix<Complex64>) -> (f64, usize) {
    let eig = g.clone().symmetric_eigen().eigenvalues;
    let lambda_max = eig.iter().fold(0.0f64, |a, &b| a.max(b));
    let kept: Vec<f64> = eig.iter().copied().filter(|&w| w > RANK_CUTOFF * lambda_max && w > 0.0).collect();
    let lambda_min = kept.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    (1.0 / lambda_min, kept.len())
}

fn pad_to(v: &DVector<Complex64>, dim: usize) -> DVector<Complex64> {
    let mut out = DVector::from_element(dim, Complex64::ZERO);
    for k in 0..v.len() {
        out[k] = v[k];
    }
    out
}

/// Best unitary mapping the first vector family onto the second, from the
/// singular value decomposition of Σ|ψ_i⟩⟨φ_i|.
fn procrustes_unitary(
    from: &[DVector<Complex64>],
    to: &[DVector<Complex64>],
    dim: usize,
) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(dim, dim, Complex64::ZERO);
    for (v, w) in from.iter().zip(to) {
        let v = pad_to(v, dim);
        let w = pad_to(w, dim);
        // |v><w|
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] += v[i] * w[j].conj();
            }
        }
    }
    let svd = m.svd(true, true);
    let u = svd.u.expect("svd with u");
    let v_t = svd.v_t.expect("svd with v_t");
    // maximize Re Tr(M U): U = V X^H for M = X S V^H
    v_t.adjoint() * u.adjoint()
}

fn mean_alignment_infidelity(
    u: &DMatrix<Complex64>,
    from: &[DVector<Complex64>],
    to: &[DVector<Complex64>],
) -> f64 {
    let dim = u.nrows();
    let n = from.len();
    let mut total = 0.0;
    for (v, w) in from.iter().zip(to) {
        let uv = u * pad_to(v, dim);
        let f = pad_to(w, dim).dotc(&uv).norm_sqr();
        total += 1.0 - f;
    }
    total / n as f64
}

/// Procrustes alignment of two pure tuples with the stability bound.
///
/// Representative vectors come from the Gram eigendecompositions, so the
/// operation works when only invariants are available; when the tuples carry
/// amplitudes, the infidelity against the original states is also computed
/// (via the spanning-tree phase gauge) and reported separately.
pub fn procrustes_align(psi: &StateTuple, phi: &StateTuple) -> Result<EquivalenceReport> {
    let (graph_a, graph_b) = match paired_graphs(psi, phi)? {
        Ok(g) => g,
        Err(reason) => {
            return Err(Error::InvalidArgument(format!(
                "procrustes_align requires matching frame graphs: {reason}"
            )))
        }
    };
    let (ga, gb) = paired_grams(psi, phi, &graph_a, &graph_b)?;
    let distance = (&ga - &gb).norm();

    let (pinv_norm, rank_a) = pseudo_inverse_norm(&ga);
    let (_, rank_b) = pseudo_inverse_norm(&gb);
    let c_psi = (1.0 + 2.0f64.sqrt()).powi(2) * pinv_norm;
    let n = psi.len();
    let bound_value = c_psi * distance * distance / n as f64;
    let bound_applicable = rank_a >= rank_b && distance * pinv_norm.sqrt() <= 0.5;

    let reps_a = representatives_of(&ga);
    let reps_b = representatives_of(&gb);
    let dim = reps_a[0].len().max(reps_b[0].len());
    let u = procrustes_unitary(&reps_a, &reps_b, dim);
    let avg_infidelity = mean_alignment_infidelity(&u, &reps_a, &reps_b);

    let avg_infidelity_states = if psi.is_pure() && phi.is_pure() {
        let va = gauge_fixed_amplitudes(psi, &graph_a)?;
        let vb = gauge_fixed_amplitudes(phi, &graph_b)?;
        let ud = procrustes_unitary(&va, &vb, psi.dim());
        Some(mean_alignment_infidelity(&ud, &va, &vb))
    } else {
        None
    };

    Ok(EquivalenceReport {
        equivalent: distance <= 1e-9,
        gram_distance: distance,
        aligning_unitary: Some(u),
        avg_infidelity: Some(avg_infidelity),
        avg_infidelity_states,
        bound_value: Some(bound_value),
        bound_applicable,
        reason: None,
    })
}

/// Amplitude representatives in the spanning-tree gauge: phases propagate
/// from each component root so that every tree-edge inner product is real
/// positive. Their Gram matrix is exactly the reconstructed one.
fn gauge_fixed_amplitudes(
    tuple: &StateTuple,
    graph: &crate::gram::FrameGraph,
) -> Result<Vec<DVector<Complex64>>> {
    let mut out: Vec<Option<DVector<Complex64>>> = vec![None; tuple.len()];
    for comp in graph.components() {
        let tree = choose_spanning_tree(graph, &comp)?;
        // BFS order: fix parent before child
        let mut order = comp.clone();
        order.sort_by_key(|&v| tree.path(v, tree.root).map(|p| p.len()).unwrap_or(0));
        for &v in &order {
            let psi_v = tuple
                .pure_part(v)?
                .ok_or_else(|| Error::InvalidArgument("amplitudes unavailable".into()))?
                .amplitudes()
                .clone();
            let fixed = match tree.parents[v - 1] {
                None => psi_v,
                Some(p) => {
                    let parent = out[p - 1].as_ref().expect("parent fixed first");
                    let ip = parent.dotc(&psi_v);
                    let phase = ip / ip.norm();
                    psi_v * phase.conj()
                }
            };
            out[v - 1] = Some(fixed);
        }
    }
    Ok(out.into_iter().map(|v| v.expect("all vertices covered")).collect())
}

/// One invariant value per cyclic class of index sequences up to a degree
/// cap.
#[derive(Debug, Clone)]
pub struct InvariantFingerprint {
    pub degree_cap: usize,
    /// Keyed by the lexicographically least cyclic rotation.
    pub entries: BTreeMap<Vec<usize>, Complex64>,
}

impl InvariantFingerprint {
    /// Max entrywise deviation; the fingerprints must share a key set.
    pub fn distance(&self, other: &InvariantFingerprint) -> Result<f64> {
        if self.entries.len() != other.entries.len() {
            return Err(Error::DimensionMismatch {
                expected: self.entries.len(),
                actual: other.entries.len(),
            });
        }
        let mut worst = 0.0f64;
        for (key, value) in &self.entries {
            let other_value = other.entries.get(key).ok_or_else(|| {
                Error::InvalidArgument(format!("fingerprints disagree on key {key:?}"))
            })?;
            worst = worst.max((value - other_value).norm());
        }
        Ok(worst)
    }
}

impl Serialize for InvariantFingerprint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: BTreeMap<String, [f64; 2]> = self
            .entries
            .iter()
            .map(|(k, v)| {
                let key =
                    k.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
                (key, jsonc::pair(*v))
            })
            .collect();
        let mut st = s.serialize_struct("InvariantFingerprint", 3)?;
        st.serialize_field("degree_cap", &self.degree_cap)?;
        st.serialize_field("count", &self.entries.len())?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Lexicographically least cyclic rotation (cyclic classes only; reversal is
/// excluded since it conjugates values).
pub fn canonical_cycle_class(seq: &[usize]) -> Vec<usize> {
    let m = seq.len();
    let mut best: Option<Vec<usize>> = None;
    for shift in 0..m {
        let rotated: Vec<usize> = (0..m).map(|k| seq[(k + shift) % m]).collect();
        if best.as_ref().map(|b| rotated < *b).unwrap_or(true) {
            best = Some(rotated);
        }
    }
    best.unwrap()
}

/// Number of cyclic classes of sequences over 1..=n with length 1..=cap
/// (Burnside count), used for the resource check before enumeration.
pub fn cyclic_class_count(n: usize, cap: usize) -> u128 {
    let mut total: u128 = 0;
    for m in 1..=cap {
        let mut orbit_sum: u128 = 0;
        for d in 1..=m {
            if m % d == 0 {
                orbit_sum += euler_phi(d) as u128 * (n as u128).pow((m / d) as u32);
            }
        }
        total += orbit_sum / m as u128;
    }
    total
}

fn euler_phi(mut n: usize) -> usize {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Default cap on fingerprint size.
pub const DEFAULT_SEQUENCE_BUDGET: u128 = 1_000_000;

/// All invariants of degree ≤ `degree_cap`, one per cyclic class.
pub fn mixed_fingerprint(tuple: &StateTuple, degree_cap: usize) -> Result<InvariantFingerprint> {
    mixed_fingerprint_with_budget(tuple, degree_cap, DEFAULT_SEQUENCE_BUDGET)
}

pub fn mixed_fingerprint_with_budget(
    tuple: &StateTuple,
    degree_cap: usize,
    budget: u128,
) -> Result<InvariantFingerprint> {
    if degree_cap < 1 {
        return Err(Error::InvalidArgument("degree cap must be at least 1".into()));
    }
    let n = tuple.len();
    let required = cyclic_class_count(n, degree_cap);
    if required > budget {
        return Err(Error::ResourceBudget { required, budget });
    }
    let mut entries = BTreeMap::new();
    for m in 1..=degree_cap {
        let mut seq = vec![1usize; m];
        loop {
            if canonical_cycle_class(&seq) == seq {
                let value = bargmann(tuple, &seq)?.value;
                entries.insert(seq.clone(), value);
            }
            // next sequence in lexicographic order
            let mut pos = m;
            loop {
                if pos == 0 {
                    break;
                }
                seq[pos - 1] += 1;
                if seq[pos - 1] <= n {
                    break;
                }
                seq[pos - 1] = 1;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
    }
    Ok(InvariantFingerprint { degree_cap, entries })
}

/// Complete decision for mixed tuples at cap d²; smaller caps are a
/// necessary condition only and are flagged in `reason`.
pub fn mixed_equivalent(
    s1: &StateTuple,
    s2: &StateTuple,
    tol: f64,
    degree_cap: Option<usize>,
) -> Result<EquivalenceReport> {
    if s1.len() != s2.len() {
        return Err(Error::DimensionMismatch { expected: s1.len(), actual: s2.len() });
    }
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch { expected: s1.dim(), actual: s2.dim() });
    }
    let complete_cap = s1.dim() * s1.dim();
    let cap = degree_cap.unwrap_or(complete_cap);
    let fa = mixed_fingerprint(s1, cap)?;
    let fb = mixed_fingerprint(s2, cap)?;
    let distance = fa.distance(&fb)?;
    let reason = (cap < complete_cap).then(|| {
        format!("degree cap {cap} is below d^2 = {complete_cap}: necessary condition only")
    });
    Ok(EquivalenceReport::plain(distance <= tol, distance, reason))
}
