//! State types and direct (trace-product) computation of Bargmann invariants.
//!
//! Pure states are kept both as amplitude vectors and as rank-1 projectors;
//! the projector is the source of truth for invariant computation, so pure and
//! mixed members share one code path. A Bargmann invariant of a tuple
//! (ρ_1, …, ρ_N) is Δ_{i₁…i_m} = Tr(ρ_{i₁}ρ_{i₂}⋯ρ_{i_m}); for pure states it
//! reduces to the cyclic product of inner products
//! ⟨ψ_{i₁}|ψ_{i₂}⟩⟨ψ_{i₂}|ψ_{i₃}⟩⋯⟨ψ_{i_m}|ψ_{i₁}⟩.
//!
//! Indices are 1-based throughout the public API, matching the index
//! sequences appearing in invariant names like Δ₁₂₃.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::jsonc;

/// Structural validation tolerance (normalization, Hermiticity, trace).
pub const VALIDATION_TOL: f64 = 1e-10;
/// Positive semidefiniteness slack: eigenvalues above -PSD_TOL are accepted.
pub const PSD_TOL: f64 = 1e-9;

fn all_finite<'a, I: IntoIterator<Item = &'a Complex64>>(it: I) -> bool {
    it.into_iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// A normalized pure state |ψ⟩ on a d-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Validates finiteness and Σ|a_i|² = 1 within [`VALIDATION_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("empty amplitude vector".into()));
        }
        if !all_finite(&amplitudes) {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes: DVector::from_vec(amplitudes) })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn from_unnormalized(v: DVector<Complex64>) -> Result<Self> {
        if !all_finite(v.iter()) {
            return Err(Error::NonFinite);
        }
        let norm = v.norm();
        if norm < 1e-14 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        Ok(Self { amplitudes: v / Complex64::new(norm, 0.0) })
    }

    /// Computational basis state |k⟩ in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, len: dim });
        }
        let mut v = DVector::from_element(dim, Complex64::ZERO);
        v[k] = Complex64::ONE;
        Ok(Self { amplitudes: v })
    }

    /// Qubit state a|0⟩ + b|1⟩.
    pub fn qubit(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Rank-1 projector |ψ⟩⟨ψ|.
    pub fn projector(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| self.amplitudes[i] * self.amplitudes[j].conj())
    }

    /// Global-phase canonical form: the first amplitude with |a_i| > tol is
    /// made real positive. Display and serialization aid only; all physical
    /// quantities are phase-free.
    pub fn phase_canonical(&self) -> PureState {
        let tol = 1e-12;
        for a in self.amplitudes.iter() {
            if a.norm() > tol {
                let phase = a / a.norm();
                return PureState { amplitudes: self.amplitudes.map(|z| z * phase.conj()) };
            }
        }
        self.clone()
    }
}

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    rho: DMatrix<Complex64>,
}

impl MixedState {
    /// Validates Hermiticity (max-entry deviation ≤ 1e-10), trace 1 within
    /// 1e-10, and positive semidefiniteness (min eigenvalue ≥ -1e-9).
    pub fn new(rho: DMatrix<Complex64>) -> Result<Self> {
        if rho.nrows() == 0 || rho.nrows() != rho.ncols() {
            return Err(Error::DimensionMismatch { expected: rho.nrows().max(1), actual: rho.ncols() });
        }
        if !all_finite(rho.iter()) {
            return Err(Error::NonFinite);
        }
        let deviation = (&rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if deviation > VALIDATION_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > VALIDATION_TOL || trace.im.abs() > VALIDATION_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let min_eigenvalue = hermitian_eigenvalues(&rho).into_iter().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(Self { rho })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self { rho: psi.projector() }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let w = Complex64::new(1.0 / dim as f64, 0.0);
        Self { rho: DMatrix::from_diagonal_element(dim, dim, w) }
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn rho(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// Eigendecomposition into (eigenvalue, eigenvector) pairs sorted by
    /// descending eigenvalue. Eigenvalues are real since ρ is Hermitian.
    pub fn eigensystem(&self) -> Vec<(f64, DVector<Complex64>)> {
        let se = self.rho.clone().symmetric_eigen();
        let mut pairs: Vec<(f64, DVector<Complex64>)> = se
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(k, &w)| (w, se.eigenvectors.column(k).into_owned()))
            .collect();
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        pairs
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    // symmetric_eigen on a Hermitian complex matrix returns the real spectrum
    m.clone().symmetric_eigen().eigenvalues.iter().copied().collect()
}

/// A member supplied to [`StateTuple::new`].
#[derive(Debug, Clone)]
pub enum TupleState {
    Pure(PureState),
    Mixed(MixedState),
}

/// An ordered tuple of N states sharing one Hilbert-space dimension.
///
/// Pure members are stored as rank-1 projectors alongside their amplitude
/// vectors; a flag records purity-by-construction so downstream code can tell
/// exact pure inputs from merely high-purity density matrices.
#[derive(Debug, Clone)]
pub struct StateTuple {
    dim: usize,
    states: Vec<MixedState>,
    pure_parts: Vec<Option<PureState>>,
}

impl StateTuple {
    pub fn new(members: Vec<TupleState>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("a state tuple needs at least one member".into()));
        }
        let dim = match &members[0] {
            TupleState::Pure(p) => p.dim(),
            TupleState::Mixed(m) => m.dim(),
        };
        let mut states = Vec::with_capacity(members.len());
        let mut pure_parts = Vec::with_capacity(members.len());
        for member in members {
            let d = match &member {
                TupleState::Pure(p) => p.dim(),
                TupleState::Mixed(m) => m.dim(),
            };
            if d != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: d });
            }
            match member {
                TupleState::Pure(p) => {
                    states.push(MixedState::from_pure(&p));
                    pure_parts.push(Some(p));
                }
                TupleState::Mixed(m) => {
                    states.push(m);
                    pure_parts.push(None);
                }
            }
        }
        Ok(Self { dim, states, pure_parts })
    }

    pub fn from_pure(states: Vec<PureState>) -> Result<Self> {
        Self::new(states.into_iter().map(TupleState::Pure).collect())
    }

    pub fn from_mixed(states: Vec<MixedState>) -> Result<Self> {
        Self::new(states.into_iter().map(TupleState::Mixed).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= 1 by construction
    }

    /// Density matrix of member `index` (1-based).
    pub fn state(&self, index: usize) -> Result<&MixedState> {
        self.check_index(index)?;
        Ok(&self.states[index - 1])
    }

    /// Amplitude vector of member `index` when it was supplied pure.
    pub fn pure_part(&self, index: usize) -> Result<Option<&PureState>> {
        self.check_index(index)?;
        Ok(self.pure_parts[index - 1].as_ref())
    }

    /// True when every member was supplied as a pure state.
    pub fn is_pure(&self) -> bool {
        self.pure_parts.iter().all(Option::is_some)
    }

    /// Errors unless every member is pure within `tol`: either flagged
    /// pure-by-construction or with Tr(ρ²) ≥ 1 - tol.
    pub fn require_pure(&self, tol: f64) -> Result<()> {
        for (k, (m, p)) in self.states.iter().zip(&self.pure_parts).enumerate() {
            if p.is_none() && m.purity() < 1.0 - tol {
                return Err(Error::InvalidArgument(format!(
                    "state {} is not pure: Tr(rho^2) = {}",
                    k + 1,
                    m.purity()
                )));
            }
        }
        Ok(())
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.states.len() {
            return Err(Error::IndexOutOfRange { index, len: self.states.len() });
        }
        Ok(())
    }

    fn check_indices(&self, indices: &[usize]) -> Result<()> {
        if indices.is_empty() {
            return Err(Error::InvalidArgument("index sequence must be nonempty".into()));
        }
        for &i in indices {
            self.check_index(i)?;
        }
        Ok(())
    }
}

/// A Bargmann invariant: an index sequence and its value Tr(ρ_{i₁}⋯ρ_{i_m}).
#[derive(Debug, Clone, PartialEq)]
pub struct BargmannInvariant {
    pub indices: Vec<usize>,
    pub value: Complex64,
}

impl BargmannInvariant {
    /// The degree is the length of the index sequence.
    pub fn degree(&self) -> usize {
        self.indices.len()
    }
}

impl Serialize for BargmannInvariant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BargmannInvariant", 3)?;
        st.serialize_field("indices", &self.indices)?;
        st.serialize_field("degree", &self.degree())?;
        st.serialize_field("value", &jsonc::pair(self.value))?;
        st.end()
    }
}

/// Δ_{i₁…i_m} = Tr(ρ_{i₁}ρ_{i₂}⋯ρ_{i_m}) by direct matrix products.
///
/// Invariant under cyclic shifts of `indices`; reversing the sequence
/// conjugates the value.
pub fn bargmann(tuple: &StateTuple, indices: &[usize]) -> Result<BargmannInvariant> {
    tuple.check_indices(indices)?;
    let mut prod = tuple.states[indices[0] - 1].rho().clone();
    for &i in &indices[1..] {
        prod *= tuple.states[i - 1].rho();
    }
    Ok(BargmannInvariant { indices: indices.to_vec(), value: prod.trace() })
}

/// Two-state overlap Δ_ij = Tr(ρ_i ρ_j), real for Hermitian inputs, clipped
/// to [0, 1 + 1e-9].
pub fn overlap(tuple: &StateTuple, i: usize, j: usize) -> Result<f64> {
    let inv = bargmann(tuple, &[i, j])?;
    debug_assert!(inv.value.im.abs() < VALIDATION_TOL);
    Ok(inv.value.re.clamp(0.0, 1.0 + 1e-9))
}

/// The n qubit states at the vertices of a regular spherical n-gon:
/// |ψ_k⟩ = cos(θ/2)|0⟩ + sin(θ/2) e^{2πik/n}|1⟩ for k = 0..n-1.
pub fn ngon_states(n: usize, theta: f64) -> Result<StateTuple> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n-gon needs n >= 3, got {n}")));
    }
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::InvalidArgument(format!("theta must be in [0, pi], got {theta}")));
    }
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let states = (0..n)
        .map(|k| {
            let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
            PureState::new(vec![Complex64::new(c, 0.0), phase * s])
        })
        .collect::<Result<Vec<_>>>()?;
    StateTuple::from_pure(states)
}

/// Closed form for the degree-n invariant of [`ngon_states`]:
/// Δ = [1 + sin²(θ/2)(e^{2πi/n} - 1)]^n.
pub fn ngon_invariant(n: usize, theta: f64) -> Result<Complex64> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("n-gon needs n >= 3, got {n}")));
    }
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::InvalidArgument(format!("theta must be in [0, pi], got {theta}")));
    }
    let s2 = (theta / 2.0).sin().powi(2);
    let base = Complex64::ONE
        + Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / n as f64) * s2
        - s2;
    Ok(base.powu(n as u32))
}

/// The normalized projector onto the top eigenspace of a density matrix.
#[derive(Debug, Clone)]
pub struct DominantProjector {
    pub state: PureState,
    pub eigenvalue: f64,
    /// Set when the top eigenvalue gap is below 1e-9; the eigenvector is then
    /// whichever the eigensolver picked, deterministically. Diagnostics only.
    pub degenerate: bool,
}

/// Eigenvector of the largest eigenvalue of ρ, with a degeneracy flag.
pub fn dominant_projector(rho: &MixedState) -> Result<DominantProjector> {
    let eigen = rho.eigensystem();
    let (top, vec) = &eigen[0];
    let gap = if eigen.len() > 1 { top - eigen[1].0 } else { f64::INFINITY };
    Ok(DominantProjector {
        state: PureState::from_unnormalized(vec.clone())?,
        eigenvalue: *top,
        degenerate: gap < 1e-9,
    })
}

/// Trace norm ‖A - B‖₁ of the difference of two Hermitian matrices.
pub fn trace_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(&(a - b)).iter().map(|w| w.abs()).sum()
}


#[cfg(test)]
pub(crate) use tests::pauli_triple;
