//! Seeded random generation of states, tuples, and unitaries.
//!
//! The crate standardizes on ChaCha12 so that every randomized quantity is a
//! deterministic function of an explicit seed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::states::{MixedState, PureState, StateTuple};

fn gaussian_complex<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Ginibre matrix: i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Haar-random pure state in dimension `dim`.
pub fn random_pure_state<R: Rng>(rng: &mut R, dim: usize) -> PureState {
    let v = DVector::from_fn(dim, |_, _| gaussian_complex(rng));
    PureState::from_unnormalized(v).expect("gaussian vector is nonzero almost surely")
}

/// Full-rank random density matrix: GG†/Tr(GG†) for Ginibre G.
pub fn random_mixed_state<R: Rng>(rng: &mut R, dim: usize) -> MixedState {
    let g = ginibre(rng, dim, dim);
    let h = &g * g.adjoint();
    let t = h.trace().re;
    MixedState::new(h / Complex64::new(t, 0.0)).expect("Wishart matrix is a valid state")
}

/// Haar-random unitary via QR of a Ginibre matrix with phase-fixed R diagonal.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> DMatrix<Complex64> {
    let qr = ginibre(rng, dim, dim).qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::ONE };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Tuple of `n` Haar-random pure states in dimension `dim`.
pub fn random_pure_tuple<R: Rng>(rng: &mut R, n: usize, dim: usize) -> StateTuple {
    StateTuple::from_pure((0..n).map(|_| random_pure_state(rng, dim)).collect()).unwrap()
}

/// Tuple of `n` full-rank random density matrices in dimension `dim`.
pub fn random_mixed_tuple<R: Rng>(rng: &mut R, n: usize, dim: usize) -> StateTuple {
    StateTuple::from_mixed((0..n).map(|_| random_mixed_state(rng, dim)).collect()).unwrap()
}

/// Conjugates every member of a tuple by one unitary.
pub fn conjugate_tuple(tuple: &StateTuple, u: &DMatrix<Complex64>) -> StateTuple {
    let states = (1..=tuple.len())
        .map(|i| {
            let rho = u * tuple.state(i).unwrap().rho() * u.adjoint();
            MixedState::new(symmetrize(rho)).unwrap()
        })
        .collect();
    StateTuple::from_mixed(states).unwrap()
}

/// Entrywise complex conjugate of every member (transposition of Hermitian
/// matrices). Flips the imaginary part of every Bargmann invariant.
pub fn conjugate_entries(tuple: &StateTuple) -> StateTuple {
    let states = (1..=tuple.len())
        .map(|i| MixedState::new(tuple.state(i).unwrap().rho().map(|z| z.conj())).unwrap())
        .collect();
    StateTuple::from_mixed(states).unwrap()
}

fn symmetrize(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// A state of purity at least 1 - max_eps built by mixing a random pure state
/// with a random density matrix; returns the state and the mixing weight used.
pub fn random_high_purity_state<R: Rng>(
    rng: &mut R,
    dim: usize,
    max_eps: f64,
) -> (MixedState, f64) {
    loop {
        let psi = random_pure_state(rng, dim);
        let noise = random_mixed_state(rng, dim);
        let t: f64 = rng.random_range(0.0..max_eps);
        let rho = psi.projector() * Complex64::new(1.0 - t, 0.0)
            + noise.rho() * Complex64::new(t, 0.0);
        let rho = MixedState::new(symmetrize(rho)).unwrap();
        if rho.purity() >= 1.0 - max_eps.min(0.5) {
            return (rho, t);
        }
    }
}

/// A pair of m-tuples of mixed states together with delta = max_i of the
/// trace distance between corresponding members.
pub fn random_perturbed_mixed_pair<R: Rng>(
    rng: &mut R,
    m: usize,
    dim: usize,
    strength: f64,
) -> (StateTuple, StateTuple, f64) {
    let mut first = Vec::with_capacity(m);
    let mut second = Vec::with_capacity(m);
    let mut delta: f64 = 0.0;
    for _ in 0..m {
        let rho = random_mixed_state(rng, dim);
        let noise = random_mixed_state(rng, dim);
        let t: f64 = rng.random_range(0.0..strength);
        let sigma = MixedState::new(symmetrize(
            rho.rho() * Complex64::new(1.0 - t, 0.0) + noise.rho() * Complex64::new(t, 0.0),
        ))
        .unwrap();
        delta = delta.max(crate::states::trace_distance(rho.rho(), sigma.rho()));
        first.push(rho);
        second.push(sigma);
    }
    (
        StateTuple::from_mixed(first).unwrap(),
        StateTuple::from_mixed(second).unwrap(),
        delta,
    )
}
