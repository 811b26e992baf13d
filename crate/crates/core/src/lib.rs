//! Relational (projective-unitary invariant) information of quantum state tuples.
//!
//! The geometrical arrangement of a tuple of quantum states, up to a common
//! unitary rotation, is encoded in its Bargmann invariants
//! Δ_{i₁…i_m} = Tr(ρ_{i₁}ρ_{i₂}⋯ρ_{i_m}). This crate computes those invariants
//! directly, simulates the interference circuits (SWAP test and its cycle-test
//! generalization) that measure them, synthesizes the controlled
//! cycle-permutation circuits the tests need, reconstructs gauge-fixed Gram
//! matrices of pure tuples from invariants alone, decides projective-unitary
//! equivalence of pure and mixed tuples, and evaluates invariant-based
//! witnesses of linear independence, imaginarity, and coherence.
//!
//! Modules:
//! - [`states`]: state types, direct invariant computation, spherical n-gon
//!   tuples, dominant eigenprojectors.
//! - [`cycletest`]: exact, shot-sampled, and gate-level cycle-test simulation.
//! - [`circuit`]: cycle-permutation circuit synthesis and verification.
//! - [`sim`]: the mixed-dimension state-vector engine behind the gate path.
//! - [`gram`]: frame graphs, spanning trees, invariant-built Gram matrices.
//! - [`equiv`]: equivalence deciders and the Procrustes stability bound.
//! - [`witness`]: linear-independence, imaginarity, and coherence witnesses.
//! - [`random`]: seeded generators for states, tuples, and unitaries.
//!
//! All operations are pure functions of immutable inputs; nothing in the crate
//! touches global state, so concurrent use needs no synchronization.

pub mod circuit;
pub mod cycletest;
pub mod equiv;
mod error;
pub mod gram;
pub mod jsonc;
pub mod random;
pub mod sim;
pub mod states;
pub mod witness;

pub use nalgebra;
pub use num_complex;

pub use error::{Error, Result};
pub use states::{BargmannInvariant, MixedState, PureState, StateTuple};
