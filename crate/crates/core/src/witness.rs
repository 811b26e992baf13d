//! Invariant-based witnesses: linear independence via det(G), basis-independent
//! imaginarity, the three-state coherence polytope, and the overlap lower
//! bound.
//!
//! Every verdict is a function of PU invariants only, so it is unchanged when
//! all input states are conjugated by one unitary.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::states::BargmannInvariant;

/// Default trigger threshold for exact (non-sampled) inputs: a numerical
/// floor, not a statistical one.
pub const EXACT_WITNESS_THRESHOLD: f64 = 1e-10;

/// Threshold for shot-estimated inputs at the default five-sigma policy.
pub fn shot_threshold(stderr: f64) -> f64 {
    5.0 * stderr
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WitnessKind {
    LinearIndependence,
    Imaginarity,
    Coherence,
}

/// Outcome of a witness evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessVerdict {
    pub kind: WitnessKind,
    pub triggered: bool,
    /// Signed distance past the decision threshold; positive means triggered.
    pub margin: f64,
    /// Identifiers of violated constraints (facet names, "nonreal", "det").
    pub details: Vec<String>,
}

/// Linear independence of the states behind a reconstructed Gram matrix:
/// triggered iff det(G) > tol.
pub fn linear_independence(gram: &GramMatrix, tol: f64) -> WitnessVerdict {
    linear_independence_of(&gram.entries, tol)
}

pub fn linear_independence_of(entries: &DMatrix<Complex64>, tol: f64) -> WitnessVerdict {
    let det = entries.clone().determinant();
    debug_assert!(det.im.abs() < 1e-8, "Hermitian determinant must be real");
    let margin = det.re - tol;
    WitnessVerdict {
        kind: WitnessKind::LinearIndependence,
        triggered: margin > 0.0,
        margin,
        details: vec!["det".into()],
    }
}

/// det(G) for 3 pairwise non-orthogonal states in the star gauge:
/// 1 - (Δ₁₂+Δ₁₃+Δ₂₃) + 2√(Δ₁₂Δ₁₃Δ₂₃) cos φ₂₃.
pub fn li_closed_form_3(overlaps: &[f64; 3], phi23: f64) -> Result<f64> {
    let [d12, d13, d23] = *overlaps;
    check_non_null(&[d12, d13, d23])?;
    Ok(1.0 - (d12 + d13 + d23) + 2.0 * (d12 * d13 * d23).sqrt() * phi23.cos())
}

/// det(G) for 4 pairwise non-orthogonal states in the star gauge, as a
/// polynomial in the overlaps and the degree-3 phases φ₂₃, φ₂₄, φ₃₄ with
/// e^{iφ_ij} = Δ_{1ij}/|Δ_{1ij}|.
pub fn li_closed_form_4(overlaps: &[f64; 6], phases: &[f64; 3]) -> Result<f64> {
    let [d12, d13, d14, d23, d24, d34] = *overlaps;
    let [p23, p24, p34] = *phases;
    check_non_null(overlaps)?;
    let s = f64::sqrt;
    Ok(1.0 - (d12 + d13 + d14 + d23 + d24 + d34)
        + (d12 * d34 + d13 * d24 + d14 * d23)
        + 2.0
            * (s(d12 * d13 * d23) * p23.cos()
                + s(d12 * d14 * d24) * p24.cos()
                + s(d13 * d14 * d34) * p34.cos()
                + s(d23 * d24 * d34) * (p23 - p24 + p34).cos())
        - 2.0
            * (s(d12 * d13 * d24 * d34) * (p24 - p34).cos()
                + s(d12 * d14 * d23 * d34) * (p23 + p34).cos()
                + s(d13 * d14 * d23 * d24) * (p23 - p24).cos()))
}

fn check_non_null(overlaps: &[f64]) -> Result<()> {
    if overlaps.iter().any(|&d| d <= 0.0) {
        return Err(Error::InvalidArgument(
            "closed-form linear independence assumes no null overlaps".into(),
        ));
    }
    Ok(())
}

/// The star-gauge Gram matrix over explicit overlaps and phases; the mutual
/// oracle for the closed forms.
pub fn star_gauge_gram(overlaps: &[f64], phases: &[f64]) -> Result<DMatrix<Complex64>> {
    let m = match overlaps.len() {
        3 => 3usize,
        6 => 4usize,
        n => {
            return Err(Error::InvalidArgument(format!(
                "expected 3 or 6 overlaps, got {n}"
            )))
        }
    };
    let expected_phases = (m - 1) * (m - 2) / 2;
    if phases.len() != expected_phases {
        return Err(Error::DimensionMismatch { expected: expected_phases, actual: phases.len() });
    }
    let mut g = DMatrix::from_element(m, m, Complex64::ZERO);
    for i in 0..m {
        g[(i, i)] = Complex64::ONE;
    }
    let mut pair = 0usize;
    let mut phase_idx = 0usize;
    for i in 0..m {
        for j in i + 1..m {
            let r = overlaps[pair].sqrt();
            pair += 1;
            let entry = if i == 0 {
                Complex64::new(r, 0.0)
            } else {
                let e = Complex64::from_polar(r, phases[phase_idx]);
                phase_idx += 1;
                e
            };
            g[(i, j)] = entry;
            g[(j, i)] = entry.conj();
        }
    }
    Ok(g)
}

/// Basis-independent imaginarity witness: a degree ≥ 3 invariant with
/// |Im Δ| > threshold certifies complex amplitudes in any basis.
pub fn imaginarity_witness(inv: &BargmannInvariant, threshold: f64) -> Result<WitnessVerdict> {
    if inv.degree() < 3 {
        return Err(Error::InvalidArgument(
            "imaginarity needs degree >= 3: degree-2 invariants are real by construction".into(),
        ));
    }
    let margin = inv.value.im.abs() - threshold;
    Ok(WitnessVerdict {
        kind: WitnessKind::Imaginarity,
        triggered: margin > 0.0,
        margin,
        details: vec!["imaginary_part".into()],
    })
}

/// One linear facet n·x ≤ b of the coherence polytope over
/// x = (Δ₁₂, Δ₁₃, Δ₂₃, Δ₁₂₃).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Facet {
    pub name: &'static str,
    pub normal: [f64; 4],
    pub offset: f64,
}

/// Facets of the polytope of invariant 4-tuples reachable by simultaneously
/// diagonalizable states. The same set must fall out of the convex hull of
/// [`coherence_vertices`]; the test suite recomputes the hull and fails the
/// build on any drift.
pub fn coherence_facets() -> [Facet; 5] {
    [
        Facet { name: "posd1", normal: [0.0, 0.0, 0.0, -1.0], offset: 0.0 },
        Facet { name: "posd2_12", normal: [-1.0, 0.0, 0.0, 1.0], offset: 0.0 },
        Facet { name: "posd2_13", normal: [0.0, -1.0, 0.0, 1.0], offset: 0.0 },
        Facet { name: "posd2_23", normal: [0.0, 0.0, -1.0, 1.0], offset: 0.0 },
        Facet { name: "posd3", normal: [0.5, 0.5, 0.5, -1.0], offset: 0.5 },
    ]
}

/// The deterministic assignments reachable by coherence-free states; their
/// convex hull is the coherence polytope.
pub fn coherence_vertices() -> [[f64; 4]; 5] {
    [
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 1.0, 1.0, 1.0],
    ]
}

/// Membership test for the three-state coherence polytope. Coherence is
/// witnessed when Δ₁₂₃ is non-real beyond `threshold` or any facet is
/// violated by more than `threshold`.
pub fn coherence_polytope_check(
    d12: f64,
    d13: f64,
    d23: f64,
    d123: Complex64,
    threshold: f64,
) -> WitnessVerdict {
    let mut details = Vec::new();
    let mut margin = f64::NEG_INFINITY;

    let imag = d123.im.abs() - threshold;
    margin = margin.max(imag);
    if imag > 0.0 {
        details.push("nonreal".to_string());
    }

    let x = [d12, d13, d23, d123.re];
    for facet in coherence_facets() {
        let lhs: f64 = facet.normal.iter().zip(&x).map(|(n, v)| n * v).sum();
        let violation = lhs - facet.offset - threshold;
        margin = margin.max(violation);
        if violation > 0.0 {
            details.push(facet.name.to_string());
        }
    }

    WitnessVerdict {
        kind: WitnessKind::Coherence,
        triggered: !details.is_empty(),
        margin,
        details,
    }
}

/// |Δ|² lower-bounds the overlap of every cyclically neighboring pair in the
/// invariant's index cycle.
pub fn overlap_lower_bound(inv: &BargmannInvariant) -> f64 {
    inv.value.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::{build_frame_graph, choose_spanning_tree, reconstruct_gram};
    use crate::random;
    use crate::states::{bargmann, ngon_states, overlap, pauli_triple, PureState, StateTuple};
    use nalgebra::DVector;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn gram_of(t: &StateTuple) -> GramMatrix {
        let g = build_frame_graph(t, crate::gram::DEFAULT_ZERO_THRESHOLD).unwrap();
        let comp = g.components();
        assert_eq!(comp.len(), 1);
        let tree = choose_spanning_tree(&g, &comp[0]).unwrap();
        reconstruct_gram(t, &g, &tree).unwrap()
    }

    /// Three real qubit states equally spaced on the xz great circle.
    fn xz_triangle() -> StateTuple {
        let states = (0..3)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                PureState::new(vec![
                    Complex64::new((t / 2.0).cos(), 0.0),
                    Complex64::new((t / 2.0).sin(), 0.0),
                ])
                .unwrap()
            })
            .collect();
        StateTuple::from_pure(states).unwrap()
    }

    #[test]
    fn orthonormal_states_are_independent() {
        let t = StateTuple::from_pure(
            (0..3).map(|k| PureState::basis(3, k).unwrap()).collect(),
        )
        .unwrap();
        // orthonormal tuple: disconnected graph, det of the full matrix is 1
        let rec = crate::gram::reconstruct_components(&t, 1e-9).unwrap();
        let v = linear_independence_of(&rec.full_matrix(), 1e-9);
        assert!(v.triggered);
        assert!((v.margin - 1.0).abs() < 1e-9);
    }

    #[test]
    fn duplicated_state_is_dependent() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let psi = random::random_pure_state(&mut rng, 3);
        let other = random::random_pure_state(&mut rng, 3);
        let t = StateTuple::from_pure(vec![psi.clone(), other, psi]).unwrap();
        let v = linear_independence(&gram_of(&t), 1e-9);
        assert!(!v.triggered);
        assert!(v.margin.abs() < 1e-7);
    }

    #[test]
    fn qubit_triples_are_always_dependent() {
        let tol = 1e-9;
        let v = linear_independence(&gram_of(&pauli_triple()), tol);
        assert!(!v.triggered, "three vectors in C^2 cannot be independent");
        // det itself vanishes; margin is det - tol
        assert!((v.margin + tol).abs() < 1e-10);
    }

    #[test]
    fn xz_triangle_sits_on_the_boundary() {
        let t = xz_triangle();
        for (i, j) in [(1usize, 2usize), (1, 3), (2, 3)] {
            assert!((overlap(&t, i, j).unwrap() - 0.25).abs() < 1e-12);
        }
        let d123 = bargmann(&t, &[1, 2, 3]).unwrap().value;
        assert!((d123 - Complex64::new(-0.125, 0.0)).norm() < 1e-12);
        // phase of Delta_123 is pi: closed form hits zero exactly
        let det = li_closed_form_3(&[0.25, 0.25, 0.25], std::f64::consts::PI).unwrap();
        assert!(det.abs() < 1e-12);
        let v = linear_independence(&gram_of(&t), 1e-9);
        assert!(!v.triggered);
    }

    #[test]
    fn closed_form_3_matches_det_and_rank_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..300 {
            let t = random::random_pure_tuple(&mut rng, 3, 3);
            let g = gram_of(&t);
            let overlaps = [g.entry(1, 2).norm_sqr(), g.entry(1, 3).norm_sqr(), g.entry(2, 3).norm_sqr()];
            if overlaps.iter().any(|&d| d < 1e-6) {
                continue;
            }
            let phi23 = g.entry(2, 3).arg();
            let closed = li_closed_form_3(&overlaps, phi23).unwrap();
            let det = g.entries.clone().determinant().re;
            assert!((closed - det).abs() < 1e-10, "{closed} vs {det}");
            // rank oracle: stack amplitudes and count singular values
            let mut m = DMatrix::from_element(3, 3, Complex64::ZERO);
            for (col, i) in (1..=3usize).enumerate() {
                m.set_column(col, t.pure_part(i).unwrap().unwrap().amplitudes());
            }
            let sv = m.svd(false, false).singular_values;
            let full_rank = sv.iter().all(|&s| s > 1e-7);
            assert_eq!(closed > 1e-9, full_rank);
        }
    }

    #[test]
    fn closed_form_4_matches_det() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..300 {
            let overlaps: [f64; 6] = std::array::from_fn(|_| rng.random_range(0.01..0.6));
            let phases: [f64; 3] =
                std::array::from_fn(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI));
            let closed = li_closed_form_4(&overlaps, &phases).unwrap();
            let g = star_gauge_gram(&overlaps, &phases).unwrap();
            let det = g.determinant().re;
            assert!((closed - det).abs() < 1e-10, "{closed} vs {det}");
        }
    }

    #[test]
    fn closed_form_rejects_null_overlaps() {
        assert!(li_closed_form_3(&[0.0, 0.3, 0.3], 0.1).is_err());
        assert!(li_closed_form_4(&[0.1, 0.0, 0.1, 0.1, 0.1, 0.1], &[0.0; 3]).is_err());
    }

    #[test]
    fn pauli_imaginarity_margin() {
        let inv = bargmann(&pauli_triple(), &[1, 2, 3]).unwrap();
        let threshold = 0.1;
        let v = imaginarity_witness(&inv, threshold).unwrap();
        assert!(v.triggered);
        assert!((v.margin - (0.25 - threshold)).abs() < 1e-12);
    }

    #[test]
    fn degree_two_is_rejected() {
        let inv = bargmann(&pauli_triple(), &[1, 2]).unwrap();
        assert!(imaginarity_witness(&inv, 0.0).is_err());
    }

    #[test]
    fn real_tuples_never_trigger_imaginarity() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        for _ in 0..200 {
            // random real-amplitude states
            let states = (0..3)
                .map(|_| {
                    let v = DVector::from_fn(3, |_, _| {
                        Complex64::new(rng.random_range(-1.0..1.0), 0.0)
                    });
                    PureState::from_unnormalized(v).unwrap()
                })
                .collect();
            let t = StateTuple::from_pure(states).unwrap();
            let inv = bargmann(&t, &[1, 2, 3]).unwrap();
            let v = imaginarity_witness(&inv, EXACT_WITNESS_THRESHOLD).unwrap();
            assert!(!v.triggered, "real tuple triggered with Im = {}", inv.value.im);
        }
    }

    #[test]
    fn shot_mode_false_positive_rate() {
        // threshold 5 sigma on the implied Im estimate keeps the false
        // positive rate below alpha on real (null) tuples
        use crate::cycletest::{sample, Branch, CycleTestSpec};
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let alpha = 1e-3;
        let trials = 400;
        let mut false_positives = 0;
        for k in 0..trials {
            let states = (0..3)
                .map(|_| {
                    let v = DVector::from_fn(2, |_, _| {
                        Complex64::new(rng.random_range(-1.0..1.0), 0.0)
                    });
                    PureState::from_unnormalized(v).unwrap()
                })
                .collect();
            let t = StateTuple::from_pure(states).unwrap();
            let spec = CycleTestSpec::new(t, vec![1, 2, 3], Branch::Imag)
                .unwrap()
                .with_shots(4000, k as u64);
            let r = sample(&spec).unwrap();
            // the estimate of Im is 2p-1, with standard error 2*stderr(p)
            let est = BargmannInvariant {
                indices: vec![1, 2, 3],
                value: Complex64::new(0.0, r.implied_invariant_part),
            };
            let v = imaginarity_witness(&est, shot_threshold(2.0 * r.stderr.unwrap())).unwrap();
            if v.triggered {
                false_positives += 1;
            }
        }
        assert!(
            (false_positives as f64) / (trials as f64) <= alpha,
            "{false_positives}/{trials}"
        );
    }

    #[test]
    fn xz_triangle_violates_posd1() {
        let v = coherence_polytope_check(
            0.25,
            0.25,
            0.25,
            Complex64::new(-0.125, 0.0),
            EXACT_WITNESS_THRESHOLD,
        );
        assert!(v.triggered);
        assert_eq!(v.details, vec!["posd1"]);
        assert!((v.margin - 0.125).abs() < 1e-9);
    }

    #[test]
    fn table_vertices_sit_inside() {
        for vert in coherence_vertices() {
            let v = coherence_polytope_check(
                vert[0],
                vert[1],
                vert[2],
                Complex64::new(vert[3], 0.0),
                EXACT_WITNESS_THRESHOLD,
            );
            assert!(!v.triggered, "vertex {vert:?} flagged: {:?}", v.details);
        }
    }

    #[test]
    fn facets_match_brute_force_hull_of_vertices() {
        // hyperplane through every 4-subset of the 5 vertices, oriented
        // toward the remaining vertex; the polytope is a 4-simplex so this IS
        // the hull
        let verts = coherence_vertices();
        let mut derived: Vec<([f64; 4], f64)> = Vec::new();
        for skip in 0..5 {
            let subset: Vec<[f64; 4]> =
                (0..5).filter(|&k| k != skip).map(|k| verts[k]).collect();
            let base = subset[0];
            let rows: Vec<[f64; 4]> = subset[1..]
                .iter()
                .map(|p| std::array::from_fn(|k| p[k] - base[k]))
                .collect();
            // normal = nullspace of the 3x4 difference matrix, via the
            // smallest eigenvector of A^H A
            let m = DMatrix::from_fn(3, 4, |i, j| Complex64::new(rows[i][j], 0.0));
            let gram = m.adjoint() * &m;
            let se = gram.symmetric_eigen();
            let smallest = (0..4)
                .min_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap())
                .unwrap();
            assert!(se.eigenvalues[smallest].abs() < 1e-12, "vertices not affinely independent");
            let normal: [f64; 4] = std::array::from_fn(|k| se.eigenvectors[(k, smallest)].re);
            let offset: f64 = normal.iter().zip(&base).map(|(n, v)| n * v).sum();
            let other = verts[skip];
            let side: f64 = normal.iter().zip(&other).map(|(n, v)| n * v).sum();
            let (normal, offset) = if side > offset {
                (std::array::from_fn(|k| -normal[k]), -offset)
            } else {
                (normal, offset)
            };
            derived.push((normal, offset));
        }
        // each hard-coded facet must match one derived hyperplane up to
        // positive scale
        for facet in coherence_facets() {
            let found = derived.iter().any(|(n, b)| {
                let scale = facet
                    .normal
                    .iter()
                    .zip(n)
                    .find(|(f, _)| f.abs() > 1e-9)
                    .map(|(f, d)| d / f)
                    .unwrap_or(0.0);
                scale > 1e-9
                    && facet.normal.iter().zip(n).all(|(f, d)| (f * scale - d).abs() < 1e-9)
                    && (facet.offset * scale - b).abs() < 1e-9
            });
            assert!(found, "facet {} not reproduced by the hull", facet.name);
        }
        assert_eq!(derived.len(), 5);
    }

    #[test]
    fn diagonal_tuples_never_trigger_coherence() {
        let mut rng = ChaCha12Rng::seed_from_u64(19);
        let u = random::random_unitary(&mut rng, 3);
        for _ in 0..10_000 {
            // random diagonal states in a common (rotated) basis
            let mut probs = [[0.0f64; 3]; 3];
            for p in probs.iter_mut() {
                *p = std::array::from_fn(|_| rng.random_range(0.0..1.0f64));
                let total: f64 = p.iter().sum();
                *p = p.map(|x| x / total);
            }
            let states: Vec<_> = probs
                .iter()
                .map(|p| {
                    let d = DMatrix::from_fn(3, 3, |i, j| {
                        if i == j { Complex64::new(p[i], 0.0) } else { Complex64::ZERO }
                    });
                    crate::states::MixedState::new(&u * d * u.adjoint()).unwrap()
                })
                .collect();
            let t = StateTuple::from_mixed(states).unwrap();
            let d12 = overlap(&t, 1, 2).unwrap();
            let d13 = overlap(&t, 1, 3).unwrap();
            let d23 = overlap(&t, 2, 3).unwrap();
            let d123 = bargmann(&t, &[1, 2, 3]).unwrap().value;
            assert!(d123.im.abs() < 1e-10 && (-1e-10..=1.0 + 1e-9).contains(&d123.re));
            let v = coherence_polytope_check(d12, d13, d23, d123, EXACT_WITNESS_THRESHOLD);
            assert!(!v.triggered, "diagonal tuple flagged: {:?}", v.details);
        }
    }

    #[test]
    fn overlap_bound_examples() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let psi = random::random_pure_state(&mut rng, 3);
        let t = StateTuple::from_pure(vec![psi.clone(), psi.clone(), psi]).unwrap();
        let inv = bargmann(&t, &[1, 2, 3]).unwrap();
        assert!((overlap_lower_bound(&inv) - 1.0).abs() < 1e-10);

        let t = pauli_triple();
        let inv = bargmann(&t, &[1, 2, 3]).unwrap();
        let bound = overlap_lower_bound(&inv);
        assert!((bound - 0.125).abs() < 1e-12);
        for (i, j) in [(1, 2), (2, 3), (3, 1)] {
            assert!(bound <= overlap(&t, i, j).unwrap() + 1e-12);
        }

        let t = random::random_pure_tuple(&mut rng, 4, 3);
        let inv = bargmann(&t, &[1, 2, 3, 4]).unwrap();
        let bound = overlap_lower_bound(&inv);
        for (i, j) in [(1, 2), (2, 3), (3, 4), (4, 1)] {
            assert!(bound <= overlap(&t, i, j).unwrap() + 1e-12);
        }
    }

    #[test]
    fn verdicts_are_basis_independent() {
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        let t = random::random_pure_tuple(&mut rng, 3, 3);
        let u = random::random_unitary(&mut rng, 3);
        let rotated = StateTuple::from_pure(
            (1..=3)
                .map(|i| {
                    PureState::from_unnormalized(
                        &u * t.pure_part(i).unwrap().unwrap().amplitudes(),
                    )
                    .unwrap()
                })
                .collect(),
        )
        .unwrap();
        let (va, vb) = (
            linear_independence(&gram_of(&t), 1e-9),
            linear_independence(&gram_of(&rotated), 1e-9),
        );
        assert_eq!(va.triggered, vb.triggered);
        assert!((va.margin - vb.margin).abs() < 1e-10);

        let (ia, ib) = (
            imaginarity_witness(&bargmann(&t, &[1, 2, 3]).unwrap(), 0.0).unwrap(),
            imaginarity_witness(&bargmann(&rotated, &[1, 2, 3]).unwrap(), 0.0).unwrap(),
        );
        assert_eq!(ia.triggered, ib.triggered);
        assert!((ia.margin - ib.margin).abs() < 1e-10);

        let co = |t: &StateTuple| {
            coherence_polytope_check(
                overlap(t, 1, 2).unwrap(),
                overlap(t, 1, 3).unwrap(),
                overlap(t, 2, 3).unwrap(),
                bargmann(t, &[1, 2, 3]).unwrap().value,
                EXACT_WITNESS_THRESHOLD,
            )
        };
        let (ca, cb) = (co(&t), co(&rotated));
        assert_eq!(ca.triggered, cb.triggered);
        assert!((ca.margin - cb.margin).abs() < 1e-10);
    }

    #[test]
    fn ngon_triangle_is_the_imaginarity_maximum() {
        // grid plus local refinement over qubit triples: no Im above 1/4
        let im_of = |t2: f64, t3: f64, p3: f64| -> f64 {
            // psi1 = |0>, psi2 = (cos t2/2, sin t2/2), psi3 with phase p3
            let a2 = (t2 / 2.0).cos();
            let b2 = (t2 / 2.0).sin();
            let a3 = (t3 / 2.0).cos();
            let b3 = Complex64::from_polar((t3 / 2.0).sin(), p3);
            // <1|2><2|3><3|1> with real psi2
            let i12 = Complex64::new(a2, 0.0);
            let i23 = Complex64::new(a2 * a3, 0.0) + b3 * b2;
            let i31 = Complex64::new(a3, 0.0);
            (i12 * i23 * i31).im
        };
        let mut best = (0.0f64, 0.0, 0.0, f64::NEG_INFINITY);
        let steps = 40;
        for i in 0..=steps {
            let t2 = std::f64::consts::PI * i as f64 / steps as f64;
            for j in 0..=steps {
                let t3 = std::f64::consts::PI * j as f64 / steps as f64;
                for k in 0..(2 * steps) {
                    let p3 = 2.0 * std::f64::consts::PI * k as f64 / (2 * steps) as f64;
                    let v = im_of(t2, t3, p3);
                    if v > best.3 {
                        best = (t2, t3, p3, v);
                    }
                }
            }
        }
        // coordinate-descent refinement
        let (mut t2, mut t3, mut p3, mut val) = best;
        let mut step = 0.05;
        while step > 1e-7 {
            let mut improved = false;
            for (dt2, dt3, dp3) in [
                (step, 0.0, 0.0),
                (-step, 0.0, 0.0),
                (0.0, step, 0.0),
                (0.0, -step, 0.0),
                (0.0, 0.0, step),
                (0.0, 0.0, -step),
            ] {
                let v = im_of(t2 + dt2, t3 + dt3, p3 + dp3);
                if v > val {
                    val = v;
                    t2 += dt2;
                    t3 += dt3;
                    p3 += dp3;
                    improved = true;
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
        assert!(val <= 0.25 + 1e-6, "found Im = {val}");
        assert!(val > 0.25 - 1e-4, "search should approach the n-gon value");
        // and the spherical-triangle tuple attains it
        let t = ngon_states(3, (1.0 / 3.0f64.sqrt()).acos()).unwrap();
        let inv = bargmann(&t, &[1, 2, 3]).unwrap();
        assert!((inv.value.im - 0.25).abs() < 1e-10);
    }
}
