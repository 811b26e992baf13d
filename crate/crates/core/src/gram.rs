//! Gauge-fixed Gram matrices of pure tuples, built from invariants alone.
//!
//! The pipeline: measure all pairwise overlaps to build the frame graph
//! (edges where Tr(ψ_iψ_j) exceeds a zero threshold), pick a spanning tree
//! per connected component, gauge-fix tree-edge inner products to √Δ_ij ≥ 0,
//! and fix the phase of every remaining nonzero entry from the cycle
//! invariant that closes the unique tree path: for a non-tree edge {i,j} with
//! tree path (α₁=j, …, α_k=i),
//!
//! G_ij = Δ(C_ij) / Π √Δ over the k-1 tree edges on the path,
//!
//! where Δ(C_ij) = Δ_{α₁…α_k}. Every entry is then a function of measurable
//! invariants only, and two pure tuples are PU equivalent exactly when their
//! matrices agree. At most (N-1)² invariants are ever involved: N(N-1)/2
//! overlaps plus one closing invariant per non-tree pair.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::jsonc;
use crate::states::{bargmann, overlap, BargmannInvariant, StateTuple};

/// Default zero threshold for exact inputs.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-9;

/// Heuristic zero threshold when overlaps come from shot estimates: five
/// standard errors of the overlap estimator. Statistical edge decisions can
/// misclassify edges; exact inputs should use [`DEFAULT_ZERO_THRESHOLD`].
pub fn shot_zero_threshold(stderr: f64) -> f64 {
    5.0 * stderr
}

/// Undirected graph on tuple indices with edges at nonzero overlaps.
#[derive(Debug, Clone)]
pub struct FrameGraph {
    n: usize,
    overlaps: Vec<Vec<f64>>,
    adjacency: Vec<Vec<bool>>,
    threshold: f64,
}

impl FrameGraph {
    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// 1-based vertex pair.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i - 1][j - 1]
    }

    pub fn overlap(&self, i: usize, j: usize) -> f64 {
        self.overlaps[i - 1][j - 1]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i - 1].iter().filter(|&&e| e).count()
    }

    /// Edges as ordered pairs (i, j) with i < j.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Connected components, each sorted ascending; components sorted by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v + 1);
                for w in 0..self.n {
                    if self.adjacency[v][w] && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Builds the frame graph of a pure tuple: edges where the overlap exceeds
/// `zero_threshold`.
pub fn build_frame_graph(tuple: &StateTuple, zero_threshold: f64) -> Result<FrameGraph> {
    tuple.require_pure(PSD_PURITY_TOL)?;
    let n = tuple.len();
    let mut overlaps = vec![vec![0.0; n]; n];
    let mut adjacency = vec![vec![false; n]; n];
    for i in 1..=n {
        overlaps[i - 1][i - 1] = 1.0;
        for j in i + 1..=n {
            let o = overlap(tuple, i, j)?;
            overlaps[i - 1][j - 1] = o;
            overlaps[j - 1][i - 1] = o;
            let edge = o > zero_threshold;
            adjacency[i - 1][j - 1] = edge;
            adjacency[j - 1][i - 1] = edge;
        }
    }
    Ok(FrameGraph { n, overlaps, adjacency, threshold: zero_threshold })
}

const PSD_PURITY_TOL: f64 = 1e-9;

/// A rooted spanning tree of one connected component.
#[derive(Debug, Clone, Serialize)]
pub struct SpanningTree {
    pub root: usize,
    /// Sorted component vertices (1-based tuple indices).
    pub vertices: Vec<usize>,
    /// parent[v-1] for every non-root component vertex v, None at the root
    /// and for vertices outside the component.
    pub parents: Vec<Option<usize>>,
}

impl SpanningTree {
    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn is_tree_edge(&self, i: usize, j: usize) -> bool {
        self.parents[i - 1] == Some(j) || self.parents[j - 1] == Some(i)
    }

    /// Tree edges as (child, parent) pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parents
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (v + 1, p)))
            .collect()
    }

    /// Vertex path from `from` up-and-down the tree to `to`.
    pub fn path(&self, from: usize, to: usize) -> Result<Vec<usize>> {
        if !self.contains(from) || !self.contains(to) {
            return Err(Error::InvalidArgument(format!(
                "path endpoints {from},{to} not in the spanned component"
            )));
        }
        let climb = |mut v: usize| -> Vec<usize> {
            let mut up = vec![v];
            while let Some(p) = self.parents[v - 1] {
                up.push(p);
                v = p;
            }
            up
        };
        let a = climb(from);
        let b = climb(to);
        // drop the shared tail above the lowest common ancestor
        let mut ai = a.len();
        let mut bi = b.len();
        while ai > 1 && bi > 1 && a[ai - 2] == b[bi - 2] {
            ai -= 1;
            bi -= 1;
        }
        let mut path = a[..ai].to_vec();
        path.extend(b[..bi - 1].iter().rev());
        Ok(path)
    }
}

/// Deterministic spanning tree of a component: BFS from the maximum-degree
/// vertex (ties broken by lowest index), neighbors visited in ascending
/// order. On a complete component this is the star at the chosen root, which
/// keeps every closing cycle at degree 3.
pub fn choose_spanning_tree(graph: &FrameGraph, component: &[usize]) -> Result<SpanningTree> {
    let root = component
        .iter()
        .copied()
        .max_by(|&a, &b| graph.degree(a).cmp(&graph.degree(b)).then(b.cmp(&a)))
        .ok_or_else(|| Error::InvalidArgument("empty component".into()))?;
    bfs_tree(graph, component, root)
}

/// BFS spanning tree from an explicit root; the alternative-tree entry point.
pub fn bfs_tree(graph: &FrameGraph, component: &[usize], root: usize) -> Result<SpanningTree> {
    if !component.contains(&root) {
        return Err(Error::InvalidArgument(format!("root {root} not in component")));
    }
    let mut vertices = component.to_vec();
    vertices.sort_unstable();
    let mut parents = vec![None; graph.n_vertices()];
    let mut seen = vec![false; graph.n_vertices() + 1];
    seen[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    let mut reached = 1usize;
    while let Some(v) = queue.pop_front() {
        for &w in &vertices {
            if !seen[w] && graph.has_edge(v, w) {
                seen[w] = true;
                parents[w - 1] = Some(v);
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    if reached != vertices.len() {
        return Err(Error::InvalidArgument("component is not connected".into()));
    }
    Ok(SpanningTree { root, vertices, parents })
}

/// Where an entry's value came from.
#[derive(Debug, Clone, Serialize)]
pub struct EntryProvenance {
    /// 1-based tuple indices of the entry (row, col), row < col.
    pub row: usize,
    pub col: usize,
    /// The invariant index sequence consumed for this entry; for tree edges
    /// the degree-2 sequence, for closing entries the cycle sequence.
    pub indices: Vec<usize>,
}

/// Gauge-fixed Gram matrix of one connected component.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    /// Component vertices (sorted, 1-based tuple indices); entry (a, b)
    /// refers to vertices[a], vertices[b].
    pub vertices: Vec<usize>,
    pub entries: DMatrix<Complex64>,
    pub provenance: Vec<EntryProvenance>,
    pub invariants_used: Vec<BargmannInvariant>,
    /// Pairwise overlaps measured to establish the frame graph.
    pub n_overlap_invariants: usize,
    /// Non-tree vertex pairs: closing invariants a star-style measurement
    /// campaign would evaluate.
    pub n_closing_candidates: usize,
    /// Closing invariants actually consumed (nonzero frame-graph edges off
    /// the tree).
    pub n_closing_nonzero: usize,
}

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    fn local(&self, v: usize) -> usize {
        self.vertices.binary_search(&v).expect("vertex in component")
    }

    /// Entry by 1-based tuple indices.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(self.local(i), self.local(j))]
    }

    /// Eigendecomposition-based representative vectors whose pairwise inner
    /// products reproduce the entries; rank cut at `RANK_CUTOFF`·λ_max.
    pub fn representatives(&self) -> Vec<nalgebra::DVector<Complex64>> {
        representatives_of(&self.entries)
    }
}

/// Relative eigenvalue cutoff for rank decisions and pseudo-inverses.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Vectors v_i with ⟨v_i|v_j⟩ = G_ij, from the spectral factorization of a
/// PSD matrix. The ambient dimension is the numerical rank.
pub fn representatives_of(g: &DMatrix<Complex64>) -> Vec<nalgebra::DVector<Complex64>> {
    let n = g.nrows();
    let se = g.clone().symmetric_eigen();
    let lambda_max = se.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
    let kept: Vec<usize> = (0..n)
        .filter(|&k| se.eigenvalues[k] > RANK_CUTOFF * lambda_max && se.eigenvalues[k] > 0.0)
        .collect();
    (0..n)
        .map(|i| {
            nalgebra::DVector::from_iterator(
                kept.len(),
                kept.iter().map(|&k| {
                    se.eigenvalues[k].sqrt() * se.eigenvectors[(i, k)].conj()
                }),
            )
        })
        .collect()
}

impl Serialize for GramMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GramMatrix", 7)?;
        st.serialize_field("vertices", &self.vertices)?;
        st.serialize_field("entries", &jsonc::matrix_rows(&self.entries))?;
        st.serialize_field("provenance", &self.provenance)?;
        st.serialize_field("invariants_used", &self.invariants_used)?;
        st.serialize_field("n_overlap_invariants", &self.n_overlap_invariants)?;
        st.serialize_field("n_closing_candidates", &self.n_closing_candidates)?;
        st.serialize_field("n_closing_nonzero", &self.n_closing_nonzero)?;
        st.end()
    }
}

/// The invariant index sequences the reconstruction consumes: every pairwise
/// overlap, plus one closing-cycle sequence per non-tree frame-graph edge of
/// the spanned component.
pub fn required_invariants(graph: &FrameGraph, tree: &SpanningTree) -> Result<Vec<Vec<usize>>> {
    let n = graph.n_vertices();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(vec![i, j]);
        }
    }
    for (i, j) in graph.edges() {
        if tree.contains(i) && tree.contains(j) && !tree.is_tree_edge(i, j) {
            let mut cycle = tree.path(j, i)?;
            debug_assert!(cycle.len() >= 3);
            out.push(std::mem::take(&mut cycle));
        }
    }
    Ok(out)
}

/// Reconstructs the gauge-fixed Gram matrix of the component spanned by
/// `tree`, consuming invariants only (never raw amplitudes).
pub fn reconstruct_gram(
    tuple: &StateTuple,
    graph: &FrameGraph,
    tree: &SpanningTree,
) -> Result<GramMatrix> {
    tuple.require_pure(PSD_PURITY_TOL)?;
    for (child, parent) in tree.edges() {
        if !graph.has_edge(child, parent) {
            return Err(Error::InvalidArgument(format!(
                "tree edge {{{child},{parent}}} is not a frame-graph edge"
            )));
        }
    }
    let vertices = tree.vertices.clone();
    let nc = vertices.len();
    let mut entries = DMatrix::from_element(nc, nc, Complex64::ZERO);
    let mut provenance = Vec::new();
    let mut invariants_used = Vec::new();

    for a in 0..nc {
        entries[(a, a)] = Complex64::ONE;
    }

    // overlaps: all pairs within the component count as measured
    let mut n_overlaps = 0usize;
    for (a, &i) in vertices.iter().enumerate() {
        for (b, &j) in vertices.iter().enumerate().skip(a + 1) {
            let o = graph.overlap(i, j);
            invariants_used.push(BargmannInvariant {
                indices: vec![i, j],
                value: Complex64::new(o, 0.0),
            });
            n_overlaps += 1;
            if tree.is_tree_edge(i, j) {
                let v = Complex64::new(o.max(0.0).sqrt(), 0.0);
                entries[(a, b)] = v;
                entries[(b, a)] = v;
                provenance.push(EntryProvenance { row: i, col: j, indices: vec![i, j] });
            }
        }
    }

    // closing cycles for non-tree frame edges
    let mut n_closing_nonzero = 0usize;
    for (a, &i) in vertices.iter().enumerate() {
        for (b, &j) in vertices.iter().enumerate().skip(a + 1) {
            if !graph.has_edge(i, j) || tree.is_tree_edge(i, j) {
                continue;
            }
            // cycle: tree path from j to i, closed by the edge (i, j)
            let cycle = tree.path(j, i)?;
            let inv = bargmann(tuple, &cycle)?;
            let mut denom = Complex64::ONE;
            for w in cycle.windows(2) {
                denom *= Complex64::new(graph.overlap(w[0], w[1]).max(0.0).sqrt(), 0.0);
            }
            if denom.norm() == 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "vanishing tree-edge overlap along the path {cycle:?}"
                )));
            }
            let value = inv.value / denom;
            entries[(a, b)] = value;
            entries[(b, a)] = value.conj();
            provenance.push(EntryProvenance { row: i, col: j, indices: cycle.clone() });
            invariants_used.push(inv);
            n_closing_nonzero += 1;
        }
    }

    let n_closing_candidates = nc * (nc - 1) / 2 - (nc - 1);
    let budget = (nc.max(1) - 1).pow(2);
    debug_assert!(n_overlaps + n_closing_candidates <= budget.max(n_overlaps));
    if invariants_used.len() > budget.max(1) {
        return Err(Error::InvalidArgument(format!(
            "invariant budget exceeded: {} > {budget}",
            invariants_used.len()
        )));
    }
    Ok(GramMatrix {
        vertices,
        entries,
        provenance,
        invariants_used,
        n_overlap_invariants: n_overlaps,
        n_closing_candidates,
        n_closing_nonzero,
    })
}

/// Per-component reconstruction of a whole tuple.
#[derive(Debug, Clone, Serialize)]
pub struct GramReconstruction {
    pub n: usize,
    pub components: Vec<ComponentGram>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentGram {
    pub vertices: Vec<usize>,
    pub tree: SpanningTree,
    pub gram: GramMatrix,
}

impl GramReconstruction {
    /// Full N×N matrix, zero across components.
    pub fn full_matrix(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.n, self.n, Complex64::ZERO);
        for comp in &self.components {
            for (a, &i) in comp.vertices.iter().enumerate() {
                for (b, &j) in comp.vertices.iter().enumerate() {
                    m[(i - 1, j - 1)] = comp.gram.entries[(a, b)];
                }
            }
        }
        m
    }

    pub fn total_invariants_used(&self) -> usize {
        self.components.iter().map(|c| c.gram.invariants_used.len()).sum()
    }
}

/// Builds the frame graph, chooses per-component trees, and reconstructs each
/// block.
pub fn reconstruct_components(tuple: &StateTuple, zero_threshold: f64) -> Result<GramReconstruction> {
    let graph = build_frame_graph(tuple, zero_threshold)?;
    let mut components = Vec::new();
    for comp in graph.components() {
        let tree = choose_spanning_tree(&graph, &comp)?;
        let gram = reconstruct_gram(tuple, &graph, &tree)?;
        components.push(ComponentGram { vertices: comp, tree, gram });
    }
    Ok(GramReconstruction { n: tuple.len(), components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::states::{pauli_triple, PureState};
    use nalgebra::DVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn reconstruct_connected(tuple: &StateTuple) -> GramMatrix {
        let graph = build_frame_graph(tuple, DEFAULT_ZERO_THRESHOLD).unwrap();
        let comps = graph.components();
        assert_eq!(comps.len(), 1, "tuple should have a connected frame graph");
        let tree = choose_spanning_tree(&graph, &comps[0]).unwrap();
        reconstruct_gram(tuple, &graph, &tree).unwrap()
    }

    #[test]
    fn orthogonal_states_give_edgeless_graph() {
        let t = StateTuple::from_pure(
            (0..4).map(|k| PureState::basis(4, k).unwrap()).collect(),
        )
        .unwrap();
        let g = build_frame_graph(&t, DEFAULT_ZERO_THRESHOLD).unwrap();
        assert!(g.edges().is_empty());
        assert_eq!(g.components().len(), 4);
    }

    #[test]
    fn pauli_triple_graph_is_k3_with_half_overlaps() {
        let g = build_frame_graph(&pauli_triple(), DEFAULT_ZERO_THRESHOLD).unwrap();
        assert_eq!(g.edges(), vec![(1, 2), (1, 3), (2, 3)]);
        for (i, j) in g.edges() {
            assert!((g.overlap(i, j) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn tree_choices() {
        // star frame graph: hub overlaps three mutually orthogonal leaves
        let hub = PureState::from_unnormalized(DVector::from_element(
            3,
            Complex64::new(1.0, 0.0),
        ))
        .unwrap();
        let mut states = vec![hub];
        for k in 0..3 {
            states.push(PureState::basis(3, k).unwrap());
        }
        let s = 0.5f64.sqrt();
        let t = StateTuple::from_pure(states).unwrap();
        let g = build_frame_graph(&t, DEFAULT_ZERO_THRESHOLD).unwrap();
        assert_eq!(g.edges(), vec![(1, 2), (1, 3), (1, 4)]);
        let tree = choose_spanning_tree(&g, &g.components()[0]).unwrap();
        assert_eq!(tree.root, 1);
        assert_eq!(tree.edges().len(), 3);
        assert!(tree.edges().iter().all(|&(_, p)| p == 1));

        // complete graph: BFS from vertex 1 gives the star at 1
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let t = random::random_pure_tuple(&mut rng, 5, 4);
        let g = build_frame_graph(&t, DEFAULT_ZERO_THRESHOLD).unwrap();
        assert_eq!(g.edges().len(), 10);
        let tree = choose_spanning_tree(&g, &g.components()[0]).unwrap();
        assert_eq!(tree.root, 1);
        assert!(tree.edges().iter().all(|&(_, p)| p == 1));

        // path frame graph: the path is the unique tree
        let mut states = Vec::new();
        for k in 0..4usize {
            let mut v = DVector::from_element(5, Complex64::ZERO);
            v[k] = Complex64::new(s, 0.0);
            v[k + 1] = Complex64::new(s, 0.0);
            states.push(PureState::new(v.iter().copied().collect()).unwrap());
        }
        let t = StateTuple::from_pure(states).unwrap();
        let g = build_frame_graph(&t, DEFAULT_ZERO_THRESHOLD).unwrap();
        assert_eq!(g.edges(), vec![(1, 2), (2, 3), (3, 4)]);
        let tree = choose_spanning_tree(&g, &g.components()[0]).unwrap();
        assert_eq!(tree.edges().len(), 3);
    }

    #[test]
    fn single_state_reconstructs_to_identity() {
        let t = StateTuple::from_pure(vec![PureState::basis(2, 0).unwrap()]).unwrap();
        let g = reconstruct_connected(&t);
        assert_eq!(g.n(), 1);
        assert!((g.entries[(0, 0)] - Complex64::ONE).norm() < 1e-12);
        assert_eq!(g.n_closing_candidates, 0);
    }

    #[test]
    fn pauli_triple_gram() {
        let t = pauli_triple();
        let g = reconstruct_connected(&t);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (i, j) in [(1usize, 2usize), (1, 3), (2, 3)] {
            assert!((g.entry(i, j).norm() - s).abs() < 1e-10, "entry {i}{j}");
        }
        // off-star entry carries the phase of Delta_231
        let inv = crate::states::bargmann(&t, &[2, 3, 1]).unwrap().value;
        let expected_phase = inv / inv.norm();
        let got_phase = g.entry(2, 3) / g.entry(2, 3).norm();
        assert!((expected_phase - got_phase).norm() < 1e-10);
        // PSD with rank 2 (qubit states)
        let eig = g.entries.clone().symmetric_eigen().eigenvalues;
        let mut ev: Vec<f64> = eig.iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!(ev[2].abs() < 1e-9, "third eigenvalue {}", ev[2]);
        assert!(ev[0] > 0.0 && ev[1] > 0.0);
    }

    #[test]
    fn star_gauge_matches_direct_inner_products() {
        // with the gauge <psi_1|psi_k> > 0, entries must equal raw inner
        // products of the re-phased amplitudes
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let t = random::random_pure_tuple(&mut rng, 5, 4);
        let g = reconstruct_connected(&t);
        let psi1 = t.pure_part(1).unwrap().unwrap().clone();
        let gauged: Vec<PureState> = (1..=5)
            .map(|k| {
                let pk = t.pure_part(k).unwrap().unwrap();
                let ip = psi1.inner(pk);
                let phase = ip / ip.norm();
                PureState::new(pk.amplitudes().iter().map(|a| a * phase.conj()).collect())
                    .unwrap()
            })
            .collect();
        for i in 1..=5usize {
            for j in 1..=5usize {
                let direct = gauged[i - 1].inner(&gauged[j - 1]);
                assert!(
                    (g.entry(i, j) - direct).norm() < 1e-9,
                    "entry ({i},{j}): {} vs {direct}",
                    g.entry(i, j)
                );
            }
        }
    }

    #[test]
    fn representatives_reproduce_entries() {
        let mut rng = ChaCha12Rng::seed_from_u64(15);
        for (n, d) in [(4usize, 2usize), (5, 3), (6, 4)] {
            let t = random::random_pure_tuple(&mut rng, n, d);
            let g = reconstruct_connected(&t);
            let reps = g.representatives();
            for i in 0..n {
                for j in 0..n {
                    let ip = reps[i].dotc(&reps[j]);
                    assert!(
                        (ip - g.entries[(i, j)]).norm() < 1e-9,
                        "n={n} d={d} ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn pu_completeness_on_rotated_and_conjugated_tuples() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for _ in 0..10 {
            let t = random::random_pure_tuple(&mut rng, 4, 3);
            let u = random::random_unitary(&mut rng, 3);
            let rotated = StateTuple::from_pure(
                (1..=4)
                    .map(|i| {
                        PureState::from_unnormalized(
                            &u * t.pure_part(i).unwrap().unwrap().amplitudes(),
                        )
                        .unwrap()
                    })
                    .collect(),
            )
            .unwrap();
            let ga = reconstruct_connected(&t);
            let gb = reconstruct_connected(&rotated);
            assert!((&ga.entries - &gb.entries).norm() < 1e-9);
        }
        // conjugation flips the triple-invariant phase and must be separated
        let t = pauli_triple();
        let conj = StateTuple::from_pure(
            (1..=3)
                .map(|i| {
                    PureState::new(
                        t.pure_part(i)
                            .unwrap()
                            .unwrap()
                            .amplitudes()
                            .iter()
                            .map(|z| z.conj())
                            .collect(),
                    )
                    .unwrap()
                })
                .collect(),
        )
        .unwrap();
        let ga = reconstruct_connected(&t);
        let gb = reconstruct_connected(&conj);
        assert!((&ga.entries - &gb.entries).norm() > 1e-3);
    }

    #[test]
    fn invariant_budget_holds() {
        let mut rng = ChaCha12Rng::seed_from_u64(19);
        for n in 2..=7usize {
            let t = random::random_pure_tuple(&mut rng, n, 4);
            let g = reconstruct_connected(&t);
            assert!(g.invariants_used.len() <= (n - 1) * (n - 1));
            // complete frame graph: candidate count hits the budget exactly
            assert_eq!(
                g.n_overlap_invariants + g.n_closing_candidates,
                (n - 1) * (n - 1)
            );
        }
    }

    #[test]
    fn required_invariants_counts() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        // complete graph on 9 vertices, star tree: 36 overlaps + 28 closings
        let t = random::random_pure_tuple(&mut rng, 9, 8);
        let g = build_frame_graph(&t, DEFAULT_ZERO_THRESHOLD).unwrap();
        assert_eq!(g.edges().len(), 36);
        let tree = choose_spanning_tree(&g, &g.components()[0]).unwrap();
        let req = required_invariants(&g, &tree).unwrap();
        let overlaps = req.iter().filter(|s| s.len() == 2).count();
        let closings = req.iter().filter(|s| s.len() >= 3).count();
        assert_eq!(overlaps, 36);
        assert_eq!(closings, 28);
        assert!(req.iter().all(|s| s.len() <= 3), "star tree closes with 3-cycles");

        // tree-shaped frame graph: overlaps only
        let hub = PureState::from_unnormalized(DVector::from_element(
            3,
            Complex64::new(1.0, 0.0),
        ))
        .unwrap();
        let mut states = vec![hub];
        for k in 0..3 {
            states.push(PureState::basis(3, k).unwrap());
        }
        let t = StateTuple::from_pure(states).unwrap();
        let g = build_frame_graph(&t, DEFAULT_ZERO_THRESHOLD).unwrap();
        let tree = choose_spanning_tree(&g, &g.components()[0]).unwrap();
        let req = required_invariants(&g, &tree).unwrap();
        assert!(req.iter().all(|s| s.len() == 2));
    }

    #[test]
    fn disconnected_tuples_reconstruct_per_component() {
        let s = 0.5f64.sqrt();
        let mk = |a: usize, b: usize| {
            let mut v = DVector::from_element(4, Complex64::ZERO);
            v[a] = Complex64::new(s, 0.0);
            v[b] = Complex64::new(s, 0.0);
            PureState::new(v.iter().copied().collect()).unwrap()
        };
        // two components: {1,2} on coordinates {0,1}, {3,4} on {2,3}
        let t = StateTuple::from_pure(vec![
            PureState::basis(4, 0).unwrap(),
            mk(0, 1),
            PureState::basis(4, 2).unwrap(),
            mk(2, 3),
        ])
        .unwrap();
        let rec = reconstruct_components(&t, DEFAULT_ZERO_THRESHOLD).unwrap();
        assert_eq!(rec.components.len(), 2);
        assert_eq!(rec.components[0].vertices, vec![1, 2]);
        assert_eq!(rec.components[1].vertices, vec![3, 4]);
        let full = rec.full_matrix();
        assert!(full[(0, 2)].norm() < 1e-12 && full[(1, 3)].norm() < 1e-12);
        assert!((full[(0, 1)].norm() - s).abs() < 1e-9);
    }

    #[test]
    fn tree_change_is_a_diagonal_gauge() {
        // Gram matrices from two different spanning trees differ by a
        // diagonal unitary conjugation.
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let t = random::random_pure_tuple(&mut rng, 5, 4);
        let graph = build_frame_graph(&t, DEFAULT_ZERO_THRESHOLD).unwrap();
        let comp = graph.components()[0].clone();
        let g1 = reconstruct_gram(&t, &graph, &choose_spanning_tree(&graph, &comp).unwrap())
            .unwrap();
        let g2 = reconstruct_gram(&t, &graph, &bfs_tree(&graph, &comp, 3).unwrap()).unwrap();
        // entrywise magnitudes agree
        for i in 0..5 {
            for j in 0..5 {
                assert!((g1.entries[(i, j)].norm() - g2.entries[(i, j)].norm()).abs() < 1e-9);
            }
        }
        // solve for phases from row 0, then check all entries
        let phases: Vec<Complex64> = (0..5)
            .map(|j| {
                if g1.entries[(0, j)].norm() > 1e-9 {
                    let r = g2.entries[(0, j)] / g1.entries[(0, j)];
                    r / r.norm()
                } else {
                    Complex64::ONE
                }
            })
            .collect();
        let d0 = phases[0];
        for i in 0..5 {
            for j in 0..5 {
                let predicted = (phases[i] / d0).conj() * g1.entries[(i, j)] * (phases[j] / d0);
                assert!(
                    (predicted - g2.entries[(i, j)]).norm() < 1e-9,
                    "({i},{j}): {predicted} vs {}",
                    g2.entries[(i, j)]
                );
            }
        }
    }

    #[test]
    fn mixed_tuple_is_rejected() {
        let mut rng = ChaCha12Rng::seed_from_u64(25);
        let t = random::random_mixed_tuple(&mut rng, 3, 2);
        assert!(build_frame_graph(&t, DEFAULT_ZERO_THRESHOLD).is_err());
    }

    /// Nine states with the worked-example topology: a star tree at vertex 1
    /// plus a 5-clique among {2..6}; vertices 7, 8, 9 overlap only with 1.
    pub(crate) fn nine_state_example(rng: &mut ChaCha12Rng) -> StateTuple {
        let d = 5usize;
        // clique states live on coordinates {0,1}; 7,8,9 on 2,3,4
        let mut states = Vec::new();
        let full: Vec<Complex64> = (0..d)
            .map(|k| Complex64::new(1.0 + 0.1 * k as f64, 0.2 + 0.05 * k as f64))
            .collect();
        states.push(PureState::from_unnormalized(DVector::from_vec(full)).unwrap());
        for _ in 0..5 {
            let mut v = DVector::from_element(d, Complex64::ZERO);
            loop {
                v[0] = random::ginibre(rng, 1, 1)[(0, 0)];
                v[1] = random::ginibre(rng, 1, 1)[(0, 0)];
                if v[0].norm() > 0.2 && v[1].norm() > 0.2 {
                    break;
                }
            }
            states.push(PureState::from_unnormalized(v).unwrap());
        }
        for k in 2..5 {
            states.push(PureState::basis(d, k).unwrap());
        }
        StateTuple::from_pure(states).unwrap()
    }

    #[test]
    fn nine_state_worked_example_counts() {
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        let t = nine_state_example(&mut rng);
        let graph = build_frame_graph(&t, DEFAULT_ZERO_THRESHOLD).unwrap();
        // star edges {1,k} all present; clique pairs among 2..6; others absent
        let comp = graph.components();
        assert_eq!(comp.len(), 1);
        assert_eq!(graph.edges().len(), 8 + 10);
        let tree = choose_spanning_tree(&graph, &comp[0]).unwrap();
        assert_eq!(tree.root, 1);
        let g = reconstruct_gram(&t, &graph, &tree).unwrap();
        assert_eq!(g.n_overlap_invariants, 36);
        assert_eq!(g.n_closing_candidates, 28);
        assert_eq!(g.n_closing_nonzero, 10);
        assert!(g.invariants_used.len() <= 64);
        // the 28 candidate closings: exactly the clique pairs are nonzero
        let mut nonzero = 0;
        for i in 2..=9usize {
            for j in i + 1..=9usize {
                let v = crate::states::bargmann(&t, &[1, i, j]).unwrap().value;
                if v.norm() > 1e-12 {
                    nonzero += 1;
                }
            }
        }
        assert_eq!(nonzero, 10);
    }
}

#[cfg(test)]
pub(crate) use tests::nine_state_example;
