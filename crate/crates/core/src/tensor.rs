//! Graph weights: label each vertex of a trivalent graph with a cubic tensor,
//! each edge with the inverse quadratic form, and contract all indices.
//!
//! The contraction treats the graph as a tensor network whose axis labels are
//! half-edge ids; every label occurs exactly twice (once on a vertex tensor,
//! once on an edge tensor), so eliminating shared labels pairwise reduces the
//! network to a scalar per connected component.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::TrivalentGraph;
use crate::wick::QuadraticForm;

/// Dense row-major real tensor of arbitrary rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(dims: &[usize]) -> Self {
        let len = dims.iter().product();
        Tensor {
            dims: dims.to_vec(),
            data: vec![0.0; len],
        }
    }

    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> f64) -> Self {
        let mut t = Tensor::zeros(dims);
        let mut idx = vec![0usize; dims.len()];
        for slot in 0..t.data.len() {
            t.data[slot] = f(&idx);
            Tensor::advance(&mut idx, dims);
            let _ = slot;
        }
        t
    }

    fn advance(idx: &mut [usize], dims: &[usize]) {
        for axis in (0..dims.len()).rev() {
            idx[axis] += 1;
            if idx[axis] < dims[axis] {
                return;
            }
            idx[axis] = 0;
        }
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        idx.iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    pub fn add_assign_at(&mut self, idx: &[usize], value: f64) {
        let o = self.offset(idx);
        self.data[o] += value;
    }

    /// Reorders axes so that result axis a is self axis perm[a].
    fn permute(&self, perm: &[usize]) -> Tensor {
        let dims: Vec<usize> = perm.iter().map(|&a| self.dims[a]).collect();
        let mut out = Tensor::zeros(&dims);
        let mut idx = vec![0usize; dims.len()];
        let mut src = vec![0usize; dims.len()];
        for slot in 0..out.data.len() {
            for (a, &p) in perm.iter().enumerate() {
                src[p] = idx[a];
            }
            out.data[slot] = self.get(&src);
            Tensor::advance(&mut idx, &dims);
        }
        out
    }
}

/// A tensor whose axes are named by half-edge labels, for network contraction.
#[derive(Debug, Clone)]
struct LabeledTensor {
    labels: Vec<usize>,
    tensor: Tensor,
}

/// Contracts a pair over all labels they share, returning free_a + free_b.
fn contract_pair(a: &LabeledTensor, b: &LabeledTensor) -> LabeledTensor {
    let shared: Vec<usize> = a
        .labels
        .iter()
        .copied()
        .filter(|l| b.labels.contains(l))
        .collect();
    let free_a: Vec<usize> = a
        .labels
        .iter()
        .copied()
        .filter(|l| !shared.contains(l))
        .collect();
    let free_b: Vec<usize> = b
        .labels
        .iter()
        .copied()
        .filter(|l| !shared.contains(l))
        .collect();

    let axis_of = |labels: &[usize], l: usize| labels.iter().position(|&x| x == l).unwrap();
    let perm_a: Vec<usize> = free_a
        .iter()
        .chain(&shared)
        .map(|&l| axis_of(&a.labels, l))
        .collect();
    let perm_b: Vec<usize> = shared
        .iter()
        .chain(&free_b)
        .map(|&l| axis_of(&b.labels, l))
        .collect();
    let ta = a.tensor.permute(&perm_a);
    let tb = b.tensor.permute(&perm_b);

    let rows: usize = ta.dims[..free_a.len()].iter().product();
    let inner: usize = ta.dims[free_a.len()..].iter().product();
    let cols: usize = tb.dims[shared.len()..].iter().product();

    let mut data = vec![0.0f64; rows * cols];
    for r in 0..rows {
        for k in 0..inner {
            let av = ta.data[r * inner + k];
            if av == 0.0 {
                continue;
            }
            let brow = &tb.data[k * cols..(k + 1) * cols];
            let out = &mut data[r * cols..(r + 1) * cols];
            for (o, &bv) in out.iter_mut().zip(brow) {
                *o += av * bv;
            }
        }
    }

    let mut labels = free_a;
    labels.extend(&free_b);
    let dims: Vec<usize> = labels
        .iter()
        .map(|&l| {
            if let Some(ax) = a.labels.iter().position(|&x| x == l) {
                a.tensor.dims[ax]
            } else {
                let ax = axis_of(&b.labels, l);
                b.tensor.dims[ax]
            }
        })
        .collect();
    LabeledTensor {
        labels,
        tensor: Tensor { dims, data },
    }
}

/// Contracts a closed network (every label occurs exactly twice) to a scalar.
/// Pairs are eliminated greedily by smallest intermediate rank; disconnected
/// components reduce to scalars that are then multiplied.
fn contract_network(mut nodes: Vec<LabeledTensor>) -> Result<f64> {
    let mut seen: std::collections::HashMap<usize, (usize, usize)> =
        std::collections::HashMap::new();
    for (ni, node) in nodes.iter().enumerate() {
        if node.labels.len() != node.tensor.rank() {
            return Err(Error::DimensionMismatch(
                "tensor label count does not match rank".into(),
            ));
        }
        for (ax, &l) in node.labels.iter().enumerate() {
            match seen.entry(l) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert((ni, ax));
                }
                std::collections::hash_map::Entry::Occupied(e) => {
                    let (oni, oax) = *e.get();
                    if nodes[oni].tensor.dims[oax] != node.tensor.dims[ax] {
                        return Err(Error::DimensionMismatch(format!(
                            "label {l} connects axes of lengths {} and {}",
                            nodes[oni].tensor.dims[oax], node.tensor.dims[ax]
                        )));
                    }
                }
            }
        }
    }

    while nodes.len() > 1 {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                let shared = nodes[i]
                    .labels
                    .iter()
                    .filter(|l| nodes[j].labels.contains(l))
                    .count();
                if shared == 0 {
                    continue;
                }
                let rank = nodes[i].labels.len() + nodes[j].labels.len() - 2 * shared;
                if best.map_or(true, |(_, _, r)| rank < r) {
                    best = Some((i, j, rank));
                }
            }
        }
        match best {
            Some((i, j, _)) => {
                let b = nodes.swap_remove(j);
                let a = nodes.swap_remove(i);
                nodes.push(contract_pair(&a, &b));
            }
            None => break,
        }
    }

    let mut product = 1.0f64;
    for node in nodes {
        if node.tensor.rank() != 0 {
            return Err(Error::DimensionMismatch(
                "network did not close to a scalar".into(),
            ));
        }
        product *= node.tensor.data[0];
    }
    Ok(product)
}

/// Distinct permutations of an index triple, sorted.
fn orbit_of(i: usize, j: usize, k: usize) -> Vec<[usize; 3]> {
    let mut orbit = vec![
        [i, j, k],
        [i, k, j],
        [j, i, k],
        [j, k, i],
        [k, i, j],
        [k, j, i],
    ];
    orbit.sort();
    orbit.dedup();
    orbit
}

/// Totally symmetric cubic tensor, stored dense.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicTensor {
    n: usize,
    tensor: Tensor,
    symmetrized: bool,
}

impl CubicTensor {
    /// Builds from a sparse (i, j, k, value) list. A canonical list, meaning
    /// every triple is sorted and no triple repeats, assigns each value to
    /// its whole index orbit verbatim. Any other list is treated as raw
    /// data: duplicate positions are summed, then index orbits are averaged,
    /// and `was_symmetrized()` reports whether averaging changed anything.
    pub fn from_entries(n: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch(
                "cubic tensor dimension must be positive".into(),
            ));
        }
        for &(i, j, k, v) in entries {
            for &ix in &[i, j, k] {
                if ix >= n {
                    return Err(Error::TensorIndexOutOfRange { i, j, k, dim: n });
                }
            }
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("cubic entry at ({i},{j},{k})")));
            }
        }
        let sorted = entries.iter().all(|&(i, j, k, _)| i <= j && j <= k);
        let unique = {
            let mut seen: Vec<_> = entries.iter().map(|&(i, j, k, _)| (i, j, k)).collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        };
        let mut raw = Tensor::zeros(&[n, n, n]);
        if sorted && unique {
            for &(i, j, k, v) in entries {
                for p in orbit_of(i, j, k) {
                    raw.set(&p, v);
                }
            }
        } else {
            for &(i, j, k, v) in entries {
                raw.add_assign_at(&[i, j, k], v);
            }
        }
        Ok(CubicTensor::symmetrize(n, raw))
    }

    /// Symmetrizes an arbitrary dense rank-3 tensor.
    pub fn from_dense(tensor: Tensor) -> Result<Self> {
        if tensor.rank() != 3 || tensor.dims[0] != tensor.dims[1] || tensor.dims[1] != tensor.dims[2]
        {
            return Err(Error::DimensionMismatch(
                "cubic tensor must have shape [n, n, n]".into(),
            ));
        }
        Ok(CubicTensor::symmetrize(tensor.dims[0], tensor))
    }

    fn symmetrize(n: usize, raw: Tensor) -> Self {
        let mut out = Tensor::zeros(&[n, n, n]);
        let mut changed = false;
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    let orbit = orbit_of(i, j, k);
                    // Already-symmetric orbits are kept bit for bit, so a
                    // symmetric tensor is a fixed point of this map.
                    let first = raw.get(&orbit[0]);
                    if orbit.iter().all(|p| raw.get(p) == first) {
                        for p in &orbit {
                            out.set(p, first);
                        }
                        continue;
                    }
                    changed = true;
                    let mean =
                        orbit.iter().map(|p| raw.get(p)).sum::<f64>() / orbit.len() as f64;
                    for p in &orbit {
                        out.set(p, mean);
                    }
                }
            }
        }
        CubicTensor {
            n,
            tensor: out,
            symmetrized: changed,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize, k: usize) -> f64 {
        self.tensor.get(&[i, j, k])
    }

    pub fn as_tensor(&self) -> &Tensor {
        &self.tensor
    }

    /// True when the input list was not already totally symmetric.
    pub fn was_symmetrized(&self) -> bool {
        self.symmetrized
    }

    pub fn scaled(&self, lambda: f64) -> CubicTensor {
        let mut t = self.tensor.clone();
        for v in &mut t.data {
            *v *= lambda;
        }
        CubicTensor {
            n: self.n,
            tensor: t,
            symmetrized: self.symmetrized,
        }
    }
}

/// The integrand data: quadratic form Q and symmetric cubic tensor V of the
/// same dimension.
#[derive(Debug, Clone)]
pub struct CubicModel {
    pub quadratic: QuadraticForm,
    pub cubic: CubicTensor,
}

impl CubicModel {
    pub fn new(quadratic: QuadraticForm, cubic: CubicTensor) -> Result<Self> {
        if quadratic.dim() != cubic.dim() {
            return Err(Error::DimensionMismatch(format!(
                "quadratic form is {}-dimensional but cubic tensor is {}-dimensional",
                quadratic.dim(),
                cubic.dim()
            )));
        }
        Ok(CubicModel { quadratic, cubic })
    }

    pub fn dim(&self) -> usize {
        self.quadratic.dim()
    }
}

/// Contracts the network with an explicit vertex tensor and per-vertex leg
/// assignment (legs[v] lists the three half-edge labels in axis order).
/// The Lie weight system passes orientation-ordered legs through here.
pub(crate) fn contract_graph(
    graph: &TrivalentGraph,
    vertex_tensor: &Tensor,
    edge_matrix: &DMatrix<f64>,
    legs: &[[usize; 3]],
) -> Result<f64> {
    let n = edge_matrix.nrows();
    if vertex_tensor.rank() != 3 || vertex_tensor.dims() != [n, n, n] {
        return Err(Error::DimensionMismatch(
            "vertex tensor shape must match edge matrix dimension".into(),
        ));
    }
    if legs.len() != graph.num_vertices() {
        return Err(Error::DimensionMismatch(
            "one leg triple required per vertex".into(),
        ));
    }
    let mut nodes = Vec::with_capacity(graph.num_vertices() + graph.matching().len());
    for leg in legs {
        nodes.push(LabeledTensor {
            labels: leg.to_vec(),
            tensor: vertex_tensor.clone(),
        });
    }
    let edge_tensor = Tensor::from_fn(&[n, n], |idx| edge_matrix[(idx[0], idx[1])]);
    for &(a, b) in graph.matching() {
        nodes.push(LabeledTensor {
            labels: vec![a, b],
            tensor: edge_tensor.clone(),
        });
    }
    contract_network(nodes)
}

fn natural_legs(graph: &TrivalentGraph) -> Vec<[usize; 3]> {
    (0..graph.num_vertices())
        .map(|v| [3 * v, 3 * v + 1, 3 * v + 2])
        .collect()
}

/// Weight W of a trivalent graph: one copy of V per vertex, one entry of
/// Q^{-1} per edge, all half-edge indices summed.
pub fn graph_weight(model: &CubicModel, graph: &TrivalentGraph) -> Result<f64> {
    contract_graph(
        graph,
        model.cubic.as_tensor(),
        model.quadratic.inverse(),
        &natural_legs(graph),
    )
}

/// Same weight by brute force: one nested sum per half-edge, N^{6m} terms.
/// Kept as the independent oracle; refuses hopeless sizes.
pub fn graph_weight_naive(model: &CubicModel, graph: &TrivalentGraph) -> Result<f64> {
    let n = model.dim();
    let h = graph.num_half_edges();
    if (n as f64).powi(h as i32) > 2e8 {
        return Err(Error::ParameterDomain(format!(
            "naive weight sum has {n}^{h} terms"
        )));
    }
    let mut assignment = vec![0usize; h];
    let mut total = 0.0f64;
    loop {
        let mut term = 1.0f64;
        for v in 0..graph.num_vertices() {
            term *= model
                .cubic
                .entry(assignment[3 * v], assignment[3 * v + 1], assignment[3 * v + 2]);
        }
        if term != 0.0 {
            for &(a, b) in graph.matching() {
                term *= model.quadratic.inverse_entry(assignment[a], assignment[b]);
            }
            total += term;
        }
        let mut pos = 0;
        loop {
            if pos == h {
                return Ok(total);
            }
            assignment[pos] += 1;
            if assignment[pos] < n {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

/// Record comparing W(g1 disjoint-union g2) with W(g1) * W(g2).
#[derive(Debug, Clone, Copy)]
pub struct MultiplicativityRecord {
    pub weight_union: f64,
    pub weight_product: f64,
}

impl MultiplicativityRecord {
    pub fn relative_difference(&self) -> f64 {
        let scale = self.weight_union.abs().max(self.weight_product.abs()).max(1.0);
        (self.weight_union - self.weight_product).abs() / scale
    }
}

pub fn weight_multiplicative(
    model: &CubicModel,
    g1: &TrivalentGraph,
    g2: &TrivalentGraph,
) -> Result<MultiplicativityRecord> {
    let union = g1.disjoint_union(g2);
    Ok(MultiplicativityRecord {
        weight_union: graph_weight(model, &union)?,
        weight_product: graph_weight(model, g1)? * graph_weight(model, g2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_graphs, relabeling_group_order};
    use crate::wick::visit_pairings;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_model(n: usize, rng: &mut ChaCha8Rng) -> CubicModel {
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let q = &a * a.transpose() + DMatrix::<f64>::identity(n, n) * (n as f64 + 1.0);
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    entries.push((i, j, k, rng.random_range(-1.0..1.0)));
                }
            }
        }
        CubicModel::new(
            QuadraticForm::new(q).unwrap(),
            CubicTensor::from_entries(n, &entries).unwrap(),
        )
        .unwrap()
    }

    fn scalar_model(q: f64, v: f64) -> CubicModel {
        CubicModel::new(
            QuadraticForm::new(DMatrix::from_element(1, 1, q)).unwrap(),
            CubicTensor::from_entries(1, &[(0, 0, 0, v)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn symmetrization_sums_duplicates_and_averages_orbits() {
        let c = CubicTensor::from_entries(2, &[(0, 0, 1, 3.0), (0, 0, 1, 3.0)]).unwrap();
        assert!(c.was_symmetrized());
        // Raw value 6 at one position of a 3-element orbit averages to 2.
        assert_eq!(c.entry(0, 0, 1), 2.0);
        assert_eq!(c.entry(0, 1, 0), 2.0);
        assert_eq!(c.entry(1, 0, 0), 2.0);
        assert_eq!(c.entry(1, 1, 1), 0.0);

        let sym = CubicTensor::from_entries(
            2,
            &[(0, 0, 1, 1.0), (0, 1, 0, 1.0), (1, 0, 0, 1.0)],
        )
        .unwrap();
        assert!(!sym.was_symmetrized());
        assert_eq!(sym.entry(0, 1, 0), 1.0);
    }

    #[test]
    fn scalar_model_weights_are_v_squared_over_q_cubed() {
        let model = scalar_model(2.0, 3.0);
        let expected = 9.0 / 8.0;
        for g in [TrivalentGraph::dumbbell(), TrivalentGraph::theta()] {
            let w = graph_weight(&model, &g).unwrap();
            assert!((w - expected).abs() < 1e-14);
            assert!((graph_weight_naive(&model, &g).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn weight_is_isomorphism_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let relabeled =
            TrivalentGraph::new(2, [(0, 4), (1, 2), (3, 5)].into_iter()).unwrap();
        for n in 1..=3 {
            let model = random_model(n, &mut rng);
            let w1 = graph_weight(&model, &relabeled).unwrap();
            let w2 = graph_weight(&model, &relabeled.canonical_form()).unwrap();
            assert!((w1 - w2).abs() <= 1e-12 * w1.abs().max(1.0));
        }
    }

    #[test]
    fn theta_weight_matches_six_fold_loop_for_sparse_cubic() {
        let q = QuadraticForm::identity(2);
        let v = CubicTensor::from_entries(2, &[(0, 0, 1, 1.5)]).unwrap();
        let model = CubicModel::new(q, v).unwrap();
        let theta = TrivalentGraph::theta();
        let fast = graph_weight(&model, &theta).unwrap();
        let mut slow = 0.0f64;
        for i0 in 0..2usize {
            for i1 in 0..2usize {
                for i2 in 0..2usize {
                    for i3 in 0..2usize {
                        for i4 in 0..2usize {
                            for i5 in 0..2usize {
                                // Theta pairs leg t of one vertex with leg t of the other.
                                slow += model.cubic.entry(i0, i1, i2)
                                    * model.cubic.entry(i3, i4, i5)
                                    * model.quadratic.inverse_entry(i0, i3)
                                    * model.quadratic.inverse_entry(i1, i4)
                                    * model.quadratic.inverse_entry(i2, i5);
                            }
                        }
                    }
                }
            }
        }
        assert!((fast - slow).abs() < 1e-13);
        assert!((graph_weight_naive(&model, &theta).unwrap() - slow).abs() < 1e-13);
    }

    #[test]
    fn fast_and_naive_weights_agree_on_random_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let table = enumerate_graphs(2, 4).unwrap();
        for _ in 0..5 {
            let model = random_model(2, &mut rng);
            for class in &table.classes {
                let fast = graph_weight(&model, &class.graph).unwrap();
                let slow = graph_weight_naive(&model, &class.graph).unwrap();
                assert!(
                    (fast - slow).abs() <= 1e-11 * slow.abs().max(1.0),
                    "class {:?}: {fast} vs {slow}",
                    class.graph
                );
            }
        }
    }

    #[test]
    fn wick_sum_reorganizes_into_multiplicity_weighted_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(555);
        for m in [1usize, 2] {
            let table = enumerate_graphs(m, 4).unwrap();
            for _ in 0..(if m == 1 { 50 } else { 3 }) {
                let n = rng.random_range(1..=if m == 1 { 3 } else { 2 });
                let model = random_model(n, &mut rng);
                let mut pairing_sum = 0.0f64;
                visit_pairings(6 * m, |pairs| {
                    let g = TrivalentGraph::new(2 * m, pairs.iter().copied()).unwrap();
                    pairing_sum += graph_weight(&model, &g).unwrap();
                });
                let mut class_sum = 0.0f64;
                let group = relabeling_group_order(2 * m) as f64;
                for class in &table.classes {
                    class_sum += (group / class.aut_order as f64)
                        * graph_weight(&model, &class.graph).unwrap();
                }
                assert!(
                    (pairing_sum - class_sum).abs() <= 1e-9 * class_sum.abs().max(1.0),
                    "m={m}: pairing sum {pairing_sum} vs class sum {class_sum}"
                );
            }
        }
    }

    #[test]
    fn antisymmetric_vertex_tensor_kills_the_dumbbell() {
        // Antisymmetric in the first index pair is enough: the self-loop
        // closes those two indices with the symmetric Q^{-1}.
        let n = 3;
        let mut t = Tensor::zeros(&[n, n, n]);
        t.set(&[0, 1, 2], 1.0);
        t.set(&[1, 0, 2], -1.0);
        t.set(&[1, 2, 0], 1.0);
        t.set(&[2, 1, 0], -1.0);
        t.set(&[2, 0, 1], 1.0);
        t.set(&[0, 2, 1], -1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let q = QuadraticForm::new(&a * a.transpose() + DMatrix::identity(n, n) * 4.0).unwrap();
        let g = TrivalentGraph::dumbbell();
        let w = contract_graph(&g, &t, q.inverse(), &super::natural_legs(&g)).unwrap();
        assert!(w.abs() < 1e-14);
    }

    #[test]
    fn weights_multiply_over_disjoint_unions() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let model = random_model(2, &mut rng);
        let g1 = TrivalentGraph::dumbbell();
        let g2 = TrivalentGraph::theta();
        let rec = weight_multiplicative(&model, &g1, &g2).unwrap();
        assert!(rec.relative_difference() < 1e-12);

        let scalar = scalar_model(3.0, 2.0);
        let rec = weight_multiplicative(&scalar, &g1, &g2).unwrap();
        let expected = 16.0 / 3.0f64.powi(6);
        assert!((rec.weight_union - expected).abs() < 1e-14);

        assert_eq!(g1.disjoint_union(&g1).automorphism_order(), 2 * 8 * 8);
    }

    #[test]
    fn contraction_order_does_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let table = enumerate_graphs(2, 4).unwrap();
        let model = random_model(3, &mut rng);
        for class in &table.classes {
            // Reversed edge list changes the greedy elimination sequence.
            let reversed = TrivalentGraph::new(
                class.graph.num_vertices(),
                class.graph.matching().iter().rev().copied(),
            )
            .unwrap();
            let w1 = graph_weight(&model, &class.graph).unwrap();
            let w2 = graph_weight(&model, &reversed).unwrap();
            assert!((w1 - w2).abs() <= 1e-12 * w1.abs().max(1.0));
        }
    }

    #[test]
    fn model_dimensions_must_agree() {
        let q = QuadraticForm::identity(2);
        let v = CubicTensor::from_entries(3, &[(0, 0, 0, 1.0)]).unwrap();
        assert!(matches!(
            CubicModel::new(q, v),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            CubicTensor::from_entries(2, &[(0, 0, 2, 1.0)]),
            Err(Error::TensorIndexOutOfRange { .. })
        ));
    }
}
