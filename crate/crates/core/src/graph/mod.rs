//! Trivalent multigraphs in the half-edge formalism.
//!
//! A graph with `2m` vertices owns `6m` half-edges; vertex `v` owns the triple
//! `{3v, 3v+1, 3v+2}`. The edge set is a perfect matching on half-edges, so
//! self-loops (both half-edges at one vertex) and parallel edges are
//! legitimate. Isomorphisms are permutations of half-edges that map vertex
//! triples to vertex triples and the matching to the matching; the full
//! relabeling group is S_{2m} acting on vertices semidirect with S_3 inside
//! each triple, of order (2m)! * 6^{2m}.

mod canon;
mod enumerate;

pub use enumerate::{
    double_factorial, enumerate_graphs, relabeling_group_order, GraphClass, IsoClassTable,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed trivalent multigraph, stored as a perfect matching on half-edges.
///
/// The matching is normalized: each pair has its smaller half-edge first and
/// the pair list is sorted lexicographically, so structural equality of two
/// values is equality of labeled graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TrivalentGraph {
    num_vertices: usize,
    matching: Vec<(usize, usize)>,
}

impl TrivalentGraph {
    /// Builds a graph from an unordered list of half-edge pairs.
    pub fn new(
        num_vertices: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if num_vertices == 0 || num_vertices % 2 != 0 {
            return Err(Error::InvalidGraph(format!(
                "number of vertices must be positive and even, got {num_vertices}"
            )));
        }
        let n_half = 3 * num_vertices;
        let mut matching: Vec<(usize, usize)> = Vec::with_capacity(n_half / 2);
        let mut seen = vec![false; n_half];
        for (a, b) in pairs {
            if a >= n_half || b >= n_half {
                return Err(Error::InvalidGraph(format!(
                    "half-edge pair ({a}, {b}) out of range for {n_half} half-edges"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!(
                    "half-edge {a} cannot be matched with itself"
                )));
            }
            for h in [a, b] {
                if seen[h] {
                    return Err(Error::InvalidGraph(format!(
                        "half-edge {h} appears in more than one pair"
                    )));
                }
                seen[h] = true;
            }
            matching.push((a.min(b), a.max(b)));
        }
        if let Some(h) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidGraph(format!(
                "half-edge {h} is unmatched; the matching must be perfect"
            )));
        }
        matching.sort_unstable();
        Ok(TrivalentGraph {
            num_vertices,
            matching,
        })
    }

    /// Builds a graph from a partner array (`partner[h]` = half-edge matched
    /// with `h`).
    pub fn from_partner(partner: &[usize]) -> Result<Self> {
        if partner.len() % 6 != 0 {
            return Err(Error::InvalidGraph(format!(
                "partner array length {} is not a multiple of 6",
                partner.len()
            )));
        }
        let pairs = partner
            .iter()
            .enumerate()
            .filter(|&(h, &p)| h < p)
            .map(|(h, &p)| (h, p));
        TrivalentGraph::new(partner.len() / 3, pairs)
    }

    /// The dumbbell: a self-loop at each of two vertices joined by an edge.
    pub fn dumbbell() -> Self {
        TrivalentGraph::new(2, [(0, 1), (2, 3), (4, 5)]).expect("static graph")
    }

    /// The theta graph: two vertices joined by three parallel edges.
    pub fn theta() -> Self {
        TrivalentGraph::new(2, [(0, 3), (1, 4), (2, 5)]).expect("static graph")
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_half_edges(&self) -> usize {
        3 * self.num_vertices
    }

    /// Loop order m: the graph has 2m vertices and contributes at order k^{-m}.
    pub fn loop_order(&self) -> usize {
        self.num_vertices / 2
    }

    pub fn matching(&self) -> &[(usize, usize)] {
        &self.matching
    }

    pub fn vertex_of(&self, half_edge: usize) -> usize {
        half_edge / 3
    }

    /// Partner lookup table: `partner[h]` is the half-edge matched with `h`.
    pub fn partner_array(&self) -> Vec<usize> {
        let mut partner = vec![0usize; self.num_half_edges()];
        for &(a, b) in &self.matching {
            partner[a] = b;
            partner[b] = a;
        }
        partner
    }

    /// Whether the graph is connected as a topological space (one component).
    pub fn is_connected(&self) -> bool {
        let nv = self.num_vertices;
        let mut adj = vec![Vec::new(); nv];
        for &(a, b) in &self.matching {
            let (va, vb) = (a / 3, b / 3);
            if va != vb {
                adj[va].push(vb);
                adj[vb].push(va);
            }
        }
        let mut seen = vec![false; nv];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == nv
    }

    /// Disjoint union; the second graph's half-edges are shifted past ours.
    pub fn disjoint_union(&self, other: &TrivalentGraph) -> TrivalentGraph {
        let shift = self.num_half_edges();
        let pairs = self
            .matching
            .iter()
            .copied()
            .chain(other.matching.iter().map(|&(a, b)| (a + shift, b + shift)));
        TrivalentGraph::new(self.num_vertices + other.num_vertices, pairs)
            .expect("union of valid graphs is valid")
    }

    /// Lexicographically minimal matching over the relabeling-group orbit.
    ///
    /// Two graphs are isomorphic exactly when their canonical forms are equal.
    pub fn canonical_form(&self) -> TrivalentGraph {
        let pairs = canon::minimize(&self.partner_array());
        TrivalentGraph {
            num_vertices: self.num_vertices,
            matching: pairs,
        }
    }

    /// Order of the automorphism group inside S_{2m} x| S_3^{2m}.
    ///
    /// Up to 6 vertices this iterates the full relabeling group (the trivially
    /// auditable reference path); for larger graphs it counts completions of
    /// the pruned assignment search, which agrees with the exhaustive count
    /// wherever both run.
    pub fn automorphism_order(&self) -> u64 {
        if self.num_vertices <= 6 {
            enumerate::automorphism_order_exhaustive(self)
        } else {
            canon::count_stabilizer(&self.partner_array())
        }
    }

    /// All automorphisms as half-edge permutations, by exhaustive iteration.
    /// Practical only for small graphs (at most 6 vertices or so).
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        enumerate::automorphisms_exhaustive(self)
    }
}

/// A trivalent graph together with a linear order on each vertex's half-edges.
///
/// Orders differing by a cyclic rotation represent the same orientation, so
/// comparisons and sign computations are taken up to cyclic equivalence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedGraph {
    graph: TrivalentGraph,
    orientation: Vec<[usize; 3]>,
}

impl OrientedGraph {
    pub fn new(graph: TrivalentGraph, orientation: Vec<[usize; 3]>) -> Result<Self> {
        if orientation.len() != graph.num_vertices() {
            return Err(Error::InvalidOrientation(format!(
                "expected {} vertex orders, got {}",
                graph.num_vertices(),
                orientation.len()
            )));
        }
        for (v, triple) in orientation.iter().enumerate() {
            let mut sorted = *triple;
            sorted.sort_unstable();
            if sorted != [3 * v, 3 * v + 1, 3 * v + 2] {
                return Err(Error::InvalidOrientation(format!(
                    "vertex {v} order {triple:?} is not a permutation of its half-edges"
                )));
            }
        }
        Ok(OrientedGraph { graph, orientation })
    }

    /// Equips a graph with the identity orientation `[3v, 3v+1, 3v+2]`.
    pub fn with_identity(graph: TrivalentGraph) -> Self {
        let orientation = (0..graph.num_vertices())
            .map(|v| [3 * v, 3 * v + 1, 3 * v + 2])
            .collect();
        OrientedGraph { graph, orientation }
    }

    pub fn graph(&self) -> &TrivalentGraph {
        &self.graph
    }

    pub fn orientation(&self) -> &[[usize; 3]] {
        &self.orientation
    }

    pub fn vertex_order(&self, v: usize) -> [usize; 3] {
        self.orientation[v]
    }
}

/// Sign of a graph isomorphism between two oriented graphs.
///
/// `iso[h]` gives the image half-edge of `h`. The isomorphism pushes each
/// source vertex order forward; the sign is the product over vertices of the
/// permutation sign relating the pushed order to the target's stored order.
/// Cyclic rotations are even, so the sign only depends on orientation classes.
pub fn orientation_sign(from: &OrientedGraph, to: &OrientedGraph, iso: &[usize]) -> Result<i32> {
    let g1 = from.graph();
    let g2 = to.graph();
    let n_half = g1.num_half_edges();
    if g2.num_half_edges() != n_half || iso.len() != n_half {
        return Err(Error::InvalidIsomorphism(format!(
            "isomorphism length {} does not match {} half-edges",
            iso.len(),
            n_half
        )));
    }
    let mut seen = vec![false; n_half];
    for &img in iso {
        if img >= n_half || seen[img] {
            return Err(Error::InvalidIsomorphism(
                "map is not a bijection on half-edges".into(),
            ));
        }
        seen[img] = true;
    }
    for v in 0..g1.num_vertices() {
        let w = iso[3 * v] / 3;
        if iso[3 * v + 1] / 3 != w || iso[3 * v + 2] / 3 != w {
            return Err(Error::InvalidIsomorphism(format!(
                "half-edges of vertex {v} are not mapped to a common vertex"
            )));
        }
    }
    let partner2 = g2.partner_array();
    for &(a, b) in g1.matching() {
        if partner2[iso[a]] != iso[b] {
            return Err(Error::InvalidIsomorphism(format!(
                "edge ({a}, {b}) is not mapped to an edge"
            )));
        }
    }

    let mut sign = 1i32;
    for v in 0..g1.num_vertices() {
        let source = from.vertex_order(v);
        let pushed = [iso[source[0]], iso[source[1]], iso[source[2]]];
        let target = to.vertex_order(iso[3 * v] / 3);
        sign *= permutation_sign_3(pushed, target);
    }
    Ok(sign)
}

/// Sign of the permutation sending the order `a` to the order `b`
/// (both orders on the same three elements).
fn permutation_sign_3(a: [usize; 3], b: [usize; 3]) -> i32 {
    let pos = |x: usize| b.iter().position(|&y| y == x).expect("same support");
    let p = [pos(a[0]), pos(a[1]), pos(a[2])];
    // A permutation of three elements is even exactly when it is a rotation.
    if p == [0, 1, 2] || p == [1, 2, 0] || p == [2, 0, 1] {
        1
    } else {
        -1
    }
}
