//! Enumeration of trivalent graphs up to isomorphism.
//!
//! Representatives are generated by pairing the smallest unpaired half-edge
//! with one candidate per symmetry class of targets, then deduplicated by
//! canonical form. Each class's pairing multiplicity, the number of raw
//! perfect matchings isomorphic to it, follows from orbit-stabilizer:
//! (2m)! * 6^{2m} / |Aut|. Multiplicities over all classes sum to (6m-1)!!,
//! the total number of perfect matchings on 6m half-edges.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::canon;
use super::TrivalentGraph;
use crate::error::{Error, Result};

/// One isomorphism class of trivalent graphs at a fixed loop order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphClass {
    /// Canonical representative (lexicographically minimal matching).
    pub graph: TrivalentGraph,
    pub aut_order: u64,
    pub connected: bool,
    /// Number of perfect matchings on labeled half-edges in this class.
    pub multiplicity: u64,
}

/// All isomorphism classes with 2m vertices, sorted by canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoClassTable {
    pub loop_order: usize,
    pub classes: Vec<GraphClass>,
}

impl IsoClassTable {
    pub fn multiplicity_sum(&self) -> u64 {
        self.classes.iter().map(|c| c.multiplicity).sum()
    }

    pub fn connected_classes(&self) -> impl Iterator<Item = &GraphClass> {
        self.classes.iter().filter(|c| c.connected)
    }

    /// Locates the class containing `g`, by canonical form.
    pub fn class_of(&self, g: &TrivalentGraph) -> Option<&GraphClass> {
        let canonical = g.canonical_form();
        self.classes.iter().find(|c| c.graph == canonical)
    }
}

/// Double factorial n!! for odd n: n(n-2)(n-4)...1.
pub fn double_factorial(n: u64) -> u64 {
    debug_assert!(n % 2 == 1);
    (1..=n).step_by(2).product()
}

/// Order of the half-edge relabeling group on `n_vert` vertices:
/// (n_vert)! * 6^{n_vert}.
pub fn relabeling_group_order(n_vert: usize) -> u64 {
    let factorial: u64 = (1..=n_vert as u64).product();
    factorial * 6u64.pow(n_vert as u32)
}

/// Enumerates all isomorphism classes of trivalent graphs with 2m vertices.
pub fn enumerate_graphs(m: usize, max_loop_order: usize) -> Result<IsoClassTable> {
    if m == 0 || m > max_loop_order {
        return Err(Error::LoopOrderOutOfRange {
            requested: m,
            max: max_loop_order,
        });
    }
    let group = relabeling_group_order(2 * m);
    let classes = generate_representatives(m)
        .into_iter()
        .map(|graph| {
            let aut_order = graph.automorphism_order();
            debug_assert_eq!(group % aut_order, 0, "orbit size must divide the group order");
            GraphClass {
                aut_order,
                connected: graph.is_connected(),
                multiplicity: group / aut_order,
                graph,
            }
        })
        .collect();
    Ok(IsoClassTable {
        loop_order: m,
        classes,
    })
}

const UNSET: usize = usize::MAX;

/// Generates one representative per isomorphism class (possibly several; the
/// result is deduplicated by canonical form and sorted).
///
/// The backtracking pairs the smallest unpaired half-edge `h` with one
/// candidate per orbit of the partial matching's stabilizer: unpaired
/// half-edges within a single vertex are interchangeable, as are wholly
/// unpaired vertices, so it suffices to try one self-loop partner at `h`'s
/// vertex, the smallest unpaired half-edge of each partially paired other
/// vertex, and the first slot of the first untouched vertex. Every perfect
/// matching is therefore group-equivalent to at least one generated leaf.
fn generate_representatives(m: usize) -> Vec<TrivalentGraph> {
    let n_half = 6 * m;
    let n_vert = 2 * m;
    let mut partner = vec![UNSET; n_half];
    let mut paired_per_vertex = vec![0u8; n_vert];
    let mut canonical_forms = BTreeSet::new();
    generate_rec(
        0,
        &mut partner,
        &mut paired_per_vertex,
        n_vert,
        &mut canonical_forms,
    );
    canonical_forms
        .into_iter()
        .map(|pairs| TrivalentGraph::new(n_vert, pairs).expect("generated matching is perfect"))
        .collect()
}

fn generate_rec(
    from: usize,
    partner: &mut [usize],
    paired_per_vertex: &mut [u8],
    n_vert: usize,
    out: &mut BTreeSet<Vec<(usize, usize)>>,
) {
    let mut h = from;
    while h < partner.len() && partner[h] != UNSET {
        h += 1;
    }
    if h == partner.len() {
        out.insert(canon::minimize(partner));
        return;
    }
    let vh = h / 3;
    let mut candidates: Vec<usize> = Vec::with_capacity(n_vert + 1);
    if let Some(x) = (h + 1..3 * vh + 3).find(|&x| partner[x] == UNSET) {
        candidates.push(x);
    }
    for w in 0..n_vert {
        if w == vh || paired_per_vertex[w] == 0 || paired_per_vertex[w] == 3 {
            continue;
        }
        if let Some(x) = (3 * w..3 * w + 3).find(|&x| partner[x] == UNSET) {
            candidates.push(x);
        }
    }
    if let Some(w) = (0..n_vert).find(|&w| w != vh && paired_per_vertex[w] == 0) {
        candidates.push(3 * w);
    }
    for t in candidates {
        partner[h] = t;
        partner[t] = h;
        paired_per_vertex[vh] += 1;
        paired_per_vertex[t / 3] += 1;
        generate_rec(h + 1, partner, paired_per_vertex, n_vert, out);
        paired_per_vertex[t / 3] -= 1;
        paired_per_vertex[vh] -= 1;
        partner[h] = UNSET;
        partner[t] = UNSET;
    }
}

/// Automorphism order by iterating the full relabeling group.
///
/// Every vertex permutation is visited; within-vertex permutations are
/// assigned vertex by vertex, rejecting a partial assignment as soon as some
/// already-determined matching pair fails to land on a matching pair. This is
/// the auditable reference path; it is used for graphs of up to 6 vertices.
pub(crate) fn automorphism_order_exhaustive(g: &TrivalentGraph) -> u64 {
    let mut count = 0u64;
    for_each_automorphism(g, |_| count += 1);
    count
}

/// All automorphisms as explicit half-edge maps, exhaustively.
pub(crate) fn automorphisms_exhaustive(g: &TrivalentGraph) -> Vec<Vec<usize>> {
    let mut maps = Vec::new();
    for_each_automorphism(g, |map| maps.push(map.to_vec()));
    maps
}

const PERMS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn for_each_automorphism(g: &TrivalentGraph, mut visit: impl FnMut(&[usize])) {
    let n_vert = g.num_vertices();
    let partner = g.partner_array();
    // Pairs become checkable once all vertices up to their larger endpoint
    // vertex are mapped.
    let mut pairs_by_max_vertex: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_vert];
    for &(a, b) in g.matching() {
        pairs_by_max_vertex[(a / 3).max(b / 3)].push((a, b));
    }
    let mut map = vec![0usize; g.num_half_edges()];
    for sigma in (0..n_vert).permutations(n_vert) {
        assign_vertex_maps(
            0,
            &sigma,
            &partner,
            &pairs_by_max_vertex,
            &mut map,
            &mut visit,
        );
    }
}

fn assign_vertex_maps(
    v: usize,
    sigma: &[usize],
    partner: &[usize],
    pairs_by_max_vertex: &[Vec<(usize, usize)>],
    map: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if v == sigma.len() {
        visit(map);
        return;
    }
    let base = 3 * sigma[v];
    for perm in PERMS3 {
        for i in 0..3 {
            map[3 * v + i] = base + perm[i];
        }
        let consistent = pairs_by_max_vertex[v.max(0)]
            .iter()
            .all(|&(a, b)| partner[map[a]] == map[b]);
        if consistent {
            assign_vertex_maps(v + 1, sigma, partner, pairs_by_max_vertex, map, visit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_loop_census() {
        let table = enumerate_graphs(1, 4).unwrap();
        assert_eq!(table.classes.len(), 2);
        let dumbbell = &table.classes[0];
        assert_eq!(dumbbell.graph, TrivalentGraph::dumbbell());
        assert_eq!(dumbbell.aut_order, 8);
        assert_eq!(dumbbell.multiplicity, 9);
        assert!(dumbbell.connected);
        let theta = &table.classes[1];
        assert_eq!(theta.graph, TrivalentGraph::theta());
        assert_eq!(theta.aut_order, 12);
        assert_eq!(theta.multiplicity, 6);
        assert!(theta.connected);
        assert_eq!(table.multiplicity_sum(), double_factorial(5));
    }

    #[test]
    fn two_loop_multiplicities_sum_to_11_double_factorial() {
        let table = enumerate_graphs(2, 4).unwrap();
        assert_eq!(table.multiplicity_sum(), double_factorial(11));
        assert_eq!(double_factorial(11), 10_395);
        // Disconnected classes are exactly the unions of one-loop graphs.
        assert_eq!(
            table.classes.iter().filter(|c| !c.connected).count(),
            3,
            "dumbbell+dumbbell, dumbbell+theta, theta+theta"
        );
    }

    #[test]
    fn search_and_exhaustive_automorphism_orders_agree() {
        for m in 1..=2 {
            for class in enumerate_graphs(m, 4).unwrap().classes {
                let partner = class.graph.partner_array();
                assert_eq!(
                    canon::count_stabilizer(&partner),
                    automorphism_order_exhaustive(&class.graph),
                    "disagreement on {:?}",
                    class.graph
                );
            }
        }
    }

    #[test]
    fn class_lookup_finds_scrambled_graphs() {
        let table = enumerate_graphs(1, 4).unwrap();
        let scrambled = TrivalentGraph::new(2, [(0, 1), (3, 4), (2, 5)]).unwrap();
        let class = table.class_of(&scrambled).unwrap();
        assert_eq!(class.aut_order, 8);
    }

    #[test]
    fn rejects_out_of_range_loop_order() {
        assert!(matches!(
            enumerate_graphs(0, 4),
            Err(Error::LoopOrderOutOfRange { .. })
        ));
        assert!(matches!(
            enumerate_graphs(5, 4),
            Err(Error::LoopOrderOutOfRange { requested: 5, max: 4 })
        ));
    }

    #[test]
    fn union_of_one_loop_classes_appear_at_two_loops() {
        let table = enumerate_graphs(2, 4).unwrap();
        let double_dumbbell = TrivalentGraph::dumbbell().disjoint_union(&TrivalentGraph::dumbbell());
        let class = table.class_of(&double_dumbbell).unwrap();
        assert_eq!(class.aut_order, 2 * 8 * 8);
        assert!(!class.connected);
    }
}
