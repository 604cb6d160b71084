//! Minimum-in-orbit canonical labeling by backtracking.
//!
//! A relabeling is a bijection from new half-edges to old half-edges that
//! maps new vertex triples onto old vertex triples. Applying its inverse to
//! the stored matching yields a relabeled matching; the canonical form is the
//! lexicographically smallest relabeled matching over the whole group.
//!
//! The search emits the relabeled pair list in storage order (pairs sorted by
//! smaller member), processing new half-edges upward. At each step the next
//! uncovered new half-edge `h` either has a forced partner (already labeled)
//! or branches over the placements that remain consistent with the partial
//! assignment. Branches whose next pair already exceeds the best known
//! sequence are cut. Counting the assignments that reproduce a fixed target
//! sequence gives the automorphism order: maps with `relabel = target` form a
//! coset of the stabilizer, so their number equals |Aut| for any target in
//! the orbit.

const UNSET: usize = usize::MAX;

struct Search<'a> {
    partner: &'a [usize],
    n_half: usize,
    n_vert: usize,
    /// Per new half-edge, the old half-edge it stands for.
    new_to_old: Vec<usize>,
    old_to_new: Vec<usize>,
    /// Per new vertex, the old vertex its triple is assigned to.
    vert_new_to_old: Vec<usize>,
    vert_old_to_new: Vec<usize>,
    covered: Vec<bool>,
    seq: Vec<(usize, usize)>,
}

impl<'a> Search<'a> {
    fn new(partner: &'a [usize]) -> Self {
        let n_half = partner.len();
        let n_vert = n_half / 3;
        Search {
            partner,
            n_half,
            n_vert,
            new_to_old: vec![UNSET; n_half],
            old_to_new: vec![UNSET; n_half],
            vert_new_to_old: vec![UNSET; n_vert],
            vert_old_to_new: vec![UNSET; n_vert],
            covered: vec![false; n_half],
            seq: Vec::with_capacity(n_half / 2),
        }
    }

    fn assign_he(&mut self, new: usize, old: usize) {
        self.new_to_old[new] = old;
        self.old_to_new[old] = new;
    }

    fn unassign_he(&mut self, new: usize, old: usize) {
        self.new_to_old[new] = UNSET;
        self.old_to_new[old] = UNSET;
    }

    fn assign_vertex(&mut self, new_v: usize, old_v: usize) {
        self.vert_new_to_old[new_v] = old_v;
        self.vert_old_to_new[old_v] = new_v;
    }

    fn unassign_vertex(&mut self, new_v: usize, old_v: usize) {
        self.vert_new_to_old[new_v] = UNSET;
        self.vert_old_to_new[old_v] = UNSET;
    }

    // ----- minimization -----------------------------------------------------

    fn dfs_min(&mut self, from: usize, tight: bool, best: &mut Option<Vec<(usize, usize)>>) {
        let mut h = from;
        while h < self.n_half && self.covered[h] {
            h += 1;
        }
        if h == self.n_half {
            match best {
                None => *best = Some(self.seq.clone()),
                Some(b) => {
                    if self.seq < *b {
                        b.clone_from(&self.seq);
                    }
                }
            }
            return;
        }
        if self.new_to_old[h] != UNSET {
            self.emit_min(h, tight, best);
            return;
        }
        let v_new = h / 3;
        if self.vert_new_to_old[v_new] != UNSET {
            let v_old = self.vert_new_to_old[v_new];
            for a in 3 * v_old..3 * v_old + 3 {
                if self.old_to_new[a] != UNSET {
                    continue;
                }
                self.assign_he(h, a);
                self.emit_min(h, tight, best);
                self.unassign_he(h, a);
            }
        } else {
            // All new half-edges below h are assigned, so h is the first slot
            // of a fresh new vertex; any unused old vertex may land here.
            for v_old in 0..self.n_vert {
                if self.vert_old_to_new[v_old] != UNSET {
                    continue;
                }
                self.assign_vertex(v_new, v_old);
                for a in 3 * v_old..3 * v_old + 3 {
                    self.assign_he(h, a);
                    self.emit_min(h, tight, best);
                    self.unassign_he(h, a);
                }
                self.unassign_vertex(v_new, v_old);
            }
        }
    }

    /// Emits the pair starting at `h` (whose old half-edge is fixed) in every
    /// way compatible with the partial assignment, recursing on each.
    fn emit_min(&mut self, h: usize, tight: bool, best: &mut Option<Vec<(usize, usize)>>) {
        let a = self.new_to_old[h];
        let p_old = self.partner[a];
        if self.old_to_new[p_old] != UNSET {
            let q = self.old_to_new[p_old];
            debug_assert!(q > h);
            if let Some(go) = self.accept(q, tight, best) {
                self.push_pair(h, q);
                self.dfs_min(h + 1, go, best);
                self.pop_pair(h, q);
            }
            return;
        }
        let pv_old = p_old / 3;
        if self.vert_old_to_new[pv_old] != UNSET {
            let w = self.vert_old_to_new[pv_old];
            for q in 3 * w..3 * w + 3 {
                if self.new_to_old[q] != UNSET {
                    continue;
                }
                if let Some(go) = self.accept(q, tight, best) {
                    self.assign_he(q, p_old);
                    self.push_pair(h, q);
                    self.dfs_min(h + 1, go, best);
                    self.pop_pair(h, q);
                    self.unassign_he(q, p_old);
                }
            }
        } else {
            // The partner lands in a fresh new vertex. Only the smallest fresh
            // vertex's first slot can appear in a minimal sequence: swapping
            // two fresh triples (and slots within them) fixes the prefix and
            // lowers this pair, so any other choice is dominated.
            let w = (0..self.n_vert)
                .find(|&w| self.vert_new_to_old[w] == UNSET)
                .expect("a fresh old vertex implies a fresh new vertex");
            let q = 3 * w;
            debug_assert!(q > h);
            if let Some(go) = self.accept(q, tight, best) {
                self.assign_vertex(w, pv_old);
                self.assign_he(q, p_old);
                self.push_pair(h, q);
                self.dfs_min(h + 1, go, best);
                self.pop_pair(h, q);
                self.unassign_he(q, p_old);
                self.unassign_vertex(w, pv_old);
            }
        }
    }

    /// Compares a candidate second pair member against the best sequence at
    /// the current position. `None` prunes; `Some(t)` continues with
    /// tightness `t`. Pair starts agree automatically: they are determined by
    /// the shared prefix.
    fn accept(&self, q: usize, tight: bool, best: &Option<Vec<(usize, usize)>>) -> Option<bool> {
        match best {
            Some(b) if tight => {
                let best_q = b[self.seq.len()].1;
                if q > best_q {
                    None
                } else {
                    Some(q == best_q)
                }
            }
            Some(_) => Some(false),
            None => Some(true),
        }
    }

    fn push_pair(&mut self, h: usize, q: usize) {
        self.covered[h] = true;
        self.covered[q] = true;
        self.seq.push((h, q));
    }

    fn pop_pair(&mut self, h: usize, q: usize) {
        self.seq.pop();
        self.covered[h] = false;
        self.covered[q] = false;
    }

    // ----- counting maps onto a fixed target --------------------------------

    fn dfs_count(&mut self, from: usize, target: &[(usize, usize)], count: &mut u64) {
        let mut h = from;
        while h < self.n_half && self.covered[h] {
            h += 1;
        }
        if h == self.n_half {
            *count += 1;
            return;
        }
        debug_assert_eq!(target[self.seq.len()].0, h);
        if self.new_to_old[h] != UNSET {
            self.emit_count(h, target, count);
            return;
        }
        let v_new = h / 3;
        if self.vert_new_to_old[v_new] != UNSET {
            let v_old = self.vert_new_to_old[v_new];
            for a in 3 * v_old..3 * v_old + 3 {
                if self.old_to_new[a] != UNSET {
                    continue;
                }
                self.assign_he(h, a);
                self.emit_count(h, target, count);
                self.unassign_he(h, a);
            }
        } else {
            for v_old in 0..self.n_vert {
                if self.vert_old_to_new[v_old] != UNSET {
                    continue;
                }
                self.assign_vertex(v_new, v_old);
                for a in 3 * v_old..3 * v_old + 3 {
                    self.assign_he(h, a);
                    self.emit_count(h, target, count);
                    self.unassign_he(h, a);
                }
                self.unassign_vertex(v_new, v_old);
            }
        }
    }

    /// Emits the pair at `h` only if it can match the target's pair there.
    fn emit_count(&mut self, h: usize, target: &[(usize, usize)], count: &mut u64) {
        let a = self.new_to_old[h];
        let p_old = self.partner[a];
        let q_t = target[self.seq.len()].1;
        if self.old_to_new[p_old] != UNSET {
            if self.old_to_new[p_old] == q_t {
                self.push_pair(h, q_t);
                self.dfs_count(h + 1, target, count);
                self.pop_pair(h, q_t);
            }
            return;
        }
        let pv_old = p_old / 3;
        let w_t = q_t / 3;
        if self.vert_old_to_new[pv_old] != UNSET {
            // Partner's vertex already has a new home; the target slot must
            // live there and be free.
            if self.vert_old_to_new[pv_old] == w_t && self.new_to_old[q_t] == UNSET {
                self.assign_he(q_t, p_old);
                self.push_pair(h, q_t);
                self.dfs_count(h + 1, target, count);
                self.pop_pair(h, q_t);
                self.unassign_he(q_t, p_old);
            }
        } else if self.vert_new_to_old[w_t] == UNSET {
            self.assign_vertex(w_t, pv_old);
            self.assign_he(q_t, p_old);
            self.push_pair(h, q_t);
            self.dfs_count(h + 1, target, count);
            self.pop_pair(h, q_t);
            self.unassign_he(q_t, p_old);
            self.unassign_vertex(w_t, pv_old);
        }
    }
}

/// Lexicographically minimal relabeled matching.
pub(crate) fn minimize(partner: &[usize]) -> Vec<(usize, usize)> {
    let mut search = Search::new(partner);
    let mut best = None;
    search.dfs_min(0, true, &mut best);
    best.expect("every perfect matching has a relabeling")
}

/// Number of relabelings carrying the stored matching onto `target`.
/// Zero when `target` is not in the orbit; |Aut| when it is.
pub(crate) fn count_maps_to(partner: &[usize], target: &[(usize, usize)]) -> u64 {
    let mut search = Search::new(partner);
    let mut count = 0;
    search.dfs_count(0, target, &mut count);
    count
}

/// Automorphism order: relabelings fixing the matching itself.
pub(crate) fn count_stabilizer(partner: &[usize]) -> u64 {
    let pairs: Vec<(usize, usize)> = partner
        .iter()
        .enumerate()
        .filter(|&(h, &p)| h < p)
        .map(|(h, &p)| (h, p))
        .collect();
    count_maps_to(partner, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TrivalentGraph;

    #[test]
    fn canonical_forms_of_one_loop_graphs() {
        let dumbbell = TrivalentGraph::dumbbell();
        assert_eq!(
            minimize(&dumbbell.partner_array()),
            vec![(0, 1), (2, 3), (4, 5)]
        );
        let theta = TrivalentGraph::theta();
        assert_eq!(minimize(&theta.partner_array()), vec![(0, 3), (1, 4), (2, 5)]);
    }

    #[test]
    fn stabilizer_counts_match_known_orders() {
        assert_eq!(count_stabilizer(&TrivalentGraph::dumbbell().partner_array()), 8);
        assert_eq!(count_stabilizer(&TrivalentGraph::theta().partner_array()), 12);
    }

    #[test]
    fn counting_against_canonical_target_gives_the_same_order() {
        // A scrambled dumbbell: stabilizer and coset counts must agree.
        let g = TrivalentGraph::new(2, [(0, 2), (1, 3), (4, 5)]).unwrap();
        let partner = g.partner_array();
        let canonical = minimize(&partner);
        assert_eq!(canonical, vec![(0, 1), (2, 3), (4, 5)]);
        assert_eq!(count_maps_to(&partner, &canonical), 8);
        assert_eq!(count_stabilizer(&partner), 8);
    }

    #[test]
    fn maps_to_other_orbit_count_zero() {
        let dumbbell = TrivalentGraph::dumbbell().partner_array();
        let theta_pairs = vec![(0, 3), (1, 4), (2, 5)];
        assert_eq!(count_maps_to(&dumbbell, &theta_pairs), 0);
    }
}
