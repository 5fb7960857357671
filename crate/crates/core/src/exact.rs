//! Exact twin-width by iterative deepening over the width budget, with a
//! depth-first search over contraction pairs and a memo of trigraphs that are
//! known to fail a budget.
//!
//! Practical up to roughly ten vertices.

use std::collections::HashMap;

use serde::Serialize;

use crate::contraction::{greedy_sequence, ContractionSequence, Step};
use crate::trigraph::{EdgeKind, Trigraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactResult {
    pub width: usize,
    pub witness: ContractionSequence,
}

/// Isomorphism-invariant-ish key for a trigraph: the upper triangle of its
/// adjacency matrix under a colour-refinement order, ties broken by id.
///
/// Equal keys always mean isomorphic trigraphs; isomorphic trigraphs may
/// still get different keys when refinement leaves ties.
pub fn canonical_key(g: &Trigraph) -> Vec<u8> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let n = verts.len();
    let mut pos = vec![usize::MAX; g.id_bound()];
    for (i, v) in verts.iter().enumerate() {
        pos[v.index()] = i;
    }
    let kind_code = |k: EdgeKind| match k {
        EdgeKind::Absent => 0u8,
        EdgeKind::Black => 1,
        EdgeKind::Red => 2,
    };

    // initial colour: (black degree, red degree)
    let mut colour: Vec<usize> = {
        let sigs: Vec<(usize, usize)> = verts
            .iter()
            .map(|&v| {
                let inc = g.incident(v).expect("live");
                let red = inc.values().filter(|&&k| k == EdgeKind::Red).count();
                (inc.len() - red, red)
            })
            .collect();
        rank(&sigs)
    };
    let mut classes = count_classes(&colour);
    loop {
        let sigs: Vec<(usize, Vec<(usize, u8)>)> = verts
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut nb: Vec<(usize, u8)> = g
                    .incident(v)
                    .expect("live")
                    .iter()
                    .map(|(w, &k)| (colour[pos[w.index()]], kind_code(k)))
                    .collect();
                nb.sort_unstable();
                (colour[i], nb)
            })
            .collect();
        let refined = rank(&sigs);
        let refined_classes = count_classes(&refined);
        colour = refined;
        if refined_classes == classes {
            break;
        }
        classes = refined_classes;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (colour[i], verts[i]));
    let mut key = Vec::with_capacity(2 + n * n / 2);
    key.extend_from_slice(&(n as u16).to_le_bytes());
    for a in 0..n {
        for b in a + 1..n {
            key.push(kind_code(g.edge_kind(verts[order[a]], verts[order[b]])));
        }
    }
    key
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(s).expect("present"))
        .collect()
}

fn count_classes(colour: &[usize]) -> usize {
    colour.iter().copied().max().map_or(0, |m| m + 1)
}

/// Branch-and-bound state shared across budgets.
struct Search {
    /// canonical key -> largest budget for which the trigraph is known to fail
    failed: HashMap<Vec<u8>, usize>,
}

impl Search {
    fn decide(&mut self, g: &Trigraph, budget: usize) -> Option<Vec<(VertexId, VertexId)>> {
        let n = g.vertex_count();
        if n <= budget + 1 {
            // every contraction leaves at most budget other vertices
            let verts: Vec<VertexId> = g.vertices().collect();
            return Some(verts.iter().skip(1).map(|&v| (verts[0], v)).collect());
        }
        let key = canonical_key(g);
        if self.failed.get(&key).is_some_and(|&d| d >= budget) {
            return None;
        }

        let verts: Vec<VertexId> = g.vertices().collect();
        let mut moves = Vec::new();
        for (a, &u) in verts.iter().enumerate() {
            for &v in &verts[a + 1..] {
                let red = g.contraction_red_degree(u, v).expect("live pair");
                if red <= budget {
                    moves.push((red, u, v));
                }
            }
        }
        moves.sort_unstable();
        for (_, u, v) in moves {
            let child = g.contract(u, v).expect("live pair");
            if let Some(mut rest) = self.decide(&child, budget) {
                rest.insert(0, (u, v));
                return Some(rest);
            }
        }
        let entry = self.failed.entry(key).or_insert(budget);
        *entry = (*entry).max(budget);
        None
    }
}

/// Twin-width of `g` together with a witness sequence attaining it.
///
/// Budgets are searched bottom-up, so the first success is optimal. The greedy
/// heuristic's sequence is reused as the witness once the budget reaches its
/// width. With `upper_hint`, the greedy run is deferred until the budget
/// reaches the hint; a hint below the true width only costs that deferral.
pub fn exact_tww(g: &Trigraph, upper_hint: Option<usize>) -> ExactResult {
    if g.vertex_count() <= 1 {
        return ExactResult { width: g.max_red_degree(), witness: ContractionSequence::default() };
    }
    let mut greedy = match upper_hint {
        Some(_) => None,
        None => Some(greedy_sequence(g)),
    };
    let mut search = Search { failed: HashMap::new() };
    let mut budget = g.max_red_degree();
    loop {
        if greedy.is_none() && upper_hint.is_some_and(|h| budget >= h) {
            greedy = Some(greedy_sequence(g));
        }
        if let Some((seq, width)) = &greedy {
            if budget == *width {
                return ExactResult { width: budget, witness: seq.clone() };
            }
        }
        if let Some(steps) = search.decide(g, budget) {
            let steps = steps.into_iter().map(|(u, v)| Step::new(u, v)).collect();
            return ExactResult { width: budget, witness: ContractionSequence::new(steps) };
        }
        budget += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::replay_and_verify;

    fn graph(n: usize, edges: &[(u32, u32)]) -> Trigraph {
        Trigraph::from_edge_list(n, edges).unwrap()
    }

    fn complete(n: u32) -> Trigraph {
        let edges: Vec<_> = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
        graph(n as usize, &edges)
    }

    #[test]
    fn small_values() {
        assert_eq!(exact_tww(&complete(5), None).width, 0);
        assert_eq!(exact_tww(&graph(4, &[(1, 2), (2, 3), (3, 4)]), None).width, 1);
        let c5 = graph(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]);
        let r = exact_tww(&c5, None);
        assert_eq!(r.width, 2);
        assert!(replay_and_verify(&c5, &r.witness, Some(2)).valid);
        assert_eq!(exact_tww(&Trigraph::empty(0), None).width, 0);
        assert_eq!(exact_tww(&Trigraph::empty(1), None).width, 0);
    }

    #[test]
    fn hint_does_not_change_answer() {
        let c5 = graph(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]);
        for hint in 0..4 {
            assert_eq!(exact_tww(&c5, Some(hint)).width, 2);
        }
    }

    #[test]
    fn canonical_key_ignores_labels() {
        // refinement separates every orbit of the fork, so any labelling agrees
        let a = graph(5, &[(1, 2), (2, 3), (2, 4), (4, 5)]);
        let b = graph(5, &[(5, 3), (3, 1), (3, 2), (2, 4)]);
        assert_eq!(canonical_key(&a), canonical_key(&b));
        let p5 = graph(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]);
        assert_ne!(canonical_key(&a), canonical_key(&p5));
    }
}
