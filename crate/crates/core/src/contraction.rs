//! Contraction sequences: replay, width certification, partition views and a
//! greedy heuristic.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trigraph::{Trigraph, VertexId};

/// One contraction in survivor-label form: `merged` is absorbed into `survivor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub survivor: VertexId,
    pub merged: VertexId,
}

impl Step {
    pub fn new(survivor: VertexId, merged: VertexId) -> Self {
        Step { survivor, merged }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionSequence {
    pub steps: Vec<Step>,
}

impl ContractionSequence {
    pub fn new(steps: Vec<Step>) -> Self {
        ContractionSequence { steps }
    }

    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        ContractionSequence {
            steps: pairs
                .iter()
                .map(|&(s, m)| Step::new(VertexId(s), VertexId(m)))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, survivor: VertexId, merged: VertexId) {
        self.steps.push(Step::new(survivor, merged));
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepFault {
    /// The step names a vertex that was never present or was already merged away.
    DeadVertex(VertexId),
    SameVertex(VertexId),
    /// Steps remain after a single vertex is left.
    TooManySteps,
    /// The sequence ends with more than one vertex left.
    TooFewSteps { remaining: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralError {
    /// 1-based index of the offending step; `len + 1` for a short sequence.
    pub step: usize,
    pub fault: StepFault,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetViolation {
    /// 1-based index of the first step whose result exceeds the budget;
    /// 0 when the input trigraph already does.
    pub step: usize,
    pub red_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub valid: bool,
    /// Largest red degree seen over every replayed trigraph, the input included.
    pub width: usize,
    pub steps_applied: usize,
    pub first_violation: Option<BudgetViolation>,
    pub error: Option<StructuralError>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractionError {
    #[error("step index {index} out of range 0..={max}")]
    StepOutOfRange { index: usize, max: usize },
    #[error("invalid sequence at step {}: {:?}", .0.step, .0.fault)]
    Invalid(StructuralError),
}

fn check_step(g: &Trigraph, step: Step, index: usize) -> Result<(), StructuralError> {
    let fault = if g.vertex_count() <= 1 {
        Some(StepFault::TooManySteps)
    } else if !g.contains(step.survivor) {
        Some(StepFault::DeadVertex(step.survivor))
    } else if !g.contains(step.merged) {
        Some(StepFault::DeadVertex(step.merged))
    } else if step.survivor == step.merged {
        Some(StepFault::SameVertex(step.survivor))
    } else {
        None
    };
    match fault {
        Some(fault) => Err(StructuralError { step: index, fault }),
        None => Ok(()),
    }
}

/// Replays `seq` on `g`, recording the red degree after every contraction.
///
/// Without a budget, `valid` only reflects well-formedness: every step names
/// two distinct live vertices and exactly one vertex is left at the end. With
/// a budget, the width must also stay within it.
pub fn replay_and_verify(g: &Trigraph, seq: &ContractionSequence, budget: Option<usize>) -> SequenceReport {
    let mut current = g.clone();
    let mut width = current.max_red_degree();
    let mut first_violation = match budget {
        Some(d) if width > d => Some(BudgetViolation { step: 0, red_degree: width }),
        _ => None,
    };
    let mut error = None;
    let mut applied = 0;
    for (i, &step) in seq.steps.iter().enumerate() {
        if let Err(e) = check_step(&current, step, i + 1) {
            error = Some(e);
            break;
        }
        current
            .contract_in_place(step.survivor, step.merged)
            .expect("step checked above");
        applied += 1;
        let red = current.max_red_degree();
        width = width.max(red);
        if let Some(d) = budget {
            if red > d && first_violation.is_none() {
                first_violation = Some(BudgetViolation { step: i + 1, red_degree: red });
            }
        }
    }
    if error.is_none() && current.vertex_count() > 1 {
        error = Some(StructuralError {
            step: seq.len() + 1,
            fault: StepFault::TooFewSteps { remaining: current.vertex_count() },
        });
    }
    SequenceReport {
        valid: error.is_none() && first_violation.is_none(),
        width,
        steps_applied: applied,
        first_violation,
        error,
    }
}

/// A partition of original vertex ids, canonically ordered: each part sorted,
/// parts sorted by their smallest member.
pub type Partition = Vec<Vec<VertexId>>;

pub fn canonical_partition(mut parts: Partition) -> Partition {
    parts.retain(|p| !p.is_empty());
    for p in &mut parts {
        p.sort_unstable();
    }
    parts.sort_unstable();
    parts
}

/// Union-find over original ids tracking which live vertex owns each part.
struct PartTracker<'a> {
    g: &'a Trigraph,
    uf: UnionFind<usize>,
    live: Vec<bool>,
    remaining: usize,
}

impl<'a> PartTracker<'a> {
    fn new(g: &'a Trigraph) -> Self {
        let mut live = vec![false; g.id_bound()];
        for v in g.vertices() {
            live[v.index()] = true;
        }
        PartTracker { g, uf: UnionFind::new(g.id_bound()), live, remaining: g.vertex_count() }
    }

    fn apply(&mut self, step: Step, index: usize) -> Result<(), StructuralError> {
        let alive = |v: VertexId| v.0 >= 1 && self.live.get(v.index()).copied().unwrap_or(false);
        let fault = if self.remaining <= 1 {
            Some(StepFault::TooManySteps)
        } else if !alive(step.survivor) {
            Some(StepFault::DeadVertex(step.survivor))
        } else if !alive(step.merged) {
            Some(StepFault::DeadVertex(step.merged))
        } else if step.survivor == step.merged {
            Some(StepFault::SameVertex(step.survivor))
        } else {
            None
        };
        if let Some(fault) = fault {
            return Err(StructuralError { step: index, fault });
        }
        self.uf.union(step.survivor.index(), step.merged.index());
        self.live[step.merged.index()] = false;
        self.remaining -= 1;
        Ok(())
    }

    fn partition(&mut self) -> Partition {
        let mut parts: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for v in self.g.vertices() {
            parts.entry(self.uf.find_mut(v.index())).or_default().push(v);
        }
        canonical_partition(parts.into_values().collect())
    }
}

/// The partition of the original vertices after the first `i` contractions.
pub fn partition_at_step(g: &Trigraph, seq: &ContractionSequence, i: usize) -> Result<Partition, ContractionError> {
    let max = g.vertex_count().saturating_sub(1).min(seq.len());
    if i > max {
        return Err(ContractionError::StepOutOfRange { index: i, max });
    }
    let mut tracker = PartTracker::new(g);
    for (k, &step) in seq.steps[..i].iter().enumerate() {
        tracker.apply(step, k + 1).map_err(ContractionError::Invalid)?;
    }
    Ok(tracker.partition())
}

/// Every partition from the discrete one through the last replayed step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTrace {
    pub partitions: Vec<Partition>,
}

impl PartitionTrace {
    pub fn build(g: &Trigraph, seq: &ContractionSequence) -> Result<Self, ContractionError> {
        let mut tracker = PartTracker::new(g);
        let mut partitions = vec![tracker.partition()];
        for (k, &step) in seq.steps.iter().enumerate() {
            tracker.apply(step, k + 1).map_err(ContractionError::Invalid)?;
            partitions.push(tracker.partition());
        }
        Ok(PartitionTrace { partitions })
    }

    /// Each partition arises from its predecessor by merging exactly two parts.
    pub fn is_refinement_chain(&self) -> bool {
        self.partitions.windows(2).all(|w| {
            let (finer, coarser) = (&w[0], &w[1]);
            if coarser.len() + 1 != finer.len() {
                return false;
            }
            // every coarse part is a union of fine parts, and exactly one
            // coarse part is the union of two
            let mut merged = 0;
            for part in coarser {
                let pieces: Vec<_> = finer.iter().filter(|f| f.iter().all(|v| part.contains(v))).collect();
                let covered: usize = pieces.iter().map(|f| f.len()).sum();
                if covered != part.len() {
                    return false;
                }
                match pieces.len() {
                    1 => {}
                    2 => merged += 1,
                    _ => return false,
                }
            }
            merged == 1
        })
    }
}

/// Greedy sequence: each step contracts the pair whose result has the smallest
/// max red degree, ties broken by the lexicographically smallest `(survivor,
/// merged)` with `survivor < merged`.
pub fn greedy_sequence(g: &Trigraph) -> (ContractionSequence, usize) {
    let mut current = g.clone();
    let mut seq = ContractionSequence::default();
    let mut width = current.max_red_degree();
    while current.vertex_count() > 1 {
        let live: Vec<VertexId> = current.vertices().collect();
        let mut best: Option<(usize, VertexId, VertexId)> = None;
        for (a, &u) in live.iter().enumerate() {
            for &v in &live[a + 1..] {
                let red = current.contraction_red_degree(u, v).expect("live pair");
                if best.is_none_or(|(r, _, _)| red < r) {
                    best = Some((red, u, v));
                }
            }
        }
        let (red, u, v) = best.expect("at least two live vertices");
        current.contract_in_place(u, v).expect("live pair");
        seq.push(u, v);
        width = width.max(red);
    }
    (seq, width)
}
