//! Neighbourhood complexity: distinct X-neighbourhoods, the shatter function,
//! the `(d+2)·2^(d+1)·|X|` upper bound, and the twin-pair machinery behind it.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::trigraph::{KindFilter, Trigraph, TrigraphError, VertexId};

pub type VertexSet = BTreeSet<VertexId>;

/// A trace `N(v) ∩ X`, kept as a sorted id list.
pub type Trace = Vec<VertexId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error("vertex {0} of X is not in the graph")]
    NotInGraph(VertexId),
    #[error("vertex {0} is not in X")]
    NotInX(VertexId),
    #[error("X must be non-empty")]
    EmptyX,
    #[error("bound (d+2)*2^(d+1)*k overflows u64 for d={d}, k={k}")]
    Overflow { d: u32, k: u64 },
    #[error("subset size {n} exceeds vertex count {vertices}")]
    SubsetTooLarge { n: usize, vertices: usize },
    #[error("subset size {0} exceeds the 64-element enumeration limit")]
    SubsetTooWide(usize),
    #[error(transparent)]
    Trigraph(#[from] TrigraphError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeighbourhoodProfile {
    pub x_set: Vec<VertexId>,
    pub traces: BTreeSet<Trace>,
    pub count: usize,
}

fn check_subset(g: &Trigraph, x: &VertexSet) -> Result<(), ComplexityError> {
    match x.iter().find(|&&v| !g.contains(v)) {
        Some(&v) => Err(ComplexityError::NotInGraph(v)),
        None => Ok(()),
    }
}

fn trace(g: &Trigraph, v: VertexId, x: &VertexSet) -> Trace {
    g.incident(v)
        .expect("live vertex")
        .keys()
        .filter(|w| x.contains(w))
        .copied()
        .collect()
}

/// Distinct traces `N(v) ∩ X` over every vertex `v` of `g`, members of X included.
pub fn distinct_x_neighbourhoods(g: &Trigraph, x: &VertexSet) -> Result<NeighbourhoodProfile, ComplexityError> {
    check_subset(g, x)?;
    let traces: BTreeSet<Trace> = g.vertices().map(|v| trace(g, v, x)).collect();
    Ok(NeighbourhoodProfile { x_set: x.iter().copied().collect(), count: traces.len(), traces })
}

/// Distinct traces over the vertices outside X only.
pub fn distinct_x_neighbourhoods_outside(g: &Trigraph, x: &VertexSet) -> Result<NeighbourhoodProfile, ComplexityError> {
    check_subset(g, x)?;
    let traces: BTreeSet<Trace> = g.vertices().filter(|v| !x.contains(v)).map(|v| trace(g, v, x)).collect();
    Ok(NeighbourhoodProfile { x_set: x.iter().copied().collect(), count: traces.len(), traces })
}

/// `(d+2)·2^(d+1)·k`, rejecting `k = 0` and anything that does not fit in a `u64`.
pub fn nu_upper_bound(d: u32, k: u64) -> Result<u64, ComplexityError> {
    if k == 0 {
        return Err(ComplexityError::EmptyX);
    }
    let overflow = ComplexityError::Overflow { d, k };
    let pow = 1u128.checked_shl(d + 1).filter(|_| d < 127).ok_or_else(|| overflow.clone())?;
    (d as u128 + 2)
        .checked_mul(pow)
        .and_then(|b| b.checked_mul(k as u128))
        .and_then(|b| u64::try_from(b).ok())
        .ok_or(overflow)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub count: usize,
    pub bound: u64,
    pub holds: bool,
}

/// Compares the distinct X-neighbourhood count against the bound for width `d`.
pub fn bound_check(g: &Trigraph, x: &VertexSet, d: u32) -> Result<BoundCheck, ComplexityError> {
    let profile = distinct_x_neighbourhoods(g, x)?;
    let bound = nu_upper_bound(d, x.len() as u64)?;
    Ok(BoundCheck { count: profile.count, bound, holds: profile.count as u64 <= bound })
}

/// `true` iff the count respects the bound. `d` must upper-bound the twin-width of `g`.
pub fn check_upper_bound(g: &Trigraph, x: &VertexSet, d: u32) -> Result<bool, ComplexityError> {
    Ok(bound_check(g, x, d)?.holds)
}

/// Builds the reduced graph used in the upper-bound argument.
///
/// First, among vertices outside X, only the lowest id of each X-trace is
/// kept. Then, for each `v` in X in ascending order, if no vertex outside X has
/// the trace `N(v) ∩ X`, a fresh vertex with `N(u) = N(v)` is added. Afterwards
/// every vertex outside X has its own trace and every trace realised inside X
/// is also realised outside it.
pub fn dedupe_and_extend(g: &Trigraph, x: &VertexSet) -> Result<Trigraph, ComplexityError> {
    check_subset(g, x)?;
    let mut seen: BTreeSet<Trace> = BTreeSet::new();
    let mut keep: VertexSet = x.clone();
    for v in g.vertices().filter(|v| !x.contains(v)) {
        if seen.insert(trace(g, v, x)) {
            keep.insert(v);
        }
    }
    let mut reduced = g.induced_subgraph(&keep)?;
    for &v in x {
        let t = trace(&reduced, v, x);
        if seen.insert(t) {
            let nbrs = reduced.neighbours(v, KindFilter::BLACK)?;
            reduced.add_vertex(&nbrs)?;
        }
    }
    Ok(reduced)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwinPairSet {
    pub x: VertexId,
    pub pairs: Vec<(VertexId, VertexId)>,
}

impl TwinPairSet {
    /// No vertex occurs in two pairs.
    pub fn is_disjoint(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.pairs.iter().all(|&(u, v)| seen.insert(u) && seen.insert(v))
    }
}

/// Unordered pairs outside X whose traces agree on `X \ {x}`.
pub fn twin_pairs(g: &Trigraph, x_set: &VertexSet, x: VertexId) -> Result<TwinPairSet, ComplexityError> {
    if !x_set.contains(&x) {
        return Err(ComplexityError::NotInX(x));
    }
    check_subset(g, x_set)?;
    let mut reduced = x_set.clone();
    reduced.remove(&x);
    let mut groups: BTreeMap<Trace, Vec<VertexId>> = BTreeMap::new();
    for v in g.vertices().filter(|v| !x_set.contains(v)) {
        groups.entry(trace(g, v, &reduced)).or_default().push(v);
    }
    let mut pairs = Vec::new();
    for members in groups.values() {
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                pairs.push((u, v));
            }
        }
    }
    pairs.sort_unstable();
    Ok(TwinPairSet { x, pairs })
}

/// The member of X with the fewest twin pairs, and that count. Ties go to the
/// smallest id.
pub fn min_twin_pair_vertex(g: &Trigraph, x_set: &VertexSet) -> Result<(VertexId, usize), ComplexityError> {
    let mut best: Option<(usize, VertexId)> = None;
    for &x in x_set {
        let t = twin_pairs(g, x_set, x)?.pairs.len();
        if best.is_none_or(|(b, _)| t < b) {
            best = Some((t, x));
        }
    }
    best.map(|(t, x)| (x, t)).ok_or(ComplexityError::EmptyX)
}

/// `max_{|A| = n} |{A ∩ N(v) : v ∈ V}|`. Exponential in `n`.
pub fn shatter_function(g: &Trigraph, n: usize) -> Result<usize, ComplexityError> {
    let verts: Vec<VertexId> = g.vertices().collect();
    if n > verts.len() {
        return Err(ComplexityError::SubsetTooLarge { n, vertices: verts.len() });
    }
    if n > 64 {
        return Err(ComplexityError::SubsetTooWide(n));
    }
    if verts.is_empty() {
        return Ok(0);
    }
    if n == 0 {
        return Ok(1);
    }
    let ceiling = if n >= usize::BITS as usize { usize::MAX } else { (1usize << n).min(verts.len()) };
    let nbrs: Vec<&BTreeMap<VertexId, _>> = verts.iter().map(|&v| g.incident(v).expect("live")).collect();

    let mut best = 0;
    let mut chosen: Vec<usize> = (0..n).collect();
    let mut traces: BTreeSet<u64> = BTreeSet::new();
    loop {
        traces.clear();
        for adj in &nbrs {
            let mut mask = 0u64;
            for (bit, &i) in chosen.iter().enumerate() {
                if adj.contains_key(&verts[i]) {
                    mask |= 1 << bit;
                }
            }
            traces.insert(mask);
        }
        best = best.max(traces.len());
        if best >= ceiling || !next_combination(&mut chosen, verts.len()) {
            return Ok(best);
        }
    }
}

/// Advances `c` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
