//! The bipartite lower-bound family: an independent set `X = {x_1..x_k}` and,
//! for every admissible triple `(i, j, t)`, a block of `2^C` vertices whose
//! traces on X are `{x_i..x_j, x_t} ∪ Y` for each `Y ⊆ {x_{t+1}..x_{t+C}}`.
//!
//! Alongside the graph this module emits an explicit contraction sequence of
//! width at most `max(AB, C) + 2`, built phase by phase: after phase `ℓ` the
//! non-singleton parts are the blocks `B_{j,t}`, the prefix `X_0 = {x_1..x_ℓ}`
//! and a trash part `T`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::complexity::{distinct_x_neighbourhoods_outside, VertexSet};
use crate::contraction::{canonical_partition, replay_and_verify, ContractionSequence, Partition};
use crate::trigraph::{Trigraph, VertexId};

/// Largest supported `C`; each triple contributes `2^C` vertices.
pub const MAX_C: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LbError {
    #[error("d = {0} is below 3")]
    WidthTooSmall(usize),
    #[error("k = {k} is below the threshold d + 2*sqrt(d-2) + 1 (need k >= {min})")]
    KBelowThreshold { k: usize, min: usize },
    #[error("k = {k} admits no triple (need k >= C + 3 = {min})")]
    NoTriple { k: usize, min: usize },
    #[error("parameter {0} must be at least 1")]
    NonPositive(&'static str),
    #[error("C = {0} exceeds the supported maximum {MAX_C}")]
    CTooLarge(usize),
    #[error("graph does not match parameters: {0}")]
    Mismatch(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LbMode {
    /// `C = d - 2`, `A = B = floor(sqrt(d - 2))`.
    FromWidth,
    Explicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LbParameters {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub k: usize,
    /// The width the construction is meant to certify, if any.
    pub d: Option<usize>,
    pub mode: LbMode,
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Smallest `k` with `k >= d + 2*sqrt(d - 2) + 1`, in exact integer arithmetic.
pub fn k_min(d: usize) -> usize {
    assert!(d >= 2, "k_min needs d >= 2");
    // k - d - 1 >= 2*sqrt(d-2)  <=>  (k - d - 1)^2 >= 4(d - 2)
    let need = 4 * (d - 2);
    let mut s = isqrt(need);
    if s * s < need {
        s += 1;
    }
    d + 1 + s
}

impl LbParameters {
    pub fn from_width(d: usize, k: usize) -> Result<Self, LbError> {
        if d < 3 {
            return Err(LbError::WidthTooSmall(d));
        }
        let min = k_min(d);
        if k < min {
            return Err(LbError::KBelowThreshold { k, min });
        }
        let c = d - 2;
        if c > MAX_C {
            return Err(LbError::CTooLarge(c));
        }
        let a = isqrt(d - 2);
        Ok(LbParameters { a, b: a, c, k, d: Some(d), mode: LbMode::FromWidth })
    }

    pub fn explicit(a: usize, b: usize, c: usize, k: usize) -> Result<Self, LbError> {
        for (name, v) in [("A", a), ("B", b), ("C", c)] {
            if v == 0 {
                return Err(LbError::NonPositive(name));
            }
        }
        if c > MAX_C {
            return Err(LbError::CTooLarge(c));
        }
        if k < c + 3 {
            return Err(LbError::NoTriple { k, min: c + 3 });
        }
        Ok(LbParameters { a, b, c, k, d: None, mode: LbMode::Explicit })
    }

    /// Attaches a target width to explicit parameters, for reporting only.
    pub fn with_target(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    /// Width bound of the emitted sequence, `max(AB, C) + 2`.
    pub fn m(&self) -> usize {
        (self.a * self.b).max(self.c) + 2
    }

    /// Admissible `(i, j, t)` in lexicographic order.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let last_t = self.k - self.c;
        let mut out = Vec::new();
        for i in 1..=last_t {
            for j in i..i + self.a {
                for t in j + 2..=j + 1 + self.b {
                    if t <= last_t {
                        out.push((i, j, t));
                    }
                }
            }
        }
        out
    }

    /// Number of vertices outside X: `2^C` per triple.
    pub fn non_x_count(&self) -> usize {
        self.triples().len() << self.c
    }
}

/// Position of a vertex outside X. Bit `s` of `y_mask` stands for `x_{t+1+s}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Coord {
    pub i: usize,
    pub j: usize,
    pub t: usize,
    pub y_mask: u64,
}

impl Coord {
    /// Indices of X adjacent to this vertex, ascending.
    pub fn x_indices(&self, c: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (self.i..=self.j).collect();
        out.push(self.t);
        out.extend((0..c).filter(|s| self.y_mask >> s & 1 == 1).map(|s| self.t + 1 + s));
        out
    }

    /// Reads a coordinate back off a sorted list of X indices, if it has the
    /// interval / gap / apex / tail shape. `c` bounds the tail width.
    pub fn decode(x_indices: &[usize], c: usize) -> Option<Coord> {
        let (&i, _) = x_indices.split_first()?;
        let mut pos = 0;
        while pos + 1 < x_indices.len() && x_indices[pos + 1] == x_indices[pos] + 1 {
            pos += 1;
        }
        // with an all-consecutive trace the apex could be any member; the
        // gap forces the interval to stop at least two short of the apex
        let j = x_indices[pos];
        let t = *x_indices.get(pos + 1)?;
        if t < j + 2 {
            return None;
        }
        let mut y_mask = 0u64;
        for &s in &x_indices[pos + 2..] {
            if s <= t || s > t + c {
                return None;
            }
            y_mask |= 1 << (s - t - 1);
        }
        Some(Coord { i, j, t, y_mask })
    }
}

#[derive(Clone, Debug)]
pub struct LbGraph {
    pub params: LbParameters,
    pub graph: Trigraph,
    /// `x[s - 1]` is `x_s`; ids `1..=k`.
    pub x: Vec<VertexId>,
    pub index: BTreeMap<VertexId, Coord>,
}

impl LbGraph {
    pub fn x_set(&self) -> VertexSet {
        self.x.iter().copied().collect()
    }

    pub fn block(&self, i: usize, j: usize, t: usize) -> Vec<VertexId> {
        self.index
            .iter()
            .filter(|(_, c)| (c.i, c.j, c.t) == (i, j, t))
            .map(|(&v, _)| v)
            .collect()
    }

    /// Sidecar lines `"<id> <i> <j> <t> <Y-bitmask>"`, one per vertex outside X.
    pub fn index_file(&self) -> String {
        let mut out = String::new();
        for (v, c) in &self.index {
            out.push_str(&format!("{} {} {} {} {}\n", v, c.i, c.j, c.t, c.y_mask));
        }
        out
    }
}

/// Builds the graph. X gets ids `1..=k`; the rest follow in `(i, j, t, Y)` order.
pub fn build_lb_graph(params: &LbParameters) -> Result<LbGraph, LbError> {
    let k = params.k;
    let mut coords = Vec::new();
    for (i, j, t) in params.triples() {
        for y_mask in 0..1u64 << params.c {
            coords.push(Coord { i, j, t, y_mask });
        }
    }
    let n = k + coords.len();
    let mut edges = Vec::new();
    let mut index = BTreeMap::new();
    for (offset, c) in coords.iter().enumerate() {
        let v = (k + 1 + offset) as u32;
        for s in c.x_indices(params.c) {
            edges.push((s as u32, v));
        }
        index.insert(VertexId(v), *c);
    }
    let graph = Trigraph::from_edge_list(n, &edges).map_err(|e| LbError::Mismatch(e.to_string()))?;
    Ok(LbGraph { params: *params, graph, x: (1..=k as u32).map(VertexId).collect(), index })
}

/// The contraction sequence together with the step count at the end of each phase.
#[derive(Clone, Debug)]
pub struct LbSequence {
    pub sequence: ContractionSequence,
    /// `phase_ends[ℓ]` contractions have been applied once phase `ℓ` is complete.
    pub phase_ends: Vec<usize>,
}

struct Scheduler {
    seq: ContractionSequence,
}

impl Scheduler {
    /// Merges part `from` into `into` (if any) and returns the receiving representative.
    fn merge(&mut self, into: Option<VertexId>, from: VertexId) -> VertexId {
        match into {
            Some(rep) => {
                self.seq.push(rep, from);
                rep
            }
            None => from,
        }
    }
}

/// Emits the phase-by-phase sequence and then the final cleanup.
pub fn build_lb_sequence(params: &LbParameters, g: &LbGraph) -> Result<LbSequence, LbError> {
    if g.params != *params {
        return Err(LbError::Mismatch("parameters differ from those the graph was built with".into()));
    }
    if g.graph.vertex_count() != params.k + params.non_x_count() {
        return Err(LbError::Mismatch(format!(
            "expected {} vertices, graph has {}",
            params.k + params.non_x_count(),
            g.graph.vertex_count()
        )));
    }
    let (a, b, c, k) = (params.a, params.b, params.c, params.k);
    let mut blocks: BTreeMap<(usize, usize, usize), Vec<VertexId>> = BTreeMap::new();
    for (&v, co) in &g.index {
        blocks.entry((co.i, co.j, co.t)).or_default().push(v);
    }

    let mut s = Scheduler { seq: ContractionSequence::default() };
    let mut parts: BTreeMap<(usize, usize), VertexId> = BTreeMap::new();
    let mut x0: Option<VertexId> = None;
    let mut trash: Option<VertexId> = None;
    let mut phase_ends = vec![0];
    let last_phase = k - c - 1;

    for l in 0..last_phase {
        let i = l;
        // 1. fold B_{i,t} into B_{i+1,t}
        if l >= 1 {
            for t in i + 3..=i + 2 + b {
                if let Some(src) = parts.remove(&(i, t)) {
                    let dst = parts.get(&(i + 1, t)).copied();
                    let rep = s.merge(dst, src);
                    parts.insert((i + 1, t), rep);
                }
            }
        }
        // 2. absorb the blocks V_{i+1,j,t}
        for j in i + 1..i + 1 + a {
            for t in j + 2..=j + 1 + b {
                if let Some(members) = blocks.get(&(i + 1, j, t)) {
                    for &v in members {
                        let dst = parts.get(&(j, t)).copied();
                        let rep = s.merge(dst, v);
                        parts.insert((j, t), rep);
                    }
                }
            }
        }
        // 3. x_{ℓ+1} joins X_0
        x0 = Some(s.merge(x0, g.x[l]));
        // 4. B_{i,i+2} goes to the trash
        if let Some(src) = parts.remove(&(i, i + 2)) {
            trash = Some(s.merge(trash, src));
        }
        phase_ends.push(s.seq.len());
    }

    // cleanup: X side, then the rest, then the last pair
    let mut x_side = x0;
    for &x in &g.x[last_phase..] {
        x_side = Some(s.merge(x_side, x));
    }
    let mut reps: Vec<VertexId> = parts.values().copied().chain(trash).collect();
    reps.sort_unstable();
    let mut other: Option<VertexId> = None;
    for r in reps {
        other = Some(s.merge(other, r));
    }
    if let (Some(xs), Some(o)) = (x_side, other) {
        s.merge(Some(xs), o);
    }
    Ok(LbSequence { sequence: s.seq, phase_ends })
}

/// Predicted parts after phase `ℓ`, computed straight from the coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LbScheduleState {
    pub phase: usize,
    pub blocks: BTreeMap<(usize, usize), Vec<VertexId>>,
    pub x0: Vec<VertexId>,
    pub trash: Vec<VertexId>,
}

impl LbScheduleState {
    pub fn predict(g: &LbGraph, phase: usize) -> Self {
        let i = phase;
        let mut blocks: BTreeMap<(usize, usize), Vec<VertexId>> = BTreeMap::new();
        let mut trash = Vec::new();
        if phase >= 1 {
            for (&v, co) in &g.index {
                if co.i > i {
                    continue;
                }
                if co.t <= phase + 1 {
                    trash.push(v);
                } else if co.j <= i {
                    blocks.entry((i, co.t)).or_default().push(v);
                } else {
                    blocks.entry((co.j, co.t)).or_default().push(v);
                }
            }
        }
        LbScheduleState { phase, blocks, x0: g.x[..phase].to_vec(), trash }
    }

    /// The full partition of `V(G)`, unlisted vertices as singletons.
    pub fn partition(&self, g: &LbGraph) -> Partition {
        let mut parts: Vec<Vec<VertexId>> = self.blocks.values().cloned().collect();
        parts.push(self.x0.clone());
        parts.push(self.trash.clone());
        let covered: BTreeSet<VertexId> = parts.iter().flatten().copied().collect();
        parts.extend(g.graph.vertices().filter(|v| !covered.contains(v)).map(|v| vec![v]));
        canonical_partition(parts)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LbReport {
    pub params: LbParameters,
    pub m: usize,
    pub triples: usize,
    pub total_vertices: usize,
    pub non_x: usize,
    pub distinct_non_x: usize,
    pub all_distinct: bool,
    pub contractions: usize,
    pub width: usize,
    pub sequence_valid: bool,
    /// `distinct_non_x / (d·2^d·k)`, when a target width is known.
    pub ratio: Option<Ratio<u64>>,
    /// `M` exceeds the target width, so the sequence does not certify it.
    pub exceeds_target: bool,
}

pub fn verify_lb(params: &LbParameters) -> Result<LbReport, LbError> {
    let g = build_lb_graph(params)?;
    let seq = build_lb_sequence(params, &g)?;
    Ok(report_for(&g, &seq))
}

/// Builds the report for an already constructed graph and sequence.
pub fn report_for(g: &LbGraph, seq: &LbSequence) -> LbReport {
    let params = g.params;
    let profile = distinct_x_neighbourhoods_outside(&g.graph, &g.x_set()).expect("X lies in the graph");
    let replay = replay_and_verify(&g.graph, &seq.sequence, None);
    let non_x = g.index.len();
    let ratio = params.d.map(|d| {
        Ratio::new(profile.count as u64, d as u64 * (1u64 << d) * params.k as u64)
    });
    LbReport {
        params,
        m: params.m(),
        triples: params.triples().len(),
        total_vertices: g.graph.vertex_count(),
        non_x,
        distinct_non_x: profile.count,
        all_distinct: profile.count == non_x,
        contractions: seq.sequence.len(),
        width: replay.width,
        sequence_valid: replay.valid,
        ratio,
        exceeds_target: params.d.is_some_and(|d| params.m() > d),
    }
}
