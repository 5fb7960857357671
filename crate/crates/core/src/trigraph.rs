//! Trigraphs: vertices joined by black edges, red edges, or nothing.
//!
//! Vertex ids are 1-based and stable. A contraction keeps the id of its first
//! argument (the survivor) and retires the second; retired ids are never
//! handed out again.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_index(index: usize) -> Self {
        VertexId(index as u32 + 1)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    Black,
    Red,
    Absent,
}

impl EdgeKind {
    /// Kind of the edge from the merged vertex to `x`, given the kinds of
    /// `xu` and `xv` before the contraction.
    pub fn merge(self, other: EdgeKind) -> EdgeKind {
        match (self, other) {
            (EdgeKind::Black, EdgeKind::Black) => EdgeKind::Black,
            (EdgeKind::Absent, EdgeKind::Absent) => EdgeKind::Absent,
            _ => EdgeKind::Red,
        }
    }
}

/// Which edge kinds a neighbourhood query should report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KindFilter {
    pub black: bool,
    pub red: bool,
}

impl KindFilter {
    pub const BLACK: KindFilter = KindFilter { black: true, red: false };
    pub const RED: KindFilter = KindFilter { black: false, red: true };
    pub const ANY: KindFilter = KindFilter { black: true, red: true };

    pub fn accepts(self, kind: EdgeKind) -> bool {
        match kind {
            EdgeKind::Black => self.black,
            EdgeKind::Red => self.red,
            EdgeKind::Absent => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrigraphError {
    #[error("vertex {vertex} out of range 1..={n}")]
    OutOfRange { vertex: u32, n: usize },
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(u32, u32),
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("vertex {0} is not present")]
    MissingVertex(VertexId),
    #[error("cannot contract vertex {0} with itself")]
    SameVertex(VertexId),
}

/// A trigraph with sparse per-vertex adjacency. Absent pairs are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trigraph {
    adj: Vec<BTreeMap<VertexId, EdgeKind>>,
    live: Vec<bool>,
    red_degree: Vec<usize>,
    live_count: usize,
}

impl Trigraph {
    /// `n` isolated vertices with ids `1..=n`.
    pub fn empty(n: usize) -> Self {
        Trigraph {
            adj: vec![BTreeMap::new(); n],
            live: vec![true; n],
            red_degree: vec![0; n],
            live_count: n,
        }
    }

    /// Interprets a plain graph as a trigraph with no red edges.
    pub fn from_edge_list(n: usize, edges: &[(u32, u32)]) -> Result<Self, TrigraphError> {
        let mut g = Trigraph::empty(n);
        for &(u, v) in edges {
            for w in [u, v] {
                if w == 0 || w as usize > n {
                    return Err(TrigraphError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(TrigraphError::SelfLoop(u));
            }
            let (a, b) = (VertexId(u), VertexId(v));
            if g.adj[a.index()].contains_key(&b) {
                return Err(TrigraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.adj[a.index()].insert(b, EdgeKind::Black);
            g.adj[b.index()].insert(a, EdgeKind::Black);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.live_count
    }

    /// One past the largest id ever allocated.
    pub fn id_bound(&self) -> usize {
        self.adj.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.0 >= 1 && self.live.get(v.index()).copied().unwrap_or(false)
    }

    fn check(&self, v: VertexId) -> Result<(), TrigraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(TrigraphError::MissingVertex(v))
        }
    }

    /// Live vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.live
            .iter()
            .enumerate()
            .filter(|(_, &l)| l)
            .map(|(i, _)| VertexId::from_index(i))
    }

    /// Kind of the pair `{u, v}`. Pairs involving missing vertices, and `u == v`, are `Absent`.
    pub fn edge_kind(&self, u: VertexId, v: VertexId) -> EdgeKind {
        if !self.contains(u) {
            return EdgeKind::Absent;
        }
        self.adj[u.index()].get(&v).copied().unwrap_or(EdgeKind::Absent)
    }

    /// Sets the kind of `{u, v}`, keeping red degrees in sync.
    pub fn set_edge(&mut self, u: VertexId, v: VertexId, kind: EdgeKind) -> Result<(), TrigraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(TrigraphError::SelfLoop(u.0));
        }
        let old = self.edge_kind(u, v);
        if old == EdgeKind::Red {
            self.red_degree[u.index()] -= 1;
            self.red_degree[v.index()] -= 1;
        }
        match kind {
            EdgeKind::Absent => {
                self.adj[u.index()].remove(&v);
                self.adj[v.index()].remove(&u);
            }
            k => {
                self.adj[u.index()].insert(v, k);
                self.adj[v.index()].insert(u, k);
                if k == EdgeKind::Red {
                    self.red_degree[u.index()] += 1;
                    self.red_degree[v.index()] += 1;
                }
            }
        }
        Ok(())
    }

    /// All non-absent pairs at `v` with their kinds.
    pub fn incident(&self, v: VertexId) -> Result<&BTreeMap<VertexId, EdgeKind>, TrigraphError> {
        self.check(v)?;
        Ok(&self.adj[v.index()])
    }

    pub fn neighbours(&self, v: VertexId, filter: KindFilter) -> Result<BTreeSet<VertexId>, TrigraphError> {
        Ok(self
            .incident(v)?
            .iter()
            .filter(|(_, &k)| filter.accepts(k))
            .map(|(&w, _)| w)
            .collect())
    }

    pub fn red_degree(&self, v: VertexId) -> Result<usize, TrigraphError> {
        self.check(v)?;
        Ok(self.red_degree[v.index()])
    }

    pub fn max_red_degree(&self) -> usize {
        self.vertices().map(|v| self.red_degree[v.index()]).max().unwrap_or(0)
    }

    pub fn is_ordinary(&self) -> bool {
        self.vertices().all(|v| self.red_degree[v.index()] == 0)
    }

    /// Every non-absent pair once, as `(smaller, larger, kind)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, EdgeKind)> + '_ {
        self.vertices().flat_map(move |u| {
            self.adj[u.index()]
                .range(VertexId(u.0 + 1)..)
                .map(move |(&v, &k)| (u, v, k))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Contracts `u` and `v` into a vertex carrying `u`'s id.
    pub fn contract(&self, u: VertexId, v: VertexId) -> Result<Trigraph, TrigraphError> {
        let mut g = self.clone();
        g.contract_in_place(u, v)?;
        Ok(g)
    }

    pub fn contract_in_place(&mut self, u: VertexId, v: VertexId) -> Result<(), TrigraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(TrigraphError::SameVertex(u));
        }
        // The pair itself is consumed, whatever its kind.
        self.set_edge(u, v, EdgeKind::Absent)?;

        let u_adj = std::mem::take(&mut self.adj[u.index()]);
        let v_adj = std::mem::take(&mut self.adj[v.index()]);
        let mut merged = BTreeMap::new();
        let mut red = 0;
        for &x in u_adj.keys().chain(v_adj.keys()) {
            if merged.contains_key(&x) {
                continue;
            }
            let ku = u_adj.get(&x).copied().unwrap_or(EdgeKind::Absent);
            let kv = v_adj.get(&x).copied().unwrap_or(EdgeKind::Absent);
            let kind = ku.merge(kv);
            let x_adj = &mut self.adj[x.index()];
            x_adj.remove(&v);
            x_adj.insert(u, kind);
            let before = usize::from(ku == EdgeKind::Red) + usize::from(kv == EdgeKind::Red);
            let after = usize::from(kind == EdgeKind::Red);
            self.red_degree[x.index()] = self.red_degree[x.index()] + after - before;
            red += after;
            merged.insert(x, kind);
        }
        self.adj[u.index()] = merged;
        self.red_degree[u.index()] = red;
        self.red_degree[v.index()] = 0;
        self.live[v.index()] = false;
        self.live_count -= 1;
        Ok(())
    }

    /// Max red degree of `self.contract(u, v)`, computed without building it.
    pub fn contraction_red_degree(&self, u: VertexId, v: VertexId) -> Result<usize, TrigraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(TrigraphError::SameVertex(u));
        }
        let u_adj = &self.adj[u.index()];
        let v_adj = &self.adj[v.index()];
        let mut merged_red = 0;
        let mut best = 0;
        for x in self.vertices() {
            if x == u || x == v {
                continue;
            }
            let ku = u_adj.get(&x).copied().unwrap_or(EdgeKind::Absent);
            let kv = v_adj.get(&x).copied().unwrap_or(EdgeKind::Absent);
            let kind = ku.merge(kv);
            let before = usize::from(ku == EdgeKind::Red) + usize::from(kv == EdgeKind::Red);
            let after = usize::from(kind == EdgeKind::Red);
            merged_red += after;
            best = best.max(self.red_degree[x.index()] + after - before);
        }
        Ok(best.max(merged_red))
    }

    /// Induced subtrigraph on `keep`; ids are preserved.
    pub fn induced_subgraph(&self, keep: &BTreeSet<VertexId>) -> Result<Trigraph, TrigraphError> {
        for &v in keep {
            self.check(v)?;
        }
        let mut g = Trigraph::empty(self.id_bound());
        for i in 0..g.id_bound() {
            if !keep.contains(&VertexId::from_index(i)) {
                g.live[i] = false;
                g.live_count -= 1;
            }
        }
        for (u, v, k) in self.edges() {
            if keep.contains(&u) && keep.contains(&v) {
                g.set_edge(u, v, k)?;
            }
        }
        Ok(g)
    }

    /// Adds a vertex with a fresh id, black-adjacent to `black_neighbours`.
    pub fn add_vertex(&mut self, black_neighbours: &BTreeSet<VertexId>) -> Result<VertexId, TrigraphError> {
        for &w in black_neighbours {
            self.check(w)?;
        }
        let id = VertexId::from_index(self.adj.len());
        self.adj.push(BTreeMap::new());
        self.live.push(true);
        self.red_degree.push(0);
        self.live_count += 1;
        for &w in black_neighbours {
            self.set_edge(id, w, EdgeKind::Black)?;
        }
        Ok(id)
    }

    /// Relabels live vertices to `1..=n` in ascending id order. Returns the
    /// compacted trigraph and the old id of each new index.
    pub fn compacted(&self) -> (Trigraph, Vec<VertexId>) {
        let old: Vec<VertexId> = self.vertices().collect();
        let mut new_id = vec![VertexId(0); self.id_bound()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v.index()] = VertexId::from_index(i);
        }
        let mut g = Trigraph::empty(old.len());
        for (u, v, k) in self.edges() {
            g.set_edge(new_id[u.index()], new_id[v.index()], k)
                .expect("compacted ids are live");
        }
        (g, old)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vid(v: u32) -> VertexId {
        VertexId(v)
    }

    fn p4() -> Trigraph {
        Trigraph::from_edge_list(4, &[(1, 2), (2, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn edge_list_embedding() {
        let g = Trigraph::from_edge_list(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.edges().all(|(_, _, k)| k == EdgeKind::Black));
        assert_eq!(g.max_red_degree(), 0);

        let single = Trigraph::from_edge_list(1, &[]).unwrap();
        assert_eq!(single.vertex_count(), 1);
        assert_eq!(single.edge_count(), 0);
    }

    #[test]
    fn edge_list_errors_are_distinct() {
        assert_eq!(
            Trigraph::from_edge_list(4, &[(1, 2), (1, 1)]),
            Err(TrigraphError::SelfLoop(1))
        );
        assert_eq!(
            Trigraph::from_edge_list(3, &[(1, 4)]),
            Err(TrigraphError::OutOfRange { vertex: 4, n: 3 })
        );
        assert_eq!(
            Trigraph::from_edge_list(3, &[(0, 1)]),
            Err(TrigraphError::OutOfRange { vertex: 0, n: 3 })
        );
        assert_eq!(
            Trigraph::from_edge_list(3, &[(1, 2), (2, 1)]),
            Err(TrigraphError::DuplicateEdge(1, 2))
        );
    }

    #[test]
    fn contract_p4_endpoint_pair() {
        let g = p4().contract(vid(1), vid(2)).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert!(!g.contains(vid(2)));
        assert_eq!(g.edge_kind(vid(1), vid(3)), EdgeKind::Red);
        assert_eq!(g.edge_kind(vid(3), vid(4)), EdgeKind::Black);
        assert_eq!(g.edge_kind(vid(1), vid(4)), EdgeKind::Absent);
        assert_eq!(g.red_degree(vid(1)).unwrap(), 1);
        assert_eq!(g.red_degree(vid(3)).unwrap(), 1);
        assert_eq!(g.max_red_degree(), 1);
        assert_eq!(g.neighbours(vid(1), KindFilter::RED).unwrap(), BTreeSet::from([vid(3)]));
    }

    #[test]
    fn contract_c4_twins() {
        let c4 = Trigraph::from_edge_list(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        let g = c4.contract(vid(1), vid(3)).unwrap();
        assert_eq!(g.max_red_degree(), 0);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge_kind(vid(2), vid(4)), EdgeKind::Absent);
    }

    #[test]
    fn contract_triangle_gives_black_edge() {
        let k3 = Trigraph::from_edge_list(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let g = k3.contract(vid(2), vid(3)).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_kind(vid(1), vid(2)), EdgeKind::Black);
        assert_eq!(g.max_red_degree(), 0);
    }

    #[test]
    fn contract_adjacent_pair_in_c5() {
        let c5 = Trigraph::from_edge_list(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap();
        let g = c5.contract(vid(1), vid(2)).unwrap();
        assert_eq!(g.max_red_degree(), 2);
        assert_eq!(g.neighbours(vid(1), KindFilter::RED).unwrap(), BTreeSet::from([vid(3), vid(5)]));
    }

    #[test]
    fn red_pair_is_consumed() {
        let mut g = Trigraph::empty(2);
        g.set_edge(vid(1), vid(2), EdgeKind::Red).unwrap();
        let h = g.contract(vid(1), vid(2)).unwrap();
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.edge_count(), 0);
        assert_eq!(h.max_red_degree(), 0);
    }

    #[test]
    fn contract_errors() {
        let g = p4();
        assert_eq!(g.contract(vid(1), vid(1)), Err(TrigraphError::SameVertex(vid(1))));
        assert_eq!(g.contract(vid(1), vid(9)), Err(TrigraphError::MissingVertex(vid(9))));
        let h = g.contract(vid(1), vid(2)).unwrap();
        assert_eq!(h.contract(vid(2), vid(3)), Err(TrigraphError::MissingVertex(vid(2))));
        assert_eq!(h.red_degree(vid(2)), Err(TrigraphError::MissingVertex(vid(2))));
        assert!(h.neighbours(vid(0), KindFilter::ANY).is_err());
    }

    #[test]
    fn neighbour_queries() {
        let star = Trigraph::from_edge_list(5, &[(1, 2), (1, 3), (1, 4), (1, 5)]).unwrap();
        assert_eq!(
            star.neighbours(vid(1), KindFilter::BLACK).unwrap(),
            (2..=5).map(VertexId).collect()
        );
        let iso = Trigraph::empty(3);
        assert!(iso.neighbours(vid(2), KindFilter::ANY).unwrap().is_empty());
    }

    #[test]
    fn predicted_red_degree_matches_contraction() {
        let c5 = Trigraph::from_edge_list(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]).unwrap();
        let g = c5.contract(vid(1), vid(3)).unwrap();
        for u in g.vertices() {
            for v in g.vertices().filter(|&v| v != u) {
                assert_eq!(
                    g.contraction_red_degree(u, v).unwrap(),
                    g.contract(u, v).unwrap().max_red_degree()
                );
            }
        }
    }

    #[test]
    fn induced_and_compacted() {
        let g = p4();
        let h = g.induced_subgraph(&BTreeSet::from([vid(2), vid(3), vid(4)])).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 2);
        let (c, old) = h.compacted();
        assert_eq!(old, vec![vid(2), vid(3), vid(4)]);
        assert_eq!(c, Trigraph::from_edge_list(3, &[(1, 2), (2, 3)]).unwrap());
    }

    #[test]
    fn add_vertex_uses_fresh_id() {
        let mut g = p4().contract(vid(1), vid(2)).unwrap();
        let w = g.add_vertex(&BTreeSet::from([vid(3)])).unwrap();
        assert_eq!(w, vid(5));
        assert_eq!(g.edge_kind(w, vid(3)), EdgeKind::Black);
        assert!(g.add_vertex(&BTreeSet::from([vid(2)])).is_err());
    }
}
