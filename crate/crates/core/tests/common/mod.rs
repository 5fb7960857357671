//! Test oracles that share no code with the library's search or contraction
//! paths: a dense-matrix brute-force twin-width, a complement-disconnection
//! cograph recogniser, and a small non-isomorphic graph enumerator.

#![allow(dead_code)]

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tww_core::Trigraph;

/// A small simple graph as an edge list over `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

impl SmallGraph {
    pub fn trigraph(&self) -> Trigraph {
        Trigraph::from_edge_list(self.n, &self.edges).unwrap()
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut a = vec![vec![false; self.n]; self.n];
        for &(u, v) in &self.edges {
            a[u as usize - 1][v as usize - 1] = true;
            a[v as usize - 1][u as usize - 1] = true;
        }
        a
    }

    pub fn from_adjacency(a: &[Vec<bool>]) -> Self {
        let n = a.len();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if a[u][v] {
                    edges.push((u as u32 + 1, v as u32 + 1));
                }
            }
        }
        SmallGraph { n, edges }
    }

    /// Relabels vertex `v` to `perm[v - 1] + 1`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        SmallGraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| (perm[u as usize - 1] as u32 + 1, perm[v as usize - 1] as u32 + 1))
                .collect(),
        }
    }
}

pub fn complete(n: usize) -> SmallGraph {
    let edges = (1..=n as u32).flat_map(|u| (u + 1..=n as u32).map(move |v| (u, v))).collect();
    SmallGraph { n, edges }
}

pub fn path(n: usize) -> SmallGraph {
    SmallGraph { n, edges: (1..n as u32).map(|u| (u, u + 1)).collect() }
}

pub fn cycle(n: usize) -> SmallGraph {
    let mut g = path(n);
    g.edges.push((1, n as u32));
    g
}

// ---------------------------------------------------------------------------
// brute-force twin-width over every contraction order, no memo

const ABSENT: u8 = 0;
const BLACK: u8 = 1;
const RED: u8 = 2;

fn brute(m: &mut Vec<Vec<u8>>, alive: &mut Vec<bool>, current: usize, best: &mut usize) -> usize {
    let live: Vec<usize> = (0..m.len()).filter(|&i| alive[i]).collect();
    if live.len() <= 1 {
        return current;
    }
    let mut result = usize::MAX;
    for a in 0..live.len() {
        for b in a + 1..live.len() {
            let (u, v) = (live[a], live[b]);
            let saved_u = m[u].clone();
            let saved_col: Vec<u8> = (0..m.len()).map(|x| m[x][u]).collect();
            for &x in &live {
                if x == u || x == v {
                    continue;
                }
                let k = match (m[x][u], m[x][v]) {
                    (BLACK, BLACK) => BLACK,
                    (ABSENT, ABSENT) => ABSENT,
                    _ => RED,
                };
                m[u][x] = k;
                m[x][u] = k;
            }
            m[u][v] = ABSENT;
            alive[v] = false;
            let red = (0..m.len())
                .filter(|&x| alive[x])
                .map(|x| (0..m.len()).filter(|&y| alive[y] && m[x][y] == RED).count())
                .max()
                .unwrap_or(0);
            let width = current.max(red);
            if width < *best {
                let w = brute(m, alive, width, best);
                result = result.min(w);
                if w < *best {
                    *best = w;
                }
            }
            alive[v] = true;
            m[u] = saved_u;
            for x in 0..m.len() {
                m[x][u] = saved_col[x];
            }
        }
    }
    result
}

/// Twin-width by exhaustive search over all contraction orders.
pub fn brute_force_tww(g: &SmallGraph) -> usize {
    if g.n <= 1 {
        return 0;
    }
    let mut m: Vec<Vec<u8>> = g
        .adjacency()
        .iter()
        .map(|row| row.iter().map(|&b| if b { BLACK } else { ABSENT }).collect())
        .collect();
    let mut alive = vec![true; g.n];
    let mut best = g.n;
    brute(&mut m, &mut alive, 0, &mut best);
    best
}

// ---------------------------------------------------------------------------
// cographs: every induced subgraph on ≥ 2 vertices is disconnected or has a
// disconnected complement

fn components(vs: &[usize], adj: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &s in vs {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in vs {
                if !seen.contains(&w) && adj(u, w) {
                    seen.insert(w);
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

fn cograph_on(a: &[Vec<bool>], vs: &[usize]) -> bool {
    if vs.len() <= 1 {
        return true;
    }
    let comps = components(vs, &|u, w| a[u][w]);
    if comps.len() > 1 {
        return comps.iter().all(|c| cograph_on(a, c));
    }
    let co = components(vs, &|u, w| u != w && !a[u][w]);
    if co.len() > 1 {
        return co.iter().all(|c| cograph_on(a, c));
    }
    false
}

pub fn is_cograph(g: &SmallGraph) -> bool {
    let vs: Vec<usize> = (0..g.n).collect();
    cograph_on(&g.adjacency(), &vs)
}

pub fn is_connected(g: &SmallGraph) -> bool {
    let a = g.adjacency();
    let vs: Vec<usize> = (0..g.n).collect();
    components(&vs, &|u, w| a[u][w]).len() <= 1
}

// ---------------------------------------------------------------------------
// non-isomorphic graphs on n vertices, by vertex augmentation and brute-force
// canonical labelling

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn canonical_code(a: &[Vec<bool>], perms: &[Vec<usize>]) -> u64 {
    let n = a.len();
    let mut best = u64::MAX;
    for p in perms {
        let mut code = 0u64;
        for u in 0..n {
            for v in u + 1..n {
                code = code << 1 | a[p[u]][p[v]] as u64;
            }
        }
        best = best.min(code);
    }
    best
}

/// One representative of every isomorphism class of graphs on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<SmallGraph> {
    let mut layer: Vec<Vec<Vec<bool>>> = vec![vec![]];
    for size in 1..=n {
        let perms = permutations(size);
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for a in &layer {
            for mask in 0u32..1 << (size - 1) {
                let mut b: Vec<Vec<bool>> = a
                    .iter()
                    .map(|row| {
                        let mut r = row.clone();
                        r.push(false);
                        r
                    })
                    .collect();
                b.push(vec![false; size]);
                for u in 0..size - 1 {
                    if mask >> u & 1 == 1 {
                        b[u][size - 1] = true;
                        b[size - 1][u] = true;
                    }
                }
                if seen.insert(canonical_code(&b, &perms)) {
                    next.push(b);
                }
            }
        }
        layer = next;
    }
    layer.iter().map(|a| SmallGraph::from_adjacency(a)).collect()
}

// ---------------------------------------------------------------------------

/// `count` random graphs with 1..=max_n vertices, reproducible from `seed`.
pub fn random_corpus(seed: u64, count: usize, min_n: usize, max_n: usize) -> Vec<SmallGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(min_n..=max_n);
            let p: f64 = rng.gen_range(0.15..0.85);
            let mut edges = Vec::new();
            for u in 1..=n as u32 {
                for v in u + 1..=n as u32 {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            SmallGraph { n, edges }
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
