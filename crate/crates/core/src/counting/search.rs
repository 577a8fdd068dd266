//! Backtracking embedding search.
//!
//! The host is relabeled so that vertex ids increase with `(degree, id)`.
//! Every embedding has a unique pattern vertex whose image carries the
//! largest id; the search is run once per pattern vertex `u` as root,
//! forcing every other image below the root's image. Hubs then only ever
//! appear as roots, which keeps searches on skewed hosts (wheels, books,
//! pyramids) near linear.
//!
//! In pure counting mode the last pattern vertex is never enumerated: the
//! number of admissible images is the size of a neighbourhood intersection
//! below the root, memoized per root on the images of the back-neighbours.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::graph::Graph;

/// Host relabeled into degree order.
pub(crate) struct RankedHost {
    pub graph: Graph,
    /// `original[ranked_id]` is the vertex id in the input graph.
    pub original: Vec<u32>,
}

impl RankedHost {
    pub fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by_key(|&v| (g.degree(v as usize), v));
        let mut rank = vec![0u32; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v as usize] = r as u32;
        }
        let adj = order
            .iter()
            .map(|&v| {
                let mut list: Vec<u32> = g.neighbors(v as usize).iter().map(|&w| rank[w as usize]).collect();
                list.sort_unstable();
                list
            })
            .collect();
        RankedHost {
            graph: Graph::from_sorted_adjacency(adj),
            original: order,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Mode {
    /// Non-edges of the pattern must map to non-edges.
    pub induced: bool,
    /// Apply symmetry-breaking constraints so each copy is found once.
    pub one_per_copy: bool,
}

/// Mapping order and per-position checks for one choice of root.
struct Plan {
    order: Vec<usize>,
    need_degree: Vec<usize>,
    back: Vec<Vec<usize>>,
    back_non: Vec<Vec<usize>>,
    /// Earlier positions whose image must be smaller than this one's.
    above: Vec<Vec<usize>>,
    /// Earlier positions whose image must be larger than this one's.
    below: Vec<Vec<usize>>,
}

impl Plan {
    fn new(h: &Graph, root: usize, mode: Mode, constraints: &[(usize, usize)]) -> Option<Plan> {
        let s = h.vertex_count();
        let mut order = vec![root];
        let mut pos = vec![usize::MAX; s];
        pos[root] = 0;
        while order.len() < s {
            // most mapped neighbours first, then the most recently placed one
            let next = (0..s)
                .filter(|&v| pos[v] == usize::MAX)
                .max_by_key(|&v| {
                    let placed: Vec<usize> = h
                        .neighbors(v)
                        .iter()
                        .map(|&w| pos[w as usize])
                        .filter(|&p| p != usize::MAX)
                        .collect();
                    let latest = placed.iter().copied().max().map_or(0, |p| p + 1);
                    (placed.len(), latest, h.degree(v), std::cmp::Reverse(v))
                })
                .expect("unplaced vertex exists");
            pos[next] = order.len();
            order.push(next);
        }
        let mut plan = Plan {
            need_degree: order.iter().map(|&v| h.degree(v)).collect(),
            back: vec![Vec::new(); s],
            back_non: vec![Vec::new(); s],
            above: vec![Vec::new(); s],
            below: vec![Vec::new(); s],
            order,
        };
        for i in 0..s {
            for j in 0..i {
                if h.has_edge(plan.order[i], plan.order[j]) {
                    plan.back[i].push(j);
                } else if mode.induced {
                    plan.back_non[i].push(j);
                }
            }
        }
        if mode.one_per_copy {
            for &(v, w) in constraints {
                let (pv, pw) = (pos[v], pos[w]);
                if pv == 0 {
                    // the root is the maximum, it cannot precede anything
                    return None;
                }
                if pw == 0 {
                    continue;
                }
                if pv < pw {
                    plan.above[pw].push(pv);
                } else {
                    plan.below[pv].push(pw);
                }
            }
        }
        Some(plan)
    }
}

struct Searcher<'a> {
    host: &'a Graph,
    plan: &'a Plan,
    mode: Mode,
    images: Vec<u32>,
    memo: HashMap<[u32; 4], u64>,
}

impl<'a> Searcher<'a> {
    fn new(host: &'a Graph, plan: &'a Plan, mode: Mode, root_image: u32) -> Self {
        let mut images = vec![0u32; plan.order.len()];
        images[0] = root_image;
        Searcher {
            host,
            plan,
            mode,
            images,
            memo: HashMap::new(),
        }
    }

    /// Candidate window `[lo, hi)` and the list to scan, if any.
    fn window(&self, depth: usize) -> (u32, u32, Option<usize>) {
        let mut hi = self.images[0];
        let mut lo = 0u32;
        for &j in &self.plan.below[depth] {
            hi = hi.min(self.images[j]);
        }
        for &j in &self.plan.above[depth] {
            lo = lo.max(self.images[j] + 1);
        }
        let anchor = self.plan.back[depth]
            .iter()
            .copied()
            .min_by_key(|&j| self.host.degree(self.images[j] as usize));
        (lo, hi, anchor)
    }

    #[inline]
    fn admissible(&self, depth: usize, x: u32, anchor: Option<usize>) -> bool {
        let xv = x as usize;
        if self.host.degree(xv) < self.plan.need_degree[depth] {
            return false;
        }
        if self.images[..depth].contains(&x) {
            return false;
        }
        for &j in &self.plan.back[depth] {
            if Some(j) != anchor && !self.host.has_edge(self.images[j] as usize, xv) {
                return false;
            }
        }
        for &j in &self.plan.back_non[depth] {
            if self.host.has_edge(self.images[j] as usize, xv) {
                return false;
            }
        }
        true
    }

    fn candidates(&self, depth: usize) -> Vec<u32> {
        let (lo, hi, anchor) = self.window(depth);
        if lo >= hi {
            return Vec::new();
        }
        match anchor {
            Some(j) => {
                let list = self.host.neighbors(self.images[j] as usize);
                let a = list.partition_point(|&y| y < lo);
                let b = list.partition_point(|&y| y < hi);
                list[a..b]
                    .iter()
                    .copied()
                    .filter(|&x| self.admissible(depth, x, anchor))
                    .collect()
            }
            None => (lo..hi).filter(|&x| self.admissible(depth, x, None)).collect(),
        }
    }

    fn count(&mut self, depth: usize) -> u128 {
        let last = depth + 1 == self.plan.order.len();
        if last && !self.mode.induced && self.plan.above[depth].is_empty() && self.plan.below[depth].is_empty() {
            return self.count_leaf(depth);
        }
        let mut total = 0u128;
        for x in self.candidates(depth) {
            if last {
                total += 1;
            } else {
                self.images[depth] = x;
                total += self.count(depth + 1);
            }
        }
        total
    }

    /// Number of `x` below the root adjacent to every back-neighbour image
    /// and not already used. The degree bound holds automatically here since
    /// every neighbour of the last vertex is already placed.
    fn count_leaf(&mut self, depth: usize) -> u128 {
        let hi = self.images[0];
        let back: Vec<u32> = self.plan.back[depth].iter().map(|&j| self.images[j]).collect();
        let joint = match back.len() {
            0 => hi as u64,
            1 => self.host.neighbors(back[0] as usize).partition_point(|&y| y < hi) as u64,
            k => {
                let key = if k <= 4 {
                    let mut key = [u32::MAX; 4];
                    let mut sorted = back.clone();
                    sorted.sort_unstable();
                    key[..k].copy_from_slice(&sorted);
                    Some(key)
                } else {
                    None
                };
                if let Some(v) = key.and_then(|key| self.memo.get(&key).copied()) {
                    v
                } else {
                    let anchor = *back
                        .iter()
                        .min_by_key(|&&b| self.host.degree(b as usize))
                        .expect("k >= 2");
                    let list = self.host.neighbors(anchor as usize);
                    let end = list.partition_point(|&y| y < hi);
                    let v = list[..end]
                        .iter()
                        .filter(|&&x| back.iter().all(|&b| b == anchor || self.host.has_edge(b as usize, x as usize)))
                        .count() as u64;
                    if let Some(key) = key {
                        self.memo.insert(key, v);
                    }
                    v
                }
            }
        };
        let clash = self.images[1..depth]
            .iter()
            .filter(|&&y| y < hi && back.iter().all(|&b| self.host.has_edge(b as usize, y as usize)))
            .count() as u64;
        u128::from(joint - clash)
    }

    fn enumerate(&mut self, depth: usize, out: &mut Vec<u32>) {
        for x in self.candidates(depth) {
            self.images[depth] = x;
            if depth + 1 == self.plan.order.len() {
                out.extend_from_slice(&self.images);
            } else {
                self.enumerate(depth + 1, out);
            }
        }
    }
}

fn plans(h: &Graph, mode: Mode, constraints: &[(usize, usize)]) -> Vec<Plan> {
    (0..h.vertex_count())
        .filter_map(|u| Plan::new(h, u, mode, constraints))
        .collect()
}

const ROOT_BLOCK: usize = 512;

/// Number of embeddings of `h` into `host` under `mode`.
pub(crate) fn count_embeddings(h: &Graph, host: &RankedHost, mode: Mode, constraints: &[(usize, usize)]) -> u128 {
    let s = h.vertex_count();
    let n = host.graph.vertex_count();
    if s == 0 {
        return 1;
    }
    if s > n {
        return 0;
    }
    let g = &host.graph;
    plans(h, mode, constraints)
        .iter()
        .map(|plan| {
            let blocks = n.div_ceil(ROOT_BLOCK);
            (0..blocks)
                .into_par_iter()
                .map(|b| {
                    let mut sub = 0u128;
                    for x in b * ROOT_BLOCK..((b + 1) * ROOT_BLOCK).min(n) {
                        if g.degree(x) < plan.need_degree[0] {
                            continue;
                        }
                        if s == 1 {
                            sub += 1;
                            continue;
                        }
                        sub += Searcher::new(g, plan, mode, x as u32).count(1);
                    }
                    sub
                })
                .sum::<u128>()
        })
        .sum()
}

/// Embeddings as flattened image tuples, indexed by pattern vertex and
/// expressed in the host's original labels. Deterministic order.
pub(crate) fn enumerate_embeddings(
    h: &Graph,
    host: &RankedHost,
    mode: Mode,
    constraints: &[(usize, usize)],
) -> Vec<u32> {
    let s = h.vertex_count();
    let n = host.graph.vertex_count();
    if s == 0 || s > n {
        return Vec::new();
    }
    let g = &host.graph;
    let mut out = Vec::new();
    for plan in plans(h, mode, constraints) {
        let blocks = n.div_ceil(ROOT_BLOCK);
        let parts: Vec<Vec<u32>> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut local = Vec::new();
                for x in b * ROOT_BLOCK..((b + 1) * ROOT_BLOCK).min(n) {
                    if g.degree(x) < plan.need_degree[0] {
                        continue;
                    }
                    if s == 1 {
                        local.push(x as u32);
                        continue;
                    }
                    Searcher::new(g, &plan, mode, x as u32).enumerate(1, &mut local);
                }
                local
            })
            .collect();
        for part in parts {
            for tuple in part.chunks_exact(s) {
                let mut by_vertex = vec![0u32; s];
                for (p, &img) in tuple.iter().enumerate() {
                    by_vertex[plan.order[p]] = host.original[img as usize];
                }
                out.extend_from_slice(&by_vertex);
            }
        }
    }
    out
}
