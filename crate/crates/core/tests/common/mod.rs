//! Brute-force oracles shared by the integration tests. Everything here
//! enumerates tuples, subsets or colorings directly and is only meant for
//! tiny inputs.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chroma_core::graph::{self, named};
use chroma_core::Graph;
use num_rational::BigRational;

pub fn for_each_injection(s: usize, n: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(s: usize, n: usize, cur: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        if cur.len() == s {
            f(cur);
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(s, n, cur, used, f);
                cur.pop();
                used[x] = false;
            }
        }
    }
    rec(s, n, &mut Vec::new(), &mut vec![false; n], f);
}

/// Copies of `h` in `g` as (vertex set, edge set) pairs.
pub fn copies(h: &Graph, g: &Graph) -> Vec<(Vec<usize>, BTreeSet<(usize, usize)>)> {
    let mut found = BTreeSet::new();
    for_each_injection(h.vertex_count(), g.vertex_count(), &mut |phi| {
        if h.edges().all(|(u, v)| g.has_edge(phi[u], phi[v])) {
            let mut verts = phi.to_vec();
            verts.sort_unstable();
            let edges: BTreeSet<(usize, usize)> =
                h.edges().map(|(u, v)| (phi[u].min(phi[v]), phi[u].max(phi[v]))).collect();
            found.insert((verts, edges));
        }
    });
    found.into_iter().collect()
}

pub fn copy_count(h: &Graph, g: &Graph) -> u64 {
    copies(h, g).len() as u64
}

/// Law of `T` by visiting every coloring, from the brute-force copy list.
pub fn exact_law(h: &Graph, g: &Graph, c: u64) -> BTreeMap<u64, u64> {
    let sets: Vec<Vec<usize>> = copies(h, g).into_iter().map(|(v, _)| v).collect();
    let n = g.vertex_count();
    let total = c.pow(n as u32);
    let mut law = BTreeMap::new();
    for idx in 0..total {
        let mut rest = idx;
        let colors: Vec<u64> = (0..n)
            .map(|_| {
                let col = rest % c;
                rest /= c;
                col
            })
            .collect();
        let t = sets.iter().filter(|s| s.iter().all(|&v| colors[v] == colors[s[0]])).count() as u64;
        *law.entry(t).or_insert(0) += 1;
    }
    law
}

pub fn law_mean_variance(law: &BTreeMap<u64, u64>) -> (BigRational, BigRational) {
    let total: u64 = law.values().sum();
    let r = |a: u128| BigRational::new(a.into(), (total as u128).into());
    let first: u128 = law.iter().map(|(&v, &k)| v as u128 * k as u128).sum();
    let second: u128 = law.iter().map(|(&v, &k)| (v as u128).pow(2) * k as u128).sum();
    let mean = r(first);
    let var = r(second) - &mean * &mean;
    (mean, var)
}

/// `γ` by scanning every proper subgraph, induced or not, isolated
/// vertices included.
pub fn gamma_brute(h: &Graph) -> Option<(i64, i64)> {
    let s = h.vertex_count();
    let e = h.edge_count() as i64;
    let edges: Vec<(usize, usize)> = h.edges().collect();
    let mut best: Option<(i64, i64)> = None;
    for vmask in 1u32..1 << s {
        let v1 = vmask.count_ones() as i64;
        let inside: Vec<usize> = (0..edges.len())
            .filter(|&i| vmask >> edges[i].0 & 1 == 1 && vmask >> edges[i].1 & 1 == 1)
            .collect();
        for emask in 0u64..1 << inside.len() {
            let e1 = emask.count_ones() as i64;
            if v1 == s as i64 && e1 == e {
                continue;
            }
            let den = e1 * (s as i64 - 1) - e * (v1 - 1);
            if den <= 0 {
                continue;
            }
            let num = s as i64 - v1;
            // compare num/den against the best so far
            if best.map_or(true, |(bn, bd)| num * bd < bn * den) {
                best = Some((num, den));
            }
        }
    }
    best
}

/// `m(h)` over every subgraph, induced or not.
pub fn density_brute(h: &Graph) -> (i64, i64) {
    let s = h.vertex_count();
    let edges: Vec<(usize, usize)> = h.edges().collect();
    let mut best = (0i64, 1i64);
    for vmask in 1u32..1 << s {
        let v1 = vmask.count_ones() as i64;
        let inside = edges
            .iter()
            .filter(|e| vmask >> e.0 & 1 == 1 && vmask >> e.1 & 1 == 1)
            .count() as i64;
        if inside * best.1 > best.0 * v1 {
            best = (inside, v1);
        }
    }
    best
}

pub fn poisson(lambda: f64, k: u64) -> f64 {
    let mut p = (-lambda).exp();
    for i in 1..=k {
        p *= lambda / i as f64;
    }
    p
}

/// Fixture patterns by name.
pub fn patterns() -> Vec<(&'static str, Graph)> {
    vec![
        ("k2", graph::complete(2)),
        ("k1_2", graph::star(2)),
        ("k3", graph::complete(3)),
        ("p4", graph::path(4)),
        ("c4", graph::cycle(4)),
        ("diamond", named::diamond()),
        ("tadpole", named::tadpole()),
        ("k1_3", graph::star(3)),
    ]
}

/// Deterministic pseudo-random small graphs.
pub fn random_graphs(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    (0..count)
        .map(|i| {
            let n = 1 + (i * 7 + 3) % max_n;
            let p = [0.2, 0.4, 0.5, 0.7, 0.9][i % 5];
            graph::erdos_renyi(n, p, seed + i as u64).unwrap()
        })
        .collect()
}
