//! Simple undirected graphs with dense `0..n` vertex labels.
//!
//! The same type serves as host graph and as pattern graph. Neighbor lists
//! are kept sorted; graphs with at most [`BITSET_LIMIT`] vertices also carry
//! one adjacency bitset row per vertex so that edge queries in the counting
//! loops are a single word lookup.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ChromaError, Result};

/// Largest vertex count for which adjacency bitsets are materialized.
pub const BITSET_LIMIT: usize = 1024;

#[derive(Clone)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edge_count: usize,
    words: usize,
    rows: Vec<u64>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl std::hash::Hash for Graph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.adj.hash(state);
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_adjacency(vec![Vec::new(); n])
    }

    /// Builds a graph from an edge iterator. Duplicate edges collapse;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > u32::MAX as usize {
            return Err(ChromaError::InvalidGraph(format!(
                "{n} vertices exceed the supported range"
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(ChromaError::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(ChromaError::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_sorted_adjacency(adj))
    }

    /// Builds a graph from neighbor lists that are already sorted,
    /// deduplicated and symmetric.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<u32>>) -> Self {
        let n = adj.len();
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let (words, rows) = if n <= BITSET_LIMIT {
            let words = n.div_ceil(64).max(1);
            let mut rows = vec![0u64; words * n];
            for (u, list) in adj.iter().enumerate() {
                for &v in list {
                    rows[u * words + (v as usize >> 6)] |= 1u64 << (v & 63);
                }
            }
            (words, rows)
        } else {
            (0, Vec::new())
        };
        Graph {
            adj,
            edge_count,
            words,
            rows,
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Sorted neighbor list of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if self.words > 0 {
            (self.rows[u * self.words + (v >> 6)] >> (v & 63)) & 1 == 1
        } else {
            let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
                (u, v)
            } else {
                (v, u)
            };
            self.adj[a].binary_search(&(b as u32)).is_ok()
        }
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Connected components, each as an ascending vertex list, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &w in &self.adj[u] {
                    let w = w as usize;
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// A graph with no vertices is not considered connected.
    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.components().len() == 1
    }

    /// True for `K_{1,r}` with `r >= 1` (so `K2` counts as a star).
    pub fn is_star(&self) -> bool {
        let n = self.vertex_count();
        if n < 2 || self.edge_count != n - 1 {
            return false;
        }
        (0..n).any(|c| self.degree(c) == n - 1)
    }

    /// Subgraph induced on `vertices`, relabeled `0..k` in ascending order
    /// of the original labels.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut sorted: Vec<usize> = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&v| v >= self.vertex_count()) {
            return Err(ChromaError::InvalidGraph(format!(
                "vertex {bad} is outside 0..{}",
                self.vertex_count()
            )));
        }
        Ok(self.induced_unchecked(&sorted))
    }

    /// `vertices` must be sorted, distinct and in range.
    pub(crate) fn induced_unchecked(&self, vertices: &[usize]) -> Graph {
        let position: HashMap<u32, u32> = vertices.iter().enumerate().map(|(j, &v)| (v as u32, j as u32)).collect();
        let adj = vertices
            .iter()
            .map(|&u| {
                let mut list: Vec<u32> = self.adj[u].iter().filter_map(|w| position.get(w).copied()).collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph::from_sorted_adjacency(adj)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.vertex_count(), "permutation length");
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for (u, list) in self.adj.iter().enumerate() {
            adj[perm[u]] = list.iter().map(|&v| perm[v as usize] as u32).collect();
            adj[perm[u]].sort_unstable();
        }
        Graph::from_sorted_adjacency(adj)
    }

    /// Adds the given edges, keeping the vertex set.
    pub fn with_edges<I>(&self, extra: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Graph::from_edges(self.vertex_count(), self.edges().chain(extra))
    }

    /// Vertex pairs `(u, v)`, `u < v`, that are not edges.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// Parses the edge-list text format: an optional `n <count>` header, one
/// `u v` pair per line, `#` comments, arbitrary whitespace.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<usize> = None;
    let mut edges = BTreeSet::new();
    let mut max_vertex: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() == 2 && fields[0] == "n" {
            if header.is_some() || !edges.is_empty() {
                return Err(ChromaError::Parse {
                    line: line_no,
                    message: "header must come first and appear once".into(),
                });
            }
            let n = fields[1].parse::<usize>().map_err(|_| ChromaError::Parse {
                line: line_no,
                message: format!("bad vertex count {:?}", fields[1]),
            })?;
            header = Some(n);
            continue;
        }
        if fields.len() != 2 {
            return Err(ChromaError::Parse {
                line: line_no,
                message: format!("expected two vertex indices, found {:?}", line),
            });
        }
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| ChromaError::Parse {
                line: line_no,
                message: format!("bad vertex index {s:?}"),
            })
        };
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        if u == v {
            return Err(ChromaError::SelfLoop {
                line: line_no,
                vertex: u,
            });
        }
        max_vertex = Some(max_vertex.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.insert((u.min(v), u.max(v)));
    }
    let implied = max_vertex.map_or(0, |m| m + 1);
    let n = match header {
        Some(n) if n < implied => {
            return Err(ChromaError::Parse {
                line: 1,
                message: format!("header declares {n} vertices but index {} appears", implied - 1),
            })
        }
        Some(n) => n,
        None => implied,
    };
    Graph::from_edges(n, edges)
}

/// Parses `u v` lines whose endpoints are arbitrary tokens. Vertices are
/// numbered in order of first appearance; the returned labels map each
/// vertex back to its token.
pub fn parse_labeled_edge_list(text: &str) -> Result<(Graph, Vec<String>)> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(ChromaError::Parse {
                line: line_no,
                message: format!("expected two vertex labels, found {:?}", line),
            });
        }
        let mut id = |token: &str| {
            *index.entry(token.to_string()).or_insert_with(|| {
                labels.push(token.to_string());
                labels.len() - 1
            })
        };
        let (u, v) = (id(fields[0]), id(fields[1]));
        if u == v {
            return Err(ChromaError::SelfLoop { line: line_no, vertex: u });
        }
        edges.insert((u.min(v), u.max(v)));
    }
    Ok((Graph::from_edges(labels.len(), edges)?, labels))
}

/// Serializes to the edge-list text format, with a header line.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(ChromaError::InvalidParameter(msg()))
    }
}

/// Named graph families.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphSpec {
    Complete(usize),
    Cycle(usize),
    /// Path on `n` vertices.
    Path(usize),
    /// `K_{1,r}`: a center joined to `r` leaves.
    Star(usize),
    /// Hub `0` joined to every vertex of the cycle `1..=n`.
    Wheel(usize),
    CompleteMultipartite(Vec<usize>),
    DisjointUnion(Vec<Graph>),
    ErdosRenyi { n: usize, p: f64, seed: u64 },
}

pub fn generate(spec: &GraphSpec) -> Result<Graph> {
    match spec {
        GraphSpec::Complete(n) => {
            require(*n >= 1, || "complete graph needs n >= 1".into())?;
            Ok(complete(*n))
        }
        GraphSpec::Cycle(n) => {
            require(*n >= 3, || format!("cycle needs n >= 3, got {n}"))?;
            Ok(cycle(*n))
        }
        GraphSpec::Path(n) => {
            require(*n >= 1, || "path needs n >= 1".into())?;
            Ok(path(*n))
        }
        GraphSpec::Star(r) => {
            require(*r >= 1, || "star needs r >= 1".into())?;
            Ok(star(*r))
        }
        GraphSpec::Wheel(n) => {
            require(*n >= 3, || format!("wheel needs a rim of at least 3, got {n}"))?;
            Ok(wheel(*n))
        }
        GraphSpec::CompleteMultipartite(parts) => {
            require(
                !parts.is_empty() && parts.iter().all(|&p| p >= 1),
                || "multipartite parts must be non-empty with sizes >= 1".into(),
            )?;
            Ok(complete_multipartite(parts))
        }
        GraphSpec::DisjointUnion(gs) => {
            require(!gs.is_empty(), || "disjoint union of nothing".into())?;
            Ok(disjoint_union(gs))
        }
        GraphSpec::ErdosRenyi { n, p, seed } => erdos_renyi(*n, *p, *seed),
    }
}

pub fn complete(n: usize) -> Graph {
    let adj = (0..n)
        .map(|u| (0..n as u32).filter(|&v| v as usize != u).collect())
        .collect();
    Graph::from_sorted_adjacency(adj)
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle")
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path")
}

pub fn star(r: usize) -> Graph {
    Graph::from_edges(r + 1, (1..=r).map(|i| (0, i))).expect("star")
}

pub fn wheel(n: usize) -> Graph {
    let spokes = (1..=n).map(|i| (0, i));
    let rim = (1..=n).map(|i| (i, if i == n { 1 } else { i + 1 }));
    Graph::from_edges(n + 1, spokes.chain(rim)).expect("wheel")
}

pub fn complete_multipartite(parts: &[usize]) -> Graph {
    let mut part_of = Vec::new();
    for (i, &size) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat(i).take(size));
    }
    let n = part_of.len();
    let adj = (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| part_of[v] != part_of[u])
                .map(|v| v as u32)
                .collect()
        })
        .collect();
    Graph::from_sorted_adjacency(adj)
}

pub fn disjoint_union(graphs: &[Graph]) -> Graph {
    let mut adj = Vec::with_capacity(graphs.iter().map(Graph::vertex_count).sum());
    let mut offset = 0u32;
    for g in graphs {
        for list in &g.adj {
            adj.push(list.iter().map(|&v| v + offset).collect());
        }
        offset += g.vertex_count() as u32;
    }
    Graph::from_sorted_adjacency(adj)
}

/// `m` vertex-disjoint copies of `g`.
pub fn copies(g: &Graph, m: usize) -> Graph {
    let n = g.vertex_count() as u32;
    let mut adj = Vec::with_capacity(g.vertex_count() * m);
    for i in 0..m as u32 {
        for list in &g.adj {
            adj.push(list.iter().map(|&v| v + i * n).collect());
        }
    }
    Graph::from_sorted_adjacency(adj)
}

/// `G(n, p)`: every one of the `C(n, 2)` pairs gets one uniform draw from a
/// ChaCha8 stream seeded with `seed`, in lexicographic pair order.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    require((0.0..=1.0).contains(&p), || format!("edge probability {p} outside [0, 1]"))?;
    require(n >= 1, || "G(n, p) needs n >= 1".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj = vec![Vec::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                adj[u].push(v as u32);
                adj[v].push(u as u32);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(Graph::from_sorted_adjacency(adj))
}

/// `n` copies of `h` glued along the base vertices `0..|V(h)|-1`; the last
/// vertex of `h` is the apex and gets a fresh label `|V(h)|-1+a` in copy `a`.
pub fn pyramid(h: &Graph, n: usize) -> Result<Graph> {
    let s = h.vertex_count();
    if s < 2 || !h.is_connected() {
        return Err(ChromaError::InvalidGraph(
            "pyramid needs a connected pattern with at least 2 vertices".into(),
        ));
    }
    require(n >= 1, || "pyramid height must be >= 1".into())?;
    let apex = s - 1;
    let mut edges = Vec::with_capacity(n * h.edge_count());
    for a in 0..n {
        let relabel = |v: usize| if v == apex { apex + a } else { v };
        edges.extend(h.edges().map(|(u, v)| (relabel(u), relabel(v))));
    }
    Graph::from_edges(apex + n, edges)
}

/// Disjoint union of `pyramid(h, n)` and `ceil(lambda * n)` copies of `h`.
pub fn counterexample_graph(h: &Graph, n: usize, lambda: f64) -> Result<Graph> {
    if h.is_star() {
        return Err(ChromaError::InvalidGraph(
            "the pyramid counterexample needs a pattern that is not a star".into(),
        ));
    }
    require(lambda > 0.0 && lambda.is_finite(), || format!("lambda must be positive, got {lambda}"))?;
    let top = pyramid(h, n)?;
    let extra = (lambda * n as f64).ceil() as usize;
    Ok(disjoint_union(&[top, copies(h, extra)]))
}

/// Small graphs that recur as patterns.
pub mod named {
    use super::*;

    /// `K4` minus one edge (a 4-cycle with one chord).
    pub fn diamond() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).expect("diamond")
    }

    /// Triangle with a pendant vertex, the (3,1)-tadpole.
    pub fn tadpole() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 0), (0, 3)]).expect("tadpole")
    }

    /// Two triangles sharing vertex 0.
    pub fn bowtie() -> Graph {
        Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).expect("bowtie")
    }

    /// `K4` on `0..4` with vertex 4 hanging off vertex 0.
    pub fn k4_pendant() -> Graph {
        Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)])
            .expect("k4 pendant")
    }

    /// 4-cycle `0-1-2-3` with vertex 4 hanging off vertex 0.
    pub fn c4_pendant() -> Graph {
        Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]).expect("c4 pendant")
    }
}
