//! Canonical forms and automorphism groups of small pattern graphs.
//!
//! Canonical labeling is individualization-refinement: colour refinement to
//! an equitable partition, then branch on the first smallest non-singleton
//! cell. Leaves are compared by their relabeled adjacency matrix and the
//! largest one wins. Automorphisms discovered at equal leaves prune sibling
//! branches that lie in the same orbit of the prefix stabilizer.

use std::fmt;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::graph::Graph;

/// Byte string identifying an isomorphism class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

/// Stable colour refinement. Colours are ranks of (old colour, sorted
/// neighbour colours) signatures, so the result is isomorphism-invariant.
fn refine(g: &Graph, colors: &mut [usize]) {
    let n = colors.len();
    let mut cells = count_cells(colors);
    loop {
        let mut sigs: Vec<(usize, Vec<usize>, usize)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| colors[w as usize]).collect();
                nb.sort_unstable();
                (colors[v], nb, v)
            })
            .collect();
        sigs.sort_unstable();
        let mut rank = 0;
        for i in 0..n {
            if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                rank += 1;
            }
            colors[sigs[i].2] = rank;
        }
        let next = rank + 1;
        if next == cells {
            return;
        }
        cells = next;
    }
}

fn count_cells(colors: &[usize]) -> usize {
    let mut c: Vec<usize> = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Colouring after refinement from the uniform partition.
pub fn equitable_colors(g: &Graph) -> Vec<usize> {
    let mut colors = vec![0; g.vertex_count()];
    refine(g, &mut colors);
    colors
}

struct Search<'a> {
    g: &'a Graph,
    first: Option<(Vec<u64>, Vec<usize>)>,
    best: Option<(Vec<u64>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

fn certificate(g: &Graph, label: &[usize]) -> Vec<u64> {
    let n = g.vertex_count();
    let words = n.div_ceil(64).max(1);
    let mut rows = vec![0u64; words * n];
    for (u, v) in g.edges() {
        let (a, b) = (label[u], label[v]);
        rows[a * words + (b >> 6)] |= 1 << (b & 63);
        rows[b * words + (a >> 6)] |= 1 << (a & 63);
    }
    rows
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

impl Search<'_> {
    fn visit(&mut self, colors: Vec<usize>, prefix: &mut Vec<usize>) {
        let n = colors.len();
        // colours are 0..cells after refinement; discrete means a labeling
        let cells = count_cells(&colors);
        if cells == n {
            let cert = certificate(self.g, &colors);
            self.leaf(cert, colors);
            return;
        }
        let mut sizes = vec![0usize; cells];
        for &c in &colors {
            sizes[c] += 1;
        }
        let target = (0..cells)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c))
            .expect("non-discrete partition has a non-singleton cell");
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.equivalent_to_explored(prefix, &explored, v) {
                continue;
            }
            explored.push(v);
            let mut child: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| 2 * c + usize::from(c == target && w != v))
                .collect();
            refine(self.g, &mut child);
            prefix.push(v);
            self.visit(child, prefix);
            prefix.pop();
        }
    }

    fn equivalent_to_explored(&self, prefix: &[usize], explored: &[usize], v: usize) -> bool {
        let n = self.g.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut any = false;
        for gamma in &self.automorphisms {
            if prefix.iter().all(|&p| gamma[p] == p) {
                any = true;
                for x in 0..n {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, gamma[x]));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&w| find(&mut parent, w) == rv)
    }

    fn leaf(&mut self, cert: Vec<u64>, label: Vec<usize>) {
        for reference in [&self.first, &self.best].into_iter().flatten() {
            if reference.0 == cert {
                // reference labeling r and this labeling l give the same
                // relabeled graph, so r^{-1} . l is an automorphism
                let mut inv = vec![0; label.len()];
                for (v, &pos) in reference.1.iter().enumerate() {
                    inv[pos] = v;
                }
                let gamma: Vec<usize> = label.iter().map(|&pos| inv[pos]).collect();
                if gamma.iter().enumerate().any(|(i, &x)| i != x) {
                    self.automorphisms.push(gamma);
                }
                break;
            }
        }
        if self.first.is_none() {
            self.first = Some((cert.clone(), label.clone()));
        }
        match &self.best {
            Some((best, _)) if *best >= cert => {}
            _ => self.best = Some((cert, label)),
        }
    }
}

/// Canonical labeling: `labeling[v]` is the canonical position of `v`.
pub fn canonical_labeling(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    if n == 0 {
        return Vec::new();
    }
    let mut search = Search {
        g,
        first: None,
        best: None,
        automorphisms: Vec::new(),
    };
    search.visit(equitable_colors(g), &mut Vec::new());
    search.best.expect("search reaches at least one leaf").1
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.vertex_count();
    let label = canonical_labeling(g);
    let mut bytes = (n as u32).to_le_bytes().to_vec();
    let mut bits = 0u8;
    let mut filled = 0;
    let mut relabeled = vec![false; n * n];
    for (u, v) in g.edges() {
        relabeled[label[u] * n + label[v]] = true;
        relabeled[label[v] * n + label[u]] = true;
    }
    for i in 0..n {
        for j in i + 1..n {
            bits = (bits << 1) | u8::from(relabeled[i * n + j]);
            filled += 1;
            if filled == 8 {
                bytes.push(bits);
                bits = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        bytes.push(bits << (8 - filled));
    }
    CanonicalForm(bytes)
}

/// The graph relabeled into canonical order.
pub fn canonical_graph(g: &Graph) -> Graph {
    g.permuted(&canonical_labeling(g))
}

/// Visits every automorphism of `g`, found by backtracking over bijections
/// that respect the equitable colouring and preserve both edges and
/// non-edges against previously mapped vertices.
fn for_each_automorphism(g: &Graph, mut visit: impl FnMut(&[usize])) {
    let n = g.vertex_count();
    if n == 0 {
        visit(&[]);
        return;
    }
    let colors = equitable_colors(g);
    // BFS order so every vertex after the first of its component has a mapped neighbour
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in g.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    order.push(w as usize);
                }
            }
        }
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        g: &Graph,
        colors: &[usize],
        order: &[usize],
        depth: usize,
        image: &mut [usize],
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if depth == order.len() {
            visit(image);
            return;
        }
        let v = order[depth];
        for x in 0..g.vertex_count() {
            if used[x] || colors[x] != colors[v] {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&u| g.has_edge(u, v) == g.has_edge(image[u], x));
            if !consistent {
                continue;
            }
            image[v] = x;
            used[x] = true;
            rec(g, colors, order, depth + 1, image, used, visit);
            used[x] = false;
            image[v] = usize::MAX;
        }
    }
    rec(g, &colors, &order, 0, &mut image, &mut used, &mut visit);
}

/// All automorphisms as permutations (`gamma[v]` is the image of `v`).
pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_automorphism(g, |p| out.push(p.to_vec()));
    out
}

/// `|Aut(g)|` by exhaustive search.
pub fn automorphism_count(g: &Graph) -> BigUint {
    let mut count = 0u64;
    for_each_automorphism(g, |_| count += 1);
    BigUint::from(count)
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && canonical_form(a) == canonical_form(b)
}

/// Symmetry-breaking constraints `(v, w)`, read as "image of `v` precedes
/// image of `w`". Homomorphisms satisfying all of them contain exactly one
/// representative per copy of the pattern.
pub fn symmetry_breaking_constraints(g: &Graph) -> Vec<(usize, usize)> {
    let mut group = automorphisms(g);
    let mut constraints = Vec::new();
    for v in 0..g.vertex_count() {
        let mut orbit: Vec<usize> = group.iter().map(|gamma| gamma[v]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        if orbit.len() > 1 {
            constraints.extend(orbit.into_iter().filter(|&w| w != v).map(|w| (v, w)));
            group.retain(|gamma| gamma[v] == v);
        }
    }
    constraints
}
