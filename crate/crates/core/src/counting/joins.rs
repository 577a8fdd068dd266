//! Pattern-side enumerations: `t`-joins of two copies of a pattern and the
//! supergraph classes on the pattern's own vertex set.

use std::collections::{BTreeMap, HashMap};

use num_traits::ToPrimitive;
use serde::Serialize;

use super::count_copies;
use crate::canon::{canonical_form, canonical_graph, CanonicalForm};
use crate::error::{ChromaError, Result};
use crate::graph::{complete, Graph};

/// Union of `h` and a second copy `h'` in which vertex `j2[a]` of `h'` is
/// identified with vertex `j1[a]` of `h`. The non-pivot vertices of `h'`
/// get labels `|V(h)|..`, in increasing order of their label in `h`.
pub fn t_join(h: &Graph, j1: &[usize], j2: &[usize]) -> Result<Graph> {
    let s = h.vertex_count();
    let t = j1.len();
    if j2.len() != t {
        return Err(ChromaError::InvalidParameter(format!(
            "pivot tuples have lengths {t} and {}",
            j2.len()
        )));
    }
    if t == 0 || t > s {
        return Err(ChromaError::InvalidParameter(format!("join size {t} outside [1, {s}]")));
    }
    for tuple in [j1, j2] {
        if tuple.iter().any(|&v| v >= s) {
            return Err(ChromaError::InvalidParameter(format!("pivot outside 0..{s}: {tuple:?}")));
        }
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != t {
            return Err(ChromaError::InvalidParameter(format!("repeated pivot in {tuple:?}")));
        }
    }
    let mut map = vec![usize::MAX; s];
    for (&a, &b) in j1.iter().zip(j2) {
        map[b] = a;
    }
    let mut next = s;
    for slot in map.iter_mut().filter(|m| **m == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let edges = h.edges().chain(h.edges().map(|(u, v)| (map[u], map[v])));
    Graph::from_edges(2 * s - t, edges)
}

fn ordered_tuples(s: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(s: usize, t: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for v in 0..s {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(s, t, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(s, t, &mut Vec::new(), &mut vec![false; s], &mut out);
    out
}

/// Isomorphism classes of `t`-joins for `t in 2..|V(h)|`.
#[derive(Clone, Debug, Serialize)]
pub struct JoinCatalog {
    #[serde(skip)]
    pub pattern: Graph,
    /// `t` → canonical form → canonical representative.
    #[serde(serialize_with = "serialize_joins")]
    pub joins: BTreeMap<usize, BTreeMap<CanonicalForm, Graph>>,
}

fn serialize_joins<S: serde::Serializer>(
    joins: &BTreeMap<usize, BTreeMap<CanonicalForm, Graph>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(None)?;
    for (t, classes) in joins {
        for (form, g) in classes {
            seq.serialize_element(&GraphSummary::new(Some(*t), form, g))?;
        }
    }
    seq.end()
}

/// JSON-friendly view of a class representative.
#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub canonical_form: String,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphSummary {
    pub fn new(t: Option<usize>, form: &CanonicalForm, g: &Graph) -> Self {
        GraphSummary {
            t,
            canonical_form: form.to_hex(),
            vertices: g.vertex_count(),
            edges: g.edges().collect(),
        }
    }
}

impl JoinCatalog {
    pub fn classes(&self, t: usize) -> impl Iterator<Item = &Graph> {
        self.joins.get(&t).into_iter().flat_map(|m| m.values())
    }

    pub fn contains(&self, t: usize, g: &Graph) -> bool {
        self.joins.get(&t).is_some_and(|m| m.contains_key(&canonical_form(g)))
    }

    pub fn len(&self) -> usize {
        self.joins.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Every `t`-join of `h` over all ordered pivot pairs, deduplicated up to
/// isomorphism. Full identifications (`t = |V(h)|`) are not included.
pub fn enumerate_t_joins(h: &Graph) -> Result<JoinCatalog> {
    let s = h.vertex_count();
    if s < 3 {
        return Err(ChromaError::InvalidParameter(format!(
            "join catalog needs a pattern with at least 3 vertices, got {s}"
        )));
    }
    let mut joins = BTreeMap::new();
    for t in 2..s {
        let tuples = ordered_tuples(s, t);
        let mut classes = BTreeMap::new();
        for j1 in &tuples {
            for j2 in &tuples {
                let joined = t_join(h, j1, j2)?;
                classes
                    .entry(canonical_form(&joined))
                    .or_insert_with(|| canonical_graph(&joined));
            }
        }
        joins.insert(t, classes);
    }
    Ok(JoinCatalog {
        pattern: h.clone(),
        joins,
    })
}

/// Isomorphism classes `F ⊇ h` with `|V(F)| = |V(h)|`, grouped by `N(h, F)`.
#[derive(Clone, Debug)]
pub struct SupergraphClasses {
    pub pattern: Graph,
    classes: BTreeMap<usize, Vec<Graph>>,
}

impl SupergraphClasses {
    /// `k` → representatives, with an entry (possibly empty) for every
    /// `k in 1..=N(h, K_|V(h)|)`.
    pub fn by_copies(&self) -> &BTreeMap<usize, Vec<Graph>> {
        &self.classes
    }

    pub fn class(&self, k: usize) -> &[Graph] {
        self.classes.get(&k).map_or(&[], Vec::as_slice)
    }

    pub fn max_copies(&self) -> usize {
        self.classes.keys().next_back().copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Graph)> {
        self.classes.iter().flat_map(|(&k, gs)| gs.iter().map(move |g| (k, g)))
    }
}

pub const SUPERGRAPH_VERTEX_LIMIT: usize = 10;
const SUPERGRAPH_CLASS_LIMIT: usize = 500_000;

/// Grows supergraphs one edge at a time from `h`, keeping one labeled
/// representative (containing `h` on its own labels) per isomorphism class.
pub fn enumerate_supergraph_classes(h: &Graph) -> Result<SupergraphClasses> {
    let s = h.vertex_count();
    if s > SUPERGRAPH_VERTEX_LIMIT {
        return Err(ChromaError::PatternTooLarge(format!(
            "supergraph enumeration supports at most {SUPERGRAPH_VERTEX_LIMIT} vertices, got {s}"
        )));
    }
    let mut seen: HashMap<CanonicalForm, Graph> = HashMap::new();
    seen.insert(canonical_form(h), h.clone());
    let mut level = vec![h.clone()];
    while !level.is_empty() {
        let mut next = Vec::new();
        for g in &level {
            for (u, v) in g.non_edges() {
                let bigger = g.with_edges([(u, v)])?;
                let form = canonical_form(&bigger);
                if !seen.contains_key(&form) {
                    seen.insert(form, bigger.clone());
                    next.push(bigger);
                }
            }
        }
        if seen.len() > SUPERGRAPH_CLASS_LIMIT {
            return Err(ChromaError::PatternTooLarge(format!(
                "more than {SUPERGRAPH_CLASS_LIMIT} supergraph classes"
            )));
        }
        level = next;
    }
    let max_k = count_copies(h, &complete(s))?
        .to_usize()
        .ok_or_else(|| ChromaError::PatternTooLarge("copy count overflow".into()))?;
    let mut classes: BTreeMap<usize, Vec<Graph>> = (1..=max_k).map(|k| (k, Vec::new())).collect();
    let mut sorted: Vec<(CanonicalForm, Graph)> = seen.into_iter().collect();
    sorted.sort_by(|a, b| (a.1.edge_count(), &a.0).cmp(&(b.1.edge_count(), &b.0)));
    for (_, f) in sorted {
        let k = count_copies(h, &f)?
            .to_usize()
            .ok_or_else(|| ChromaError::PatternTooLarge("copy count overflow".into()))?;
        classes.entry(k).or_default().push(f);
    }
    Ok(SupergraphClasses {
        pattern: h.clone(),
        classes,
    })
}
