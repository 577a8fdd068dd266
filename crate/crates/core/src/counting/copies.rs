use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::joins::enumerate_supergraph_classes;
use super::search::{enumerate_embeddings, Mode, RankedHost};
use super::{count_copies, count_induced_in};
use crate::canon::symmetry_breaking_constraints;
use crate::error::{ChromaError, Result};
use crate::graph::Graph;

pub const DEFAULT_COPY_CAP: usize = 10_000_000;

/// Vertex sets of all copies of a pattern in a host, one entry per copy
/// (copies sharing a vertex set appear separately). Each set is sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyList {
    pattern_size: usize,
    flat: Vec<u32>,
}

impl CopyList {
    pub fn pattern_size(&self) -> usize {
        self.pattern_size
    }

    pub fn len(&self) -> usize {
        if self.pattern_size == 0 {
            0
        } else {
            self.flat.len() / self.pattern_size
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, u32> {
        self.flat.chunks_exact(self.pattern_size.max(1))
    }

    /// Wraps sorted vertex sets laid end to end.
    pub(crate) fn from_flat(pattern_size: usize, flat: Vec<u32>) -> Self {
        CopyList { pattern_size, flat }
    }

    /// Copies grouped by vertex set: `D_k` sizes read straight off the list.
    pub fn dk_histogram(&self) -> BTreeMap<usize, u64> {
        let mut sets: Vec<&[u32]> = self.iter().collect();
        sets.sort_unstable();
        let mut out = BTreeMap::new();
        let mut i = 0;
        while i < sets.len() {
            let mut j = i;
            while j < sets.len() && sets[j] == sets[i] {
                j += 1;
            }
            *out.entry(j - i).or_insert(0) += 1;
            i = j;
        }
        out
    }
}

/// Lists the copies of `h` in `g`, refusing when there are more than `cap`.
pub fn enumerate_copies(h: &Graph, g: &Graph, cap: usize) -> Result<CopyList> {
    let total = count_copies(h, g)?;
    if total > BigUint::from(cap) {
        return Err(ChromaError::CopyCapExceeded {
            copies: total.to_string(),
            cap,
        });
    }
    let host = RankedHost::new(g);
    let constraints = symmetry_breaking_constraints(h);
    let mode = Mode {
        induced: false,
        one_per_copy: true,
    };
    let s = h.vertex_count();
    let mut flat = enumerate_embeddings(h, &host, mode, &constraints);
    for set in flat.chunks_exact_mut(s.max(1)) {
        set.sort_unstable();
    }
    let list = CopyList { pattern_size: s, flat };
    if BigUint::from(list.len()) != total {
        return Err(ChromaError::Internal(format!(
            "enumerated {} copies but counted {total}",
            list.len()
        )));
    }
    Ok(list)
}

fn pack(values: &[u32]) -> u128 {
    values.iter().fold(0u128, |acc, &v| (acc << 32) | u128::from(v))
}

fn for_each_subset(set: &[u32], j: usize, f: &mut impl FnMut(&[u32])) {
    let mut idx: Vec<usize> = (0..j).collect();
    let s = set.len();
    let mut buf = vec![0u32; j];
    loop {
        for (b, &i) in buf.iter_mut().zip(&idx) {
            *b = set[i];
        }
        f(&buf);
        // advance the rightmost index that still has room
        let Some(k) = (0..j).rev().find(|&k| idx[k] < k + s - j) else {
            return;
        };
        idx[k] += 1;
        for m in k + 1..j {
            idx[m] = idx[m - 1] + 1;
        }
    }
}

/// Ordered pairs of distinct copies that both contain some common `j`-set,
/// counted with multiplicity over `j`-sets.
fn pairs_containing(copies: &CopyList, j: usize) -> u128 {
    fn runs<T: Ord>(mut keys: Vec<T>) -> u128 {
        keys.sort_unstable();
        let mut total = 0u128;
        let mut i = 0;
        while i < keys.len() {
            let mut k = i;
            while k < keys.len() && keys[k] == keys[i] {
                k += 1;
            }
            let c = (k - i) as u128;
            total += c * (c - 1);
            i = k;
        }
        total
    }
    if j <= 4 {
        let mut keys = Vec::new();
        for set in copies.iter() {
            for_each_subset(set, j, &mut |sub| keys.push(pack(sub)));
        }
        runs(keys)
    } else {
        let mut keys: Vec<Box<[u32]>> = Vec::new();
        for set in copies.iter() {
            for_each_subset(set, j, &mut |sub| keys.push(sub.into()));
        }
        runs(keys)
    }
}

fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// `|K(t, h, g)|` for every `t in 2..=|V(h)|`, from one copy list. Pairs
/// sharing at least a given `j`-set are counted by hashing `j`-subsets; the
/// exact-intersection counts follow by binomial inversion.
pub fn overlap_profile(copies: &CopyList) -> BTreeMap<usize, BigUint> {
    let s = copies.pattern_size();
    let mut out = BTreeMap::new();
    if s < 2 {
        return out;
    }
    let at_least: Vec<i128> = (0..=s)
        .map(|j| if j < 2 { 0 } else { pairs_containing(copies, j) as i128 })
        .collect();
    for t in 2..=s {
        let mut exact = 0i128;
        for (j, &p) in at_least.iter().enumerate().skip(t) {
            let term = binomial(j, t) * p;
            if (j - t) % 2 == 0 {
                exact += term;
            } else {
                exact -= term;
            }
        }
        let exact = BigInt::from(exact);
        out.insert(t, exact.to_biguint().expect("pair counts are nonnegative"));
    }
    out
}

/// `|K(t, h, g)|` for a single `t`.
pub fn count_overlap_pairs(h: &Graph, g: &Graph, t: usize, cap: usize) -> Result<BigUint> {
    let s = h.vertex_count();
    if t < 2 || t > s {
        return Err(ChromaError::InvalidParameter(format!("overlap size {t} outside [2, {s}]")));
    }
    let copies = enumerate_copies(h, g, cap)?;
    Ok(overlap_profile(&copies).remove(&t).unwrap_or_default())
}

/// `|D_k(h, g)|` for `k in 1..=N(h, K_|V(h)|)`, summing induced counts over
/// the supergraph classes with exactly `k` copies of `h`.
pub fn count_dk(h: &Graph, g: &Graph) -> Result<BTreeMap<usize, BigUint>> {
    let classes = enumerate_supergraph_classes(h)?;
    let host = RankedHost::new(g);
    let mut out = BTreeMap::new();
    for (&k, reps) in classes.by_copies() {
        let mut total = BigUint::zero();
        for f in reps {
            total += count_induced_in(f, &host);
        }
        out.insert(k, total);
    }
    Ok(out)
}
