//! Generalized birthday problems: the chance that some `s` mutually
//! acquainted people share a birthday, i.e. that a uniform `c`-coloring of
//! the friendship network has a monochromatic `K_s`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::counting::count_copies;
use crate::error::{ChromaError, Result};
use crate::graph::{complete, Graph};
use crate::num::{big_pow, big_rational, binomial, inv_pow, rational_to_f64, serialize_big};

/// Explicit networks are counted directly up to these sizes.
pub const EXPLICIT_VERTEX_LIMIT: usize = 10_000;
pub const EXPLICIT_CLIQUE_LIMIT: usize = 6;

#[derive(Clone, Debug)]
pub enum Shape {
    /// Everyone knows everyone.
    Complete(u64),
    /// `types` groups of `per_type` people; acquaintances are exactly the
    /// pairs from different groups.
    Multipartite { types: u64, per_type: u64 },
    Explicit(Graph),
}

/// Shape families that can be grown for a group-size search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ShapeKind {
    Complete,
    Multipartite { types: u64 },
}

impl ShapeKind {
    pub fn with_size(self, n: u64) -> Shape {
        match self {
            ShapeKind::Complete => Shape::Complete(n),
            ShapeKind::Multipartite { types } => Shape::Multipartite { types, per_type: n },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchReport {
    /// `1 - exp(-N(K_s) / c^(s-1))`, a Poisson approximation.
    pub probability: f64,
    pub approximation: bool,
    #[serde(serialize_with = "serialize_big")]
    pub cliques: BigUint,
    /// `E T = N(K_s) / c^(s-1)`.
    pub expected_matches: f64,
    /// Exact value of the classical two-person problem, when it applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_classical: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn check(s: usize, c: u64) -> Result<()> {
    if s < 2 {
        return Err(ChromaError::InvalidParameter(format!("clique size {s} below 2")));
    }
    if c < 2 {
        return Err(ChromaError::InvalidParameter(format!("need at least 2 colors, got {c}")));
    }
    Ok(())
}

/// `N(K_s)` in a shape.
pub fn clique_count(shape: &Shape, s: usize) -> Result<BigUint> {
    Ok(match shape {
        Shape::Complete(n) => binomial(*n, s as u64),
        Shape::Multipartite { types, per_type } => binomial(*types, s as u64) * big_pow(*per_type, s),
        Shape::Explicit(g) => {
            if g.vertex_count() > EXPLICIT_VERTEX_LIMIT || s > EXPLICIT_CLIQUE_LIMIT {
                return Err(ChromaError::PatternTooLarge(format!(
                    "explicit networks support at most {EXPLICIT_VERTEX_LIMIT} vertices and cliques of size \
                     {EXPLICIT_CLIQUE_LIMIT}"
                )));
            }
            count_copies(&complete(s), g)?
        }
    })
}

/// Exact `1 - Π_{i<n} (1 - i/c)` for `n` people and `c` days.
pub fn classical_exact(n: u64, c: u64) -> f64 {
    if n > c {
        return 1.0;
    }
    let none: f64 = (0..n).map(|i| 1.0 - i as f64 / c as f64).product();
    1.0 - none
}

pub fn match_probability(shape: &Shape, s: usize, c: u64) -> Result<MatchReport> {
    check(s, c)?;
    let cliques = clique_count(shape, s)?;
    let expected: BigRational = big_rational(&cliques) * inv_pow(c, s - 1);
    let expected_matches = rational_to_f64(&expected);
    let probability = -(-expected_matches).exp_m1();
    let exact_classical = match shape {
        Shape::Complete(n) if s == 2 => Some(classical_exact(*n, c)),
        _ => None,
    };
    let warning = (cliques.is_zero() && matches!(shape, Shape::Explicit(_)))
        .then(|| format!("the network has no clique on {s} vertices"));
    Ok(MatchReport {
        probability,
        approximation: true,
        cliques,
        expected_matches,
        exact_classical,
        warning,
    })
}

/// Smallest size `n` whose match probability reaches `target`: the total
/// group size for complete shapes, the per-type size for multipartite ones.
pub fn min_group_size(kind: ShapeKind, s: usize, c: u64, target: f64) -> Result<u64> {
    check(s, c)?;
    if !(target > 0.0 && target < 1.0) {
        return Err(ChromaError::InvalidParameter(format!("target {target} outside (0, 1)")));
    }
    if let ShapeKind::Multipartite { types } = kind {
        if types < s as u64 {
            return Err(ChromaError::InvalidParameter(format!(
                "{types} groups cannot hold a clique on {s} vertices"
            )));
        }
    }
    let reaches = |n: u64| -> Result<bool> { Ok(match_probability(&kind.with_size(n), s, c)?.probability >= target) };
    search_monotone(reaches)
}

/// Smallest group with exact classical match probability at least `target`.
pub fn min_group_size_classical(c: u64, target: f64) -> Result<u64> {
    check(2, c)?;
    if !(target > 0.0 && target < 1.0) {
        return Err(ChromaError::InvalidParameter(format!("target {target} outside (0, 1)")));
    }
    search_monotone(|n| Ok(classical_exact(n, c) >= target))
}

fn search_monotone(reaches: impl Fn(u64) -> Result<bool>) -> Result<u64> {
    let mut hi = 1u64;
    while !reaches(hi)? {
        hi = hi
            .checked_mul(2)
            .ok_or_else(|| ChromaError::InvalidParameter("target is not reachable".into()))?;
    }
    let mut lo = hi / 2;
    // invariant: reaches(hi) and (lo == 0 or !reaches(lo))
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Expected matches as a float, for tables.
pub fn expected_matches(shape: &Shape, s: usize, c: u64) -> Result<f64> {
    let cliques = clique_count(shape, s)?;
    Ok(cliques.to_f64().unwrap_or(f64::INFINITY) / (c as f64).powi(s as i32 - 1))
}
