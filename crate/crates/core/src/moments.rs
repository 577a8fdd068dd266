//! Exact mean and variance of `T(h, g)` under a uniform `c`-coloring, and an
//! exhaustive distribution oracle for small hosts.
//!
//! Two copies are independent unless they share at least two vertices, so
//! the variance splits into the single-copy part `r1` and a sum over the
//! overlap sizes `t`, each weighted by the ordered pairs sharing exactly `t`
//! vertices.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::counting::{count_copies, enumerate_copies, overlap_profile, CopyList, DEFAULT_COPY_CAP};
use crate::error::{ChromaError, Result};
use crate::graph::Graph;
use crate::num::{big_pow, big_rational, inv_pow, rational_to_f64, serialize_big};

fn check_colors(c: u64, min: u64) -> Result<()> {
    if c < min {
        return Err(ChromaError::InvalidParameter(format!("need at least {min} colors, got {c}")));
    }
    Ok(())
}

/// `E T(h, g) = N(h, g) / c^(|V(h)| - 1)`, exactly.
pub fn exact_mean(h: &Graph, g: &Graph, c: u64) -> Result<BigRational> {
    check_colors(c, 1)?;
    let copies = count_copies(h, g)?;
    Ok(big_rational(&copies) * inv_pow(c, h.vertex_count().saturating_sub(1)))
}

pub fn mean_t(h: &Graph, g: &Graph, c: u64) -> Result<f64> {
    Ok(rational_to_f64(&exact_mean(h, g, c)?))
}

/// Exact variance decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMoments {
    pub copies: BigUint,
    pub mean: BigRational,
    pub r1: BigRational,
    /// `t` → (`|K(t, h, g)|`, its contribution to `r2`).
    pub overlaps: BTreeMap<usize, (BigUint, BigRational)>,
    pub r2: BigRational,
    pub variance: BigRational,
}

/// Moments from a precomputed copy list.
pub fn exact_moments_from(h: &Graph, copies: &CopyList, c: u64) -> Result<ExactMoments> {
    check_colors(c, 1)?;
    let s = h.vertex_count();
    let count = BigUint::from(copies.len());
    let one = BigRational::one();
    let mean = big_rational(&count) * inv_pow(c, s.saturating_sub(1));
    let r1 = &mean * (&one - inv_pow(c, s.saturating_sub(1)));
    let mut overlaps = BTreeMap::new();
    let mut r2 = BigRational::zero();
    for (t, pairs) in overlap_profile(copies) {
        let weight = inv_pow(c, 2 * s - t - 1) * (&one - inv_pow(c, t - 1));
        let term = big_rational(&pairs) * weight;
        r2 += &term;
        overlaps.insert(t, (pairs, term));
    }
    let variance = &r1 + &r2;
    Ok(ExactMoments {
        copies: count,
        mean,
        r1,
        overlaps,
        r2,
        variance,
    })
}

pub fn exact_moments(h: &Graph, g: &Graph, c: u64) -> Result<ExactMoments> {
    check_colors(c, 2)?;
    let copies = enumerate_copies(h, g, DEFAULT_COPY_CAP)?;
    exact_moments_from(h, &copies, c)
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapTerm {
    #[serde(serialize_with = "serialize_big")]
    pub count: BigUint,
    pub contribution: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub mean: f64,
    pub variance: f64,
    pub r1: f64,
    pub r2: f64,
    pub per_t_overlap: BTreeMap<usize, OverlapTerm>,
    #[serde(serialize_with = "serialize_big")]
    pub copies: BigUint,
    pub colors: u64,
}

impl From<(&ExactMoments, u64)> for MomentReport {
    fn from((m, colors): (&ExactMoments, u64)) -> Self {
        MomentReport {
            mean: rational_to_f64(&m.mean),
            variance: rational_to_f64(&m.variance),
            r1: rational_to_f64(&m.r1),
            r2: rational_to_f64(&m.r2),
            per_t_overlap: m
                .overlaps
                .iter()
                .map(|(&t, (count, term))| {
                    let term = OverlapTerm {
                        count: count.clone(),
                        contribution: rational_to_f64(term),
                    };
                    (t, term)
                })
                .collect(),
            copies: m.copies.clone(),
            colors,
        }
    }
}

pub fn variance_t(h: &Graph, g: &Graph, c: u64) -> Result<MomentReport> {
    Ok(MomentReport::from((&exact_moments(h, g, c)?, c)))
}

/// Probability mass function on the nonnegative integers, possibly
/// truncated, with the mass beyond the truncation kept in `tail`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Pmf {
    /// Increasing values with their probabilities.
    pub points: Vec<(u64, f64)>,
    pub tail: f64,
}

impl Pmf {
    pub fn from_points(points: impl IntoIterator<Item = (u64, f64)>, tail: f64) -> Self {
        let mut map: BTreeMap<u64, f64> = BTreeMap::new();
        for (v, p) in points {
            *map.entry(v).or_default() += p;
        }
        Pmf {
            points: map.into_iter().collect(),
            tail,
        }
    }

    pub fn probability(&self, v: u64) -> f64 {
        self.points
            .binary_search_by_key(&v, |&(x, _)| x)
            .map_or(0.0, |i| self.points[i].1)
    }

    /// Total listed mass, excluding the tail.
    pub fn mass(&self) -> f64 {
        self.points.iter().map(|&(_, p)| p).sum()
    }

    pub fn mean(&self) -> f64 {
        self.points.iter().map(|&(v, p)| v as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.points.iter().map(|&(v, p)| (v as f64 - mean).powi(2) * p).sum()
    }
}

impl Serialize for Pmf {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.points.len()))?;
        for point in &self.points {
            seq.serialize_element(point)?;
        }
        seq.end()
    }
}

pub const STATE_SPACE_LIMIT: u64 = 100_000_000;
const COLORING_BLOCK: u64 = 1 << 14;

/// Law of `T` over all `c^|V(g)|` colorings, as integer counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution {
    /// Value → number of colorings attaining it.
    pub counts: BTreeMap<u64, u64>,
    pub colorings: u64,
}

impl ExactDistribution {
    pub fn probability(&self, v: u64) -> BigRational {
        let k = self.counts.get(&v).copied().unwrap_or(0);
        BigRational::new(k.into(), self.colorings.into())
    }

    pub fn mean(&self) -> BigRational {
        let total: u128 = self.counts.iter().map(|(&v, &k)| v as u128 * k as u128).sum();
        BigRational::new(total.into(), self.colorings.into())
    }

    pub fn variance(&self) -> BigRational {
        let second: BigUint = self
            .counts
            .iter()
            .map(|(&v, &k)| BigUint::from(v) * v * k)
            .sum();
        let mean = self.mean();
        BigRational::new(second.into(), self.colorings.into()) - &mean * &mean
    }

    pub fn pmf(&self) -> Pmf {
        let total = self.colorings as f64;
        Pmf::from_points(self.counts.iter().map(|(&v, &k)| (v, k as f64 / total)), 0.0)
    }
}

/// Number of copies in `copies` whose vertices share one color.
pub(crate) fn monochromatic(copies: &CopyList, colors: &[u32]) -> u64 {
    copies
        .iter()
        .filter(|set| {
            let first = colors[set[0] as usize];
            set[1..].iter().all(|&v| colors[v as usize] == first)
        })
        .count() as u64
}

/// Exhaustive enumeration of every coloring of `g`.
pub fn exact_distribution_t(h: &Graph, g: &Graph, c: u64) -> Result<ExactDistribution> {
    check_colors(c, 1)?;
    let n = g.vertex_count();
    let states = big_pow(c, n);
    let colorings = match states.to_u64() {
        Some(v) if v <= STATE_SPACE_LIMIT => v,
        _ => {
            return Err(ChromaError::StateSpaceTooLarge {
                states: states.to_string(),
                limit: STATE_SPACE_LIMIT,
            })
        }
    };
    if h.vertex_count() == 0 {
        return Err(ChromaError::InvalidParameter("pattern has no vertices".into()));
    }
    let copies = enumerate_copies(h, g, DEFAULT_COPY_CAP)?;
    let max_t = copies.len();
    let blocks = colorings.div_ceil(COLORING_BLOCK);
    let hist = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let start = b * COLORING_BLOCK;
            let end = (start + COLORING_BLOCK).min(colorings);
            let mut colors = vec![0u32; n];
            let mut rest = start;
            for slot in colors.iter_mut() {
                *slot = (rest % c) as u32;
                rest /= c;
            }
            let mut hist = vec![0u64; max_t + 1];
            for _ in start..end {
                hist[monochromatic(&copies, &colors) as usize] += 1;
                // odometer step, vertex 0 fastest
                for slot in colors.iter_mut() {
                    *slot += 1;
                    if u64::from(*slot) < c {
                        break;
                    }
                    *slot = 0;
                }
            }
            hist
        })
        .reduce(
            || vec![0u64; max_t + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let counts = hist
        .into_iter()
        .enumerate()
        .filter(|&(_, k)| k > 0)
        .map(|(v, k)| (v as u64, k))
        .collect();
    Ok(ExactDistribution { counts, colorings })
}
