//! Seeded Monte Carlo over uniform colorings, Poisson-mixture pmfs and
//! total-variation distances.
//!
//! Replicate `i` of a run seeded with `seed` draws from its own ChaCha8
//! stream `(seed, i)`, so histograms do not depend on how replicates are
//! scheduled across threads.

use std::collections::{BTreeMap, HashMap};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{count_copies, enumerate_copies, CopyCounter, CopyList, DEFAULT_COPY_CAP};
use crate::error::{ChromaError, Result};
use crate::graph::Graph;
use crate::limit::{edge_probability, required_colors, PoissonMixture};
use crate::moments::{monochromatic, Pmf};
use crate::num::{format_rational, poisson_pmf, Rational};

/// Per-replicate generator.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Colors in `1..=c`, one per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub colors: Vec<u32>,
    pub c: u32,
}

pub fn sample_coloring<R: Rng>(n: usize, c: u32, rng: &mut R) -> Result<Coloring> {
    if c == 0 {
        return Err(ChromaError::InvalidParameter("need at least one color".into()));
    }
    let colors = (0..n).map(|_| rng.gen_range(1..=c)).collect();
    Ok(Coloring { colors, c })
}

/// Number of listed copies whose vertices share one color.
pub fn evaluate_t(copies: &CopyList, coloring: &Coloring) -> u64 {
    if copies.pattern_size() == 0 {
        return copies.len() as u64;
    }
    monochromatic(copies, &coloring.colors)
}

/// Evaluates `T` for one host under many colorings.
///
/// Copies are listed when there are at most `cap` of them. Otherwise, for a
/// connected pattern, components are listed while the cap allows and the
/// remaining components are handled per coloring by counting copies among
/// their monochromatic edges: a connected copy is monochromatic exactly
/// when all of its edges are.
pub struct Evaluator {
    listed: CopyList,
    scanned: Vec<(u32, u32)>,
    counter: CopyCounter,
}

impl Evaluator {
    pub fn new(h: &Graph, g: &Graph, cap: usize) -> Result<Self> {
        let counter = CopyCounter::new(h);
        match enumerate_copies(h, g, cap) {
            Ok(listed) => Ok(Evaluator {
                listed,
                scanned: Vec::new(),
                counter,
            }),
            Err(err @ ChromaError::CopyCapExceeded { .. }) => {
                if !h.is_connected() || h.edge_count() == 0 {
                    return Err(err);
                }
                Self::hybrid(h, g, cap, counter)
            }
            Err(err) => Err(err),
        }
    }

    fn hybrid(h: &Graph, g: &Graph, cap: usize, counter: CopyCounter) -> Result<Self> {
        let mut budget = cap as u128;
        let mut listed = Vec::new();
        let mut scanned = Vec::new();
        for comp in g.components() {
            if comp.len() < h.vertex_count() {
                continue;
            }
            let sub = g.induced_unchecked(&comp);
            let count = count_copies(h, &sub)?.to_u128().unwrap_or(u128::MAX);
            if count <= budget {
                budget -= count;
                listed.extend(comp);
            } else {
                for (u, v) in sub.edges() {
                    scanned.push((comp[u] as u32, comp[v] as u32));
                }
            }
        }
        // one enumeration over every listed component together
        listed.sort_unstable();
        let list = enumerate_copies(h, &g.induced_unchecked(&listed), cap)?;
        let mut flat = Vec::with_capacity(list.len() * h.vertex_count());
        for set in list.iter() {
            flat.extend(set.iter().map(|&v| listed[v as usize] as u32));
        }
        Ok(Evaluator {
            listed: CopyList::from_flat(h.vertex_count(), flat),
            scanned,
            counter,
        })
    }

    /// Copies held in the explicit list.
    pub fn listed_copies(&self) -> usize {
        self.listed.len()
    }

    /// Edges handled by per-coloring counting.
    pub fn scanned_edges(&self) -> usize {
        self.scanned.len()
    }

    pub fn evaluate(&self, coloring: &Coloring) -> u64 {
        let mut total = evaluate_t(&self.listed, coloring);
        if !self.scanned.is_empty() {
            let colors = &coloring.colors;
            let mono: Vec<(u32, u32)> = self
                .scanned
                .iter()
                .copied()
                .filter(|&(u, v)| colors[u as usize] == colors[v as usize])
                .collect();
            total += count_on_edges(&self.counter, &mono);
        }
        total
    }
}

/// Copies of the counter's pattern in the graph spanned by `edges`.
fn count_on_edges(counter: &CopyCounter, edges: &[(u32, u32)]) -> u64 {
    if edges.len() < counter.pattern().edge_count() {
        return 0;
    }
    let mut index: HashMap<u32, usize> = HashMap::with_capacity(edges.len());
    let mut local = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        let next = index.len();
        let a = *index.entry(u).or_insert(next);
        let next = index.len();
        let b = *index.entry(v).or_insert(next);
        local.push((a, b));
    }
    let g = Graph::from_edges(index.len(), local).expect("edges come from a simple graph");
    counter.count(&g) as u64
}

/// Histogram of `T` over independent replicates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    pub histogram: BTreeMap<u64, u64>,
    pub replicates: u64,
    pub seed: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub params: BTreeMap<String, String>,
}

impl EmpiricalDistribution {
    pub fn from_histogram(histogram: BTreeMap<u64, u64>, seed: u64, params: BTreeMap<String, String>) -> Self {
        let replicates: u64 = histogram.values().sum();
        let r = replicates as f64;
        let mean = histogram.iter().map(|(&v, &k)| v as f64 * k as f64).sum::<f64>() / r.max(1.0);
        let ss: f64 = histogram.iter().map(|(&v, &k)| (v as f64 - mean).powi(2) * k as f64).sum();
        let variance = if replicates > 1 { ss / (r - 1.0) } else { 0.0 };
        EmpiricalDistribution {
            histogram,
            replicates,
            seed,
            mean,
            variance,
            params,
        }
    }

    pub fn frequency(&self, v: u64) -> f64 {
        self.histogram.get(&v).copied().unwrap_or(0) as f64 / self.replicates as f64
    }

    pub fn max_value(&self) -> u64 {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }

    /// Fraction of replicates with `T > 0`.
    pub fn positive_fraction(&self) -> f64 {
        1.0 - self.frequency(0)
    }
}

const REPLICATE_BLOCK: u64 = 256;

fn run_replicates<F>(replicates: u64, f: F) -> BTreeMap<u64, u64>
where
    F: Fn(u64) -> u64 + Sync,
{
    (0..replicates.div_ceil(REPLICATE_BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut hist = BTreeMap::new();
            for i in b * REPLICATE_BLOCK..((b + 1) * REPLICATE_BLOCK).min(replicates) {
                *hist.entry(f(i)).or_insert(0u64) += 1;
            }
            hist
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (v, k) in b {
                *a.entry(v).or_insert(0) += k;
            }
            a
        })
}

fn check_replicates(replicates: u64) -> Result<()> {
    if replicates == 0 {
        return Err(ChromaError::InvalidParameter("need at least one replicate".into()));
    }
    Ok(())
}

pub fn monte_carlo(h: &Graph, g: &Graph, c: u32, replicates: u64, seed: u64) -> Result<EmpiricalDistribution> {
    monte_carlo_capped(h, g, c, replicates, seed, DEFAULT_COPY_CAP)
}

/// [`monte_carlo`] with an explicit copy-list cap.
pub fn monte_carlo_capped(
    h: &Graph,
    g: &Graph,
    c: u32,
    replicates: u64,
    seed: u64,
    cap: usize,
) -> Result<EmpiricalDistribution> {
    check_replicates(replicates)?;
    if c == 0 {
        return Err(ChromaError::InvalidParameter("need at least one color".into()));
    }
    let evaluator = Evaluator::new(h, g, cap)?;
    let n = g.vertex_count();
    let hist = run_replicates(replicates, |i| {
        let mut rng = replicate_rng(seed, i);
        let coloring = sample_coloring(n, c, &mut rng).expect("c checked above");
        evaluator.evaluate(&coloring)
    });
    let params = BTreeMap::from([
        ("host_vertices".to_string(), n.to_string()),
        ("host_edges".to_string(), g.edge_count().to_string()),
        ("pattern_vertices".to_string(), h.vertex_count().to_string()),
        ("pattern_edges".to_string(), h.edge_count().to_string()),
        ("colors".to_string(), c.to_string()),
    ]);
    Ok(EmpiricalDistribution::from_histogram(hist, seed, params))
}

/// Calls `f(i, j)` for each pair `i < j` of `0..m` kept with probability
/// `p`, skipping geometrically between kept pairs.
fn sample_pairs<R: Rng>(m: usize, p: f64, rng: &mut R, mut f: impl FnMut(usize, usize)) {
    if m < 2 || p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        for j in 1..m {
            for i in 0..j {
                f(i, j);
            }
        }
        return;
    }
    let log_q = (1.0 - p).ln();
    // pairs (i, j) with i < j, walked column by column
    let mut j = 1usize;
    let mut i: isize = -1;
    loop {
        let u: f64 = rng.gen();
        let skip = ((1.0 - u).ln() / log_q).floor();
        if skip >= (m * m) as f64 {
            return;
        }
        i += 1 + skip as isize;
        while j < m && i >= j as isize {
            i -= j as isize;
            j += 1;
        }
        if j >= m {
            return;
        }
        f(i as usize, j);
    }
}

/// Colors `G(n, κ n^-α)` with the color count that targets mean `λ`, fresh
/// host and coloring per replicate.
///
/// Only edges inside color classes can belong to a monochromatic copy, and
/// they are independent of the coloring, so each replicate draws the
/// coloring first and then samples edges within each class. This has the
/// same law of `T` as drawing the whole host.
pub fn monte_carlo_er(
    h: &Graph,
    n: u64,
    alpha: Rational,
    kappa: f64,
    lambda: f64,
    replicates: u64,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    check_replicates(replicates)?;
    if alpha < Rational::from_integer(0) {
        return Err(ChromaError::InvalidParameter(format!("alpha = {alpha} is negative")));
    }
    let p = edge_probability(n, alpha, kappa);
    if !(p > 0.0 && p <= 1.0) {
        return Err(ChromaError::InvalidParameter(format!("edge probability {p} outside (0, 1]")));
    }
    let choice = required_colors(h, n, p, lambda)?;
    let c = u32::try_from(choice.colors)
        .map_err(|_| ChromaError::InvalidParameter(format!("{} colors exceed the supported range", choice.colors)))?;
    let counter = CopyCounter::new(h);
    let size = n as usize;
    let hist = run_replicates(replicates, |i| {
        let mut rng = replicate_rng(seed, i);
        let coloring = sample_coloring(size, c, &mut rng).expect("c >= 2");
        let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (v, &col) in coloring.colors.iter().enumerate() {
            classes.entry(col).or_default().push(v);
        }
        let mut total = 0u64;
        for members in classes.values() {
            if members.len() < h.vertex_count() {
                continue;
            }
            let mut edges = Vec::new();
            sample_pairs(members.len(), p, &mut rng, |a, b| edges.push((a, b)));
            if edges.len() >= h.edge_count() {
                let g = Graph::from_edges(members.len(), edges).expect("pairs are distinct");
                total += counter.count(&g) as u64;
            }
        }
        total
    });
    let params = BTreeMap::from([
        ("n".to_string(), n.to_string()),
        ("alpha".to_string(), format_rational(&alpha)),
        ("kappa".to_string(), kappa.to_string()),
        ("lambda".to_string(), lambda.to_string()),
        ("edge_probability".to_string(), p.to_string()),
        ("colors".to_string(), choice.colors.to_string()),
        ("realized_lambda".to_string(), choice.realized_lambda.to_string()),
        ("pattern_vertices".to_string(), h.vertex_count().to_string()),
        ("pattern_edges".to_string(), h.edge_count().to_string()),
    ]);
    Ok(EmpiricalDistribution::from_histogram(hist, seed, params))
}

/// Per-component Poisson tail below which terms are dropped.
pub const MIXTURE_TAIL: f64 = 1e-12;

/// Pmf of `Σ k X_k` on `0..=upto`, by convolving the component pmfs.
pub fn mixture_pmf(m: &PoissonMixture, upto: u64) -> Pmf {
    let len = upto as usize + 1;
    let mut acc = vec![0.0f64; len];
    acc[0] = 1.0;
    for comp in &m.components {
        let k = comp.coefficient as usize;
        let mut terms = Vec::new();
        let mut cumulative = 0.0;
        let mut j = 0u64;
        while j as usize * k < len {
            let q = poisson_pmf(comp.rate, j);
            terms.push(q);
            cumulative += q;
            if j as f64 >= comp.rate && 1.0 - cumulative < MIXTURE_TAIL {
                break;
            }
            j += 1;
        }
        let mut next = vec![0.0f64; len];
        for (v, &a) in acc.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &q) in terms.iter().enumerate() {
                let w = v + j * k;
                if w >= len {
                    break;
                }
                next[w] += a * q;
            }
        }
        acc = next;
    }
    let mass: f64 = acc.iter().sum();
    let points = acc.into_iter().enumerate().filter(|&(_, p)| p > 0.0).map(|(v, p)| (v as u64, p));
    Pmf::from_points(points, (1.0 - mass).max(0.0))
}

/// `½ Σ_v |emp(v) - pmf(v)|` over both supports, plus the pmf's tail mass.
pub fn tv_distance(emp: &EmpiricalDistribution, pmf: &Pmf) -> f64 {
    let mut values: Vec<u64> = emp.histogram.keys().copied().collect();
    values.extend(pmf.points.iter().map(|&(v, _)| v));
    values.sort_unstable();
    values.dedup();
    let sum: f64 = values.iter().map(|&v| (emp.frequency(v) - pmf.probability(v)).abs()).sum();
    0.5 * sum + pmf.tail
}

/// Pmf of a mixture wide enough to cover an empirical histogram.
pub fn mixture_pmf_for(m: &PoissonMixture, emp: &EmpiricalDistribution) -> Pmf {
    let spread = m.mean() + 12.0 * m.variance().sqrt() + 20.0;
    mixture_pmf(m, emp.max_value().max(spread.ceil() as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_sampler_covers_all_pairs_at_p_one() {
        let mut seen = Vec::new();
        sample_pairs(4, 1.0, &mut replicate_rng(1, 0), |i, j| seen.push((i, j)));
        assert_eq!(seen.len(), 6);
        assert!(seen.iter().all(|&(i, j)| i < j && j < 4));
    }

    #[test]
    fn pair_sampler_density() {
        let m = 200;
        let p = 0.1;
        let mut total = 0usize;
        let mut rng = replicate_rng(7, 0);
        for _ in 0..50 {
            let mut seen = std::collections::HashSet::new();
            sample_pairs(m, p, &mut rng, |i, j| {
                assert!(i < j && j < m);
                assert!(seen.insert((i, j)));
                total += 1;
            });
        }
        let expected = 50.0 * p * (m * (m - 1) / 2) as f64;
        let sd = (expected * (1.0 - p)).sqrt();
        assert!((total as f64 - expected).abs() < 4.0 * sd, "{total} vs {expected}");
    }

    #[test]
    fn streams_differ_by_replicate() {
        let a: u64 = replicate_rng(3, 0).gen();
        let b: u64 = replicate_rng(3, 1).gen();
        assert_ne!(a, b);
        assert_eq!(a, replicate_rng(3, 0).gen::<u64>());
    }
}
