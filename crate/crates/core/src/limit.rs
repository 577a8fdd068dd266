//! Structural exponents, Erdős–Rényi regime classification and the
//! Poisson-mixture limit laws of `T`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::canon::{automorphism_count, canonical_form};
use crate::counting::{count_copies, count_dk, enumerate_supergraph_classes, enumerate_t_joins, GraphSummary};
use crate::error::{ChromaError, Result};
use crate::graph::Graph;
use crate::moments::{exact_moments, MomentReport};
use crate::num::{
    big_to_f64, rational_f64, rational_to_f64, serialize_big, serialize_opt_rational, serialize_rational, Rational,
};

/// Vertex-subset scans enumerate `2^s` subsets.
pub const EXPONENT_VERTEX_LIMIT: usize = 24;

fn check_pattern(h: &Graph) -> Result<()> {
    if h.edge_count() == 0 {
        return Err(ChromaError::InvalidParameter("pattern has no edges".into()));
    }
    if h.vertex_count() > EXPONENT_VERTEX_LIMIT {
        return Err(ChromaError::PatternTooLarge(format!(
            "exponent scans support at most {EXPONENT_VERTEX_LIMIT} vertices, got {}",
            h.vertex_count()
        )));
    }
    Ok(())
}

fn subset_vertices(mask: u32, s: usize) -> Vec<usize> {
    (0..s).filter(|&v| mask >> v & 1 == 1).collect()
}

fn induced_edge_count(h: &Graph, mask: u32) -> i64 {
    let s = h.vertex_count();
    (0..s)
        .filter(|&v| mask >> v & 1 == 1)
        .map(|v| h.neighbors(v).iter().filter(|&&w| w as usize > v && mask >> w & 1 == 1).count() as i64)
        .sum()
}

/// `m(h)`: the largest edge-to-vertex ratio over nonempty induced subgraphs.
pub fn density_exponent(h: &Graph) -> Result<Rational> {
    check_pattern(h)?;
    let s = h.vertex_count();
    let best = (1u32..1 << s)
        .map(|mask| Rational::new(induced_edge_count(h, mask), i64::from(mask.count_ones())))
        .max()
        .expect("at least one vertex");
    Ok(best)
}

pub fn edge_density(h: &Graph) -> Rational {
    Rational::new(h.edge_count() as i64, h.vertex_count().max(1) as i64)
}

pub fn is_balanced(h: &Graph) -> Result<bool> {
    Ok(density_exponent(h)? == edge_density(h))
}

/// Scaling exponent of one subgraph `(v1, e1)` of an `(s, e)` pattern, when
/// its denominator is positive.
pub(crate) fn gamma_term(s: i64, e: i64, v1: i64, e1: i64) -> Option<Rational> {
    let den = e1 * (s - 1) - e * (v1 - 1);
    (den > 0).then(|| Rational::new(s - v1, den))
}

/// `γ(h)` for a connected unbalanced pattern: the minimum scaling exponent
/// over proper connected induced subgraphs with a positive denominator.
pub fn gamma_exponent(h: &Graph) -> Result<Rational> {
    check_pattern(h)?;
    if !h.is_connected() {
        return Err(ChromaError::InvalidParameter("critical exponent needs a connected pattern".into()));
    }
    if is_balanced(h)? {
        return Err(ChromaError::InvalidParameter("critical exponent is defined for unbalanced patterns only".into()));
    }
    let s = h.vertex_count();
    let e = h.edge_count() as i64;
    let full = (1u32 << s) - 1;
    (1u32..full)
        .filter(|&mask| h.induced_unchecked(&subset_vertices(mask, s)).is_connected())
        .filter_map(|mask| gamma_term(s as i64, e, i64::from(mask.count_ones()), induced_edge_count(h, mask)))
        .min()
        .ok_or_else(|| ChromaError::Internal("unbalanced pattern without a denser proper subgraph".into()))
}

/// Integer color count matching a target rate in `G(n, p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColorChoice {
    pub colors: u64,
    /// `E T` with this integer color count.
    pub realized_lambda: f64,
    /// The unrounded count fell below 2 and was clamped.
    pub out_of_regime: bool,
}

/// `c = round((n)_s p^e / (|Aut h| λ))^(1/(s-1))`, clamped to at least 2,
/// where `(n)_s = s! C(n, s)` is the falling factorial.
pub fn required_colors(h: &Graph, n: u64, p: f64, lambda: f64) -> Result<ColorChoice> {
    let s = h.vertex_count();
    if s < 2 {
        return Err(ChromaError::InvalidParameter("pattern needs at least 2 vertices".into()));
    }
    if n < s as u64 {
        return Err(ChromaError::InvalidParameter(format!("n = {n} is smaller than the pattern")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(ChromaError::InvalidParameter(format!("edge probability {p} outside (0, 1]")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(ChromaError::InvalidParameter(format!("rate {lambda} must be positive")));
    }
    let aut = big_to_f64(&automorphism_count(h));
    let falling: f64 = (0..s as u64).map(|i| (n - i) as f64).product();
    // the direct product keeps exact halves exact; logs only past overflow
    let expected = falling * p.powi(h.edge_count() as i32) / aut;
    let ln_expected = if expected.is_finite() && expected > 0.0 {
        expected.ln()
    } else {
        (0..s as u64).map(|i| ((n - i) as f64).ln()).sum::<f64>() + h.edge_count() as f64 * p.ln() - aut.ln()
    };
    let base = expected / lambda;
    let raw = if s == 2 && base.is_finite() {
        base
    } else {
        ((ln_expected - lambda.ln()) / (s - 1) as f64).exp()
    };
    let rounded = raw.round();
    let out_of_regime = rounded < 2.0;
    let colors = if out_of_regime { 2 } else { rounded.min(u64::MAX as f64) as u64 };
    let realized_lambda = (ln_expected - (s - 1) as f64 * (colors as f64).ln()).exp();
    Ok(ColorChoice {
        colors,
        realized_lambda,
        out_of_regime,
    })
}

/// Law of `Σ k X_k` with independent `X_k ~ Pois(λ_k)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PoissonMixture {
    pub components: Vec<MixtureComponent>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixtureComponent {
    pub coefficient: u64,
    pub rate: f64,
}

impl PoissonMixture {
    /// Builds a mixture, summing the rates of equal coefficients and
    /// dropping zero rates.
    pub fn new(components: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        let mut merged: BTreeMap<u64, f64> = BTreeMap::new();
        for (k, rate) in components {
            if k == 0 {
                return Err(ChromaError::InvalidParameter("mixture coefficients must be positive".into()));
            }
            if !(rate >= 0.0 && rate.is_finite()) {
                return Err(ChromaError::InvalidParameter(format!("mixture rate {rate} must be finite and nonnegative")));
            }
            *merged.entry(k).or_default() += rate;
        }
        Ok(PoissonMixture {
            components: merged
                .into_iter()
                .filter(|&(_, rate)| rate > 0.0)
                .map(|(coefficient, rate)| MixtureComponent { coefficient, rate })
                .collect(),
        })
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        PoissonMixture::new([(1, lambda)])
    }

    pub fn mean(&self) -> f64 {
        self.components.iter().map(|c| c.coefficient as f64 * c.rate).sum()
    }

    pub fn variance(&self) -> f64 {
        self.components.iter().map(|c| (c.coefficient as f64).powi(2) * c.rate).sum()
    }

    pub fn rate(&self, k: u64) -> f64 {
        self.components.iter().find(|c| c.coefficient == k).map_or(0.0, |c| c.rate)
    }
}

/// Limit of `T` in `G(n, p)` with fixed `p`, scaled to mean `λ`: one
/// component per supergraph class `F` of `h` on `|V(h)|` vertices.
pub fn dense_mixture(h: &Graph, p: f64, lambda: f64) -> Result<PoissonMixture> {
    if !(p > 0.0 && p < 1.0) {
        return Err(ChromaError::InvalidParameter(format!("edge probability {p} outside (0, 1)")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(ChromaError::InvalidParameter(format!("rate {lambda} must be positive")));
    }
    let s = h.vertex_count();
    let pairs = (s * s.saturating_sub(1) / 2) as i32;
    let aut_h = big_to_f64(&automorphism_count(h));
    let classes = enumerate_supergraph_classes(h)?;
    let mut components = Vec::new();
    for (k, f) in classes.iter() {
        let extra = (f.edge_count() - h.edge_count()) as i32;
        let missing = pairs - f.edge_count() as i32;
        let rate = lambda * aut_h / big_to_f64(&automorphism_count(f)) * p.powi(extra) * (1.0 - p).powi(missing);
        components.push((k as u64, rate));
    }
    PoissonMixture::new(components)
}

/// Finite-host plug-in of the mixture: `λ_k = |D_k(h, g)| / c^(|V(h)|-1)`.
pub fn sequence_mixture(h: &Graph, g: &Graph, c: u64) -> Result<PoissonMixture> {
    if c < 1 {
        return Err(ChromaError::InvalidParameter("need at least one color".into()));
    }
    let scale = (c as f64).powi(h.vertex_count().saturating_sub(1) as i32);
    let dk = count_dk(h, g)?;
    PoissonMixture::new(dk.iter().filter(|(_, d)| !d.is_zero()).map(|(&k, d)| (k as u64, big_to_f64(d) / scale)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Invalid,
    SparsePoisson,
    UnbalancedZero,
    UnbalancedCritical,
    DenseMixture,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictedLimit {
    /// Colors cannot diverge; no limit statement applies.
    None,
    Mixture { mixture: PoissonMixture },
    DegenerateZero,
    NonPoisson { statement: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct RegimeReport {
    pub pattern: GraphSummary,
    pub balanced: bool,
    #[serde(serialize_with = "serialize_rational")]
    pub m: Rational,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub gamma: Option<Rational>,
    /// `|V(h)| / |E(h)|`, the largest admissible `α`.
    #[serde(serialize_with = "serialize_rational")]
    pub alpha_max: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub alpha: Rational,
    pub kappa: f64,
    pub lambda: f64,
    pub regime: Regime,
    pub predicted_limit: PredictedLimit,
}

/// Phase of `T(h, G(n, κ n^-α))` with colors scaled to mean `λ`. All
/// thresholds are compared as exact rationals.
pub fn classify_er_regime(h: &Graph, alpha: Rational, kappa: f64, lambda: f64) -> Result<RegimeReport> {
    check_pattern(h)?;
    if alpha < Rational::zero() {
        return Err(ChromaError::InvalidParameter(format!("alpha = {alpha} is negative")));
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(ChromaError::InvalidParameter(format!("kappa = {kappa} must be positive")));
    }
    if alpha.is_zero() && kappa >= 1.0 {
        return Err(ChromaError::InvalidParameter(format!(
            "a constant edge probability kappa = {kappa} must lie in (0, 1)"
        )));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(ChromaError::InvalidParameter(format!("rate {lambda} must be positive")));
    }
    let m = density_exponent(h)?;
    let balanced = m == edge_density(h);
    let gamma = if balanced { None } else { Some(gamma_exponent(h)?) };
    let alpha_max = Rational::new(h.vertex_count() as i64, h.edge_count() as i64);
    let regime = if alpha >= alpha_max {
        Regime::Invalid
    } else if alpha.is_zero() {
        Regime::DenseMixture
    } else {
        match gamma {
            Some(g) if alpha > g => Regime::UnbalancedZero,
            Some(g) if alpha == g => Regime::UnbalancedCritical,
            _ => Regime::SparsePoisson,
        }
    };
    let predicted_limit = match regime {
        Regime::Invalid => PredictedLimit::None,
        Regime::SparsePoisson => PredictedLimit::Mixture {
            mixture: PoissonMixture::poisson(lambda)?,
        },
        Regime::DenseMixture => PredictedLimit::Mixture {
            mixture: dense_mixture(h, kappa, lambda)?,
        },
        Regime::UnbalancedZero => PredictedLimit::DegenerateZero,
        Regime::UnbalancedCritical => PredictedLimit::NonPoisson {
            statement: format!(
                "moments converge at kappa = {kappa}; the limit, if it exists, is not Poisson"
            ),
        },
    };
    Ok(RegimeReport {
        pattern: GraphSummary::new(None, &canonical_form(h), h),
        balanced,
        m,
        gamma,
        alpha_max,
        alpha,
        kappa,
        lambda,
        regime,
        predicted_limit,
    })
}

/// Edge probability `κ n^-α`.
pub fn edge_probability(n: u64, alpha: Rational, kappa: f64) -> f64 {
    kappa * (n as f64).powf(-rational_f64(&alpha))
}

#[derive(Clone, Debug, Serialize)]
pub struct JoinRatio {
    pub t: usize,
    pub join: GraphSummary,
    #[serde(serialize_with = "serialize_big")]
    pub count: num_bigint::BigUint,
    /// `N(F, g) / c^(2|V(h)| - t - 1)`.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SecondMomentReport {
    pub moments: MomentReport,
    pub epsilon: f64,
    pub joins: Vec<JoinRatio>,
    /// `|K(|V(h)|, h, g)| / c^(|V(h)|-1)`: pairs of copies on one vertex set.
    pub full_overlap_ratio: f64,
    pub mean_variance_gap: f64,
    pub poisson_consistent: bool,
}

/// Finite-`n` diagnostics for the second-moment phenomenon: the mean and
/// variance agree and every join of two copies is rare relative to its
/// color scale.
pub fn check_second_moment(h: &Graph, g: &Graph, c: u64, epsilon: f64) -> Result<SecondMomentReport> {
    if c < 2 {
        return Err(ChromaError::InvalidParameter("need at least 2 colors".into()));
    }
    if !(epsilon > 0.0) {
        return Err(ChromaError::InvalidParameter(format!("epsilon = {epsilon} must be positive")));
    }
    let s = h.vertex_count();
    let exact = exact_moments(h, g, c)?;
    let moments = MomentReport::from((&exact, c));
    let mut joins = Vec::new();
    if s >= 3 {
        let catalog = enumerate_t_joins(h)?;
        for (&t, classes) in &catalog.joins {
            let scale = (c as f64).powi((2 * s - t - 1) as i32);
            for (form, f) in classes {
                let count = count_copies(f, g)?;
                joins.push(JoinRatio {
                    t,
                    join: GraphSummary::new(Some(t), form, f),
                    ratio: big_to_f64(&count) / scale,
                    count,
                });
            }
        }
    }
    let full_pairs = exact.overlaps.get(&s).map(|(count, _)| count.clone()).unwrap_or_default();
    let full_overlap_ratio = big_to_f64(&full_pairs) / (c as f64).powi(s.saturating_sub(1) as i32);
    let gap = rational_to_f64(&(&exact.variance - &exact.mean)).abs();
    let poisson_consistent = gap <= epsilon * moments.mean
        && joins.iter().all(|j| j.ratio <= epsilon)
        && full_overlap_ratio <= epsilon;
    Ok(SecondMomentReport {
        moments,
        epsilon,
        joins,
        full_overlap_ratio,
        mean_variance_gap: gap,
        poisson_consistent,
    })
}
