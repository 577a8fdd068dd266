mod common;

use chroma_core::graph::{complete, copies, counterexample_graph, cycle, named, path, star, wheel};
use chroma_core::limit::{
    check_second_moment, classify_er_regime, dense_mixture, density_exponent, edge_density, gamma_exponent,
    is_balanced, required_colors, sequence_mixture, PoissonMixture, PredictedLimit, Regime,
};
use chroma_core::moments::mean_t;
use chroma_core::{ChromaError, Graph, Rational};

fn r(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn unbalanced_fixtures() -> Vec<Graph> {
    let e = |n, edges: &[(usize, usize)]| Graph::from_edges(n, edges.iter().copied()).unwrap();
    let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let k5: Vec<(usize, usize)> = complete(5).edges().collect();
    vec![
        named::k4_pendant(),
        e(6, &[&k4[..], &[(0, 4), (4, 5)]].concat()),
        e(6, &[&k4[..], &[(0, 4), (1, 5)]].concat()),
        e(6, &[&k5[..], &[(0, 5)]].concat()),
        e(5, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4)]),
        e(7, &[&k4[..], &[(0, 4), (4, 5), (5, 6)]].concat()),
        e(6, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 3), (4, 5), (3, 4)]),
    ]
}

fn fixtures() -> Vec<Graph> {
    vec![
        complete(2),
        complete(3),
        complete(4),
        complete(5),
        cycle(4),
        cycle(5),
        path(4),
        star(2),
        star(3),
        star(5),
        named::diamond(),
        named::tadpole(),
        named::bowtie(),
        named::k4_pendant(),
        named::c4_pendant(),
        wheel(4),
    ]
}

#[test]
fn density_examples() {
    for s in 2..=6 {
        assert_eq!(density_exponent(&complete(s)).unwrap(), r(s as i64 - 1, 2));
    }
    assert_eq!(density_exponent(&cycle(4)).unwrap(), r(1, 1));
    assert_eq!(density_exponent(&named::k4_pendant()).unwrap(), r(3, 2));
    assert!(is_balanced(&cycle(4)).unwrap());
    assert!(!is_balanced(&named::k4_pendant()).unwrap());
    for k in 1..7 {
        assert!(is_balanced(&star(k)).unwrap());
        assert_eq!(density_exponent(&star(k)).unwrap(), r(k as i64, k as i64 + 1));
    }
    assert!(matches!(density_exponent(&Graph::empty(3)), Err(ChromaError::InvalidParameter(_))));
}

#[test]
fn density_matches_brute_force() {
    for h in fixtures() {
        let m = density_exponent(&h).unwrap();
        let (a, b) = common::density_brute(&h);
        assert_eq!(m, r(a, b), "{h:?}");
        assert!(m >= edge_density(&h));
        assert_eq!(is_balanced(&h).unwrap(), m == edge_density(&h));
    }
}

#[test]
fn gamma_examples() {
    assert_eq!(gamma_exponent(&named::k4_pendant()).unwrap(), r(1, 3));
    assert_eq!(common::gamma_brute(&named::k4_pendant()), Some((1, 3)));
    assert!(matches!(gamma_exponent(&cycle(4)), Err(ChromaError::InvalidParameter(_))));
}

#[test]
fn gamma_matches_brute_force_on_unbalanced_fixtures() {
    let mut unbalanced = 0;
    for h in fixtures().into_iter().chain(unbalanced_fixtures()).chain(common::random_graphs(60, 7, 11)) {
        if h.edge_count() == 0 || !h.is_connected() || is_balanced(&h).unwrap() {
            continue;
        }
        unbalanced += 1;
        let gamma = gamma_exponent(&h).unwrap();
        let (a, b) = common::gamma_brute(&h).expect("unbalanced pattern has a denser subgraph");
        assert_eq!(gamma, r(a, b), "{h:?}");
        let m = density_exponent(&h).unwrap();
        assert!(gamma > r(0, 1));
        assert!(gamma < m.recip(), "{h:?}");
    }
    assert!(unbalanced >= 5);
}

#[test]
fn color_counts() {
    let choice = required_colors(&complete(3), 100, 1.0, 1.0).unwrap();
    assert_eq!(choice.colors, 402);
    assert!(!choice.out_of_regime);
    for (n, lambda) in [(10u64, 1.0), (50, 2.0), (1000, 0.5)] {
        let c = required_colors(&complete(2), n, 1.0, lambda).unwrap().colors;
        assert_eq!(c, ((n * (n - 1) / 2) as f64 / lambda).round() as u64);
    }
    let choice = required_colors(&complete(3), 10_000, 1.0, 1.0).unwrap();
    assert!((choice.realized_lambda - 1.0).abs() <= 0.02, "{}", choice.realized_lambda);
    let tiny = required_colors(&complete(3), 3, 1.0, 5.0).unwrap();
    assert!(tiny.out_of_regime);
    assert_eq!(tiny.colors, 2);
    assert!(required_colors(&complete(3), 2, 1.0, 1.0).is_err());
    assert!(required_colors(&complete(3), 10, 0.0, 1.0).is_err());
}

#[test]
fn regime_examples() {
    let h = named::k4_pendant();
    let report = classify_er_regime(&h, r(1, 2), 1.0, 1.0).unwrap();
    assert_eq!(report.regime, Regime::UnbalancedZero);
    assert_eq!(report.gamma, Some(r(1, 3)));
    assert_eq!(report.alpha_max, r(5, 7));
    assert_eq!(report.predicted_limit, PredictedLimit::DegenerateZero);
    assert_eq!(classify_er_regime(&h, r(1, 5), 1.0, 1.0).unwrap().regime, Regime::SparsePoisson);
    let critical = classify_er_regime(&h, r(1, 3), 2.0, 1.0).unwrap();
    assert_eq!(critical.regime, Regime::UnbalancedCritical);
    assert!(matches!(critical.predicted_limit, PredictedLimit::NonPoisson { .. }));

    let dense = classify_er_regime(&cycle(4), r(0, 1), 0.5, 1.0).unwrap();
    assert_eq!(dense.regime, Regime::DenseMixture);
    assert!(dense.gamma.is_none());
    match dense.predicted_limit {
        PredictedLimit::Mixture { mixture } => assert!((mixture.mean() - 1.0).abs() < 1e-9),
        other => panic!("{other:?}"),
    }
    assert!(classify_er_regime(&cycle(4), r(0, 1), 1.0, 1.0).is_err());
    assert!(classify_er_regime(&cycle(4), r(-1, 2), 1.0, 1.0).is_err());
    assert!(classify_er_regime(&cycle(4), r(1, 2), 0.0, 1.0).is_err());
}

#[test]
fn regime_is_piecewise_constant_between_breakpoints() {
    let eps = r(1, 1000);
    for h in fixtures().into_iter().chain(unbalanced_fixtures()) {
        if !h.is_connected() {
            continue;
        }
        let top = r(h.vertex_count() as i64, h.edge_count() as i64);
        let class = |a: Rational| classify_er_regime(&h, a, 0.5, 1.0).unwrap().regime;
        assert_eq!(class(r(0, 1)), Regime::DenseMixture);
        assert_eq!(class(top), Regime::Invalid);
        assert_eq!(class(top + eps), Regime::Invalid);
        if is_balanced(&h).unwrap() {
            assert_eq!(class(eps), Regime::SparsePoisson);
            assert_eq!(class(top - eps), Regime::SparsePoisson);
            assert_eq!(class(top / 2), Regime::SparsePoisson);
        } else {
            let g = gamma_exponent(&h).unwrap();
            assert_eq!(class(eps.min(g / 2)), Regime::SparsePoisson);
            assert_eq!(class(g - eps.min(g / 2)), Regime::SparsePoisson);
            assert_eq!(class(g), Regime::UnbalancedCritical);
            assert_eq!(class(g + eps.min((top - g) / 2)), Regime::UnbalancedZero);
            assert_eq!(class(top - eps.min((top - g) / 2)), Regime::UnbalancedZero);
        }
    }
}

#[test]
fn dense_mixture_examples() {
    let m = dense_mixture(&star(2), 0.5, 1.0).unwrap();
    assert_eq!(m.components.len(), 2);
    assert!((m.rate(1) - 0.5).abs() < 1e-12);
    assert!((m.rate(3) - 1.0 / 6.0).abs() < 1e-12);
    for s in 2..=5 {
        let m = dense_mixture(&complete(s), 0.3, 2.5).unwrap();
        assert_eq!(m.components.len(), 1);
        assert_eq!(m.components[0].coefficient, 1);
        assert!((m.components[0].rate - 2.5).abs() < 1e-12);
    }
    for h in [star(2), complete(3), cycle(4), path(4), named::tadpole()] {
        for p in [0.3, 0.5, 0.7] {
            for lambda in [0.5, 1.0, 3.0] {
                let m = dense_mixture(&h, p, lambda).unwrap();
                assert!((m.mean() - lambda).abs() < 1e-9, "{h:?} p={p}");
            }
        }
    }
    assert!(dense_mixture(&cycle(4), 1.0, 1.0).is_err());
}

#[test]
fn mixtures_merge_equal_coefficients() {
    let m = PoissonMixture::new([(3, 0.25), (1, 0.5), (3, 0.25), (2, 0.0)]).unwrap();
    assert_eq!(m.components.len(), 2);
    assert_eq!(m.rate(3), 0.5);
    assert_eq!(m.components[0].coefficient, 1);
    assert!(PoissonMixture::new([(0, 1.0)]).is_err());
    assert!(PoissonMixture::new([(1, -1.0)]).is_err());
    let json = serde_json::to_value(&m).unwrap();
    assert_eq!(json["components"][1]["coefficient"], 3);
}

#[test]
fn sequence_mixture_examples() {
    let m = sequence_mixture(&star(2), &complete(3), 4).unwrap();
    assert_eq!(m.components.len(), 1);
    assert_eq!(m.components[0].coefficient, 3);
    assert!((m.rate(3) - 1.0 / 16.0).abs() < 1e-15);

    let n = 1000;
    let c = 10;
    let m = sequence_mixture(&cycle(4), &copies(&cycle(4), n), c).unwrap();
    assert_eq!(m.components.len(), 1);
    assert!((m.rate(1) - 1.0).abs() < 1e-12);

    for (h, g, c) in [
        (cycle(4), complete(6), 5u64),
        (star(2), wheel(9), 3),
        (path(4), wheel(6), 4),
        (named::tadpole(), complete(5), 2),
    ] {
        let m = sequence_mixture(&h, &g, c).unwrap();
        assert!((m.mean() - mean_t(&h, &g, c).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn second_moment_on_disjoint_triangles() {
    let n = 400;
    let c = 20;
    let report = check_second_moment(&complete(3), &copies(&complete(3), n), c, 0.05).unwrap();
    assert!(report.joins.iter().all(|j| j.ratio == 0.0));
    assert_eq!(report.full_overlap_ratio, 0.0);
    assert!((report.moments.mean - 1.0).abs() < 1e-12);
    assert!(report.poisson_consistent);
}

#[test]
fn second_moment_on_wheels() {
    // triangles through the hub; joins along a spoke are the only overlaps
    let n = 27_000;
    let c = 30;
    let report = check_second_moment(&complete(3), &wheel(n), c, 0.05).unwrap();
    assert!((report.moments.mean - n as f64 / (c * c) as f64).abs() < 1e-9);
    let diamond = report.joins.iter().find(|j| j.t == 2).unwrap();
    assert_eq!(diamond.join.vertices, 4);
    assert!((diamond.ratio - n as f64 / (c * c * c) as f64).abs() < 1e-9);
    assert!(!report.poisson_consistent);

    let report = check_second_moment(&complete(3), &wheel(2000), 100, 0.05).unwrap();
    assert!(report.joins.iter().all(|j| j.ratio <= 0.05));
    assert!(report.poisson_consistent, "{report:?}");
}

#[test]
fn second_moment_on_counterexample() {
    // c = n^(1/3); join counts in the pyramid grow like n^4, so keep n small
    let n = 125;
    let lambda = 1.0;
    let c = 5;
    let g = counterexample_graph(&cycle(4), n, lambda).unwrap();
    let report = check_second_moment(&cycle(4), &g, c, 0.05).unwrap();
    assert!(report.moments.mean >= lambda + 1.0 - 0.05);
    assert!(!report.poisson_consistent);
}
