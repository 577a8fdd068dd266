use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use proptest::prelude::*;

use super::*;
use crate::canon::automorphism_count;
use crate::graph::{complete, copies, cycle, named, path, star, wheel};

/// Exhaustive enumeration over injective tuples; only for tiny hosts.
mod naive {
    use super::*;

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

    pub fn homs(h: &Graph, g: &Graph) -> u64 {
        let mut count = 0;
        for_each_injection(h.vertex_count(), g.vertex_count(), &mut |phi| {
            if h.edges().all(|(u, v)| g.has_edge(phi[u], phi[v])) {
                count += 1;
            }
        });
        count
    }

    /// Distinct image edge sets, each tagged with its vertex set.
    pub fn copies(h: &Graph, g: &Graph) -> Vec<(BTreeSet<usize>, BTreeSet<(usize, usize)>)> {
        let mut found = BTreeSet::new();
        for_each_injection(h.vertex_count(), g.vertex_count(), &mut |phi| {
            if h.edges().all(|(u, v)| g.has_edge(phi[u], phi[v])) {
                let verts: BTreeSet<usize> = phi.iter().copied().collect();
                let edges: BTreeSet<(usize, usize)> =
                    h.edges().map(|(u, v)| (phi[u].min(phi[v]), phi[u].max(phi[v]))).collect();
                found.insert((verts, edges));
            }
        });
        found.into_iter().collect()
    }

    pub fn induced(f: &Graph, g: &Graph) -> u64 {
        let mut sets = BTreeSet::new();
        for_each_injection(f.vertex_count(), g.vertex_count(), &mut |phi| {
            let ok = (0..f.vertex_count())
                .all(|u| (u + 1..f.vertex_count()).all(|v| f.has_edge(u, v) == g.has_edge(phi[u], phi[v])));
            if ok {
                let mut set = phi.to_vec();
                set.sort_unstable();
                sets.insert(set);
            }
        });
        sets.len() as u64
    }

    pub fn overlap_pairs(h: &Graph, g: &Graph, t: usize) -> u64 {
        let cs = copies(h, g);
        let mut count = 0;
        for (i, a) in cs.iter().enumerate() {
            for (j, b) in cs.iter().enumerate() {
                if i != j && a.0.intersection(&b.0).count() == t {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn dk(h: &Graph, g: &Graph) -> BTreeMap<usize, u64> {
        let mut per_set: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        for (verts, _) in copies(h, g) {
            *per_set.entry(verts).or_default() += 1;
        }
        let mut out = BTreeMap::new();
        for k in per_set.values() {
            *out.entry(*k).or_default() += 1;
        }
        out
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn patterns() -> Vec<Graph> {
    vec![complete(2), star(2), complete(3), path(4), cycle(4), named::diamond(), named::tadpole(), star(3)]
}

#[test]
fn injective_hom_examples() {
    assert_eq!(count_injective_homs(&complete(2), &complete(3)), big(6));
    assert_eq!(count_injective_homs(&cycle(4), &complete(4)), big(24));
    assert_eq!(naive::homs(&cycle(4), &complete(4)), 24);
    assert_eq!(count_injective_homs(&complete(3), &star(5)), big(0));
}

#[test]
fn copy_examples() {
    assert_eq!(count_copies(&cycle(4), &complete(4)).unwrap(), big(3));
    assert_eq!(count_copies(&star(2), &complete(3)).unwrap(), big(3));
    for n in 4..12 {
        assert_eq!(count_copies(&complete(3), &wheel(n)).unwrap(), big(n as u64));
    }
    for n in [5, 6] {
        assert_eq!(naive::copies(&complete(3), &wheel(n)).len(), n);
    }
}

#[test]
fn bowtie_in_wheels() {
    // two triangles meeting at the hub need two vertex-disjoint rim edges
    for n in 5..10u64 {
        let expected = n * (n - 3) / 2;
        assert_eq!(count_copies(&named::bowtie(), &wheel(n as usize)).unwrap(), big(expected));
    }
    assert_eq!(naive::copies(&named::bowtie(), &wheel(5)).len(), 5);
}

#[test]
fn induced_examples() {
    assert_eq!(count_induced_copies(&cycle(4), &complete(4)), big(0));
    assert_eq!(count_induced_copies(&complete(3), &complete(4)), big(4));
    assert_eq!(count_induced_copies(&complete(3), &complete(3)), big(1));
    assert_eq!(count_induced_copies(&path(3), &complete(4)), big(0));
    for m in 1..6 {
        assert_eq!(count_induced_copies(&cycle(4), &copies(&cycle(4), m)), big(m as u64));
    }
}

#[test]
fn overlap_examples() {
    let cap = DEFAULT_COPY_CAP;
    assert_eq!(count_overlap_pairs(&cycle(4), &complete(5), 4, cap).unwrap(), big(30));
    assert_eq!(count_overlap_pairs(&cycle(4), &complete(6), 4, cap).unwrap(), big(90));
    for t in 2..=3 {
        assert_eq!(count_overlap_pairs(&complete(3), &copies(&complete(3), 4), t, cap).unwrap(), big(0));
    }
    assert!(count_overlap_pairs(&cycle(4), &complete(5), 1, cap).is_err());
    assert!(count_overlap_pairs(&cycle(4), &complete(5), 5, cap).is_err());
}

#[test]
fn dk_examples() {
    let dk = count_dk(&star(2), &complete(3)).unwrap();
    assert_eq!(dk[&3], big(1));
    assert_eq!(dk[&1], big(0));
    let wheel6 = wheel(6);
    assert_eq!(count_dk(&star(2), &wheel6).unwrap()[&3], count_induced_copies(&complete(3), &wheel6));
    for n in 4..8 {
        let dk = count_dk(&cycle(4), &complete(n)).unwrap();
        let c = (n * (n - 1) * (n - 2) * (n - 3) / 24) as u64;
        assert_eq!(dk[&3], big(c));
        assert_eq!(dk[&1], big(0));
        assert_eq!(dk[&2], big(0));
    }
    let dk = count_dk(&cycle(4), &complete(3)).unwrap();
    assert!(dk.values().all(|v| *v == big(0)));
}

#[test]
fn copy_cap_is_enforced() {
    let err = enumerate_copies(&complete(3), &complete(10), 50).unwrap_err();
    assert!(matches!(err, ChromaError::CopyCapExceeded { .. }));
    assert_eq!(enumerate_copies(&complete(3), &complete(10), 120).unwrap().len(), 120);
}

#[test]
fn copy_list_matches_naive_vertex_sets() {
    let g = wheel(6);
    for h in patterns() {
        let listed = enumerate_copies(&h, &g, DEFAULT_COPY_CAP).unwrap();
        let mut got: Vec<Vec<u32>> = listed.iter().map(<[u32]>::to_vec).collect();
        got.sort();
        let mut want: Vec<Vec<u32>> = naive::copies(&h, &g)
            .into_iter()
            .map(|(v, _)| v.into_iter().map(|x| x as u32).collect())
            .collect();
        want.sort();
        assert_eq!(got, want, "{h:?}");
    }
}

#[test]
fn joins_have_expected_sizes_and_contain_pattern() {
    for h in [star(2), complete(3), cycle(4), path(4), named::c4_pendant()] {
        let catalog = enumerate_t_joins(&h).unwrap();
        let s = h.vertex_count();
        for t in 2..s {
            assert!(catalog.classes(t).count() >= 1);
            for f in catalog.classes(t) {
                assert_eq!(f.vertex_count(), 2 * s - t);
                assert!(count_copies(&h, f).unwrap() >= big(1));
                // the pattern itself has too few vertices to be a member
                assert!(!crate::canon::is_isomorphic(f, &h));
            }
        }
    }
}

#[test]
fn two_star_joins() {
    let catalog = enumerate_t_joins(&star(2)).unwrap();
    assert!(catalog.contains(2, &named::tadpole()));
    assert!(catalog.contains(2, &cycle(4)));
    assert!(catalog.contains(2, &path(4)));
    assert!(catalog.contains(2, &star(3)));
    assert_eq!(catalog.classes(2).count(), 4);
}

#[test]
fn clique_joins_are_unique() {
    for s in 3..=6 {
        let catalog = enumerate_t_joins(&complete(s)).unwrap();
        for t in 2..s {
            assert_eq!(catalog.classes(t).count(), 1, "K{s}, t = {t}");
        }
    }
}

#[test]
fn full_identity_join_contains_pattern() {
    let h = named::c4_pendant();
    let id: Vec<usize> = (0..5).collect();
    assert_eq!(t_join(&h, &id, &id).unwrap(), h);
}

#[test]
fn c4_pendant_three_join() {
    // 0-based pivots (0, 1, 3) and (1, 2, 3) on the 4-cycle 0-1-2-3 with pendant 4 at 0
    let h = named::c4_pendant();
    let f = t_join(&h, &[0, 1, 3], &[1, 2, 3]).unwrap();
    assert_eq!(f.vertex_count(), 7);
    // second copy: 0'->5, 1'->0, 2'->1, 3'->3, 4'->6; its edges 5-0, 0-1, 1-3, 3-5, 5-6
    let expected = Graph::from_edges(
        7,
        [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (5, 0), (1, 3), (3, 5), (5, 6)],
    )
    .unwrap();
    assert_eq!(f, expected);
}

#[test]
fn t_join_errors() {
    let h = cycle(4);
    assert!(t_join(&h, &[0, 1], &[0]).is_err());
    assert!(t_join(&h, &[0, 0], &[1, 2]).is_err());
    assert!(t_join(&h, &[0, 9], &[1, 2]).is_err());
    assert!(t_join(&h, &[], &[]).is_err());
}

#[test]
fn supergraph_classes_examples() {
    let c4 = enumerate_supergraph_classes(&cycle(4)).unwrap();
    assert_eq!(c4.max_copies(), 3);
    let class1: BTreeSet<_> = c4.class(1).iter().map(crate::canon::canonical_form).collect();
    let want: BTreeSet<_> = [cycle(4), named::diamond()].iter().map(crate::canon::canonical_form).collect();
    assert_eq!(class1, want);
    assert!(c4.class(2).is_empty());
    assert_eq!(c4.class(3).len(), 1);
    assert!(crate::canon::is_isomorphic(&c4.class(3)[0], &complete(4)));

    let p2 = enumerate_supergraph_classes(&star(2)).unwrap();
    assert_eq!(p2.class(1).len(), 1);
    assert!(p2.class(2).is_empty());
    assert!(crate::canon::is_isomorphic(&p2.class(3)[0], &complete(3)));

    for s in 2..=6 {
        let ks = enumerate_supergraph_classes(&complete(s)).unwrap();
        assert_eq!(ks.max_copies(), 1);
        assert_eq!(ks.class(1).len(), 1);
    }
    assert!(matches!(
        enumerate_supergraph_classes(&path(11)),
        Err(ChromaError::PatternTooLarge(_))
    ));
}

#[test]
fn supergraph_classes_match_brute_force() {
    // brute force: all edge supersets on the pattern's labels, deduplicated
    for h in [star(2), path(4), cycle(4), star(3), named::tadpole()] {
        let classes = enumerate_supergraph_classes(&h).unwrap();
        let missing = h.non_edges();
        let mut forms = BTreeMap::new();
        for mask in 0u32..(1 << missing.len()) {
            let extra = missing.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e);
            let f = h.with_edges(extra).unwrap();
            let k = naive::copies(&h, &f).len();
            forms.insert(crate::canon::canonical_form(&f), k);
        }
        let got: BTreeMap<_, _> = classes.iter().map(|(k, f)| (crate::canon::canonical_form(f), k)).collect();
        assert_eq!(got, forms, "{h:?}");
    }
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counts_match_naive_oracle(g in arb_graph(7)) {
        for h in patterns() {
            let homs = count_injective_homs(&h, &g);
            prop_assert_eq!(&homs, &big(naive::homs(&h, &g)));
            let copies = count_copies(&h, &g).unwrap();
            prop_assert_eq!(&homs, &(&copies * automorphism_count(&h)));
            prop_assert_eq!(&copies, &big(naive::copies(&h, &g).len() as u64));
            prop_assert_eq!(&copies, &count_copies_symmetry_broken(&h, &g));
            prop_assert_eq!(count_induced_copies(&h, &g), big(naive::induced(&h, &g)));
            let s = h.vertex_count();
            let list = enumerate_copies(&h, &g, DEFAULT_COPY_CAP).unwrap();
            let profile = overlap_profile(&list);
            for t in 2..=s {
                prop_assert_eq!(&profile[&t], &big(naive::overlap_pairs(&h, &g, t)));
                // ordered pairs come in symmetric couples
                prop_assert_eq!(&profile[&t] % 2u32, big(0));
            }
            let dk = count_dk(&h, &g).unwrap();
            for (k, count) in naive::dk(&h, &g) {
                prop_assert_eq!(&dk[&k], &big(count));
            }
            let dk_total: BigUint = dk.iter().map(|(k, c)| c * BigUint::from(*k)).sum();
            prop_assert_eq!(dk_total, copies);
            if s >= 2 {
                let full: BigUint = dk.iter().map(|(k, c)| c * BigUint::from(k * (k - 1))).sum();
                prop_assert_eq!(&profile[&s], &full);
            }
        }
    }
}
