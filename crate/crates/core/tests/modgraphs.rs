use std::collections::{BTreeMap, BTreeSet};

use num::One;
use proptest::prelude::*;
use tautrel::exactalg::{qi, Rational};
use tautrel::modgraphs::*;

// ---- brute-force oracle: labelled multigraphs up to vertex permutation ----

type Key = (Vec<u32>, Vec<usize>, Vec<(usize, usize)>);

fn permute(key: &Key, p: &[usize]) -> Key {
    let nv = key.0.len();
    let mut genera = vec![0; nv];
    for v in 0..nv {
        genera[p[v]] = key.0[v];
    }
    let legs = key.1.iter().map(|v| p[*v]).collect();
    let mut edges: Vec<(usize, usize)> =
        key.2.iter().map(|(a, b)| (p[*a].min(p[*b]), p[*a].max(p[*b]))).collect();
    edges.sort();
    (genera, legs, edges)
}

fn perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in perms(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn multisets(pairs: &[(usize, usize)], k: usize, start: usize) -> Vec<Vec<(usize, usize)>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for i in start..pairs.len() {
        for mut rest in multisets(pairs, k - 1, i) {
            rest.insert(0, pairs[i]);
            out.push(rest);
        }
    }
    out
}

fn genus_tuples(nv: usize, max: u32) -> Vec<Vec<u32>> {
    if nv == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for g in 0..=max {
        for mut rest in genus_tuples(nv - 1, max - g) {
            rest.insert(0, g);
            out.push(rest);
        }
    }
    out
}

/// Isomorphism classes keyed by their minimal relabelling, with the number of
/// automorphisms (vertex permutations fixing the key, times edge symmetries).
fn brute_force(g: u32, n: usize) -> BTreeMap<usize, Vec<(Key, u64)>> {
    let dim = 3 * g as usize + n - 3;
    let mut found: BTreeMap<usize, BTreeSet<Key>> = BTreeMap::new();
    for e in 0..=dim {
        for nv in 1..=e + 1 {
            if e + 1 < nv {
                continue;
            }
            let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|a| (a..nv).map(move |b| (a, b))).collect();
            let loops = e as i64 - nv as i64 + 1;
            if loops < 0 || loops > g as i64 {
                continue;
            }
            let all_perms = perms(nv);
            for genera in genus_tuples(nv, g - loops as u32) {
                if genera.iter().sum::<u32>() as i64 + loops != g as i64 {
                    continue;
                }
                for edges in multisets(&pairs, e, 0) {
                    for code in 0..nv.pow(n as u32) {
                        let legs: Vec<usize> = (0..n).map(|l| code / nv.pow(l as u32) % nv).collect();
                        let Ok(sg) = StableGraph::new(genera.clone(), legs.clone(), edges.clone()) else { continue };
                        if sg.genus() != g {
                            continue;
                        }
                        let key = (genera.clone(), legs, edges.clone());
                        let min = all_perms.iter().map(|p| permute(&key, p)).min().unwrap();
                        found.entry(e).or_default().insert(min);
                    }
                }
            }
        }
    }
    found
        .into_iter()
        .map(|(e, keys)| {
            let list = keys
                .into_iter()
                .map(|k| {
                    let nv = k.0.len();
                    let fix = perms(nv).iter().filter(|p| permute(&k, p) == k).count() as u64;
                    let mut mult: BTreeMap<(usize, usize), u64> = BTreeMap::new();
                    for ed in &k.2 {
                        *mult.entry(*ed).or_default() += 1;
                    }
                    let mut aut = fix;
                    for ((a, b), m) in mult {
                        aut *= (1..=m).product::<u64>();
                        if a == b {
                            aut *= 1 << m;
                        }
                    }
                    (k, aut)
                })
                .collect();
            (e, list)
        })
        .collect()
}

#[test]
fn small_graph_counts() {
    let g03 = enumerate_stable_graphs(0, 3, 5).unwrap();
    assert_eq!(g03.len(), 1);
    let g11 = enumerate_stable_graphs(1, 1, 1).unwrap();
    assert_eq!(g11.len(), 2);
    assert_eq!(g11.iter().map(|x| x.aut).collect::<Vec<_>>(), vec![1, 2]);
    let g04 = enumerate_stable_graphs(0, 4, 1).unwrap();
    assert_eq!(g04.len(), 4);
    assert!(g04.iter().all(|x| x.aut == 1));
    // M_2 bar: 1 + 2 + 2 + 2 strata
    let g20 = enumerate_stable_graphs(2, 0, 3).unwrap();
    let mut by_e = BTreeMap::new();
    for x in &g20 {
        *by_e.entry(x.graph.edges.len()).or_insert(0) += 1;
    }
    assert_eq!(by_e.into_values().collect::<Vec<_>>(), vec![1, 2, 2, 2]);
    let mut auts: Vec<u64> = g20.iter().map(|x| x.aut).collect();
    auts.sort();
    assert_eq!(auts, vec![1, 2, 2, 2, 8, 8, 12]);
}

#[test]
fn enumeration_matches_brute_force() {
    for (g, n) in [(0, 3), (0, 4), (0, 5), (0, 6), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1)] {
        let dim = 3 * g as usize + n - 3;
        let ours = enumerate_stable_graphs(g, n, dim).unwrap();
        let oracle = brute_force(g, n);
        for (e, list) in &oracle {
            let mine: Vec<u64> = {
                let mut v: Vec<u64> = ours.iter().filter(|x| x.graph.edges.len() == *e).map(|x| x.aut).collect();
                v.sort();
                v
            };
            let mut theirs: Vec<u64> = list.iter().map(|x| x.1).collect();
            theirs.sort();
            assert_eq!(mine, theirs, "(g, n) = ({g}, {n}), {e} edges");
        }
        assert_eq!(ours.len(), oracle.values().map(|l| l.len()).sum::<usize>());
    }
}

#[test]
fn automorphism_examples() {
    let two_tori = StableGraph::new(vec![1, 1], vec![], vec![(0, 1)]).unwrap();
    assert_eq!(two_tori.automorphisms(), 2);
    let theta = StableGraph::new(vec![0, 0], vec![], vec![(0, 1), (0, 1), (0, 1)]).unwrap();
    assert_eq!(theta.automorphisms(), 12);
    let marked = StableGraph::new(vec![1, 1], vec![0], vec![(0, 1)]).unwrap();
    assert_eq!(marked.automorphisms(), 1);
    // psi on one half of a loop breaks the flip
    let mut d = DecoratedGraph::undecorated(StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap());
    assert_eq!(d.canonical_with_aut().1, 2);
    d.edge_psi[0] = (1, 0);
    assert_eq!(d.canonical_with_aut().1, 1);
    assert!(StableGraph::new(vec![0, 0], vec![0, 0], vec![(0, 1)]).is_err());
    assert!(StableGraph::new(vec![0, 0], vec![0, 0, 0], vec![]).is_err());
}

#[test]
fn psi_and_kappa_multiplication() {
    let one = StrataVector::single(DecoratedGraph::smooth(0, &[0; 5], &[]), Rational::one());
    let x = one.multiply(Position::Leg(1), Class::Psi(1)).unwrap();
    assert_eq!(x.terms.keys().next().unwrap(), &DecoratedGraph::smooth(0, &[0, 1, 0, 0, 0], &[]));
    // kappa_0 is the scalar 2g - 2 + n
    let k0 = one.multiply(Position::Global, Class::Kappa(0)).unwrap();
    assert_eq!(k0.terms.values().next().unwrap(), &qi(3));
    // global kappa on a two-vertex stratum splits into both vertices
    let sg = StableGraph::new(vec![0, 0], vec![0, 0, 1, 1, 1], vec![(0, 1)]).unwrap();
    let s = StrataVector::single(DecoratedGraph::undecorated(sg), Rational::one());
    let k1 = s.multiply(Position::Global, Class::Kappa(1)).unwrap();
    assert_eq!(k1.len(), 1); // the kappa_1 on the three-valent vertex vanishes
    assert!(s.multiply(Position::Global, Class::Psi(1)).is_err());
    assert!(s.multiply(Position::Leg(0), Class::Kappa(1)).is_err());
}

#[test]
fn grafting() {
    let outer = StableGraph::new(vec![0, 1], vec![0, 0], vec![(0, 1)]).unwrap();
    // vertex 0 has incidences leg 1, leg 2, half (0,0); vertex 1 has half (0,1)
    let inner0 = DecoratedGraph::smooth(0, &[1, 0, 0], &[]);
    let inner1 = DecoratedGraph::smooth(1, &[0], &[1]);
    let d = graft(&outer, &[inner0, inner1]).unwrap();
    assert_eq!(d.leg_psi, vec![1, 0]);
    assert_eq!(d.kappa, vec![vec![], vec![1]]);
    // grafting a boundary stratum of M_{0,4} into the four-valent vertex adds an edge
    let four = StableGraph::new(vec![0, 0], vec![0, 0, 0, 1, 1], vec![(0, 1)]).unwrap();
    let inner = DecoratedGraph::undecorated(StableGraph::new(vec![0, 0], vec![0, 0, 1, 1], vec![(0, 1)]).unwrap());
    let d = graft(&four, &[inner, DecoratedGraph::smooth(0, &[0, 0, 0], &[])]).unwrap();
    assert_eq!(d.graph.edges.len(), 2);
    assert!(graft(&four, &[DecoratedGraph::smooth(0, &[0, 0, 0], &[])]).is_err());
}

#[test]
fn forgetful_pushforwards() {
    // pi_* psi_{n+1}^{a+1} = kappa_a
    for a in 1..=2u32 {
        let v = StrataVector::single(DecoratedGraph::smooth(1, &[0, a + 1], &[]), Rational::one());
        let p = v.forget_last(1).unwrap();
        let expect = if a <= 1 { StrataVector::single(DecoratedGraph::smooth(1, &[0], &[a]), Rational::one()) } else { StrataVector::new(1, 1) };
        assert_eq!(p, expect);
    }
    // pi_* psi_{n+1} = kappa_0 = 2g - 2 + n
    let v = StrataVector::single(DecoratedGraph::smooth(0, &[0, 0, 0, 0, 1], &[]), Rational::one());
    let p = v.forget_last(1).unwrap();
    assert_eq!(p, StrataVector::single(DecoratedGraph::smooth(0, &[0; 4], &[]), qi(2)));
    // two points: psi^2 psi^2 -> kappa_1^2 + kappa_2
    let v = StrataVector::single(DecoratedGraph::smooth(0, &[0, 0, 0, 0, 0, 2, 2], &[]), Rational::one());
    let p = v.forget_last(2).unwrap();
    let mut expect = StrataVector::new(0, 5);
    expect.add_term(DecoratedGraph::smooth(0, &[0; 5], &[1, 1]), Rational::one());
    expect.add_term(DecoratedGraph::smooth(0, &[0; 5], &[2]), Rational::one());
    assert_eq!(p, expect);
    // string equation
    let v = StrataVector::single(DecoratedGraph::smooth(0, &[2, 0, 0, 0, 0], &[]), Rational::one());
    let p = v.forget_last(1).unwrap();
    assert_eq!(p, StrataVector::single(DecoratedGraph::smooth(0, &[1, 0, 0, 0], &[]), Rational::one()));
    // forgetting a point on a bubble contracts it
    let sg = StableGraph::new(vec![1, 0], vec![1, 1], vec![(0, 1)]).unwrap();
    let v = StrataVector::single(DecoratedGraph::undecorated(sg), Rational::one());
    let p = v.forget_last(1).unwrap();
    assert_eq!(p, StrataVector::single(DecoratedGraph::smooth(1, &[0], &[]), Rational::one()));
    assert!(StrataVector::single(DecoratedGraph::smooth(0, &[0, 0, 0], &[]), Rational::one()).forget_last(1).is_err());
}

#[test]
fn forgetting_order_is_irrelevant() {
    let d = DecoratedGraph::smooth(0, &[1, 0, 2, 1, 0, 0], &[]);
    let v = StrataVector::single(d, Rational::one());
    let a = v.forget_leg(4).unwrap().forget_leg(4).unwrap();
    let b = v.forget_leg(5).unwrap().forget_leg(4).unwrap();
    let c = v.forget_last(2).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    let sg = StableGraph::new(vec![0, 1], vec![0, 0, 1, 0], vec![(0, 1)]).unwrap();
    let mut d = DecoratedGraph::undecorated(sg);
    d.leg_psi = vec![0, 0, 1, 1];
    let v = StrataVector::single(d, Rational::one());
    assert_eq!(v.forget_leg(2).unwrap().forget_leg(2).unwrap(), v.forget_leg(3).unwrap().forget_leg(2).unwrap());
}

#[test]
fn dilaton_identity_to_fourth_order() {
    for (g, n) in [(1, 1), (0, 4), (0, 5), (1, 2)] {
        let series = dilaton_series(g, n, 4).unwrap();
        assert_eq!(series[0], StrataVector::single(DecoratedGraph::smooth(g, &vec![0; n], &[]), Rational::one()));
        for s in &series[1..] {
            assert!(s.is_zero(), "({g}, {n}): {:?}", s.to_json_value());
        }
    }
    assert!(dilaton_series(0, 2, 2).is_err());
}

#[test]
fn basis_sizes_and_monomials() {
    assert_eq!(compositions(2, 3).len(), 6);
    assert_eq!(partitions(4).len(), 5);
    // M_{0,4}: codim 0 -> 1, codim 1 -> psi_i (4), kappa_1, three boundary divisors
    assert_eq!(strata_basis(0, 4, 0).unwrap().len(), 1);
    assert_eq!(strata_basis(0, 4, 1).unwrap().len(), 8);
    // M_{1,1}: psi, kappa_1, the loop
    assert_eq!(strata_basis(1, 1, 1).unwrap().len(), 3);
    assert_eq!(psi_kappa_monomials(1, 1, 1).len(), 2);
}

#[test]
fn kappa_as_psi_pushforwards() {
    for kappa in [vec![1u32], vec![1, 1], vec![1, 2], vec![1, 1, 1]] {
        let (g, n) = (1u32, 3usize);
        let mut total = StrataVector::new(g, n);
        for (k, cls) in kappa_to_psi(g, n, &kappa) {
            total = total.add(&cls.forget_last(k).unwrap());
        }
        let expect = StrataVector::single(DecoratedGraph::smooth(g, &[0; 3], &kappa), Rational::one());
        assert_eq!(total, expect, "kappa {kappa:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_invariant(seed in 0u64..10_000) {
        let graphs = enumerate_stable_graphs(1, 3, 3).unwrap();
        let gr = &graphs[(seed as usize) % graphs.len()].graph;
        let nv = gr.num_vertices();
        let p = perms(nv);
        let perm = &p[(seed as usize / 7) % p.len()];
        let mut d = DecoratedGraph::undecorated(gr.clone());
        d.leg_psi = (0..gr.n()).map(|l| ((seed >> l) & 1) as u32).collect();
        let mut e = d.clone();
        e.graph.genera = { let mut x = vec![0; nv]; for v in 0..nv { x[perm[v]] = gr.genera[v]; } x };
        e.graph.legs = gr.legs.iter().map(|v| perm[*v]).collect();
        e.graph.edges = gr.edges.iter().rev().map(|(a, b)| (perm[*b], perm[*a])).collect();
        e.edge_psi = d.edge_psi.iter().rev().map(|(x, y)| (*y, *x)).collect();
        e.kappa = { let mut x = vec![vec![]; nv]; for v in 0..nv { x[perm[v]] = d.kappa[v].clone(); } x };
        let (c1, a1) = d.canonical_with_aut();
        let (c2, a2) = e.canonical_with_aut();
        prop_assert_eq!(&c1, &c2);
        prop_assert_eq!(a1, a2);
        prop_assert_eq!(c1.canonical(), c1);
    }
}
