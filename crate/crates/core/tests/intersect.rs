use num::{One, Zero};
use proptest::prelude::*;
use tautrel::exactalg::linalg::rank;
use tautrel::exactalg::{qi, Rational};
use tautrel::intersect::*;
use tautrel::modgraphs::*;

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

fn fact(n: u32) -> Rational {
    (1..=n as i64).fold(Rational::one(), |a, b| a * qi(b))
}

#[test]
fn known_correlators() {
    assert_eq!(psi_integral(0, &[0, 0, 0]), qi(1));
    assert_eq!(psi_integral(1, &[1]), q(1, 24));
    assert_eq!(psi_integral(2, &[4]), q(1, 1152));
    assert_eq!(psi_integral(2, &[2, 3]), q(29, 5760));
    assert_eq!(psi_integral(2, &[2, 2, 2]), q(7, 240));
    assert_eq!(psi_integral(3, &[7]), q(1, 82944));
    assert_eq!(psi_integral(1, &[1, 1, 1]), q(1, 12));
    assert!(psi_integral(1, &[2]).is_zero());
    assert!(psi_integral(0, &[0, 0]).is_zero());
}

#[test]
fn genus_zero_multinomial() {
    // <tau_a1 ... tau_an>_0 = (n - 3)! / prod a_i!
    for n in 3..=7usize {
        for a in compositions((n - 3) as u32, n) {
            let expect = fact(n as u32 - 3) / a.iter().fold(Rational::one(), |x, y| x * fact(*y));
            assert_eq!(psi_integral(0, &a), expect, "{a:?}");
        }
    }
}

#[test]
fn string_and_dilaton_hold_across_the_cache() {
    for g in 0..=3u32 {
        for n in 1..=4usize {
            let top = 3 * g as i64 - 3 + n as i64;
            if top < 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            for a in compositions(top as u32, n) {
                psi_integral(g, &a);
            }
        }
    }
    let all = cached_correlators();
    assert!(all.len() > 40);
    for (g, a, v) in all {
        let n = a.len() as i64;
        // string: <tau_0 tau_a>_g = sum_i <... tau_{a_i - 1} ...>_g
        if 2 * g as i64 - 2 + n > 0 {
            let mut s = Rational::zero();
            for i in 0..a.len() {
                if a[i] > 0 {
                    let mut b = a.clone();
                    b[i] -= 1;
                    s += psi_integral(g, &b);
                }
            }
            let mut with0 = a.clone();
            with0.push(0);
            assert_eq!(psi_integral(g, &with0), s, "string at g={g} {a:?}");
            let mut with1 = a.clone();
            with1.push(1);
            assert_eq!(psi_integral(g, &with1), qi(2 * g as i64 - 2 + n) * &v, "dilaton at g={g} {a:?}");
        }
    }
}

#[test]
fn kappa_integrals() {
    assert_eq!(vertex_integral(1, &[0], &[1]), q(1, 24));
    assert_eq!(vertex_integral(0, &[0; 5], &[2]), qi(1));
    assert_eq!(vertex_integral(0, &[0; 5], &[1, 1]), qi(5));
    assert_eq!(vertex_integral(0, &[0; 3], &[]), qi(1));
    assert_eq!(vertex_integral(2, &[], &[3]), psi_integral(2, &[4]));
    assert!(vertex_integral(1, &[1], &[1]).is_zero());
}

#[test]
fn kappa_integrals_agree_with_psi_pushforwards() {
    for (g, n, kappa) in [
        (0u32, 5usize, vec![1u32, 1]),
        (0, 6, vec![1, 2]),
        (0, 6, vec![1, 1, 1]),
        (1, 2, vec![1, 1]),
        (1, 3, vec![1, 2]),
        (2, 0, vec![1, 1, 1]),
        (2, 1, vec![2, 2]),
    ] {
        let direct = vertex_integral(g, &vec![0; n], &kappa);
        let mut via = Rational::zero();
        for (_, cls) in kappa_to_psi(g, n, &kappa) {
            via += integrate_strata(&cls).unwrap();
        }
        assert_eq!(direct, via, "({g}, {n}) kappa {kappa:?}");
    }
}

#[test]
fn boundary_integrals() {
    // M_{1,1}: xi_* 1 over the loop integrates to 1, the stratum class to 1/2
    let loop11 = DecoratedGraph::undecorated(StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap());
    assert_eq!(integrate_graph(&loop11), qi(1));
    assert_eq!(integrate_stratum_class(&loop11), q(1, 2));
    // boundary of M_{0,4}
    let d = DecoratedGraph::undecorated(StableGraph::new(vec![0, 0], vec![0, 0, 1, 1], vec![(0, 1)]).unwrap());
    assert_eq!(integrate_graph(&d), qi(1));
    // psi on a half-edge of a genus-one vertex
    let sg = StableGraph::new(vec![0, 1], vec![0, 0], vec![(0, 1)]).unwrap();
    let mut d = DecoratedGraph::undecorated(sg);
    d.edge_psi[0] = (0, 1);
    assert_eq!(integrate_graph(&d), q(1, 24));
    let v = StrataVector::single(d.clone(), qi(3));
    assert_eq!(integrate_strata(&v).unwrap(), q(1, 8));
    // below top degree is an error
    let low = StrataVector::single(DecoratedGraph::smooth(1, &[0, 0], &[]), qi(1));
    assert!(integrate_strata(&low).is_err());
}

#[test]
fn partial_pairing_detects_known_relations() {
    // WDVV on M_{0,4}
    let a = DecoratedGraph::undecorated(StableGraph::new(vec![0, 0], vec![0, 0, 1, 1], vec![(0, 1)]).unwrap());
    let b = DecoratedGraph::undecorated(StableGraph::new(vec![0, 0], vec![0, 1, 0, 1], vec![(0, 1)]).unwrap());
    let mut rel = StrataVector::new(0, 4);
    rel.add_term(a.clone(), qi(1));
    rel.add_term(b, qi(-1));
    for m in psi_kappa_monomials(0, 4, 0) {
        assert!(pair_with_monomial(&rel, &m).unwrap().is_zero());
    }
    // kappa_1 = psi_1 on M_{1,1}; the loop is 24 psi_1 in the raw basis
    let mut rel = StrataVector::new(1, 1);
    rel.add_term(DecoratedGraph::smooth(1, &[0], &[1]), qi(1));
    rel.add_term(DecoratedGraph::smooth(1, &[1], &[]), qi(-1));
    let mut rel2 = StrataVector::new(1, 1);
    rel2.add_term(DecoratedGraph::undecorated(StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap()), qi(1));
    rel2.add_term(DecoratedGraph::smooth(1, &[1], &[]), qi(-24));
    for m in psi_kappa_monomials(1, 1, 0) {
        assert!(pair_with_monomial(&rel, &m).unwrap().is_zero());
        assert!(pair_with_monomial(&rel2, &m).unwrap().is_zero());
    }
    // a non-relation pairs nontrivially
    let mut bad = StrataVector::new(0, 4);
    bad.add_term(a, qi(1));
    assert_eq!(pair_with_monomial(&bad, &psi_kappa_monomials(0, 4, 0)[0]).unwrap(), qi(1));
}

#[test]
fn kappa_pulls_back_to_every_vertex() {
    // kappa_1 times the boundary stratum of M_{0,5} with a four-valent vertex
    let sg = StableGraph::new(vec![0, 0], vec![0, 0, 0, 1, 1], vec![(0, 1)]).unwrap();
    let d = DecoratedGraph::undecorated(sg);
    let m = DecoratedGraph::smooth(0, &[0; 5], &[1]);
    let prod = multiply_monomial(&m, &d).unwrap();
    assert_eq!(prod.len(), 1);
    assert_eq!(integrate_strata(&prod).unwrap(), qi(1));
}

#[test]
fn pairing_ranks_match_known_betti_numbers() {
    let rk = |g, n, d| rank(&pairing_matrix(g, n, d).unwrap().entries);
    assert_eq!(rk(0, 4, 1), 1);
    assert_eq!(rk(1, 1, 1), 1);
    assert_eq!(rk(0, 5, 1), 5);
    assert_eq!(rk(0, 5, 2), 1);
    assert_eq!(rk(1, 2, 1), 2);
    assert!(pairing_matrix(1, 1, 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permuting_insertions_is_harmless(g in 0u32..3, extra in 0usize..3, seed in 0u64..1000) {
        let n = 1 + extra + if g == 0 { 2 } else { 0 };
        let top = 3 * g as i64 - 3 + n as i64;
        let comps = compositions(top as u32, n);
        let a = &comps[(seed as usize) % comps.len()];
        let mut b = a.clone();
        b.rotate_left((seed as usize) % n);
        prop_assert_eq!(psi_integral(g, a), psi_integral(g, &b));
    }
}
