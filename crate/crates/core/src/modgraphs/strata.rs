//! Formal linear combinations of decorated strata and the operations the
//! reconstruction and the relation closure need.
//!
//! A basis element is the gluing pushforward `xi_*(decoration)` of the
//! decorated graph, without any `1/|Aut|` factor. Kappa classes follow
//! `kappa_a = pi_*(psi_{n+1}^{a+1})`.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::Serialize;

use super::graph::{sorted, DecoratedGraph, Incidence, StableGraph};
use crate::error::{Error, Result};
use crate::exactalg::{Rational, Series};

pub trait Coefficient: Clone + std::fmt::Debug {
    /// True when the coefficient can be dropped without losing information.
    fn is_negligible(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, c: &Rational) -> Self;
    fn text(&self) -> String;
}

impl Coefficient for Rational {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, c: &Rational) -> Self {
        self * c
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

impl Coefficient for Series {
    // a truncated zero still records how far it is known
    fn is_negligible(&self) -> bool {
        self.is_zero() && self.is_exact()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, c: &Rational) -> Self {
        self.scale_rational(c)
    }
    fn text(&self) -> String {
        self.to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrataVector<C> {
    pub g: u32,
    pub n: usize,
    pub terms: BTreeMap<DecoratedGraph, C>,
}

/// Where a psi or kappa factor is multiplied in.
#[derive(Clone, Copy, Debug)]
pub enum Position {
    Leg(usize),
    /// Vertex index of the canonical form of each term.
    Vertex(usize),
    /// The global kappa class: the sum over all vertices.
    Global,
}

#[derive(Serialize)]
struct TermJson<'a> {
    graph: &'a DecoratedGraph,
    text: String,
    coefficient: String,
}

impl<C: Coefficient> StrataVector<C> {
    pub fn new(g: u32, n: usize) -> Self {
        StrataVector { g, n, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> i64 {
        3 * self.g as i64 - 3 + self.n as i64
    }

    pub fn single(d: DecoratedGraph, c: C) -> Self {
        let mut v = StrataVector::new(d.genus(), d.n());
        v.add_term(d, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `c * d`; `d` is canonicalized, and dropped when it vanishes for dimension reasons.
    pub fn add_term(&mut self, d: DecoratedGraph, c: C) {
        if d.codim() > self.dim() || d.vanishes_by_dimension() {
            return;
        }
        let d = d.canonical();
        let merged = match self.terms.remove(&d) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !merged.is_negligible() {
            self.terms.insert(d, merged);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = StrataVector::new(self.g, self.n);
        for (d, x) in &self.terms {
            out.add_term(d.clone(), x.scaled(c));
        }
        out
    }

    pub fn map<D: Coefficient, F: Fn(&C) -> D>(&self, f: F) -> StrataVector<D> {
        let mut out = StrataVector::new(self.g, self.n);
        for (d, x) in &self.terms {
            out.add_term(d.clone(), f(x));
        }
        out
    }

    pub fn of_codim(&self, k: i64) -> Self {
        let mut out = StrataVector::new(self.g, self.n);
        out.terms = self.terms.iter().filter(|(d, _)| d.codim() == k).map(|(d, c)| (d.clone(), c.clone())).collect();
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let terms: Vec<TermJson> =
            self.terms.iter().map(|(d, c)| TermJson { graph: d, text: d.to_text(), coefficient: c.text() }).collect();
        serde_json::json!({ "g": self.g, "n": self.n, "terms": terms })
    }

    /// Multiply by `psi^a` at a leg or by `kappa_a` at a vertex (or globally).
    pub fn multiply(&self, pos: Position, class: Class) -> Result<Self> {
        let mut out = StrataVector::new(self.g, self.n);
        for (d, c) in &self.terms {
            for (nd, k) in multiply_term(d, pos, class)? {
                out.add_term(nd, c.scaled(&k));
            }
        }
        Ok(out)
    }

    /// Push forward along the map forgetting the last `k` markings.
    pub fn forget_last(&self, k: usize) -> Result<Self> {
        if k > self.n {
            return Err(Error::Input("forgetting more markings than present".into()));
        }
        let mut cur = self.clone();
        for _ in 0..k {
            if 2 * cur.g as i64 - 2 + cur.n as i64 - 1 <= 0 {
                return Err(Error::Input("forgetful map to an unstable moduli space".into()));
            }
            let mut next = StrataVector::new(cur.g, cur.n - 1);
            for (d, c) in &cur.terms {
                for (nd, k) in forget_last_term(d)? {
                    next.add_term(nd, c.scaled(&k));
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Push forward forgetting marking `leg` (0-based); later markings shift down.
    pub fn forget_leg(&self, leg: usize) -> Result<Self> {
        if leg >= self.n {
            return Err(Error::Input(format!("no marking {}", leg + 1)));
        }
        let mut perm: Vec<usize> = (0..self.n).filter(|l| *l != leg).collect();
        perm.push(leg);
        self.relabel(&perm)?.forget_last(1)
    }

    /// New leg `i` is old leg `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Input("relabelling of the wrong length".into()));
        }
        let mut out = StrataVector::new(self.g, self.n);
        for (d, c) in &self.terms {
            let mut nd = d.clone();
            nd.graph.legs = perm.iter().map(|p| d.graph.legs[*p]).collect();
            nd.leg_psi = perm.iter().map(|p| d.leg_psi[*p]).collect();
            out.add_term(nd, c.clone());
        }
        Ok(out)
    }
}

/// A decoration factor: `psi^a` or `kappa_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Psi(u32),
    Kappa(u32),
}

fn multiply_term(d: &DecoratedGraph, pos: Position, class: Class) -> Result<Vec<(DecoratedGraph, Rational)>> {
    match (pos, class) {
        (Position::Leg(l), Class::Psi(a)) => {
            if l >= d.n() {
                return Err(Error::Input(format!("no marking {}", l + 1)));
            }
            let mut nd = d.clone();
            nd.leg_psi[l] += a;
            Ok(vec![(nd, Rational::one())])
        }
        (Position::Vertex(v), Class::Kappa(a)) => {
            if v >= d.graph.num_vertices() {
                return Err(Error::Input(format!("no vertex {v}")));
            }
            Ok(vec![with_kappa(d, v, a)])
        }
        (Position::Global, Class::Kappa(a)) => Ok((0..d.graph.num_vertices()).map(|v| with_kappa(d, v, a)).collect()),
        (Position::Global, Class::Psi(_)) | (Position::Vertex(_), Class::Psi(_)) => {
            Err(Error::Input("psi classes live on markings".into()))
        }
        (Position::Leg(_), Class::Kappa(_)) => Err(Error::Input("kappa classes live on vertices".into())),
    }
}

fn with_kappa(d: &DecoratedGraph, v: usize, a: u32) -> (DecoratedGraph, Rational) {
    let mut nd = d.clone();
    if a == 0 {
        let k0 = 2 * d.graph.genera[v] as i64 - 2 + d.graph.valence(v) as i64;
        return (nd, Rational::from_integer(k0.into()));
    }
    nd.kappa[v].push(a);
    nd.kappa[v] = sorted(nd.kappa[v].clone());
    (nd, Rational::one())
}

/// Pushforward of one basis element forgetting its last marking.
pub fn forget_last_term(d: &DecoratedGraph) -> Result<Vec<(DecoratedGraph, Rational)>> {
    let p = d.n().checked_sub(1).ok_or_else(|| Error::Input("no marking to forget".into()))?;
    let v = d.graph.legs[p];
    let b = d.leg_psi[p];
    let gv = d.graph.genera[v];
    let others: Vec<Incidence> = d.graph.incidences(v).into_iter().filter(|i| *i != Incidence::Leg(p)).collect();
    if gv == 0 && others.len() == 2 {
        return contract_bubble(d, p, v, &others);
    }
    let target_n = others.len() as i64;
    let kappa0 = Rational::from_integer((2 * gv as i64 - 2 + target_n).into());
    let mut base = d.clone();
    base.graph.legs.pop();
    base.leg_psi.pop();
    let a_list = &d.kappa[v];
    let mut out = vec![];
    for mask in 0u32..(1u32 << a_list.len()) {
        let s: u32 = (0..a_list.len()).filter(|i| mask & (1 << i) != 0).map(|i| a_list[i]).sum();
        let rest: Vec<u32> = (0..a_list.len()).filter(|i| mask & (1 << i) == 0).map(|i| a_list[i]).collect();
        let c = b + s;
        if c >= 1 {
            let mut nd = base.clone();
            nd.kappa[v] = rest;
            if c == 1 {
                out.push((nd, kappa0.clone()));
            } else {
                nd.kappa[v].push(c - 1);
                nd.kappa[v] = sorted(nd.kappa[v].clone());
                out.push((nd, Rational::one()));
            }
        } else {
            // string equation
            for i in &others {
                let a = d.psi_at(*i);
                if a >= 1 {
                    let mut nd = base.clone();
                    nd.set_psi(*i, a - 1);
                    out.push((nd, Rational::one()));
                }
            }
        }
    }
    Ok(out)
}

/// Forgetting a marking on a genus-zero vertex of valence three contracts that vertex.
fn contract_bubble(d: &DecoratedGraph, p: usize, v: usize, others: &[Incidence]) -> Result<Vec<(DecoratedGraph, Rational)>> {
    if d.leg_psi[p] > 0 || !d.kappa[v].is_empty() || others.iter().any(|i| d.psi_at(*i) > 0) {
        return Ok(vec![]);
    }
    // the far ends of the half-edges at v, with their psi exponents
    let far = |i: &Incidence| -> Option<(usize, usize, u32)> {
        match i {
            Incidence::Half(e, s) => {
                let (a, b) = d.graph.edges[*e];
                let (w, q) = if *s == 0 { (b, d.edge_psi[*e].1) } else { (a, d.edge_psi[*e].0) };
                Some((*e, w, q))
            }
            Incidence::Leg(_) => None,
        }
    };
    let mut genera = d.graph.genera.clone();
    let mut legs = d.graph.legs.clone();
    let mut leg_psi = d.leg_psi.clone();
    let mut edges: Vec<(usize, usize)> = vec![];
    let mut edge_psi: Vec<(u32, u32)> = vec![];
    let removed: Vec<usize>;
    match (others[0], others[1]) {
        (Incidence::Leg(l), h @ Incidence::Half(..)) | (h @ Incidence::Half(..), Incidence::Leg(l)) => {
            let (e, w, q) = far(&h).expect("half-edge");
            legs[l] = w;
            leg_psi[l] = q;
            removed = vec![e];
        }
        (h1 @ Incidence::Half(e1, _), h2 @ Incidence::Half(e2, _)) => {
            if e1 == e2 {
                return Err(Error::Input("forgetful map to an unstable moduli space".into()));
            }
            let (_, w1, q1) = far(&h1).expect("half-edge");
            let (_, w2, q2) = far(&h2).expect("half-edge");
            edges.push((w1, w2));
            edge_psi.push((q1, q2));
            removed = vec![e1, e2];
        }
        _ => return Err(Error::Input("forgetful map to an unstable moduli space".into())),
    }
    for (e, (ab, pq)) in d.graph.edges.iter().zip(&d.edge_psi).enumerate() {
        if !removed.contains(&e) {
            edges.push(*ab);
            edge_psi.push(*pq);
        }
    }
    legs.pop();
    leg_psi.pop();
    // drop vertex v and renumber
    let re = |x: usize| if x > v { x - 1 } else { x };
    genera.remove(v);
    let mut kappa = d.kappa.clone();
    kappa.remove(v);
    let graph = StableGraph {
        genera,
        legs: legs.into_iter().map(re).collect(),
        edges: edges.into_iter().map(|(a, b)| (re(a), re(b))).collect(),
    };
    Ok(vec![(DecoratedGraph { graph, leg_psi, edge_psi, kappa }, Rational::one())])
}

/// Graft one decorated graph into every vertex of `outer`. The legs of
/// `parts[v]` are matched, in order, with `outer.incidences(v)`.
pub fn graft(outer: &StableGraph, parts: &[DecoratedGraph]) -> Result<DecoratedGraph> {
    let nv = outer.num_vertices();
    if parts.len() != nv {
        return Err(Error::Dimension("one decorated graph per vertex is needed".into()));
    }
    let mut offset = vec![0; nv];
    let mut genera = vec![];
    let mut kappa = vec![];
    let mut edges = vec![];
    let mut edge_psi = vec![];
    for v in 0..nv {
        let p = &parts[v];
        if p.genus() != outer.genera[v] || p.n() != outer.valence(v) {
            return Err(Error::Dimension(format!("vertex {v} has type ({}, {}), part has ({}, {})", outer.genera[v], outer.valence(v), p.genus(), p.n())));
        }
        offset[v] = genera.len();
        genera.extend(p.graph.genera.iter().copied());
        kappa.extend(p.kappa.iter().cloned());
        edges.extend(p.graph.edges.iter().map(|(a, b)| (a + offset[v], b + offset[v])));
        edge_psi.extend(p.edge_psi.iter().copied());
    }
    // where each incidence of the outer graph lands
    let mut land: BTreeMap<Incidence, (usize, u32)> = BTreeMap::new();
    for v in 0..nv {
        for (i, inc) in outer.incidences(v).into_iter().enumerate() {
            land.insert(inc, (parts[v].graph.legs[i] + offset[v], parts[v].leg_psi[i]));
        }
    }
    let mut legs = vec![];
    let mut leg_psi = vec![];
    for l in 0..outer.n() {
        let (w, a) = land[&Incidence::Leg(l)];
        legs.push(w);
        leg_psi.push(a);
    }
    for e in 0..outer.edges.len() {
        let (a, p) = land[&Incidence::Half(e, 0)];
        let (b, q) = land[&Incidence::Half(e, 1)];
        edges.push((a, b));
        edge_psi.push((p, q));
    }
    Ok(DecoratedGraph { graph: StableGraph { genera, legs, edges }, leg_psi, edge_psi, kappa })
}

/// Gluing pushforward of a product of vertex classes along `outer`.
pub fn gluing_pushforward<C: Coefficient>(outer: &StableGraph, parts: &[StrataVector<C>]) -> Result<StrataVector<C>> {
    if parts.len() != outer.num_vertices() {
        return Err(Error::Dimension("one class per vertex is needed".into()));
    }
    for (v, p) in parts.iter().enumerate() {
        if p.g != outer.genera[v] || p.n != outer.valence(v) {
            return Err(Error::Dimension(format!("vertex {v}: arity mismatch")));
        }
    }
    let mut out = StrataVector::new(outer.genus(), outer.n());
    let lists: Vec<Vec<(&DecoratedGraph, &C)>> = parts.iter().map(|p| p.terms.iter().collect()).collect();
    let mut idx = vec![0usize; lists.len()];
    if lists.iter().any(|l| l.is_empty()) {
        return Ok(out);
    }
    loop {
        let ds: Vec<DecoratedGraph> = idx.iter().zip(&lists).map(|(i, l)| l[*i].0.clone()).collect();
        let mut c = lists[0][idx[0]].1.clone();
        for (k, l) in lists.iter().enumerate().skip(1) {
            c = c.times(l[idx[k]].1);
        }
        out.add_term(graft(outer, &ds)?, c);
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Monomials `psi^a kappa_B` on the smooth graph of type `(g, n)` of degree `d`.
pub fn psi_kappa_monomials(g: u32, n: usize, d: u32) -> Vec<DecoratedGraph> {
    let mut out = vec![];
    for k in 0..=d {
        for psi in compositions(d - k, n) {
            for kap in partitions(k) {
                let m = DecoratedGraph::smooth(g, &psi, &kap);
                if !m.vanishes_by_dimension() {
                    out.push(m);
                }
            }
        }
    }
    out.sort();
    out
}

/// All `n`-tuples of nonnegative integers summing to `d`.
pub fn compositions(d: u32, n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = vec![];
    for first in 0..=d {
        for mut rest in compositions(d - first, n - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Partitions of `k` into positive parts, each sorted increasingly.
pub fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn rec(k: u32, min: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(acc.clone());
            return;
        }
        for p in min..=k {
            acc.push(p);
            rec(k - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = vec![];
    rec(k, 1, &mut vec![], &mut out);
    out
}

/// Every basis element of codimension `d` on `(g, n)`, in canonical form and sorted.
pub fn strata_basis(g: u32, n: usize, d: u32) -> Result<Vec<DecoratedGraph>> {
    let mut out = std::collections::BTreeSet::new();
    for gr in super::enumerate::enumerate_stable_graphs(g, n, d as usize)? {
        let e = gr.graph.edges.len() as u32;
        let rest = d - e;
        let nv = gr.graph.num_vertices();
        let slots = n + 2 * gr.graph.edges.len();
        for split in compositions(rest, nv + 1) {
            // split[nv] is spent on psi, split[v] on kappa at v
            let kappas: Vec<Vec<Vec<u32>>> = (0..nv).map(|v| partitions(split[v])).collect();
            for psi in compositions(split[nv], slots) {
                for_each_product(&kappas, &mut |kap: &[&Vec<u32>]| {
                    let mut dg = DecoratedGraph::undecorated(gr.graph.clone());
                    dg.leg_psi = psi[..n].to_vec();
                    dg.edge_psi = (0..gr.graph.edges.len()).map(|e| (psi[n + 2 * e], psi[n + 2 * e + 1])).collect();
                    dg.kappa = kap.iter().map(|k| (*k).clone()).collect();
                    if !dg.vanishes_by_dimension() {
                        out.insert(dg.canonical());
                    }
                });
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn for_each_product<T>(lists: &[Vec<T>], f: &mut dyn FnMut(&[&T])) {
    fn rec<'a, T>(lists: &'a [Vec<T>], acc: &mut Vec<&'a T>, f: &mut dyn FnMut(&[&T])) {
        if acc.len() == lists.len() {
            f(acc);
            return;
        }
        for x in &lists[acc.len()] {
            acc.push(x);
            rec(lists, acc, f);
            acc.pop();
        }
    }
    rec(lists, &mut vec![], f)
}

/// `kappa_B` on `(g, n)` as pushforwards of psi monomials: a list of
/// `(k, class on (g, n + k))` whose pushforwards forgetting the last `k`
/// markings sum to `kappa_B`.
pub fn kappa_to_psi(g: u32, n: usize, kappa: &[u32]) -> Vec<(usize, StrataVector<Rational>)> {
    let m = kappa.len();
    // kappa_B = sum over set partitions P of c(P) pi_*(prod_{blocks} psi^{b(block)+1})
    let coeffs = kappa_psi_coefficients(m);
    let mut by_k: BTreeMap<usize, StrataVector<Rational>> = BTreeMap::new();
    for (blocks, c) in coeffs {
        let k = blocks.len();
        let mut psi = vec![0u32; n];
        for b in &blocks {
            psi.push(b.iter().map(|i| kappa[*i]).sum::<u32>() + 1);
        }
        let term = DecoratedGraph::smooth(g, &psi, &[]);
        by_k.entry(k).or_insert_with(|| StrataVector::new(g, n + k)).add_term(term, c);
    }
    by_k.into_iter().collect()
}

/// Coefficients `c(P)` with `prod_j kappa_{b_j} = sum_P c(P) pi_*(psi-monomial of P)`,
/// obtained by inverting `pi_*(prod psi_{p_B}^{b_B+1}) = sum_{Q >= P} prod_C (|C|_P - 1)! kappa_{b_C}`.
fn kappa_psi_coefficients(m: usize) -> Vec<(Vec<Vec<usize>>, Rational)> {
    let parts = set_partitions(m);
    // express each "kappa product over the blocks of Q" in the basis of pushforwards
    let mut memo: BTreeMap<Vec<Vec<usize>>, BTreeMap<Vec<Vec<usize>>, Rational>> = BTreeMap::new();
    let mut sorted_parts = parts.clone();
    sorted_parts.sort_by_key(|p| p.len());
    for p in &sorted_parts {
        // G(P) = F(P) - sum_{Q > P} w(P, Q) G(Q)
        let mut expr: BTreeMap<Vec<Vec<usize>>, Rational> = BTreeMap::new();
        expr.insert(p.clone(), Rational::one());
        for q in &parts {
            if q.len() < p.len() && coarsens(q, p) {
                let w = weight(p, q);
                for (k, c) in &memo[q] {
                    *expr.entry(k.clone()).or_insert_with(Rational::zero) -= c * &w;
                }
            }
        }
        expr.retain(|_, c| !c.is_zero());
        memo.insert(p.clone(), expr);
    }
    let finest: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
    memo.remove(&finest).unwrap_or_default().into_iter().collect()
}

fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for i in 0..m {
        let mut next = vec![];
        for p in out {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(i);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![i]);
            next.push(q);
        }
        out = next;
    }
    out.into_iter()
        .map(|mut p| {
            p.sort();
            p
        })
        .collect()
}

/// Whether every block of `fine` lies in a block of `coarse`.
fn coarsens(coarse: &[Vec<usize>], fine: &[Vec<usize>]) -> bool {
    fine.iter().all(|b| coarse.iter().any(|c| b.iter().all(|x| c.contains(x))))
}

fn weight(fine: &[Vec<usize>], coarse: &[Vec<usize>]) -> Rational {
    let mut w = Rational::one();
    for c in coarse {
        let inside = fine.iter().filter(|b| c.contains(&b[0])).count() as i64;
        for j in 1..inside {
            w *= Rational::from_integer(j.into());
        }
    }
    w
}

/// Coefficients of `b^0, ..., b^order` in
/// `sum_k (1 + b)^{2 - 2g - n - k} / k! * pi_*(b psi_{n+1} ... b psi_{n+k})`,
/// computed at the level of strata by repeated forgetful pushforward.
pub fn dilaton_series(g: u32, n: usize, order: usize) -> Result<Vec<StrataVector<Rational>>> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Input(format!("(g, n) = ({g}, {n}) is unstable")));
    }
    let mut out = vec![StrataVector::new(g, n); order + 1];
    let mut fact = Rational::one();
    for k in 0..=order {
        if k > 0 {
            fact *= Rational::from_integer((k as i64).into());
        }
        let mut psi = vec![0u32; n];
        psi.extend(std::iter::repeat(1).take(k));
        let pushed = StrataVector::single(DecoratedGraph::smooth(g, &psi, &[]), Rational::one()).forget_last(k)?;
        // (1 + b)^e = sum_j binom(e, j) b^j with a possibly negative exponent e
        let e = 2 - 2 * g as i64 - n as i64 - k as i64;
        let mut binom = Rational::one();
        for j in 0..=(order - k) {
            if j > 0 {
                binom = binom * Rational::from_integer((e - j as i64 + 1).into()) / Rational::from_integer((j as i64).into());
            }
            let c = &binom / &fact;
            out[k + j] = out[k + j].add(&pushed.scale(&c));
        }
    }
    Ok(out)
}
