//! Tautological relations from pole cancellation.
//!
//! The coefficient of each negative power of the local parameter in a
//! reconstructed class is a relation in the strata algebra. Relations are
//! kept per `(g, n, codim)` in reduced row-echelon form over the rationals,
//! with columns ordered by canonical decorated graph.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{parse_rational, Frac, Rational};
use crate::intersect::pair_with_monomial;
use crate::modgraphs::{
    compositions, enumerate_stable_graphs, gluing_pushforward, psi_kappa_monomials, strata_basis, Class, DecoratedGraph, Position, StrataVector,
};
use crate::reconstruct::{reconstruct_class, CohFT, Insertion};

pub const SCHEMA_VERSION: &str = "tautrel.relations/1";

/// `(g, n, codim)`.
pub type CellKey = (u32, usize, u32);

/// The `(g, n)` types and codimensions to work with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub cells: Vec<(u32, usize)>,
    pub max_codim: u32,
}

impl Bounds {
    pub fn new(cells: Vec<(u32, usize)>, max_codim: u32) -> Result<Self> {
        for (g, n) in &cells {
            if 2 * *g as i64 - 2 + *n as i64 <= 0 {
                return Err(Error::Input(format!("(g, n) = ({g}, {n}) is unstable")));
            }
        }
        Ok(Bounds { cells, max_codim })
    }

    /// Every stable `(g, n)` with `3g - 3 + n <= max_dim`.
    pub fn up_to_dim(max_dim: u32, max_codim: u32) -> Self {
        let mut cells = vec![];
        for g in 0..=(max_dim + 3) / 3 {
            for n in 0..=(max_dim + 3) as usize {
                let dim = 3 * g as i64 - 3 + n as i64;
                if 2 * g as i64 - 2 + n as i64 > 0 && dim >= 0 && dim <= max_dim as i64 {
                    cells.push((g, n));
                }
            }
        }
        Bounds { cells, max_codim }
    }

    pub fn contains(&self, g: u32, n: usize) -> bool {
        self.cells.contains(&(g, n))
    }

    pub fn top_codim(&self, g: u32, n: usize) -> u32 {
        self.max_codim.min((3 * g as i64 - 3 + n as i64).max(0) as u32)
    }

    fn allows(&self, g: u32, n: usize, d: u32) -> bool {
        self.contains(g, n) && d <= self.top_codim(g, n)
    }
}

/// A subspace of the strata algebra in one `(g, n, codim)`, in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct Span {
    pub g: u32,
    pub n: usize,
    pub codim: u32,
    /// Rows keyed by their pivot, the smallest graph with nonzero coefficient (normalized to 1).
    rows: BTreeMap<DecoratedGraph, StrataVector<Rational>>,
}

impl Span {
    pub fn new(g: u32, n: usize, codim: u32) -> Self {
        Span { g, n, codim, rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &StrataVector<Rational>> {
        self.rows.values()
    }

    /// `v` minus its projection on the span along the pivots.
    pub fn reduce(&self, v: &StrataVector<Rational>) -> StrataVector<Rational> {
        let mut v = v.clone();
        let keys: Vec<DecoratedGraph> = v.terms.keys().cloned().collect();
        let mut seen = BTreeSet::new();
        let mut queue: BTreeSet<DecoratedGraph> = keys.into_iter().collect();
        while let Some(k) = queue.pop_first() {
            if !seen.insert(k.clone()) {
                continue;
            }
            let Some(c) = v.terms.get(&k).cloned() else { continue };
            if let Some(row) = self.rows.get(&k) {
                for (d, x) in &row.terms {
                    if d > &k {
                        queue.insert(d.clone());
                    }
                    v.add_term(d.clone(), -(&c * x));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &StrataVector<Rational>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Add `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &StrataVector<Rational>) -> Result<bool> {
        if (v.g, v.n) != (self.g, self.n) {
            return Err(Error::Dimension("relation of the wrong type".into()));
        }
        if v.terms.keys().any(|d| d.codim() != self.codim as i64) {
            return Err(Error::Dimension("relation of mixed codimension".into()));
        }
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.terms.iter().next().map(|(d, c)| (d.clone(), c.clone())) else {
            return Ok(false);
        };
        let r = r.scale(&(Rational::one() / lead));
        // clear the new pivot from the existing rows
        for row in self.rows.values_mut() {
            if let Some(c) = row.terms.get(&pivot).cloned() {
                *row = row.add(&r.scale(&-c));
            }
        }
        self.rows.insert(pivot, r);
        Ok(true)
    }
}

/// Where an extracted relation came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    /// Exponent of the local parameter.
    pub exponent: String,
    /// Flat basis indices of the insertions, in leg order.
    pub insertions: Vec<usize>,
    /// Monomial in the coefficient symbols (radicals, `I`, chart parameters) that was split off.
    pub symbol: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationSet {
    pub source: String,
    pub bounds: Bounds,
    pub cells: BTreeMap<CellKey, Span>,
    pub provenance: BTreeMap<CellKey, Vec<Provenance>>,
    /// Whether the set has been closed under the implemented operations.
    pub closed: bool,
}

impl RelationSet {
    pub fn new(source: &str, bounds: Bounds) -> Self {
        RelationSet { source: source.into(), bounds, cells: BTreeMap::new(), provenance: BTreeMap::new(), closed: false }
    }

    pub fn dim(&self, key: CellKey) -> usize {
        self.cells.get(&key).map_or(0, |s| s.dim())
    }

    pub fn total(&self) -> usize {
        self.cells.values().map(|s| s.dim()).sum()
    }

    pub fn insert(&mut self, v: &StrataVector<Rational>, codim: u32) -> Result<bool> {
        let key = (v.g, v.n, codim);
        self.cells.entry(key).or_insert_with(|| Span::new(v.g, v.n, codim)).insert(v)
    }

    /// Every `(g, n, codim)` allowed by the bounds, whether or not it holds relations.
    pub fn grid(&self) -> Vec<CellKey> {
        let mut out = vec![];
        for (g, n) in &self.bounds.cells {
            for d in 0..=self.bounds.top_codim(*g, *n) {
                out.push((*g, *n, d));
            }
        }
        out
    }

    pub fn to_json(&self, config: Option<&serde_json::Value>) -> serde_json::Value {
        let cells: Vec<serde_json::Value> = self
            .cells
            .iter()
            .filter(|(_, s)| s.dim() > 0)
            .map(|(k, s)| {
                let rows: Vec<serde_json::Value> = s.rows().map(|r| r.to_json_value()["terms"].clone()).collect();
                serde_json::json!({
                    "g": k.0, "n": k.1, "codim": k.2, "dimension": s.dim(),
                    "relations": rows,
                    "provenance": self.provenance.get(k).cloned().unwrap_or_default(),
                })
            })
            .collect();
        let mut out = serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "source": self.source,
            "closed": self.closed,
            "bounds": self.bounds,
            "cells": cells,
        });
        if let Some(c) = config {
            out["config"] = c.clone();
        }
        out
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("relation file: {what}"));
        if v.get("schema_version").and_then(|s| s.as_str()) != Some(SCHEMA_VERSION) {
            return Err(bad("missing or unknown schema_version"));
        }
        let source = v["source"].as_str().ok_or_else(|| bad("source"))?;
        let bounds: Bounds = serde_json::from_value(v["bounds"].clone()).map_err(|e| bad(&e.to_string()))?;
        let mut rs = RelationSet::new(source, bounds);
        rs.closed = v["closed"].as_bool().unwrap_or(false);
        for cell in v["cells"].as_array().ok_or_else(|| bad("cells"))? {
            let g = cell["g"].as_u64().ok_or_else(|| bad("g"))? as u32;
            let n = cell["n"].as_u64().ok_or_else(|| bad("n"))? as usize;
            let codim = cell["codim"].as_u64().ok_or_else(|| bad("codim"))? as u32;
            for row in cell["relations"].as_array().ok_or_else(|| bad("relations"))? {
                let mut vec = StrataVector::new(g, n);
                for term in row.as_array().ok_or_else(|| bad("terms"))? {
                    let d: DecoratedGraph = serde_json::from_value(term["graph"].clone()).map_err(|e| bad(&e.to_string()))?;
                    d.graph.validate()?;
                    let c = parse_rational(term["coefficient"].as_str().ok_or_else(|| bad("coefficient"))?)?;
                    vec.add_term(d.canonical(), c);
                }
                rs.insert(&vec, codim)?;
            }
            if let Some(p) = cell.get("provenance") {
                let p: Vec<Provenance> = serde_json::from_value(p.clone()).map_err(|e| bad(&e.to_string()))?;
                rs.provenance.insert((g, n, codim), p);
            }
        }
        Ok(rs)
    }
}

/// Multisets of size `n` from `0..dim`, as sorted tuples.
fn multisets(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                let lo = t.last().copied().unwrap_or(0);
                (lo..dim).map(move |i| {
                    let mut u = t.clone();
                    u.push(i);
                    u
                })
            })
            .collect();
    }
    out
}

/// Distinct orderings of a sorted tuple, each with the permutation realizing it.
fn orderings(t: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = BTreeMap::new();
    let n = t.len();
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm over positions
    let mut c = vec![0usize; n];
    out.insert(perm.iter().map(|i| t[*i]).collect::<Vec<_>>(), perm.clone());
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            out.entry(perm.iter().map(|j| t[*j]).collect()).or_insert_with(|| perm.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out.into_iter().collect()
}

type Extracted = Vec<(u32, StrataVector<Rational>, Provenance)>;

fn polar_vectors(cls: &StrataVector<crate::exactalg::Series>, source: &str, ins: &[usize]) -> Extracted {
    let mut by: BTreeMap<(u32, Frac, String), StrataVector<Rational>> = BTreeMap::new();
    for (d, s) in &cls.terms {
        for (e, p) in s.terms() {
            if e >= Frac::zero() {
                continue;
            }
            for (m, c) in p.terms() {
                let key = (d.codim() as u32, e, m.to_string());
                by.entry(key).or_insert_with(|| StrataVector::new(cls.g, cls.n)).add_term(d.clone(), c.clone());
            }
        }
    }
    by.into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|((d, e, m), v)| {
            let symbol = if m.is_empty() { "1".to_string() } else { m };
            (d, v, Provenance { source: source.into(), exponent: e.to_string(), insertions: ins.to_vec(), symbol })
        })
        .collect()
}

/// Polar parts of `R Omega_{g,n}` for all flat basis insertions, at every cell of `bounds`.
///
/// psi-weighted insertions are not needed: `psi^j x` at a leg multiplies the class
/// by `psi^j` there, which the closure supplies.
pub fn extract_relations(cohft: &CohFT, source: &str, bounds: &Bounds) -> Result<RelationSet> {
    let mut rs = RelationSet::new(source, bounds.clone());
    let dim = cohft.dim();
    let mut jobs = vec![];
    for (g, n) in &bounds.cells {
        for t in multisets(dim, *n) {
            jobs.push((*g, *n, t));
        }
    }
    let results: Vec<Result<Extracted>> = jobs
        .par_iter()
        .map(|(g, n, t)| {
            let ins: Vec<Insertion> = t.iter().map(|a| Insertion::flat_basis(cohft.param(), dim, *a)).collect();
            let cls = reconstruct_class(cohft, *g, *n, &ins, bounds.top_codim(*g, *n))?;
            let base = polar_vectors(&cls, source, t);
            let mut out = vec![];
            for (order, perm) in orderings(t) {
                for (d, v, p) in &base {
                    let mut p = p.clone();
                    p.insertions = order.clone();
                    out.push((*d, v.relabel(&perm)?, p));
                }
            }
            Ok(out)
        })
        .collect();
    for r in results {
        for (d, v, p) in r? {
            if rs.insert(&v, d)? {
                rs.provenance.entry((v.g, v.n, d)).or_default().push(p);
            }
        }
    }
    Ok(rs)
}

/// Products of basis classes at the non-relation vertices with the given degrees.
fn vertex_products(types: &[(u32, usize)], degrees: &[u32]) -> Result<Vec<Vec<StrataVector<Rational>>>> {
    let mut out = vec![vec![]];
    for ((g, n), d) in types.iter().zip(degrees) {
        let basis = strata_basis(*g, *n, *d)?;
        let mut next = vec![];
        for prefix in &out {
            for b in &basis {
                let mut p: Vec<StrataVector<Rational>> = prefix.clone();
                p.push(StrataVector::single(b.clone(), Rational::one()));
                next.push(p);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Images of one relation under the closure operations, with their codimensions.
fn images(rs: &RelationSet, key: CellKey, v: &StrataVector<Rational>) -> Result<Vec<(u32, StrataVector<Rational>)>> {
    let (g, n, d) = key;
    let b = &rs.bounds;
    let mut out = vec![];
    if b.allows(g, n, d + 1) {
        for l in 0..n {
            out.push((d + 1, v.multiply(Position::Leg(l), Class::Psi(1))?));
        }
    }
    for a in 1..=b.top_codim(g, n).saturating_sub(d) {
        out.push((d + a, v.multiply(Position::Global, Class::Kappa(a))?));
    }
    if n > 0 && d > 0 && b.allows(g, n - 1, d - 1) && 2 * g as i64 - 2 + n as i64 - 1 > 0 {
        for l in 0..n {
            out.push((d - 1, v.forget_leg(l)?));
        }
    }
    // gluing into every larger type of the grid
    for (tg, tn) in &b.cells {
        let top = b.top_codim(*tg, *tn);
        if top <= d {
            continue;
        }
        for gr in enumerate_stable_graphs(*tg, *tn, (top - d) as usize)? {
            let graph = &gr.graph;
            let e = graph.edges.len() as u32;
            if e == 0 || d + e > top {
                continue;
            }
            for vtx in 0..graph.num_vertices() {
                if (graph.genera[vtx], graph.valence(vtx)) != (g, n) {
                    continue;
                }
                let others: Vec<usize> = (0..graph.num_vertices()).filter(|w| *w != vtx).collect();
                let types: Vec<(u32, usize)> = others.iter().map(|w| (graph.genera[*w], graph.valence(*w))).collect();
                for extra in 0..=top - d - e {
                    for degs in compositions(extra, others.len()) {
                        if types.iter().zip(&degs).any(|((gg, nn), dd)| *dd as i64 > 3 * *gg as i64 - 3 + *nn as i64) {
                            continue;
                        }
                        for prod in vertex_products(&types, &degs)? {
                            let mut parts = vec![];
                            let mut it = prod.into_iter();
                            for w in 0..graph.num_vertices() {
                                parts.push(if w == vtx { v.clone() } else { it.next().unwrap() });
                            }
                            let glued = gluing_pushforward(graph, &parts)?;
                            if !glued.is_zero() {
                                out.push((d + e + extra, glued));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Close under psi and kappa multiplication, forgetful pushforward and gluing
/// pushforward (a relation at one vertex, any basis classes at the others),
/// within the bounds, until nothing new appears.
pub fn close_relations(rs: &RelationSet) -> Result<RelationSet> {
    let mut out = rs.clone();
    let mut frontier: Vec<(CellKey, StrataVector<Rational>)> =
        rs.cells.iter().flat_map(|(k, s)| s.rows().map(move |r| (*k, r.clone()))).collect();
    while !frontier.is_empty() {
        let imgs: Vec<Result<Vec<(u32, StrataVector<Rational>)>>> =
            frontier.par_iter().map(|(k, v)| images(&out, *k, v)).collect();
        let mut next = vec![];
        for r in imgs {
            for (d, w) in r? {
                if w.is_zero() || !out.bounds.allows(w.g, w.n, d) {
                    continue;
                }
                if out.insert(&w, d)? {
                    next.push(((w.g, w.n, d), w));
                }
            }
        }
        frontier = next;
    }
    out.closed = true;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    /// The first span is strictly inside the second.
    FirstInSecond,
    SecondInFirst,
    Incomparable,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellComparison {
    pub g: u32,
    pub n: usize,
    pub codim: u32,
    pub dim_first: usize,
    pub dim_second: usize,
    pub dim_joint: usize,
    pub verdict: Verdict,
    /// A vector of one span outside the other, when they differ.
    #[serde(skip)]
    pub witness: Option<StrataVector<Rational>>,
    pub witness_text: Option<String>,
}

fn outside(a: Option<&Span>, b: Option<&Span>) -> Option<StrataVector<Rational>> {
    let a = a?;
    a.rows().find(|r| b.map_or(true, |s| !s.contains(r))).cloned()
}

/// Exact row-space comparison cell by cell, over the union of the two grids.
pub fn compare_spans(a: &RelationSet, b: &RelationSet) -> Vec<CellComparison> {
    let keys: BTreeSet<CellKey> = a.grid().into_iter().chain(b.grid()).chain(a.cells.keys().copied()).chain(b.cells.keys().copied()).collect();
    keys.into_iter()
        .map(|k| {
            let (sa, sb) = (a.cells.get(&k), b.cells.get(&k));
            let mut joint = sa.cloned().unwrap_or_else(|| Span::new(k.0, k.1, k.2));
            if let Some(s) = sb {
                for r in s.rows() {
                    joint.insert(r).expect("same cell");
                }
            }
            let (da, db, dj) = (sa.map_or(0, |s| s.dim()), sb.map_or(0, |s| s.dim()), joint.dim());
            let verdict = match (da == dj, db == dj) {
                (true, true) => Verdict::Equal,
                (false, true) => Verdict::FirstInSecond,
                (true, false) => Verdict::SecondInFirst,
                (false, false) => Verdict::Incomparable,
            };
            let witness = match verdict {
                Verdict::Equal => None,
                Verdict::FirstInSecond => outside(sb, sa),
                _ => outside(sa, sb),
            };
            let witness_text = witness.as_ref().map(|w| w.terms.iter().map(|(d, c)| format!("{c} {}", d.to_text())).collect::<Vec<_>>().join(" + "));
            CellComparison { g: k.0, n: k.1, codim: k.2, dim_first: da, dim_second: db, dim_joint: dj, verdict, witness, witness_text }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingFailure {
    pub g: u32,
    pub n: usize,
    pub codim: u32,
    pub row: usize,
    pub monomial: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub relations: usize,
    pub pairings: usize,
    pub failures: Vec<PairingFailure>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Pair one vector with every psi-kappa monomial of complementary degree.
pub fn pairing_failures(v: &StrataVector<Rational>, codim: u32) -> Result<(usize, Vec<(String, Rational)>)> {
    let top = v.dim();
    if codim as i64 > top {
        return Ok((0, vec![]));
    }
    let mons = psi_kappa_monomials(v.g, v.n, (top - codim as i64) as u32);
    let mut bad = vec![];
    for m in &mons {
        let x = pair_with_monomial(v, m)?;
        if !x.is_zero() {
            bad.push((m.to_text(), x));
        }
    }
    Ok((mons.len(), bad))
}

/// Necessary condition: every relation pairs to zero with the psi-kappa monomials.
pub fn verify_relations(rs: &RelationSet) -> Result<VerifyReport> {
    let mut rep = VerifyReport { relations: 0, pairings: 0, failures: vec![] };
    for ((g, n, d), span) in &rs.cells {
        for (i, r) in span.rows().enumerate() {
            rep.relations += 1;
            let (count, bad) = pairing_failures(r, *d)?;
            rep.pairings += count;
            for (m, x) in bad {
                rep.failures.push(PairingFailure { g: *g, n: *n, codim: *d, row: i, monomial: m, value: x.to_string() });
            }
        }
    }
    Ok(rep)
}
