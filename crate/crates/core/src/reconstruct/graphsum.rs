//! The colored stable-graph sum.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{dilaton_leaf, edge_term, leg_term, negligible, rational_series, CohFT, Insertion};
use crate::error::{Error, Result};
use crate::exactalg::{Rational, Series, SeriesMatrix, Symbol};
use crate::modgraphs::{enumerate_stable_graphs, DecoratedGraph, GraphWithAut, StrataVector};

type VertexFactor = Vec<(Vec<u32>, Series)>;

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in permutations(k - 1) {
        for i in 0..k {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = vec![];
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut c = vec![];
        let mut j = s;
        while !seen[j] {
            seen[j] = true;
            c.push(j);
            j = p[j];
        }
        out.push(c);
    }
    out
}

/// Ordered tuples of leaf exponents `m_j >= 2` with `sum (m_j - 1) <= budget`.
fn leaf_tuples(budget: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![(vec![], 0u32)];
    while let Some((t, used)) = frontier.pop() {
        for m in 2..=budget + 1 {
            if used + m - 1 > budget {
                break;
            }
            let mut nt: Vec<u32> = t.clone();
            nt.push(m);
            out.push(nt.clone());
            frontier.push((nt, used + m - 1));
        }
    }
    out
}

/// `sum_k 1/k! omega_{g, n+k}(..., T, ..., T)` pushed forward to the vertex,
/// as kappa monomials with series coefficients (the leg inputs are applied separately).
fn vertex_factor(cohft: &CohFT, leaf: &[Vec<Series>], color: usize, g: u32, nv: usize, budget: u32) -> VertexFactor {
    let dim = 3 * g as i64 - 3 + nv as i64;
    let s = &cohft.sqrt_delta[color];
    let e0 = (2 * g as i64 - 2 + nv as i64) as u32;
    let mut acc: BTreeMap<Vec<u32>, Series> = BTreeMap::new();
    for tuple in leaf_tuples(budget.min(dim.max(0) as u32)) {
        let k = tuple.len();
        let mut c = s.pow(e0 + k as u32);
        for m in &tuple {
            c = &c * &leaf[*m as usize][color];
        }
        if negligible(&c) {
            continue;
        }
        let fact: i64 = (1..=k as i64).product();
        let c = c.scale_rational(&Rational::new(1.into(), fact.into()));
        // pi_* prod psi^{a_j + 1} = sum over permutations of prod over cycles of kappa_{sum a_j}
        for p in permutations(k) {
            let mut kap: Vec<u32> = cycles(&p).iter().map(|cy| cy.iter().map(|j| tuple[*j] - 1).sum()).collect();
            kap.sort_unstable();
            if kap.iter().sum::<u32>() as i64 > dim {
                continue;
            }
            let entry = acc.entry(kap).or_insert_with(|| Series::zero(cohft.param()));
            *entry = &*entry + &c;
        }
    }
    acc.into_iter().filter(|(_, c)| !negligible(c)).collect()
}

struct Pieces {
    legs: Vec<Vec<Vec<Series>>>,
    edges: Vec<Vec<SeriesMatrix>>,
    vertices: HashMap<(usize, u32, usize), VertexFactor>,
}

type State = Vec<(DecoratedGraph, u32, Series)>;

fn graph_terms(gr: &GraphWithAut, coloring: &[usize], pieces: &Pieces, codim: u32, param: &Symbol) -> State {
    let graph = &gr.graph;
    let weight = rational_series(param, Rational::new(1.into(), (gr.aut as i64).into()));
    let mut state: State = vec![(DecoratedGraph::undecorated(graph.clone()), graph.edges.len() as u32, weight)];
    for v in 0..graph.num_vertices() {
        let key = (coloring[v], graph.genera[v], graph.valence(v));
        let factor = &pieces.vertices[&key];
        let mut next = vec![];
        for (d, deg, c) in &state {
            for (kap, k) in factor {
                let nd = deg + kap.iter().sum::<u32>();
                if nd > codim {
                    continue;
                }
                let mut dd = d.clone();
                dd.kappa[v] = kap.clone();
                next.push((dd, nd, c * k));
            }
        }
        state = next;
    }
    for (l, leg) in pieces.legs.iter().enumerate() {
        let color = coloring[graph.legs[l]];
        let mut next = vec![];
        for (d, deg, c) in &state {
            for (p, row) in leg.iter().enumerate() {
                let nd = deg + p as u32;
                if nd > codim {
                    break;
                }
                if negligible(&row[color]) {
                    continue;
                }
                let mut dd = d.clone();
                dd.leg_psi[l] = p as u32;
                next.push((dd, nd, c * &row[color]));
            }
        }
        state = next;
    }
    for (e, (a, b)) in graph.edges.iter().enumerate() {
        let (ca, cb) = (coloring[*a], coloring[*b]);
        let mut next = vec![];
        for (d, deg, c) in &state {
            for (p, row) in pieces.edges.iter().enumerate() {
                for (q, m) in row.iter().enumerate() {
                    let nd = deg + (p + q) as u32;
                    if nd > codim {
                        break;
                    }
                    let x = &m[(ca, cb)];
                    if negligible(x) {
                        continue;
                    }
                    let mut dd = d.clone();
                    dd.edge_psi[e] = (p as u32, q as u32);
                    next.push((dd, nd, c * x));
                }
            }
        }
        state = next;
    }
    state.retain(|(d, _, _)| !d.vanishes_by_dimension());
    state
}

fn colorings(nv: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..nv {
        out = out.into_iter().flat_map(|c: Vec<usize>| (0..n).map(move |i| { let mut d = c.clone(); d.push(i); d })).collect();
    }
    out
}

/// `R Omega_{g,n}(inputs)` through codimension `codim`, in the raw strata basis
/// with the `1/|Aut|` factors in the coefficients.
pub fn reconstruct_class(cohft: &CohFT, g: u32, n: usize, inputs: &[Insertion], codim: u32) -> Result<StrataVector<Series>> {
    if inputs.len() != n {
        return Err(Error::Input(format!("{} insertions for n = {n}", inputs.len())));
    }
    let dim = 3 * g as i64 - 3 + n as i64;
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Input(format!("(g, n) = ({g}, {n}) is unstable")));
    }
    if codim as i64 > dim {
        return Err(Error::Input(format!("codimension {codim} exceeds dimension {dim}")));
    }
    let c = codim as usize;
    let legs = inputs.iter().map(|x| leg_term(cohft, x, c)).collect::<Result<Vec<_>>>()?;
    let edges = if c >= 1 { edge_term(cohft, c - 1)? } else { vec![] };
    let leaf = dilaton_leaf(cohft, c + 1)?;
    let graphs = enumerate_stable_graphs(g, n, c)?;
    let mut vertices = HashMap::new();
    for gr in &graphs {
        for v in 0..gr.graph.num_vertices() {
            for color in 0..cohft.dim() {
                let key = (color, gr.graph.genera[v], gr.graph.valence(v));
                vertices.entry(key).or_insert_with(|| vertex_factor(cohft, &leaf, color, key.1, key.2, codim));
            }
        }
    }
    let pieces = Pieces { legs, edges, vertices };
    let jobs: Vec<(&GraphWithAut, Vec<usize>)> =
        graphs.iter().flat_map(|gr| colorings(gr.graph.num_vertices(), cohft.dim()).into_iter().map(move |col| (gr, col))).collect();
    let parts: Vec<State> = jobs.par_iter().map(|(gr, col)| graph_terms(gr, col, &pieces, codim, cohft.param())).collect();
    let mut out = StrataVector::new(g, n);
    for part in parts {
        for (d, _, c) in part {
            out.add_term(d, c);
        }
    }
    if let Some(bound) = cohft.min_known {
        for (d, c) in &out.terms {
            if let Some(t) = c.truncation() {
                if t < bound {
                    return Err(Error::Truncation(format!(
                        "coefficient of {} is known only below order {t}, order {bound} is needed; raise the precision",
                        d.to_text()
                    )));
                }
            }
        }
    }
    Ok(out)
}
