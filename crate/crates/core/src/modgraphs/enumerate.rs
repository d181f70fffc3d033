//! Stable graphs of type (g, n) up to isomorphism, by successive degeneration.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::graph::{DecoratedGraph, Incidence, StableGraph};
use crate::error::{Error, Result};

/// A stable graph in canonical form together with `|Aut|`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphWithAut {
    pub graph: StableGraph,
    pub aut: u64,
}

fn degenerations(g: &StableGraph) -> Vec<StableGraph> {
    let mut out = vec![];
    for v in 0..g.num_vertices() {
        let gv = g.genera[v];
        if gv >= 1 {
            let mut h = g.clone();
            h.genera[v] -= 1;
            h.edges.push((v, v));
            out.push(h);
        }
        let inc = g.incidences(v);
        let w = g.num_vertices();
        for mask in 0u64..(1u64 << inc.len()) {
            let moved = mask.count_ones() as i64;
            let kept = inc.len() as i64 - moved;
            for h1 in 0..=gv {
                // w gets genus h1 and the moved incidences, v keeps the rest
                if 2 * h1 as i64 - 1 + moved <= 0 || 2 * (gv - h1) as i64 - 1 + kept <= 0 {
                    continue;
                }
                let mut h = g.clone();
                h.genera[v] = gv - h1;
                h.genera.push(h1);
                for (i, x) in inc.iter().enumerate() {
                    if mask & (1 << i) == 0 {
                        continue;
                    }
                    match x {
                        Incidence::Leg(l) => h.legs[*l] = w,
                        Incidence::Half(e, 0) => h.edges[*e].0 = w,
                        Incidence::Half(e, _) => h.edges[*e].1 = w,
                    }
                }
                h.edges.push((v, w));
                out.push(h);
            }
        }
    }
    out
}

fn canonical_graph(g: &StableGraph) -> (StableGraph, u64) {
    let (c, aut) = DecoratedGraph::undecorated(g.clone()).canonical_with_aut();
    (c.graph, aut)
}

/// All stable graphs of type `(g, n)` with at most `max_edges` edges, sorted by
/// edge count and then canonical form.
pub fn enumerate_stable_graphs(g: u32, n: usize, max_edges: usize) -> Result<Vec<GraphWithAut>> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Input(format!("(g, n) = ({g}, {n}) is unstable")));
    }
    let max_edges = max_edges.min((3 * g as i64 - 3 + n as i64) as usize);
    let (c, aut) = canonical_graph(&StableGraph::smooth(g, n));
    let mut layer: BTreeMap<StableGraph, u64> = BTreeMap::new();
    layer.insert(c, aut);
    let mut all: Vec<GraphWithAut> = vec![];
    for _ in 0..=max_edges {
        all.extend(layer.iter().map(|(graph, aut)| GraphWithAut { graph: graph.clone(), aut: *aut }));
        let next: Vec<(StableGraph, u64)> = layer
            .par_iter()
            .flat_map_iter(|(graph, _)| degenerations(graph).into_iter().map(|d| canonical_graph(&d)))
            .collect();
        layer = next.into_iter().collect();
    }
    Ok(all)
}
