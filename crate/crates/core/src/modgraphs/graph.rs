//! Stable dual graphs, their decorations and canonical forms.

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A connected dual graph. Leg `l` (0-based, marking `l + 1`) sits on vertex
/// `legs[l]`; edge `e` has half-edge `(e, 0)` on `edges[e].0` and `(e, 1)` on `edges[e].1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StableGraph {
    pub genera: Vec<u32>,
    pub legs: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// A point of the normalization at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Incidence {
    Leg(usize),
    Half(usize, usize),
}

impl StableGraph {
    pub fn new(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = StableGraph { genera, legs, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn smooth(g: u32, n: usize) -> Self {
        StableGraph { genera: vec![g], legs: vec![0; n], edges: vec![] }
    }

    pub fn validate(&self) -> Result<()> {
        let nv = self.genera.len();
        if nv == 0 {
            return Err(Error::Input("graph without vertices".into()));
        }
        if self.legs.iter().chain(self.edges.iter().flat_map(|(a, b)| [a, b])).any(|v| *v >= nv) {
            return Err(Error::Input("vertex index out of range".into()));
        }
        if !self.is_connected() {
            return Err(Error::Input("graph is not connected".into()));
        }
        if let Some(v) = (0..nv).find(|v| 2 * self.genera[*v] as i64 - 2 + self.valence(*v) as i64 <= 0) {
            return Err(Error::Input(format!("vertex {v} is unstable")));
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn n(&self) -> usize {
        self.legs.len()
    }

    pub fn genus(&self) -> u32 {
        let h1 = self.edges.len() + 1 - self.genera.len();
        self.genera.iter().sum::<u32>() + h1 as u32
    }

    pub fn dim(&self) -> i64 {
        3 * self.genus() as i64 - 3 + self.n() as i64
    }

    pub fn valence(&self, v: usize) -> usize {
        self.legs.iter().filter(|x| **x == v).count()
            + self.edges.iter().map(|(a, b)| (*a == v) as usize + (*b == v) as usize).sum::<usize>()
    }

    pub fn vertex_dim(&self, v: usize) -> i64 {
        3 * self.genera[v] as i64 - 3 + self.valence(v) as i64
    }

    /// Legs at `v` in increasing order, then half-edges in edge order.
    pub fn incidences(&self, v: usize) -> Vec<Incidence> {
        let mut out: Vec<Incidence> = (0..self.legs.len()).filter(|l| self.legs[*l] == v).map(Incidence::Leg).collect();
        for (e, (a, b)) in self.edges.iter().enumerate() {
            if *a == v {
                out.push(Incidence::Half(e, 0));
            }
            if *b == v {
                out.push(Incidence::Half(e, 1));
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let nv = self.genera.len();
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (a, b) in &self.edges {
                for (x, y) in [(*a, *b), (*b, *a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_stable(&self) -> bool {
        (0..self.genera.len()).all(|v| 2 * self.genera[v] as i64 - 2 + self.valence(v) as i64 > 0)
    }

    /// Number of automorphisms fixing the legs.
    pub fn automorphisms(&self) -> u64 {
        DecoratedGraph::undecorated(self.clone()).canonical_with_aut().1
    }
}

/// A dual graph with psi exponents on legs and half-edges and a kappa monomial per vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DecoratedGraph {
    pub graph: StableGraph,
    pub leg_psi: Vec<u32>,
    pub edge_psi: Vec<(u32, u32)>,
    /// Sorted indices `a` of the factors `kappa_a`.
    pub kappa: Vec<Vec<u32>>,
}

type EdgeKey = ((usize, u32), (usize, u32));

impl DecoratedGraph {
    pub fn undecorated(graph: StableGraph) -> Self {
        let (n, e, v) = (graph.legs.len(), graph.edges.len(), graph.genera.len());
        DecoratedGraph { graph, leg_psi: vec![0; n], edge_psi: vec![(0, 0); e], kappa: vec![vec![]; v] }
    }

    /// Smooth graph with the given psi exponents and kappa monomial.
    pub fn smooth(g: u32, psi: &[u32], kappa: &[u32]) -> Self {
        let mut d = DecoratedGraph::undecorated(StableGraph::smooth(g, psi.len()));
        d.leg_psi = psi.to_vec();
        d.kappa[0] = sorted(kappa.to_vec());
        d
    }

    pub fn genus(&self) -> u32 {
        self.graph.genus()
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn codim(&self) -> i64 {
        let psi: u32 = self.leg_psi.iter().sum::<u32>() + self.edge_psi.iter().map(|(a, b)| a + b).sum::<u32>();
        let kap: u32 = self.kappa.iter().flatten().sum();
        self.graph.edges.len() as i64 + psi as i64 + kap as i64
    }

    pub fn psi_at(&self, i: Incidence) -> u32 {
        match i {
            Incidence::Leg(l) => self.leg_psi[l],
            Incidence::Half(e, 0) => self.edge_psi[e].0,
            Incidence::Half(e, _) => self.edge_psi[e].1,
        }
    }

    pub fn set_psi(&mut self, i: Incidence, a: u32) {
        match i {
            Incidence::Leg(l) => self.leg_psi[l] = a,
            Incidence::Half(e, 0) => self.edge_psi[e].0 = a,
            Incidence::Half(e, _) => self.edge_psi[e].1 = a,
        }
    }

    /// Degree of the decoration living on the moduli space of vertex `v`.
    pub fn vertex_degree(&self, v: usize) -> i64 {
        let psi: u32 = self.graph.incidences(v).into_iter().map(|i| self.psi_at(i)).sum();
        psi as i64 + self.kappa[v].iter().sum::<u32>() as i64
    }

    /// True when some vertex carries a decoration above the dimension of its moduli space.
    pub fn vanishes_by_dimension(&self) -> bool {
        (0..self.graph.num_vertices()).any(|v| self.vertex_degree(v) > self.graph.vertex_dim(v))
    }

    fn vertex_key(&self, v: usize) -> (u32, Vec<u32>, Vec<(usize, u32)>, Vec<u32>) {
        let mut legs = vec![];
        let mut halves = vec![];
        for i in self.graph.incidences(v) {
            match i {
                Incidence::Leg(l) => legs.push((l, self.leg_psi[l])),
                h => halves.push(self.psi_at(h)),
            }
        }
        halves.sort();
        (self.graph.genera[v], self.kappa[v].clone(), legs, halves)
    }

    fn edge_keys(&self, pos: &[usize]) -> Vec<EdgeKey> {
        let mut keys: Vec<EdgeKey> = self
            .graph
            .edges
            .iter()
            .zip(&self.edge_psi)
            .map(|((a, b), (p, q))| {
                let x = (pos[*a], *p);
                let y = (pos[*b], *q);
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        keys.sort();
        keys
    }

    /// Canonical representative and the order of its automorphism group
    /// (bijections of vertices and half-edges fixing legs and decorations).
    pub fn canonical_with_aut(&self) -> (DecoratedGraph, u64) {
        let cache = canon_cache();
        if let Some(hit) = cache.read().expect("cache lock").get(self) {
            return hit.clone();
        }
        let out = self.canonicalize_uncached();
        cache.write().expect("cache lock").insert(self.clone(), out.clone());
        out
    }

    pub fn canonical(&self) -> DecoratedGraph {
        self.canonical_with_aut().0
    }

    fn canonicalize_uncached(&self) -> (DecoratedGraph, u64) {
        let nv = self.graph.num_vertices();
        let keys: Vec<_> = (0..nv).map(|v| self.vertex_key(v)).collect();
        let mut order: Vec<usize> = (0..nv).collect();
        order.sort_by(|a, b| keys[*a].cmp(&keys[*b]));
        let mut blocks: Vec<Vec<usize>> = vec![];
        for v in order {
            match blocks.last_mut() {
                Some(b) if keys[b[0]] == keys[v] => b.push(v),
                _ => blocks.push(vec![v]),
            }
        }
        let mut best: Option<(Vec<EdgeKey>, Vec<usize>)> = None;
        let mut count = 0u64;
        for_each_block_order(&blocks, &mut |seq: &[usize]| {
            let mut pos = vec![0; nv];
            for (i, v) in seq.iter().enumerate() {
                pos[*v] = i;
            }
            let enc = self.edge_keys(&pos);
            match &best {
                Some((b, _)) if *b < enc => {}
                Some((b, _)) if *b == enc => count += 1,
                _ => {
                    best = Some((enc, pos));
                    count = 1;
                }
            }
        });
        let (enc, pos) = best.expect("at least one ordering");
        let mut genera = vec![0; nv];
        let mut kappa = vec![vec![]; nv];
        for v in 0..nv {
            genera[pos[v]] = self.graph.genera[v];
            kappa[pos[v]] = self.kappa[v].clone();
        }
        let legs = self.graph.legs.iter().map(|v| pos[*v]).collect();
        let edges = enc.iter().map(|((a, _), (b, _))| (*a, *b)).collect();
        let edge_psi = enc.iter().map(|((_, p), (_, q))| (*p, *q)).collect();
        let mut aut = count;
        let mut mult: BTreeMap<&EdgeKey, u64> = BTreeMap::new();
        for k in &enc {
            *mult.entry(k).or_default() += 1;
            if k.0 == k.1 {
                aut *= 2;
            }
        }
        for m in mult.values() {
            aut *= (1..=*m).product::<u64>();
        }
        let canon = DecoratedGraph { graph: StableGraph { genera, legs, edges }, leg_psi: self.leg_psi.clone(), edge_psi, kappa };
        (canon, aut)
    }

    /// Compact text form, e.g. `[g1 k(1)|l0^1] [g0] e(0^1,1)`.
    pub fn to_text(&self) -> String {
        let mut parts = vec![];
        for v in 0..self.graph.num_vertices() {
            let mut s = format!("[g{}", self.graph.genera[v]);
            if !self.kappa[v].is_empty() {
                s += &format!(" k({})", self.kappa[v].iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","));
            }
            let legs: Vec<String> = (0..self.n())
                .filter(|l| self.graph.legs[*l] == v)
                .map(|l| if self.leg_psi[l] > 0 { format!("{}^{}", l + 1, self.leg_psi[l]) } else { (l + 1).to_string() })
                .collect();
            if !legs.is_empty() {
                s += &format!("|{}", legs.join(","));
            }
            parts.push(s + "]");
        }
        for ((a, b), (p, q)) in self.graph.edges.iter().zip(&self.edge_psi) {
            let end = |v: usize, x: u32| if x > 0 { format!("{v}^{x}") } else { v.to_string() };
            parts.push(format!("e({},{})", end(*a, *p), end(*b, *q)));
        }
        parts.join(" ")
    }
}

pub(crate) fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

type CanonCache = RwLock<HashMap<DecoratedGraph, (DecoratedGraph, u64)>>;

fn canon_cache() -> &'static CanonCache {
    static CACHE: OnceLock<CanonCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = vec![];
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn for_each_block_order(blocks: &[Vec<usize>], f: &mut dyn FnMut(&[usize])) {
    fn rec(blocks: &[Vec<usize>], i: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == blocks.len() {
            f(acc);
            return;
        }
        for p in permutations(&blocks[i]) {
            let len = acc.len();
            acc.extend(p);
            rec(blocks, i + 1, acc, f);
            acc.truncate(len);
        }
    }
    rec(blocks, 0, &mut vec![], f)
}
