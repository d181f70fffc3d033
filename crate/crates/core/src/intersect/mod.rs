//! Integrals of decorated strata over the moduli spaces of stable curves:
//! psi intersection numbers by the DVV recursion, kappa classes by adding
//! points, and a partial pairing for checking relations.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::rational::odd_double_factorial;
use crate::exactalg::Rational;
use crate::modgraphs::{psi_kappa_monomials, strata_basis, Coefficient, DecoratedGraph, Incidence, StrataVector};

type Cache = RwLock<HashMap<(u32, Vec<u32>), Rational>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Snapshot of every memoized correlator, for exhaustive property checks.
pub fn cached_correlators() -> Vec<(u32, Vec<u32>, Rational)> {
    let c = cache().read().expect("cache lock");
    let mut out: Vec<_> = c.iter().map(|((g, a), v)| (*g, a.clone(), v.clone())).collect();
    out.sort();
    out
}

fn df(k: i64) -> Rational {
    // (2k - 1)!!, with (-1)!! = 1
    Rational::from_integer(odd_double_factorial(k))
}

/// `<tau_{a_1} ... tau_{a_n}>_g` over the moduli stack; zero off dimension.
pub fn psi_integral(g: u32, exps: &[u32]) -> Rational {
    let n = exps.len() as i64;
    if 2 * g as i64 - 2 + n <= 0 {
        return Rational::zero();
    }
    if exps.iter().map(|a| *a as i64).sum::<i64>() != 3 * g as i64 - 3 + n {
        return Rational::zero();
    }
    let mut key = exps.to_vec();
    key.sort_unstable_by(|a, b| b.cmp(a));
    if let Some(v) = cache().read().expect("cache lock").get(&(g, key.clone())) {
        return v.clone();
    }
    let v = dvv(g, &key);
    cache().write().expect("cache lock").insert((g, key), v.clone());
    v
}

// `key` is sorted decreasingly; the first exponent drives the recursion
fn dvv(g: u32, key: &[u32]) -> Rational {
    if g == 0 && key == [0, 0, 0] {
        return Rational::one();
    }
    if g == 1 && key == [1] {
        return Rational::new(1.into(), 24.into());
    }
    let k = key[0] as i64 - 1;
    let rest = &key[1..];
    let mut acc = Rational::zero();
    for j in 0..rest.len() {
        let dj = rest[j] as i64;
        let e = dj + k;
        if e < 0 {
            continue;
        }
        let mut v = rest.to_vec();
        v[j] = e as u32;
        acc += df(k + dj + 1) / df(dj) * psi_integral(g, &v);
    }
    if k >= 1 {
        let half = Rational::new(1.into(), 2.into());
        for r in 0..k {
            let s = k - 1 - r;
            let w = df(r + 1) * df(s + 1) * &half;
            if g >= 1 {
                let mut v = vec![r as u32, s as u32];
                v.extend_from_slice(rest);
                acc += &w * psi_integral(g - 1, &v);
            }
            let m = rest.len();
            for mask in 0u64..(1u64 << m) {
                let mut a = vec![r as u32];
                let mut b = vec![s as u32];
                for (i, x) in rest.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        a.push(*x);
                    } else {
                        b.push(*x);
                    }
                }
                for g1 in 0..=g {
                    let x = psi_integral(g1, &a);
                    if x.is_zero() {
                        continue;
                    }
                    acc += &w * x * psi_integral(g - g1, &b);
                }
            }
        }
    }
    acc / df(k + 2)
}

/// `int psi^a kappa_B` over `M_{g,n}`, with kappa classes traded for psi
/// classes at extra points: `kappa_b` becomes `psi_{n+1}^{b+1}` and every other
/// kappa factor picks up the correction `-psi_{n+1}^{b'}`.
pub fn vertex_integral(g: u32, psi: &[u32], kappa: &[u32]) -> Rational {
    let deg: i64 = psi.iter().chain(kappa).map(|x| *x as i64).sum();
    if deg != 3 * g as i64 - 3 + psi.len() as i64 {
        return Rational::zero();
    }
    if kappa.is_empty() {
        return psi_integral(g, psi);
    }
    let b1 = kappa[0];
    let rest = &kappa[1..];
    let mut acc = Rational::zero();
    for mask in 0u64..(1u64 << rest.len()) {
        let mut extra = b1 + 1;
        let mut keep = vec![];
        let mut sign = 1i64;
        for (i, b) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                extra += b;
                sign = -sign;
            } else {
                keep.push(*b);
            }
        }
        let mut p = psi.to_vec();
        p.push(extra);
        let v = vertex_integral(g, &p, &keep);
        acc += Rational::from_integer(sign.into()) * v;
    }
    acc
}

/// Integral of one basis element `xi_*(decoration)`: the product of the vertex integrals.
pub fn integrate_graph(d: &DecoratedGraph) -> Rational {
    let mut acc = Rational::one();
    for v in 0..d.graph.num_vertices() {
        let psi: Vec<u32> = d.graph.incidences(v).into_iter().map(|i| d.psi_at(i)).collect();
        acc *= vertex_integral(d.graph.genera[v], &psi, &d.kappa[v]);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Integral of a top-degree strata vector.
pub fn integrate_strata(v: &StrataVector<Rational>) -> Result<Rational> {
    let top = v.dim();
    let mut acc = Rational::zero();
    for (d, c) in &v.terms {
        if d.codim() != top {
            return Err(Error::Input(format!("term {} has codimension {} below {top}", d.to_text(), d.codim())));
        }
        acc += c * integrate_graph(d);
    }
    Ok(acc)
}

/// Integral of the stratum class `[Gamma] = xi_*(1) / |Aut Gamma|` of a decorated graph.
pub fn integrate_stratum_class(d: &DecoratedGraph) -> Rational {
    let (canon, aut) = d.canonical_with_aut();
    integrate_graph(&canon) / Rational::from_integer((aut as i64).into())
}

/// Product of a smooth-graph monomial `psi^a kappa_B` with a basis element:
/// psi classes pull back to the legs, `kappa_b` to the sum over vertices.
pub fn multiply_monomial(m: &DecoratedGraph, d: &DecoratedGraph) -> Result<StrataVector<Rational>> {
    if m.graph.num_vertices() != 1 || !m.graph.edges.is_empty() {
        return Err(Error::Input("only psi/kappa monomials on the smooth graph act".into()));
    }
    if m.n() != d.n() || m.genus() != d.genus() {
        return Err(Error::Dimension("monomial and stratum live on different moduli spaces".into()));
    }
    let mut base = d.clone();
    for l in 0..d.n() {
        base.leg_psi[l] += m.leg_psi[l];
    }
    let mut cur: Vec<DecoratedGraph> = vec![base];
    for b in &m.kappa[0] {
        let mut next = vec![];
        for x in &cur {
            for v in 0..x.graph.num_vertices() {
                let mut y = x.clone();
                y.kappa[v].push(*b);
                y.kappa[v].sort_unstable();
                next.push(y);
            }
        }
        cur = next;
    }
    let mut out = StrataVector::new(d.genus(), d.n());
    for x in cur {
        out.add_term(x, Rational::one());
    }
    Ok(out)
}

/// The partial pairing of a codimension-`d` vector with a complementary monomial.
pub fn pair_with_monomial(v: &StrataVector<Rational>, m: &DecoratedGraph) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (d, c) in &v.terms {
        let prod = multiply_monomial(m, d)?;
        for (x, k) in &prod.terms {
            acc += c * k * integrate_graph(x);
        }
    }
    Ok(acc)
}

/// Rows: all basis elements of codimension `d`. Columns: psi/kappa monomials
/// of the complementary degree on the smooth graph.
#[derive(Clone, Debug)]
pub struct PairingMatrix {
    pub rows: Vec<DecoratedGraph>,
    pub cols: Vec<DecoratedGraph>,
    pub entries: Vec<Vec<Rational>>,
}

pub fn pairing_matrix(g: u32, n: usize, d: u32) -> Result<PairingMatrix> {
    let top = 3 * g as i64 - 3 + n as i64;
    if d as i64 > top {
        return Err(Error::Input(format!("codimension {d} exceeds dimension {top}")));
    }
    let rows = strata_basis(g, n, d)?;
    let cols = psi_kappa_monomials(g, n, (top - d as i64) as u32);
    let mut entries = vec![];
    for r in &rows {
        let single = StrataVector::single(r.clone(), Rational::one());
        entries.push(cols.iter().map(|c| pair_with_monomial(&single, c)).collect::<Result<Vec<_>>>()?);
    }
    Ok(PairingMatrix { rows, cols, entries })
}

/// Psi exponents at the incidences of vertex `v`, in incidence order.
pub fn vertex_psi(d: &DecoratedGraph, v: usize) -> Vec<u32> {
    d.graph.incidences(v).into_iter().map(|i: Incidence| d.psi_at(i)).collect()
}

/// Convenience: the coefficient type is irrelevant to the codimension check.
pub fn top_degree_terms<C: Coefficient>(v: &StrataVector<C>) -> usize {
    v.terms.keys().filter(|d| d.codim() == v.dim()).count()
}
