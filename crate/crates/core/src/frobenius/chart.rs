//! Frobenius charts: flat coordinates, constant metric, potential.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::linalg;
use crate::exactalg::{parse_poly, parse_rational, MultiPoly, Rational, Series, SeriesMatrix, Symbol};

/// On-disk form of a chart. Every field is text so that the file round-trips
/// byte for byte through [`FrobeniusChart`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub name: String,
    pub dimension: usize,
    pub coordinates: Vec<String>,
    pub metric: Vec<Vec<String>>,
    pub potential: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_index: Option<usize>,
    /// Unit as a constant vector, for charts whose unit is not a basis field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion_point: Option<ExpansionSpec>,
}

/// Local coordinates around the expansion point. `substitution` gives each
/// flat coordinate as a polynomial in the local coordinates; missing entries
/// are the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionSpec {
    pub parameter: String,
    pub coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub substitution: BTreeMap<String, String>,
}

impl ChartSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("chart: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chart spec serializes")
    }
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub param: Symbol,
    /// Local coordinates; the parameter is always first.
    pub locals: Vec<Symbol>,
    /// Flat coordinate `a` as a polynomial in the local coordinates.
    pub subst: Vec<MultiPoly>,
}

#[derive(Clone, Debug)]
pub struct FrobeniusChart {
    pub spec: ChartSpec,
    pub coords: Vec<Symbol>,
    pub eta: Vec<Vec<Rational>>,
    pub eta_inv: Vec<Vec<Rational>>,
    pub potential: MultiPoly,
    pub unit: Vec<Rational>,
    pub expansion: Expansion,
    /// Structure constants: `e_a * e_b = sum_c c[a][b][c] e_c`.
    structure: Vec<Vec<Vec<MultiPoly>>>,
    local: Vec<Vec<Vec<Series>>>,
}

fn dim_err(msg: impl Into<String>) -> Error {
    Error::Dimension(msg.into())
}

impl FrobeniusChart {
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(ChartSpec::from_json(text)?)
    }

    pub fn from_spec(spec: ChartSpec) -> Result<Self> {
        let n = spec.dimension;
        if n == 0 || spec.coordinates.len() != n {
            return Err(dim_err(format!("{} coordinates for dimension {n}", spec.coordinates.len())));
        }
        let coords: Vec<Symbol> = spec.coordinates.iter().map(|c| Symbol::new(c)).collect();
        if spec.metric.len() != n || spec.metric.iter().any(|r| r.len() != n) {
            return Err(dim_err("metric must be N x N"));
        }
        let eta: Vec<Vec<Rational>> = spec
            .metric
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        for i in 0..n {
            for j in 0..n {
                if eta[i][j] != eta[j][i] {
                    return Err(Error::Chart("metric is not symmetric".into()));
                }
            }
        }
        let eta_inv = linalg::inverse(&eta).ok_or_else(|| Error::Chart("metric is degenerate".into()))?;
        let potential = parse_poly(&spec.potential)?;
        let unit = match (&spec.unit_index, &spec.unit) {
            (Some(_), Some(_)) => return Err(Error::Chart("give unit_index or unit, not both".into())),
            (Some(i), None) => {
                if *i >= n {
                    return Err(dim_err(format!("unit index {i} out of range")));
                }
                (0..n).map(|j| if j == *i { Rational::one() } else { Rational::zero() }).collect()
            }
            (None, Some(u)) => {
                if u.len() != n {
                    return Err(dim_err("unit vector length"));
                }
                u.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>()?
            }
            (None, None) => return Err(Error::Chart("missing unit".into())),
        };
        let expansion = build_expansion(&spec, &coords)?;

        let third: Vec<Vec<Vec<MultiPoly>>> = (0..n)
            .map(|a| {
                let da = potential.derivative(&coords[a]);
                (0..n)
                    .map(|b| {
                        let dab = da.derivative(&coords[b]);
                        (0..n).map(|c| dab.derivative(&coords[c])).collect()
                    })
                    .collect()
            })
            .collect();
        let structure: Vec<Vec<Vec<MultiPoly>>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (0..n)
                            .map(|c| {
                                (0..n).fold(MultiPoly::zero(), |acc, d| {
                                    if eta_inv[d][c].is_zero() {
                                        acc
                                    } else {
                                        acc + third[a][b][d].scale(&eta_inv[d][c])
                                    }
                                })
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let mut chart =
            FrobeniusChart { spec, coords, eta, eta_inv, potential, unit, expansion, structure, local: vec![] };
        chart.validate(&third)?;
        chart.local = chart
            .structure
            .iter()
            .map(|ra| ra.iter().map(|rb| rb.iter().map(|p| chart.to_local(p)).collect()).collect())
            .collect::<Result<_>>()?;
        Ok(chart)
    }

    fn validate(&self, third: &[Vec<Vec<MultiPoly>>]) -> Result<()> {
        let n = self.dim();
        for b in 0..n {
            for c in 0..n {
                let s = (0..n).fold(MultiPoly::zero(), |acc, a| acc + third[a][b][c].scale(&self.unit[a]));
                if s != MultiPoly::constant(self.eta[b][c].clone()) {
                    return Err(Error::Chart(format!("unit axiom fails at ({b},{c}): {s}")));
                }
            }
        }
        // WDVV: (e_a e_b) e_c = e_a (e_b e_c)
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.product_poly(&self.product_poly(&basis(n, a), &basis(n, b)), &basis(n, c));
                    let rhs = self.product_poly(&basis(n, a), &self.product_poly(&basis(n, b), &basis(n, c)));
                    if lhs != rhs {
                        return Err(Error::Chart(format!("WDVV fails for ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_spec(&self) -> ChartSpec {
        self.spec.clone()
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn param(&self) -> &Symbol {
        &self.expansion.param
    }

    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> &MultiPoly {
        &self.structure[a][b][c]
    }

    /// Product of vector fields with polynomial components in the flat basis.
    pub fn product_poly(&self, x: &[MultiPoly], y: &[MultiPoly]) -> Vec<MultiPoly> {
        let n = self.dim();
        let mut out = vec![MultiPoly::zero(); n];
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() {
                    continue;
                }
                let xy = &x[a] * &y[b];
                for (c, o) in out.iter_mut().enumerate() {
                    let s = &self.structure[a][b][c];
                    if !s.is_zero() {
                        *o = &*o + &(&xy * s);
                    }
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `x` in the flat basis, column `b` = x * e_b.
    pub fn mult_matrix_poly(&self, x: &[MultiPoly]) -> Vec<Vec<MultiPoly>> {
        let n = self.dim();
        let cols: Vec<Vec<MultiPoly>> = (0..n).map(|b| self.product_poly(x, &basis(n, b))).collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// `det(Tr(e_a e_b))` as a polynomial in the flat coordinates.
    pub fn discriminant(&self) -> MultiPoly {
        let n = self.dim();
        let tr: Vec<MultiPoly> =
            (0..n).map(|c| (0..n).fold(MultiPoly::zero(), |acc, d| acc + self.structure[c][d][d].clone())).collect();
        let gram: Vec<Vec<MultiPoly>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..n).fold(MultiPoly::zero(), |acc, c| acc + &self.structure[a][b][c] * &tr[c]))
                    .collect()
            })
            .collect();
        poly_det(&gram)
    }

    pub fn trace_form(&self) -> Vec<Vec<MultiPoly>> {
        let n = self.dim();
        let tr: Vec<MultiPoly> =
            (0..n).map(|c| (0..n).fold(MultiPoly::zero(), |acc, d| acc + self.structure[c][d][d].clone())).collect();
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| (0..n).fold(MultiPoly::zero(), |acc, c| acc + &self.structure[a][b][c] * &tr[c]))
                    .collect()
            })
            .collect()
    }

    /// Rewrite a polynomial in the flat coordinates in the local coordinates.
    pub fn to_local_poly(&self, p: &MultiPoly) -> Result<MultiPoly> {
        let mut q = p.clone();
        let tmp: Vec<Symbol> = (0..self.dim()).map(|a| Symbol::new(&format!("__flat{a}"))).collect();
        for (c, s) in self.coords.iter().zip(&tmp) {
            q = q.substitute(c, &MultiPoly::symbol(s))?;
        }
        for (s, v) in tmp.iter().zip(&self.expansion.subst) {
            q = q.substitute(s, v)?;
        }
        Ok(q)
    }

    pub fn to_local(&self, p: &MultiPoly) -> Result<Series> {
        Ok(Series::from_poly(&self.to_local_poly(p)?, self.param()))
    }

    /// Product of vector fields with series components.
    pub fn product(&self, x: &[Series], y: &[Series]) -> Result<Vec<Series>> {
        let m = self.mult_matrix(x)?;
        m.apply(y)
    }

    pub fn local_structure_constant(&self, a: usize, b: usize, c: usize) -> &Series {
        &self.local[a][b][c]
    }

    pub fn mult_matrix(&self, x: &[Series]) -> Result<SeriesMatrix> {
        let n = self.dim();
        let param = self.param().clone();
        let mut m = SeriesMatrix::zeros(&param, n, n);
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                for c in 0..n {
                    let s = &self.local[a][b][c];
                    if s.is_zero() {
                        continue;
                    }
                    let add = &x[a] * s;
                    m[(c, b)] = &m[(c, b)] + &add;
                }
            }
        }
        Ok(m)
    }

    pub fn eta_series(&self) -> SeriesMatrix {
        SeriesMatrix::from_rationals(self.param(), &self.eta)
    }

    /// `eta(x, y)` for series vectors in the flat basis.
    pub fn pairing(&self, x: &[Series], y: &[Series]) -> Series {
        let n = self.dim();
        let mut acc = Series::zero(self.param());
        for a in 0..n {
            for b in 0..n {
                if !self.eta[a][b].is_zero() {
                    acc = &acc + &(&x[a] * &y[b]).scale_rational(&self.eta[a][b]);
                }
            }
        }
        acc
    }

    pub fn unit_series(&self) -> Vec<Series> {
        self.unit.iter().map(|u| Series::rational(self.param(), u.clone())).collect()
    }

    pub fn basis_series(&self, a: usize) -> Vec<Series> {
        (0..self.dim())
            .map(|b| if a == b { Series::one(self.param()) } else { Series::zero(self.param()) })
            .collect()
    }

    /// `J[a][b] = d s_a / d y_b` in local coordinates.
    pub fn jacobian(&self) -> SeriesMatrix {
        let ex = &self.expansion;
        let n = self.dim();
        let mut j = SeriesMatrix::zeros(&ex.param, n, n);
        for a in 0..n {
            for (b, y) in ex.locals.iter().enumerate() {
                j[(a, b)] = Series::from_poly(&ex.subst[a].derivative(y), &ex.param);
            }
        }
        j
    }

    /// Derivative of a local series along a local coordinate direction.
    pub fn local_partial(&self, f: &Series, b: usize) -> Series {
        if b == 0 {
            f.deriv()
        } else {
            f.deriv_symbol(&self.expansion.locals[b])
        }
    }
}

fn basis(n: usize, a: usize) -> Vec<MultiPoly> {
    (0..n).map(|b| if a == b { MultiPoly::one() } else { MultiPoly::zero() }).collect()
}

fn poly_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][j] * &poly_det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

fn build_expansion(spec: &ChartSpec, coords: &[Symbol]) -> Result<Expansion> {
    let n = coords.len();
    let Some(ep) = &spec.expansion_point else {
        // default: expand in the last flat coordinate
        let param = coords[n - 1].clone();
        let mut locals = vec![param.clone()];
        locals.extend(coords[..n - 1].iter().cloned());
        let subst = coords.iter().map(MultiPoly::symbol).collect();
        return Ok(Expansion { param, locals, subst });
    };
    if ep.coordinates.len() != n {
        return Err(dim_err("expansion point needs N local coordinates"));
    }
    let param = Symbol::new(&ep.parameter);
    let mut locals: Vec<Symbol> = vec![param.clone()];
    for c in &ep.coordinates {
        let s = Symbol::new(c);
        if s != param {
            locals.push(s);
        }
    }
    if locals.len() != n {
        return Err(Error::Chart("expansion parameter must be one of the local coordinates".into()));
    }
    for k in ep.substitution.keys() {
        if !spec.coordinates.contains(k) {
            return Err(Error::Chart(format!("substitution for unknown coordinate {k}")));
        }
    }
    let subst = coords
        .iter()
        .map(|c| match ep.substitution.get(c.name()) {
            Some(text) => parse_poly(text),
            None => Ok(MultiPoly::symbol(c)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Expansion { param, locals, subst })
}
