//! The two-dimensional family with metric `[[0,1],[1,0]]` and `(d/dt)^2 = f(t) d/dt0`.
//!
//! In the flat basis `(d/dt0, d/dt)` the R-matrix `S = [[1 + a z, b z], [c z, 1 + d z]] + O(z^2)`
//! satisfies `[S, (0 f; 1 0)] + z S' + z (f'/4f) diag(-1, 1) S = 0`. Writing
//! `c = gamma/f - (5/48) f'/f^2` turns the second order condition into
//! `2 gamma' - (f'/f) gamma + f''/(24 f) = 0`, solved here by series at chosen points.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Signed, Zero};
use serde::Serialize;

use super::{solve_flatness, ConstantPolicy, RMatrix};
use crate::error::{Error, Result};
use crate::exactalg::{fr, q, Frac, MultiPoly, Rational, Series, SeriesMatrix, Symbol};
use crate::frobenius::roots::rational_poly_roots;
use crate::frobenius::{ChartSpec, ExpansionSpec, FrameOptions, FrobeniusChart, IdempotentFrame};

/// Univariate rational polynomial, lowest degree first.
pub type Poly = Vec<Rational>;

pub fn univariate(p: &MultiPoly, t: &Symbol) -> Result<Poly> {
    let mut out: Poly = Vec::new();
    for (m, c) in p.terms() {
        let e = m.exponent(t);
        if !m.without(t).is_one() || !e.is_integer() || e.is_negative() {
            return Err(Error::Input(format!("{p} is not a polynomial in {t} with rational coefficients")));
        }
        let k = e.to_integer() as usize;
        if out.len() <= k {
            out.resize(k + 1, Rational::zero());
        }
        out[k] += c;
    }
    Ok(trim(out))
}

fn trim(mut p: Poly) -> Poly {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

pub fn poly_to_multi(p: &[Rational], t: &Symbol) -> MultiPoly {
    p.iter().enumerate().fold(MultiPoly::zero(), |acc, (k, c)| {
        acc + MultiPoly::symbol(t).pow(k as u32).scale(c)
    })
}

fn coeff(p: &[Rational], k: i64) -> Rational {
    if k < 0 {
        Rational::zero()
    } else {
        p.get(k as usize).cloned().unwrap_or_else(Rational::zero)
    }
}

fn deriv(p: &[Rational]) -> Poly {
    p.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer((k as i64).into())).collect()
}

fn add(a: &[Rational], b: &[Rational]) -> Poly {
    let n = a.len().max(b.len());
    trim((0..n as i64).map(|k| coeff(a, k) + coeff(b, k)).collect())
}

fn scale(a: &[Rational], c: &Rational) -> Poly {
    trim(a.iter().map(|x| x * c).collect())
}

fn mul(a: &[Rational], b: &[Rational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact quotient `a / b`, or `None` if `b` does not divide `a`.
fn div_exact(a: &[Rational], b: &[Rational]) -> Option<Poly> {
    let b = trim(b.to_vec());
    if b.is_empty() {
        return None;
    }
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return if rem.is_empty() { Some(vec![]) } else { None };
    }
    let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let k = rem.len() - b.len();
        let c = rem.last().unwrap() / b.last().unwrap();
        for (j, y) in b.iter().enumerate() {
            rem[k + j] -= &c * y;
        }
        quot[k] = c;
        rem = trim(rem);
    }
    if rem.is_empty() {
        Some(trim(quot))
    } else {
        None
    }
}

/// Taylor shift: coefficients of `p(point + s)` in `s`.
pub fn taylor_shift(p: &[Rational], point: &Rational) -> Poly {
    let mut out = vec![Rational::zero(); p.len()];
    for (k, c) in p.iter().enumerate() {
        // c (point + s)^k
        let mut binom = Rational::one();
        for j in 0..=k {
            let pw = crate::exactalg::rational::rat_pow(point, (k - j) as i64);
            out[j] += c * &binom * pw;
            binom = binom * Rational::from_integer(((k - j) as i64).into()) / Rational::from_integer(((j + 1) as i64).into());
        }
    }
    trim(out)
}

/// A linear first order ODE `P y' + Q y + R = 0` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOde {
    pub p: Poly,
    pub q: Poly,
    pub r: Poly,
}

impl LinearOde {
    pub fn residual(&self, y: &[Rational]) -> Poly {
        add(&add(&mul(&self.p, &deriv(y)), &mul(&self.q, y)), &self.r)
    }

    pub fn shifted(&self, point: &Rational) -> LinearOde {
        LinearOde { p: taylor_shift(&self.p, point), q: taylor_shift(&self.q, point), r: taylor_shift(&self.r, point) }
    }
}

/// Laurent series solution `sum_n y_n s^n`, `s = x - point`.
#[derive(Clone, Debug, Serialize)]
pub struct OdeSeries {
    pub point: String,
    /// Exponent of the first stored coefficient.
    pub start: i64,
    pub coeffs: Vec<String>,
    /// Index whose coefficient is free (set to zero) when the indicial root is an integer.
    pub free_index: Option<i64>,
    /// False when an obstruction (a logarithmic term) was met.
    pub meromorphic: bool,
    /// Closed form in the original variable when the series terminates.
    pub exact: Option<String>,
    #[serde(skip)]
    pub values: Vec<Rational>,
    #[serde(skip)]
    pub point_value: Rational,
}

impl OdeSeries {
    /// Coefficient of `s^n`.
    pub fn coeff(&self, n: i64) -> Rational {
        let i = n - self.start;
        if i < 0 {
            Rational::zero()
        } else {
            self.values.get(i as usize).cloned().unwrap_or_else(Rational::zero)
        }
    }

    /// Coefficients of `(point - x)^i = (-s)^i`, `i = 0..count`.
    pub fn reflected(&self, count: usize) -> Vec<Rational> {
        (0..count as i64).map(|i| if i % 2 == 0 { self.coeff(i) } else { -self.coeff(i) }).collect()
    }
}

/// Solve `P y' + Q y + R = 0` by series at `point`, computing `terms` coefficients.
/// `var` names the variable in the closed form, if one is found.
pub fn solve_linear_ode(ode: &LinearOde, point: &Rational, terms: usize, var: &str) -> Result<OdeSeries> {
    let loc = ode.shifted(point);
    let m = loc.p.iter().position(|c| !c.is_zero()).ok_or_else(|| Error::Input("leading coefficient is zero".into()))? as i64;
    let ord_q = loc.q.iter().position(|c| !c.is_zero()).map(|x| x as i64);
    if ord_q.map(|o| o < m - 1).unwrap_or(false) {
        return Err(Error::Input("irregular singular point".into()));
    }
    let ord_r = loc.r.iter().position(|c| !c.is_zero()).map(|x| x as i64);
    let start = ord_r.map(|o| (o - m + 1).min(0)).unwrap_or(0);
    let pm = coeff(&loc.p, m);
    let qm1 = coeff(&loc.q, m - 1);
    let mut ys: BTreeMap<i64, Rational> = BTreeMap::new();
    let mut free = None;
    let mut meromorphic = true;
    for idx in 0..terms as i64 {
        let n = start + idx;
        let k = n + m - 1;
        // equation for s^k: sum_j p_j (k-j+1) y_{k-j+1} + q_j y_{k-j} + r_k
        let mut s = coeff(&loc.r, k);
        for (i, y) in &ys {
            let jp = k - i + 1;
            s += coeff(&loc.p, jp) * Rational::from_integer((*i).into()) * y;
            s += coeff(&loc.q, k - i) * y;
        }
        let c = &pm * Rational::from_integer(n.into()) + &qm1;
        let y = if c.is_zero() {
            free = Some(n);
            if !s.is_zero() {
                meromorphic = false;
            }
            Rational::zero()
        } else {
            -s / c
        };
        ys.insert(n, y);
    }
    let values: Vec<Rational> = ys.values().cloned().collect();
    let exact = if meromorphic && start >= 0 { terminating(&loc, &values, start, point, var) } else { None };
    Ok(OdeSeries {
        point: point.to_string(),
        start,
        coeffs: values.iter().map(|c| c.to_string()).collect(),
        free_index: free,
        meromorphic,
        exact,
        values,
        point_value: point.clone(),
    })
}

// Drop a vanishing tail and test the resulting polynomial exactly.
fn terminating(loc: &LinearOde, values: &[Rational], start: i64, point: &Rational, var: &str) -> Option<String> {
    let last_nonzero = values.iter().rposition(|c| !c.is_zero());
    let len = last_nonzero.map(|i| i + 1).unwrap_or(0);
    if len + 3 > values.len() {
        return None;
    }
    let mut poly = vec![Rational::zero(); start as usize];
    poly.extend(values[..len].iter().cloned());
    if !loc.residual(&poly).is_empty() {
        return None;
    }
    let global = taylor_shift(&poly, &-point.clone());
    Some(poly_to_multi(&global, &Symbol::new(var)).to_string())
}

/// `2 f gamma' - f' gamma + f''/24 = 0`.
pub fn gamma_ode(f: &[Rational]) -> LinearOde {
    let df = deriv(f);
    LinearOde { p: scale(f, &Rational::from_integer(2.into())), q: scale(&df, &-Rational::one()), r: scale(&deriv(&df), &q(1, 24)) }
}

/// ODE for `delta` with `gamma = f delta + g0`: `2 f delta' + f' delta + (2 f g0' - f' g0 + f''/24)/f = 0`.
pub fn delta_ode(f: &[Rational], g0: &[Rational]) -> Result<LinearOde> {
    let df = deriv(f);
    let two = Rational::from_integer(2.into());
    let num = add(
        &add(&scale(&mul(f, &deriv(g0)), &two), &scale(&mul(&df, g0), &-Rational::one())),
        &scale(&deriv(&df), &q(1, 24)),
    );
    let r = div_exact(&num, f).ok_or_else(|| Error::Input("shift does not clear the denominator f".into()))?;
    Ok(LinearOde { p: scale(f, &two), q: df, r })
}

/// Rewrite an ODE in `t` that is invariant under `t -> -t` in the variable `u = t^2`.
pub fn even_reduction(ode: &LinearOde) -> Result<LinearOde> {
    // y(t) = Y(t^2): P(t) 2 t Y' + Q Y + R = 0
    let tp = mul(&[Rational::zero(), Rational::from_integer(2.into())], &ode.p);
    let half = |p: &[Rational]| -> Result<Poly> {
        let mut out = Vec::new();
        for (k, c) in p.iter().enumerate() {
            if k % 2 == 1 && !c.is_zero() {
                return Err(Error::Input("ODE is not even in t".into()));
            }
            if k % 2 == 0 {
                out.push(c.clone());
            }
        }
        Ok(trim(out))
    };
    // an odd R and Q together with an even tP do not occur; allow a common factor t
    match (half(&tp), half(&ode.q), half(&ode.r)) {
        (Ok(p), Ok(q), Ok(r)) => Ok(LinearOde { p, q, r }),
        _ => {
            let t = [Rational::zero(), Rational::one()];
            let (p, q, r) = (div_exact(&tp, &t), div_exact(&ode.q, &t), div_exact(&ode.r, &t));
            match (p, q, r) {
                (Some(p), Some(q), Some(r)) => Ok(LinearOde { p: half(&p)?, q: half(&q)?, r: half(&r)? }),
                _ => Err(Error::Input("ODE is not even in t".into())),
            }
        }
    }
}

/// Chart for `f`, expanded in `s` with `t = point + sign * s` (`sign` is 1 or -1).
pub fn family_chart(f: &MultiPoly, point: &Rational, sign: i64) -> Result<ChartSpec> {
    let t = Symbol::new("t");
    let fp = univariate(f, &t)?;
    if fp.is_empty() {
        return Err(Error::Input("f must be nonzero".into()));
    }
    let big_f = f.integrate(&t)?.integrate(&t)?.integrate(&t)?;
    let potential = MultiPoly::var("t0").pow(2).scale(&q(1, 2)) * MultiPoly::var("t") + big_f;
    let expansion_point = if point.is_zero() && sign == 1 {
        None
    } else {
        let mut subst = BTreeMap::new();
        let dir = if sign == 1 { "+" } else { "-" };
        subst.insert("t".to_string(), format!("{point} {dir} s"));
        Some(ExpansionSpec { parameter: "s".into(), coordinates: vec!["s".into(), "t0".into()], substitution: subst })
    };
    Ok(ChartSpec {
        name: format!("family f = {f}"),
        dimension: 2,
        coordinates: vec!["t0".into(), "t".into()],
        metric: vec![vec!["0".into(), "1".into()], vec!["1".into(), "0".into()]],
        potential: potential.to_string(),
        unit_index: Some(0),
        unit: None,
        expansion_point,
    })
}

/// Matrix-solver side of the family at one point.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixCheck {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    /// `f c + (5/48) f'/f`.
    pub gamma: String,
    /// Constant `alpha` in `diag(alpha, -alpha)` at order one.
    pub alpha: String,
    pub z1_relations: bool,
    pub gamma_ode_residual_zero: bool,
    pub flat_equation_residual_zero: bool,
    /// The matrix gamma equals the series solution (only asserted where it is unique).
    pub agrees_with_series: Option<bool>,
    #[serde(skip)]
    pub gamma_series: Series,
    #[serde(skip)]
    pub r: RMatrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub point: String,
    pub f_order: i64,
    pub gamma: OdeSeries,
    pub matrix: Option<MatrixCheck>,
    pub matrix_error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub f: String,
    pub points: Vec<PointReport>,
    /// Common closed form of the solutions at the zeros of `f`, when they agree.
    pub global_meromorphic: Option<String>,
    pub delta: Option<DeltaReport>,
}

/// `gamma = f delta + g0`, rewritten in `u = t^2` when the resulting ODE is even.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    pub shift: String,
    /// `[P, Q, R]` of `P delta' + Q delta + R = 0` as polynomials in the ODE variable.
    pub ode: [String; 3],
    pub variable: String,
    pub series: Vec<OdeSeries>,
    #[serde(skip)]
    pub linear: LinearOde,
}

#[derive(Clone, Debug)]
pub struct FamilyOptions {
    pub z_order: usize,
    pub precision: Frac,
    pub terms: usize,
    pub points: Option<Vec<Rational>>,
    pub matrix: bool,
    /// Shift `g0` in `gamma = f delta + g0`; enables the delta diagnostics.
    pub delta_shift: Option<MultiPoly>,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions { z_order: 2, precision: fr(4, 1), terms: 12, points: None, matrix: true, delta_shift: None }
    }
}

/// Default expansion points: `t = 1` and every rational root of `f`.
pub fn default_points(f: &[Rational]) -> Result<Vec<Rational>> {
    let mut pts = BTreeSet::new();
    pts.insert(Rational::one());
    for (r, _) in rational_poly_roots(f)? {
        if let Some(x) = r.as_rational() {
            pts.insert(x);
        }
    }
    Ok(pts.into_iter().collect())
}

pub fn solve_2d_family(f: &MultiPoly, opts: &FamilyOptions) -> Result<FamilyReport> {
    let t = Symbol::new("t");
    let fp = univariate(f, &t)?;
    if fp.is_empty() {
        return Err(Error::Input("f must be nonzero".into()));
    }
    let points = match &opts.points {
        Some(p) => p.clone(),
        None => default_points(&fp)?,
    };
    let ode = gamma_ode(&fp);
    let mut reports = Vec::new();
    for p in &points {
        let gamma = solve_linear_ode(&ode, p, opts.terms, "t")?;
        let f_order = taylor_shift(&fp, p).iter().position(|c| !c.is_zero()).unwrap_or(0) as i64;
        let (matrix, matrix_error) = if opts.matrix {
            match matrix_check(f, &fp, p, &gamma, f_order, opts) {
                Ok(m) => (Some(m), None),
                Err(e) => (None, Some(e.to_string())),
            }
        } else {
            (None, None)
        };
        reports.push(PointReport { point: p.to_string(), f_order, gamma, matrix, matrix_error });
    }
    // at regular points the solution has a free constant, so only singular points decide
    let exacts: BTreeSet<Option<String>> = reports.iter().filter(|r| r.f_order > 0).map(|r| r.gamma.exact.clone()).collect();
    let global = match (exacts.len(), exacts.iter().next()) {
        (1, Some(Some(e))) => Some(e.clone()),
        _ => None,
    };
    let delta = match &opts.delta_shift {
        Some(g0) => Some(delta_analysis(&fp, &univariate(g0, &t)?, opts.terms)?),
        None => None,
    };
    Ok(FamilyReport { f: f.to_string(), points: reports, global_meromorphic: global, delta })
}

/// Series solutions for `delta` at every root of its leading coefficient.
pub fn delta_analysis(f: &[Rational], g0: &[Rational], terms: usize) -> Result<DeltaReport> {
    let ode_t = delta_ode(f, g0)?;
    let (ode, var) = match even_reduction(&ode_t) {
        Ok(o) => (o, "u"),
        Err(_) => (ode_t, "t"),
    };
    let x = Symbol::new(var);
    let mut pts: BTreeSet<Rational> = BTreeSet::new();
    for (r, _) in rational_poly_roots(&ode.p)? {
        if let Some(v) = r.as_rational() {
            pts.insert(v);
        }
    }
    let series = pts.iter().map(|p| solve_linear_ode(&ode, p, terms, var)).collect::<Result<Vec<_>>>()?;
    Ok(DeltaReport {
        shift: poly_to_multi(g0, &Symbol::new("t")).to_string(),
        ode: [poly_to_multi(&ode.p, &x).to_string(), poly_to_multi(&ode.q, &x).to_string(), poly_to_multi(&ode.r, &x).to_string()],
        variable: var.into(),
        series,
        linear: ode,
    })
}

/// Flat-basis R-matrix in the convention of the displayed equation: `S = Psi R^{-1} Psi^{-1}`.
pub fn flat_family_r(frame: &IdempotentFrame, r: &RMatrix) -> Result<Vec<SeriesMatrix>> {
    let psi_inv = frame.psi_inv()?;
    r.inverse_coeffs().iter().map(|m| frame.psi.mul(m)?.mul(&psi_inv)).collect()
}

fn has_fractional(s: &Series) -> Option<(Frac, MultiPoly)> {
    s.terms().find(|(e, _)| !e.is_integer()).map(|(e, c)| (e, c.clone()))
}

fn matrix_check(
    f: &MultiPoly,
    fp: &[Rational],
    point: &Rational,
    gamma: &OdeSeries,
    f_order: i64,
    opts: &FamilyOptions,
) -> Result<MatrixCheck> {
    // orient the local parameter so that f has a positive leading coefficient
    let shifted = taylor_shift(fp, point);
    let sign: i64 = match shifted.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() && f_order % 2 == 1 => -1,
        _ => 1,
    };
    let sigma = Rational::from_integer(sign.into());
    let spec = family_chart(f, point, sign)?;
    let chart = FrobeniusChart::from_spec(spec)?;
    let frame = IdempotentFrame::new(&chart, &FrameOptions { precision: opts.precision, ..Default::default() })?;
    let param = frame.param().clone();
    let local_f: Poly = shifted.iter().enumerate().map(|(k, c)| if k % 2 == 1 { c * &sigma } else { c.clone() }).collect();
    let fs = Series::from_poly(&poly_to_multi(&local_f, &param), &param);
    // d/dt = sign * d/ds
    let dt = |x: &Series| x.deriv().scale_rational(&sigma);
    let solve = |alpha: &MultiPoly| -> Result<(RMatrix, Vec<SeriesMatrix>)> {
        let mut table = BTreeMap::new();
        table.insert(1usize, vec![alpha.clone(), -alpha.clone()]);
        let r = solve_flatness(&frame, opts.z_order, &ConstantPolicy::Table(table))?;
        let s = flat_family_r(&frame, &r)?;
        Ok((r, s))
    };
    let (mut r, mut s) = solve(&MultiPoly::zero())?;
    let mut alpha = MultiPoly::zero();
    if let Some((e, c0)) = has_fractional(&s[1][(1, 0)]) {
        // c is affine in alpha; cancel the leading fractional term
        let (_, s1) = solve(&MultiPoly::one())?;
        let dc = &s1[1][(1, 0)] - &s[1][(1, 0)];
        let slope = dc.coeff(e).filter(|x| !x.is_zero()).ok_or_else(|| {
            Error::Consistency("order-one constant does not reach the fractional part of c".into())
        })?;
        alpha = -(&c0 * &slope.inv()?);
        let (r2, s2) = solve(&alpha)?;
        r = r2;
        s = s2;
    }
    let (a, b, c, d) = (s[1][(0, 0)].clone(), s[1][(0, 1)].clone(), s[1][(1, 0)].clone(), s[1][(1, 1)].clone());
    let prec = frame.precision;
    let finv = crate::frobenius::frame::inv_p(&fs, prec)?;
    let dfs = dt(&fs);
    let ratio = &dfs * &finv;
    let z1 = (&(&b - &(&fs * &c)) - &ratio.scale_rational(&q(1, 4))).is_zero() && (&a - &d).is_zero();
    let g = &(&fs * &c) + &ratio.scale_rational(&q(5, 48));
    let res = &(&(&fs * &dt(&g)).scale_rational(&Rational::from_integer(2.into())) - &(&dfs * &g))
        + &dt(&dfs).scale_rational(&q(1, 24));
    // the displayed equation for S at every computed order
    let mut flat_ok = true;
    let mut mmat = SeriesMatrix::zeros(&param, 2, 2);
    mmat[(0, 1)] = fs.clone();
    mmat[(1, 0)] = Series::one(&param);
    let mut dmat = SeriesMatrix::zeros(&param, 2, 2);
    dmat[(0, 0)] = -&ratio.scale_rational(&q(1, 4));
    dmat[(1, 1)] = ratio.scale_rational(&q(1, 4));
    for k in 0..s.len() - 1 {
        let comm = s[k + 1].mul(&mmat)?.sub(&mmat.mul(&s[k + 1])?)?;
        let rest = s[k].map(dt).add(&dmat.mul(&s[k])?)?;
        if !comm.add(&rest)?.is_zero() {
            flat_ok = false;
        }
    }
    let unique = f_order == 1 && gamma.meromorphic;
    let agrees = if unique {
        let ode_series = gamma.values.iter().enumerate().fold(Series::zero(&param), |acc, (i, y)| {
            let n = gamma.start + i as i64;
            let y = if n % 2 != 0 { y * &sigma } else { y.clone() };
            &acc + &Series::monomial(&param, MultiPoly::constant(y), Frac::from_integer(n))
        });
        let bound = Frac::from_integer(gamma.start + gamma.values.len() as i64);
        Some((&g - &ode_series.truncate(bound)).is_zero())
    } else {
        None
    };
    Ok(MatrixCheck {
        a: a.to_string(),
        b: b.to_string(),
        c: c.to_string(),
        d: d.to_string(),
        gamma: g.to_string(),
        alpha: alpha.to_string(),
        z1_relations: z1,
        gamma_ode_residual_zero: res.is_zero(),
        flat_equation_residual_zero: flat_ok,
        agrees_with_series: agrees,
        gamma_series: g,
        r,
    })
}
