//! Characteristic polynomials and Newton-Puiseux root expansion.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::rational::{binomial, factor};
use crate::exactalg::{Frac, MultiPoly, Rational, Series, SeriesMatrix, Symbol};

/// Coefficients `c_0..c_n` of `det(X - m)`, lowest degree first (Faddeev-LeVerrier).
pub fn char_poly(m: &SeriesMatrix) -> Result<Vec<Series>> {
    let n = m.rows();
    let param = m.param().clone();
    let mut c = vec![Series::zero(&param); n + 1];
    c[n] = Series::one(&param);
    let id = SeriesMatrix::identity(&param, n);
    let mut mk = SeriesMatrix::zeros(&param, n, n);
    for k in 1..=n {
        mk = m.mul(&mk)?.add(&id.scale(&c[n - k + 1]))?;
        let tr = m.mul(&mk)?.trace();
        c[n - k] = tr.scale_rational(&Rational::new((-1).into(), (k as i64).into()));
    }
    Ok(c)
}

pub fn eval_poly(coeffs: &[Series], x: &Series) -> Series {
    let mut acc = Series::zero(x.param());
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// All roots of a monic polynomial with series coefficients, known at least
/// to absolute order `precision`. Roots that are finite sums are returned exact.
pub fn puiseux_roots(coeffs: &[Series], precision: Frac) -> Result<Vec<Series>> {
    let Some(lead) = coeffs.last() else {
        return Ok(vec![]);
    };
    if lead.leading().map(|(e, c)| !e.is_zero() || *c != MultiPoly::one()).unwrap_or(true) {
        return Err(Error::Input("polynomial must be monic".into()));
    }
    let param = lead.param().clone();
    let mut roots = roots_above(coeffs, None, precision, &param)?;
    roots.sort_by(|a, b| a.ordering_key_cmp(b));
    Ok(roots)
}

// Newton polygon vertex: (degree, order)
fn lower_hull(pts: &[(usize, Frac)]) -> Vec<(usize, Frac)> {
    let mut hull: Vec<(usize, Frac)> = Vec::new();
    for &(k, o) in pts {
        while hull.len() >= 2 {
            let (k1, o1) = hull[hull.len() - 2];
            let (k2, o2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let lhs = (o2 - o1) * Frac::from_integer((k - k1) as i64);
            let rhs = (o - o1) * Frac::from_integer((k2 - k1) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((k, o));
    }
    hull
}

fn roots_above(p: &[Series], floor: Option<Frac>, prec: Frac, param: &Symbol) -> Result<Vec<Series>> {
    let deg = p.len() - 1;
    if deg == 0 {
        return Ok(vec![]);
    }
    if p[0].is_zero() && p[0].is_exact() {
        if p[1].is_zero() && p[1].is_exact() {
            return Err(Error::NonSemisimple("repeated exact root 0".into()));
        }
        let mut out = vec![Series::zero(param)];
        out.extend(roots_above(&p[1..], floor, prec, param)?);
        return Ok(out);
    }
    if p[0].order().is_none() {
        // constant coefficient known only to be O(t^T)
        let t0 = p[0].truncation().expect("nonexact");
        let o1 = p[1].order().ok_or_else(|| Error::Truncation("two unknown low coefficients".into()))?;
        let mut out = vec![Series::big_o(param, t0 - o1)];
        out.extend(roots_above(&p[1..], floor, prec, param)?);
        return Ok(out);
    }
    let mut pts = Vec::new();
    for (k, c) in p.iter().enumerate() {
        match c.order() {
            Some(o) => pts.push((k, o)),
            None if c.is_exact() => {}
            None => return Err(Error::Truncation(format!("coefficient of degree {k} is unknown"))),
        }
    }
    let hull = lower_hull(&pts);
    let mut out = Vec::new();
    for w in hull.windows(2) {
        let ((i, oi), (j, oj)) = (w[0], w[1]);
        let d = j - i;
        let gamma = (oi - oj) / Frac::from_integer(d as i64);
        if let Some(f) = floor {
            if gamma <= f {
                continue;
            }
        }
        if gamma >= prec {
            if d == 1 {
                out.push(Series::big_o(param, prec));
                continue;
            }
            return Err(Error::Truncation(format!("{d} roots agree below order {prec}")));
        }
        let v = oi + gamma * Frac::from_integer(i as i64);
        let edge: Vec<MultiPoly> = (i..=j)
            .map(|k| match p[k].leading() {
                Some((o, c)) if o + gamma * Frac::from_integer(k as i64) == v => c.clone(),
                _ => MultiPoly::zero(),
            })
            .collect();
        let croots = edge_roots(&edge)?;
        for (c, mu) in croots {
            let q: Vec<Series> = (0..=deg)
                .map(|m| {
                    let mut acc = Series::zero(param);
                    for (k, pk) in p.iter().enumerate().skip(m) {
                        if pk.is_zero() && pk.is_exact() {
                            continue;
                        }
                        let b = Rational::from_integer(binomial(k as i64, m as i64));
                        let coef = c.pow((k - m) as u32).scale(&b);
                        acc = &acc + &pk.shift(gamma * Frac::from_integer(k as i64) - v).scale(&coef);
                    }
                    acc
                })
                .collect();
            let q = shrink(q, (prec - gamma) * Frac::from_integer(mu as i64) + Frac::one());
            let sub = roots_above(&q, Some(Frac::zero()), prec - gamma, param)?;
            if sub.len() != mu {
                return Err(Error::NoRoot(format!("expected {mu} roots above order {gamma}, found {}", sub.len())));
            }
            for y in sub {
                out.push((&Series::constant(param, c.clone()) + &y).shift(gamma));
            }
        }
    }
    Ok(out)
}

// Keep exact coefficients while they stay small so exact roots are still detected.
fn shrink(q: Vec<Series>, rel: Frac) -> Vec<Series> {
    let size: usize = q.iter().map(|s| s.num_terms()).sum();
    if size <= 64 {
        return q;
    }
    q.into_iter().map(|s| s.truncate(rel)).collect()
}

/// Roots of an edge polynomial `sum e_k c^k` (nonzero `e_0`, `e_d`), with multiplicity.
fn edge_roots(e: &[MultiPoly]) -> Result<Vec<(MultiPoly, usize)>> {
    let d = e.len() - 1;
    let ed_inv = e[d].inv().map_err(|_| Error::NonUnit(format!("edge leading coefficient {}", e[d])))?;
    let ratio = &e[0] * &ed_inv;
    let (mono, c) = ratio.single_term().ok_or_else(|| Error::NoRoot(format!("edge ratio {ratio} is not a monomial")))?;
    // scale c = m w so that the polynomial in w is rational: first by the symbolic
    // part of the ratio, then by its full absolute value
    let bases = [MultiPoly::term(Rational::one(), mono.symbol_part()), MultiPoly::term(c.abs(), mono.clone())];
    let mut found = None;
    for base in bases {
        let m = base.unit_pow(Frac::new(1, d as i64), 0)?;
        if let Some(r) = rational_edge(e, &m)? {
            found = Some((m, r));
            break;
        }
    }
    let (m, r) = found.ok_or_else(|| Error::NoRoot(format!("edge polynomial is not quasi-homogeneous: {e:?}")))?;
    let wroots = rational_poly_roots(&r)?;
    Ok(wroots.into_iter().map(|(w, mu)| (&m * &w, mu)).collect())
}

fn rational_edge(e: &[MultiPoly], m: &MultiPoly) -> Result<Option<Vec<Rational>>> {
    let d = e.len() - 1;
    let mut r = Vec::with_capacity(d + 1);
    for (k, ek) in e.iter().enumerate() {
        let denom = &e[d] * &m.pow((d - k) as u32);
        match (ek * &denom.inv()?).as_rational() {
            Some(x) => r.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(r))
}

/// Roots of a rational polynomial: rational roots, then a residual quadratic by radicals.
pub fn rational_poly_roots(r: &[Rational]) -> Result<Vec<(MultiPoly, usize)>> {
    let mut poly: Vec<Rational> = r.to_vec();
    while poly.last().map(|x| x.is_zero()).unwrap_or(false) {
        poly.pop();
    }
    let mut out: Vec<(MultiPoly, usize)> = Vec::new();
    let mut zero_mult = 0;
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        out.push((MultiPoly::zero(), zero_mult));
    }
    if poly.len() > 2 {
        for cand in rational_root_candidates(&poly)? {
            let mut mu = 0;
            while poly.len() > 1 && eval_rat(&poly, &cand).is_zero() {
                poly = deflate(&poly, &cand);
                mu += 1;
            }
            if mu > 0 {
                out.push((MultiPoly::constant(cand), mu));
            }
        }
    }
    match poly.len() - 1 {
        0 => {}
        1 => out.push((MultiPoly::constant(-&poly[0] / &poly[1]), 1)),
        2 => {
            let (c, b, a) = (&poly[0], &poly[1], &poly[2]);
            let disc = b * b - Rational::from_integer(4.into()) * a * c;
            let two_a = Rational::from_integer(2.into()) * a;
            if disc.is_zero() {
                out.push((MultiPoly::constant(-b / &two_a), 2));
            } else {
                let s = MultiPoly::constant(disc).unit_pow(Frac::new(1, 2), 0)?;
                let base = MultiPoly::constant(-b / &two_a);
                let half = s.scale(&(Rational::one() / &two_a));
                out.push((&base + &half, 1));
                out.push((&base - &half, 1));
            }
        }
        k => return Err(Error::NoRoot(format!("irreducible factor of degree {k} without rational roots"))),
    }
    Ok(out)
}

fn eval_rat(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn deflate(p: &[Rational], x: &Rational) -> Vec<Rational> {
    // synthetic division by (X - x)
    let n = p.len() - 1;
    let mut out = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (0..n).rev() {
        carry = &p[k + 1] + &carry * x;
        out[k] = carry.clone();
    }
    out
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut ds = vec![BigInt::one()];
    for (p, k) in factor(&n.abs())? {
        let mut next = Vec::new();
        for d in &ds {
            let mut pk = BigInt::one();
            for _ in 0..=k {
                next.push(d * &pk);
                pk *= BigInt::from(p);
            }
        }
        ds = next;
    }
    Ok(ds)
}

fn rational_root_candidates(p: &[Rational]) -> Result<Vec<Rational>> {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let a0 = ints.first().expect("nonempty");
    let ad = ints.last().expect("nonempty");
    let mut out = Vec::new();
    for num in divisors(a0)? {
        for den in divisors(ad)? {
            let x = Rational::new(num.clone(), den);
            for y in [x.clone(), -x] {
                if !out.contains(&y) {
                    out.push(y);
                }
            }
        }
    }
    out.sort_by(|a: &Rational, b| b.cmp(a));
    Ok(out)
}
