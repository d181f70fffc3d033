//! Truncated Puiseux series in one local parameter.
//!
//! A series stores coefficients of `param^(k/r)` and an optional truncation
//! order: every exponent at or above it is unknown. `None` means the series is
//! exact (a finite sum). Products and sums never claim more precision than the
//! operands provide.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::integer::{gcd, lcm};
use num::{One, Signed, Zero};

use super::monomial::Symbol;
use super::parse::parse_poly;
use super::poly::MultiPoly;
use super::rational::{frac_to_rational, Frac, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    param: Symbol,
    ram: i64,
    terms: BTreeMap<i64, MultiPoly>,
    trunc: Option<Frac>,
}

fn min_trunc(a: Option<Frac>, b: Option<Frac>) -> Option<Frac> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

fn add_opt(a: Option<Frac>, b: Option<Frac>) -> Option<Frac> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

impl Series {
    pub fn zero(param: &Symbol) -> Self {
        Series { param: param.clone(), ram: 1, terms: BTreeMap::new(), trunc: None }
    }

    /// `O(param^order)`.
    pub fn big_o(param: &Symbol, order: Frac) -> Self {
        Series { param: param.clone(), ram: 1, terms: BTreeMap::new(), trunc: Some(order) }
    }

    pub fn one(param: &Symbol) -> Self {
        Series::constant(param, MultiPoly::one())
    }

    pub fn constant(param: &Symbol, c: MultiPoly) -> Self {
        Series::monomial(param, c, Frac::zero())
    }

    pub fn rational(param: &Symbol, c: Rational) -> Self {
        Series::constant(param, MultiPoly::constant(c))
    }

    /// `c * param^e`, exact.
    pub fn monomial(param: &Symbol, c: MultiPoly, e: Frac) -> Self {
        let mut terms = BTreeMap::new();
        let ram = *e.denom();
        if !c.is_zero() {
            terms.insert(*e.numer(), c);
        }
        let mut s = Series { param: param.clone(), ram, terms, trunc: None };
        s.normalize();
        s
    }

    /// Exact series of a polynomial, splitting off powers of `param`.
    pub fn from_poly(p: &MultiPoly, param: &Symbol) -> Self {
        let mut parts: BTreeMap<Frac, MultiPoly> = BTreeMap::new();
        for (m, c) in p.terms() {
            let e = m.exponent(param);
            let rest = MultiPoly::term(c.clone(), m.without(param));
            let slot = parts.entry(e).or_default();
            *slot = &*slot + &rest;
        }
        let ram = parts.keys().fold(1i64, |a, e| lcm(a, *e.denom()));
        let terms = parts.into_iter().map(|(e, c)| ((e * ram).to_integer(), c)).collect();
        let mut s = Series { param: param.clone(), ram, terms, trunc: None };
        s.normalize();
        s
    }

    /// Parse the canonical text form, e.g. `1/2*t^(1/2) - t + O(t^2)`.
    pub fn parse(text: &str, param: &Symbol) -> Result<Self> {
        let (body, trunc) = match text.rfind("O(") {
            Some(idx) => {
                let head = text[..idx].trim_end();
                let head = head.strip_suffix('+').unwrap_or(head).trim_end();
                let inner = text[idx + 2..].trim_end().strip_suffix(')').ok_or_else(|| Error::Parse("unclosed O(".into()))?;
                let o = parse_poly(inner)?;
                let (m, c) = o.single_term().ok_or_else(|| Error::Parse("bad O() term".into()))?;
                if !c.is_one() || m.syms().len() != 1 || m.exponent(param).is_zero() && !m.is_one() {
                    return Err(Error::Parse(format!("bad O() term: {inner}")));
                }
                (head.to_string(), Some(m.exponent(param)))
            }
            None => (text.to_string(), None),
        };
        let poly = if body.trim().is_empty() { MultiPoly::zero() } else { parse_poly(&body)? };
        let mut s = Series::from_poly(&poly, param);
        if let Some(t) = trunc {
            s = s.truncate(t);
        }
        Ok(s)
    }

    pub fn param(&self) -> &Symbol {
        &self.param
    }

    pub fn ramification(&self) -> i64 {
        self.ram
    }

    pub fn truncation(&self) -> Option<Frac> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Zero up to the truncation order.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Frac, &MultiPoly)> {
        self.terms.iter().map(move |(k, c)| (Frac::new(*k, self.ram), c))
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if let Some(t) = self.trunc {
            let ram = self.ram;
            self.terms.retain(|k, _| Frac::new(*k, ram) < t);
        }
        let mut g = self.ram;
        for k in self.terms.keys() {
            g = gcd(g, *k);
            if g == 1 {
                break;
            }
        }
        if g > 1 {
            self.ram /= g;
            self.terms = std::mem::take(&mut self.terms).into_iter().map(|(k, c)| (k / g, c)).collect();
        }
    }

    fn reindexed(&self, ram: i64) -> BTreeMap<i64, MultiPoly> {
        let f = ram / self.ram;
        self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect()
    }

    fn check_param(&self, other: &Series) {
        assert_eq!(self.param, other.param, "series in different parameters");
    }

    /// Least exponent with nonzero coefficient.
    pub fn order(&self) -> Option<Frac> {
        self.terms.keys().next().map(|k| Frac::new(*k, self.ram))
    }

    /// Order if nonzero, else the truncation order; `None` for exact zero.
    pub fn valuation(&self) -> Option<Frac> {
        self.order().or(self.trunc)
    }

    pub fn order_or_err(&self) -> Result<Frac> {
        self.order().ok_or_else(|| Error::ZeroSeries(self.trunc.map(|t| t.to_string()).unwrap_or_else(|| "inf".into())))
    }

    pub fn leading(&self) -> Option<(Frac, &MultiPoly)> {
        self.terms.iter().next().map(|(k, c)| (Frac::new(*k, self.ram), c))
    }

    /// Coefficient of `param^e`; `None` if that exponent is not known.
    pub fn coeff(&self, e: Frac) -> Option<MultiPoly> {
        if let Some(t) = self.trunc {
            if e >= t {
                return None;
            }
        }
        let k = e * self.ram;
        if !k.is_integer() {
            return Some(MultiPoly::zero());
        }
        Some(self.terms.get(&k.to_integer()).cloned().unwrap_or_default())
    }

    pub fn truncate(&self, order: Frac) -> Self {
        let mut s = self.clone();
        s.trunc = min_trunc(s.trunc, Some(order));
        s.normalize();
        s
    }

    pub fn map_coeffs<F: Fn(&MultiPoly) -> MultiPoly>(&self, f: F) -> Self {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = f(c);
        }
        s.normalize();
        s
    }

    pub fn try_map_coeffs<F: Fn(&MultiPoly) -> Result<MultiPoly>>(&self, f: F) -> Result<Self> {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = f(c)?;
        }
        s.normalize();
        Ok(s)
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        if c.is_zero() {
            return Series::zero(&self.param);
        }
        self.map_coeffs(|x| x * c)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.map_coeffs(|x| x.scale(c))
    }

    /// Multiply by `param^e` exactly.
    pub fn shift(&self, e: Frac) -> Self {
        let ram = lcm(self.ram, *e.denom());
        let de = (e * ram).to_integer();
        let terms = self.reindexed(ram).into_iter().map(|(k, c)| (k + de, c)).collect();
        let mut s = Series { param: self.param.clone(), ram, terms, trunc: self.trunc.map(|t| t + e) };
        s.normalize();
        s
    }

    /// Equality of all coefficients below the common truncation order.
    pub fn agrees_with(&self, other: &Series) -> bool {
        (self - other).is_zero()
    }

    fn unit_parts(&self) -> Result<(Frac, MultiPoly, BTreeMap<i64, MultiPoly>)> {
        // self = c * t^e * (1 + h), h in positive grid powers of t^(1/ram)
        let (k0, c) = self.terms.iter().next().ok_or_else(|| Error::ZeroSeries(format!("{:?}", self.trunc)))?;
        if !c.is_unit() {
            return Err(Error::NonUnit(c.to_string()));
        }
        let ci = c.inv()?;
        let mut h = BTreeMap::new();
        for (k, x) in self.terms.iter().skip(1) {
            h.insert(k - k0, x * &ci);
        }
        Ok((Frac::new(*k0, self.ram), c.clone(), h))
    }

    /// Relative precision target in grid steps.
    fn steps(&self, e: Frac, rel: Option<Frac>) -> Result<Option<i64>> {
        let r = match (self.trunc.map(|t| t - e), rel) {
            (None, None) => return Ok(None),
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        let n = r * self.ram;
        Ok(Some(n.ceil().to_integer().max(0)))
    }

    /// `self^alpha` for the series `1 + h` on the grid of `self.ram`, by the
    /// power recurrence, to `steps` grid steps.
    fn unit_power(h: &BTreeMap<i64, MultiPoly>, alpha: &Rational, steps: i64) -> BTreeMap<i64, MultiPoly> {
        let mut y: Vec<MultiPoly> = vec![MultiPoly::one()];
        let a1 = alpha + Rational::one();
        for k in 1..steps {
            let mut acc = MultiPoly::zero();
            for (j, hj) in h.range(1..=k) {
                let w = &a1 * Rational::from_integer((*j).into()) - Rational::from_integer(k.into());
                if w.is_zero() {
                    continue;
                }
                let yk = &y[(k - j) as usize];
                if yk.is_zero() {
                    continue;
                }
                acc = &acc + &(hj * yk).scale(&w);
            }
            y.push(acc.scale(&Rational::new(1.into(), k.into())));
        }
        y.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k as i64, c)).collect()
    }

    fn power_impl(&self, alpha: Frac, branch: usize, rel: Option<Frac>) -> Result<Series> {
        let (e, c, h) = self.unit_parts()?;
        let lead = c.unit_pow(alpha, branch)?;
        let ea = e * alpha;
        let steps = self.steps(e, rel)?;
        let body = if h.is_empty() {
            let mut m = BTreeMap::new();
            m.insert(0, MultiPoly::one());
            m
        } else {
            match steps {
                Some(n) => Series::unit_power(&h, &frac_to_rational(&alpha), n),
                None => return Err(Error::NeedsPrecision("infinite expansion of an exact series".into())),
            }
        };
        let ram = lcm(self.ram, *ea.denom());
        let f = ram / self.ram;
        let base = (ea * ram).to_integer();
        let terms = body.into_iter().map(|(k, x)| (base + k * f, &x * &lead)).collect();
        let trunc = if h.is_empty() && self.trunc.is_none() {
            None
        } else {
            steps.map(|n| ea + Frac::new(n, self.ram))
        };
        let mut s = Series { param: self.param.clone(), ram, terms, trunc };
        s.normalize();
        Ok(s)
    }

    /// Multiplicative inverse; exact series must be monomials.
    pub fn inv(&self) -> Result<Series> {
        self.power_impl(Frac::from_integer(-1), 0, None)
    }

    /// Inverse computed at least to absolute order `order` when `self` is exact.
    pub fn inv_to(&self, order: Frac) -> Result<Series> {
        let e = self.order_or_err()?;
        self.power_impl(Frac::from_integer(-1), 0, Some(order + e))
    }

    /// `self^alpha` with branch choice for the leading coefficient root.
    pub fn pow_frac(&self, alpha: Frac, branch: usize) -> Result<Series> {
        if alpha.is_integer() && !alpha.is_negative() {
            return Ok(self.pow(alpha.to_integer() as u32));
        }
        self.power_impl(alpha, branch, None)
    }

    pub fn pow_frac_to(&self, alpha: Frac, branch: usize, order: Frac) -> Result<Series> {
        let e = self.order_or_err()?;
        self.power_impl(alpha, branch, Some(order - e * alpha))
    }

    pub fn nth_root(&self, n: i64, branch: usize) -> Result<Series> {
        self.pow_frac(Frac::new(1, n), branch)
    }

    pub fn nth_root_to(&self, n: i64, branch: usize, order: Frac) -> Result<Series> {
        self.pow_frac_to(Frac::new(1, n), branch, order)
    }

    pub fn pow(&self, n: u32) -> Series {
        let mut acc = Series::one(&self.param);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Derivative in the local parameter.
    pub fn deriv(&self) -> Series {
        let ram = self.ram;
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| **k != 0)
            .map(|(k, c)| (k - ram, c.scale(&Rational::new((*k).into(), ram.into()))))
            .collect();
        let mut s = Series { param: self.param.clone(), ram, terms, trunc: self.trunc.map(|t| t - 1) };
        s.normalize();
        s
    }

    /// Derivative in a coefficient symbol.
    pub fn deriv_symbol(&self, s: &Symbol) -> Series {
        self.map_coeffs(|c| c.derivative(s))
    }

    /// Antiderivative in the local parameter with zero constant term.
    pub fn integrate(&self) -> Result<Series> {
        let ram = self.ram;
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            if *k == -ram {
                return Err(Error::Integration(format!("logarithmic term {c}*{}^(-1)", self.param)));
            }
            terms.insert(k + ram, c.scale(&Rational::new(ram.into(), (k + ram).into())));
        }
        let mut s = Series { param: self.param.clone(), ram, terms, trunc: self.trunc.map(|t| t + 1) };
        s.normalize();
        Ok(s)
    }

    pub fn integrate_symbol(&self, s: &Symbol) -> Result<Series> {
        self.try_map_coeffs(|c| c.integrate(s))
    }

    /// Substitute a polynomial for a coefficient symbol.
    pub fn substitute_symbol(&self, s: &Symbol, value: &MultiPoly) -> Result<Series> {
        self.try_map_coeffs(|c| c.substitute(s, value))
    }

    /// Part with exponents strictly below `e`.
    pub fn part_below(&self, e: Frac) -> Series {
        let mut s = self.clone();
        let ram = s.ram;
        s.terms.retain(|k, _| Frac::new(*k, ram) < e);
        s.trunc = None;
        s
    }

    /// Total order used to sort roots: compares coefficient sequences
    /// from the lowest exponent, with larger rationals first.
    pub fn ordering_key_cmp(&self, other: &Series) -> Ordering {
        let a: Vec<(Frac, &MultiPoly)> = self.terms().collect();
        let b: Vec<(Frac, &MultiPoly)> = other.terms().collect();
        for i in 0..a.len().max(b.len()) {
            match (a.get(i), b.get(i)) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Greater,
                (Some(_), None) => return Ordering::Less,
                (Some((ea, ca)), Some((eb, cb))) => {
                    let o = ea.cmp(eb);
                    if o != Ordering::Equal {
                        return o;
                    }
                    let o = cmp_coeff(ca, cb);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
        Ordering::Equal
    }
}

/// Larger rationals first; otherwise by the canonical term order.
pub fn cmp_coeff(a: &MultiPoly, b: &MultiPoly) -> Ordering {
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        return y.cmp(&x);
    }
    let ka: Vec<_> = a.terms().collect();
    let kb: Vec<_> = b.terms().collect();
    for i in 0..ka.len().min(kb.len()) {
        let o = ka[i].0.cmp(kb[i].0).then_with(|| kb[i].1.cmp(ka[i].1));
        if o != Ordering::Equal {
            return o;
        }
    }
    ka.len().cmp(&kb.len())
}

fn fmt_exp(param: &Symbol, e: Frac) -> String {
    if e.is_one() {
        param.to_string()
    } else if e.is_integer() && e.is_positive() {
        format!("{param}^{e}")
    } else {
        format!("{param}^({e})")
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in self.terms() {
            let coeff = if c.len() > 1 { format!("({c})") } else { c.to_string() };
            if e.is_zero() {
                parts.push(coeff);
            } else if coeff == "1" {
                parts.push(fmt_exp(&self.param, e));
            } else if coeff == "-1" {
                parts.push(format!("-{}", fmt_exp(&self.param, e)));
            } else {
                parts.push(format!("{coeff}*{}", fmt_exp(&self.param, e)));
            }
        }
        if let Some(t) = self.trunc {
            parts.push(format!("O({})", fmt_exp(&self.param, t)));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.check_param(rhs);
        let ram = lcm(self.ram, rhs.ram);
        let mut terms = self.reindexed(ram);
        for (k, c) in rhs.reindexed(ram) {
            let slot = terms.entry(k).or_default();
            *slot = &*slot + &c;
        }
        let mut s = Series { param: self.param.clone(), ram, terms, trunc: min_trunc(self.trunc, rhs.trunc) };
        s.normalize();
        s
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.map_coeffs(|c| -c)
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.check_param(rhs);
        let trunc = min_trunc(add_opt(self.valuation(), rhs.trunc), add_opt(rhs.valuation(), self.trunc));
        let trunc = match (self.valuation(), rhs.valuation()) {
            (None, _) | (_, None) => None,
            _ => trunc,
        };
        let ram = lcm(self.ram, rhs.ram);
        let (fa, fb) = (ram / self.ram, ram / rhs.ram);
        let limit = trunc.map(|t| t * ram);
        let mut terms: BTreeMap<i64, MultiPoly> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let k = ka * fa + kb * fb;
                if let Some(l) = limit {
                    if Frac::from_integer(k) >= l {
                        continue;
                    }
                }
                let p = ca * cb;
                let slot = terms.entry(k).or_default();
                *slot = &*slot + &p;
            }
        }
        let mut s = Series { param: self.param.clone(), ram, terms, trunc };
        s.normalize();
        s
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        &self + &rhs
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        &self - &rhs
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        &self * &rhs
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}
