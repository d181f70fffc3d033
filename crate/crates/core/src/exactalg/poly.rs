use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use super::monomial::{Monomial, Symbol};
use super::rational::{frac_to_rational, Frac, Rational};
use crate::error::{Error, Result};

/// Sparse rational linear combination of [`Monomial`]s.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        MultiPoly::term(c, Monomial::one())
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn var(name: &str) -> Self {
        MultiPoly::term(Rational::one(), Monomial::var(Symbol::new(name), Frac::one()))
    }

    pub fn symbol(s: &Symbol) -> Self {
        MultiPoly::term(Rational::one(), Monomial::var(s.clone(), Frac::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// The rational value if the polynomial is a plain rational constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Self {
        let mut out = MultiPoly::zero();
        for (a, x) in &self.terms {
            let (p, f) = a.mul(m);
            out.add_term(p, x * c * f);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = MultiPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a single-term polynomial.
    pub fn inv(&self) -> Result<Self> {
        let (m, c) = self.single_term().ok_or_else(|| Error::NonUnit(self.to_string()))?;
        let (mi, f) = m.inv();
        Ok(MultiPoly::term(f / c, mi))
    }

    /// `self^e` for a single-term polynomial and rational `e`. `branch = 1`
    /// multiplies the principal value by -1 (an n-th root of unity for even n).
    pub fn unit_pow(&self, e: Frac, branch: usize) -> Result<Self> {
        let (m, c) = self.single_term().ok_or_else(|| Error::NonUnit(self.to_string()))?;
        let (m1, f1) = m.pow(e)?;
        let (m2, f2) = Monomial::rational_power(c, e)?;
        let (m3, f3) = m1.mul(&m2);
        let mut coeff = f1 * f2 * f3;
        if branch == 1 {
            if e.denom() % 2 != 0 {
                return Err(Error::NoRoot("branch -1 requires an even root".into()));
            }
            coeff = -coeff;
        } else if branch > 1 {
            return Err(Error::NoRoot(format!("branch {branch} unsupported")));
        }
        Ok(MultiPoly::term(coeff, m3))
    }

    pub fn derivative(&self, s: &Symbol) -> Self {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(s);
            if e.is_zero() {
                continue;
            }
            let (dm, f) = m.mul(&Monomial::var(s.clone(), -Frac::one()));
            out.add_term(dm, c * frac_to_rational(&e) * f);
        }
        out
    }

    /// Antiderivative with zero constant; fails on `1/s` terms.
    pub fn integrate(&self, s: &Symbol) -> Result<Self> {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(s) + Frac::one();
            if e.is_zero() {
                return Err(Error::Integration(format!("logarithmic term in {s}")));
            }
            let (im, f) = m.mul(&Monomial::var(s.clone(), Frac::one()));
            out.add_term(im, c * f / frac_to_rational(&e));
        }
        Ok(out)
    }

    /// Substitute a polynomial for a symbol appearing with nonnegative integer
    /// exponents only.
    pub fn substitute(&self, s: &Symbol, value: &MultiPoly) -> Result<Self> {
        let mut out = MultiPoly::zero();
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::one()];
        for (m, c) in &self.terms {
            let e = m.exponent(s);
            if !e.is_integer() || e.is_negative() {
                return Err(Error::Input(format!("cannot substitute into {s}^({e})")));
            }
            let k = e.to_integer() as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let rest = m.without(s);
            out = &out + &powers[k].mul_monomial(&rest, c);
        }
        Ok(out)
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.terms.keys().flat_map(|m| m.syms().iter().map(|(s, _)| s.clone())).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        self.terms.keys().any(|m| !m.exponent(s).is_zero())
    }

    /// Drop terms whose total degree in `syms` exceeds `max`.
    pub fn truncate_degree(&self, syms: &[Symbol], max: Frac) -> Self {
        MultiPoly {
            terms: self.terms.iter().filter(|(m, _)| m.degree_in(syms) <= max).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Evaluate all symbols in `vals` at rational points; other symbols stay.
    pub fn evaluate(&self, vals: &[(Symbol, Rational)]) -> Result<Self> {
        let mut out = self.clone();
        for (s, v) in vals {
            out = out.substitute(s, &MultiPoly::constant(v.clone()))?;
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let parts = m.fmt_factors();
            if parts.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", parts.join("*"))?;
            } else {
                write!(f, "{}*{}", a, parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let (m, f) = a.mul(b);
                out.add_term(m, x * y * f);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}
