//! Monomials of the coefficient ring: products of symbols raised to rational
//! powers, prime radicals `p^(a/b)` with `0 < a/b < 1`, and an optional
//! imaginary unit. These are exactly the units of the ring, which is what
//! lets series with monomial leading terms be inverted and rooted exactly.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num::{Integer, One, Signed, Zero};

use super::rational::{factor_rational, qi, rat_pow, Frac, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }
    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    syms: Vec<(Symbol, Frac)>,
    rads: Vec<(u64, Frac)>,
    imag: bool,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.syms.len() + self.rads.len() + self.imag as usize)
            .cmp(&(other.syms.len() + other.rads.len() + other.imag as usize))
            .then_with(|| self.syms.cmp(&other.syms))
            .then_with(|| self.rads.cmp(&other.rads))
            .then_with(|| self.imag.cmp(&other.imag))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn split_exponent(e: Frac) -> (i64, Frac) {
    let fl = e.numer().div_floor(e.denom());
    (fl, e - Frac::from_integer(fl))
}

fn merge<K: Ord + Clone>(a: &[(K, Frac)], b: &[(K, Frac)]) -> Vec<(K, Frac)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j].clone());
            j += 1;
        } else {
            let e = a[i].1 + b[j].1;
            if !e.is_zero() {
                out.push((a[i].0.clone(), e));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(s: Symbol, e: Frac) -> Self {
        if e.is_zero() {
            return Monomial::one();
        }
        Monomial { syms: vec![(s, e)], rads: vec![], imag: false }
    }

    pub fn imaginary() -> Self {
        Monomial { syms: vec![], rads: vec![], imag: true }
    }

    pub fn is_one(&self) -> bool {
        self.syms.is_empty() && self.rads.is_empty() && !self.imag
    }

    /// True when the monomial involves no symbols (only radicals and `i`).
    pub fn is_constant(&self) -> bool {
        self.syms.is_empty()
    }

    pub fn syms(&self) -> &[(Symbol, Frac)] {
        &self.syms
    }

    pub fn rads(&self) -> &[(u64, Frac)] {
        &self.rads
    }

    pub fn imag(&self) -> bool {
        self.imag
    }

    pub fn exponent(&self, s: &Symbol) -> Frac {
        self.syms.iter().find(|(x, _)| x == s).map(|(_, e)| *e).unwrap_or_else(Frac::zero)
    }

    pub fn without(&self, s: &Symbol) -> Monomial {
        let mut m = self.clone();
        m.syms.retain(|(x, _)| x != s);
        m
    }

    /// The symbol-free part (radicals and `i`).
    pub fn constant_part(&self) -> Monomial {
        Monomial { syms: vec![], rads: self.rads.clone(), imag: self.imag }
    }

    pub fn symbol_part(&self) -> Monomial {
        Monomial { syms: self.syms.clone(), rads: vec![], imag: false }
    }

    /// Product, returning the rational factor produced by normalization.
    pub fn mul(&self, other: &Monomial) -> (Monomial, Rational) {
        let syms = merge(&self.syms, &other.syms);
        let mut factor = Rational::one();
        let mut rads = Vec::new();
        for (p, e) in merge(&self.rads, &other.rads) {
            let (fl, fr) = split_exponent(e);
            if fl != 0 {
                factor *= rat_pow(&qi(p as i64), fl);
            }
            if !fr.is_zero() {
                rads.push((p, fr));
            }
        }
        let imag = self.imag ^ other.imag;
        if self.imag && other.imag {
            factor = -factor;
        }
        (Monomial { syms, rads, imag }, factor)
    }

    pub fn inv(&self) -> (Monomial, Rational) {
        self.pow(Frac::from_integer(-1)).expect("integer powers always exist")
    }

    /// `self^e` for rational `e`; fails for fractional powers of `i`.
    pub fn pow(&self, e: Frac) -> Result<(Monomial, Rational)> {
        let syms = self.syms.iter().map(|(s, x)| (s.clone(), x * e)).filter(|(_, x)| !x.is_zero()).collect();
        let mut factor = Rational::one();
        let mut rads = Vec::new();
        for (p, x) in &self.rads {
            let (fl, fr) = split_exponent(x * e);
            if fl != 0 {
                factor *= rat_pow(&qi(*p as i64), fl);
            }
            if !fr.is_zero() {
                rads.push((*p, fr));
            }
        }
        let mut imag = false;
        if self.imag {
            if !e.is_integer() {
                return Err(Error::NoRoot("fractional power of i".into()));
            }
            let k = e.to_integer().rem_euclid(4);
            imag = k % 2 == 1;
            if k >= 2 {
                factor = -factor;
            }
        }
        Ok((Monomial { syms, rads, imag }, factor))
    }

    /// `r^e` for a nonzero rational `r`, as monomial times rational factor.
    pub fn rational_power(r: &Rational, e: Frac) -> Result<(Monomial, Rational)> {
        if r.is_zero() {
            return Err(Error::NoRoot("zero base".into()));
        }
        if e.is_integer() {
            return Ok((Monomial::one(), rat_pow(r, e.to_integer())));
        }
        let (neg, primes) = factor_rational(r)?;
        let mut factor = Rational::one();
        let mut rads = Vec::new();
        for (p, k) in primes {
            let (fl, fr) = split_exponent(e * k);
            if fl != 0 {
                factor *= rat_pow(&qi(p as i64), fl);
            }
            if !fr.is_zero() {
                rads.push((p, fr));
            }
        }
        let mut imag = false;
        if neg {
            // (-1)^e: real for odd denominators, a power of i for denominator 2.
            if e.denom() % 2 == 1 {
                if e.numer().rem_euclid(2) == 1 {
                    factor = -factor;
                }
            } else if *e.denom() == 2 {
                let k = e.numer().rem_euclid(4);
                imag = true;
                if k == 3 {
                    factor = -factor;
                }
            } else {
                return Err(Error::NoRoot(format!("(-1)^({e}) is not supported")));
            }
        }
        Ok((Monomial { syms: vec![], rads, imag }, factor))
    }

    pub fn degree_in(&self, syms: &[Symbol]) -> Frac {
        self.syms.iter().filter(|(s, _)| syms.contains(s)).fold(Frac::zero(), |a, (_, e)| a + e)
    }

    pub fn fmt_factors(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (p, e) in &self.rads {
            out.push(format!("{}^({})", p, e));
        }
        if self.imag {
            out.push("I".into());
        }
        for (s, e) in &self.syms {
            if e.is_one() {
                out.push(s.name().to_string());
            } else if e.is_integer() && e.is_positive() {
                out.push(format!("{}^{}", s, e));
            } else {
                out.push(format!("{}^({})", s, e));
            }
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.fmt_factors();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
