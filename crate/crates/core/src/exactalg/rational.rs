use num::bigint::BigInt;
use num::rational::Ratio;
use num::{BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
/// Small rational used for exponents.
pub type Frac = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn fr(n: i64, d: i64) -> Frac {
    Frac::new(n, d)
}

pub fn frac_to_rational(f: &Frac) -> Rational {
    q(*f.numer(), *f.denom())
}

pub fn rational_to_frac(r: &Rational) -> Option<Frac> {
    Some(Frac::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

pub fn rat_pow(base: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num::pow::pow(base.clone(), e as usize)
    } else {
        num::pow::pow(base.recip(), (-e) as usize)
    }
}

/// Double factorial (2k-1)!! with (-1)!! = 1.
pub fn odd_double_factorial(k: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut j = 2 * k - 1;
    while j > 1 {
        acc *= j;
        j -= 2;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, b| a * b)
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization of a positive integer by trial division.
pub fn factor(n: &BigInt) -> Result<Vec<(u64, i64)>> {
    assert!(n.is_positive());
    let mut out = Vec::new();
    let mut m = n.clone();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        loop {
            let (d, r) = m.div_rem(&pb);
            if r.is_zero() {
                m = d;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        match m.to_u64() {
            Some(v) if v <= TRIAL_LIMIT * TRIAL_LIMIT => out.push((v, 1)),
            _ => return Err(Error::NoRoot(format!("cannot factor {n}"))),
        }
    }
    Ok(out)
}

/// Factor a nonzero rational as sign * prod p^e with integer e.
pub fn factor_rational(r: &Rational) -> Result<(bool, Vec<(u64, i64)>)> {
    assert!(!r.is_zero());
    let neg = r.is_negative();
    let mut out = factor(&r.numer().abs())?;
    for (p, e) in factor(r.denom())? {
        out.push((p, -e));
    }
    out.sort();
    Ok((neg, out))
}
