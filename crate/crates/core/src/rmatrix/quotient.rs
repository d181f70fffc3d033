//! Holomorphy of `R1 R2^{-1}` in the Psi0-conjugated basis for two theories
//! sharing the canonical coordinates near the discriminant.

use num::Zero;
use serde::Serialize;

use super::RMatrix;
use crate::error::{Error, Result};
use crate::exactalg::{Frac, Series, SeriesMatrix, Symbol};
use crate::frobenius::{IdempotentFrame, Psi0Frame};

/// One theory, with everything ordered as in its Psi0 frame (special pair first).
#[derive(Clone, Debug)]
pub struct QuotientSide {
    pub psi0: SeriesMatrix,
    pub psi0_inv: SeriesMatrix,
    pub psi_tilde: SeriesMatrix,
    pub psi_tilde_inv: SeriesMatrix,
    pub r: RMatrix,
    /// `du[i][b]` along the named local directions.
    pub du: Vec<Vec<Series>>,
    pub locals: Vec<Symbol>,
}

impl QuotientSide {
    pub fn new(frame: &IdempotentFrame, p0: &Psi0Frame, r: &RMatrix) -> Result<Self> {
        let n = frame.dim();
        if r.dim() != n {
            return Err(Error::Dimension("R-matrix and frame dimensions differ".into()));
        }
        let psi_inv = frame.psi_inv()?;
        let mut permuted = psi_inv.clone();
        for (i, oi) in p0.order.iter().enumerate() {
            for j in 0..n {
                permuted[(i, j)] = psi_inv[(*oi, j)].clone();
            }
        }
        let psi_tilde_inv = p0.psi0.mul(&permuted)?;
        Ok(QuotientSide {
            psi0: p0.psi0.clone(),
            psi0_inv: p0.psi0_inv.clone(),
            psi_tilde: p0.psi_tilde.clone(),
            psi_tilde_inv,
            r: r.permuted(&p0.order),
            du: p0.order.iter().map(|i| frame.du[*i].clone()).collect(),
            locals: frame.chart.expansion.locals.clone(),
        })
    }

    /// Restrict to a block: `flat` indexes flat coordinates, `inner` the Psi0-ordered basis.
    pub fn restrict(&self, flat: &[usize], inner: &[usize]) -> QuotientSide {
        let pick = |m: &SeriesMatrix, rows: &[usize], cols: &[usize]| {
            SeriesMatrix::from_rows(m.param(), rows.iter().map(|i| cols.iter().map(|j| m[(*i, *j)].clone()).collect()).collect())
        };
        QuotientSide {
            psi0: pick(&self.psi0, inner, inner),
            psi0_inv: pick(&self.psi0_inv, inner, inner),
            psi_tilde: pick(&self.psi_tilde, flat, inner),
            psi_tilde_inv: pick(&self.psi_tilde_inv, inner, flat),
            r: self.r.sub_block(inner),
            du: inner.iter().map(|i| self.du[*i].clone()).collect(),
            locals: self.locals.clone(),
        }
    }

    fn du_along(&self, i: usize, name: &Symbol) -> Option<Series> {
        self.locals.iter().position(|s| s == name).map(|b| self.du[i][b].clone())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientReport {
    /// Minimal order of the entries of each z-coefficient; `None` when all vanish.
    pub min_orders: Vec<Option<String>>,
    pub holomorphic: bool,
    pub mixed_residual_zero: bool,
    #[serde(skip)]
    pub quotient: Vec<SeriesMatrix>,
}

fn partial_named(x: &Series, locals: &[Symbol], b: usize) -> Series {
    if b == 0 {
        x.deriv()
    } else {
        x.deriv_symbol(&locals[b])
    }
}

/// `Psi0 R1 R2^{-1} Psi0^{-1}` per z-order, with the mixed equation checked.
pub fn quotient_holomorphy(s1: &QuotientSide, s2: &QuotientSide) -> Result<QuotientReport> {
    let n = s1.r.dim();
    if s2.r.dim() != n {
        return Err(Error::Dimension("quotient of R-matrices of different dimension".into()));
    }
    if s1.locals[0] != s2.locals[0] {
        return Err(Error::Input("frames are expanded in different parameters".into()));
    }
    // canonical coordinates must be identified
    for i in 0..n {
        for (b, name) in s1.locals.iter().enumerate() {
            let other = s2.du_along(i, name).unwrap_or_else(|| Series::zero(&s1.locals[0]));
            if !s1.du[i][b].agrees_with(&other) {
                return Err(Error::Input(format!("canonical coordinate {i} differs along {name}")));
            }
        }
    }
    let param = s1.r.param.clone();
    let k = s1.r.z_order().min(s2.r.z_order());
    let inv2 = s2.r.inverse_coeffs();
    let mut x = Vec::with_capacity(k + 1);
    for m in 0..=k {
        let mut acc = SeriesMatrix::zeros(&param, n, n);
        for a in 0..=m {
            acc = acc.add(&s1.r.coeffs[a].mul(&inv2[m - a])?)?;
        }
        x.push(s1.psi0.mul(&acc)?.mul(&s1.psi0_inv)?);
    }
    let min_orders: Vec<Option<Frac>> = x.iter().map(|m| m.min_order()).collect();
    let holomorphic = min_orders.iter().all(|o| o.map(|o| o >= Frac::zero()).unwrap_or(true));

    let mut residual_zero = true;
    for b in 0..s1.locals.len() {
        let mut d = SeriesMatrix::zeros(&param, n, n);
        for i in 0..n {
            d[(i, i)] = s1.du[i][b].clone();
        }
        let bmat = s1.psi0.mul(&d)?.mul(&s1.psi0_inv)?;
        for m in 1..=k {
            let comm = x[m].mul(&bmat)?.sub(&bmat.mul(&x[m])?)?;
            let inner = s1.psi_tilde.mul(&x[m - 1])?.mul(&s2.psi_tilde_inv)?;
            let dinner = inner.map(|e| partial_named(e, &s1.locals, b));
            let term = s1.psi_tilde_inv.mul(&dinner)?.mul(&s2.psi_tilde)?;
            if !comm.add(&term)?.is_zero() {
                residual_zero = false;
            }
        }
    }
    Ok(QuotientReport {
        min_orders: min_orders.iter().map(|o| o.map(|o| o.to_string())).collect(),
        holomorphic,
        mixed_residual_zero: residual_zero,
        quotient: x,
    })
}
