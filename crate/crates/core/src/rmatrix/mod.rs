//! R-matrices: order-by-order solution of the flatness equation in the
//! normalized idempotent basis, symplectic checks, holomorphic R-matrices,
//! the two-dimensional family and the quotient holomorphy test.

pub mod family;
pub mod holomorphic;
pub mod quotient;

use std::collections::BTreeMap;

use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Frac, MultiPoly, Rational, Series, SeriesMatrix, Symbol};
use crate::frobenius::frame::integrate_closed;
use crate::frobenius::IdempotentFrame;

pub use family::{family_chart, solve_2d_family, FamilyReport, OdeSeries};
pub use holomorphic::{holomorphic_r, symplectic_generator};
pub use quotient::{quotient_holomorphy, QuotientReport, QuotientSide};

/// Integration constants for the odd-order diagonal entries.
#[derive(Clone, Debug, Default)]
pub enum ConstantPolicy {
    #[default]
    Zero,
    /// Per z-order, one constant per idempotent; missing orders are zero.
    Table(BTreeMap<usize, Vec<MultiPoly>>),
}

impl ConstantPolicy {
    fn constants(&self, order: usize, n: usize) -> Result<Vec<MultiPoly>> {
        match self {
            ConstantPolicy::Zero => Ok(vec![MultiPoly::zero(); n]),
            ConstantPolicy::Table(t) => match t.get(&order) {
                None => Ok(vec![MultiPoly::zero(); n]),
                Some(v) if v.len() == n => Ok(v.clone()),
                Some(v) => Err(Error::Input(format!("{} constants at order {order}, expected {n}", v.len()))),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct RMatrix {
    pub param: Symbol,
    /// `coeffs[k]` is the coefficient of `z^k`; `coeffs[0]` is the identity.
    pub coeffs: Vec<SeriesMatrix>,
    /// Diagonal constants used at each order (odd: from the policy, even: forced).
    pub constants: BTreeMap<usize, Vec<MultiPoly>>,
}

#[derive(Serialize)]
struct RMatrixJson {
    param: String,
    z_order: usize,
    coefficients: Vec<Vec<Vec<String>>>,
    constants: BTreeMap<usize, Vec<String>>,
}

impl RMatrix {
    pub fn identity(param: &Symbol, n: usize, k: usize) -> Self {
        let mut coeffs = vec![SeriesMatrix::identity(param, n)];
        coeffs.extend((0..k).map(|_| SeriesMatrix::zeros(param, n, n)));
        RMatrix { param: param.clone(), coeffs, constants: BTreeMap::new() }
    }

    pub fn from_coeffs(coeffs: Vec<SeriesMatrix>) -> Result<Self> {
        let first = coeffs.first().ok_or_else(|| Error::Input("empty R-matrix".into()))?;
        if !first.is_identity() {
            return Err(Error::Input("R^0 must be the identity".into()));
        }
        Ok(RMatrix { param: first.param().clone(), coeffs, constants: BTreeMap::new() })
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn z_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients of `R^{-1}(z) = R^t(-z)`.
    pub fn inverse_coeffs(&self) -> Vec<SeriesMatrix> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, m)| if k % 2 == 0 { m.transpose() } else { m.transpose().scale_rational(&-Rational::from_integer(1.into())) })
            .collect()
    }

    /// `R(z) R^t(-z) - Id`, coefficient by coefficient for `z^1..z^K`.
    pub fn symplectic_residual(&self) -> Result<Vec<SeriesMatrix>> {
        let inv = self.inverse_coeffs();
        let n = self.dim();
        (1..self.coeffs.len())
            .map(|m| {
                let mut acc = SeriesMatrix::zeros(&self.param, n, n);
                for a in 0..=m {
                    acc = acc.add(&self.coeffs[a].mul(&inv[m - a])?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn is_symplectic(&self) -> Result<bool> {
        Ok(self.symplectic_residual()?.iter().all(|m| m.is_zero()))
    }

    /// Product `self(z) other(z)` truncated at the smaller z-order.
    pub fn compose(&self, other: &RMatrix) -> Result<RMatrix> {
        let k = self.z_order().min(other.z_order());
        let n = self.dim();
        let coeffs = (0..=k)
            .map(|m| {
                let mut acc = SeriesMatrix::zeros(&self.param, n, n);
                for a in 0..=m {
                    acc = acc.add(&self.coeffs[a].mul(&other.coeffs[m - a])?)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RMatrix { param: self.param.clone(), coeffs, constants: BTreeMap::new() })
    }

    /// `P R^k P^{-1}` for every order.
    pub fn conjugate(&self, p: &SeriesMatrix, p_inv: &SeriesMatrix) -> Result<Vec<SeriesMatrix>> {
        self.coeffs.iter().map(|m| p.mul(m)?.mul(p_inv)).collect()
    }

    /// Coefficients in the flat basis, `Psi R^k Psi^{-1}`.
    pub fn to_flat(&self, frame: &IdempotentFrame) -> Result<Vec<SeriesMatrix>> {
        self.conjugate(&frame.psi, &frame.psi_inv()?)
    }

    /// Reorder the normalized basis: new index `i` is old index `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> RMatrix {
        let coeffs = self
            .coeffs
            .iter()
            .map(|m| {
                let mut p = m.clone();
                for (i, oi) in order.iter().enumerate() {
                    for (j, oj) in order.iter().enumerate() {
                        p[(i, j)] = m[(*oi, *oj)].clone();
                    }
                }
                p
            })
            .collect();
        RMatrix { param: self.param.clone(), coeffs, constants: self.constants.clone() }
    }

    pub fn sub_block(&self, idx: &[usize]) -> RMatrix {
        RMatrix {
            param: self.param.clone(),
            coeffs: self.coeffs.iter().map(|m| m.sub_block(idx)).collect(),
            constants: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let j = RMatrixJson {
            param: self.param.to_string(),
            z_order: self.z_order(),
            coefficients: self.coeffs.iter().map(|m| m.to_text()).collect(),
            constants: self.constants.iter().map(|(k, v)| (*k, v.iter().map(|c| c.to_string()).collect())).collect(),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }
}

/// `Psi^{-1} d_b Psi` along each local coordinate direction `b`.
pub fn connection_forms(frame: &IdempotentFrame) -> Result<Vec<SeriesMatrix>> {
    let psi_inv = frame.psi_inv()?;
    let locals = frame.chart.expansion.locals.len();
    (0..locals)
        .map(|b| psi_inv.mul(&frame.psi.map(|x| frame.chart.local_partial(x, b))))
        .collect()
}

fn partial(frame: &IdempotentFrame, m: &SeriesMatrix, b: usize) -> SeriesMatrix {
    m.map(|x| frame.chart.local_partial(x, b))
}

/// `Gamma_b R^k + d_b R^k` for every local direction `b`.
fn transport(frame: &IdempotentFrame, gamma: &[SeriesMatrix], r: &SeriesMatrix) -> Result<Vec<SeriesMatrix>> {
    gamma.iter().enumerate().map(|(b, g)| g.mul(r)?.add(&partial(frame, r, b))).collect()
}

/// Diagonal value forced by the symplectic condition at even order `m`.
fn symplectic_diagonal(coeffs: &[SeriesMatrix], m: usize, i: usize) -> Series {
    let param = coeffs[0].param().clone();
    let mut acc = Series::zero(&param);
    for a in 1..m {
        let n = coeffs[a].rows();
        let mut s = Series::zero(&param);
        for l in 0..n {
            s = &s + &(&coeffs[a][(i, l)] * &coeffs[m - a][(i, l)]);
        }
        acc = if (m - a) % 2 == 0 { &acc + &s } else { &acc - &s };
    }
    acc.scale_rational(&Rational::new((-1).into(), 2.into()))
}

fn local_constant(frame: &IdempotentFrame, diff: &Series, what: &str) -> Result<MultiPoly> {
    // below the truncation a constant is invisible, so zero is as good as any
    let Some(c0) = diff.coeff(Frac::zero()) else {
        return Ok(MultiPoly::zero());
    };
    let rest = diff - &Series::constant(diff.param(), c0.clone());
    let locals = &frame.chart.expansion.locals;
    if !rest.is_zero() || locals.iter().any(|s| c0.contains_symbol(s)) {
        return Err(Error::Consistency(format!("{what}: difference {diff} is not constant")));
    }
    Ok(c0)
}

/// Solve `[R, dU] + z Psi^{-1} d(Psi R) = 0` to order `z^k`.
pub fn solve_flatness(frame: &IdempotentFrame, k: usize, policy: &ConstantPolicy) -> Result<RMatrix> {
    if k == 0 {
        return Err(Error::Input("z-order must be at least 1".into()));
    }
    let n = frame.dim();
    let param = frame.param().clone();
    let gamma = connection_forms(frame)?;
    for (b, g) in gamma.iter().enumerate() {
        for i in 0..n {
            if !g[(i, i)].is_zero() {
                return Err(Error::Consistency(format!("connection form {b} has a diagonal entry")));
            }
        }
    }
    // idempotent fields in local directions
    let dirs: Vec<Vec<Series>> = frame.idempotents.iter().map(|e| frame.to_local_dirs(e)).collect::<Result<_>>()?;
    let mut r = RMatrix::identity(&param, n, 0);
    for j in 0..k {
        let m = j + 1;
        let t = transport(frame, &gamma, &r.coeffs[j])?;
        let mut next = SeriesMatrix::zeros(&param, n, n);
        for b in 0..n {
            for a in 0..n {
                if a == b {
                    continue;
                }
                let mut acc = Series::zero(&param);
                for (c, d) in dirs[b].iter().enumerate() {
                    if !(d.is_zero() && d.is_exact()) {
                        acc = &acc + &(d * &t[c][(a, b)]);
                    }
                }
                next[(a, b)] = -acc;
            }
        }
        let odd = policy.constants(m, n)?;
        let mut used = Vec::with_capacity(n);
        for a in 0..n {
            let form: Vec<Series> = gamma
                .iter()
                .map(|g| {
                    let mut acc = Series::zero(&param);
                    for l in 0..n {
                        if l != a {
                            acc = &acc - &(&g[(a, l)] * &next[(l, a)]);
                        }
                    }
                    acc
                })
                .collect();
            let integrated = integrate_closed(&frame.chart, &form)
                .map_err(|e| Error::Integration(format!("diagonal entry {a} at order {m}: {e}")))?;
            let value = if m % 2 == 1 {
                used.push(odd[a].clone());
                &integrated + &Series::constant(&param, odd[a].clone())
            } else {
                let mut partial_coeffs = r.coeffs.clone();
                partial_coeffs.push(next.clone());
                let target = symplectic_diagonal(&partial_coeffs, m, a);
                let c = local_constant(frame, &(&target - &integrated), &format!("even constant {a} at order {m}"))?;
                used.push(c.clone());
                &integrated + &Series::constant(&param, c)
            };
            next[(a, a)] = value;
        }
        r.constants.insert(m, used);
        r.coeffs.push(next);
    }
    flatness_residual_check(frame, &r)?;
    Ok(r)
}

/// Residuals `[R^{k+1}, dU_b] + Gamma_b R^k + d_b R^k` for `k < K` and every local direction.
pub fn flatness_residual(frame: &IdempotentFrame, r: &RMatrix) -> Result<Vec<Vec<SeriesMatrix>>> {
    let n = frame.dim();
    let gamma = connection_forms(frame)?;
    let mut out = Vec::new();
    for k in 0..r.z_order() {
        let t = transport(frame, &gamma, &r.coeffs[k])?;
        let mut per_dir = Vec::new();
        for (b, tb) in t.into_iter().enumerate() {
            let mut res = tb;
            let nx = &r.coeffs[k + 1];
            for i in 0..n {
                for j in 0..n {
                    // [X, D]_{ij} = X_ij (D_j - D_i)
                    let dd = &frame.du[j][b] - &frame.du[i][b];
                    res[(i, j)] = &res[(i, j)] + &(&nx[(i, j)] * &dd);
                }
            }
            per_dir.push(res);
        }
        out.push(per_dir);
    }
    Ok(out)
}

pub fn flatness_residual_check(frame: &IdempotentFrame, r: &RMatrix) -> Result<()> {
    for (k, per_dir) in flatness_residual(frame, r)?.iter().enumerate() {
        for (b, m) in per_dir.iter().enumerate() {
            if !m.is_zero() {
                return Err(Error::Consistency(format!("flatness residual at z^{k}, direction {b}: {m:?}")));
            }
        }
    }
    if !r.is_symplectic()? {
        return Err(Error::Consistency("symplectic condition fails".into()));
    }
    Ok(())
}

/// Minimal truncation order over all entries of each coefficient.
pub fn known_orders(r: &RMatrix) -> Vec<Option<Frac>> {
    r.coeffs.iter().map(|m| m.min_truncation()).collect()
}
