//! Reconstruction of a semisimple cohomological field theory from its
//! R-matrix as a sum over colored stable graphs, together with the dilaton
//! shift, the one-dimensional extension and the genus-one potential.
//!
//! Everything is computed in the normalized idempotent basis, where the
//! metric is the identity. `R` is the solution of `rmatrix::solve_flatness`
//! and the leg matrix is `L = R^{-1}`, so a leg carries `L(psi) x`, an edge
//! `(Id - L(z) L(w)^t) / (z + w)` and a dilaton leaf `z (one - L(z) one)`.

pub mod genus1;
pub mod graphsum;
pub mod shift;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{Frac, MultiPoly, Rational, Series, SeriesMatrix, Symbol};
use crate::frobenius::frame::{inv_p, FrameOptions};
use crate::frobenius::{ChartSpec, FrobeniusChart, IdempotentFrame};
use crate::rmatrix::{solve_flatness, ConstantPolicy, RMatrix};

pub use genus1::{genus_one_correlator, genus_one_potential};
pub use graphsum::reconstruct_class;
pub use shift::{dilaton_shift_formal, dilaton_shift_resummed, extend_dimension, shift_between, truncate_symbols};

/// A semisimple CohFT near the expansion point: its frame, R-matrix, leg
/// matrix `R^{-1}`, square roots of the norms `Delta_i^{1/2}` and the unit in normalized coordinates.
#[derive(Clone, Debug)]
pub struct CohFT {
    pub frame: IdempotentFrame,
    pub r: RMatrix,
    pub leg: RMatrix,
    pub sqrt_delta: Vec<Series>,
    pub unit: Vec<Series>,
    /// Output coefficients must be known below this order (default 0, so
    /// every polar coefficient is certified).
    pub min_known: Option<Frac>,
}

#[derive(Clone, Debug)]
pub struct CohFTOptions {
    pub precision: Frac,
    pub z_order: usize,
    pub policy: ConstantPolicy,
    pub probe: Option<Vec<Rational>>,
}

impl Default for CohFTOptions {
    fn default() -> Self {
        CohFTOptions { precision: Frac::from_integer(6), z_order: 4, policy: ConstantPolicy::Zero, probe: None }
    }
}

impl CohFT {
    pub fn new(frame: IdempotentFrame, r: RMatrix) -> Result<Self> {
        if r.dim() != frame.dim() {
            return Err(Error::Dimension(format!("R-matrix of size {} on a frame of dimension {}", r.dim(), frame.dim())));
        }
        if &r.param != frame.param() {
            return Err(Error::Input("R-matrix and frame use different local parameters".into()));
        }
        let unit = frame.psi_inv()?.apply(&frame.chart.unit_series())?;
        let sqrt_delta = frame.sqrt_delta.clone();
        let leg = RMatrix::from_coeffs(r.inverse_coeffs())?;
        Ok(CohFT { frame, r, leg, sqrt_delta, unit, min_known: Some(Frac::zero()) })
    }

    pub fn from_chart(spec: &ChartSpec, opts: &CohFTOptions) -> Result<Self> {
        let chart = FrobeniusChart::from_spec(spec.clone())?;
        let frame = IdempotentFrame::new(&chart, &FrameOptions { precision: opts.precision, probe: opts.probe.clone(), ..Default::default() })?;
        let r = solve_flatness(&frame, opts.z_order, &opts.policy)?;
        CohFT::new(frame, r)
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn param(&self) -> &Symbol {
        self.frame.param()
    }

    /// The same theory acted on by a further R-matrix `h` in the normalized basis:
    /// `R` becomes `h R`.
    pub fn act(&self, h: &RMatrix) -> Result<CohFT> {
        let mut out = self.clone();
        out.r = h.compose(&self.r)?;
        out.leg = RMatrix::from_coeffs(out.r.inverse_coeffs())?;
        Ok(out)
    }

    /// Replace the leg matrix directly, keeping `R = L^{-1}` in step.
    pub fn with_leg(&self, leg: RMatrix) -> Result<CohFT> {
        let mut out = self.clone();
        out.r = RMatrix::from_coeffs(leg.inverse_coeffs())?;
        out.leg = leg;
        Ok(out)
    }

    fn zero(&self) -> Series {
        Series::zero(self.param())
    }
}

fn negligible(s: &Series) -> bool {
    s.is_zero() && s.is_exact()
}

/// An insertion `sum_j psi^j v_j`, in flat or normalized coordinates.
#[derive(Clone, Debug)]
pub struct Insertion {
    pub coeffs: Vec<Vec<Series>>,
    pub normalized: bool,
}

impl Insertion {
    pub fn flat(param: &Symbol, v: &[Rational]) -> Self {
        Insertion { coeffs: vec![v.iter().map(|x| Series::rational(param, x.clone())).collect()], normalized: false }
    }

    /// The `a`-th flat basis field.
    pub fn flat_basis(param: &Symbol, n: usize, a: usize) -> Self {
        let v: Vec<Rational> = (0..n).map(|i| if i == a { Rational::one() } else { Rational::zero() }).collect();
        Insertion::flat(param, &v)
    }

    pub fn normalized(v: Vec<Series>) -> Self {
        Insertion { coeffs: vec![v], normalized: true }
    }

    /// Multiply by `psi^a`.
    pub fn times_psi(mut self, a: usize) -> Self {
        let n = self.coeffs[0].len();
        let param = self.coeffs[0][0].param().clone();
        let mut pre = vec![vec![Series::zero(&param); n]; a];
        pre.append(&mut self.coeffs);
        self.coeffs = pre;
        self
    }

    fn to_normalized(&self, cohft: &CohFT) -> Result<Vec<Vec<Series>>> {
        if self.coeffs.iter().any(|c| c.len() != cohft.dim()) {
            return Err(Error::Dimension("insertion vector of the wrong length".into()));
        }
        if self.normalized {
            return Ok(self.coeffs.clone());
        }
        let pinv = cohft.frame.psi_inv()?;
        self.coeffs.iter().map(|c| pinv.apply(c)).collect()
    }
}

/// `omega_{g,n}` of normalized idempotents with the given colors:
/// `Delta_i^{(2g-2+n)/2}` when all colors equal `i`, `sum_i Delta_i^{g-1}` when `n = 0`, else 0.
pub fn tqft_value(cohft: &CohFT, g: u32, colors: &[usize]) -> Result<Series> {
    let e = 2 * g as i64 - 2 + colors.len() as i64;
    let prec = cohft.frame.precision;
    let power = |s: &Series, e: i64| -> Result<Series> {
        if e >= 0 {
            Ok(s.pow(e as u32))
        } else {
            Ok(inv_p(s, prec)?.pow((-e) as u32))
        }
    };
    if colors.is_empty() {
        let mut acc = cohft.zero();
        for s in &cohft.sqrt_delta {
            acc = &acc + &power(s, e)?;
        }
        return Ok(acc);
    }
    if colors.iter().any(|c| *c >= cohft.dim()) {
        return Err(Error::Input("color out of range".into()));
    }
    if colors.iter().any(|c| *c != colors[0]) {
        return Ok(cohft.zero());
    }
    power(&cohft.sqrt_delta[colors[0]], e)
}

/// `omega_{g,n}` on flat vectors.
pub fn tqft_flat(cohft: &CohFT, g: u32, vectors: &[Vec<Rational>]) -> Result<Series> {
    let pinv = cohft.frame.psi_inv()?;
    let xs: Vec<Vec<Series>> = vectors
        .iter()
        .map(|v| pinv.apply(&v.iter().map(|c| Series::rational(cohft.param(), c.clone())).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let mut acc = cohft.zero();
    for i in 0..cohft.dim() {
        let mut term = tqft_value(cohft, g, &vec![i; vectors.len()])?;
        for x in &xs {
            term = &term * &x[i];
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

fn require_order(cohft: &CohFT, needed: usize) -> Result<()> {
    if cohft.leg.z_order() < needed {
        return Err(Error::Truncation(format!("z-order {} of the R-matrix is below the needed {needed}", cohft.leg.z_order())));
    }
    Ok(())
}

/// Leg series `L(psi) x` for an insertion `x`, as `[psi power][color]` up to `max`.
pub fn leg_term(cohft: &CohFT, x: &Insertion, max: usize) -> Result<Vec<Vec<Series>>> {
    require_order(cohft, max)?;
    let xs = x.to_normalized(cohft)?;
    let n = cohft.dim();
    let mut out = vec![vec![cohft.zero(); n]; max + 1];
    for (j, xj) in xs.iter().enumerate() {
        if xj.iter().all(negligible) {
            continue;
        }
        for k in 0..=max.saturating_sub(j) {
            if j + k > max {
                break;
            }
            let y = cohft.leg.coeffs[k].apply(xj)?;
            for c in 0..n {
                out[j + k][c] = &out[j + k][c] + &y[c];
            }
        }
    }
    Ok(out)
}

/// Edge bivector `(Id - L(z) L(w)^t) / (z + w)` as `[p][q]` coefficient
/// matrices of `z^p w^q` with `p + q <= max`.
pub fn edge_term(cohft: &CohFT, max: usize) -> Result<Vec<Vec<SeriesMatrix>>> {
    require_order(cohft, max + 1)?;
    let l = &cohft.leg.coeffs;
    let n = cohft.dim();
    let param = cohft.param().clone();
    let zero = SeriesMatrix::zeros(&param, n, n);
    // numerator coefficients N[p][q], p + q <= max + 1
    let num = |p: usize, q: usize| -> Result<SeriesMatrix> {
        let prod = l[p].mul(&l[q].transpose())?;
        if p == 0 && q == 0 {
            SeriesMatrix::identity(&param, n).sub(&prod)
        } else {
            Ok(prod.scale_rational(&-Rational::one()))
        }
    };
    let mut quo = vec![vec![zero.clone(); max + 1]; max + 1];
    for d in 1..=max + 1 {
        // N[p][q] = Q[p-1][q] + Q[p][q-1] along p + q = d
        let mut prev = zero.clone();
        for q in 0..d {
            let p = d - q;
            let qv = num(p, q)?.sub(&prev)?;
            quo[p - 1][q] = qv.clone();
            prev = qv;
        }
        let rest = num(0, d)?.sub(&prev)?;
        if !rest.is_zero() {
            return Err(Error::Consistency(format!("edge numerator not divisible by z + w at degree {d}; R is not symplectic")));
        }
    }
    Ok(quo)
}

/// Dilaton leaf `T(z) = z (one - L(z) one)` as `[z power][color]` up to `max`.
pub fn dilaton_leaf(cohft: &CohFT, max: usize) -> Result<Vec<Vec<Series>>> {
    require_order(cohft, max.saturating_sub(1))?;
    let n = cohft.dim();
    let mut out = vec![vec![cohft.zero(); n]; max + 1];
    for m in 1..=max {
        let y = cohft.leg.coeffs[m - 1].apply(&cohft.unit)?;
        for c in 0..n {
            out[m][c] = if m == 1 { &cohft.unit[c] - &y[c] } else { -y[c].clone() };
        }
    }
    if out.len() > 1 && !out[1].iter().all(|s| s.is_zero()) {
        return Err(Error::Consistency("dilaton leaf has a linear term".into()));
    }
    Ok(out)
}

pub(crate) fn rational_series(param: &Symbol, c: Rational) -> Series {
    Series::constant(param, MultiPoly::constant(c))
}
