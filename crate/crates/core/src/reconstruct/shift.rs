//! Dilaton shift of a CohFT and the one-dimensional extension of a chart.

use num::{One, Zero};

use super::{reconstruct_class, CohFT, Insertion};
use crate::error::{Error, Result};
use crate::exactalg::{Frac, MultiPoly, Rational, Series, Symbol};
use crate::frobenius::frame::inv_p;
use crate::frobenius::{ChartSpec, ExpansionSpec, FrobeniusChart};
use crate::modgraphs::StrataVector;

/// `sum_k 1/k! pi_* Omega_{g, n+k}(inputs, psi v, ..., psi v)` for `k <= max_k`,
/// where `v` is given in normalized coordinates.
pub fn dilaton_shift_formal(
    cohft: &CohFT,
    v: &[MultiPoly],
    g: u32,
    inputs: &[Insertion],
    codim: u32,
    max_k: usize,
) -> Result<StrataVector<Series>> {
    if v.len() != cohft.dim() {
        return Err(Error::Dimension("shift vector of the wrong length".into()));
    }
    let n = inputs.len();
    let vs: Vec<Series> = v.iter().map(|c| Series::constant(cohft.param(), c.clone())).collect();
    let mut out = StrataVector::new(g, n);
    let mut fact = Rational::one();
    for k in 0..=max_k {
        if k > 0 {
            fact *= Rational::from_integer((k as i64).into());
        }
        let mut ins = inputs.to_vec();
        ins.extend((0..k).map(|_| Insertion::normalized(vs.clone()).times_psi(1)));
        let big = reconstruct_class(cohft, g, n + k, &ins, codim + k as u32)?;
        let pushed = big.forget_last(k)?;
        out = out.add(&pushed.scale(&(Rational::one() / &fact)));
    }
    Ok(out)
}

/// The shifted theory in closed form: `Delta_i^{-1/2}` becomes `Delta_i^{-1/2} - v_i`
/// and the dilaton leaf becomes `z (Id - L(z)) (one - v)`. Symbolic shifts are
/// expanded to total degree `max_deg` in the symbols they contain.
pub fn dilaton_shift_resummed(cohft: &CohFT, v: &[MultiPoly], max_deg: usize) -> Result<CohFT> {
    if v.len() != cohft.dim() {
        return Err(Error::Dimension("shift vector of the wrong length".into()));
    }
    let param = cohft.param().clone();
    let prec = cohft.frame.precision;
    let mut out = cohft.clone();
    for i in 0..cohft.dim() {
        let vi = Series::constant(&param, v[i].clone());
        out.unit[i] = &cohft.unit[i] - &vi;
        let s = &cohft.sqrt_delta[i];
        out.sqrt_delta[i] = if v[i].as_rational().is_some() {
            let base = &inv_p(s, prec)? - &vi;
            inv_p(&base, prec)?
        } else {
            // s / (1 - v s) = s sum_j (v s)^j
            let vsx = &vi * s;
            let mut term = s.clone();
            let mut acc = s.clone();
            for _ in 0..max_deg {
                term = &term * &vsx;
                acc = &acc + &term;
            }
            acc
        };
    }
    Ok(out)
}

/// Drop every coefficient term of total degree above `max` in `syms`.
pub fn truncate_symbols(v: &StrataVector<Series>, syms: &[Symbol], max: usize) -> StrataVector<Series> {
    let cap = Frac::from_integer(max as i64);
    let mut out = StrataVector::new(v.g, v.n);
    for (d, c) in &v.terms {
        let t = c.map_coeffs(|p| p.truncate_degree(syms, cap));
        if !(t.is_zero() && t.is_exact()) {
            out.add_term(d.clone(), t);
        }
    }
    out
}

/// Chart of dimension `N + 1`: a new flat coordinate `w` orthogonal to the old
/// ones with `eta(d_w, d_w) = c`, potential `c/6 w^3`, and `d_w` added to the unit,
/// so `d_w` is an idempotent with `Omega(d_w, ..., d_w) = c^{1-g}`.
pub fn extend_dimension(spec: &ChartSpec, c: &Rational) -> Result<ChartSpec> {
    if c.is_zero() {
        return Err(Error::Input("c = 0 gives a degenerate metric".into()));
    }
    let chart = FrobeniusChart::from_spec(spec.clone())?;
    let mut w = "w".to_string();
    while spec.coordinates.contains(&w) || spec.expansion_point.as_ref().is_some_and(|e| e.coordinates.contains(&w)) {
        w.push('w');
    }
    let n = spec.dimension;
    let mut out = spec.clone();
    out.name = format!("{}+{}({c})", spec.name, w);
    out.dimension = n + 1;
    out.coordinates.push(w.clone());
    for row in out.metric.iter_mut() {
        row.push("0".into());
    }
    let mut last = vec!["0".to_string(); n];
    last.push(c.to_string());
    out.metric.push(last);
    out.potential = format!("{} + {}/6*{w}^3", spec.potential, c);
    let mut unit: Vec<String> = chart.unit.iter().map(|x| x.to_string()).collect();
    unit.push("1".into());
    out.unit = Some(unit);
    out.unit_index = None;
    // keep the old expansion parameter; the default would switch to w
    out.expansion_point = Some(match &spec.expansion_point {
        Some(e) => {
            let mut e = e.clone();
            e.coordinates.push(w);
            e
        }
        None => {
            let mut coords = vec![spec.coordinates[n - 1].clone()];
            coords.extend(spec.coordinates[..n - 1].iter().cloned());
            coords.push(w);
            ExpansionSpec { parameter: spec.coordinates[n - 1].clone(), coordinates: coords, substitution: Default::default() }
        }
    });
    Ok(out)
}

/// Normalized shift `v_i = s_i^{-1} - s'_i^{-1}` turning `from` into `to`; both
/// theories must share the idempotent ordering and the difference must be constant.
pub fn shift_between(from: &CohFT, to: &CohFT) -> Result<Vec<MultiPoly>> {
    if from.dim() != to.dim() {
        return Err(Error::Dimension("theories of different dimension".into()));
    }
    let prec = from.frame.precision;
    (0..from.dim())
        .map(|i| {
            let d = &inv_p(&from.sqrt_delta[i], prec)? - &inv_p(&to.sqrt_delta[i], prec)?;
            let c = d.coeff(Frac::zero()).unwrap_or_else(MultiPoly::zero);
            if !(&d - &Series::constant(from.param(), c.clone())).is_zero() {
                return Err(Error::Consistency(format!("norm difference {d} at idempotent {i} is not constant")));
            }
            Ok(c)
        })
        .collect()
}
