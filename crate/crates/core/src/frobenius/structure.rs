//! Local structure near a smooth point of the discriminant, and the
//! Psi0-conjugated frame used for genus-one extension.

use num::Zero;
use serde::Serialize;

use super::frame::{inv_p, pow_p, root_p, IdempotentFrame};
use crate::error::{Error, Result};
use crate::exactalg::{fr, Frac, Rational, Series, SeriesMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    /// Order of the local parameter along the discriminant: `t_D ~ param^e`.
    pub t_d_exponent: String,
    pub m: String,
    pub pair: (usize, usize),
    pub idempotent_orders: Vec<String>,
    pub u_diff_order: String,
    pub basis_orders: Vec<String>,
    pub holomorphic_basis: bool,
    pub disc_order: String,
    #[serde(skip)]
    pub m_value: Frac,
    #[serde(skip)]
    pub e_value: Frac,
}

fn t_d_exponent(frame: &IdempotentFrame) -> Result<Frac> {
    let ex = &frame.chart.expansion;
    let mut best: Option<Frac> = None;
    for s in &ex.subst {
        let ser = Series::from_poly(s, &ex.param);
        let c0 = ser.coeff(Frac::zero()).unwrap_or_default();
        let rest = &ser - &Series::constant(&ex.param, c0);
        if let Some(o) = rest.order() {
            best = Some(best.map_or(o, |b: Frac| b.min(o)));
        }
    }
    best.ok_or_else(|| Error::Structure("flat coordinates do not depend on the parameter".into()))
}

pub fn local_structure_probe(frame: &IdempotentFrame) -> Result<StructureReport> {
    let n = frame.dim();
    let e = t_d_exponent(frame)?;
    let orders = frame.idempotent_orders();
    let neg: Vec<usize> = (0..n).filter(|i| orders[*i] < Frac::zero()).collect();
    if neg.len() > 2 {
        return Err(Error::Structure(format!("{} idempotents of negative order", neg.len())));
    }
    if neg.len() != 2 {
        return Err(Error::Structure("expected exactly two idempotents of negative order".into()));
    }
    let (i1, i2) = (neg[0], neg[1]);
    if orders[i1] != orders[i2] {
        return Err(Error::Structure("the two singular idempotents have different orders".into()));
    }
    let m = -orders[i1] / e;
    let diff = &frame.u[i1] - &frame.u[i2];
    let od = diff.order_or_err()?;
    if od / e != m + 1 {
        return Err(Error::Structure(format!("order of u{i1} - u{i2} is {} in t_D, expected {}", od / e, m + 1)));
    }
    let prec = frame.precision;
    let w = pow_p(&diff, m / (m + 1), 0, prec)?;
    let mut fields: Vec<Vec<Series>> = Vec::new();
    fields.push(frame.idempotents[i1].iter().zip(&frame.idempotents[i2]).map(|(a, b)| &(a - b) * &w).collect());
    fields.push(frame.idempotents[i1].iter().zip(&frame.idempotents[i2]).map(|(a, b)| a + b).collect());
    for (i, eps) in frame.idempotents.iter().enumerate() {
        if i != i1 && i != i2 {
            fields.push(eps.clone());
        }
    }
    let basis_orders: Vec<Frac> =
        fields.iter().map(|f| f.iter().filter_map(|c| c.valuation()).min().unwrap_or(Frac::zero())).collect();
    let holomorphic = basis_orders.iter().all(|o| *o >= Frac::zero());
    let disc = frame.chart.to_local(&frame.chart.discriminant())?;
    let disc_order = disc.order_or_err()? / e;
    Ok(StructureReport {
        t_d_exponent: e.to_string(),
        m: m.to_string(),
        pair: (i1, i2),
        idempotent_orders: orders.iter().map(|o| (o / e).to_string()).collect(),
        u_diff_order: (od / e).to_string(),
        basis_orders: basis_orders.iter().map(|o| (o / e).to_string()).collect(),
        holomorphic_basis: holomorphic,
        disc_order: disc_order.to_string(),
        m_value: m,
        e_value: e,
    })
}

/// Frame adapted to the coordinates `(t0, t, u_3, ...)` with `sqrt(t) = (3/4 (u1 - u2))^(1/3)`.
#[derive(Clone, Debug)]
pub struct Psi0Frame {
    pub pair: (usize, usize),
    pub sqrt_t: Series,
    pub t: Series,
    pub t0: Series,
    pub eta0: Series,
    pub eta1: Series,
    pub sqrt_eta1: Series,
    /// Square roots of the norms induced by `sqrt(eta1)`; the pair first, then the rest.
    pub sqrt_delta: Vec<Series>,
    pub psi0: SeriesMatrix,
    pub psi0_inv: SeriesMatrix,
    /// Flat basis from the Psi0-normalized basis; holomorphic.
    pub psi_tilde: SeriesMatrix,
    /// `(t0, t, u_3, ...)` coordinate fields from the Psi0-normalized basis.
    pub psi_tilde_prime: SeriesMatrix,
    pub a: Series,
    pub c: Series,
    /// Idempotent order, pair first.
    pub order: Vec<usize>,
}

pub fn psi0_frame(frame: &IdempotentFrame) -> Result<Psi0Frame> {
    let report = local_structure_probe(frame)?;
    if report.m_value != fr(1, 2) {
        return Err(Error::Extendability(format!("genus-one extendability fails: m = {}", report.m)));
    }
    let n = frame.dim();
    let prec = frame.precision;
    let param = frame.param().clone();
    let (i1, i2) = report.pair;
    let mut order = vec![i1, i2];
    order.extend((0..n).filter(|i| *i != i1 && *i != i2));
    let chart = &frame.chart;

    let diff = &frame.u[i1] - &frame.u[i2];
    let sqrt_t = root_p(&diff.scale_rational(&Rational::new(3.into(), 4.into())), 3, prec)?;
    let t = &sqrt_t * &sqrt_t;
    let t0 = (&frame.u[i1] + &frame.u[i2]).scale_rational(&Rational::new(1.into(), 2.into()));
    let e1 = &frame.idempotents[i1];
    let e2 = &frame.idempotents[i2];
    let dt0: Vec<Series> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
    let dt: Vec<Series> = e1.iter().zip(e2).map(|(a, b)| &(a - b) * &sqrt_t).collect();
    let eta0 = chart.pairing(&dt0, &dt0);
    let eta1 = chart.pairing(&dt, &dt0);
    if !chart.pairing(&dt, &dt).agrees_with(&(&t * &eta0)) {
        return Err(Error::Consistency("eta(dt, dt) != t eta0".into()));
    }
    let two = Series::rational(&param, Rational::from_integer(2.into()));
    let sigma1 = root_p(&(&two * &sqrt_t), 2, prec)?;
    let sigma2 = root_p(&(-&(&two * &sqrt_t)), 2, prec)?;
    let sqrt_eta1 = root_p(&eta1, 2, prec)?;
    let eta1_inv = inv_p(&eta1, prec)?;
    let x = &(&sqrt_t * &eta0) * &eta1_inv;
    let one = Series::one(&param);
    let half_inv = Frac::new(-1, 2);
    let sqrt_eta1_inv = inv_p(&sqrt_eta1, prec)?;
    let sd1 = &(&sigma1 * &sqrt_eta1_inv) * &pow_p(&(&one + &x), half_inv, 0, prec)?;
    let sd2 = &(&sigma2 * &sqrt_eta1_inv) * &pow_p(&(&one - &x), half_inv, 0, prec)?;
    if !(&sd1 * &sd1).agrees_with(&frame.delta[i1]) || !(&sd2 * &sd2).agrees_with(&frame.delta[i2]) {
        return Err(Error::Consistency("induced square roots of the norms".into()));
    }
    let mut sqrt_delta = vec![sd1.clone(), sd2.clone()];
    sqrt_delta.extend(order[2..].iter().map(|i| frame.sqrt_delta[*i].clone()));

    // Psi0 and its inverse, rows and columns ordered (t0, t, rest)
    let s1i = inv_p(&sigma1, prec)?;
    let s2i = inv_p(&sigma2, prec)?;
    let mut psi0 = SeriesMatrix::identity(&param, n);
    psi0[(0, 0)] = &sqrt_t * &s1i;
    psi0[(0, 1)] = -&(&sqrt_t * &s2i);
    psi0[(1, 0)] = s1i.clone();
    psi0[(1, 1)] = s2i.clone();
    let half = Rational::new(1.into(), 2.into());
    let sqrt_t_inv = inv_p(&sqrt_t, prec)?;
    let mut psi0_inv = SeriesMatrix::identity(&param, n);
    psi0_inv[(0, 0)] = (&sigma1 * &sqrt_t_inv).scale_rational(&half);
    psi0_inv[(0, 1)] = sigma1.scale_rational(&half);
    psi0_inv[(1, 0)] = -&(&sigma2 * &sqrt_t_inv).scale_rational(&half);
    psi0_inv[(1, 1)] = sigma2.scale_rational(&half);
    if !psi0.mul(&psi0_inv)?.is_identity() {
        return Err(Error::Consistency("psi0 inverse".into()));
    }

    let cols: Vec<Vec<Series>> =
        order.iter().zip(&sqrt_delta).map(|(i, s)| frame.idempotents[*i].iter().map(|c| c * s).collect()).collect();
    let psi1 = SeriesMatrix::from_columns(&param, &cols);
    let psi_tilde = psi1.mul(&psi0_inv)?;
    if let Some(o) = psi_tilde.min_order() {
        if o < Frac::zero() {
            return Err(Error::Consistency(format!("psi tilde has a pole of order {o}")));
        }
    }
    let mut psi_prime = SeriesMatrix::zeros(&param, n, n);
    psi_prime[(0, 0)] = sd1.scale_rational(&half);
    psi_prime[(1, 0)] = (&sd1 * &sqrt_t_inv).scale_rational(&half);
    psi_prime[(0, 1)] = sd2.scale_rational(&half);
    psi_prime[(1, 1)] = -&(&sd2 * &sqrt_t_inv).scale_rational(&half);
    for k in 2..n {
        psi_prime[(k, k)] = sqrt_delta[k].clone();
    }
    let psi_tilde_prime = psi_prime.mul(&psi0_inv)?;
    let a = &psi_tilde_prime[(0, 0)] * &sqrt_eta1;
    let c = &psi_tilde_prime[(1, 0)] * &sqrt_eta1;
    if !psi_tilde_prime[(1, 1)].agrees_with(&psi_tilde_prime[(0, 0)])
        || !psi_tilde_prime[(0, 1)].agrees_with(&(&t * &psi_tilde_prime[(1, 0)]))
    {
        return Err(Error::Consistency("upper block of psi tilde prime".into()));
    }
    Ok(Psi0Frame {
        pair: (i1, i2),
        sqrt_t,
        t,
        t0,
        eta0,
        eta1,
        sqrt_eta1,
        sqrt_delta,
        psi0,
        psi0_inv,
        psi_tilde,
        psi_tilde_prime,
        a,
        c,
        order,
    })
}

/// Closed forms for the upper block: `a = ((1+x)^(-1/2) + (1-x)^(-1/2))/2` and
/// `c = ((1+x)^(-1/2) - (1-x)^(-1/2)) / (2 sqrt(t))` with `x = sqrt(t) eta0 / eta1`.
pub fn upper_block_closed_form(p: &Psi0Frame, prec: Frac) -> Result<(Series, Series)> {
    let param = p.t.param().clone();
    let x = &(&p.sqrt_t * &p.eta0) * &inv_p(&p.eta1, prec)?;
    let one = Series::one(&param);
    let half = Rational::new(1.into(), 2.into());
    let plus = pow_p(&(&one + &x), Frac::new(-1, 2), 0, prec)?;
    let minus = pow_p(&(&one - &x), Frac::new(-1, 2), 0, prec)?;
    let a = (&plus + &minus).scale_rational(&half);
    let c = &(&plus - &minus).scale_rational(&half) * &inv_p(&p.sqrt_t, prec)?;
    Ok((a, c))
}
