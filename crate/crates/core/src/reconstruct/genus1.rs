//! The genus-one potential `dG = 1/48 sum_i dlog Delta_i + 1/2 sum_i r_ii du_i`,
//! with `Delta_i` the inverse norms of the idempotents and `r` the first
//! coefficient of the R-matrix.

use super::{reconstruct_class, CohFT, Insertion};
use crate::error::Result;
use crate::exactalg::{Rational, Series};
use crate::frobenius::frame::inv_p;
use crate::intersect::integrate_graph;

/// `dG(X)` for a flat field `X`.
pub fn genus_one_potential(cohft: &CohFT, x: &[Rational]) -> Result<Series> {
    let frame = &cohft.frame;
    let param = cohft.param();
    let xs: Vec<Series> = x.iter().map(|c| Series::rational(param, c.clone())).collect();
    let mut acc = Series::zero(param);
    for i in 0..cohft.dim() {
        let d = &frame.delta[i];
        let dlog = &frame.derivative(d, &xs)? * &inv_p(d, frame.precision)?;
        acc = &acc + &dlog.scale_rational(&Rational::new(1.into(), 48.into()));
        let rii = cohft.r.coeffs[1][(i, i)].clone();
        let du = frame.du_apply(i, &xs)?;
        acc = &acc + &(&rii * &du).scale_rational(&Rational::new(1.into(), 2.into()));
    }
    Ok(acc)
}

/// `int_{M_{1,1}} Omega_{1,1}(X)` from the graph sum.
pub fn genus_one_correlator(cohft: &CohFT, x: &[Rational]) -> Result<Series> {
    let cls = reconstruct_class(cohft, 1, 1, &[Insertion::flat(cohft.param(), x)], 1)?;
    let mut acc = Series::zero(cohft.param());
    for (d, c) in &cls.terms {
        if d.codim() == 1 {
            acc = &acc + &c.scale_rational(&integrate_graph(d));
        }
    }
    Ok(acc)
}
