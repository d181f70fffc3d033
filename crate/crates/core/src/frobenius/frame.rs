//! Idempotent frames: Lagrange interpolation of a probe field, norms,
//! canonical coordinates and the normalized basis change.

use num::{One, Zero};

use super::chart::FrobeniusChart;
use super::roots::{char_poly, eval_poly, puiseux_roots};
use crate::error::{Error, Result};
use crate::exactalg::{fr, Frac, MultiPoly, Rational, Series, SeriesMatrix};

#[derive(Clone, Debug)]
pub struct FrameOptions {
    /// Absolute order in the local parameter to which truncated quantities are expanded.
    pub precision: Frac,
    pub probe: Option<Vec<Rational>>,
    /// Added to the canonical coordinates after integration (default zero).
    pub u_constants: Option<Vec<MultiPoly>>,
}

impl Default for FrameOptions {
    fn default() -> Self {
        FrameOptions { precision: fr(4, 1), probe: None, u_constants: None }
    }
}

#[derive(Clone, Debug)]
pub struct IdempotentFrame {
    pub chart: FrobeniusChart,
    pub precision: Frac,
    pub probe: Vec<Rational>,
    /// Eigenvalues of multiplication by the probe, one per idempotent.
    pub roots: Vec<Series>,
    /// Idempotents in the flat basis.
    pub idempotents: Vec<Vec<Series>>,
    /// `delta[i] = 1 / eta(e_i, e_i)`.
    pub delta: Vec<Series>,
    pub sqrt_delta: Vec<Series>,
    /// `eigen[i][a]`: eigenvalue of multiplication by the flat field `a` on idempotent `i`.
    pub eigen: Vec<Vec<Series>>,
    /// `du[i][b]`: component of `du_i` along local coordinate `b`.
    pub du: Vec<Vec<Series>>,
    pub u: Vec<Series>,
    /// Columns are the normalized idempotents in the flat basis.
    pub psi: SeriesMatrix,
    /// Flat basis fields expressed in local coordinate directions.
    pub jinv: SeriesMatrix,
}

/// Inverse, expanded to `prec` when the input is exact but not a monomial.
pub fn inv_p(s: &Series, prec: Frac) -> Result<Series> {
    match s.inv() {
        Err(Error::NeedsPrecision(_)) => s.inv_to(prec),
        r => r,
    }
}

pub fn pow_p(s: &Series, alpha: Frac, branch: usize, prec: Frac) -> Result<Series> {
    match s.pow_frac(alpha, branch) {
        Err(Error::NeedsPrecision(_)) => s.pow_frac_to(alpha, branch, prec),
        r => r,
    }
}

pub fn root_p(s: &Series, n: i64, prec: Frac) -> Result<Series> {
    pow_p(s, Frac::new(1, n), 0, prec)
}

/// Replace a truncated root of `chi` by its known part when that part is an exact root.
fn exactify(x: Series, chi: &[Series]) -> Series {
    if x.is_exact() {
        return x;
    }
    let known = x.part_below(x.truncation().expect("truncated"));
    let r = eval_poly(chi, &known);
    if r.is_zero() && r.is_exact() {
        known
    } else {
        x
    }
}

/// Probe candidates: flat basis fields, then small integer combinations.
fn probe_candidates(n: usize) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> =
        (0..n).map(|a| (0..n).map(|b| if a == b { Rational::one() } else { Rational::zero() }).collect()).collect();
    let mut combos: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        combos = combos.into_iter().flat_map(|v| (-3..=3).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    combos.retain(|v| v.iter().filter(|c| **c != 0).count() >= 2);
    combos.sort_by_key(|v| (v.iter().map(|c| c.abs()).sum::<i64>(), v.iter().map(|c| -c).collect::<Vec<_>>()));
    out.extend(combos.into_iter().map(|v| v.into_iter().map(|c| Rational::from_integer(c.into())).collect()));
    out
}

impl IdempotentFrame {
    pub fn new(chart: &FrobeniusChart, opts: &FrameOptions) -> Result<Self> {
        let n = chart.dim();
        let prec = opts.precision;
        let param = chart.param().clone();
        let candidates = match &opts.probe {
            Some(p) => {
                if p.len() != n {
                    return Err(Error::Dimension("probe length".into()));
                }
                vec![p.clone()]
            }
            None => probe_candidates(n),
        };
        let mut failures = Vec::new();
        let mut found = None;
        for probe in candidates {
            let x: Vec<Series> = probe.iter().map(|c| Series::rational(&param, c.clone())).collect();
            let m = chart.mult_matrix(&x)?;
            let chi = char_poly(&m)?;
            match puiseux_roots(&chi, prec) {
                Ok(roots) if distinct(&roots) => {
                    found = Some((probe, m, roots));
                    break;
                }
                Ok(_) => failures.push(format!("{probe:?}: coincident roots")),
                Err(e) => failures.push(format!("{probe:?}: {e}")),
            }
            if failures.len() > 64 {
                break;
            }
        }
        let Some((probe, m, roots)) = found else {
            return Err(Error::NoProbe(failures.join("; ")));
        };

        let unit = chart.unit_series();
        let mut idempotents = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = unit.clone();
            let mut denom = Series::one(&param);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let mv = m.apply(&v)?;
                v = mv.iter().zip(&v).map(|(a, b)| a - &(b * &roots[j])).collect();
                denom = &denom * &(&roots[i] - &roots[j]);
            }
            let dinv = inv_p(&denom, prec)?;
            idempotents.push(v.iter().map(|c| c * &dinv).collect::<Vec<_>>());
        }
        // singular idempotents first, keeping the root order otherwise
        let ord = |e: &Vec<Series>| e.iter().filter_map(|c| c.order()).min().unwrap_or(Frac::zero());
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|i| ord(&idempotents[*i]));
        let idempotents: Vec<Vec<Series>> = perm.iter().map(|i| idempotents[*i].clone()).collect();
        let roots: Vec<Series> = perm.iter().map(|i| roots[*i].clone()).collect();
        let mut delta = Vec::with_capacity(n);
        let mut sqrt_delta = Vec::with_capacity(n);
        for e in &idempotents {
            let d = inv_p(&chart.pairing(e, e), prec)?;
            sqrt_delta.push(root_p(&d, 2, prec)?);
            delta.push(d);
        }

        let chis: Vec<Vec<Series>> =
            (0..n).map(|a| char_poly(&chart.mult_matrix(&chart.basis_series(a))?)).collect::<Result<_>>()?;
        let mut eigen = Vec::with_capacity(n);
        for i in 0..n {
            let row: Vec<Series> = (0..n)
                .map(|a| {
                    let lam = &delta[i] * &chart.pairing(&idempotents[i], &chart.basis_series(a));
                    exactify(lam, &chis[a])
                })
                .collect();
            eigen.push(row);
        }
        let roots: Vec<Series> = {
            let chi_probe = char_poly(&m)?;
            roots.into_iter().map(|r| exactify(r, &chi_probe)).collect()
        };

        let j = chart.jacobian();
        let jinv = match j.inverse() {
            Err(Error::NeedsPrecision(_)) => j.inverse_to(prec)?,
            r => r?,
        };
        let mut du = Vec::with_capacity(n);
        let mut u = Vec::with_capacity(n);
        for (i, lam) in eigen.iter().enumerate() {
            let form: Vec<Series> = (0..n)
                .map(|b| (0..n).fold(Series::zero(&param), |acc, a| &acc + &(&lam[a] * &j[(a, b)])))
                .collect();
            let mut ui = integrate_closed(chart, &form)?;
            if let Some(cs) = &opts.u_constants {
                ui = &ui + &Series::constant(&param, cs[i].clone());
            }
            du.push(form);
            u.push(ui);
        }
        let cols: Vec<Vec<Series>> =
            idempotents.iter().zip(&sqrt_delta).map(|(e, s)| e.iter().map(|c| c * s).collect()).collect();
        let psi = SeriesMatrix::from_columns(&param, &cols);
        Ok(IdempotentFrame {
            chart: chart.clone(),
            precision: prec,
            probe,
            roots,
            idempotents,
            delta,
            sqrt_delta,
            eigen,
            du,
            u,
            psi,
            jinv,
        })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn param(&self) -> &crate::exactalg::Symbol {
        self.chart.param()
    }

    /// Inverse of `psi`, which is `psi^t eta` because the columns are orthonormal.
    pub fn psi_inv(&self) -> Result<SeriesMatrix> {
        self.psi.transpose().mul(&self.chart.eta_series())
    }

    /// Components of a flat-basis vector field along the local coordinate directions.
    pub fn to_local_dirs(&self, v: &[Series]) -> Result<Vec<Series>> {
        self.jinv.apply(v)
    }

    /// Directional derivative of a local function along a flat-basis vector field.
    pub fn derivative(&self, f: &Series, v: &[Series]) -> Result<Series> {
        let dirs = self.to_local_dirs(v)?;
        Ok(dirs
            .iter()
            .enumerate()
            .fold(Series::zero(self.param()), |acc, (b, c)| if c.is_zero() && c.is_exact() { acc } else { &acc + &(c * &self.chart.local_partial(f, b)) }))
    }

    /// `du_i(v)` for a flat-basis vector field.
    pub fn du_apply(&self, i: usize, v: &[Series]) -> Result<Series> {
        let dirs = self.to_local_dirs(v)?;
        Ok(dirs.iter().zip(&self.du[i]).fold(Series::zero(self.param()), |acc, (a, b)| &acc + &(a * b)))
    }

    /// Matrix of the one-form `Psi^{-1} d Psi` evaluated on the field `v`.
    pub fn connection(&self, v: &[Series]) -> Result<SeriesMatrix> {
        let dpsi = self.psi.try_map(|x| self.derivative(x, v))?;
        self.psi_inv()?.mul(&dpsi)
    }

    /// Minimal order of each idempotent (over its flat components).
    pub fn idempotent_orders(&self) -> Vec<Frac> {
        self.idempotents.iter().map(|e| e.iter().filter_map(|c| c.order()).min().unwrap_or(Frac::zero())).collect()
    }

    /// Check the frame identities to the available truncation.
    pub fn check(&self) -> Result<()> {
        let n = self.dim();
        let param = self.param().clone();
        let fail = |what: String| Err(Error::Consistency(what));
        for i in 0..n {
            for j in 0..n {
                let p = self.chart.product(&self.idempotents[i], &self.idempotents[j])?;
                let want: Vec<Series> =
                    if i == j { self.idempotents[i].clone() } else { vec![Series::zero(&param); n] };
                if !p.iter().zip(&want).all(|(a, b)| a.agrees_with(b)) {
                    return fail(format!("e{i} * e{j}"));
                }
                let eta = self.chart.pairing(&self.idempotents[i], &self.idempotents[j]);
                let want = if i == j { inv_p(&self.delta[i], self.precision)? } else { Series::zero(&param) };
                if !eta.agrees_with(&want) {
                    return fail(format!("eta(e{i}, e{j})"));
                }
                let d = self.du_apply(i, &self.idempotents[j])?;
                let want = if i == j { Series::one(&param) } else { Series::zero(&param) };
                if !d.agrees_with(&want) {
                    return fail(format!("du{i}(e{j}) = {d}"));
                }
                if i < j {
                    for c in 0..n {
                        let a = self.derivative(&self.idempotents[j][c], &self.idempotents[i])?;
                        let b = self.derivative(&self.idempotents[i][c], &self.idempotents[j])?;
                        if !a.agrees_with(&b) {
                            return fail(format!("[e{i}, e{j}] component {c}"));
                        }
                    }
                }
            }
        }
        let sum: Vec<Series> = (0..n)
            .map(|c| self.idempotents.iter().fold(Series::zero(&param), |acc, e| &acc + &e[c]))
            .collect();
        if !sum.iter().zip(&self.chart.unit_series()).all(|(a, b)| a.agrees_with(b)) {
            return fail("sum of idempotents".into());
        }
        let g = self.psi.transpose().mul(&self.chart.eta_series())?.mul(&self.psi)?;
        if !g.is_identity() {
            return fail("psi^t eta psi".into());
        }
        if let Some(o) = self.idempotent_orders().into_iter().find(|o| *o > Frac::zero()) {
            return fail(format!("idempotent of positive order {o}"));
        }
        Ok(())
    }
}

fn distinct(roots: &[Series]) -> bool {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if (&roots[i] - &roots[j]).order().is_none() {
                return false;
            }
        }
    }
    true
}

/// Integrate a closed one-form given by its components along the local coordinates.
pub fn integrate_closed(chart: &FrobeniusChart, form: &[Series]) -> Result<Series> {
    let locals = &chart.expansion.locals;
    let param = chart.param();
    let mut u = form[0].integrate()?;
    for b in 1..locals.len() {
        let r = &form[b] - &u.deriv_symbol(&locals[b]);
        let c0 = r.coeff(Frac::zero()).unwrap_or_default();
        let rest = &r - &Series::constant(param, c0.clone());
        if !rest.is_zero() {
            return Err(Error::Integration(format!("form is not closed along {}: {rest}", locals[b])));
        }
        u = &u + &Series::constant(param, c0.integrate(&locals[b])?);
    }
    for (b, f) in form.iter().enumerate() {
        if !chart.local_partial(&u, b).agrees_with(f) {
            return Err(Error::Integration(format!("form is not closed along {}", locals[b])));
        }
    }
    Ok(u)
}
