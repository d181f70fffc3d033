//! Constant (hence holomorphic) symplectic R-matrices `exp(A(z))`.

use num::{One, Zero};

use super::RMatrix;
use crate::error::{Error, Result};
use crate::exactalg::linalg::{inverse, mat_mul};
use crate::exactalg::{Rational, SeriesMatrix};
use crate::frobenius::IdempotentFrame;

type Mat = Vec<Vec<Rational>>;

fn adjoint(eta: &[Vec<Rational>], eta_inv: &[Vec<Rational>], m: &[Vec<Rational>]) -> Mat {
    let n = m.len();
    let mt: Mat = (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect();
    mat_mul(&mat_mul(eta_inv, &mt), eta)
}

/// Project arbitrary matrices `M_1..M_K` onto generators with `A_k^* = (-1)^{k+1} A_k`,
/// the adjoint taken with respect to `eta`. Then `exp(sum A_k z^k)` is symplectic.
pub fn symplectic_generator(eta: &[Vec<Rational>], raw: &[Mat]) -> Result<Vec<Mat>> {
    let eta_inv = inverse(eta).ok_or_else(|| Error::Input("degenerate metric".into()))?;
    let half = Rational::new(1.into(), 2.into());
    Ok(raw
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let k = i + 1;
            let adj = adjoint(eta, &eta_inv, m);
            m.iter()
                .zip(&adj)
                .map(|(r, s)| {
                    r.iter()
                        .zip(s)
                        .map(|(x, y)| if k % 2 == 1 { (x + y) * &half } else { (x - y) * &half })
                        .collect()
                })
                .collect()
        })
        .collect())
}

fn poly_mul(a: &[Mat], b: &[Mat], k: usize, n: usize) -> Vec<Mat> {
    let mut out = vec![vec![vec![Rational::zero(); n]; n]; k + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j > k {
                continue;
            }
            let p = mat_mul(x, y);
            for r in 0..n {
                for c in 0..n {
                    out[i + j][r][c] += &p[r][c];
                }
            }
        }
    }
    out
}

/// Coefficients of `exp(A(z))` up to `z^k`, where `gen[i]` multiplies `z^{i+1}`.
pub fn exp_series(gen: &[Mat], k: usize) -> Vec<Mat> {
    let n = gen.first().map(|m| m.len()).unwrap_or(0);
    let id: Mat = (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    let mut a = vec![vec![vec![Rational::zero(); n]; n]];
    a.extend(gen.iter().take(k).cloned());
    let mut out = vec![vec![vec![Rational::zero(); n]; n]; k + 1];
    out[0] = id.clone();
    let mut power = vec![id];
    let mut fact = Rational::one();
    for m in 1..=k {
        power = poly_mul(&power, &a, k, n);
        fact = fact * Rational::from_integer((m as i64).into());
        for (d, c) in power.iter().enumerate() {
            for r in 0..n {
                for s in 0..n {
                    out[d][r][s] += &c[r][s] / &fact;
                }
            }
        }
    }
    out
}

/// `exp(A(z))` given in the flat basis, moved to the normalized idempotent basis of `frame`.
pub fn holomorphic_r(frame: &IdempotentFrame, gen: &[Mat], k: usize) -> Result<RMatrix> {
    let param = frame.param().clone();
    let psi_inv = frame.psi_inv()?;
    let coeffs = exp_series(gen, k)
        .iter()
        .map(|m| psi_inv.mul(&SeriesMatrix::from_rationals(&param, m))?.mul(&frame.psi))
        .collect::<Result<Vec<_>>>()?;
    RMatrix::from_coeffs(coeffs)
}
