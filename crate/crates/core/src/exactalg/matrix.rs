use std::fmt;

use super::monomial::Symbol;
use super::rational::{Frac, Rational};
use super::series::Series;
use crate::error::{Error, Result};

/// Dense matrix of series in a common parameter.
#[derive(Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    param: Symbol,
    rows: usize,
    cols: usize,
    entries: Vec<Series>,
}

impl SeriesMatrix {
    pub fn zeros(param: &Symbol, rows: usize, cols: usize) -> Self {
        SeriesMatrix { param: param.clone(), rows, cols, entries: vec![Series::zero(param); rows * cols] }
    }

    pub fn identity(param: &Symbol, n: usize) -> Self {
        let mut m = SeriesMatrix::zeros(param, n, n);
        for i in 0..n {
            m[(i, i)] = Series::one(param);
        }
        m
    }

    pub fn from_rows(param: &Symbol, rows: Vec<Vec<Series>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        SeriesMatrix { param: param.clone(), rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_rationals(param: &Symbol, rows: &[Vec<Rational>]) -> Self {
        SeriesMatrix::from_rows(
            param,
            rows.iter().map(|r| r.iter().map(|x| Series::rational(param, x.clone())).collect()).collect(),
        )
    }

    pub fn from_columns(param: &Symbol, cols: &[Vec<Series>]) -> Self {
        let c = cols.len();
        let r = cols.first().map(|x| x.len()).unwrap_or(0);
        let mut m = SeriesMatrix::zeros(param, r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn param(&self) -> &Symbol {
        &self.param
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Series> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Series> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[Series] {
        &self.entries
    }

    pub fn map<F: Fn(&Series) -> Series>(&self, f: F) -> Self {
        SeriesMatrix { param: self.param.clone(), rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map<F: Fn(&Series) -> Result<Series>>(&self, f: F) -> Result<Self> {
        Ok(SeriesMatrix {
            param: self.param.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn transpose(&self) -> Self {
        let mut m = SeriesMatrix::zeros(&self.param, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn scale(&self, c: &Series) -> Self {
        self.map(|x| x * c)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.map(|x| x.scale_rational(c))
    }

    pub fn add(&self, other: &SeriesMatrix) -> Result<Self> {
        self.same_shape(other)?;
        Ok(SeriesMatrix {
            param: self.param.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &SeriesMatrix) -> Result<Self> {
        self.same_shape(other)?;
        Ok(SeriesMatrix {
            param: self.param.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    fn same_shape(&self, other: &SeriesMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    pub fn mul(&self, other: &SeriesMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut m = SeriesMatrix::zeros(&self.param, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Series::zero(&self.param);
                for k in 0..self.cols {
                    let a = &self[(i, k)];
                    let b = &other[(k, j)];
                    if a.is_zero() && a.is_exact() || b.is_zero() && b.is_exact() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                m[(i, j)] = acc;
            }
        }
        Ok(m)
    }

    pub fn apply(&self, v: &[Series]) -> Result<Vec<Series>> {
        let col = SeriesMatrix::from_columns(&self.param, &[v.to_vec()]);
        Ok(self.mul(&col)?.column(0))
    }

    /// True when every entry vanishes up to its truncation.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let e = &self[(i, j)];
                if i == j {
                    (e - &Series::one(&self.param)).is_zero()
                } else {
                    e.is_zero()
                }
            }))
    }

    /// Minimal order over all entries, `None` if all vanish.
    pub fn min_order(&self) -> Option<Frac> {
        self.entries.iter().filter_map(|e| e.order()).min()
    }

    pub fn min_truncation(&self) -> Option<Frac> {
        self.entries.iter().filter_map(|e| e.truncation()).min()
    }

    fn pivot_inverse(p: &Series, cap: Option<Frac>) -> Result<Series> {
        match (p.inv(), cap) {
            (Ok(x), _) => Ok(x),
            (Err(Error::NeedsPrecision(_)), Some(c)) => p.inv_to(c),
            (Err(e), _) => Err(e),
        }
    }

    /// Gauss-Jordan elimination; pivots are chosen with the lowest order
    /// among entries with unit leading coefficient. Exact non-monomial pivots
    /// are inverted to absolute order `cap`.
    fn eliminate(&self, rhs: Option<&SeriesMatrix>, cap: Option<Frac>) -> Result<(Series, Option<SeriesMatrix>)> {
        if self.rows != self.cols {
            return Err(Error::Dimension("square matrix required".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.cloned();
        let mut det = Series::one(&self.param);
        for col in 0..n {
            let mut best: Option<(usize, Frac)> = None;
            for r in col..n {
                let e = &a[(r, col)];
                if let Some((o, c)) = e.leading() {
                    if c.is_unit() && best.map(|(_, bo)| o < bo).unwrap_or(true) {
                        best = Some((r, o));
                    }
                }
            }
            let (pr, _) = match best {
                Some(x) => x,
                None => {
                    let any = (col..n).any(|r| !a[(r, col)].is_zero());
                    if any {
                        return Err(Error::NonUnit(format!("no unit pivot in column {col}")));
                    }
                    let vo = det.valuation().map(|v| v.to_string()).unwrap_or_else(|| "inf".into());
                    return Err(Error::Singular(vo));
                }
            };
            if pr != col {
                for j in 0..n {
                    a.entries.swap(pr * n + j, col * n + j);
                }
                if let Some(b) = b.as_mut() {
                    for j in 0..b.cols {
                        b.entries.swap(pr * b.cols + j, col * b.cols + j);
                    }
                }
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = &det * &p;
            let pinv = SeriesMatrix::pivot_inverse(&p, cap)?;
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &pinv;
            }
            if let Some(b) = b.as_mut() {
                for j in 0..b.cols {
                    b[(col, j)] = &b[(col, j)] * &pinv;
                }
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() && a[(r, col)].is_exact() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let v = &a[(r, j)] - &(&f * &a[(col, j)]);
                    a[(r, j)] = v;
                }
                if let Some(b) = b.as_mut() {
                    for j in 0..b.cols {
                        let v = &b[(r, j)] - &(&f * &b[(col, j)]);
                        b[(r, j)] = v;
                    }
                }
            }
        }
        Ok((det, b))
    }

    pub fn det(&self) -> Result<Series> {
        if self.rows <= 3 {
            return Ok(self.det_expansion());
        }
        match self.eliminate(None, None) {
            Err(Error::Singular(_)) => Ok(Series::zero(&self.param)),
            Err(Error::NonUnit(_)) | Err(Error::NeedsPrecision(_)) => Ok(self.det_expansion()),
            other => other.map(|x| x.0),
        }
    }

    /// Determinant by cofactor expansion (exact, division free).
    pub fn det_expansion(&self) -> Series {
        let n = self.rows;
        if n == 0 {
            return Series::one(&self.param);
        }
        if n == 1 {
            return self[(0, 0)].clone();
        }
        let mut acc = Series::zero(&self.param);
        for j in 0..n {
            let e = &self[(0, j)];
            if e.is_zero() && e.is_exact() {
                continue;
            }
            let minor = self.minor(0, j);
            let term = e * &minor.det_expansion();
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    pub fn minor(&self, r: usize, c: usize) -> SeriesMatrix {
        let mut rows = Vec::new();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            rows.push((0..self.cols).filter(|j| *j != c).map(|j| self[(i, j)].clone()).collect());
        }
        SeriesMatrix::from_rows(&self.param, rows)
    }

    pub fn inverse(&self) -> Result<SeriesMatrix> {
        let id = SeriesMatrix::identity(&self.param, self.rows);
        Ok(self.eliminate(Some(&id), None)?.1.unwrap())
    }

    /// Inverse, expanding exact non-monomial pivots to absolute order `cap`.
    pub fn inverse_to(&self, cap: Frac) -> Result<SeriesMatrix> {
        let id = SeriesMatrix::identity(&self.param, self.rows);
        Ok(self.eliminate(Some(&id), Some(cap))?.1.unwrap())
    }

    pub fn deriv(&self) -> SeriesMatrix {
        self.map(|x| x.deriv())
    }

    pub fn deriv_symbol(&self, s: &Symbol) -> SeriesMatrix {
        self.map(|x| x.deriv_symbol(s))
    }

    pub fn truncate(&self, order: Frac) -> SeriesMatrix {
        self.map(|x| x.truncate(order))
    }

    /// Canonical text rows.
    pub fn to_text(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect()).collect()
    }

    pub fn sub_block(&self, idx: &[usize]) -> SeriesMatrix {
        let mut m = SeriesMatrix::zeros(&self.param, idx.len(), idx.len());
        for (a, i) in idx.iter().enumerate() {
            for (b, j) in idx.iter().enumerate() {
                m[(a, b)] = self[(*i, *j)].clone();
            }
        }
        m
    }

    pub fn trace(&self) -> Series {
        (0..self.rows.min(self.cols)).fold(Series::zero(&self.param), |a, i| &a + &self[(i, i)])
    }

}

impl std::ops::Index<(usize, usize)> for SeriesMatrix {
    type Output = Series;
    fn index(&self, (i, j): (usize, usize)) -> &Series {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SeriesMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Series {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
