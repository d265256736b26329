use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Scalar, ScalarField};

/// Dense row-major matrix over a [`Scalar`].
#[derive(Clone, PartialEq)]
pub struct Matrix<S: Scalar> {
    field: S::Field,
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Index of the entry of least valuation among those not zero within precision.
fn best_pivot<S: Scalar>(entries: impl Iterator<Item = (usize, S)>) -> Option<usize> {
    let mut best: Option<(usize, i64)> = None;
    for (i, x) in entries {
        if x.is_zero() {
            continue;
        }
        let v = x.valuation().bound();
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(field: &S::Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &S::Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn diagonal(field: &S::Field, entries: Vec<S>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(field, n, n);
        for (i, x) in entries.into_iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn from_rows(field: &S::Field, rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(field: &S::Field, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> &S::Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: S) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn from_cols(field: &S::Field, cols: &[Vec<S>]) -> Result<Self> {
        let n = cols.first().map_or(0, |c| c.len());
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Self::from_rows(field, rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Entrywise Frobenius.
    pub fn frobenius(&self) -> Self {
        self.map(|x| x.frobenius())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = a.add(b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = a.sub(b);
        }
        Ok(out)
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() && a.precision().is_none() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.mul(other.get(k, j));
                    let cur = out.get(i, j).add(&t);
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    /// M v for a column vector v.
    pub fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(self.field.zero(), |acc, j| acc.add(&self.get(i, j).mul(&v[j])))
            })
            .collect())
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        self.require_square()?;
        let mut acc = Self::identity(&self.field, self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Determinant by elimination with least-valuation pivots.
    ///
    /// Returns zero only when singularity is certified; a determinant that cannot be
    /// separated from zero at the working precision is an error.
    pub fn det(&self) -> Result<S> {
        self.require_square()?;
        let n = self.rows;
        let mut m = self.to_rows();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = best_pivot((c..n).map(|i| (i, m[i][c].clone()))) else {
                for row in m.iter().skip(c) {
                    row[c].certify_zero()?;
                }
                return Ok(self.field.zero());
            };
            if p != c {
                m.swap(p, c);
                det = det.neg();
            }
            let piv = m[c][c].clone();
            det = det.mul(&piv);
            let inv = piv.inv()?;
            for i in c + 1..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let factor = m[i][c].mul(&inv);
                for j in c..n {
                    let t = factor.mul(&m[c][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        Ok(det)
    }

    /// Exact valuation of the determinant.
    pub fn det_valuation(&self) -> Result<i64> {
        let d = self.det()?;
        d.valuation()
            .exact()
            .ok_or_else(|| Error::Precision("determinant indistinguishable from zero".into()))
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let id = Self::identity(&self.field, n);
        let mut m: Vec<Vec<S>> = (0..n)
            .map(|i| {
                let mut r = self.row(i);
                r.extend(id.row(i));
                r
            })
            .collect();
        for c in 0..n {
            let p = best_pivot((c..n).map(|i| (i, m[i][c].clone()))).ok_or_else(|| {
                Error::Precision("matrix is singular within precision".into())
            })?;
            m.swap(p, c);
            let inv = m[c][c].inv()?;
            m[c] = m[c].iter().map(|x| x.mul(&inv)).collect();
            for i in 0..n {
                if i == c || m[i][c].is_zero() {
                    continue;
                }
                let factor = m[i][c].clone();
                for j in 0..2 * n {
                    let t = factor.mul(&m[c][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        Self::from_rows(
            &self.field,
            m.into_iter().map(|r| r[n..].to_vec()).collect(),
        )
    }

    /// Solve M x = b for square invertible M.
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        self.inverse()?.apply(b)
    }

    /// Right null space {v : M v = 0}, as a list of basis vectors.
    pub fn kernel(&self) -> Result<Vec<Vec<S>>> {
        let (rref, pivots) = super::subspace::reduced_echelon(self.to_rows(), self.cols)?;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        Ok(free
            .iter()
            .map(|&fc| {
                let mut v = vec![self.field.zero(); self.cols];
                v[fc] = self.field.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = rref[r][fc].neg();
                }
                v
            })
            .collect())
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(super::subspace::reduced_echelon(self.to_rows(), self.cols)?.1.len())
    }

    /// Monic characteristic polynomial det(xI - M) by the division-free
    /// Samuelson-Berkowitz recursion, with its precision loss (0 when exact).
    pub fn char_poly(&self) -> Result<(Poly<S>, i64)> {
        self.require_square()?;
        let n = self.rows;
        let one = self.field.one();
        if n == 0 {
            return Ok((Poly::new(&self.field, vec![one]), 0));
        }
        // `vect` holds det(xI - A_i) for the trailing block, coefficients high to low.
        let mut vect = vec![one.clone(), self.get(n - 1, n - 1).neg()];
        for i in (0..n - 1).rev() {
            let m = n - i - 1;
            let a = self.get(i, i);
            let r: Vec<S> = (i + 1..n).map(|j| self.get(i, j).clone()).collect();
            let mut c: Vec<S> = (i + 1..n).map(|j| self.get(j, i).clone()).collect();
            // Toeplitz column: 1, -a, -R C, -R A1 C, ..., -R A1^(m-1) C
            let mut t = Vec::with_capacity(m + 2);
            t.push(one.clone());
            t.push(a.neg());
            for _ in 0..m {
                let rc = r
                    .iter()
                    .zip(c.iter())
                    .fold(self.field.zero(), |acc, (x, y)| acc.add(&x.mul(y)));
                t.push(rc.neg());
                c = (i + 1..n)
                    .map(|row| {
                        (i + 1..n)
                            .zip(c.iter())
                            .fold(self.field.zero(), |acc, (col, y)| {
                                acc.add(&self.get(row, col).mul(y))
                            })
                    })
                    .collect();
            }
            let next: Vec<S> = (0..m + 2)
                .map(|row| {
                    (0..=m.min(row)).fold(self.field.zero(), |acc, col| {
                        acc.add(&t[row - col].mul(&vect[col]))
                    })
                })
                .collect();
            vect = next;
        }
        vect.reverse();
        let loss = match self.field.precision_cap() {
            Some(cap) => vect
                .iter()
                .filter_map(|c| c.precision())
                .map(|p| cap - p)
                .max()
                .unwrap_or(0)
                .max(0),
            None => 0,
        };
        Ok((Poly::new(&self.field, vect), loss))
    }

    /// Evaluate a polynomial at this matrix (Horner).
    pub fn eval_poly(&self, poly: &Poly<S>) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut acc = Self::zeros(&self.field, n, n);
        for c in poly.coeffs().iter().rev() {
            acc = acc.mul(self)?.add(&Self::identity(&self.field, n).scale(c))?;
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Block diagonal sum.
    pub fn block_diag(&self, other: &Self) -> Self {
        let n = self.rows + other.rows;
        let m = self.cols + other.cols;
        let mut out = Self::zeros(&self.field, n, m);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}
