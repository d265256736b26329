use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarField};

/// Reduced row echelon form of the span of `rows`.
///
/// The pivot in each column is taken from the row of least valuation. Columns whose
/// remaining entries are all zero within precision are skipped only if that zero
/// is certified; otherwise the rank is undecidable and a precision error results.
/// Pivot entries are exactly 1 and the rest of each pivot column exactly 0.
pub fn reduced_echelon<S: Scalar>(
    mut rows: Vec<Vec<S>>,
    ncols: usize,
) -> Result<(Vec<Vec<S>>, Vec<usize>)> {
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch("row length differs from ambient dimension".into()));
    }
    let Some(field) = rows.first().and_then(|r| r.first()).map(|x| x.field().clone()) else {
        return Ok((Vec::new(), Vec::new()));
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let mut best: Option<(usize, i64)> = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            let x = &row[c];
            if x.is_zero() {
                continue;
            }
            let v = x.valuation().bound();
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((i, v));
            }
        }
        let Some((bi, _)) = best else {
            for row in rows.iter().skip(r) {
                row[c].certify_zero()?;
            }
            continue;
        };
        rows.swap(r, bi);
        let inv = rows[r][c].inv()?;
        let pivot_row: Vec<S> = rows[r].iter().map(|x| x.mul(&inv)).collect();
        rows[r] = pivot_row;
        rows[r][c] = field.one();
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                rows[i][c] = field.zero();
                continue;
            }
            let factor = rows[i][c].clone();
            for j in c + 1..ncols {
                let t = factor.mul(&rows[r][j]);
                rows[i][j] = rows[i][j].sub(&t);
            }
            rows[i][c] = field.zero();
        }
        // earlier pivot columns of the new pivot row are zero by construction
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    for (k, &pc) in pivots.iter().enumerate() {
        for (i, row) in rows.iter_mut().enumerate() {
            row[pc] = if i == k { field.one() } else { field.zero() };
        }
    }
    Ok((rows, pivots))
}

/// A subspace of K^n in canonical reduced echelon form.
///
/// Two values are equal exactly when their echelon forms agree (within precision).
#[derive(Clone, PartialEq)]
pub struct Subspace<S: Scalar> {
    field: S::Field,
    ambient: usize,
    basis: Vec<Vec<S>>,
    pivots: Vec<usize>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(field: &S::Field, ambient: usize) -> Self {
        Subspace {
            field: field.clone(),
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn whole(field: &S::Field, ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| unit_vector(field, ambient, i)).collect();
        Subspace {
            field: field.clone(),
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors.
    pub fn span(field: &S::Field, ambient: usize, vectors: Vec<Vec<S>>) -> Result<Self> {
        let (basis, pivots) = reduced_echelon(vectors, ambient)?;
        Ok(Subspace {
            field: field.clone(),
            ambient,
            basis,
            pivots,
        })
    }

    /// Span of standard basis vectors e_i for the given indices.
    pub fn coordinate(field: &S::Field, ambient: usize, indices: &[usize]) -> Result<Self> {
        Self::span(
            field,
            ambient,
            indices.iter().map(|&i| unit_vector(field, ambient, i)).collect(),
        )
    }

    pub fn field(&self) -> &S::Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.basis.len() == self.ambient
    }

    /// Echelon basis; row k has a 1 in column `pivots()[k]`.
    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of K^{} and K^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::span(&self.field, self.ambient, rows)
    }

    /// {w : u·w = 0 for all u in self}, for the standard pairing.
    pub fn annihilator(&self) -> Self {
        let n = self.ambient;
        let free: Vec<usize> = (0..n).filter(|c| !self.pivots.contains(c)).collect();
        let basis: Vec<Vec<S>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![self.field.zero(); n];
                v[fc] = self.field.one();
                for (r, &pc) in self.pivots.iter().enumerate() {
                    v[pc] = self.basis[r][fc].neg();
                }
                v
            })
            .collect();
        Self::span(&self.field, n, basis).expect("annihilator basis is in echelon shape")
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok(self.sum(other)?.dim() == self.dim())
    }

    pub fn contains_vector(&self, v: &[S]) -> Result<bool> {
        let line = Self::span(&self.field, self.ambient, vec![v.to_vec()])?;
        self.contains(&line)
    }

    /// Coordinates of a vector of this subspace in the echelon basis.
    pub fn coordinates(&self, v: &[S]) -> Vec<S> {
        self.pivots.iter().map(|&c| v[c].clone()).collect()
    }

    /// Deterministic order: by dimension, then pivot columns, then entries.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.pivots.cmp(&other.pivots))
            .then_with(|| {
                for (a, b) in self.basis.iter().flatten().zip(other.basis.iter().flatten()) {
                    match a.canonical_cmp(b) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    }
}

pub fn unit_vector<S: Scalar>(field: &S::Field, n: usize, i: usize) -> Vec<S> {
    (0..n)
        .map(|j| if i == j { field.one() } else { field.zero() })
        .collect()
}

impl<S: Scalar + fmt::Display> fmt::Display for Subspace<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| {
                let e: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("({})", e.join(", "))
            })
            .collect();
        write!(f, "span{{{}}}", rows.join(", "))
    }
}

impl<S: Scalar> fmt::Debug for Subspace<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}, {:?})", self.dim(), self.ambient, self.basis)
    }
}
