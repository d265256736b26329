use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarField};

use super::{Matrix, Subspace};

/// The σ-semilinear map v ↦ A·σ(v) on K^n.
#[derive(Clone, PartialEq, Debug)]
pub struct SigmaLinearMap<S: Scalar> {
    matrix: Matrix<S>,
}

impl<S: Scalar> SigmaLinearMap<S> {
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Frobenius matrix is {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(SigmaLinearMap { matrix })
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn field(&self) -> &S::Field {
        self.matrix.field()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        let sv: Vec<S> = v.iter().map(|x| x.frobenius()).collect();
        self.matrix.apply(&sv)
    }

    /// Matrix of φ^k, namely A·σ(A)···σ^(k-1)(A).
    pub fn compose_power(&self, k: usize) -> Result<Matrix<S>> {
        if k == 0 {
            return Err(Error::InvalidParameter("power must be positive".into()));
        }
        let mut acc = self.matrix.clone();
        let mut twisted = self.matrix.clone();
        for _ in 1..k {
            twisted = twisted.frobenius();
            acc = acc.mul(&twisted)?;
        }
        Ok(acc)
    }

    /// The linear map φ^f, f the residue degree.
    pub fn linearization(&self) -> Result<Matrix<S>> {
        self.compose_power(self.field().residue_degree())
    }

    /// Exact valuation of det A; basis independent.
    pub fn det_valuation(&self) -> Result<i64> {
        self.matrix.det_valuation()
    }

    pub fn image(&self, u: &Subspace<S>) -> Result<Subspace<S>> {
        if u.ambient() != self.dim() {
            return Err(Error::DimensionMismatch("subspace ambient differs from map".into()));
        }
        let vectors = u
            .basis()
            .iter()
            .map(|b| self.apply(b))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(self.field(), self.dim(), vectors)
    }

    pub fn is_stable(&self, u: &Subspace<S>) -> Result<bool> {
        u.contains(&self.image(u)?)
    }

    /// Smallest φ-stable subspace containing the given vectors.
    pub fn orbit_closure(&self, vectors: Vec<Vec<S>>) -> Result<Subspace<S>> {
        let mut w = Subspace::span(self.field(), self.dim(), vectors)?;
        loop {
            let next = w.sum(&self.image(&w)?)?;
            if next.dim() == w.dim() {
                return Ok(w);
            }
            w = next;
        }
    }

    /// φ restricted to a stable subspace, in its echelon basis.
    ///
    /// With basis B (rows b_j) the restricted matrix C satisfies φ(b_j) = Σ_i C_ij b_i.
    pub fn restrict(&self, u: &Subspace<S>) -> Result<SigmaLinearMap<S>> {
        let field = self.field().clone();
        let d = u.dim();
        let mut c = Matrix::zeros(&field, d, d);
        for (j, b) in u.basis().iter().enumerate() {
            let image = self.apply(b)?;
            if !u.contains_vector(&image)? {
                return Err(Error::NotStable);
            }
            for (i, x) in u.coordinates(&image).into_iter().enumerate() {
                c.set(i, j, x);
            }
        }
        SigmaLinearMap::new(c)
    }

    /// Matrix of φ in the basis given by the columns of C: C⁻¹·A·σ(C).
    pub fn base_change(&self, c: &Matrix<S>) -> Result<SigmaLinearMap<S>> {
        let m = c.inverse()?.mul(&self.matrix)?.mul(&c.frobenius())?;
        SigmaLinearMap::new(m)
    }

    /// Matrix p^r·A.
    pub fn twist(&self, r: i64) -> SigmaLinearMap<S> {
        let pr = self.field().p_power(r);
        SigmaLinearMap {
            matrix: self.matrix.scale(&pr),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> SigmaLinearMap<S> {
        SigmaLinearMap {
            matrix: self.matrix.block_diag(&other.matrix),
        }
    }
}
