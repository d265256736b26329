//! Dense univariate polynomials over a [`Scalar`], coefficients low to high.

use std::fmt;

use crate::scalar::{Scalar, ScalarField};

#[derive(Clone, PartialEq)]
pub struct Poly<S: Scalar> {
    field: S::Field,
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    /// Polynomial with the given coefficients (low to high). Trailing entries are
    /// kept even when zero within precision; the length fixes the nominal degree.
    pub fn new(field: &S::Field, coeffs: Vec<S>) -> Self {
        let coeffs = if coeffs.is_empty() {
            vec![field.zero()]
        } else {
            coeffs
        };
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_i64(field: &S::Field, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// x - a
    pub fn linear(a: &S) -> Self {
        let field = a.field().clone();
        Poly::new(&field, vec![a.neg(), field.one()])
    }

    pub fn field(&self) -> &S::Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Nominal degree (length - 1).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &S {
        self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Poly::new(&self.field, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        Poly::new(&self.field, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn scale(&self, c: &S) -> Self {
        Poly::new(&self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::new(&self.field, coeffs)
    }

    pub fn product(field: &S::Field, factors: &[Poly<S>]) -> Self {
        factors
            .iter()
            .fold(Poly::new(field, vec![field.one()]), |acc, f| acc.mul(f))
    }

    /// Equal coefficient-wise within precision, padding the shorter with zeros.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| self.coeff(i).sub(&other.coeff(i)).is_zero())
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            terms.push(match i {
                0 => cs,
                1 => format!("({cs})*x"),
                _ => format!("({cs})*x^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<S: Scalar> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}
