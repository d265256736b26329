//! Scalar abstraction shared by the linear algebra.
//!
//! Two implementations exist: [`crate::PadicScalar`] (truncated elements of an
//! unramified extension) and [`crate::RationalQp`] (exact rationals viewed inside
//! the p-adic numbers). Everything in [`crate::linalg`] and the Newton polygon code
//! is written against these traits only.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Result;

/// Valuation of a scalar: exact, or a certified lower bound for values that are
/// zero at the tracked precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Exact(i64),
    AtLeast(i64),
}

impl Valuation {
    /// The exact value, or the lower bound.
    pub fn bound(self) -> i64 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn exact(self) -> Option<i64> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// The field a scalar lives in; constructs elements.
pub trait ScalarField: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Scalar<Field = Self>;

    fn prime(&self) -> u64;
    /// Degree of the residue field over F_p (the order of the Frobenius).
    fn residue_degree(&self) -> usize;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// p^k for any integer k.
    fn p_power(&self, k: i64) -> Self::Elem;
    /// Absolute precision cap N for truncated fields; `None` when exact.
    fn precision_cap(&self) -> Option<i64>;
}

/// Field element with a p-adic valuation and a Frobenius automorphism.
///
/// Equality is equality within the tracked precision.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Field: ScalarField<Elem = Self>;

    fn field(&self) -> &Self::Field;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; fails on values that are zero within precision.
    fn inv(&self) -> Result<Self>;
    fn valuation(&self) -> Valuation;
    /// True when the value is zero at its tracked precision.
    fn is_zero(&self) -> bool;
    /// Decide whether the value may be treated as zero.
    ///
    /// Returns `Ok(false)` for certified nonzero values and `Ok(true)` for zero values
    /// whose precision clears the certification floor. Zero values known to too
    /// little precision are a [`crate::Error::Precision`].
    fn certify_zero(&self) -> Result<bool>;
    /// The Frobenius automorphism (identity over Q_p).
    fn frobenius(&self) -> Self;
    /// Deterministic total preorder used for canonical output ordering.
    fn canonical_cmp(&self, other: &Self) -> Ordering;
    /// Absolute precision of the value; `None` when exact.
    fn precision(&self) -> Option<i64>;

    fn is_one(&self) -> bool {
        self.sub(&self.field().one()).is_zero()
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// σ^k applied to the value.
    fn frobenius_pow(&self, k: usize) -> Self {
        let f = self.field().residue_degree().max(1);
        let mut out = self.clone();
        for _ in 0..(k % f) {
            out = out.frobenius();
        }
        out
    }
}
