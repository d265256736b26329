//! Exact rationals viewed as elements of Q_p.
//!
//! Arithmetic is exact, so every zero test is certain. Matrices over this type
//! give an independent route for checking the truncated p-adic computations on
//! matrices with rational entries (f = 1, σ = id).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarField, Valuation};

/// Q with the p-adic valuation attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalField {
    p: u64,
}

impl RationalField {
    pub fn new(p: u64) -> Result<Self> {
        if !crate::padic::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(RationalField { p })
    }

    pub fn ratio(&self, num: i64, den: i64) -> RationalQp {
        RationalQp {
            value: BigRational::new(num.into(), den.into()),
            field: *self,
        }
    }

    pub fn from_big(&self, value: BigRational) -> RationalQp {
        RationalQp { value, field: *self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalQp {
    value: BigRational,
    field: RationalField,
}

impl RationalQp {
    pub fn value(&self) -> &BigRational {
        &self.value
    }
}

fn int_val(x: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut y = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = y.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        y = q;
        v += 1;
    }
}

impl Scalar for RationalQp {
    type Field = RationalField;

    fn field(&self) -> &RationalField {
        &self.field
    }

    fn add(&self, rhs: &Self) -> Self {
        self.field.from_big(&self.value + &rhs.value)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.field.from_big(&self.value - &rhs.value)
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.field.from_big(&self.value * &rhs.value)
    }

    fn neg(&self) -> Self {
        self.field.from_big(-&self.value)
    }

    fn inv(&self) -> Result<Self> {
        if self.value.is_zero() {
            return Err(Error::Precision("inverse of exact zero".into()));
        }
        Ok(self.field.from_big(self.value.recip()))
    }

    fn valuation(&self) -> Valuation {
        if self.value.is_zero() {
            return Valuation::AtLeast(i64::MAX);
        }
        Valuation::Exact(int_val(self.value.numer(), self.field.p) - int_val(self.value.denom(), self.field.p))
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn certify_zero(&self) -> Result<bool> {
        Ok(self.value.is_zero())
    }

    fn frobenius(&self) -> Self {
        self.clone()
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }

    fn precision(&self) -> Option<i64> {
        None
    }
}

impl ScalarField for RationalField {
    type Elem = RationalQp;

    fn prime(&self) -> u64 {
        self.p
    }

    fn residue_degree(&self) -> usize {
        1
    }

    fn zero(&self) -> RationalQp {
        self.from_big(BigRational::zero())
    }

    fn one(&self) -> RationalQp {
        self.from_big(BigRational::one())
    }

    fn from_i64(&self, n: i64) -> RationalQp {
        self.from_big(BigRational::from_integer(n.into()))
    }

    fn p_power(&self, k: i64) -> RationalQp {
        let base = BigRational::from_integer(BigInt::from(self.p));
        let x = num_traits::pow(base, k.unsigned_abs() as usize);
        self.from_big(if k >= 0 { x } else { x.recip() })
    }

    fn precision_cap(&self) -> Option<i64> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_and_ops() {
        let k = RationalField::new(3).unwrap();
        assert_eq!(k.ratio(9, 2).valuation(), Valuation::Exact(2));
        assert_eq!(k.ratio(2, 27).valuation(), Valuation::Exact(-3));
        assert_eq!(k.p_power(-2), k.ratio(1, 9));
        assert!(k.zero().certify_zero().unwrap());
        assert!(k.zero().inv().is_err());
        assert!(RationalField::new(9).is_err());
    }
}
