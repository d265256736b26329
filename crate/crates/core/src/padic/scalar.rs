use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::UnramifiedField;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarField, Valuation};

/// Element of an [`UnramifiedField`], stored as `coeffs / p^den` in the power basis.
///
/// The value is known modulo p^prec (absolute precision). `coeffs` are residues
/// modulo p^(prec + den) and `den` is minimal. An element whose coefficients all
/// vanish is zero within precision: its valuation is only bounded below by `prec`.
/// Precision is capped at the field precision N and is never raised by arithmetic.
#[derive(Clone)]
pub struct PadicScalar {
    field: UnramifiedField,
    coeffs: Vec<BigInt>,
    den: u32,
    prec: i64,
}

impl PadicScalar {
    fn zero_at(field: &UnramifiedField, prec: i64) -> Self {
        PadicScalar {
            coeffs: vec![BigInt::zero(); field.degree()],
            field: field.clone(),
            den: 0,
            prec,
        }
    }

    /// Build from raw parts, reducing to canonical form.
    fn normalize(field: &UnramifiedField, mut coeffs: Vec<BigInt>, den: i64, prec: i64) -> Self {
        let modulus = prec + den;
        if modulus <= 0 {
            return Self::zero_at(field, prec);
        }
        for c in coeffs.iter_mut() {
            *c = field.reduce(c, modulus as u32);
        }
        let t = coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| field.int_valuation(c) as i64)
            .min();
        let Some(t) = t else {
            return Self::zero_at(field, prec);
        };
        let shift = t.min(den).max(0);
        let den = den - shift;
        if shift > 0 {
            let d = field.pow(shift as u32);
            for c in coeffs.iter_mut() {
                *c = c.div_floor(&d);
            }
            let m = prec + den;
            for c in coeffs.iter_mut() {
                *c = field.reduce(c, m as u32);
            }
        }
        PadicScalar {
            field: field.clone(),
            coeffs,
            den: den as u32,
            prec,
        }
    }

    pub(crate) fn from_ratio(field: &UnramifiedField, num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        let n = field.precision() as i64;
        if num.is_zero() {
            return Ok(Self::zero_at(field, n));
        }
        let va = field.int_valuation(num) as i64;
        let vb = field.int_valuation(den) as i64;
        let v = va - vb;
        if v >= n {
            return Ok(Self::zero_at(field, n));
        }
        let a0 = num / field.pow(va as u32);
        let b0 = den / field.pow(vb as u32);
        let rel = (n - v) as u32;
        let m = field.pow(rel);
        let b_inv = b0
            .mod_floor(&m)
            .modinv(&m)
            .expect("unit part is invertible");
        let unit = (a0 * b_inv).mod_floor(&m);
        let mut coeffs = vec![BigInt::zero(); field.degree()];
        if v >= 0 {
            coeffs[0] = unit * field.pow(v as u32);
            Ok(Self::normalize(field, coeffs, 0, n))
        } else {
            coeffs[0] = unit;
            Ok(Self::normalize(field, coeffs, -v, n))
        }
    }

    /// Element with the given rational power-basis coordinates.
    pub(crate) fn from_coords(field: &UnramifiedField, coords: &[BigRational]) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                field.degree(),
                coords.len()
            )));
        }
        let mut acc = Self::zero_at(field, field.precision() as i64);
        for (i, c) in coords.iter().enumerate() {
            let x = Self::from_ratio(field, c.numer(), c.denom())?;
            let basis = Self::basis_element(field, i);
            acc = &acc + &(&x * &basis);
        }
        Ok(acc)
    }

    /// w^i for the power-basis generator w.
    pub(crate) fn basis_element(field: &UnramifiedField, i: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); field.degree()];
        coeffs[i] = BigInt::one();
        Self::normalize(field, coeffs, 0, field.precision() as i64)
    }

    /// The same representative, regarded as known to the full field precision.
    ///
    /// Used by self-correcting iterations (Hensel lifting) where the error of an
    /// intermediate approximation is controlled separately.
    pub fn lifted(&self) -> Self {
        Self::normalize(
            &self.field,
            self.coeffs.clone(),
            self.den as i64,
            self.field.precision() as i64,
        )
    }

    /// The value with its precision lowered to `prec` (never raised).
    pub fn truncated(&self, prec: i64) -> Self {
        Self::normalize(&self.field, self.coeffs.clone(), self.den as i64, self.prec.min(prec))
    }

    pub fn field_ref(&self) -> &UnramifiedField {
        &self.field
    }

    /// Absolute precision: the value is known modulo p^precision.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Power-basis coordinates as rationals.
    ///
    /// Each coordinate is the smallest fraction a/b (|a|, |b| below the square root
    /// of half the modulus) congruent to it, falling back to the balanced residue
    /// when no such fraction exists. Either way the result maps back to `self`.
    pub fn to_rational_coords(&self) -> Vec<BigRational> {
        let m = self.prec + self.den as i64;
        let den = self.field.pow(self.den);
        self.coeffs
            .iter()
            .map(|c| {
                if m <= 0 || c.is_zero() {
                    return BigRational::zero();
                }
                let modulus = self.field.pow(m as u32);
                let r = rational_reconstruction(c, &modulus).unwrap_or_else(|| {
                    let half = &modulus / 2;
                    let s = if c > &half { c - &modulus } else { c.clone() };
                    BigRational::from_integer(s)
                });
                r / BigRational::from_integer(den.clone())
            })
            .collect()
    }

    fn exact_valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| self.field.int_valuation(c) as i64)
            .min()
            .map(|t| t - self.den as i64)
    }

    fn cap(&self) -> i64 {
        self.field.precision() as i64
    }

    fn check_field(&self, other: &Self) {
        assert!(
            self.field == other.field,
            "mixed fields: {:?} vs {:?}",
            self.field,
            other.field
        );
    }

    /// Base-p digits of each coordinate from the p^-den place upward, interleaved.
    fn digit_stream(&self) -> Vec<u64> {
        let m = (self.prec + self.den as i64).max(0) as usize;
        let p = self.field.p_big();
        let mut cs: Vec<BigInt> = self.coeffs.clone();
        let mut out = Vec::with_capacity(m * cs.len());
        for _ in 0..m {
            for c in cs.iter_mut() {
                let (q, r) = c.div_rem(p);
                out.push(r.try_into().unwrap());
                *c = q;
            }
        }
        out
    }
}

impl<'a> Add<&'a PadicScalar> for &'a PadicScalar {
    type Output = PadicScalar;
    fn add(self, rhs: &'a PadicScalar) -> PadicScalar {
        self.check_field(rhs);
        let prec = self.prec.min(rhs.prec);
        let d = self.den.max(rhs.den);
        let sa = self.field.pow(d - self.den);
        let sb = self.field.pow(d - rhs.den);
        let coeffs = self
            .coeffs
            .iter()
            .zip(rhs.coeffs.iter())
            .map(|(a, b)| a * &sa + b * &sb)
            .collect();
        PadicScalar::normalize(&self.field, coeffs, d as i64, prec)
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        PadicScalar::normalize(&self.field, coeffs, self.den as i64, self.prec)
    }
}

impl<'a> Sub<&'a PadicScalar> for &'a PadicScalar {
    type Output = PadicScalar;
    fn sub(self, rhs: &'a PadicScalar) -> PadicScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a PadicScalar> for &'a PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: &'a PadicScalar) -> PadicScalar {
        self.check_field(rhs);
        let va = Scalar::valuation(self).bound();
        let vb = Scalar::valuation(rhs).bound();
        let prec = (self.prec + vb).min(rhs.prec + va).min(self.cap());
        if Scalar::is_zero(self) || Scalar::is_zero(rhs) {
            return PadicScalar::zero_at(&self.field, prec);
        }
        let den = self.den as i64 + rhs.den as i64;
        let modulus = prec + den;
        if modulus <= 0 {
            return PadicScalar::zero_at(&self.field, prec);
        }
        let coeffs = self.field.ring_mul(&self.coeffs, &rhs.coeffs, modulus as u32);
        PadicScalar::normalize(&self.field, coeffs, den, prec)
    }
}

/// Wang's rational reconstruction of c modulo m.
fn rational_reconstruction(c: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), c.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() || !t1.gcd(m).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

impl Scalar for PadicScalar {
    type Field = UnramifiedField;

    fn field(&self) -> &UnramifiedField {
        &self.field
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Result<Self> {
        let v = self.exact_valuation().ok_or_else(|| {
            Error::Precision(format!("inverse of zero within precision O(p^{})", self.prec))
        })?;
        let t = v + self.den as i64;
        let d = self.field.pow(t as u32);
        let unit: Vec<BigInt> = self.coeffs.iter().map(|c| c.div_floor(&d)).collect();
        let rel = self.prec - v;
        let unit_inv = self.field.ring_inv_unit(&unit, rel as u32);
        let prec = (self.prec - 2 * v).min(self.cap());
        if v <= 0 {
            let s = self.field.pow((-v) as u32);
            let coeffs = unit_inv.iter().map(|c| c * &s).collect();
            Ok(PadicScalar::normalize(&self.field, coeffs, 0, prec))
        } else {
            Ok(PadicScalar::normalize(&self.field, unit_inv, v, prec))
        }
    }

    fn valuation(&self) -> Valuation {
        match self.exact_valuation() {
            Some(v) => Valuation::Exact(v),
            None => Valuation::AtLeast(self.prec),
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn certify_zero(&self) -> Result<bool> {
        if !Scalar::is_zero(self) {
            return Ok(false);
        }
        if self.prec >= self.field.certify_floor() {
            Ok(true)
        } else {
            Err(Error::Precision(format!(
                "cannot decide whether O(p^{}) vanishes",
                self.prec
            )))
        }
    }

    fn frobenius(&self) -> Self {
        if self.field.degree() == 1 || Scalar::is_zero(self) {
            return self.clone();
        }
        let m = (self.prec + self.den as i64) as u32;
        let coeffs = self.field.apply_frobenius(&self.coeffs, m);
        PadicScalar::normalize(&self.field, coeffs, self.den as i64, self.prec)
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        let za = Scalar::is_zero(self);
        let zb = Scalar::is_zero(other);
        match (za, zb) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match self.den.cmp(&other.den) {
            Ordering::Equal => {}
            o => return o,
        }
        let a = self.digit_stream();
        let b = other.digit_stream();
        let n = a.len().min(b.len());
        a[..n].cmp(&b[..n])
    }

    fn precision(&self) -> Option<i64> {
        Some(self.prec)
    }
}

impl PartialEq for PadicScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && Scalar::is_zero(&(self - other))
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = self.to_rational_coords();
        if coords.len() == 1 {
            write!(f, "{}", coords[0])
        } else {
            let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", parts.join(", "))
        }
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self, self.field.p(), self.prec)
    }
}

impl ScalarField for UnramifiedField {
    type Elem = PadicScalar;

    fn prime(&self) -> u64 {
        self.p()
    }

    fn residue_degree(&self) -> usize {
        self.degree()
    }

    fn zero(&self) -> PadicScalar {
        PadicScalar::zero_at(self, self.precision() as i64)
    }

    fn one(&self) -> PadicScalar {
        self.from_i64(1)
    }

    fn from_i64(&self, n: i64) -> PadicScalar {
        PadicScalar::from_ratio(self, &BigInt::from(n), &BigInt::one()).unwrap()
    }

    fn p_power(&self, k: i64) -> PadicScalar {
        if k >= 0 {
            PadicScalar::from_ratio(self, &self.pow(k as u32), &BigInt::one()).unwrap()
        } else {
            PadicScalar::from_ratio(self, &BigInt::one(), &self.pow((-k) as u32)).unwrap()
        }
    }

    fn precision_cap(&self) -> Option<i64> {
        Some(self.precision() as i64)
    }
}

impl UnramifiedField {
    /// a/b as an element, at absolute precision N.
    pub fn rational(&self, num: i64, den: i64) -> Result<PadicScalar> {
        PadicScalar::from_ratio(self, &BigInt::from(num), &BigInt::from(den))
    }

    pub fn from_big_rational(&self, q: &BigRational) -> Result<PadicScalar> {
        PadicScalar::from_ratio(self, q.numer(), q.denom())
    }

    /// Element with the given power-basis coordinates.
    pub fn element(&self, coords: &[BigRational]) -> Result<PadicScalar> {
        PadicScalar::from_coords(self, coords)
    }

    /// The power-basis generator w.
    pub fn generator(&self) -> PadicScalar {
        if self.degree() == 1 {
            let c = -self.defining_polynomial()[0];
            return self.from_i64(c);
        }
        PadicScalar::basis_element(self, 1)
    }

    /// Zero known modulo p^prec.
    pub fn zero_with_precision(&self, prec: i64) -> PadicScalar {
        PadicScalar::zero_at(self, prec.min(self.precision() as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Valuation::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn valuations() {
        let k = UnramifiedField::new(3, 1, 20).unwrap();
        assert_eq!(k.p_power(2).valuation(), Exact(2));
        assert_eq!(k.p_power(-1).valuation(), Exact(-1));
        assert_eq!(k.rational(1, 3).unwrap().valuation(), Exact(-1));
        assert_eq!(k.zero().valuation(), AtLeast(20));
        assert_eq!(k.rational(18, 5).unwrap().valuation(), Exact(2));
    }

    #[test]
    fn field_operations() {
        let k = UnramifiedField::new(5, 1, 20).unwrap();
        let a = k.rational(2, 3).unwrap();
        let b = k.rational(7, 25).unwrap();
        let s = &a + &b;
        assert_eq!(s, k.rational(71, 75).unwrap());
        assert_eq!(&a * &b, k.rational(14, 75).unwrap());
        assert_eq!(b.inv().unwrap(), k.rational(25, 7).unwrap());
        assert_eq!(&(&a - &a), &k.zero());
        assert_eq!(a.to_rational_coords(), vec![q(2, 3)]);
    }

    #[test]
    fn precision_tracks_division() {
        let k = UnramifiedField::new(2, 1, 20).unwrap();
        let x = &k.p_power(3) * &k.rational(3, 1).unwrap();
        assert_eq!(x.precision(), 20);
        let y = x.inv().unwrap();
        // relative precision 17 survives the inversion
        assert_eq!(y.precision(), 14);
        assert_eq!(y.valuation(), Exact(-3));
        let z = k.zero_with_precision(5);
        assert!(z.inv().is_err());
        assert!(z.certify_zero().is_err());
        assert_eq!(k.zero().certify_zero(), Ok(true));
    }

    #[test]
    fn extension_arithmetic() {
        let k = UnramifiedField::new(3, 2, 12).unwrap();
        let w = k.generator();
        // w^2 + 2w + 2 = 0
        let lhs = &(&(&w * &w) + &(&k.from_i64(2) * &w)) + &k.from_i64(2);
        assert!(lhs.is_zero());
        let x = k.element(&[q(1, 3), q(4, 1)]).unwrap();
        let xi = x.inv().unwrap();
        assert!((&x * &xi).is_one());
    }

    #[test]
    fn frobenius_generator_matches_residue_power() {
        for (p, f) in [(2u64, 2usize), (2, 3), (3, 2), (5, 2), (3, 3)] {
            let k = UnramifiedField::new(p, f, 16).unwrap();
            let w = k.generator();
            let mut wp = k.one();
            for _ in 0..p {
                wp = &wp * &w;
            }
            let diff = &w.frobenius() - &wp;
            assert!(diff.valuation().bound() >= 1, "p={p} f={f}");
            // σ^f = id
            assert_eq!(w.frobenius_pow(f), w);
            let mut x = w.clone();
            for _ in 0..f {
                x = x.frobenius();
            }
            assert_eq!(x, w);
            assert_ne!(w.frobenius(), w);
        }
    }

    #[test]
    fn display_balanced() {
        let k = UnramifiedField::new(3, 1, 10).unwrap();
        assert_eq!(k.from_i64(-1).to_string(), "-1");
        assert_eq!(k.rational(-2, 9).unwrap().to_string(), "-2/9");
        let k2 = UnramifiedField::new(3, 2, 10).unwrap();
        assert_eq!(k2.generator().to_string(), "[0, 1]");
    }
}
