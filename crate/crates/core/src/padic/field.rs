use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{conway, fp};
use crate::error::{Error, Result};

/// The degree-f unramified extension of Q_p, truncated at absolute precision p^N.
///
/// Elements are written in the power basis of a lift of the defining polynomial
/// of F_{p^f}. The Frobenius is fixed once per field: the image of the generator
/// is Hensel-lifted from its residue p-th power.
#[derive(Clone)]
pub struct UnramifiedField(Arc<FieldData>);

struct FieldData {
    p: u64,
    f: usize,
    precision: u32,
    defining: Vec<u64>,
    p_big: BigInt,
    powers: Vec<BigInt>,
    frobenius: Vec<Vec<BigInt>>,
    frobenius_modulus: u32,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl UnramifiedField {
    /// Field of residue degree `f` over Q_p at absolute precision `precision`.
    pub fn new(p: u64, f: usize, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidParameter(format!("prime {p} too large")));
        }
        if !(1..=16).contains(&f) {
            return Err(Error::InvalidParameter(format!("residue degree {f} outside 1..=16")));
        }
        if precision < 1 {
            return Err(Error::InvalidParameter("precision must be at least 1".into()));
        }
        let defining = conway::defining_polynomial(p, f);
        let p_big = BigInt::from(p);
        let cap = 4 * precision as usize + 8;
        let mut powers = Vec::with_capacity(cap + 1);
        let mut acc = BigInt::one();
        for _ in 0..=cap {
            powers.push(acc.clone());
            acc *= &p_big;
        }
        let mut data = FieldData {
            p,
            f,
            precision,
            defining,
            p_big,
            powers,
            frobenius: Vec::new(),
            frobenius_modulus: cap as u32,
        };
        data.frobenius = frobenius_table(&data, cap as u32);
        Ok(UnramifiedField(Arc::new(data)))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.f
    }

    pub fn precision(&self) -> u32 {
        self.0.precision
    }

    /// Integer lift of the defining polynomial, low to high, monic.
    pub fn defining_polynomial(&self) -> Vec<i64> {
        self.0.defining.iter().map(|&c| c as i64).collect()
    }

    /// Same field at a different precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        UnramifiedField::new(self.0.p, self.0.f, precision)
    }

    /// Zero values must be known modulo at least p^floor to count as zero.
    pub fn certify_floor(&self) -> i64 {
        (self.0.precision as i64 / 2).max(1)
    }

    pub(crate) fn p_big(&self) -> &BigInt {
        &self.0.p_big
    }

    pub(crate) fn pow(&self, k: u32) -> BigInt {
        match self.0.powers.get(k as usize) {
            Some(x) => x.clone(),
            None => num_traits::pow(self.0.p_big.clone(), k as usize),
        }
    }

    pub(crate) fn reduce(&self, x: &BigInt, k: u32) -> BigInt {
        x.mod_floor(&self.pow(k))
    }

    /// p-adic valuation of a nonzero integer.
    pub(crate) fn int_valuation(&self, x: &BigInt) -> u32 {
        debug_assert!(!x.is_zero());
        let mut v = 0;
        let mut y = x.abs();
        loop {
            let (q, r) = y.div_rem(&self.0.p_big);
            if !r.is_zero() {
                return v;
            }
            y = q;
            v += 1;
        }
    }

    /// Product in Z[w]/(P(w), p^k).
    pub(crate) fn ring_mul(&self, a: &[BigInt], b: &[BigInt], k: u32) -> Vec<BigInt> {
        ring_mul_raw(&self.0.defining, a, b, &self.pow(k))
    }

    /// Inverse of a unit of Z[w]/(P(w), p^k).
    pub(crate) fn ring_inv_unit(&self, u: &[BigInt], k: u32) -> Vec<BigInt> {
        ring_inv_unit_raw(&self.0, u, k)
    }

    /// Apply σ to an integral coordinate vector, result modulo p^k.
    pub(crate) fn apply_frobenius(&self, c: &[BigInt], k: u32) -> Vec<BigInt> {
        let owned;
        let table = if k <= self.0.frobenius_modulus {
            &self.0.frobenius
        } else {
            owned = frobenius_table(&self.0, k);
            &owned
        };
        let m = self.pow(k);
        let f = self.0.f;
        let mut out = vec![BigInt::zero(); f];
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, t) in table[i].iter().enumerate() {
                out[j] += ci * t;
            }
        }
        out.iter().map(|x| x.mod_floor(&m)).collect()
    }
}

fn ring_mul_raw(defining: &[u64], a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let f = defining.len() - 1;
    let mut r = vec![BigInt::zero(); 2 * f - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    for k in (f..2 * f - 1).rev() {
        let c = std::mem::take(&mut r[k]);
        if c.is_zero() {
            continue;
        }
        for (j, &pj) in defining.iter().enumerate().take(f) {
            if pj != 0 {
                r[k - f + j] -= &c * BigInt::from(pj);
            }
        }
    }
    r.truncate(f);
    r.iter().map(|x| x.mod_floor(m)).collect()
}

fn ring_inv_unit_raw(data: &FieldData, u: &[BigInt], k: u32) -> Vec<BigInt> {
    let p = data.p;
    let f = data.f;
    let residue: Vec<u64> = u
        .iter()
        .map(|x| x.mod_floor(&data.p_big).try_into().unwrap())
        .collect();
    let mut residue = residue;
    fp::trim(&mut residue);
    let inv0 = fp::inv_mod(&residue, &data.defining, p).expect("unit has a residue inverse");
    let mut y: Vec<BigInt> = (0..f)
        .map(|i| BigInt::from(inv0.get(i).copied().unwrap_or(0)))
        .collect();
    let mut have = 1u32;
    while have < k {
        have = (2 * have).min(k);
        let m = num_traits::pow(data.p_big.clone(), have as usize);
        // y <- y (2 - u y)
        let uy = ring_mul_raw(&data.defining, u, &y, &m);
        let mut two_minus: Vec<BigInt> = uy.iter().map(|x| -x).collect();
        two_minus[0] += 2;
        y = ring_mul_raw(&data.defining, &y, &two_minus, &m);
    }
    let m = num_traits::pow(data.p_big.clone(), k as usize);
    y.iter().map(|x| x.mod_floor(&m)).collect()
}

/// Rows are σ(w)^i, i < f, as coordinate vectors modulo p^k.
fn frobenius_table(data: &FieldData, k: u32) -> Vec<Vec<BigInt>> {
    let f = data.f;
    let m = num_traits::pow(data.p_big.clone(), k as usize);
    let unit = |i: usize| -> Vec<BigInt> {
        (0..f)
            .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
            .collect()
    };
    if f == 1 {
        return vec![unit(0)];
    }
    // residue image of the generator: w^p mod (P, p)
    let wp = fp::powmod_poly(&vec![0, 1], data.p as u128, &data.defining, data.p);
    let mut omega: Vec<BigInt> = (0..f)
        .map(|i| BigInt::from(wp.get(i).copied().unwrap_or(0)))
        .collect();
    let eval = |x: &[BigInt], coeffs: &[BigInt], m: &BigInt| -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); f];
        for c in coeffs.iter().rev() {
            acc = ring_mul_raw(&data.defining, &acc, x, m);
            acc[0] = (&acc[0] + c).mod_floor(m);
        }
        acc
    };
    let poly: Vec<BigInt> = data.defining.iter().map(|&c| BigInt::from(c)).collect();
    let deriv: Vec<BigInt> = poly
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i as u64))
        .collect();
    let mut have = 1u32;
    while have < k {
        have = (2 * have).min(k);
        let mh = num_traits::pow(data.p_big.clone(), have as usize);
        let value = eval(&omega, &poly, &mh);
        let slope = eval(&omega, &deriv, &mh);
        let slope_inv = ring_inv_unit_raw(data, &slope, have);
        let step = ring_mul_raw(&data.defining, &value, &slope_inv, &mh);
        omega = omega
            .iter()
            .zip(step.iter())
            .map(|(a, b)| (a - b).mod_floor(&mh))
            .collect();
    }
    let mut rows = Vec::with_capacity(f);
    let mut acc = unit(0);
    for _ in 0..f {
        rows.push(acc.clone());
        acc = ring_mul_raw(&data.defining, &acc, &omega, &m);
    }
    rows
}

impl PartialEq for UnramifiedField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.f == other.0.f
                && self.0.precision == other.0.precision)
    }
}

impl Eq for UnramifiedField {}

impl fmt::Debug for UnramifiedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "UnramifiedField(p={}, f={}, N={}, poly={:?})",
            self.0.p, self.0.f, self.0.precision, self.0.defining
        )
    }
}
