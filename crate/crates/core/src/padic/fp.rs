//! Dense polynomials over F_p, coefficients low to high. Used for the residue
//! field: irreducibility tests, inverses, and choosing defining polynomials.

pub(crate) type FpPoly = Vec<u64>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_scalar(a: u64, p: u64) -> u64 {
    pow_scalar(a, p - 2, p)
}

pub(crate) fn pow_scalar(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn degree(a: &FpPoly) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `m` must be nonzero.
pub(crate) fn divrem(a: &FpPoly, m: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let dm = degree(m).expect("division by zero polynomial");
    let lead_inv = inv_scalar(m[dm], p);
    let mut r = a.clone();
    trim(&mut r);
    let mut q = vec![0u64; r.len().saturating_sub(dm).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = mulmod(r[dr], lead_inv, p);
        let shift = dr - dm;
        q[shift] = c;
        for (i, &mc) in m.iter().enumerate().take(dm + 1) {
            let t = mulmod(c, mc, p);
            r[i + shift] = (r[i + shift] + p - t) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &FpPoly, m: &FpPoly, p: u64) -> FpPoly {
    divrem(a, m, p).1
}

pub(crate) fn mulmod_poly(a: &FpPoly, b: &FpPoly, m: &FpPoly, p: u64) -> FpPoly {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod_poly(base: &FpPoly, mut e: u128, m: &FpPoly, p: u64) -> FpPoly {
    let mut acc: FpPoly = rem(&vec![1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_poly(&acc, &b, m, p);
        }
        b = mulmod_poly(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(d) = degree(&x) {
        let li = inv_scalar(x[d], p);
        for c in x.iter_mut() {
            *c = mulmod(*c, li, p);
        }
    }
    x
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn inv_mod(a: &FpPoly, m: &FpPoly, p: u64) -> Option<FpPoly> {
    // extended Euclid tracking only the coefficient of `a`
    let mut r0 = m.clone();
    let mut r1 = rem(a, m, p);
    let mut s0: FpPoly = Vec::new();
    let mut s1: FpPoly = vec![1];
    trim(&mut r0);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = inv_scalar(r0[0], p);
    let mut out: FpPoly = s0.iter().map(|&x| mulmod(x, c, p)).collect();
    trim(&mut out);
    Some(rem(&out, m, p))
}

/// Rabin-style irreducibility test for a polynomial of degree n ≥ 1.
pub(crate) fn is_irreducible(m: &FpPoly, p: u64) -> bool {
    let n = match degree(m) {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    let x: FpPoly = vec![0, 1];
    let mut xq = rem(&x, m, p);
    for _ in 1..=n / 2 {
        xq = powmod_poly(&xq, p as u128, m, p);
        let g = gcd(&sub(&xq, &x, p), m, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True when `m` is irreducible and x generates the multiplicative group of F_p[x]/(m).
pub(crate) fn is_primitive(m: &FpPoly, p: u64) -> bool {
    if !is_irreducible(m, p) {
        return false;
    }
    let n = degree(m).unwrap() as u32;
    let order = (p as u128).pow(n) - 1;
    let x: FpPoly = vec![0, 1];
    if powmod_poly(&x, order, m, p) != vec![1] {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|q| powmod_poly(&x, order / q, m, p) != vec![1])
}
