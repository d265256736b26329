//! Defining polynomials for the residue fields F_{p^f}.
//!
//! Known Conway polynomials are tabulated; other (p, f) fall back to the
//! lexicographically least primitive polynomial, which is deterministic but not
//! necessarily Conway.

use super::fp;

/// (p, f, coefficients low to high, monic).
const TABLE: &[(u64, usize, &[u64])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (11, 1, &[9, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 1, &[11, 1]),
    (13, 2, &[2, 12, 1]),
];

pub(crate) fn tabulated(p: u64, f: usize) -> Option<Vec<u64>> {
    TABLE
        .iter()
        .find(|(q, g, _)| *q == p && *g == f)
        .map(|(_, _, c)| c.to_vec())
}

/// Defining polynomial for F_{p^f}, as residues in [0, p).
pub(crate) fn defining_polynomial(p: u64, f: usize) -> Vec<u64> {
    if let Some(c) = tabulated(p, f) {
        return c;
    }
    // enumerate monic polynomials by coefficient vector read high to low,
    // with Conway's alternating-sign convention on the lower coefficients
    let total = (p as u128).pow(f as u32);
    for idx in 0..total {
        let mut coeffs = vec![0u64; f + 1];
        coeffs[f] = 1;
        let mut rest = idx;
        for i in (0..f).rev() {
            let digit = (rest / (p as u128).pow(i as u32)) as u64;
            rest %= (p as u128).pow(i as u32);
            let deg = i;
            // sign (-1)^(f - deg)
            coeffs[deg] = if (f - deg).is_multiple_of(2) || digit == 0 {
                digit
            } else {
                p - digit
            };
        }
        if fp::is_primitive(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("a primitive polynomial of every degree exists")
}
