//! Exact oracles over Q and Q[w]/(w^2 + a w + b), independent of the library's
//! p-adic arithmetic, plus the instance families shared by the test targets.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use isoslope::{FilteredIsocrystal, Isocrystal, Matrix, PadicScalar, Subspace, UnramifiedField};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn pow(p: u64, k: i64) -> Q {
    let base = Q::from_integer(BigInt::from(p));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

/// v_p of a nonzero rational.
pub fn vp(x: &Q, p: u64) -> i64 {
    assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    while n.is_multiple_of(&p) {
        n /= &p;
        v += 1;
    }
    while d.is_multiple_of(&p) {
        d /= &p;
        v -= 1;
    }
    v
}

// ---------------------------------------------------------------------------
// Linear algebra over Q. Vectors are rows; subspaces are canonical RREF row lists.

/// Reduced row echelon basis of the span.
pub fn rref(vectors: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = vectors.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut row = 0;
    for c in 0..cols {
        let Some(piv) = (row..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(row, piv);
        let inv = m[row][c].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[row][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        row += 1;
    }
    m.truncate(row);
    m
}

pub fn rank(vectors: &[Vec<Q>]) -> usize {
    rref(vectors).len()
}

pub fn sum(u: &[Vec<Q>], v: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut all = u.to_vec();
    all.extend_from_slice(v);
    rref(&all)
}

pub fn intersect_dim(u: &[Vec<Q>], v: &[Vec<Q>]) -> usize {
    u.len() + v.len() - sum(u, v).len()
}

pub fn contains(big: &[Vec<Q>], small: &[Vec<Q>]) -> bool {
    sum(big, small).len() == big.len()
}

pub fn pivots(u: &[Vec<Q>]) -> Vec<usize> {
    u.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect()
}

/// A·v for a matrix given by rows.
pub fn apply(a: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = b[0].len();
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().enumerate().fold(Q::zero(), |acc, (k, x)| acc + x * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Determinant by elimination over Q.
pub fn det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Q::zero() };
        if piv != c {
            m.swap(piv, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let t = &m[c][j] * &f;
                m[i][j] -= t;
            }
        }
    }
    d
}

pub fn is_stable(a: &[Vec<Q>], u: &[Vec<Q>]) -> bool {
    let images: Vec<Vec<Q>> = u.iter().map(|v| apply(a, v)).collect();
    contains(u, &images)
}

/// v_p(det φ|_U) for φ = A (σ = id) on a stable U in RREF.
pub fn restricted_newton(a: &[Vec<Q>], u: &[Vec<Q>], p: u64) -> i64 {
    if u.is_empty() {
        return 0;
    }
    let piv = pivots(u);
    // coordinates of A·b_i in the RREF basis are its entries at the pivot columns
    let m: Vec<Vec<Q>> = u
        .iter()
        .map(|b| {
            let ab = apply(a, b);
            piv.iter().map(|&j| ab[j].clone()).collect()
        })
        .collect();
    vp(&det(&m), p)
}

/// Every RREF subspace of Q^n whose free entries lie in `grid`, including 0 and Q^n.
pub fn grid_subspaces(n: usize, grid: &[Q]) -> Vec<Vec<Vec<Q>>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let piv: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        // free positions: (row r, column c) with c > piv[r], c not a pivot
        let free: Vec<(usize, usize)> = piv
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| {
                let piv = &piv;
                (pc + 1..n).filter(move |c| !piv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let total = grid.len().pow(free.len() as u32);
        for code in 0..total {
            let mut rows: Vec<Vec<Q>> = piv
                .iter()
                .map(|&pc| {
                    let mut r = vec![Q::zero(); n];
                    r[pc] = Q::one();
                    r
                })
                .collect();
            let mut c = code;
            for &(r, col) in &free {
                rows[r][col] = grid[c % grid.len()].clone();
                c /= grid.len();
            }
            out.push(rows);
        }
    }
    out
}

/// φ-stable subspaces among the grid subspaces, sorted by (dim, pivots, entries).
pub fn stable_subspaces(a: &[Vec<Q>], grid: &[Q]) -> Vec<Vec<Vec<Q>>> {
    let mut s: Vec<_> = grid_subspaces(a.len(), grid)
        .into_iter()
        .filter(|u| is_stable(a, u))
        .collect();
    s.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| pivots(x).cmp(&pivots(y))).then_with(|| x.cmp(y)));
    s
}

// ---------------------------------------------------------------------------
// Filtrations over Q.

/// (degree, RREF subspace), degrees increasing, subspaces decreasing, first = whole.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QFil(pub Vec<(i64, Vec<Vec<Q>>)>);

impl QFil {
    /// t_H of U with Fil^i ∩ U.
    pub fn hodge(&self, u: &[Vec<Q>]) -> i64 {
        let dims: Vec<usize> = self.0.iter().map(|(_, s)| intersect_dim(s, u)).collect();
        (0..dims.len())
            .map(|j| {
                let next = dims.get(j + 1).copied().unwrap_or(0);
                self.0[j].0 * (dims[j] as i64 - next as i64)
            })
            .sum()
    }
}

/// deg = t_H − t_N of a stable subspace.
pub fn degree(a: &[Vec<Q>], fil: &QFil, u: &[Vec<Q>], p: u64) -> i64 {
    fil.hodge(u) - restricted_newton(a, u, p)
}

/// HN chain as (RREF subspace F_i, slope of F_i / F_(i−1)).
pub type QChain = Vec<(Vec<Vec<Q>>, Q)>;

/// All chains 0 ⊊ U_1 ⊊ … ⊊ U_k = D of stable subspaces whose graded pieces are
/// semistable with strictly decreasing slopes.
pub fn hn_chains(a: &[Vec<Q>], fil: &QFil, stable: &[Vec<Vec<Q>>], p: u64) -> Vec<QChain> {
    let n = a.len();
    let degs: Vec<i64> = stable.iter().map(|u| degree(a, fil, u, p)).collect();
    let zero = stable.iter().position(|u| u.is_empty()).unwrap();
    let mut out = Vec::new();
    let mut chain: Vec<usize> = vec![zero];
    fn rec(
        n: usize,
        stable: &[Vec<Vec<Q>>],
        degs: &[i64],
        chain: &mut Vec<usize>,
        out: &mut Vec<QChain>,
    ) {
        let last = *chain.last().unwrap();
        if stable[last].len() == n {
            let steps = chain
                .windows(2)
                .map(|w| {
                    let (b, t) = (w[0], w[1]);
                    let s = Q::new(
                        BigInt::from(degs[t] - degs[b]),
                        BigInt::from((stable[t].len() - stable[b].len()) as i64),
                    );
                    (stable[t].clone(), s)
                })
                .collect::<QChain>();
            out.push(steps);
            return;
        }
        for t in 0..stable.len() {
            if stable[t].len() <= stable[last].len() || !contains(&stable[t], &stable[last]) {
                continue;
            }
            let slope_t = Q::new(
                BigInt::from(degs[t] - degs[last]),
                BigInt::from((stable[t].len() - stable[last].len()) as i64),
            );
            // semistable: no intermediate S with larger slope over the base
            let semistable = (0..stable.len()).all(|s| {
                let ds = stable[s].len();
                if ds <= stable[last].len() || !contains(&stable[s], &stable[last]) || !contains(&stable[t], &stable[s]) {
                    return true;
                }
                Q::new(
                    BigInt::from(degs[s] - degs[last]),
                    BigInt::from((ds - stable[last].len()) as i64),
                ) <= slope_t
            });
            if !semistable {
                continue;
            }
            // strictly decreasing slopes
            if chain.len() >= 2 {
                let (b, prev) = (chain[chain.len() - 2], last);
                let slope_prev = Q::new(
                    BigInt::from(degs[prev] - degs[b]),
                    BigInt::from((stable[prev].len() - stable[b].len()) as i64),
                );
                if slope_t >= slope_prev {
                    continue;
                }
            }
            chain.push(t);
            rec(n, stable, degs, chain, out);
            chain.pop();
        }
    }
    rec(n, stable, &degs, &mut chain, &mut out);
    out
}

/// Brute-force weak admissibility.
pub fn weakly_admissible(a: &[Vec<Q>], fil: &QFil, stable: &[Vec<Vec<Q>>], p: u64) -> bool {
    let n = a.len();
    let whole = stable.iter().find(|u| u.len() == n).unwrap();
    if fil.hodge(whole) != restricted_newton(a, whole, p) {
        return false;
    }
    stable.iter().all(|u| fil.hodge(u) <= restricted_newton(a, u, p))
}

// ---------------------------------------------------------------------------
// Conversions to library objects.

pub fn to_scalar(k: &UnramifiedField, x: &Q) -> PadicScalar {
    k.from_big_rational(x).unwrap()
}

pub fn to_matrix(k: &UnramifiedField, a: &[Vec<Q>]) -> Matrix {
    let rows = a.iter().map(|r| r.iter().map(|x| to_scalar(k, x)).collect()).collect();
    Matrix::from_rows(k, rows).unwrap()
}

pub fn to_subspace(k: &UnramifiedField, n: usize, u: &[Vec<Q>]) -> Subspace {
    let vecs = u.iter().map(|r| r.iter().map(|x| to_scalar(k, x)).collect()).collect();
    Subspace::span(k, n, vecs).unwrap()
}

pub fn to_filtered(k: &UnramifiedField, iso: &Isocrystal, fil: &QFil) -> FilteredIsocrystal {
    let n = iso.rank();
    FilteredIsocrystal::new(
        iso.clone(),
        fil.0.iter().map(|(d, s)| (*d, to_subspace(k, n, s))).collect(),
    )
    .unwrap()
}

// ---------------------------------------------------------------------------
// The diagonal family: φ = diag(u_i p^(v_i)) with distinct v_i ∈ {0, 1, 2}, rank ≤ 3,
// and filtrations Fil^i = span{b_k : h_k ≥ i} for weakly increasing Hodge degrees
// h_k from the menu {0, 1, 2} and b_k distinct nonzero 0/1 vectors.

pub const JUMP_MENU: [i64; 3] = [0, 1, 2];

#[derive(Debug, Clone)]
pub struct DiagInstance {
    pub p: u64,
    pub vals: Vec<i64>,
    pub matrix: Vec<Vec<Q>>,
    pub fil: QFil,
}

fn unit(p: u64, i: usize) -> Q {
    match i {
        0 => q(1),
        1 => q(-1),
        _ => q(1 + p as i64),
    }
}

fn distinct_valuations(r: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(r: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in 0..3 {
            if !cur.contains(&v) {
                cur.push(v);
                rec(r, cur, out);
                cur.pop();
            }
        }
    }
    rec(r, &mut cur, &mut out);
    out
}

fn zero_one_vectors(n: usize) -> Vec<Vec<Q>> {
    (1u32..(1 << n))
        .map(|m| (0..n).map(|i| q(((m >> i) & 1) as i64)).collect())
        .collect()
}

/// All distinct filtrations of Q^n reachable from the menu and 0/1 vectors.
pub fn menu_filtrations(n: usize) -> Vec<QFil> {
    let mut out = std::collections::BTreeSet::new();
    let vecs = zero_one_vectors(n);
    let whole: Vec<Vec<Q>> = rref(&(0..n).map(|i| (0..n).map(|j| q((i == j) as i64)).collect()).collect::<Vec<_>>());
    // weakly increasing degree tuples
    let mut tuples = Vec::new();
    fn rec_t(n: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for &d in &JUMP_MENU {
            if cur.last().is_none_or(|&l| l <= d) {
                cur.push(d);
                rec_t(n, cur, out);
                cur.pop();
            }
        }
    }
    rec_t(n, &mut Vec::new(), &mut tuples);
    for h in tuples {
        // b_k for the k with h_k > h_0 are chosen; the rest fill up to the whole space
        let s = h.iter().filter(|&&d| d > h[0]).count();
        let mut choice = Vec::new();
        fn rec_b(s: usize, vecs: &[Vec<Q>], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == s {
                out.push(cur.clone());
                return;
            }
            for i in 0..vecs.len() {
                if !cur.contains(&i) {
                    cur.push(i);
                    rec_b(s, vecs, cur, out);
                    cur.pop();
                }
            }
        }
        rec_b(s, &vecs, &mut Vec::new(), &mut choice);
        for c in choice {
            let chosen: Vec<Vec<Q>> = c.iter().map(|&i| vecs[i].clone()).collect();
            if rank(&chosen) < s {
                continue;
            }
            // chosen[j] carries degree h[n - s + j]
            let mut steps = vec![(h[0], whole.clone())];
            let mut degrees: Vec<i64> = h.iter().copied().filter(|&d| d > h[0]).collect();
            degrees.dedup();
            for d in degrees {
                let span: Vec<Vec<Q>> = (0..s).filter(|&j| h[n - s + j] >= d).map(|j| chosen[j].clone()).collect();
                steps.push((d, rref(&span)));
            }
            out.insert(QFil(steps));
        }
    }
    out.into_iter().collect()
}

pub fn diagonal_family(primes: &[u64]) -> Vec<DiagInstance> {
    let mut out = Vec::new();
    for &p in primes {
        for r in 1..=3 {
            let fils = menu_filtrations(r);
            for vals in distinct_valuations(r) {
                let matrix: Vec<Vec<Q>> = (0..r)
                    .map(|i| (0..r).map(|j| if i == j { unit(p, i) * pow(p, vals[i]) } else { q(0) }).collect())
                    .collect();
                for fil in &fils {
                    out.push(DiagInstance {
                        p,
                        vals: vals.clone(),
                        matrix: matrix.clone(),
                        fil: fil.clone(),
                    });
                }
            }
        }
    }
    out
}

/// Grid for the stability search: enough to expose any non-coordinate stable line.
pub fn stability_grid() -> Vec<Q> {
    vec![q(0), q(1), q(-1), q(2), Q::new(BigInt::from(1), BigInt::from(2))]
}

// ---------------------------------------------------------------------------
// Exact arithmetic in Q[w]/(w^2 + a w + b) (or Q when f = 1), with σ(w) = −a − w.

#[derive(Debug, Clone)]
pub struct Ring {
    pub p: u64,
    pub f: usize,
    /// defining polynomial coefficients, low degree first, monic
    pub poly: Vec<i64>,
}

pub type El = Vec<Q>;

impl Ring {
    pub fn new(k: &UnramifiedField) -> Self {
        assert!(k.degree() <= 2);
        Ring {
            p: k.p(),
            f: k.degree(),
            poly: k.defining_polynomial(),
        }
    }

    pub fn zero(&self) -> El {
        vec![Q::zero(); self.f]
    }

    pub fn int(&self, n: i64) -> El {
        let mut e = self.zero();
        e[0] = q(n);
        e
    }

    pub fn add(&self, x: &El, y: &El) -> El {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    pub fn neg(&self, x: &El) -> El {
        x.iter().map(|a| -a).collect()
    }

    pub fn mul(&self, x: &El, y: &El) -> El {
        if self.f == 1 {
            return vec![&x[0] * &y[0]];
        }
        let (a, b) = (q(self.poly[1]), q(self.poly[0]));
        // (x0 + x1 w)(y0 + y1 w) with w^2 = −a w − b
        let w2 = &x[1] * &y[1];
        let c0 = &x[0] * &y[0] - &w2 * &b;
        let c1 = &x[0] * &y[1] + &x[1] * &y[0] - &w2 * &a;
        vec![c0, c1]
    }

    pub fn sigma(&self, x: &El) -> El {
        if self.f == 1 {
            return x.clone();
        }
        let a = q(self.poly[1]);
        // x0 + x1 (−a − w)
        vec![&x[0] - &x[1] * &a, -x[1].clone()]
    }

    pub fn is_zero(&self, x: &El) -> bool {
        x.iter().all(|c| c.is_zero())
    }

    /// Valuation; the power basis is an integral basis with unit residues.
    pub fn val(&self, x: &El) -> i64 {
        x.iter().filter(|c| !c.is_zero()).map(|c| vp(c, self.p)).min().expect("nonzero")
    }

    pub fn det(&self, m: &[Vec<El>]) -> El {
        let n = m.len();
        let mut total = self.zero();
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |pi, sign| {
            let mut t = self.int(sign);
            for (i, &j) in pi.iter().enumerate() {
                t = self.mul(&t, &m[i][j]);
            }
            total = self.add(&total, &t);
        });
        total
    }

    pub fn mat_mul(&self, a: &[Vec<El>], b: &[Vec<El>]) -> Vec<Vec<El>> {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(self.zero(), |acc, k| self.add(&acc, &self.mul(&a[i][k], &b[k][j]))))
                    .collect()
            })
            .collect()
    }

    pub fn mat_sigma(&self, a: &[Vec<El>]) -> Vec<Vec<El>> {
        a.iter().map(|r| r.iter().map(|x| self.sigma(x)).collect()).collect()
    }

    pub fn to_library(&self, k: &UnramifiedField, a: &[Vec<El>]) -> Matrix {
        let rows = a.iter().map(|r| r.iter().map(|x| k.element(x).unwrap()).collect()).collect();
        Matrix::from_rows(k, rows).unwrap()
    }
}

fn permutations(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize], i64)) {
    if k == perm.len() {
        let mut sign = 1;
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    sign = -sign;
                }
            }
        }
        f(perm, sign);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permutations(perm, k + 1, f);
        perm.swap(k, i);
    }
}

/// Companion matrix of D_{d,h}: e_(i+1) = φ e_i, φ e_h = p^d e_1.
pub fn companion(ring: &Ring, d: i64, h: usize) -> Vec<Vec<El>> {
    let mut m = vec![vec![ring.zero(); h]; h];
    for i in 1..h {
        m[i][i - 1] = ring.int(1);
    }
    let mut top = ring.zero();
    top[0] = pow(ring.p, d);
    m[0][h - 1] = top;
    m
}

pub fn block_sum(ring: &Ring, blocks: &[Vec<Vec<El>>]) -> Vec<Vec<El>> {
    let n: usize = blocks.iter().map(|b| b.len()).sum();
    let mut m = vec![vec![ring.zero(); n]; n];
    let mut off = 0;
    for b in blocks {
        for i in 0..b.len() {
            for j in 0..b.len() {
                m[off + i][off + j] = b[i][j].clone();
            }
        }
        off += b.len();
    }
    m
}

/// Unipotent lower and upper factors with entries drawn by `draw`; C = L·U has det 1
/// and C^(−1) = U^(−1) L^(−1) is computed by substitution.
pub fn unimodular(ring: &Ring, n: usize, mut draw: impl FnMut() -> El) -> (Vec<Vec<El>>, Vec<Vec<El>>) {
    let mut l = vec![vec![ring.zero(); n]; n];
    let mut u = vec![vec![ring.zero(); n]; n];
    for i in 0..n {
        l[i][i] = ring.int(1);
        u[i][i] = ring.int(1);
        for j in 0..i {
            l[i][j] = draw();
        }
        for j in i + 1..n {
            u[i][j] = draw();
        }
    }
    let c = ring.mat_mul(&l, &u);
    let li = unipotent_inverse(ring, &l, true);
    let ui = unipotent_inverse(ring, &u, false);
    (c, ring.mat_mul(&ui, &li))
}

fn unipotent_inverse(ring: &Ring, t: &[Vec<El>], lower: bool) -> Vec<Vec<El>> {
    let n = t.len();
    let mut inv = vec![vec![ring.zero(); n]; n];
    for col in 0..n {
        // solve T x = e_col
        let mut x = vec![ring.zero(); n];
        let order: Vec<usize> = if lower { (0..n).collect() } else { (0..n).rev().collect() };
        for &i in &order {
            let mut s = ring.int((i == col) as i64);
            for j in 0..n {
                if j != i && ((lower && j < i) || (!lower && j > i)) {
                    s = ring.add(&s, &ring.neg(&ring.mul(&t[i][j], &x[j])));
                }
            }
            x[i] = s;
        }
        for i in 0..n {
            inv[i][col] = x[i].clone();
        }
    }
    inv
}

/// Lattice oracle for effectivity: L ← L + φ(L) from the standard lattice, as a
/// Z_(p)-module given by an integer matrix in Hermite form up to units. Returns
/// whether it stabilizes within `steps` steps.
pub fn lattice_stabilizes(a: &[Vec<Q>], p: u64, steps: usize) -> bool {
    let n = a.len();
    let mut gens: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| q((i == j) as i64)).collect()).collect();
    for _ in 0..steps {
        let images: Vec<Vec<Q>> = gens.iter().map(|v| apply(a, v)).collect();
        let mut all = gens.clone();
        all.extend(images);
        let next = local_basis(&all, p);
        if same_lattice(&next, &gens, p) {
            return true;
        }
        gens = next;
    }
    false
}

/// A basis of the Z_(p)-span of the vectors (which span Q^n).
fn local_basis(vectors: &[Vec<Q>], p: u64) -> Vec<Vec<Q>> {
    let n = vectors[0].len();
    let mut m = vectors.to_vec();
    let mut basis = Vec::new();
    for c in 0..n {
        // pivot of minimal valuation in column c among remaining rows
        let Some(piv) = (0..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| vp(&m[i][c], p))
        else {
            continue;
        };
        let prow = m.remove(piv);
        for row in m.iter_mut() {
            if !row[c].is_zero() {
                let f = &row[c] / &prow[c];
                for j in 0..n {
                    let t = &prow[j] * &f;
                    row[j] -= t;
                }
            }
        }
        basis.push(prow);
    }
    hermite(basis, p)
}

/// Normalize a triangular Z_(p)-basis (row i has its pivot in column i): pivots
/// become p^v and entries right of a pivot are reduced to p^w·s, 0 ≤ s < p^(v_j - w),
/// so the coordinates stay small while the lattice grows.
fn hermite(mut rows: Vec<Vec<Q>>, p: u64) -> Vec<Vec<Q>> {
    let n = rows.len();
    let vals: Vec<i64> = (0..n).map(|i| vp(&rows[i][i], p)).collect();
    for i in 0..n {
        let unit = &rows[i][i] / pow(p, vals[i]);
        for x in rows[i].iter_mut() {
            *x = &*x / &unit;
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let x = rows[i][j].clone();
            if x.is_zero() {
                continue;
            }
            let w = vp(&x, p);
            let r = if w >= vals[j] {
                q(0)
            } else {
                let unit = &x / pow(p, w);
                let m = BigInt::from(p).pow((vals[j] - w) as u32);
                let inv = unit.denom().extended_gcd(&m).x;
                let s = (unit.numer() * inv).mod_floor(&m);
                pow(p, w) * Q::from_integer(s)
            };
            let t = (&x - &r) / pow(p, vals[j]);
            let row_j = rows[j].clone();
            for (a, b) in rows[i].iter_mut().zip(&row_j) {
                *a -= &t * b;
            }
        }
    }
    rows
}

/// Equal Z_(p)-lattices: each basis expresses the other with p-integral coefficients.
fn same_lattice(x: &[Vec<Q>], y: &[Vec<Q>], p: u64) -> bool {
    let inside = |big: &[Vec<Q>], small: &[Vec<Q>]| {
        // solve small = C · big; big is square invertible
        let bt: Vec<Vec<Q>> = (0..big.len()).map(|j| big.iter().map(|r| r[j].clone()).collect()).collect();
        small.iter().all(|v| {
            let coeffs = solve(&bt, v);
            coeffs.iter().all(|c| c.is_zero() || vp(c, p) >= 0)
        })
    };
    inside(x, y) && inside(y, x)
}

/// Solve M x = b for invertible M.
pub fn solve(m: &[Vec<Q>], b: &[Q]) -> Vec<Q> {
    let n = m.len();
    let aug: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let red = rref(&aug);
    assert_eq!(red.len(), n, "singular system");
    red.iter().map(|r| r[n].clone()).collect()
}
