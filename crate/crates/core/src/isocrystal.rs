//! Isocrystals: a finite-dimensional space with an injective σ-semilinear Frobenius.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::newton::{newton_polygon, slope_factorization, NewtonPolygon, Slope};
use crate::padic::{PadicScalar, UnramifiedField};
use crate::scalar::{Scalar, ScalarField};
use crate::{Matrix, SigmaLinearMap, Subspace};

/// One simple factor D_{d,h} with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DmEntry {
    pub d: i64,
    pub h: usize,
    pub m: usize,
}

impl DmEntry {
    pub fn slope(&self) -> Rational64 {
        Rational64::new(self.d, self.h as i64)
    }
}

/// Isomorphism type over the maximal unramified extension, slopes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct DmType {
    pub entries: Vec<DmEntry>,
}

impl DmType {
    pub fn rank(&self) -> usize {
        self.entries.iter().map(|e| e.m * e.h).sum()
    }

    pub fn newton_number(&self) -> i64 {
        self.entries.iter().map(|e| e.m as i64 * e.d).sum()
    }
}

/// How to enumerate sub-isocrystals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    /// All subobjects; needs every isoclinic piece to be simple.
    Exact,
    /// Orbit closures of `samples` random tuples, from a fixed seed.
    MonteCarlo { samples: usize, seed: u64 },
}

/// Sub-isocrystals in deterministic order (dimension, then echelon form).
#[derive(Debug, Clone)]
pub struct SubIsocrystals {
    pub subspaces: Vec<Subspace>,
    /// True when the list is known to contain every sub-isocrystal.
    pub exhaustive: bool,
}

impl SubIsocrystals {
    pub fn iter(&self) -> std::slice::Iter<'_, Subspace> {
        self.subspaces.iter()
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }
}

impl IntoIterator for SubIsocrystals {
    type Item = Subspace;
    type IntoIter = std::vec::IntoIter<Subspace>;

    fn into_iter(self) -> Self::IntoIter {
        self.subspaces.into_iter()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Isocrystal {
    phi: SigmaLinearMap,
}

impl Isocrystal {
    /// Isocrystal with Frobenius v ↦ A·σ(v); A must be certifiably invertible.
    pub fn new(matrix: Matrix) -> Result<Self> {
        let phi = SigmaLinearMap::new(matrix)?;
        if phi.matrix().det()?.is_zero() {
            return Err(Error::Precision(
                "det φ vanishes within precision, so φ is not certified injective".into(),
            ));
        }
        Ok(Isocrystal { phi })
    }

    pub fn from_map(phi: SigmaLinearMap) -> Result<Self> {
        Self::new(phi.matrix().clone())
    }

    /// φ = diag(entries).
    pub fn diagonal(field: &UnramifiedField, entries: Vec<PadicScalar>) -> Result<Self> {
        Self::new(Matrix::diagonal(field, entries))
    }

    /// The rank-0 isocrystal.
    pub fn zero(field: &UnramifiedField) -> Self {
        Isocrystal {
            phi: SigmaLinearMap::new(Matrix::zeros(field, 0, 0)).unwrap(),
        }
    }

    /// D_{d,h}: basis e, φe, ..., φ^(h-1)e with φ^h e = p^d e.
    pub fn simple(field: &UnramifiedField, d: i64, h: usize) -> Result<Self> {
        if h == 0 {
            return Err(Error::InvalidParameter("h must be positive".into()));
        }
        if d.gcd(&(h as i64)) != 1 {
            return Err(Error::NotCoprime { d, h: h as i64 });
        }
        let mut a = Matrix::zeros(field, h, h);
        for i in 1..h {
            a.set(i, i - 1, field.one());
        }
        a.set(0, h - 1, field.p_power(d));
        Self::new(a)
    }

    pub fn field(&self) -> &UnramifiedField {
        self.phi.field()
    }

    pub fn rank(&self) -> usize {
        self.phi.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        self.phi.matrix()
    }

    pub fn frobenius(&self) -> &SigmaLinearMap {
        &self.phi
    }

    /// t_N, the valuation of det φ.
    pub fn newton_number(&self) -> Result<i64> {
        self.phi.det_valuation()
    }

    /// Slopes with multiplicity, ascending.
    pub fn slopes(&self) -> Result<Vec<Rational64>> {
        if self.rank() == 0 {
            return Ok(Vec::new());
        }
        let (r, lin) = self.integral_linearization()?;
        let (cp, _) = lin.char_poly()?;
        let np = newton_polygon(&cp)?;
        if np.zero_roots > 0 {
            return Err(Error::Precision("φ^f has a root indistinguishable from 0".into()));
        }
        let f = self.field().degree() as i64;
        Ok(np
            .slope_multiset()
            .into_iter()
            .map(|s| s / f - Rational64::from(r))
            .collect())
    }

    /// Newton polygon of D: slopes ascending, breakpoints at integer heights.
    pub fn newton_polygon(&self) -> Result<NewtonPolygon> {
        let mut vertices = vec![(0usize, 0i64)];
        let mut slopes = Vec::new();
        for e in self.dm_type()?.entries {
            let &(x, y) = vertices.last().unwrap();
            let w = e.h * e.m;
            vertices.push((x + w, y + e.d * e.m as i64));
            slopes.push((e.slope(), w));
        }
        Ok(NewtonPolygon {
            vertices,
            slopes,
            zero_roots: 0,
        })
    }

    pub fn dm_type(&self) -> Result<DmType> {
        let mut counts: BTreeMap<Rational64, usize> = BTreeMap::new();
        for s in self.slopes()? {
            *counts.entry(s).or_default() += 1;
        }
        let entries = counts
            .into_iter()
            .map(|(s, mult)| {
                let h = *s.denom() as usize;
                if mult % h != 0 {
                    return Err(Error::Precision(format!(
                        "slope {s} occurs {mult} times, not a multiple of {h}"
                    )));
                }
                Ok(DmEntry {
                    d: *s.numer(),
                    h,
                    m: mult / h,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DmType { entries })
    }

    /// D(r): same space, Frobenius p^r·φ.
    pub fn twist(&self, r: i64) -> Self {
        Isocrystal {
            phi: self.phi.twist(r),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Isocrystal {
            phi: self.phi.direct_sum(&other.phi),
        }
    }

    /// Matrix of φ in the basis given by the columns of C.
    pub fn base_change(&self, c: &Matrix) -> Result<Self> {
        Self::from_map(self.phi.base_change(c)?)
    }

    /// Whether φ preserves some lattice, i.e. all slopes are ≥ 0.
    pub fn is_effective(&self) -> Result<bool> {
        Ok(self.slopes()?.iter().all(|s| *s >= Rational64::from(0)))
    }

    /// The sub-isocrystal on a stable subspace, in its echelon basis.
    pub fn restrict(&self, u: &Subspace) -> Result<Self> {
        Ok(Isocrystal {
            phi: self.phi.restrict(u)?,
        })
    }

    pub fn is_stable(&self, u: &Subspace) -> Result<bool> {
        self.phi.is_stable(u)
    }

    /// Slope decomposition D = ⊕ D_λ, slopes ascending.
    ///
    /// D_λ is the kernel of Q_λ(φ^f) where Q_λ is the slope-fλ factor of the
    /// characteristic polynomial of φ^f.
    pub fn isoclinic_decomposition(&self) -> Result<Vec<(Rational64, Subspace)>> {
        let n = self.rank();
        let field = self.field().clone();
        if n == 0 {
            return Ok(Vec::new());
        }
        let (r, lin) = self.integral_linearization()?;
        let (cp, _) = lin.char_poly()?;
        let fac = slope_factorization(&cp)?;
        let f = field.degree() as i64;
        let mut pieces = Vec::new();
        for (slope, q) in &fac.factors {
            let Slope::Finite(s) = slope else {
                return Err(Error::Precision("φ^f has a root indistinguishable from 0".into()));
            };
            let kernel = lin.eval_poly(q)?.kernel()?;
            let piece = Subspace::span(&field, n, kernel)?;
            if piece.dim() != q.degree() {
                return Err(Error::Precision(format!(
                    "slope {s} piece has dimension {} instead of {}",
                    piece.dim(),
                    q.degree()
                )));
            }
            pieces.push((s / f - Rational64::from(r), piece));
        }
        let total = pieces
            .iter()
            .try_fold(Subspace::zero(&field, n), |acc, (_, u)| acc.sum(u))?;
        if !total.is_whole() {
            return Err(Error::Precision("isoclinic pieces do not span".into()));
        }
        Ok(pieces)
    }

    /// Whether every isoclinic piece of slope d/h has dimension exactly h.
    pub fn exact_enumeration_available(&self) -> Result<bool> {
        Ok(self.dm_type()?.entries.iter().all(|e| e.m == 1))
    }

    pub fn sub_isocrystals(&self, mode: EnumerationMode) -> Result<SubIsocrystals> {
        let field = self.field().clone();
        let n = self.rank();
        if n == 0 {
            return Ok(SubIsocrystals {
                subspaces: vec![Subspace::zero(&field, 0)],
                exhaustive: true,
            });
        }
        let pieces = self.isoclinic_decomposition()?;
        let simple = self.exact_enumeration_available()?;
        let mut out: Vec<Subspace> = Vec::new();
        let mut exhaustive = simple;
        match mode {
            EnumerationMode::Exact => {
                if !simple {
                    return Err(Error::EnumerationUnavailable(
                        "an isoclinic piece is a proper multiple of a simple object".into(),
                    ));
                }
                out = subset_sums(&field, n, &pieces)?;
            }
            EnumerationMode::MonteCarlo { samples, seed } => {
                if pieces.len() <= 12 {
                    out = subset_sums(&field, n, &pieces)?;
                } else {
                    exhaustive = false;
                    out.push(Subspace::zero(&field, n));
                    out.push(Subspace::whole(&field, n));
                    out.extend(pieces.iter().map(|(_, u)| u.clone()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..samples {
                    let k = rng.gen_range(1..=n);
                    let vectors = (0..k).map(|_| random_vector(&field, n, &mut rng)).collect();
                    out.push(self.phi.orbit_closure(vectors)?);
                }
            }
        }
        out.sort_by(canonical_order);
        out.dedup();
        Ok(SubIsocrystals {
            subspaces: out,
            exhaustive,
        })
    }

    /// p^r·φ^f with r ≥ 0 chosen so the matrix of p^r·φ is integral.
    fn integral_linearization(&self) -> Result<(i64, Matrix)> {
        let a = self.matrix();
        let min_val = (0..a.rows())
            .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j).valuation().bound())
            .min()
            .unwrap_or(0);
        let r = (-min_val).max(0);
        Ok((r, self.phi.twist(r).linearization()?))
    }
}

fn canonical_order(a: &Subspace, b: &Subspace) -> Ordering {
    a.canonical_cmp(b)
}

fn subset_sums(
    field: &UnramifiedField,
    n: usize,
    pieces: &[(Rational64, Subspace)],
) -> Result<Vec<Subspace>> {
    let m = pieces.len();
    (0u64..1 << m)
        .map(|mask| {
            pieces
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .try_fold(Subspace::zero(field, n), |acc, (_, (_, u))| acc.sum(u))
        })
        .collect()
}

fn random_vector(field: &UnramifiedField, n: usize, rng: &mut ChaCha8Rng) -> Vec<PadicScalar> {
    let f = field.degree();
    (0..n)
        .map(|_| {
            let coords: Vec<num_rational::BigRational> = (0..f)
                .map(|_| num_rational::BigRational::from_integer(rng.gen_range(-50i64..=50).into()))
                .collect();
            field.element(&coords).expect("integral coordinates")
        })
        .collect()
}
