//! Filtered isocrystals: an isocrystal with a decreasing, exhaustive, separated
//! filtration by subspaces indexed by integers.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hn::{self, HnCategory, HnFiltration};
use crate::isocrystal::{EnumerationMode, Isocrystal};
use crate::newton::NewtonPolygon;
use crate::padic::{PadicScalar, UnramifiedField};
use crate::scalar::Scalar;
use crate::{Matrix, Subspace};

/// Fil^i = `subspace` for i in (previous degree, `degree`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiltrationStep {
    pub degree: i64,
    pub subspace: Subspace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredIsocrystal {
    iso: Isocrystal,
    /// Jumps only: the first subspace is the whole space, each one strictly
    /// contains the next, and none is zero. Empty exactly in rank 0.
    steps: Vec<FiltrationStep>,
}

/// Whether a verdict comes from a complete list of subobjects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictMode {
    Exact,
    Probabilistic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityVerdict {
    pub weakly_admissible: bool,
    /// `Exact` for every negative verdict (a violation is definitive) and for
    /// positive verdicts backed by a complete enumeration.
    pub mode: VerdictMode,
    /// A stable subspace with t_H > t_N, or the whole space when t_H ≠ t_N there.
    pub witness: Option<Subspace>,
    pub checked_count: usize,
}

impl FilteredIsocrystal {
    /// Filtration from (degree, subspace) pairs.
    ///
    /// Degrees must strictly increase and subspaces strictly decrease, starting
    /// from the whole space; a trailing zero subspace is accepted and dropped.
    pub fn new(iso: Isocrystal, entries: Vec<(i64, Subspace)>) -> Result<Self> {
        let n = iso.rank();
        for (i, (d, s)) in entries.iter().enumerate() {
            if s.ambient() != n {
                return Err(Error::DimensionMismatch(format!(
                    "filtration subspace lives in dimension {}, isocrystal has rank {n}",
                    s.ambient()
                )));
            }
            if i > 0 {
                let (pd, ps) = &entries[i - 1];
                if d <= pd {
                    return Err(Error::InvalidParameter(
                        "filtration degrees must strictly increase".into(),
                    ));
                }
                if !ps.contains(s)? || ps.dim() == s.dim() {
                    return Err(Error::InvalidParameter(
                        "filtration subspaces must strictly decrease".into(),
                    ));
                }
            }
        }
        let mut steps: Vec<FiltrationStep> = entries
            .into_iter()
            .filter(|(_, s)| !s.is_zero())
            .map(|(degree, subspace)| FiltrationStep { degree, subspace })
            .collect();
        if n > 0 {
            match steps.first() {
                Some(first) if first.subspace.is_whole() => {}
                _ => {
                    return Err(Error::InvalidParameter(
                        "the lowest filtration step must be the whole space".into(),
                    ))
                }
            }
        }
        steps.shrink_to_fit();
        Ok(FilteredIsocrystal { iso, steps })
    }

    /// Fil^0 = D, Fil^1 = 0.
    pub fn trivial(iso: Isocrystal) -> Self {
        let n = iso.rank();
        let field = iso.field().clone();
        let steps = if n == 0 {
            Vec::new()
        } else {
            vec![FiltrationStep {
                degree: 0,
                subspace: Subspace::whole(&field, n),
            }]
        };
        FilteredIsocrystal { iso, steps }
    }

    pub fn isocrystal(&self) -> &Isocrystal {
        &self.iso
    }

    pub fn field(&self) -> &UnramifiedField {
        self.iso.field()
    }

    pub fn rank(&self) -> usize {
        self.iso.rank()
    }

    pub fn steps(&self) -> &[FiltrationStep] {
        &self.steps
    }

    /// Fil^i.
    pub fn fil(&self, i: i64) -> Subspace {
        match self.steps.iter().find(|s| s.degree >= i) {
            Some(s) => s.subspace.clone(),
            None => Subspace::zero(self.field(), self.rank()),
        }
    }

    /// (degree, dim Fil^i/Fil^(i+1)) for each jump, degrees increasing.
    pub fn jumps(&self) -> Vec<(i64, usize)> {
        self.steps
            .iter()
            .enumerate()
            .map(|(j, s)| {
                let next = self.steps.get(j + 1).map_or(0, |t| t.subspace.dim());
                (s.degree, s.subspace.dim() - next)
            })
            .collect()
    }

    pub fn hodge_number(&self) -> i64 {
        self.jumps().iter().map(|&(d, m)| d * m as i64).sum()
    }

    pub fn newton_number(&self) -> Result<i64> {
        self.iso.newton_number()
    }

    /// The polygon with slope i of width dim gr^i, for increasing i.
    pub fn hodge_polygon(&self) -> NewtonPolygon {
        let mut vertices = vec![(0usize, 0i64)];
        let mut slopes = Vec::new();
        for (d, m) in self.jumps() {
            let &(x, y) = vertices.last().unwrap();
            vertices.push((x + m, y + d * m as i64));
            slopes.push((Rational64::from(d), m));
        }
        NewtonPolygon {
            vertices,
            slopes,
            zero_roots: 0,
        }
    }

    /// All degrees shifted by c.
    pub fn shift(&self, c: i64) -> Self {
        FilteredIsocrystal {
            iso: self.iso.clone(),
            steps: self
                .steps
                .iter()
                .map(|s| FiltrationStep {
                    degree: s.degree + c,
                    subspace: s.subspace.clone(),
                })
                .collect(),
        }
    }

    /// t_H of the filtration Fil^i ∩ U on a subspace U.
    pub fn hodge_number_of(&self, u: &Subspace) -> Result<i64> {
        let meets = self
            .steps
            .iter()
            .map(|s| Ok(s.subspace.intersect(u)?.dim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(hodge_from_dims(&self.steps, &meets))
    }

    /// The sub-object on a φ-stable U with Fil^i ∩ U, in the echelon basis of U.
    pub fn induced(&self, u: &Subspace) -> Result<Self> {
        let iso = self.iso.restrict(u)?;
        let field = self.field().clone();
        let entries = self
            .steps
            .iter()
            .map(|s| {
                let meet = s.subspace.intersect(u)?;
                let coords = meet.basis().iter().map(|b| u.coordinates(b)).collect();
                Ok((s.degree, Subspace::span(&field, u.dim(), coords)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FilteredIsocrystal {
            iso,
            steps: canonical_steps(entries),
        })
    }

    /// D/U for a φ-stable U with the image filtration, in the basis given by the
    /// classes of the standard vectors at the non-pivot columns of U.
    pub fn quotient(&self, u: &Subspace) -> Result<Self> {
        if !self.iso.is_stable(u)? {
            return Err(Error::NotStable);
        }
        let field = self.field().clone();
        let n = self.rank();
        let free: Vec<usize> = (0..n).filter(|c| !u.pivots().contains(c)).collect();
        let project = |v: &[PadicScalar]| -> Vec<PadicScalar> {
            let mut w = v.to_vec();
            for (b, &pc) in u.basis().iter().zip(u.pivots()) {
                let coef = w[pc].clone();
                for (x, y) in w.iter_mut().zip(b) {
                    *x = x.sub(&coef.mul(y));
                }
            }
            free.iter().map(|&c| w[c].clone()).collect()
        };
        let a = self.iso.matrix();
        let cols: Vec<Vec<PadicScalar>> = free.iter().map(|&c| project(&a.col(c))).collect();
        let q = free.len();
        let mut m = Matrix::zeros(&field, q, q);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        let iso = Isocrystal::new(m)?;
        let entries = self
            .steps
            .iter()
            .map(|s| {
                let img = s.subspace.basis().iter().map(|b| project(b)).collect();
                Ok((s.degree, Subspace::span(&field, q, img)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FilteredIsocrystal {
            iso,
            steps: canonical_steps(entries),
        })
    }

    /// Decide t_H(D) = t_N(D) and t_H(D') ≤ t_N(D') over sub-isocrystals D'.
    pub fn is_weakly_admissible(&self, mode: EnumerationMode) -> Result<AdmissibilityVerdict> {
        let field = self.field().clone();
        let n = self.rank();
        let whole = Subspace::whole(&field, n);
        if self.hodge_number() != self.newton_number()? {
            return Ok(AdmissibilityVerdict {
                weakly_admissible: false,
                mode: VerdictMode::Exact,
                witness: Some(whole),
                checked_count: 1,
            });
        }
        let subs = self.iso.sub_isocrystals(mode)?;
        let mut checked = 1;
        for s in subs.iter() {
            if s.is_zero() || s.is_whole() {
                continue;
            }
            checked += 1;
            let t_h = self.hodge_number_of(s)?;
            let t_n = self.iso.restrict(s)?.newton_number()?;
            if t_h > t_n {
                return Ok(AdmissibilityVerdict {
                    weakly_admissible: false,
                    mode: VerdictMode::Exact,
                    witness: Some(s.clone()),
                    checked_count: checked,
                });
            }
        }
        Ok(AdmissibilityVerdict {
            weakly_admissible: true,
            mode: if subs.exhaustive {
                VerdictMode::Exact
            } else {
                VerdictMode::Probabilistic
            },
            witness: None,
            checked_count: checked,
        })
    }

    /// The HN category of stable subquotients of this object.
    pub fn category(&self) -> Result<FilteredCategory> {
        FilteredCategory::new(self)
    }

    /// HN filtration for deg = t_H - t_N and rank = dimension.
    pub fn hn_filtration(&self) -> Result<FilteredHn> {
        if self.rank() == 0 {
            return Err(Error::ZeroObject);
        }
        let cat = self.category()?;
        let hn = hn::hn_filtration(&cat, &cat.whole())?;
        let steps = hn
            .steps
            .iter()
            .map(|s| FilteredHnStep {
                subspace: cat.subspace(s.sub.top).clone(),
                degree: s.degree,
                rank: s.rank,
                slope: s.slope,
                hodge_number: cat.hodge_number(&s.graded),
                newton_number: cat.newton_number(&s.graded),
            })
            .collect();
        Ok(FilteredHn { steps, raw: hn })
    }
}

/// Σ_j d_j (a_j - a_(j+1)) for the dimensions a_j of the filtration steps.
fn hodge_from_dims(steps: &[FiltrationStep], dims: &[usize]) -> i64 {
    steps
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let next = dims.get(j + 1).copied().unwrap_or(0);
            s.degree * (dims[j] as i64 - next as i64)
        })
        .sum()
}

/// Keep only genuine jumps of a weakly decreasing chain.
fn canonical_steps(entries: Vec<(i64, Subspace)>) -> Vec<FiltrationStep> {
    let mut out: Vec<FiltrationStep> = Vec::new();
    for (degree, subspace) in entries.into_iter().rev() {
        if subspace.is_zero() {
            continue;
        }
        // equal to the next step: that step already covers this degree
        if out.last().is_some_and(|s| s.subspace.dim() == subspace.dim()) {
            continue;
        }
        out.push(FiltrationStep { degree, subspace });
    }
    out.reverse();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredHnStep {
    /// F_i as a subspace of D.
    pub subspace: Subspace,
    pub degree: i64,
    pub rank: usize,
    pub slope: Rational64,
    /// t_H and t_N of the graded piece F_i/F_(i-1).
    pub hodge_number: i64,
    pub newton_number: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredHn {
    pub steps: Vec<FilteredHnStep>,
    /// The same filtration in the category's own objects.
    pub raw: HnFiltration<Subquotient>,
}

impl FilteredHn {
    pub fn slopes(&self) -> Vec<Rational64> {
        self.steps.iter().map(|s| s.slope).collect()
    }
}

/// T/B for sub-isocrystals B ⊆ T, by index into [`FilteredCategory::subspaces`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subquotient {
    pub top: usize,
    pub bottom: usize,
}

/// Subquotients of one filtered isocrystal by sub-isocrystals, with
/// deg = t_H - t_N (image filtration on quotients) and rank = dimension.
#[derive(Debug, Clone)]
pub struct FilteredCategory {
    steps: Vec<FiltrationStep>,
    subspaces: Vec<Subspace>,
    newton: Vec<i64>,
    /// meets[s][j] = dim(Fil step j ∩ subspace s)
    meets: Vec<Vec<usize>>,
    /// contains[a][b]: subspace a ⊆ subspace b
    contains: Vec<Vec<bool>>,
}

impl FilteredCategory {
    /// Needs the exact list of sub-isocrystals.
    pub fn new(x: &FilteredIsocrystal) -> Result<Self> {
        let subspaces = x.iso.sub_isocrystals(EnumerationMode::Exact)?.subspaces;
        let newton = subspaces
            .iter()
            .map(|s| x.iso.restrict(s)?.newton_number())
            .collect::<Result<Vec<_>>>()?;
        let meets = subspaces
            .iter()
            .map(|s| {
                x.steps
                    .iter()
                    .map(|f| Ok(f.subspace.intersect(s)?.dim()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let contains = subspaces
            .iter()
            .map(|a| subspaces.iter().map(|b| b.contains(a)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(FilteredCategory {
            steps: x.steps.clone(),
            subspaces,
            newton,
            meets,
            contains,
        })
    }

    /// Sub-isocrystals ordered by dimension; index 0 is 0, the last index is D.
    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn subspace(&self, i: usize) -> &Subspace {
        &self.subspaces[i]
    }

    pub fn index_of(&self, u: &Subspace) -> Option<usize> {
        self.subspaces.iter().position(|s| s == u)
    }

    /// D itself.
    pub fn whole(&self) -> Subquotient {
        Subquotient {
            top: self.subspaces.len() - 1,
            bottom: 0,
        }
    }

    /// The object U/0 for a sub-isocrystal U.
    pub fn object(&self, u: &Subspace) -> Option<Subquotient> {
        self.index_of(u).map(|top| Subquotient { top, bottom: 0 })
    }

    pub fn hodge_number(&self, e: &Subquotient) -> i64 {
        let dims: Vec<usize> = (0..self.steps.len())
            .map(|j| self.meets[e.top][j] - self.meets[e.bottom][j])
            .collect();
        hodge_from_dims(&self.steps, &dims)
    }

    pub fn newton_number(&self, e: &Subquotient) -> i64 {
        self.newton[e.top] - self.newton[e.bottom]
    }

    fn check(&self, e: &Subquotient) -> Result<()> {
        let n = self.subspaces.len();
        if e.top >= n || e.bottom >= n || !self.contains[e.bottom][e.top] {
            return Err(Error::InvalidParameter(format!("{e:?} is not a subquotient")));
        }
        Ok(())
    }
}

impl HnCategory for FilteredCategory {
    type Object = Subquotient;

    fn degree(&self, e: &Subquotient) -> Result<i64> {
        self.check(e)?;
        Ok(self.hodge_number(e) - self.newton_number(e))
    }

    fn rank(&self, e: &Subquotient) -> Result<usize> {
        self.check(e)?;
        Ok(self.subspaces[e.top].dim() - self.subspaces[e.bottom].dim())
    }

    fn is_zero(&self, e: &Subquotient) -> Result<bool> {
        self.check(e)?;
        Ok(e.top == e.bottom)
    }

    fn strict_subobjects(&self, e: &Subquotient) -> Result<Vec<Subquotient>> {
        self.check(e)?;
        Ok((0..self.subspaces.len())
            .filter(|&s| self.contains[e.bottom][s] && self.contains[s][e.top])
            .map(|s| Subquotient {
                top: s,
                bottom: e.bottom,
            })
            .collect())
    }

    fn quotient(&self, e: &Subquotient, f: &Subquotient) -> Result<Subquotient> {
        if !self.is_subobject(f, e)? {
            return Err(Error::InvalidParameter(format!("{f:?} is not a subobject of {e:?}")));
        }
        Ok(Subquotient {
            top: e.top,
            bottom: f.top,
        })
    }

    fn pull_back(&self, e: &Subquotient, f: &Subquotient, g: &Subquotient) -> Result<Subquotient> {
        let q = self.quotient(e, f)?;
        if !self.is_subobject(g, &q)? {
            return Err(Error::InvalidParameter(format!("{g:?} is not a subobject of {q:?}")));
        }
        Ok(Subquotient {
            top: g.top,
            bottom: e.bottom,
        })
    }

    fn is_subobject(&self, a: &Subquotient, b: &Subquotient) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.bottom == b.bottom && self.contains[a.top][b.top])
    }

    fn zero_subobject(&self, e: &Subquotient) -> Result<Subquotient> {
        self.check(e)?;
        Ok(Subquotient {
            top: e.bottom,
            bottom: e.bottom,
        })
    }
}
