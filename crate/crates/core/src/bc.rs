//! Symbolic Banach-Colmez spaces: formal sums of atoms carrying (dimension, height)
//! invariants, the invariants of the spaces attached to a filtered isocrystal, and
//! the height count behind "weakly admissible implies admissible".

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtered::{FilteredIsocrystal, VerdictMode};
use crate::hn::HnCategory;
use crate::isocrystal::{EnumerationMode, Isocrystal};
use crate::newton::Slope;
use crate::Subspace;

/// (dimension, height).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BcInvariants {
    pub dim: i64,
    pub ht: i64,
}

impl BcInvariants {
    pub fn new(dim: i64, ht: i64) -> Self {
        BcInvariants { dim, ht }
    }
}

impl std::ops::Add for BcInvariants {
    type Output = BcInvariants;

    fn add(self, o: BcInvariants) -> BcInvariants {
        BcInvariants::new(self.dim + o.dim, self.ht + o.ht)
    }
}

impl std::ops::Sub for BcInvariants {
    type Output = BcInvariants;

    fn sub(self, o: BcInvariants) -> BcInvariants {
        BcInvariants::new(self.dim - o.dim, self.ht - o.ht)
    }
}

impl std::ops::Mul<i64> for BcInvariants {
    type Output = BcInvariants;

    fn mul(self, k: i64) -> BcInvariants {
        BcInvariants::new(self.dim * k, self.ht * k)
    }
}

impl fmt::Display for BcInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(dim {}, ht {})", self.dim, self.ht)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BcAtom {
    /// E_{d,h}, d, h ≥ 1 coprime: invariants (d, h), slope d/h.
    Edh { d: i64, h: i64 },
    /// Q_p^k: invariants (0, k), slope 0.
    Etale { k: i64 },
    /// B_m(r), a length-m torsion module: invariants (m, 0), slope ∞.
    Torsion { m: i64, r: i64 },
}

impl BcAtom {
    pub fn edh(d: i64, h: i64) -> Result<Self> {
        if d < 1 || h < 1 {
            return Err(Error::InvalidParameter(format!("E_{{{d},{h}}} needs d, h >= 1")));
        }
        if d.gcd(&h) != 1 {
            return Err(Error::NotCoprime { d, h });
        }
        Ok(BcAtom::Edh { d, h })
    }

    pub fn etale(k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!("etale rank {k} must be >= 1")));
        }
        Ok(BcAtom::Etale { k })
    }

    pub fn torsion(m: i64, r: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParameter(format!("torsion length {m} must be >= 1")));
        }
        Ok(BcAtom::Torsion { m, r })
    }

    /// C_p = B_1(0).
    pub fn cp() -> Self {
        BcAtom::Torsion { m: 1, r: 0 }
    }

    pub fn invariants(&self) -> BcInvariants {
        match *self {
            BcAtom::Edh { d, h } => BcInvariants::new(d, h),
            BcAtom::Etale { k } => BcInvariants::new(0, k),
            BcAtom::Torsion { m, .. } => BcInvariants::new(m, 0),
        }
    }

    pub fn slope(&self) -> Slope {
        match *self {
            BcAtom::Edh { d, h } => Slope::Finite(Rational64::new(d, h)),
            BcAtom::Etale { .. } => Slope::Finite(Rational64::from(0)),
            BcAtom::Torsion { .. } => Slope::Infinite,
        }
    }

    fn sort_key(&self) -> (i64, i64, i64, i64) {
        match *self {
            BcAtom::Edh { d, h } => (d, h, 0, 0),
            BcAtom::Etale { k } => (0, k, 0, 0),
            BcAtom::Torsion { m, r } => (0, 0, m, r),
        }
    }

    /// Slope descending, then (d, h, m, r).
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        other
            .slope()
            .cmp(&self.slope())
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl fmt::Display for BcAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BcAtom::Edh { d, h } => write!(f, "E_{{{d},{h}}}"),
            BcAtom::Etale { k } => write!(f, "Q_p^{k}"),
            BcAtom::Torsion { m, r } => write!(f, "B_{m}({r})"),
        }
    }
}

/// A formal direct sum of atoms with multiplicities, in canonical form: sorted by
/// [`BcAtom::canonical_cmp`], equal atoms merged, and all étale parts collected in a
/// single Q_p^k of multiplicity 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolicBc {
    terms: Vec<(BcAtom, usize)>,
}

impl SymbolicBc {
    pub fn zero() -> Self {
        SymbolicBc::default()
    }

    pub fn atom(a: BcAtom) -> Self {
        Self::from_terms(vec![(a, 1)])
    }

    pub fn from_terms(terms: Vec<(BcAtom, usize)>) -> Self {
        let mut etale = 0i64;
        let mut rest: Vec<(BcAtom, usize)> = Vec::new();
        for (a, m) in terms {
            if m == 0 {
                continue;
            }
            match a {
                BcAtom::Etale { k } => etale += k * m as i64,
                _ => rest.push((a, m)),
            }
        }
        if etale > 0 {
            rest.push((BcAtom::Etale { k: etale }, 1));
        }
        rest.sort_by(|x, y| x.0.canonical_cmp(&y.0));
        let mut merged: Vec<(BcAtom, usize)> = Vec::new();
        for (a, m) in rest {
            match merged.last_mut() {
                Some((b, n)) if *b == a => *n += m,
                _ => merged.push((a, m)),
            }
        }
        SymbolicBc { terms: merged }
    }

    pub fn terms(&self) -> &[(BcAtom, usize)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn invariants(&self) -> BcInvariants {
        self.terms
            .iter()
            .fold(BcInvariants::default(), |acc, (a, m)| acc + a.invariants() * *m as i64)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        Self::from_terms(t)
    }

    /// Multiplicity of an atom (for étale atoms, the total étale rank).
    pub fn multiplicity(&self, a: &BcAtom) -> usize {
        match a {
            BcAtom::Etale { .. } => self.etale_rank() as usize,
            _ => self.terms.iter().find(|t| t.0 == *a).map_or(0, |t| t.1),
        }
    }

    fn etale_rank(&self) -> i64 {
        self.terms
            .iter()
            .map(|(a, m)| match a {
                BcAtom::Etale { k } => k * *m as i64,
                _ => 0,
            })
            .sum()
    }

    /// Atoms repeated by multiplicity, in canonical order.
    pub fn expanded(&self) -> Vec<BcAtom> {
        self.terms
            .iter()
            .flat_map(|&(a, m)| std::iter::repeat_n(a, m))
            .collect()
    }

    /// Sub-sum relation on canonical forms (étale parts compared by rank).
    pub fn is_subsum(&self, other: &Self) -> bool {
        self.terms.iter().all(|(a, m)| other.multiplicity(a) >= match a {
            BcAtom::Etale { k } => *k as usize * m,
            _ => *m,
        })
    }

    /// self − other for a sub-sum `other`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if !other.is_subsum(self) {
            return Err(Error::InvalidParameter(format!("{other} is not a summand of {self}")));
        }
        let mut terms = Vec::new();
        for &(a, m) in &self.terms {
            match a {
                BcAtom::Etale { k } => {
                    let left = k - other.etale_rank();
                    if left > 0 {
                        terms.push((BcAtom::Etale { k: left }, m));
                    }
                }
                _ => terms.push((a, m - other.multiplicity(&a))),
            }
        }
        Ok(Self::from_terms(terms))
    }
}

impl fmt::Display for SymbolicBc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, m)| if *m == 1 { a.to_string() } else { format!("{a}^{m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Serialized atom: {kind, d, h, m, r, multiplicity}; étale atoms store k in `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub kind: String,
    pub d: i64,
    pub h: i64,
    pub m: i64,
    pub r: i64,
    pub multiplicity: usize,
}

impl SymbolicBc {
    pub fn to_records(&self) -> Vec<AtomRecord> {
        self.terms
            .iter()
            .map(|&(a, multiplicity)| {
                let (kind, d, h, m, r) = match a {
                    BcAtom::Edh { d, h } => ("edh", d, h, 0, 0),
                    BcAtom::Etale { k } => ("etale", 0, k, 0, 0),
                    BcAtom::Torsion { m, r } => ("torsion", 0, 0, m, r),
                };
                AtomRecord {
                    kind: kind.into(),
                    d,
                    h,
                    m,
                    r,
                    multiplicity,
                }
            })
            .collect()
    }

    pub fn from_records(records: &[AtomRecord]) -> Result<Self> {
        let terms = records
            .iter()
            .map(|rec| {
                let atom = match rec.kind.as_str() {
                    "edh" => BcAtom::edh(rec.d, rec.h)?,
                    "etale" => BcAtom::etale(rec.h)?,
                    "torsion" => BcAtom::torsion(rec.m, rec.r)?,
                    other => return Err(Error::Parse(format!("unknown atom kind {other:?}"))),
                };
                Ok((atom, rec.multiplicity))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(terms))
    }
}

/// E(D) has invariants (t_N, rank); only effective D are accepted.
pub fn invariants_of_e(d: &Isocrystal) -> Result<BcInvariants> {
    if !d.is_effective()? {
        return Err(Error::NotEffective);
    }
    Ok(BcInvariants::new(d.newton_number()?, d.rank() as i64))
}

/// M(D, Fil) is torsion of length t_H: invariants (t_H, 0). Degrees must be ≥ 0.
pub fn invariants_of_m(x: &FilteredIsocrystal) -> Result<BcInvariants> {
    if let Some(s) = x.steps().iter().find(|s| s.degree < 0) {
        return Err(Error::NegativeFiltration(s.degree));
    }
    Ok(BcInvariants::new(x.hodge_number(), 0))
}

/// Σ over the Dieudonné-Manin type of E_{d,h}, with slope 0 parts as Q_p^k.
pub fn bc_of_isocrystal(d: &Isocrystal) -> Result<SymbolicBc> {
    if !d.is_effective()? {
        return Err(Error::NotEffective);
    }
    let terms = d
        .dm_type()?
        .entries
        .iter()
        .map(|e| {
            if e.d == 0 {
                Ok((BcAtom::etale(e.h as i64 * e.m as i64)?, 1))
            } else {
                Ok((BcAtom::edh(e.d, e.h as i64)?, e.m))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolicBc::from_terms(terms))
}

/// One term of an exact sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub invariants: BcInvariants,
}

impl Term {
    pub fn new(name: impl Into<String>, invariants: BcInvariants) -> Self {
        Term {
            name: name.into(),
            invariants,
        }
    }
}

/// 0 → sub → middle → quotient → 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSequence {
    pub sub: Term,
    pub middle: Term,
    pub quotient: Term,
}

impl ExactSequence {
    pub fn new(sub: Term, middle: Term, quotient: Term) -> Self {
        ExactSequence { sub, middle, quotient }
    }

    /// middle − (sub + quotient); zero when balanced.
    pub fn delta(&self) -> BcInvariants {
        self.middle.invariants - (self.sub.invariants + self.quotient.invariants)
    }

    pub fn is_balanced(&self) -> bool {
        self.delta() == BcInvariants::default()
    }
}

impl fmt::Display for ExactSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "0 -> {} {} -> {} {} -> {} {} -> 0",
            self.sub.name,
            self.sub.invariants,
            self.middle.name,
            self.middle.invariants,
            self.quotient.name,
            self.quotient.invariants
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditivityFailure {
    pub index: usize,
    pub sequence: ExactSequence,
    pub delta: BcInvariants,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AdditivityReport {
    pub checked: usize,
    pub failures: Vec<AdditivityFailure>,
}

impl AdditivityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_additivity(sequences: &[ExactSequence]) -> AdditivityReport {
    let failures = sequences
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_balanced())
        .map(|(index, s)| AdditivityFailure {
            index,
            sequence: s.clone(),
            delta: s.delta(),
        })
        .collect();
    AdditivityReport {
        checked: sequences.len(),
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerStep {
    pub label: String,
    pub sequence: Option<ExactSequence>,
    pub deduction: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LedgerVerdict {
    /// E(D) → M(D, Fil) is onto and V(D, Fil) has Q_p-dimension equal to the rank.
    Admissible { coker_dim: i64, v_dim: i64 },
    /// The replay stops at a destabilizing subobject.
    NotWeaklyAdmissible {
        witness: Subspace,
        hodge_number: i64,
        newton_number: i64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ledger {
    pub e: BcInvariants,
    pub m: BcInvariants,
    pub rank: usize,
    pub mode: VerdictMode,
    pub steps: Vec<LedgerStep>,
    pub verdict: LedgerVerdict,
}

impl Ledger {
    pub fn sequences(&self) -> Vec<ExactSequence> {
        self.steps.iter().filter_map(|s| s.sequence.clone()).collect()
    }

    pub fn is_balanced(&self) -> bool {
        self.steps.iter().all(|s| s.sequence.as_ref().is_none_or(|q| q.is_balanced()))
    }
}

/// Replay the height count on 0 → V → E(D) → M(D, Fil) for a weakly admissible X.
pub fn admissibility_ledger(x: &FilteredIsocrystal, mode: EnumerationMode) -> Result<Ledger> {
    let e = invariants_of_e(x.isocrystal())?;
    let m = invariants_of_m(x)?;
    let rank = x.rank();
    let verdict = x.is_weakly_admissible(mode)?;
    let mut steps = vec![LedgerStep {
        label: "invariants".into(),
        sequence: None,
        deduction: format!(
            "E(D) has {e} from t_N = {} and rank {rank}; M(D, Fil) has {m} from t_H = {}",
            e.dim, m.dim
        ),
    }];
    if !verdict.weakly_admissible {
        let witness = verdict.witness.expect("negative verdicts carry a witness");
        let hodge_number = x.hodge_number_of(&witness)?;
        let newton_number = x.isocrystal().restrict(&witness)?.newton_number()?;
        steps.push(LedgerStep {
            label: "weak admissibility".into(),
            sequence: None,
            deduction: format!(
                "fails on a subobject of rank {} with t_H = {hodge_number}, t_N = {newton_number}",
                witness.dim()
            ),
        });
        return Ok(Ledger {
            e,
            m,
            rank,
            mode: verdict.mode,
            steps,
            verdict: LedgerVerdict::NotWeaklyAdmissible {
                witness,
                hodge_number,
                newton_number,
            },
        });
    }
    steps.push(LedgerStep {
        label: "weak admissibility".into(),
        sequence: None,
        deduction: format!(
            "t_H = t_N = {} and t_H <= t_N on {} checked subobjects, so dim M = dim E and V is finite-dimensional (dim 0)",
            e.dim, verdict.checked_count
        ),
    });
    let coker = BcInvariants::new(m.dim - e.dim, 0);
    let image = m - coker;
    steps.push(LedgerStep {
        label: "cokernel".into(),
        sequence: Some(ExactSequence::new(
            Term::new("I", image),
            Term::new("M(D, Fil)", m),
            Term::new("X", coker),
        )),
        deduction: format!(
            "X = coker(E -> M) has dimension {} = t_H - t_N, so X is étale; M is connected, so X = 0 and E -> M is onto",
            coker.dim
        ),
    });
    let v = e - image;
    steps.push(LedgerStep {
        label: "heights".into(),
        sequence: Some(ExactSequence::new(
            Term::new("V(D, Fil)", v),
            Term::new("E(D)", e),
            Term::new("I", image),
        )),
        deduction: format!(
            "ht V = ht E - ht M = {} - {} = {}, and V has dimension 0, so dim_Qp V = {}",
            e.ht, m.ht, v.ht, v.ht
        ),
    });
    Ok(Ledger {
        e,
        m,
        rank,
        mode: verdict.mode,
        steps,
        verdict: LedgerVerdict::Admissible {
            coker_dim: coker.dim,
            v_dim: v.ht,
        },
    })
}

/// One layer of the slope filtration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeLayer {
    pub slope: Slope,
    /// n_α: the multiplicity of E_{d,h} for α = d/h > 0, the étale rank for α = 0,
    /// none for the torsion layer.
    pub multiplicity: Option<usize>,
    pub atoms: SymbolicBc,
}

/// Layers of decreasing slope: torsion (∞), then E_{d,h} by slope, then étale (0).
pub fn slope_filtration(x: &SymbolicBc) -> Vec<SlopeLayer> {
    let mut layers: Vec<SlopeLayer> = Vec::new();
    for &(a, m) in x.terms() {
        let s = a.slope();
        match layers.last_mut() {
            Some(l) if l.slope == s => {
                l.atoms = l.atoms.direct_sum(&SymbolicBc::from_terms(vec![(a, m)]));
            }
            _ => layers.push(SlopeLayer {
                slope: s,
                multiplicity: None,
                atoms: SymbolicBc::from_terms(vec![(a, m)]),
            }),
        }
    }
    for l in layers.iter_mut() {
        l.multiplicity = match l.atoms.terms().first() {
            Some((BcAtom::Edh { .. }, m)) => Some(*m),
            Some((BcAtom::Etale { k }, _)) => Some(*k as usize),
            _ => None,
        };
    }
    layers
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ext1Class {
    Zero,
    Unknown,
}

/// Ext¹(a, b): zero for étale a, and for (E_{d',h}, E_{d,h}) with d ≤ d'.
/// Everything else is left undecided.
pub fn ext1_class(a: &BcAtom, b: &BcAtom) -> Ext1Class {
    match (a, b) {
        (BcAtom::Etale { .. }, _) => Ext1Class::Zero,
        (BcAtom::Edh { d: d2, h: h2 }, BcAtom::Edh { d: d1, h: h1 }) if h1 == h2 && d1 <= d2 => {
            Ext1Class::Zero
        }
        _ => Ext1Class::Unknown,
    }
}

/// HN structure on torsion-free symbolic sums: degree Σ d, rank Σ h, subobjects the
/// sub-sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct SymbolicCategory;

impl SymbolicCategory {
    fn torsion_free(e: &SymbolicBc) -> Result<()> {
        if e.terms().iter().any(|(a, _)| matches!(a, BcAtom::Torsion { .. })) {
            return Err(Error::InvalidParameter("torsion atoms have rank 0".into()));
        }
        Ok(())
    }
}

impl HnCategory for SymbolicCategory {
    type Object = SymbolicBc;

    fn degree(&self, e: &SymbolicBc) -> Result<i64> {
        Self::torsion_free(e)?;
        Ok(e.invariants().dim)
    }

    fn rank(&self, e: &SymbolicBc) -> Result<usize> {
        Self::torsion_free(e)?;
        Ok(e.invariants().ht as usize)
    }

    fn is_zero(&self, e: &SymbolicBc) -> Result<bool> {
        Ok(e.is_zero())
    }

    fn strict_subobjects(&self, e: &SymbolicBc) -> Result<Vec<SymbolicBc>> {
        Self::torsion_free(e)?;
        let mut out = vec![SymbolicBc::zero()];
        for &(a, m) in e.terms() {
            let (unit, count) = match a {
                BcAtom::Etale { k } => (BcAtom::Etale { k: 1 }, k as usize * m),
                _ => (a, m),
            };
            out = out
                .iter()
                .flat_map(|s| {
                    (0..=count).map(move |j| s.direct_sum(&SymbolicBc::from_terms(vec![(unit, j)])))
                })
                .collect();
        }
        Ok(out)
    }

    fn quotient(&self, e: &SymbolicBc, f: &SymbolicBc) -> Result<SymbolicBc> {
        e.difference(f)
    }

    fn pull_back(&self, e: &SymbolicBc, f: &SymbolicBc, g: &SymbolicBc) -> Result<SymbolicBc> {
        let q = e.difference(f)?;
        if !g.is_subsum(&q) {
            return Err(Error::InvalidParameter(format!("{g} is not a summand of {q}")));
        }
        Ok(f.direct_sum(g))
    }

    fn is_subobject(&self, a: &SymbolicBc, b: &SymbolicBc) -> Result<bool> {
        Ok(a.is_subsum(b))
    }

    fn zero_subobject(&self, _: &SymbolicBc) -> Result<SymbolicBc> {
        Ok(SymbolicBc::zero())
    }
}
