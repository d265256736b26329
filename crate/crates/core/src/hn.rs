//! A Harder-Narasimhan engine over any category that can list the strict
//! subobjects of an object.
//!
//! Subobjects of E are themselves objects, and every subobject returned for E can be
//! compared with the others through [`HnCategory::is_subobject`].

use std::fmt::Debug;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degree, rank and subobject structure of a category.
pub trait HnCategory {
    type Object: Clone + PartialEq + Debug;

    fn degree(&self, e: &Self::Object) -> Result<i64>;
    fn rank(&self, e: &Self::Object) -> Result<usize>;
    fn is_zero(&self, e: &Self::Object) -> Result<bool>;
    /// All strict subobjects of E, including 0 and E, in a deterministic order.
    fn strict_subobjects(&self, e: &Self::Object) -> Result<Vec<Self::Object>>;
    /// E/F for a strict subobject F of E.
    fn quotient(&self, e: &Self::Object, f: &Self::Object) -> Result<Self::Object>;
    /// The subobject of E whose image in E/F is the given subobject of E/F.
    fn pull_back(
        &self,
        e: &Self::Object,
        f: &Self::Object,
        sub_of_quotient: &Self::Object,
    ) -> Result<Self::Object>;
    /// Whether a ⊆ b, both subobjects of a common object.
    fn is_subobject(&self, a: &Self::Object, b: &Self::Object) -> Result<bool>;
    fn zero_subobject(&self, e: &Self::Object) -> Result<Self::Object>;
}

pub fn slope<C: HnCategory>(cat: &C, e: &C::Object) -> Result<Rational64> {
    let r = cat.rank(e)?;
    if r == 0 {
        return Err(Error::ZeroObject);
    }
    Ok(Rational64::new(cat.degree(e)?, r as i64))
}

fn nonzero_subobjects<C: HnCategory>(cat: &C, e: &C::Object) -> Result<Vec<C::Object>> {
    let mut out = Vec::new();
    for s in cat.strict_subobjects(e)? {
        if !cat.is_zero(&s)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// E ≠ 0 and μ(E') ≤ μ(E) for every nonzero E' ⊆ E.
pub fn is_semistable<C: HnCategory>(cat: &C, e: &C::Object) -> Result<bool> {
    if cat.is_zero(e)? {
        return Ok(false);
    }
    let mu = slope(cat, e)?;
    for s in nonzero_subobjects(cat, e)? {
        if slope(cat, &s)? > mu {
            return Ok(false);
        }
    }
    Ok(true)
}

/// E ≠ 0 and μ(E') < μ(E) for every nonzero E' ⊊ E.
pub fn is_stable<C: HnCategory>(cat: &C, e: &C::Object) -> Result<bool> {
    if cat.is_zero(e)? {
        return Ok(false);
    }
    let mu = slope(cat, e)?;
    for s in nonzero_subobjects(cat, e)? {
        if s != *e && slope(cat, &s)? >= mu {
            return Ok(false);
        }
    }
    Ok(true)
}

/// F ⊆ E is costable when every F' with F ⊊ F' ⊆ E has μ(F') < μ(F).
pub fn is_costable<C: HnCategory>(cat: &C, e: &C::Object, f: &C::Object) -> Result<bool> {
    let mu = slope(cat, f)?;
    for s in cat.strict_subobjects(e)? {
        if s != *f && cat.is_subobject(f, &s)? && slope(cat, &s)? >= mu {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The subobject of maximal slope, and of maximal rank among those.
pub fn max_destabilizing<C: HnCategory>(cat: &C, e: &C::Object) -> Result<C::Object> {
    let mut best: Option<(Rational64, usize, C::Object)> = None;
    for s in nonzero_subobjects(cat, e)? {
        let mu = slope(cat, &s)?;
        let r = cat.rank(&s)?;
        let better = match &best {
            None => true,
            Some((bm, br, _)) => mu > *bm || (mu == *bm && r > *br),
        };
        if better {
            best = Some((mu, r, s));
        }
    }
    best.map(|b| b.2).ok_or(Error::ZeroObject)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HnStep<O> {
    /// F_i as a subobject of E.
    pub sub: O,
    /// F_i/F_(i-1) as a subobject of E/F_(i-1).
    pub graded: O,
    pub degree: i64,
    pub rank: usize,
    pub slope: Rational64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HnFiltration<O> {
    pub object: O,
    pub steps: Vec<HnStep<O>>,
}

impl<O> HnFiltration<O> {
    pub fn slopes(&self) -> Vec<Rational64> {
        self.steps.iter().map(|s| s.slope).collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// 0 = F_0 ⊊ F_1 ⊊ ... ⊊ F_n = E with semistable graded pieces of strictly
/// decreasing slope, built by repeatedly splitting off the maximal destabilizing
/// subobject of the remaining quotient.
pub fn hn_filtration<C: HnCategory>(cat: &C, e: &C::Object) -> Result<HnFiltration<C::Object>> {
    if cat.is_zero(e)? {
        return Err(Error::ZeroObject);
    }
    let mut steps = Vec::new();
    let mut prev = cat.zero_subobject(e)?;
    loop {
        let q = cat.quotient(e, &prev)?;
        if cat.is_zero(&q)? {
            break;
        }
        let g = max_destabilizing(cat, &q)?;
        let sub = cat.pull_back(e, &prev, &g)?;
        steps.push(HnStep {
            degree: cat.degree(&g)?,
            rank: cat.rank(&g)?,
            slope: slope(cat, &g)?,
            graded: g,
            sub: sub.clone(),
        });
        prev = sub;
    }
    Ok(HnFiltration {
        object: e.clone(),
        steps,
    })
}

/// Fil^α E = F_r for the largest r with μ(F_r/F_(r-1)) ≥ α; 0 when there is none.
pub fn fil_alpha<C: HnCategory>(cat: &C, e: &C::Object, alpha: Rational64) -> Result<C::Object> {
    if cat.is_zero(e)? {
        return Ok(e.clone());
    }
    let hn = hn_filtration(cat, e)?;
    fil_alpha_of(cat, e, &hn, alpha)
}

/// [`fil_alpha`] on an already computed filtration.
pub fn fil_alpha_of<C: HnCategory>(
    cat: &C,
    e: &C::Object,
    hn: &HnFiltration<C::Object>,
    alpha: Rational64,
) -> Result<C::Object> {
    match hn.steps.iter().rposition(|s| s.slope >= alpha) {
        Some(r) => Ok(hn.steps[r].sub.clone()),
        None => cat.zero_subobject(e),
    }
}

/// Every chain 0 ⊊ F_1 ⊊ ... ⊊ F_n = E whose graded pieces are semistable, each
/// given by its steps (without checking slopes).
pub fn semistable_chains<C: HnCategory>(
    cat: &C,
    e: &C::Object,
) -> Result<Vec<Vec<HnStep<C::Object>>>> {
    let mut out = Vec::new();
    let zero = cat.zero_subobject(e)?;
    extend_chains(cat, e, zero, Vec::new(), &mut out)?;
    Ok(out)
}

fn extend_chains<C: HnCategory>(
    cat: &C,
    e: &C::Object,
    prev: C::Object,
    chain: Vec<HnStep<C::Object>>,
    out: &mut Vec<Vec<HnStep<C::Object>>>,
) -> Result<()> {
    let q = cat.quotient(e, &prev)?;
    if cat.is_zero(&q)? {
        out.push(chain);
        return Ok(());
    }
    for g in nonzero_subobjects(cat, &q)? {
        if !is_semistable(cat, &g)? {
            continue;
        }
        let sub = cat.pull_back(e, &prev, &g)?;
        let mut next = chain.clone();
        next.push(HnStep {
            degree: cat.degree(&g)?,
            rank: cat.rank(&g)?,
            slope: slope(cat, &g)?,
            graded: g,
            sub: sub.clone(),
        });
        extend_chains(cat, e, sub, next, out)?;
    }
    Ok(())
}

/// Checks run by [`check_axioms`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// rank(E) = 0 exactly when E = 0.
    RankDetectsZero,
    /// deg E = deg F + deg E/F.
    DegreeAdditive,
    /// rank E = rank F + rank E/F.
    RankAdditive,
    /// F_1 semistable, F_2 costable, F_1 ⊄ F_2 imply μ(F_1) < μ(F_2).
    SemistableBelowCostable,
    /// Exactly one subobject is both semistable and costable.
    UniqueSemistableCostable,
    /// For chains with semistable graded pieces: each piece costable in the
    /// remaining quotient iff the slopes strictly decrease.
    FiltrationCriteriaAgree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub checked: usize,
    pub counterexamples: Vec<String>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn get(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks.iter().find(|c| c.axiom == axiom).expect("every axiom is checked")
    }
}

/// Largest rank for which all chains are enumerated in the filtration check.
const CHAIN_SEARCH_RANK: usize = 4;
const MAX_COUNTEREXAMPLES: usize = 5;

struct Tally {
    check: AxiomCheck,
}

impl Tally {
    fn new(axiom: Axiom) -> Self {
        Tally {
            check: AxiomCheck {
                axiom,
                checked: 0,
                counterexamples: Vec::new(),
            },
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.check.checked += 1;
        if !ok && self.check.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.check.counterexamples.push(witness());
        }
    }
}

/// Evaluate the HN axioms and their consequences on sample objects. Adapter errors
/// are reported as counterexamples.
pub fn check_axioms<C: HnCategory>(cat: &C, samples: &[C::Object]) -> AxiomReport {
    let mut zero = Tally::new(Axiom::RankDetectsZero);
    let mut deg = Tally::new(Axiom::DegreeAdditive);
    let mut rank = Tally::new(Axiom::RankAdditive);
    let mut lemma = Tally::new(Axiom::SemistableBelowCostable);
    let mut unique = Tally::new(Axiom::UniqueSemistableCostable);
    let mut chains = Tally::new(Axiom::FiltrationCriteriaAgree);
    for e in samples {
        if let Err(err) = check_sample(cat, e, [&mut zero, &mut deg, &mut rank, &mut lemma, &mut unique, &mut chains]) {
            let msg = format!("{e:?}: {err}");
            for t in [&mut zero, &mut deg, &mut rank, &mut lemma, &mut unique, &mut chains] {
                t.record(false, || msg.clone());
            }
        }
    }
    AxiomReport {
        checks: [zero, deg, rank, lemma, unique, chains]
            .into_iter()
            .map(|t| t.check)
            .collect(),
    }
}

fn check_sample<C: HnCategory>(cat: &C, e: &C::Object, tallies: [&mut Tally; 6]) -> Result<()> {
    let [zero, deg, rank, lemma, unique, chains] = tallies;
    let subs = cat.strict_subobjects(e)?;
    let (de, re) = (cat.degree(e)?, cat.rank(e)?);
    for f in &subs {
        let q = cat.quotient(e, f)?;
        for x in [f, &q] {
            let (r, z) = (cat.rank(x)?, cat.is_zero(x)?);
            zero.record((r == 0) == z, || format!("{x:?}: rank {r}, is_zero {z}"));
        }
        let (df, dq) = (cat.degree(f)?, cat.degree(&q)?);
        deg.record(de == df + dq, || {
            format!("E = {e:?}, F = {f:?}: deg E = {de}, deg F + deg E/F = {}", df + dq)
        });
        let (rf, rq) = (cat.rank(f)?, cat.rank(&q)?);
        rank.record(re == rf + rq, || {
            format!("E = {e:?}, F = {f:?}: rank E = {re}, rank F + rank E/F = {}", rf + rq)
        });
    }
    if cat.is_zero(e)? {
        return Ok(());
    }

    let mut semistable = Vec::new();
    let mut costable = Vec::new();
    for f in &subs {
        if cat.is_zero(f)? {
            continue;
        }
        let ss = is_semistable(cat, f)?;
        let cs = is_costable(cat, e, f)?;
        if ss {
            semistable.push(f);
        }
        if cs {
            costable.push(f);
        }
    }
    for f1 in &semistable {
        for f2 in &costable {
            if cat.is_subobject(f1, f2)? {
                continue;
            }
            let (m1, m2) = (slope(cat, f1)?, slope(cat, f2)?);
            lemma.record(m1 < m2, || format!("F1 = {f1:?} (slope {m1}), F2 = {f2:?} (slope {m2})"));
        }
    }
    let both: Vec<_> = semistable.iter().filter(|f| costable.contains(f)).collect();
    unique.record(both.len() == 1, || format!("{e:?}: {} semistable costable subobjects", both.len()));

    let candidates = if re <= CHAIN_SEARCH_RANK {
        semistable_chains(cat, e)?
    } else {
        vec![hn_filtration(cat, e)?.steps]
    };
    for chain in candidates {
        let decreasing = chain.windows(2).all(|w| w[0].slope > w[1].slope);
        let mut all_costable = true;
        let mut prev = cat.zero_subobject(e)?;
        for step in &chain {
            let q = cat.quotient(e, &prev)?;
            all_costable &= is_costable(cat, &q, &step.graded)?;
            prev = step.sub.clone();
        }
        chains.record(decreasing == all_costable, || {
            let slopes: Vec<String> = chain.iter().map(|s| s.slope.to_string()).collect();
            format!(
                "{e:?}: chain with slopes [{}] has costable pieces = {all_costable}",
                slopes.join(", ")
            )
        });
    }
    Ok(())
}
