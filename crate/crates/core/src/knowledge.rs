//! What an element, or a coalition of elements, can deduce from the answers
//! to the queries it sees.
//!
//! Observers reason only from (query, answer) pairs and the public facts
//! `n` and `d`. A scenario `D′` is consistent with a view when every visible
//! query meets `D′` exactly when its answer was YES.
//!
//! Three exact evaluation routes exist:
//! * the definitional one ([`consistent_scenarios`] and the predicates built
//!   on it), which scans all `C(n, d)` scenarios;
//! * [`Worlds`], the same scan with every scenario's answer signature
//!   precomputed, used by the model solvers;
//! * [`Backend::Transversal`], which never enumerates scenarios: a
//!   consistent `D′` avoiding (or containing) an element exists iff the
//!   YES-answered queries have a small enough transversal among elements no
//!   NO-answered query contains. This route scales to transcripts over
//!   hundreds of elements.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bitset::{binomial, k_subsets, ElementSet};
use crate::error::{Error, Result};
use crate::exec;
use crate::family::SetFamily;
use crate::hitting;
use crate::separation::{check_d, hit_signatures};

/// A candidate defective set: a `d`-subset of `[n]`.
pub type Scenario = ElementSet;

/// One YES/NO answer per query index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AnswerVector(pub Vec<bool>);

/// The answered queries visible to a coalition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeView {
    pub coalition: ElementSet,
    /// 0-based query indices meeting the coalition, ascending.
    pub visible: Vec<usize>,
    /// Answers for `visible`, position for position.
    pub answers: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSet {
    pub scenarios: Vec<Scenario>,
}

impl ScenarioSet {
    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn contains(&self, s: &Scenario) -> bool {
        self.scenarios.contains(s)
    }
}

fn check_subset(family: &SetFamily, s: &ElementSet, what: &str) -> Result<()> {
    if s.universe() != family.n() {
        return Err(Error::BadScenario(format!(
            "{what} lives in [{}] but the family is over [{}]",
            s.universe(),
            family.n()
        )));
    }
    Ok(())
}

/// Answer `i` is YES iff query `i` meets `defective`.
pub fn answer_vector(family: &SetFamily, defective: &Scenario) -> Result<AnswerVector> {
    check_subset(family, defective, "scenario")?;
    Ok(AnswerVector(family.sets().iter().map(|q| q.intersects(defective)).collect()))
}

impl KnowledgeView {
    /// The view of `coalition` given already-known answers for every query.
    pub fn from_answers(family: &SetFamily, coalition: &ElementSet, answers: &[bool]) -> Result<Self> {
        check_subset(family, coalition, "coalition")?;
        if answers.len() != family.len() {
            return Err(Error::BadParameter(format!("{} answers for {} queries", answers.len(), family.len())));
        }
        let visible: Vec<usize> = (0..family.len()).filter(|&i| family.sets()[i].intersects(coalition)).collect();
        let answers = visible.iter().map(|&i| answers[i]).collect();
        Ok(KnowledgeView { coalition: coalition.clone(), visible, answers })
    }
}

/// Queries meeting `coalition`, answered as `defective` dictates.
pub fn coalition_view(family: &SetFamily, coalition: &ElementSet, defective: &Scenario) -> Result<KnowledgeView> {
    if coalition.is_empty() {
        return Err(Error::BadParameter("coalition must be nonempty".into()));
    }
    let answers = answer_vector(family, defective)?;
    KnowledgeView::from_answers(family, coalition, &answers.0)
}

fn view_admits(family: &SetFamily, view: &KnowledgeView, candidate: &ElementSet) -> bool {
    view.visible.iter().zip(&view.answers).all(|(&i, &a)| family.sets()[i].intersects(candidate) == a)
}

/// Every `d`-set the view cannot rule out, lexicographic.
pub fn consistent_scenarios(family: &SetFamily, view: &KnowledgeView, d: usize) -> ScenarioSet {
    let scenarios = k_subsets(family.n(), d).into_iter().filter(|c| view_admits(family, view, c)).collect();
    ScenarioSet { scenarios }
}

fn singleton(n: usize, x: usize) -> ElementSet {
    ElementSet::from_elements(n, [x])
}

/// Whether `x` can tell if it is defective.
pub fn knows_own_status(family: &SetFamily, x: usize, defective: &Scenario, d: usize) -> Result<bool> {
    let view = coalition_view(family, &singleton(family.n(), x), defective)?;
    Ok(view_knows_status(family, &view, d, x, defective, Backend::Enumerate))
}

/// Whether the coalition's view pins the defective set down uniquely.
pub fn identifies_set(family: &SetFamily, coalition: &ElementSet, defective: &Scenario, d: usize) -> Result<bool> {
    let view = coalition_view(family, coalition, defective)?;
    Ok(view_identifies(family, &view, d, defective, Backend::Enumerate))
}

/// Whether every defective could still be absent from some consistent scenario.
pub fn identifies_no_defective(
    family: &SetFamily,
    coalition: &ElementSet,
    defective: &Scenario,
    d: usize,
) -> Result<bool> {
    let view = coalition_view(family, coalition, defective)?;
    Ok(view_identifies_none(family, &view, d, defective, Backend::Enumerate))
}

/// `τ(𝓗ₓ) > d`: `x` learns its own status whatever the defective set is.
pub fn element_always_knows_status(family: &SetFamily, x: usize, d: usize) -> Result<bool> {
    let star = crate::family::restricted_star(family, x)?;
    Ok(crate::family::covering_number_exceeds(&star, d))
}

/// How the view-level predicates search for alternative scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Scan all `C(n, d)` scenarios.
    Enumerate,
    /// Bounded transversal search over YES-answered queries.
    Transversal,
}

impl Backend {
    /// Enumeration when `C(n, d)` is within `budget`, otherwise transversals.
    pub fn for_size(n: usize, d: usize, budget: u128) -> Backend {
        if binomial(n, d) <= budget {
            Backend::Enumerate
        } else {
            Backend::Transversal
        }
    }
}

/// Exists a consistent `d`-set that avoids `avoid` and contains `include`.
fn exists_consistent_constrained(
    family: &SetFamily,
    view: &KnowledgeView,
    d: usize,
    avoid: Option<usize>,
    include: Option<usize>,
) -> bool {
    let n = family.n();
    let mut allowed = ElementSet::full(n);
    let mut yes: Vec<ElementSet> = Vec::new();
    for (&i, &a) in view.visible.iter().zip(&view.answers) {
        if a {
            yes.push(family.sets()[i].clone());
        } else {
            allowed.difference_with(&family.sets()[i]);
        }
    }
    if let Some(y) = avoid {
        allowed.remove(y);
    }
    let mut budget = d;
    if let Some(x) = include {
        if !allowed.contains(x) || d == 0 {
            return false;
        }
        allowed.remove(x);
        yes.retain(|q| !q.contains(x));
        budget -= 1;
    }
    // pad any transversal up to exactly `budget` allowed elements
    allowed.len() >= budget && hitting::transversal_within(&yes, Some(&allowed), budget)
}

fn exists_consistent(
    family: &SetFamily,
    view: &KnowledgeView,
    d: usize,
    avoid: Option<usize>,
    include: Option<usize>,
    backend: Backend,
) -> bool {
    match backend {
        Backend::Transversal => exists_consistent_constrained(family, view, d, avoid, include),
        Backend::Enumerate => consistent_scenarios(family, view, d)
            .scenarios
            .iter()
            .any(|s| avoid.is_none_or(|y| !s.contains(y)) && include.is_none_or(|x| s.contains(x))),
    }
}

/// `x` knows whether it is defective, given that `truth` produced the view.
pub fn view_knows_status(
    family: &SetFamily,
    view: &KnowledgeView,
    d: usize,
    x: usize,
    truth: &Scenario,
    backend: Backend,
) -> bool {
    if truth.contains(x) {
        !exists_consistent(family, view, d, Some(x), None, backend)
    } else {
        !exists_consistent(family, view, d, None, Some(x), backend)
    }
}

/// Only `truth` is consistent with the view (`truth` itself always is).
pub fn view_identifies(family: &SetFamily, view: &KnowledgeView, d: usize, truth: &Scenario, backend: Backend) -> bool {
    // a different d-set misses some member of truth
    truth.iter().all(|y| !exists_consistent(family, view, d, Some(y), None, backend))
}

/// Every member of `truth` is missing from some consistent scenario.
pub fn view_identifies_none(
    family: &SetFamily,
    view: &KnowledgeView,
    d: usize,
    truth: &Scenario,
    backend: Backend,
) -> bool {
    truth.iter().all(|y| exists_consistent(family, view, d, Some(y), None, backend))
}

/// Precomputed possible worlds: every `d`-set with the set of queries it hits.
///
/// Two worlds look alike to a coalition when their signatures agree on the
/// queries the coalition sees.
pub struct Worlds<'a> {
    family: &'a SetFamily,
    d: usize,
    scenarios: Vec<Scenario>,
    signatures: Vec<ElementSet>,
    index: HashMap<Scenario, usize>,
}

impl<'a> Worlds<'a> {
    pub fn new(family: &'a SetFamily, d: usize) -> Result<Self> {
        check_d(family.n(), d)?;
        let scenarios = k_subsets(family.n(), d);
        let signatures = hit_signatures(family, &scenarios);
        let index = scenarios.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(Worlds { family, d, scenarios, signatures, index })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn scenarios(&self) -> &[Scenario] {
        &self.scenarios
    }

    pub fn scenario_index(&self, s: &Scenario) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Query indices (1-based bits) meeting the coalition.
    pub fn visible_mask(&self, coalition: &ElementSet) -> ElementSet {
        let mut mask = ElementSet::empty(self.family.len());
        for (i, q) in self.family.sets().iter().enumerate() {
            if q.intersects(coalition) {
                mask.insert(i + 1);
            }
        }
        mask
    }

    /// Indices of worlds indistinguishable from world `truth` under `mask`.
    pub fn consistent<'s>(&'s self, mask: &'s ElementSet, truth: usize) -> impl Iterator<Item = usize> + 's {
        let sig = &self.signatures[truth];
        (0..self.scenarios.len()).filter(move |&j| self.signatures[j].agrees_within(sig, mask))
    }

    pub fn knows_status(&self, x: usize, mask: &ElementSet, truth: usize) -> bool {
        let is_defective = self.scenarios[truth].contains(x);
        self.consistent(mask, truth).all(|j| self.scenarios[j].contains(x) == is_defective)
    }

    pub fn identifies(&self, mask: &ElementSet, truth: usize) -> bool {
        self.consistent(mask, truth).all(|j| j == truth)
    }

    pub fn identifies_none(&self, mask: &ElementSet, truth: usize) -> bool {
        let d_set = &self.scenarios[truth];
        let mut unexcluded = d_set.clone();
        for j in self.consistent(mask, truth) {
            unexcluded.intersect_with(&self.scenarios[j]);
            if unexcluded.is_empty() {
                return true;
            }
        }
        unexcluded.is_empty()
    }

    /// Masks for every single element, indexed by `x - 1`.
    pub fn element_masks(&self) -> Vec<ElementSet> {
        exec::map_index(self.family.n(), |i| self.visible_mask(&ElementSet::from_elements(self.family.n(), [i + 1])))
    }
}
