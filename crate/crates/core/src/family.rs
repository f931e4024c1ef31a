//! Set families over `[n]` and their structural transforms and predicates.
//!
//! Set order is significant: index `i` names the `i`-th member, and duplicate
//! members are representable. Witness indices in reports are 0-based set
//! positions; elements are 1-based.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bitset::{find_combination, ElementSet};
use crate::error::{Error, Result};
use crate::hitting;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct SetFamily {
    n: usize,
    sets: Vec<ElementSet>,
}

/// Wire form: `{"n": 4, "sets": [[1,2],[3,4]]}`.
#[derive(Serialize, Deserialize)]
struct FamilyJson {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl TryFrom<FamilyJson> for SetFamily {
    type Error = Error;

    fn try_from(j: FamilyJson) -> Result<Self> {
        if j.n == 0 {
            return Err(Error::Malformed("universe size n must be at least 1".into()));
        }
        let sets = j.sets.into_iter().map(|s| ElementSet::try_from_elements(j.n, s)).collect::<Result<Vec<_>>>()?;
        Ok(SetFamily { n: j.n, sets })
    }
}

impl From<SetFamily> for FamilyJson {
    fn from(f: SetFamily) -> Self {
        FamilyJson { n: f.n, sets: f.sets.iter().map(ElementSet::to_vec).collect() }
    }
}

impl std::fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "n={} ", self.n)?;
        f.debug_list().entries(&self.sets).finish()
    }
}

impl SetFamily {
    pub fn new(n: usize, sets: Vec<ElementSet>) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadParameter("universe size n must be at least 1".into()));
        }
        if let Some(s) = sets.iter().find(|s| s.universe() != n) {
            return Err(Error::BadParameter(format!("member over universe {} in a family over {n}", s.universe())));
        }
        Ok(SetFamily { n, sets })
    }

    /// Convenience constructor from element lists; panics on bad input.
    pub fn from_lists<S: AsRef<[usize]>>(n: usize, sets: &[S]) -> Self {
        let sets = sets.iter().map(|s| ElementSet::from_elements(n, s.as_ref().iter().copied())).collect();
        SetFamily::new(n, sets).expect("valid family")
    }

    pub fn empty(n: usize) -> Self {
        SetFamily::new(n, Vec::new()).expect("n >= 1")
    }

    /// `{{1}, .., {n}}`.
    pub fn singletons(n: usize) -> Self {
        let sets = (1..=n).map(|x| ElementSet::from_elements(n, [x])).collect();
        SetFamily::new(n, sets).expect("n >= 1")
    }

    /// Every `k`-subset of `[n]` as a member, lexicographic.
    pub fn all_k_subsets(n: usize, k: usize) -> Self {
        SetFamily::new(n, crate::bitset::k_subsets(n, k)).expect("n >= 1")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn push(&mut self, set: ElementSet) {
        assert_eq!(set.universe(), self.n);
        self.sets.push(set);
    }

    /// Index of the first occurrence of each distinct member, in order.
    pub fn distinct_indices(&self) -> Vec<usize> {
        let mut seen = HashSet::new();
        (0..self.sets.len()).filter(|&i| seen.insert(&self.sets[i])).collect()
    }

    /// The sets `F_a` for element `a`: indices of members containing `a`.
    pub fn star(&self, a: usize) -> Vec<usize> {
        (0..self.sets.len()).filter(|&i| self.sets[i].contains(a)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))
    }
}

/// Counterexample data attached to a failing [`PropertyReport`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// 0-based member indices, in the role order given by `note`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<usize>,
    /// 1-based elements.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<usize>,
    /// Subsets of `[n]` (scenarios, coalitions), 1-based.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scenarios: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Witness {
    pub fn sets(sets: Vec<usize>, note: &str) -> Self {
        Witness { sets, note: Some(note.to_string()), ..Default::default() }
    }

    pub fn scenarios(scenarios: Vec<Vec<usize>>, note: &str) -> Self {
        Witness { scenarios, note: Some(note.to_string()), ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl PropertyReport {
    pub fn holds() -> Self {
        PropertyReport { holds: true, witness: None }
    }

    pub fn violated(witness: Witness) -> Self {
        PropertyReport { holds: false, witness: Some(witness) }
    }

    pub fn from_witness(witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => Self::violated(w),
            None => Self::holds(),
        }
    }

    /// Conjunction keeping the first failing witness.
    pub fn and(self, other: impl FnOnce() -> PropertyReport) -> PropertyReport {
        if self.holds {
            other()
        } else {
            self
        }
    }
}

/// `{[n] ∖ F : F ∈ 𝓕}`, index for index.
pub fn complement_family(family: &SetFamily) -> SetFamily {
    SetFamily { n: family.n, sets: family.sets.iter().map(ElementSet::complement).collect() }
}

/// Transposed incidence: member `a - 1` of the result is `{ i + 1 : a ∈ F_i }`.
///
/// One member per element, duplicates kept. The universe is `|𝓕|`, which is
/// zero for an empty family.
pub fn dual_family(family: &SetFamily) -> SetFamily {
    let m = family.sets.len();
    let sets = (1..=family.n)
        .map(|a| {
            let mut s = ElementSet::empty(m);
            for (i, f) in family.sets.iter().enumerate() {
                if f.contains(a) {
                    s.insert(i + 1);
                }
            }
            s
        })
        .collect();
    SetFamily { n: m, sets }
}

/// Distinct unions of `d` pairwise value-distinct members, first-seen order.
///
/// # Panics
/// If `d == 0`.
pub fn d_fold_unions(family: &SetFamily, d: usize) -> SetFamily {
    assert!(d >= 1, "d must be positive");
    let distinct = family.distinct_indices();
    let mut seen = HashSet::new();
    let mut sets = Vec::new();
    find_combination::<()>(distinct.len(), d, |combo| {
        let mut u = ElementSet::empty(family.n);
        for &c in combo {
            u.union_with(&family.sets[distinct[c]]);
        }
        if seen.insert(u.clone()) {
            sets.push(u);
        }
        None
    });
    SetFamily { n: family.n, sets }
}

/// No member is contained in a member at a different index.
/// Equal members at different indices violate.
pub fn is_sperner(family: &SetFamily) -> PropertyReport {
    let sets = &family.sets;
    for i in 0..sets.len() {
        for j in 0..sets.len() {
            if i != j && sets[i].is_subset(&sets[j]) {
                return PropertyReport::violated(Witness::sets(vec![i, j], "set[0] ⊆ set[1]"));
            }
        }
    }
    PropertyReport::holds()
}

fn cancellation_witness(
    family: &SetFamily,
    combine: impl Fn(&ElementSet, &ElementSet) -> ElementSet,
) -> Option<Witness> {
    let distinct = family.distinct_indices();
    let sets = &family.sets;
    for &a in &distinct {
        for (p, &b) in distinct.iter().enumerate() {
            if b == a {
                continue;
            }
            let ab = combine(&sets[a], &sets[b]);
            for &c in &distinct[p + 1..] {
                if c != a && combine(&sets[a], &sets[c]) == ab {
                    return Some(Witness::sets(
                        vec![a, b, c],
                        "set[0] op set[1] = set[0] op set[2] with set[1] ≠ set[2]",
                    ));
                }
            }
        }
    }
    None
}

/// `F₁ ∪ F₂ = F₁ ∪ F₃ ⇒ F₂ = F₃` over pairwise distinct member values.
pub fn is_cancellative(family: &SetFamily) -> PropertyReport {
    PropertyReport::from_witness(cancellation_witness(family, ElementSet::union))
}

/// `F₁ ∩ F₂ = F₁ ∩ F₃ ⇒ F₂ = F₃` over pairwise distinct member values.
pub fn is_intersection_cancellative(family: &SetFamily) -> PropertyReport {
    PropertyReport::from_witness(cancellation_witness(family, ElementSet::intersection))
}

pub fn is_intersection_closed(family: &SetFamily) -> PropertyReport {
    let members: HashSet<&ElementSet> = family.sets.iter().collect();
    let sets = &family.sets;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !members.contains(&sets[i].intersection(&sets[j])) {
                return PropertyReport::violated(Witness::sets(vec![i, j], "set[0] ∩ set[1] is not a member"));
            }
        }
    }
    PropertyReport::holds()
}

/// τ(𝓗): size of a smallest subset of `[n]` meeting every member.
///
/// Zero for the empty family; [`Error::EmptyMemberSet`] when some member is
/// empty (no transversal exists).
pub fn covering_number(family: &SetFamily) -> Result<usize> {
    if let Some(index) = family.sets.iter().position(ElementSet::is_empty) {
        return Err(Error::EmptyMemberSet { index });
    }
    Ok(hitting::min_transversal(&family.sets, None, family.n).expect("nonempty members always have a transversal"))
}

/// Whether τ(𝓗) > `bound`, treating an empty member as τ = ∞.
pub fn covering_number_exceeds(family: &SetFamily, bound: usize) -> bool {
    if family.sets.iter().any(ElementSet::is_empty) {
        return true;
    }
    !hitting::transversal_within(&family.sets, None, bound)
}

/// 𝓗ₓ = `{ F ∖ {x} : F ∈ 𝓕, x ∈ F }`, duplicates kept.
pub fn restricted_star(family: &SetFamily, x: usize) -> Result<SetFamily> {
    if x == 0 || x > family.n {
        return Err(Error::ElementOutOfRange { element: x, n: family.n });
    }
    let sets = family
        .sets
        .iter()
        .filter(|f| f.contains(x))
        .map(|f| {
            let mut s = f.clone();
            s.remove(x);
            s
        })
        .collect();
    Ok(SetFamily { n: family.n, sets })
}

/// Multiset of members keyed by value, used by equality-up-to-order checks.
pub fn member_counts(family: &SetFamily) -> HashMap<ElementSet, usize> {
    let mut m = HashMap::new();
    for s in &family.sets {
        *m.entry(s.clone()).or_insert(0) += 1;
    }
    m
}
