//! Search-theoretic family properties: separation, union-freeness and the
//! cover-free variants.
//!
//! "Different" members are compared by value unless [`Distinctness::ByIndex`]
//! is requested; the index mode is what the dual of a query family needs,
//! where two elements with equal stars are still different elements.

use std::collections::HashMap;

use crate::bitset::{find_combination, k_subsets, ElementSet};
use crate::error::{Error, Result};
use crate::exec;
use crate::family::{PropertyReport, SetFamily, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Distinctness {
    /// One copy of each member value takes part.
    #[default]
    ByValue,
    /// Every index takes part, equal values included.
    ByIndex,
}

/// Parameters `d` (defectives / union arity) and `r` (intersection arity).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeparationParams {
    pub d: usize,
    pub r: usize,
}

fn members(family: &SetFamily, mode: Distinctness) -> Vec<usize> {
    match mode {
        Distinctness::ByValue => family.distinct_indices(),
        Distinctness::ByIndex => (0..family.len()).collect(),
    }
}

/// For each scenario, the set of query indices (1-based) it hits.
pub(crate) fn hit_signatures(family: &SetFamily, scenarios: &[ElementSet]) -> Vec<ElementSet> {
    let m = family.len();
    exec::map(scenarios, |x| {
        let mut sig = ElementSet::empty(m);
        for (i, q) in family.sets().iter().enumerate() {
            if q.intersects(x) {
                sig.insert(i + 1);
            }
        }
        sig
    })
}

pub(crate) fn check_d(n: usize, d: usize) -> Result<()> {
    if d < 1 || d > n {
        return Err(Error::BadParameter(format!("d = {d} must satisfy 1 <= d <= n = {n}")));
    }
    Ok(())
}

/// Every two different `d`-subsets of `[n]` are told apart by some member
/// meeting exactly one of them. Vacuously true at `d = n`.
pub fn is_d_separating(family: &SetFamily, d: usize) -> Result<PropertyReport> {
    check_d(family.n(), d)?;
    let scenarios = k_subsets(family.n(), d);
    let sigs = hit_signatures(family, &scenarios);
    let clash = exec::find_map_first_index(scenarios.len(), |a| {
        (a + 1..scenarios.len()).find(|&b| sigs[a] == sigs[b]).map(|b| (a, b))
    });
    Ok(PropertyReport::from_witness(clash.map(|(a, b)| {
        Witness::scenarios(
            vec![scenarios[a].to_vec(), scenarios[b].to_vec()],
            "no member meets exactly one of the two d-sets",
        )
    })))
}

pub fn is_d_union_free(family: &SetFamily, d: usize) -> PropertyReport {
    is_d_union_free_with(family, d, Distinctness::ByValue)
}

/// Different `d`-subfamilies have different unions.
pub fn is_d_union_free_with(family: &SetFamily, d: usize, mode: Distinctness) -> PropertyReport {
    assert!(d >= 1, "d must be positive");
    let members = members(family, mode);
    let sets = family.sets();
    let mut first: HashMap<ElementSet, Vec<usize>> = HashMap::new();
    let clash = find_combination(members.len(), d, |combo| {
        let picked: Vec<usize> = combo.iter().map(|&c| members[c]).collect();
        let mut u = ElementSet::empty(family.n());
        for &i in &picked {
            u.union_with(&sets[i]);
        }
        match first.get(&u) {
            Some(earlier) => Some([earlier.clone(), picked].concat()),
            None => {
                first.insert(u, picked);
                None
            }
        }
    });
    PropertyReport::from_witness(
        clash.map(|sets| Witness::sets(sets, "first d members and last d members have equal unions")),
    )
}

pub fn is_d_cover_free(family: &SetFamily, d: usize) -> PropertyReport {
    is_d_cover_free_with(family, d, Distinctness::ByValue)
}

/// No member lies inside the union of `d` other members.
pub fn is_d_cover_free_with(family: &SetFamily, d: usize, mode: Distinctness) -> PropertyReport {
    assert!(d >= 1, "d must be positive");
    let members = members(family, mode);
    let sets = family.sets();
    let found = exec::find_map_first_index(members.len(), |t| {
        let target = &sets[members[t]];
        let others: Vec<usize> = members.iter().copied().filter(|&i| i != members[t]).collect();
        find_combination(others.len(), d, |combo| {
            let mut u = ElementSet::empty(family.n());
            for &c in combo {
                u.union_with(&sets[others[c]]);
            }
            target.is_subset(&u).then(|| {
                let mut w: Vec<usize> = combo.iter().map(|&c| others[c]).collect();
                w.push(members[t]);
                w
            })
        })
    });
    PropertyReport::from_witness(found.map(|sets| Witness::sets(sets, "last member ⊆ union of the first d")))
}

pub fn is_r_d_cover_free(family: &SetFamily, r: usize, d: usize) -> PropertyReport {
    is_r_d_cover_free_with(family, r, d, Distinctness::ByValue)
}

/// No `r` members have their intersection inside the union of `d` further
/// members. An empty intersection counts as contained.
pub fn is_r_d_cover_free_with(family: &SetFamily, r: usize, d: usize, mode: Distinctness) -> PropertyReport {
    assert!(r >= 1 && d >= 1, "r and d must be positive");
    let members = members(family, mode);
    let sets = family.sets();
    let r_combos = crate::bitset::combinations(members.len(), r);
    let found = exec::find_map_first(&r_combos, |rc| {
        let chosen: Vec<usize> = rc.iter().map(|&c| members[c]).collect();
        let mut inter = ElementSet::full(family.n());
        for &i in &chosen {
            inter.intersect_with(&sets[i]);
        }
        let others: Vec<usize> = members.iter().copied().filter(|i| !chosen.contains(i)).collect();
        find_combination(others.len(), d, |combo| {
            let mut u = ElementSet::empty(family.n());
            for &c in combo {
                u.union_with(&sets[others[c]]);
            }
            inter.is_subset(&u).then(|| {
                let mut w: Vec<usize> = combo.iter().map(|&c| others[c]).collect();
                w.extend(&chosen);
                w
            })
        })
    });
    PropertyReport::from_witness(
        found.map(|sets| Witness::sets(sets, "intersection of the last r members ⊆ union of the first d")),
    )
}

/// The `⌈log₂ n⌉` bit classes `B_j = { x : bit j of x − 1 is set }`.
pub fn binary_separating_family(n: usize) -> Result<SetFamily> {
    if n < 2 {
        return Err(Error::BadParameter(format!("n = {n} must be at least 2")));
    }
    let bits = usize::BITS - (n - 1).leading_zeros();
    let sets = (0..bits).map(|j| ElementSet::from_elements(n, (1..=n).filter(|x| (x - 1) >> j & 1 == 1))).collect();
    SetFamily::new(n, sets)
}
