//! Exact small hitting sets (transversals) by bounded branching.

use crate::bitset::ElementSet;

/// Size of a smallest `T ⊆ allowed` meeting every set, if that size is at most `cap`.
///
/// Returns `None` when no transversal of size `<= cap` exists, including the
/// case where some set has no allowed element.
pub(crate) fn min_transversal(sets: &[ElementSet], allowed: Option<&ElementSet>, cap: usize) -> Option<usize> {
    let reduced = reduce(sets, allowed)?;
    (0..=cap).find(|&k| hit_within(&reduced, k))
}

/// Whether some `T ⊆ allowed` with `|T| <= k` meets every set.
pub(crate) fn transversal_within(sets: &[ElementSet], allowed: Option<&ElementSet>, k: usize) -> bool {
    match reduce(sets, allowed) {
        Some(reduced) => hit_within(&reduced, k),
        None => false,
    }
}

/// Restricts to `allowed` and drops supersets; `None` if a set becomes empty.
fn reduce(sets: &[ElementSet], allowed: Option<&ElementSet>) -> Option<Vec<ElementSet>> {
    let mut restricted: Vec<ElementSet> = Vec::with_capacity(sets.len());
    for s in sets {
        let r = match allowed {
            Some(a) => s.intersection(a),
            None => s.clone(),
        };
        if r.is_empty() {
            return None;
        }
        restricted.push(r);
    }
    restricted.sort_by_key(|s| s.len());
    restricted.dedup();
    let mut kept: Vec<ElementSet> = Vec::with_capacity(restricted.len());
    for s in restricted {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    Some(kept)
}

fn hit_within(sets: &[ElementSet], k: usize) -> bool {
    if sets.is_empty() {
        return true;
    }
    if k == 0 {
        return false;
    }
    // pairwise disjoint sets each need their own element
    let mut packing = 0;
    let mut used: Option<ElementSet> = None;
    for s in sets {
        let clash = used.as_ref().is_some_and(|u| u.intersects(s));
        if !clash {
            packing += 1;
            match used.as_mut() {
                Some(u) => u.union_with(s),
                None => used = Some(s.clone()),
            }
        }
    }
    if packing > k {
        return false;
    }
    // sets are sorted by size, so branch on the smallest
    let pivot = &sets[0];
    for e in pivot.iter() {
        let rest: Vec<ElementSet> = sets.iter().filter(|s| !s.contains(e)).cloned().collect();
        if hit_within(&rest, k - 1) {
            return true;
        }
    }
    false
}
