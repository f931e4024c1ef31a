//! Family enumeration, random families, and a randomized search for
//! cover-free families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::{binomial, find_combination, k_subsets, ElementSet};
use crate::error::{Error, Result};
use crate::family::SetFamily;

/// Environment variable that overrides the enumeration cap.
pub const BUDGET_ENV: &str = "GT_BUDGET";

/// Limits on exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBudget {
    /// Largest universe enumerated.
    pub max_n: usize,
    /// Largest number of families produced.
    pub max_families: u128,
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget { max_n: 4, max_families: 1_000_000 }
    }
}

impl EnumBudget {
    /// The default budget, or, when `GT_BUDGET` holds a number, a budget of
    /// that many families with no cap on `n`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Err(_) => Ok(Self::default()),
            Ok(v) => {
                let max_families = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::BadParameter(format!("{BUDGET_ENV}={v} is not a family count")))?;
                Ok(EnumBudget { max_n: usize::MAX, max_families })
            }
        }
    }
}

/// `Σ_{k=1}^{max_sets} C(2ⁿ − 1, k)`.
pub fn family_count(n: usize, max_sets: usize) -> u128 {
    let subsets = (1usize << n.min(63)) - 1;
    (1..=max_sets).map(|k| binomial(subsets, k)).sum()
}

/// Every family of 1 to `max_sets` distinct nonempty subsets of `[n]`.
///
/// Canonical order: by family size, then lexicographically over the chosen
/// subsets, where subsets are ordered by their bitmask (`{1}`, `{2}`,
/// `{1,2}`, `{3}`, ...). Members inside a family follow the same order.
pub fn enumerate_families(n: usize, max_sets: usize, budget: EnumBudget) -> Result<Families> {
    if n == 0 {
        return Err(Error::BadParameter("n must be positive".into()));
    }
    if n > budget.max_n || n >= 20 {
        return Err(Error::BudgetExceeded(format!("n = {n} exceeds the enumeration cap of {}", budget.max_n)));
    }
    let total = family_count(n, max_sets);
    if total > budget.max_families {
        return Err(Error::BudgetExceeded(format!(
            "{total} families exceed the budget of {} (set {BUDGET_ENV} to raise it)",
            budget.max_families
        )));
    }
    let subsets: Vec<ElementSet> = (1u64..1 << n)
        .map(|mask| ElementSet::from_elements(n, (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1)))
        .collect();
    let max_sets = max_sets.min(subsets.len());
    Ok(Families { n, subsets, max_sets, size: 1, idx: if max_sets == 0 { None } else { Some(vec![0]) }, total })
}

/// Iterator returned by [`enumerate_families`].
pub struct Families {
    n: usize,
    subsets: Vec<ElementSet>,
    max_sets: usize,
    size: usize,
    idx: Option<Vec<usize>>,
    total: u128,
}

impl Families {
    /// Number of families the full iteration yields.
    pub fn total(&self) -> u128 {
        self.total
    }

    fn advance(&mut self) {
        let len = self.subsets.len();
        let Some(idx) = self.idx.as_mut() else { return };
        let k = idx.len();
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + len - k {
            i -= 1;
        }
        if i > 0 {
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        } else if self.size < self.max_sets {
            self.size += 1;
            self.idx = Some((0..self.size).collect());
        } else {
            self.idx = None;
        }
    }
}

impl Iterator for Families {
    type Item = SetFamily;

    fn next(&mut self) -> Option<SetFamily> {
        let idx = self.idx.as_ref()?;
        let sets = idx.iter().map(|&i| self.subsets[i].clone()).collect();
        let family = SetFamily::new(self.n, sets).expect("subsets of [n]");
        self.advance();
        Some(family)
    }
}

fn check_density(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::BadParameter(format!("density p = {p} must lie strictly between 0 and 1")));
    }
    Ok(())
}

fn draw_set(rng: &mut ChaCha8Rng, n: usize, p: f64) -> ElementSet {
    loop {
        let s = ElementSet::from_elements(n, (1..=n).filter(|_| rng.gen_bool(p)));
        if !s.is_empty() {
            return s;
        }
    }
}

/// `m` random nonempty subsets of `[n]`, each element present with
/// probability `p`; empty draws are repeated. Reproducible per seed.
pub fn random_family(n: usize, m: usize, p: f64, seed: u64) -> Result<SetFamily> {
    check_density(p)?;
    if n == 0 || m == 0 {
        return Err(Error::BadParameter(format!("need n >= 1 and m >= 1 (n={n}, m={m})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SetFamily::new(n, (0..m).map(|_| draw_set(&mut rng, n, p)).collect())
}

/// How a sweep draws its families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    /// `count` random families per `n`, reproducible per seed.
    Random {
        count: usize,
        seed: u64,
    },
}

/// The families a theorem sweep runs over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub ns: Vec<usize>,
    pub max_sets: usize,
    pub ds: Vec<usize>,
    pub mode: SweepMode,
}

impl SweepSpec {
    pub fn exhaustive(ns: Vec<usize>, max_sets: usize, ds: Vec<usize>) -> Self {
        SweepSpec { ns, max_sets, ds, mode: SweepMode::Exhaustive }
    }

    pub fn random(ns: Vec<usize>, max_sets: usize, ds: Vec<usize>, count: usize, seed: u64) -> Self {
        SweepSpec { ns, max_sets, ds, mode: SweepMode::Random { count, seed } }
    }

    /// All families of the sweep, in order: by `n`, then in enumeration or
    /// draw order. Random families have 1 to `max_sets` members and a
    /// density drawn from `[0.2, 0.7)`.
    pub fn families(&self, budget: EnumBudget) -> Result<Vec<SetFamily>> {
        if self.max_sets == 0 {
            return Err(Error::BadParameter("max_sets must be positive".into()));
        }
        let mut out = Vec::new();
        for &n in &self.ns {
            match self.mode {
                SweepMode::Exhaustive => out.extend(enumerate_families(n, self.max_sets, budget)?),
                SweepMode::Random { count, seed } => {
                    if n == 0 {
                        return Err(Error::BadParameter("n must be positive".into()));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).rotate_left(32));
                    for _ in 0..count {
                        let m = rng.gen_range(1..=self.max_sets);
                        let p = rng.gen_range(0.2..0.7);
                        out.push(SetFamily::new(n, (0..m).map(|_| draw_set(&mut rng, n, p)).collect())?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Local-search steps allowed per requested member by default.
pub const SEARCH_STEPS_PER_MEMBER: usize = 2_000;

/// Members of `sets` lying inside the union of `d` other members.
fn covered_members(sets: &[ElementSet], d: usize) -> Vec<bool> {
    (0..sets.len())
        .map(|t| {
            let others: Vec<usize> = (0..sets.len()).filter(|&i| i != t).collect();
            find_combination(others.len(), d, |combo| {
                let mut u = ElementSet::empty(sets[t].universe());
                for &c in combo {
                    u.union_with(&sets[others[c]]);
                }
                sets[t].is_subset(&u).then_some(())
            })
            .is_some()
        })
        .collect()
}

/// Randomized local search for `target` distinct `w`-subsets of `[m]`,
/// `w ≈ m/(d+1)`, none inside the union of `d` others.
///
/// A covered member is swapped for a random unused `w`-set; the swap is
/// kept unless it increases the number of covered members. `budget` bounds
/// the swaps (`None`: [`SEARCH_STEPS_PER_MEMBER`] per member). On failure
/// the error carries the most members ever uncovered at once; those members
/// alone always form a `d`-cover-free family.
pub fn search_cover_free(m: usize, target: usize, d: usize, seed: u64, budget: Option<usize>) -> Result<SetFamily> {
    if d < 1 || m < 1 || target < 1 {
        return Err(Error::BadParameter(format!("need m, target, d >= 1 (m={m}, target={target}, d={d})")));
    }
    let w = ((m as f64 / (d + 1) as f64).round() as usize).clamp(1, m);
    let mut pool = k_subsets(m, w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);
    let take = target.min(pool.len());
    let mut unused = pool.split_off(take);
    let mut current = pool;
    let mut covered = covered_members(&current, d);
    let mut bad = covered.iter().filter(|&&c| c).count();
    let mut best_found = current.len() - bad;
    if current.len() == target && bad == 0 {
        return SetFamily::new(m, current);
    }
    let steps = budget.unwrap_or(SEARCH_STEPS_PER_MEMBER * target);
    for _ in 0..steps {
        if unused.is_empty() || bad == 0 {
            break;
        }
        let bad_members: Vec<usize> = (0..current.len()).filter(|&i| covered[i]).collect();
        let victim = bad_members[rng.gen_range(0..bad_members.len())];
        let pick = rng.gen_range(0..unused.len());
        std::mem::swap(&mut current[victim], &mut unused[pick]);
        let trial = covered_members(&current, d);
        let trial_bad = trial.iter().filter(|&&c| c).count();
        if trial_bad <= bad {
            covered = trial;
            bad = trial_bad;
            best_found = best_found.max(current.len() - bad);
            if bad == 0 && current.len() == target {
                return SetFamily::new(m, current);
            }
        } else {
            std::mem::swap(&mut current[victim], &mut unused[pick]);
        }
    }
    Err(Error::SearchFailed { best_found })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::is_d_cover_free;

    #[test]
    fn enumeration_counts() {
        let b = EnumBudget::default();
        assert_eq!(enumerate_families(2, 2, b).unwrap().count(), 6);
        assert_eq!(enumerate_families(3, 3, b).unwrap().count(), 63);
        assert_eq!(enumerate_families(4, 4, b).unwrap().count(), 1940);
        assert_eq!(family_count(4, 4), 1940);
        assert_eq!(enumerate_families(1, 3, b).unwrap().count(), 1);
    }

    #[test]
    fn enumeration_order_and_distinctness() {
        let fams: Vec<SetFamily> = enumerate_families(2, 2, EnumBudget::default()).unwrap().collect();
        let expected: Vec<SetFamily> = [
            vec![vec![1]],
            vec![vec![2]],
            vec![vec![1, 2]],
            vec![vec![1], vec![2]],
            vec![vec![1], vec![1, 2]],
            vec![vec![2], vec![1, 2]],
        ]
        .iter()
        .map(|f| SetFamily::from_lists(2, f))
        .collect();
        assert_eq!(fams, expected);
        let all: Vec<SetFamily> = enumerate_families(3, 3, EnumBudget::default()).unwrap().collect();
        let unique: std::collections::HashSet<_> = all.iter().map(|f| f.to_json()).collect();
        assert_eq!(unique.len(), all.len());
    }

    #[test]
    fn enumeration_budget() {
        let b = EnumBudget::default();
        assert!(matches!(enumerate_families(5, 2, b), Err(Error::BudgetExceeded(_))));
        let tight = EnumBudget { max_n: 4, max_families: 100 };
        assert!(matches!(enumerate_families(4, 4, tight), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn random_family_checks() {
        let a = random_family(6, 5, 0.4, 42).unwrap();
        assert_eq!(a, random_family(6, 5, 0.4, 42).unwrap());
        assert_eq!(a.len(), 5);
        assert!(a.sets().iter().all(|s| !s.is_empty()));
        assert!(random_family(6, 5, 0.0, 1).is_err());
        assert!(random_family(6, 5, 1.0, 1).is_err());
        assert!(random_family(6, 0, 0.5, 1).is_err());
    }

    #[test]
    fn random_sweeps_are_reproducible() {
        let spec = SweepSpec::random(vec![5, 6], 6, vec![2], 50, 3);
        let a = spec.families(EnumBudget::default()).unwrap();
        assert_eq!(a.len(), 100);
        assert_eq!(a, spec.families(EnumBudget::default()).unwrap());
        assert!(a.iter().all(|f| (1..=6).contains(&f.len())));
    }

    #[test]
    fn cover_free_search_examples() {
        let f = search_cover_free(9, 12, 2, 1, None).unwrap();
        assert_eq!(f.len(), 12);
        assert!(is_d_cover_free(&f, 2).holds);
        assert!(matches!(search_cover_free(4, 10, 2, 1, None), Err(Error::SearchFailed { .. })));
        let f = search_cover_free(6, 6, 1, 5, None).unwrap();
        assert!(is_d_cover_free(&f, 1).holds);
    }
}
