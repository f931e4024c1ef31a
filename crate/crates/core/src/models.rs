//! Knowledge models for non-adaptive query families, each with a semantic
//! solver and, where one exists, a combinatorial characterization.
//!
//! | model | requirement on every defective set `D` |
//! |-------|-----------------------------------------|
//! | 1     | every element learns whether it is defective |
//! | 2     | every element learns `D` |
//! | 2′    | every non-defective learns `D` |
//! | 2″    | every `d` elements together learn `D` |
//! | 3     | no element can name any defective |
//! | 4     | every `j` elements together learn `D`; no `i` elements can name a defective |
//!
//! Every solver also requires the family to be `d`-separating (the
//! questioner must be able to find `D`) and reports that clause explicitly.

use serde::{Deserialize, Serialize};

use crate::bitset::{binomial, k_subsets, ElementSet};
use crate::error::{Error, Result};
use crate::exec;
use crate::family::{
    d_fold_unions, dual_family, is_intersection_cancellative, is_sperner, PropertyReport, SetFamily, Witness,
};
use crate::knowledge::{element_always_knows_status, Worlds};
use crate::separation::{
    hit_signatures, is_d_cover_free_with, is_d_separating, is_d_union_free_with, is_r_d_cover_free_with, Distinctness,
};

/// Coalition enumeration cap for Model 4 sweeps.
pub const COALITION_BUDGET: u128 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Model1,
    Model2,
    Model2Prime,
    Model2Dbl,
    Model3,
    Model4 { i: usize, j: usize },
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Model1 => "model1",
            Model::Model2 => "model2",
            Model::Model2Prime => "model2prime",
            Model::Model2Dbl => "model2dbl",
            Model::Model3 => "model3",
            Model::Model4 { .. } => "model4",
        }
    }
}

/// Which requirement a failing case breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Clause {
    /// `defective` and `alternative` receive identical answers.
    NotSeparating,
    /// The observer cannot tell whether it is defective.
    StatusUnknown,
    /// The observing coalition cannot pin `D` down.
    NotIdentified,
    /// The observing coalition can name `element` as defective.
    DefectiveExposed { element: usize },
    /// The questioner's verdict is not the unique consistent scenario.
    WrongVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailingCase {
    pub clause: Clause,
    pub defective: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observer: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alternative: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelVerdict {
    pub solves: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failing_case: Option<FailingCase>,
}

impl ModelVerdict {
    pub fn solved() -> Self {
        ModelVerdict { solves: true, failing_case: None }
    }

    pub fn failed(case: FailingCase) -> Self {
        ModelVerdict { solves: false, failing_case: Some(case) }
    }

    fn from_case(case: Option<FailingCase>) -> Self {
        match case {
            Some(c) => Self::failed(c),
            None => Self::solved(),
        }
    }
}

fn check_model_d(n: usize, d: usize) -> Result<()> {
    if d < 1 || d + 1 > n {
        return Err(Error::BadParameter(format!("d = {d} must satisfy 1 <= d <= n - 1 = {}", n - 1)));
    }
    Ok(())
}

fn separation_failure(family: &SetFamily, d: usize) -> Result<Option<FailingCase>> {
    let report = is_d_separating(family, d)?;
    Ok(report.witness.map(|w| FailingCase {
        clause: Clause::NotSeparating,
        defective: w.scenarios[0].clone(),
        observer: Vec::new(),
        alternative: w.scenarios[1].clone(),
    }))
}

fn coalition_masks(worlds: &Worlds<'_>, n: usize, size: usize) -> Result<Vec<(ElementSet, ElementSet)>> {
    if binomial(n, size) > COALITION_BUDGET {
        return Err(Error::BudgetExceeded(format!("C({n}, {size}) coalitions exceed the cap of {COALITION_BUDGET}")));
    }
    let coalitions = k_subsets(n, size);
    Ok(exec::map(&coalitions, |s| (s.clone(), worlds.visible_mask(s))))
}

/// Every element learns whether it is defective.
pub fn solves_model1_semantic(family: &SetFamily, d: usize) -> Result<ModelVerdict> {
    check_model_d(family.n(), d)?;
    if let Some(case) = separation_failure(family, d)? {
        return Ok(ModelVerdict::failed(case));
    }
    let worlds = Worlds::new(family, d)?;
    let masks = worlds.element_masks();
    let n = family.n();
    let case = exec::find_map_first_index(worlds.scenarios().len(), |t| {
        (1..=n).find(|&x| !worlds.knows_status(x, &masks[x - 1], t)).map(|x| FailingCase {
            clause: Clause::StatusUnknown,
            defective: worlds.scenarios()[t].to_vec(),
            observer: vec![x],
            alternative: Vec::new(),
        })
    });
    Ok(ModelVerdict::from_case(case))
}

fn single_element_identification(family: &SetFamily, d: usize, skip_defectives: bool) -> Result<ModelVerdict> {
    check_model_d(family.n(), d)?;
    if let Some(case) = separation_failure(family, d)? {
        return Ok(ModelVerdict::failed(case));
    }
    let worlds = Worlds::new(family, d)?;
    let masks = worlds.element_masks();
    let n = family.n();
    let case = exec::find_map_first_index(worlds.scenarios().len(), |t| {
        let truth = &worlds.scenarios()[t];
        (1..=n)
            .filter(|&x| !(skip_defectives && truth.contains(x)))
            .find(|&x| !worlds.identifies(&masks[x - 1], t))
            .map(|x| FailingCase {
                clause: Clause::NotIdentified,
                defective: truth.to_vec(),
                observer: vec![x],
                alternative: Vec::new(),
            })
    });
    Ok(ModelVerdict::from_case(case))
}

/// Every element learns the whole defective set.
pub fn solves_model2_semantic(family: &SetFamily, d: usize) -> Result<ModelVerdict> {
    single_element_identification(family, d, false)
}

/// Every non-defective element learns the whole defective set.
pub fn solves_model2prime_semantic(family: &SetFamily, d: usize) -> Result<ModelVerdict> {
    single_element_identification(family, d, true)
}

/// Every coalition of `d` elements learns the defective set.
pub fn solves_model2dbl_semantic(family: &SetFamily, d: usize) -> Result<ModelVerdict> {
    check_model_d(family.n(), d)?;
    if let Some(case) = separation_failure(family, d)? {
        return Ok(ModelVerdict::failed(case));
    }
    let worlds = Worlds::new(family, d)?;
    let masks = coalition_masks(&worlds, family.n(), d)?;
    let case = exec::find_map_first_index(worlds.scenarios().len(), |t| {
        masks.iter().find(|(_, m)| !worlds.identifies(m, t)).map(|(s, _)| FailingCase {
            clause: Clause::NotIdentified,
            defective: worlds.scenarios()[t].to_vec(),
            observer: s.to_vec(),
            alternative: Vec::new(),
        })
    });
    Ok(ModelVerdict::from_case(case))
}

fn exposed_defective(worlds: &Worlds<'_>, mask: &ElementSet, t: usize) -> Option<usize> {
    let mut exposed = worlds.scenarios()[t].clone();
    for j in worlds.consistent(mask, t) {
        exposed.intersect_with(&worlds.scenarios()[j]);
    }
    exposed.first()
}

/// No element can name any defective.
pub fn solves_model3_semantic(family: &SetFamily, d: usize) -> Result<ModelVerdict> {
    check_model_d(family.n(), d)?;
    if let Some(case) = separation_failure(family, d)? {
        return Ok(ModelVerdict::failed(case));
    }
    let worlds = Worlds::new(family, d)?;
    let masks = worlds.element_masks();
    let n = family.n();
    let case = exec::find_map_first_index(worlds.scenarios().len(), |t| {
        (1..=n).find_map(|x| {
            exposed_defective(&worlds, &masks[x - 1], t).map(|y| FailingCase {
                clause: Clause::DefectiveExposed { element: y },
                defective: worlds.scenarios()[t].to_vec(),
                observer: vec![x],
                alternative: Vec::new(),
            })
        })
    });
    Ok(ModelVerdict::from_case(case))
}

/// Every `j` elements together learn `D`, and no `i` elements can name a defective.
pub fn solves_model4_semantic(family: &SetFamily, d: usize, i: usize, j: usize) -> Result<ModelVerdict> {
    let n = family.n();
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::BadParameter(format!("need 1 <= i < j <= n, got i = {i}, j = {j}, n = {n}")));
    }
    check_model_d(n, d)?;
    if let Some(case) = separation_failure(family, d)? {
        return Ok(ModelVerdict::failed(case));
    }
    let worlds = Worlds::new(family, d)?;
    let large = coalition_masks(&worlds, n, j)?;
    let small = coalition_masks(&worlds, n, i)?;
    let case = exec::find_map_first_index(worlds.scenarios().len(), |t| {
        let defective = worlds.scenarios()[t].to_vec();
        if let Some((s, _)) = large.iter().find(|(_, m)| !worlds.identifies(m, t)) {
            return Some(FailingCase {
                clause: Clause::NotIdentified,
                defective,
                observer: s.to_vec(),
                alternative: Vec::new(),
            });
        }
        small.iter().find_map(|(s, m)| {
            exposed_defective(&worlds, m, t).map(|y| FailingCase {
                clause: Clause::DefectiveExposed { element: y },
                defective: defective.clone(),
                observer: s.to_vec(),
                alternative: Vec::new(),
            })
        })
    });
    Ok(ModelVerdict::from_case(case))
}

pub fn solves_semantic(family: &SetFamily, d: usize, model: Model) -> Result<ModelVerdict> {
    match model {
        Model::Model1 => solves_model1_semantic(family, d),
        Model::Model2 => solves_model2_semantic(family, d),
        Model::Model2Prime => solves_model2prime_semantic(family, d),
        Model::Model2Dbl => solves_model2dbl_semantic(family, d),
        Model::Model3 => solves_model3_semantic(family, d),
        Model::Model4 { i, j } => solves_model4_semantic(family, d, i, j),
    }
}

/// Model 1 characterization: the dual, with elements as distinct members, is `d`-cover-free.
pub fn model1_characterization(family: &SetFamily, d: usize) -> PropertyReport {
    is_d_cover_free_with(&dual_family(family), d, Distinctness::ByIndex)
}

/// Model 1 via transversals: `τ(𝓗ₓ) > d` for every element `x`.
pub fn model1_transversal_form(family: &SetFamily, d: usize) -> PropertyReport {
    let failing = (1..=family.n()).find(|&x| !element_always_knows_status(family, x, d).expect("x in range"));
    PropertyReport::from_witness(failing.map(|x| Witness {
        elements: vec![x],
        note: Some("restricted star of the element has a transversal of size <= d".into()),
        ..Default::default()
    }))
}

/// Sufficient condition for Model 2′: the dual is `(2, d)`-cover-free.
pub fn model2prime_sufficient(family: &SetFamily, d: usize) -> PropertyReport {
    is_r_d_cover_free_with(&dual_family(family), 2, d, Distinctness::ByIndex)
}

/// Necessary condition for Model 2′: the Model 1 characterization.
pub fn model2prime_necessary(family: &SetFamily, d: usize) -> PropertyReport {
    model1_characterization(family, d)
}

/// Model 2″ primal form.
///
/// (a) for all different `d`-sets `X, Y` some member meets `X` and misses `Y`;
/// (b) for all different `d`-sets `X, Y, Z` some member meets `X` and exactly
/// one of `Y`, `Z`.
pub fn model2dbl_characterization_primal(family: &SetFamily, d: usize) -> PropertyReport {
    let scenarios = k_subsets(family.n(), d);
    let sigs = hit_signatures(family, &scenarios);
    let k = scenarios.len();
    let scen = |idx: &[usize]| idx.iter().map(|&i| scenarios[i].to_vec()).collect::<Vec<_>>();
    let one_sided =
        exec::find_map_first_index(k, |x| (0..k).find(|&y| y != x && sigs[x].is_subset(&sigs[y])).map(|y| (x, y)));
    if let Some((x, y)) = one_sided {
        return PropertyReport::violated(Witness::scenarios(
            scen(&[x, y]),
            "every member meeting the first d-set also meets the second",
        ));
    }
    let triple = exec::find_map_first_index(k, |x| {
        for y in 0..k {
            if y == x {
                continue;
            }
            for z in y + 1..k {
                if z == x {
                    continue;
                }
                // members meeting x that tell y and z apart
                let mut split = sigs[y].union(&sigs[z]);
                split.difference_with(&sigs[y].intersection(&sigs[z]));
                if !split.intersects(&sigs[x]) {
                    return Some((x, y, z));
                }
            }
        }
        None
    });
    PropertyReport::from_witness(triple.map(|(x, y, z)| {
        Witness::scenarios(scen(&[x, y, z]), "no member meeting the first d-set separates the other two")
    }))
}

/// Model 2″ dual form: with `𝓖` the dual, `𝓖` is `d`-union-free and `𝓖^d`
/// is Sperner and intersection-cancellative.
pub fn model2dbl_characterization_dual(family: &SetFamily, d: usize) -> PropertyReport {
    let dual = dual_family(family);
    is_d_union_free_with(&dual, d, Distinctness::ByIndex).and(|| {
        let unions = d_fold_unions(&dual, d);
        is_sperner(&unions).and(|| is_intersection_cancellative(&unions))
    })
}

/// `(A ∩ B ⊄ C, A ∩ C ⊄ B, B ∩ C ⊄ A)`.
pub fn triple_circle_profile(a: &ElementSet, b: &ElementSet, c: &ElementSet) -> (bool, bool, bool) {
    (!a.intersection(b).is_subset(c), !a.intersection(c).is_subset(b), !b.intersection(c).is_subset(a))
}

/// At least two of the three circle flags hold on every triple of
/// pairwise distinct members.
pub fn circle_condition(family: &SetFamily) -> PropertyReport {
    let distinct = family.distinct_indices();
    let sets = family.sets();
    let found = crate::bitset::find_combination(distinct.len(), 3, |c| {
        let (a, b, cc) = (distinct[c[0]], distinct[c[1]], distinct[c[2]]);
        let (p, q, r) = triple_circle_profile(&sets[a], &sets[b], &sets[cc]);
        ((p as u8 + q as u8 + r as u8) < 2).then(|| vec![a, b, cc])
    });
    PropertyReport::from_witness(found.map(|s| Witness::sets(s, "fewer than two circle flags hold on this triple")))
}
