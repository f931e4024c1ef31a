//! Theorem sweeps: each theorem is checked as an executable statement over a
//! batch of families, usually as an equivalence between a semantic solver
//! and a combinatorial characterization.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::family::{complement_family, dual_family, is_cancellative, is_intersection_cancellative, SetFamily};
use crate::models::{
    circle_condition, model1_characterization, model1_transversal_form, model2dbl_characterization_dual,
    model2dbl_characterization_primal, model2prime_necessary, model2prime_sufficient, solves_model1_semantic,
    solves_model2_semantic, solves_model2dbl_semantic, solves_model2prime_semantic, solves_model4_semantic,
};
use crate::separation::{is_d_separating, is_d_union_free_with, Distinctness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// Model 1 semantics ⇔ dual `d`-cover-free ⇔ every restricted star has
    /// covering number above `d`.
    Model1d,
    /// Model 2″ semantics ⇔ primal form ⇔ dual form.
    Model2Dbl,
    /// Dual `(2, d)`-cover-free ⇒ Model 2′ ⇒ dual `d`-cover-free.
    Model2PrimeSandwich,
    /// Intersection-cancellative ⇔ the complement family is cancellative.
    IntCan,
    /// `d`-separating ⇔ the dual is `d`-union-free.
    DSepDual,
    /// Intersection-cancellative ⇔ every distinct triple has two circle flags.
    ClaimCanc,
    /// No family solves Model 2 when `1 < d < n`.
    Model2Impossible,
    /// No family solves Model 4(i, j) when `i ≥ d` or `j ≤ d`.
    Model4Impossible,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::Model1d,
        Theorem::Model2Dbl,
        Theorem::Model2PrimeSandwich,
        Theorem::IntCan,
        Theorem::DSepDual,
        Theorem::ClaimCanc,
        Theorem::Model2Impossible,
        Theorem::Model4Impossible,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Theorem::Model1d => "model1d",
            Theorem::Model2Dbl => "model2dbl",
            Theorem::Model2PrimeSandwich => "model2prime-sandwich",
            Theorem::IntCan => "intcan",
            Theorem::DSepDual => "dsepdual",
            Theorem::ClaimCanc => "claim-canc",
            Theorem::Model2Impossible => "model2-impossible",
            Theorem::Model4Impossible => "model4-impossible",
        }
    }

    pub fn parse(name: &str) -> Option<Theorem> {
        Theorem::ALL.into_iter().find(|t| t.name() == name)
    }

    /// Whether the statement involves `d`.
    pub fn uses_d(&self) -> bool {
        !matches!(self, Theorem::IntCan | Theorem::ClaimCanc)
    }
}

/// A case where the statement failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub family: SetFamily,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub theorem: &'static str,
    pub families: usize,
    /// Checked (family, parameter) combinations.
    pub cases: usize,
    pub mismatches: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<Mismatch>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    mismatches: usize,
    first: Option<(Option<usize>, String)>,
}

impl Tally {
    fn case(&mut self, d: Option<usize>, failure: Option<String>) {
        self.cases += 1;
        if let Some(detail) = failure {
            self.mismatches += 1;
            self.first.get_or_insert((d, detail));
        }
    }
}

fn flags(values: &[(&str, bool)]) -> String {
    values.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
}

fn agree(values: &[(&str, bool)]) -> Option<String> {
    let first = values[0].1;
    values.iter().any(|&(_, v)| v != first).then(|| flags(values))
}

fn check_family(theorem: Theorem, f: &SetFamily, ds: &[usize]) -> Result<Tally> {
    let n = f.n();
    let mut t = Tally::default();
    match theorem {
        Theorem::IntCan => t.case(
            None,
            agree(&[
                ("int_cancellative", is_intersection_cancellative(f).holds),
                ("complement_cancellative", is_cancellative(&complement_family(f)).holds),
            ]),
        ),
        Theorem::ClaimCanc => t.case(
            None,
            agree(&[
                ("int_cancellative", is_intersection_cancellative(f).holds),
                ("circle_condition", circle_condition(f).holds),
            ]),
        ),
        Theorem::DSepDual => {
            for &d in ds.iter().filter(|&&d| (1..=n).contains(&d)) {
                let dual = dual_family(f);
                t.case(
                    Some(d),
                    agree(&[
                        ("separating", is_d_separating(f, d)?.holds),
                        ("dual_union_free", is_d_union_free_with(&dual, d, Distinctness::ByIndex).holds),
                    ]),
                );
            }
        }
        Theorem::Model1d => {
            for &d in ds.iter().filter(|&&d| d >= 1 && d < n) {
                t.case(
                    Some(d),
                    agree(&[
                        ("semantic", solves_model1_semantic(f, d)?.solves),
                        ("dual_cover_free", model1_characterization(f, d).holds),
                        ("transversal_form", model1_transversal_form(f, d).holds),
                    ]),
                );
            }
        }
        Theorem::Model2Dbl => {
            for &d in ds.iter().filter(|&&d| d >= 1 && d < n) {
                t.case(
                    Some(d),
                    agree(&[
                        ("semantic", solves_model2dbl_semantic(f, d)?.solves),
                        ("primal", model2dbl_characterization_primal(f, d).holds),
                        ("dual", model2dbl_characterization_dual(f, d).holds),
                    ]),
                );
            }
        }
        Theorem::Model2PrimeSandwich => {
            // below d + 2 elements the dual (2, d)-cover-free condition is vacuous
            for &d in ds.iter().filter(|&&d| d >= 1 && d + 2 <= n) {
                let sufficient = model2prime_sufficient(f, d).holds;
                let semantic = solves_model2prime_semantic(f, d)?.solves;
                let necessary = model2prime_necessary(f, d).holds;
                let broken = (sufficient && !semantic) || (semantic && !necessary);
                t.case(
                    Some(d),
                    broken.then(|| {
                        flags(&[
                            ("dual_2d_cover_free", sufficient),
                            ("semantic", semantic),
                            ("dual_d_cover_free", necessary),
                        ])
                    }),
                );
            }
        }
        Theorem::Model2Impossible => {
            for &d in ds.iter().filter(|&&d| d > 1 && d < n) {
                let solves = solves_model2_semantic(f, d)?.solves;
                t.case(Some(d), solves.then(|| "family solves Model 2".to_string()));
            }
        }
        Theorem::Model4Impossible => {
            for &d in ds.iter().filter(|&&d| d >= 1 && d < n) {
                for i in 1..=n {
                    for j in i + 1..=n {
                        if i < d && j > d {
                            continue;
                        }
                        let solves = solves_model4_semantic(f, d, i, j)?.solves;
                        t.case(Some(d), solves.then(|| format!("family solves Model 4 with i={i}, j={j}")));
                    }
                }
            }
        }
    }
    Ok(t)
}

/// Checks `theorem` on every family for every applicable `d` in `ds`.
///
/// Families are checked in parallel; counts and the first mismatch (in
/// family order) do not depend on the execution mode.
pub fn run_sweep(theorem: Theorem, families: &[SetFamily], ds: &[usize]) -> Result<SweepReport> {
    if theorem.uses_d() && ds.is_empty() {
        return Err(Error::BadParameter(format!("{} needs at least one d", theorem.name())));
    }
    let tallies = exec::map(families, |f| check_family(theorem, f, ds));
    let mut report = SweepReport {
        theorem: theorem.name(),
        families: families.len(),
        cases: 0,
        mismatches: 0,
        first_mismatch: None,
    };
    for (f, tally) in families.iter().zip(tallies) {
        let tally = tally?;
        report.cases += tally.cases;
        report.mismatches += tally.mismatches;
        if report.first_mismatch.is_none() {
            report.first_mismatch = tally.first.map(|(d, detail)| Mismatch { family: f.clone(), d, detail });
        }
    }
    Ok(report)
}
