//! Adaptive sessions: the questioner picks each query after seeing every
//! earlier answer, and the elements are told the answers to the queries
//! containing them only at the end, in no particular order.
//!
//! Strategies are state machines driven by [`run_session`]. Post-hoc
//! verification ([`verify_transcript`]) treats the finished transcript as a
//! query family with answers and applies the same knowledge semantics as the
//! non-adaptive models; elements never reason about the query order or the
//! strategy itself.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::{binomial, k_subsets, ElementSet};
use crate::error::{Error, Result};
use crate::exec;
use crate::family::SetFamily;
use crate::knowledge::{view_identifies, view_knows_status, Backend, KnowledgeView, Worlds};
use crate::models::{Clause, FailingCase, Model, ModelVerdict, COALITION_BUDGET};

/// Scenario count up to which verification compares precomputed world
/// signatures; larger instances use the transversal backend.
pub const VERIFY_ENUMERATE_LIMIT: u128 = 2_500;

/// Smallest YES-set the halving strategy still splits.
pub const SPLIT_MIN: usize = 6;

fn log2_ceil(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `64·d·⌈log₂ n⌉`, at least 1.
pub fn default_step_budget(n: usize, d: usize) -> usize {
    (64 * d * log2_ceil(n)).max(1)
}

/// `2d⌈log₂ n⌉ + 5d`, the halving strategy's query bound.
pub fn halving_bound(n: usize, d: usize) -> usize {
    2 * d * log2_ceil(n) + 5 * d
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub query: ElementSet,
    pub answer: bool,
}

/// A finished (or interrupted) session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TranscriptJson", into = "TranscriptJson")]
pub struct Transcript {
    pub n: usize,
    pub d: usize,
    pub steps: Vec<Step>,
    pub verdict: Option<ElementSet>,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    q: Vec<usize>,
    a: bool,
}

#[derive(Serialize, Deserialize)]
struct TranscriptJson {
    n: usize,
    d: usize,
    steps: Vec<StepJson>,
    verdict: Option<Vec<usize>>,
}

impl TryFrom<TranscriptJson> for Transcript {
    type Error = Error;

    fn try_from(j: TranscriptJson) -> Result<Self> {
        if j.n == 0 || j.d > j.n {
            return Err(Error::Malformed(format!("need 0 <= d <= n and n >= 1 (n={}, d={})", j.n, j.d)));
        }
        let steps = j
            .steps
            .into_iter()
            .map(|s| Ok(Step { query: ElementSet::try_from_elements(j.n, s.q)?, answer: s.a }))
            .collect::<Result<Vec<_>>>()?;
        let verdict = j.verdict.map(|v| ElementSet::try_from_elements(j.n, v)).transpose()?;
        Ok(Transcript { n: j.n, d: j.d, steps, verdict })
    }
}

impl From<Transcript> for TranscriptJson {
    fn from(t: Transcript) -> Self {
        TranscriptJson {
            n: t.n,
            d: t.d,
            steps: t.steps.into_iter().map(|s| StepJson { q: s.query.to_vec(), a: s.answer }).collect(),
            verdict: t.verdict.map(|v| v.to_vec()),
        }
    }
}

impl Transcript {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The asked queries as a family, in asking order.
    pub fn family(&self) -> SetFamily {
        SetFamily::new(self.n, self.steps.iter().map(|s| s.query.clone()).collect())
            .expect("transcript queries live in [n]")
    }

    pub fn answers(&self) -> Vec<bool> {
        self.steps.iter().map(|s| s.answer).collect()
    }

    /// Every recorded answer is what `defective` would produce.
    pub fn answers_match(&self, defective: &ElementSet) -> bool {
        self.steps.iter().all(|s| s.query.intersects(defective) == s.answer)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcript serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))
    }
}

pub enum Action {
    Ask(ElementSet),
    Finish(ElementSet),
}

/// A questioner: picks the next query from the answered history, or stops
/// with its claimed defective set.
pub trait Strategy {
    fn next_action(&mut self, history: &[Step]) -> Result<Action>;
}

/// Runs `strategy` against the defective set `oracle`.
///
/// Fails with [`Error::Strategy`] when a query leaves `[n]`, the verdict is
/// not a `d`-set, or the session outlives `step_budget` queries
/// (default [`default_step_budget`]).
pub fn run_session(
    strategy: &mut dyn Strategy,
    oracle: &ElementSet,
    n: usize,
    d: usize,
    step_budget: Option<usize>,
) -> Result<Transcript> {
    if oracle.universe() != n || oracle.len() != d {
        return Err(Error::BadScenario(format!("oracle {oracle:?} is not a {d}-subset of [{n}]")));
    }
    let budget = step_budget.unwrap_or_else(|| default_step_budget(n, d));
    let mut steps: Vec<Step> = Vec::new();
    loop {
        match strategy.next_action(&steps)? {
            Action::Ask(query) => {
                if query.universe() != n {
                    return Err(Error::Strategy(format!("query {query:?} is not a subset of [{n}]")));
                }
                if steps.len() == budget {
                    return Err(Error::Strategy(format!("step budget of {budget} queries exceeded")));
                }
                let answer = query.intersects(oracle);
                steps.push(Step { query, answer });
            }
            Action::Finish(verdict) => {
                if verdict.universe() != n || verdict.len() != d {
                    return Err(Error::Strategy(format!("verdict {verdict:?} is not a {d}-subset of [{n}]")));
                }
                return Ok(Transcript { n, d, steps, verdict: Some(verdict) });
            }
        }
    }
}

/// A batch of queries asked before the next decision, or the verdict.
enum Round {
    Ask(Vec<ElementSet>),
    Finish(ElementSet),
}

/// Strategies that decide a whole batch at a time.
trait Rounds {
    /// Called with the answered steps of the previous batch (empty at the start).
    fn next_round(&mut self, answered: &[Step]) -> Result<Round>;
}

/// Feeds a [`Rounds`] strategy one query at a time.
struct Batched<R> {
    inner: R,
    pending: VecDeque<ElementSet>,
    round_len: usize,
}

impl<R> Batched<R> {
    fn new(inner: R) -> Self {
        Batched { inner, pending: VecDeque::new(), round_len: 0 }
    }
}

impl<R: Rounds> Strategy for Batched<R> {
    fn next_action(&mut self, history: &[Step]) -> Result<Action> {
        loop {
            if let Some(q) = self.pending.pop_front() {
                return Ok(Action::Ask(q));
            }
            let answered = &history[history.len() - self.round_len.min(history.len())..];
            match self.inner.next_round(answered)? {
                Round::Ask(queries) => {
                    self.round_len = queries.len();
                    self.pending = queries.into();
                }
                Round::Finish(verdict) => return Ok(Action::Finish(verdict)),
            }
        }
    }
}

/// Bookkeeping of the halving strategy at a round boundary.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HalvingState {
    /// YES-answered sets still to be split.
    pub active: Vec<ElementSet>,
    /// YES-answered sets too small to split.
    pub leaves: Vec<ElementSet>,
    /// NO-answered queries, in asking order.
    pub no_pool: Vec<ElementSet>,
}

impl HalvingState {
    /// Leaves have 3–5 elements, are pairwise disjoint and at most `d`;
    /// with `truth` given, every defective lies in an active set or a leaf.
    pub fn check(&self, d: usize, truth: Option<&ElementSet>) -> std::result::Result<(), String> {
        if self.leaves.len() > d {
            return Err(format!("{} leaves exceed d = {d}", self.leaves.len()));
        }
        for (i, leaf) in self.leaves.iter().enumerate() {
            if !(3..SPLIT_MIN).contains(&leaf.len()) {
                return Err(format!("leaf {leaf:?} has size outside 3..=5"));
            }
            if let Some(other) = self.leaves[..i].iter().find(|o| o.intersects(leaf)) {
                return Err(format!("leaves {other:?} and {leaf:?} overlap"));
            }
        }
        if let Some(truth) = truth {
            let covered =
                self.active.iter().chain(&self.leaves).fold(ElementSet::empty(truth.universe()), |acc, s| acc.union(s));
            if !truth.is_subset(&covered) {
                return Err(format!("defectives {truth:?} escape the active sets and leaves"));
            }
        }
        Ok(())
    }
}

enum HalvingPhase {
    Start,
    Halving,
    Gadgets(Vec<usize>),
}

/// The Model-3 halving plan: at most `2d⌈log₂ n⌉ + 5d` queries and no
/// element can name a defective afterwards.
///
/// Round 1 asks the first half of the elements and the rest. Every YES-set
/// of at least six elements is split into two halves that are both asked;
/// smaller YES-sets become leaves. Finally each leaf element `a_i` is asked
/// together with one helper from each of two large disjoint NO-answered
/// queries `B` and `C`, and the verdict is the set of `a_i` answered YES.
struct HalvingPlan {
    n: usize,
    d: usize,
    order: Vec<usize>,
    phase: HalvingPhase,
    state: HalvingState,
    snapshots: Vec<HalvingState>,
}

impl HalvingPlan {
    fn new(n: usize, d: usize, seed: Option<u64>) -> Result<Self> {
        if d < 1 || d >= n {
            return Err(Error::BadParameter(format!("need 1 <= d < n (n={n}, d={d})")));
        }
        let mut order: Vec<usize> = (1..=n).collect();
        if let Some(seed) = seed {
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        Ok(HalvingPlan {
            n,
            d,
            order,
            phase: HalvingPhase::Start,
            state: HalvingState::default(),
            snapshots: Vec::new(),
        })
    }

    fn split(set: &ElementSet) -> [ElementSet; 2] {
        let elems = set.to_vec();
        let half = elems.len() / 2;
        let n = set.universe();
        [
            ElementSet::from_elements(n, elems[..half].iter().copied()),
            ElementSet::from_elements(n, elems[half..].iter().copied()),
        ]
    }

    /// The two largest disjoint NO-answered queries of size at least `5d`.
    fn helper_pools(&self) -> Result<(Vec<usize>, Vec<usize>)> {
        let need = 5 * self.d;
        let mut pool: Vec<&ElementSet> = self.state.no_pool.iter().filter(|q| q.len() >= need).collect();
        pool.sort_by_key(|q| std::cmp::Reverse(q.len()));
        for (i, b) in pool.iter().enumerate() {
            if let Some(c) = pool[i + 1..].iter().find(|c| !c.intersects(b)) {
                return Ok((b.to_vec(), c.to_vec()));
            }
        }
        Err(Error::InsufficientNoPool { needed: need })
    }
}

impl Rounds for HalvingPlan {
    fn next_round(&mut self, answered: &[Step]) -> Result<Round> {
        match &self.phase {
            HalvingPhase::Start => {
                if self.n / 2 < SPLIT_MIN {
                    return Err(Error::Strategy(format!(
                        "n = {} is too small for halving: the first halves need {SPLIT_MIN} elements",
                        self.n
                    )));
                }
                let half = self.n / 2;
                let first = ElementSet::from_elements(self.n, self.order[..half].iter().copied());
                let second = first.complement();
                self.phase = HalvingPhase::Halving;
                Ok(Round::Ask(vec![first, second]))
            }
            HalvingPhase::Halving => {
                self.state.active.clear();
                for step in answered {
                    if !step.answer {
                        self.state.no_pool.push(step.query.clone());
                    } else if step.query.len() >= SPLIT_MIN {
                        self.state.active.push(step.query.clone());
                    } else {
                        self.state.leaves.push(step.query.clone());
                    }
                }
                self.snapshots.push(self.state.clone());
                if !self.state.active.is_empty() {
                    let queries = self.state.active.iter().flat_map(Self::split).collect();
                    return Ok(Round::Ask(queries));
                }
                let (b, c) = self.helper_pools()?;
                let a: Vec<usize> =
                    self.state.leaves.iter().fold(ElementSet::empty(self.n), |acc, l| acc.union(l)).to_vec();
                let gadgets =
                    a.iter().enumerate().map(|(i, &x)| ElementSet::from_elements(self.n, [x, b[i], c[i]])).collect();
                self.phase = HalvingPhase::Gadgets(a);
                Ok(Round::Ask(gadgets))
            }
            HalvingPhase::Gadgets(a) => {
                let verdict = ElementSet::from_elements(
                    self.n,
                    a.iter().zip(answered).filter(|(_, s)| s.answer).map(|(&x, _)| x),
                );
                Ok(Round::Finish(verdict))
            }
        }
    }
}

/// [`HalvingPlan`] driven one query at a time.
pub struct Halving {
    driver: Batched<HalvingPlan>,
}

impl Halving {
    /// `seed` permutes the elements before the first split; `None` splits
    /// `{1..⌊n/2⌋}` from the rest.
    pub fn new(n: usize, d: usize, seed: Option<u64>) -> Result<Self> {
        Ok(Halving { driver: Batched::new(HalvingPlan::new(n, d, seed)?) })
    }

    /// State after each halving round.
    pub fn snapshots(&self) -> &[HalvingState] {
        &self.driver.inner.snapshots
    }

    pub fn state(&self) -> &HalvingState {
        &self.driver.inner.state
    }
}

impl Strategy for Halving {
    fn next_action(&mut self, history: &[Step]) -> Result<Action> {
        self.driver.next_action(history)
    }
}

/// Finds `D` by repeated binary searches for the smallest remaining defective.
///
/// Each search asks prefixes of the remaining candidates (`⌈log₂⌉` of their
/// count queries), then drops the found defective and every candidate before
/// it. Once the remaining candidates are exactly the missing defectives no
/// query is needed.
struct Finder {
    n: usize,
    d: usize,
    remaining: Vec<usize>,
    found: Vec<usize>,
    /// A defective lies in `remaining[lo..hi]`; none lies before `lo`.
    search: Option<(usize, usize)>,
    /// Split point of the query in flight.
    asked: Option<usize>,
}

impl Finder {
    fn new(n: usize, d: usize) -> Self {
        Finder { n, d, remaining: (1..=n).collect(), found: Vec::new(), search: None, asked: None }
    }

    /// The next query, or `None` once all `d` defectives are known.
    fn step(&mut self, answered: &[Step]) -> Option<ElementSet> {
        if let (Some(mid), Some((lo, hi)), Some(step)) = (self.asked.take(), self.search, answered.last()) {
            self.search = Some(if step.answer { (lo, mid) } else { (mid, hi) });
        }
        loop {
            let missing = self.d - self.found.len();
            if missing == 0 {
                return None;
            }
            match self.search {
                None if self.remaining.len() == missing => {
                    self.found.append(&mut self.remaining);
                }
                None => self.search = Some((0, self.remaining.len())),
                Some((lo, hi)) if hi - lo == 1 => {
                    self.found.push(self.remaining[lo]);
                    self.remaining.drain(..=lo);
                    self.search = None;
                }
                Some((lo, hi)) => {
                    let mid = (lo + hi) / 2;
                    self.asked = Some(mid);
                    return Some(ElementSet::from_elements(self.n, self.remaining[lo..mid].iter().copied()));
                }
            }
        }
    }

    fn defectives(&self) -> ElementSet {
        ElementSet::from_elements(self.n, self.found.iter().copied())
    }
}

/// Which announcement follows the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Announce {
    /// None: the bare search.
    Nothing,
    /// `{x}` for each defective `x`, then `[n] ∖ D`.
    SingletonsAndRest,
    /// `[n] ∖ D` only.
    Rest,
}

impl Announce {
    /// The announcement that makes `model` hold after the search.
    pub fn for_model(model: Model) -> Result<Self> {
        match model {
            Model::Model1 | Model::Model2Dbl => Ok(Announce::SingletonsAndRest),
            Model::Model2Prime => Ok(Announce::Rest),
            other => Err(Error::BadParameter(format!("no announcement strategy for {}", other.name()))),
        }
    }

    /// Extra queries the announcement costs.
    pub fn overhead(&self, d: usize) -> usize {
        match self {
            Announce::Nothing => 0,
            Announce::SingletonsAndRest => d + 1,
            Announce::Rest => 1,
        }
    }
}

struct FindThenAnnounce {
    finder: Finder,
    announce: Announce,
    announced: bool,
}

impl Rounds for FindThenAnnounce {
    fn next_round(&mut self, answered: &[Step]) -> Result<Round> {
        if !self.announced {
            if let Some(q) = self.finder.step(answered) {
                return Ok(Round::Ask(vec![q]));
            }
        }
        let d_set = self.finder.defectives();
        if self.announced || self.announce == Announce::Nothing {
            return Ok(Round::Finish(d_set));
        }
        self.announced = true;
        let n = self.finder.n;
        let mut queries: Vec<ElementSet> = Vec::new();
        if self.announce == Announce::SingletonsAndRest {
            queries.extend(d_set.iter().map(|x| ElementSet::from_elements(n, [x])));
        }
        queries.push(d_set.complement());
        Ok(Round::Ask(queries))
    }
}

/// Binary-search questioner finding `D` in at most `d⌈log₂ n⌉` queries.
pub fn baseline_find_defectives(n: usize, d: usize) -> Result<Box<dyn Strategy + Send>> {
    if d > n {
        return Err(Error::BadParameter(format!("d = {d} exceeds n = {n}")));
    }
    Ok(Box::new(Batched::new(FindThenAnnounce {
        finder: Finder::new(n, d),
        announce: Announce::Nothing,
        announced: false,
    })))
}

/// Finds `D` with [`baseline_find_defectives`], then announces it so that
/// `model` (1, 2′ or 2″) holds.
pub fn strategy_find_then_announce(model: Model, n: usize, d: usize) -> Result<Box<dyn Strategy + Send>> {
    let announce = Announce::for_model(model)?;
    if d < 1 || d >= n {
        return Err(Error::BadParameter(format!("need 1 <= d < n (n={n}, d={d})")));
    }
    Ok(Box::new(Batched::new(FindThenAnnounce { finder: Finder::new(n, d), announce, announced: false })))
}

/// Asks every singleton and reports the YES ones.
pub fn strategy_singletons(n: usize) -> Box<dyn Strategy + Send> {
    struct Singletons {
        n: usize,
        asked: bool,
    }
    impl Rounds for Singletons {
        fn next_round(&mut self, answered: &[Step]) -> Result<Round> {
            let n = self.n;
            if !self.asked {
                self.asked = true;
                return Ok(Round::Ask((1..=n).map(|x| ElementSet::from_elements(n, [x])).collect()));
            }
            let yes = answered.iter().filter(|s| s.answer).filter_map(|s| s.query.first());
            Ok(Round::Finish(ElementSet::from_elements(n, yes)))
        }
    }
    Box::new(Batched::new(Singletons { n, asked: false }))
}

/// Named strategies, as offered on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    HalvingModel3,
    FindAnnounce(Model),
    Singletons,
}

impl StrategyKind {
    pub const NAMES: [&'static str; 5] = [
        "halving-model3",
        "find-announce-model1",
        "find-announce-model2prime",
        "find-announce-model2dbl",
        "singletons",
    ];

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "halving-model3" => StrategyKind::HalvingModel3,
            "find-announce-model1" => StrategyKind::FindAnnounce(Model::Model1),
            "find-announce-model2prime" => StrategyKind::FindAnnounce(Model::Model2Prime),
            "find-announce-model2dbl" => StrategyKind::FindAnnounce(Model::Model2Dbl),
            "singletons" => StrategyKind::Singletons,
            _ => return None,
        })
    }

    /// The model the strategy is meant to satisfy.
    pub fn model(&self) -> Model {
        match self {
            StrategyKind::HalvingModel3 => Model::Model3,
            StrategyKind::FindAnnounce(m) => *m,
            StrategyKind::Singletons => Model::Model1,
        }
    }

    pub fn build(&self, n: usize, d: usize, seed: Option<u64>) -> Result<Box<dyn Strategy + Send>> {
        match self {
            StrategyKind::HalvingModel3 => Ok(Box::new(Halving::new(n, d, seed)?)),
            StrategyKind::FindAnnounce(m) => strategy_find_then_announce(*m, n, d),
            StrategyKind::Singletons => Ok(strategy_singletons(n)),
        }
    }

    /// One fresh strategy per oracle, sessions run in parallel, results in
    /// oracle order.
    pub fn simulate(&self, n: usize, d: usize, seed: Option<u64>, oracles: &[ElementSet]) -> Vec<Result<Transcript>> {
        exec::map(oracles, |oracle| {
            let mut strategy = self.build(n, d, seed)?;
            run_session(strategy.as_mut(), oracle, n, d, None)
        })
    }
}

/// `count` uniformly random `d`-subsets of `[n]`, reproducible per seed.
pub fn random_oracles(n: usize, d: usize, count: usize, seed: u64) -> Vec<ElementSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let picked = rand::seq::index::sample(&mut rng, n, d);
            ElementSet::from_elements(n, picked.into_iter().map(|i| i + 1))
        })
        .collect()
}

/// Answers knowledge questions about coalitions of a finished transcript
/// whose verdict matches every answer.
///
/// Small instances precompute every world's signature so each coalition is
/// a scan of `C(n, d)` bit comparisons; larger ones search transversals.
enum Judge<'a> {
    Worlds { worlds: Worlds<'a>, truth: usize },
    Views { family: &'a SetFamily, answers: &'a [bool], d: usize, truth: &'a ElementSet },
}

impl<'a> Judge<'a> {
    fn new(family: &'a SetFamily, answers: &'a [bool], d: usize, truth: &'a ElementSet) -> Result<Self> {
        if binomial(family.n(), d) <= VERIFY_ENUMERATE_LIMIT {
            let worlds = Worlds::new(family, d)?;
            let truth = worlds
                .scenario_index(truth)
                .ok_or_else(|| Error::BadScenario(format!("{truth:?} is not a {d}-set")))?;
            Ok(Judge::Worlds { worlds, truth })
        } else {
            Ok(Judge::Views { family, answers, d, truth })
        }
    }

    fn view(family: &SetFamily, answers: &[bool], coalition: &ElementSet) -> KnowledgeView {
        KnowledgeView::from_answers(family, coalition, answers).expect("sizes match")
    }

    fn identifies(&self, coalition: &ElementSet) -> bool {
        match self {
            Judge::Worlds { worlds, truth } => worlds.identifies(&worlds.visible_mask(coalition), *truth),
            Judge::Views { family, answers, d, truth } => {
                view_identifies(family, &Self::view(family, answers, coalition), *d, truth, Backend::Transversal)
            }
        }
    }

    fn knows_status(&self, coalition: &ElementSet, x: usize) -> bool {
        match self {
            Judge::Worlds { worlds, truth } => worlds.knows_status(x, &worlds.visible_mask(coalition), *truth),
            Judge::Views { family, answers, d, truth } => {
                view_knows_status(family, &Self::view(family, answers, coalition), *d, x, truth, Backend::Transversal)
            }
        }
    }

    /// A defective whose status the coalition can deduce.
    fn exposed(&self, coalition: &ElementSet) -> Option<usize> {
        match self {
            Judge::Worlds { worlds, truth } => {
                let mask = worlds.visible_mask(coalition);
                worlds.scenarios()[*truth].iter().find(|&y| worlds.knows_status(y, &mask, *truth))
            }
            Judge::Views { family, answers, d, truth } => {
                let view = Self::view(family, answers, coalition);
                truth.iter().find(|&y| view_knows_status(family, &view, *d, y, truth, Backend::Transversal))
            }
        }
    }
}

/// Checks what the elements learn from a finished transcript.
///
/// The verdict must be the only `d`-set consistent with all answers; then the
/// model's requirement is checked against the verdict as the true `D`:
/// Model 3 — no element can name a defective; Model 1 — every element knows
/// its status; Model 2′ — every non-defective pins `D`; Model 2 — every
/// element pins `D`; Model 2″ — every `d` elements together pin `D`;
/// Model 4(i, j) — every `j` elements pin `D` and no `i` elements can name a
/// defective.
pub fn verify_transcript(t: &Transcript, model: Model) -> Result<ModelVerdict> {
    let truth = t.verdict.clone().ok_or_else(|| Error::IncompleteTranscript("transcript has no verdict".into()))?;
    let (n, d) = (t.n, t.d);
    if truth.len() != d {
        return Err(Error::IncompleteTranscript(format!("verdict {truth:?} does not have {d} elements")));
    }
    let family = t.family();
    let answers = t.answers();
    let fail = |clause, observer: &ElementSet| {
        ModelVerdict::failed(FailingCase {
            clause,
            defective: truth.to_vec(),
            observer: observer.to_vec(),
            alternative: Vec::new(),
        })
    };

    if !t.answers_match(&truth) {
        return Ok(fail(Clause::WrongVerdict, &ElementSet::empty(n)));
    }
    // from here on the verdict's hit signature is the answer vector
    let judge = Judge::new(&family, &answers, d, &truth)?;
    if !judge.identifies(&ElementSet::full(n)) {
        return Ok(fail(Clause::WrongVerdict, &ElementSet::empty(n)));
    }

    let coalitions = |size: usize| -> Result<Vec<ElementSet>> {
        if binomial(n, size) > COALITION_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "C({n}, {size}) coalitions exceed the cap of {COALITION_BUDGET}"
            )));
        }
        Ok(k_subsets(n, size))
    };
    let singles: Vec<ElementSet> = (1..=n).map(|x| ElementSet::from_elements(n, [x])).collect();
    let not_identified = |s: &ElementSet| (!judge.identifies(s)).then(|| fail(Clause::NotIdentified, s));
    let exposing = |s: &ElementSet| judge.exposed(s).map(|y| fail(Clause::DefectiveExposed { element: y }, s));

    let failure = match model {
        Model::Model3 => exec::find_map_first(&singles, exposing),
        Model::Model1 => exec::find_map_first(&singles, |s| {
            let x = s.first().expect("singleton");
            (!judge.knows_status(s, x)).then(|| fail(Clause::StatusUnknown, s))
        }),
        Model::Model2 => exec::find_map_first(&singles, not_identified),
        Model::Model2Prime => exec::find_map_first(&singles, |s| {
            let x = s.first().expect("singleton");
            if truth.contains(x) {
                None
            } else {
                not_identified(s)
            }
        }),
        Model::Model2Dbl => exec::find_map_first(&coalitions(d)?, not_identified),
        Model::Model4 { i, j } => {
            if !(1 <= i && i < j && j <= n) {
                return Err(Error::BadParameter(format!("need 1 <= i < j <= n (i={i}, j={j}, n={n})")));
            }
            match exec::find_map_first(&coalitions(j)?, not_identified) {
                Some(f) => Some(f),
                None => exec::find_map_first(&coalitions(i)?, exposing),
            }
        }
    };
    Ok(failure.unwrap_or_else(ModelVerdict::solved))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> ElementSet {
        ElementSet::from_elements(n, xs.iter().copied())
    }

    #[test]
    fn singletons_session() {
        let t = run_session(strategy_singletons(4).as_mut(), &set(4, &[1, 3]), 4, 2, None).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.verdict, Some(set(4, &[1, 3])));
        assert!(verify_transcript(&t, Model::Model1).unwrap().solves);
    }

    #[test]
    fn step_budget_is_enforced() {
        let err = run_session(strategy_singletons(8).as_mut(), &set(8, &[2]), 8, 1, Some(3)).unwrap_err();
        assert!(matches!(err, Error::Strategy(_)));
    }

    #[test]
    fn baseline_examples() {
        let t = run_session(baseline_find_defectives(8, 1).unwrap().as_mut(), &set(8, &[6]), 8, 1, None).unwrap();
        assert!(t.len() <= 4);
        assert_eq!(t.verdict, Some(set(8, &[6])));
        let t = run_session(baseline_find_defectives(8, 2).unwrap().as_mut(), &set(8, &[1, 8]), 8, 2, None).unwrap();
        assert!(t.len() <= 8);
        assert_eq!(t.verdict, Some(set(8, &[1, 8])));
        let t =
            run_session(baseline_find_defectives(5, 5).unwrap().as_mut(), &ElementSet::full(5), 5, 5, None).unwrap();
        assert_eq!(t.len(), 0);
    }

    #[test]
    fn baseline_finds_every_pair() {
        for oracle in k_subsets(9, 2) {
            let t = run_session(baseline_find_defectives(9, 2).unwrap().as_mut(), &oracle, 9, 2, None).unwrap();
            assert_eq!(t.verdict.as_ref(), Some(&oracle));
            assert!(t.len() <= 2 * log2_ceil(9));
        }
    }

    #[test]
    fn halving_example() {
        let oracle = set(64, &[5, 40]);
        let mut h = Halving::new(64, 2, None).unwrap();
        let t = run_session(&mut h, &oracle, 64, 2, None).unwrap();
        assert_eq!(t.verdict, Some(oracle.clone()));
        assert!(t.len() <= halving_bound(64, 2));
        let leaves = &h.state().leaves;
        assert_eq!(leaves.len(), 2);
        assert!(leaves.iter().any(|l| l.contains(5)) && leaves.iter().any(|l| l.contains(40)));
        for snap in h.snapshots() {
            snap.check(2, Some(&oracle)).unwrap();
        }
        assert!(verify_transcript(&t, Model::Model3).unwrap().solves);
    }

    #[test]
    fn halving_small_n_fails_loudly() {
        let err = run_session(&mut Halving::new(20, 2, None).unwrap(), &set(20, &[1, 2]), 20, 2, None).unwrap_err();
        assert_eq!(err, Error::InsufficientNoPool { needed: 10 });
        assert!(matches!(
            run_session(&mut Halving::new(10, 2, None).unwrap(), &set(10, &[1, 2]), 10, 2, None),
            Err(Error::Strategy(_))
        ));
    }

    #[test]
    fn announcements() {
        let oracle = set(32, &[3, 17]);
        let t = StrategyKind::FindAnnounce(Model::Model2Prime)
            .simulate(32, 2, None, std::slice::from_ref(&oracle))
            .remove(0)
            .unwrap();
        let last = t.steps.last().unwrap();
        assert_eq!(last.query, oracle.complement());
        assert!(!last.answer);
        assert!(verify_transcript(&t, Model::Model2Prime).unwrap().solves);
        assert!(!verify_transcript(&t, Model::Model3).unwrap().solves);

        let t = StrategyKind::FindAnnounce(Model::Model1)
            .simulate(32, 2, None, std::slice::from_ref(&oracle))
            .remove(0)
            .unwrap();
        assert!(verify_transcript(&t, Model::Model1).unwrap().solves);
        let t = StrategyKind::FindAnnounce(Model::Model2Dbl).simulate(32, 2, None, &[oracle]).remove(0).unwrap();
        assert!(verify_transcript(&t, Model::Model2Dbl).unwrap().solves);
    }

    #[test]
    fn verification_rejects_wrong_or_missing_verdicts() {
        let mut t = run_session(strategy_singletons(4).as_mut(), &set(4, &[1, 3]), 4, 2, None).unwrap();
        t.verdict = Some(set(4, &[1, 2]));
        let v = verify_transcript(&t, Model::Model1).unwrap();
        assert_eq!(v.failing_case.unwrap().clause, Clause::WrongVerdict);
        t.verdict = None;
        assert!(matches!(verify_transcript(&t, Model::Model1), Err(Error::IncompleteTranscript(_))));
    }

    #[test]
    fn transcript_json_round_trip() {
        let t = run_session(strategy_singletons(3).as_mut(), &set(3, &[2]), 3, 1, None).unwrap();
        let json = t.to_json();
        assert_eq!(
            json,
            r#"{"n":3,"d":1,"steps":[{"q":[1],"a":false},{"q":[2],"a":true},{"q":[3],"a":false}],"verdict":[2]}"#
        );
        assert_eq!(Transcript::from_json(&json).unwrap(), t);
        assert!(Transcript::from_json(r#"{"n":3,"d":1,"steps":[{"q":[4],"a":true}],"verdict":null}"#).is_err());
    }

    #[test]
    fn random_oracles_are_reproducible() {
        let a = random_oracles(50, 3, 20, 7);
        assert_eq!(a, random_oracles(50, 3, 20, 7));
        assert!(a.iter().all(|o| o.len() == 3));
    }
}
