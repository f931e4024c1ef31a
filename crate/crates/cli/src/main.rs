//! `cgt`: check family properties, build constructions, simulate adaptive
//! sessions, run theorem sweeps and re-verify transcripts.
//!
//! Every command prints one JSON document on stdout and a short human
//! summary on stderr. Exit codes: 0 success, 1 property or verification
//! false, 2 usage error or malformed input, 3 construction / strategy /
//! budget failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use cgt_core::adaptive::{halving_bound, random_oracles, verify_transcript, StrategyKind, Transcript};
use cgt_core::exec::{self, Exec};
use cgt_core::family::{is_cancellative, is_intersection_cancellative, is_intersection_closed, is_sperner};
use cgt_core::generators::{EnumBudget, SweepSpec};
use cgt_core::hypergraph::{
    construct_girth_hypergraph, model3_construction, validate_hypergraph, validate_model3_family,
};
use cgt_core::models::{solves_semantic, Model};
use cgt_core::separation::{
    binary_separating_family, is_d_cover_free, is_d_separating, is_d_union_free, is_r_d_cover_free,
};
use cgt_core::sweep::{run_sweep, Theorem};
use cgt_core::{ElementSet, Error, SetFamily};

#[derive(Parser)]
#[command(name = "cgt", version, about = "Group testing with element-level knowledge")]
struct Cli {
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a property of a family file.
    Check {
        family: PathBuf,
        /// sperner, cancellative, int-cancellative, int-closed, d-separating,
        /// d-union-free, d-cover-free, rd-cover-free, model1, model2,
        /// model2prime, model2dbl, model3, model4
        property: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
    },
    /// Build a family and write it as JSON.
    Construct {
        kind: ConstructKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 5)]
        g: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = cgt_core::hypergraph::DEFAULT_RESTARTS)]
        restarts: usize,
        /// Output file; the family is also part of the stdout payload.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run adaptive sessions and verify each transcript.
    Simulate {
        /// halving-model3, find-announce-model1, find-announce-model2prime,
        /// find-announce-model2dbl, singletons
        strategy: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Defective set, comma separated; default {1..d}.
        #[arg(long, value_delimiter = ',', conflicts_with = "random")]
        oracle: Option<Vec<usize>>,
        /// Number of random defective sets.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Let the seed also permute the elements before the first split.
        #[arg(long)]
        permute: bool,
        /// Transcript file (an object for one session, an array otherwise).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a theorem over enumerated or random families.
    Sweep {
        /// model1d, model2dbl, model2prime-sandwich, intcan, dsepdual, claim-canc, model2-impossible,
        /// model4-impossible
        theorem: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        max_sets: usize,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        d: Vec<usize>,
        /// Random families per n instead of exhaustive enumeration.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-verify transcripts (object or array) against a model.
    Verify {
        transcript: PathBuf,
        /// model1, model2, model2prime, model2dbl, model3, model4
        model: String,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    BinarySeparating,
    GirthHypergraph,
    Model3,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BadParameter(_)
            | Error::ElementOutOfRange { .. }
            | Error::BadScenario(_)
            | Error::EmptyMemberSet { .. }
            | Error::EmptyEdge { .. }
            | Error::Malformed(_)
            | Error::IncompleteTranscript(_) => 2,
            Error::BudgetExceeded(_)
            | Error::ConstructionFailed { .. }
            | Error::SearchFailed { .. }
            | Error::InsufficientNoPool { .. }
            | Error::Strategy(_) => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

/// A finished command: payload, human summary, and whether the checked
/// statement held.
struct Outcome {
    payload: Value,
    summary: String,
    ok: bool,
}

type CmdResult = Result<Outcome, Failure>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload serializes")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure { code: 3, message: format!("cannot write {}: {e}", path.display()) })
}

fn need(value: Option<usize>, flag: &str, what: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::usage(format!("{what} needs --{flag}")))
}

fn parse_model(name: &str, i: Option<usize>, j: Option<usize>) -> Result<Model, Failure> {
    Ok(match name {
        "model1" => Model::Model1,
        "model2" => Model::Model2,
        "model2prime" => Model::Model2Prime,
        "model2dbl" => Model::Model2Dbl,
        "model3" => Model::Model3,
        "model4" => Model::Model4 { i: need(i, "i", "model4")?, j: need(j, "j", "model4")? },
        other => return Err(Failure::usage(format!("unknown model '{other}'"))),
    })
}

fn cmd_check(
    path: &Path,
    property: &str,
    d: Option<usize>,
    r: Option<usize>,
    i: Option<usize>,
    j: Option<usize>,
) -> CmdResult {
    const PROPERTIES: [&str; 8] = [
        "sperner",
        "cancellative",
        "int-cancellative",
        "int-closed",
        "d-separating",
        "d-union-free",
        "d-cover-free",
        "rd-cover-free",
    ];
    const MODELS: [&str; 6] = ["model1", "model2", "model2prime", "model2dbl", "model3", "model4"];
    let model = if PROPERTIES.contains(&property) {
        None
    } else if MODELS.contains(&property) {
        Some(parse_model(property, i, j)?)
    } else {
        return Err(Failure::usage(format!(
            "unknown property '{property}' (expected one of {}, {})",
            PROPERTIES.join(", "),
            MODELS.join(", ")
        )));
    };
    let family = SetFamily::from_json(&read(path)?)?;
    let d_of = || need(d, "d", property);
    let (payload, ok) = match (property, model) {
        (_, Some(model)) => {
            let verdict = solves_semantic(&family, d_of()?, model)?;
            (to_value(&verdict), verdict.solves)
        }
        (name, None) => {
            let report = match name {
                "sperner" => is_sperner(&family),
                "cancellative" => is_cancellative(&family),
                "int-cancellative" => is_intersection_cancellative(&family),
                "int-closed" => is_intersection_closed(&family),
                "d-separating" => is_d_separating(&family, d_of()?)?,
                "d-union-free" => is_d_union_free(&family, positive(d_of()?, "d")?),
                "d-cover-free" => is_d_cover_free(&family, positive(d_of()?, "d")?),
                _ => is_r_d_cover_free(&family, positive(need(r, "r", name)?, "r")?, positive(d_of()?, "d")?),
            };
            (to_value(&report), report.holds)
        }
    };
    Ok(Outcome { summary: format!("{property}: {}", if ok { "holds" } else { "fails" }), payload, ok })
}

fn positive(v: usize, flag: &str) -> Result<usize, Failure> {
    if v == 0 {
        return Err(Failure::usage(format!("--{flag} must be positive")));
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    kind: ConstructKind,
    n: usize,
    r: Option<usize>,
    d: Option<usize>,
    g: usize,
    seed: u64,
    restarts: usize,
    out: Option<&Path>,
) -> CmdResult {
    let (name, family, validation) = match kind {
        ConstructKind::BinarySeparating => {
            let f = binary_separating_family(n)?;
            let v = is_d_separating(&f, 1)?;
            ("binary-separating", f, v)
        }
        ConstructKind::GirthHypergraph => {
            let (r, d) = (need(r, "r", "girth-hypergraph")?, need(d, "d", "girth-hypergraph")?);
            let f = construct_girth_hypergraph(n, r, d, g, seed, restarts)?;
            let v = validate_hypergraph(&f, r, d, g);
            ("girth-hypergraph", f, v)
        }
        ConstructKind::Model3 => {
            let d = need(d, "d", "model3")?;
            let f = model3_construction(n, d, seed)?;
            let v = validate_model3_family(&f, d);
            ("model3", f, v)
        }
    };
    if let Some(path) = out {
        write(path, &family.to_json())?;
    }
    let summary = format!(
        "{name}: {} sets over [{}], validation {}",
        family.len(),
        family.n(),
        if validation.holds { "ok" } else { "FAILED" }
    );
    let ok = validation.holds;
    let payload = json!({
        "kind": name,
        "sets": family.len(),
        "family": family,
        "validation": validation,
        "out": out.map(|p| p.display().to_string()),
    });
    // a construction that fails its own validation is an internal failure
    if !ok {
        return Err(Failure { code: 3, message: format!("{summary}; payload: {payload}") });
    }
    Ok(Outcome { payload, summary, ok })
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    strategy: &str,
    n: usize,
    d: usize,
    oracle: Option<Vec<usize>>,
    random: Option<usize>,
    seed: u64,
    permute: bool,
    out: Option<&Path>,
) -> CmdResult {
    let kind = StrategyKind::parse(strategy).ok_or_else(|| {
        Failure::usage(format!("unknown strategy '{strategy}' (expected one of {})", StrategyKind::NAMES.join(", ")))
    })?;
    if n == 0 || d > n {
        return Err(Failure::usage(format!("need n >= 1 and d <= n (n={n}, d={d})")));
    }
    let oracles = match (oracle, random) {
        (_, Some(k)) => random_oracles(n, d, k, seed),
        (Some(list), None) => {
            let o = ElementSet::try_from_elements(n, list)?;
            if o.len() != d {
                return Err(Failure::usage(format!("oracle {o:?} does not have {d} elements")));
            }
            vec![o]
        }
        (None, None) => vec![ElementSet::prefix(n, d)],
    };
    let model = kind.model();
    let transcripts = kind
        .simulate(n, d, permute.then_some(seed), &oracles)
        .into_iter()
        .collect::<Result<Vec<Transcript>, Error>>()?;
    let verdicts =
        exec::map(&transcripts, |t| verify_transcript(t, model)).into_iter().collect::<Result<Vec<_>, Error>>()?;

    if let Some(path) = out {
        let text = if transcripts.len() == 1 {
            transcripts[0].to_json()
        } else {
            serde_json::to_string(&transcripts).expect("transcripts serialize")
        };
        write(path, &text)?;
    }
    let sessions: Vec<Value> = transcripts
        .iter()
        .zip(&oracles)
        .zip(&verdicts)
        .map(|((t, o), v)| {
            json!({
                "oracle": o.to_vec(),
                "queries": t.len(),
                "verdict": t.verdict.as_ref().map(ElementSet::to_vec),
                "correct": t.verdict.as_ref() == Some(o),
                "verified": v.solves,
            })
        })
        .collect();
    let max_queries = transcripts.iter().map(Transcript::len).max().unwrap_or(0);
    let all_correct = transcripts.iter().zip(&oracles).all(|(t, o)| t.verdict.as_ref() == Some(o));
    let all_verified = verdicts.iter().all(|v| v.solves);
    let bound = (kind == StrategyKind::HalvingModel3).then(|| halving_bound(n, d));
    let ok = all_correct && all_verified && bound.is_none_or(|b| max_queries <= b);
    let payload = json!({
        "strategy": strategy,
        "model": model.name(),
        "n": n,
        "d": d,
        "runs": transcripts.len(),
        "max_queries": max_queries,
        "query_bound": bound,
        "all_correct": all_correct,
        "all_verified": all_verified,
        "sessions": sessions,
        "first_failure": verdicts.iter().find(|v| !v.solves),
    });
    let summary = format!(
        "{strategy}: {} session(s), at most {max_queries} queries, verdicts {}, {} {}",
        transcripts.len(),
        if all_correct { "correct" } else { "WRONG" },
        model.name(),
        if all_verified { "verified" } else { "NOT verified" },
    );
    Ok(Outcome { payload, summary, ok })
}

fn cmd_sweep(
    theorem: &str,
    ns: Vec<usize>,
    max_sets: usize,
    ds: Vec<usize>,
    random: Option<usize>,
    seed: u64,
) -> CmdResult {
    let theorem = Theorem::parse(theorem).ok_or_else(|| {
        let names: Vec<&str> = Theorem::ALL.iter().map(Theorem::name).collect();
        Failure::usage(format!("unknown theorem '{theorem}' (expected one of {})", names.join(", ")))
    })?;
    let spec = match random {
        Some(count) => SweepSpec::random(ns, max_sets, ds, count, seed),
        None => SweepSpec::exhaustive(ns, max_sets, ds),
    };
    let families = spec.families(EnumBudget::from_env()?)?;
    let report = run_sweep(theorem, &families, &spec.ds)?;
    let summary = format!(
        "{}: {} families, {} cases, {} mismatches",
        report.theorem, report.families, report.cases, report.mismatches
    );
    Ok(Outcome { ok: report.passed(), payload: to_value(&report), summary })
}

fn cmd_verify(path: &Path, model: &str, i: Option<usize>, j: Option<usize>) -> CmdResult {
    let model = parse_model(model, i, j)?;
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("malformed transcript: {e}")))?;
    let single = !value.is_array();
    let transcripts: Vec<Transcript> = if single {
        vec![serde_json::from_value(value).map_err(|e| Failure::usage(format!("malformed transcript: {e}")))?]
    } else {
        serde_json::from_value(value).map_err(|e| Failure::usage(format!("malformed transcript: {e}")))?
    };
    let verdicts =
        exec::map(&transcripts, |t| verify_transcript(t, model)).into_iter().collect::<Result<Vec<_>, Error>>()?;
    let ok = verdicts.iter().all(|v| v.solves);
    let payload = if single { to_value(&verdicts[0]) } else { to_value(&verdicts) };
    let passed = verdicts.iter().filter(|v| v.solves).count();
    let summary = format!("{}: {passed}/{} transcript(s) verified", model.name(), verdicts.len());
    Ok(Outcome { payload, summary, ok })
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Check { family, property, d, r, i, j } => cmd_check(&family, &property, d, r, i, j),
        Command::Construct { kind, n, r, d, g, seed, restarts, out } => {
            cmd_construct(kind, n, r, d, g, seed, restarts, out.as_deref())
        }
        Command::Simulate { strategy, n, d, oracle, random, seed, permute, out } => {
            cmd_simulate(&strategy, n, d, oracle, random, seed, permute, out.as_deref())
        }
        Command::Sweep { theorem, n, max_sets, d, random, seed } => cmd_sweep(&theorem, n, max_sets, d, random, seed),
        Command::Verify { transcript, model, i, j } => cmd_verify(&transcript, &model, i, j),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = match cli.jobs {
        Some(0) => {
            eprintln!("error: --jobs must be positive");
            println!("{}", json!({ "error": "--jobs must be positive" }));
            return ExitCode::from(2);
        }
        Some(1) => Exec::Sequential,
        Some(jobs) => {
            if let Err(e) = exec::configure_threads(jobs) {
                eprintln!("warning: could not size the thread pool: {e}");
            }
            Exec::Parallel
        }
        None => Exec::Parallel,
    };
    match exec::scoped(mode, || dispatch(cli.command)) {
        Ok(outcome) => {
            println!("{}", outcome.payload);
            eprintln!("{}", outcome.summary);
            ExitCode::from(if outcome.ok { 0 } else { 1 })
        }
        Err(failure) => {
            println!("{}", json!({ "error": failure.message, "exit_code": failure.code }));
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
