//! bailey-lab: seeded, exact verification runs from the command line.
//!
//! Commands dispatch to the library's checks and print one report per
//! trial, machine format by default:
//!
//!   invert-check      both products of the two matrix blocks equal I
//!   pair-check        a sampled pair satisfies its defining sums
//!   lemma-check       one lemma step preserves the pair relation
//!   chain             iterated lemma steps, every link re-checked
//!   reduce-classical  rank-1 entries against the classical closed forms
//!
//! Parameters are sampled from --seed (default 0) unless given
//! explicitly (--q/--a/--x, and --rho/--sigma or --alpha/--beta for
//! lemma steps). Explicit parameters that are inadmissible on the box
//! are a report verdict (exit 2), not a crash; malformed values are a
//! usage error (exit 3).
//!
//! Exit codes: 0 every report passed; 1 at least one report failed;
//! 2 no failures but at least one report inadmissible (or the engine
//! stopped on a pole); 3 usage error, nothing was checked. Failure
//! dominates inadmissibility.
//!
//! A --config file holds flat `key = value` lines mirroring the long
//! flag names ('#' starts a comment; `step` may repeat). Flags given
//! on the command line override file values; file keys that do not
//! apply to the command are ignored so one file can serve several
//! commands, while inapplicable command-line flags are usage errors.
//!
//! Output is deterministic: identical argv (and config contents)
//! yields byte-identical stdout, whatever --jobs or BAILEY_LAB_JOBS
//! says. Timing goes to stderr only.
//!
//! # Edge cases
//! * --trials is ignored (one report) when all parameters are
//!   explicit, since every trial would be identical;
//! * --rank may be omitted when --box fixes it; when both are given
//!   they must agree;
//! * sampler exhaustion (no admissible draw within the attempt
//!   budget) aborts with exit 2 and a message on stderr.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bailey_core::bailey::{
    unit_pair, BaileyPair, LemmaParams, LemmaParamsA, LemmaParamsC, SequenceOracle,
};
use bailey_core::error::Error;
use bailey_core::lattice::{IndexBox, MultiIndex};
use bailey_core::qfield::Rational;
use bailey_core::transforms::{admissibility, Group, GroupParamsA, GroupParamsC, Params};
use bailey_core::verify::{
    check_bailey_pair, check_chain, check_classical_reduction, check_inversion, check_lemma,
    ParamSampler, Report, Verdict,
};
use clap::{Args, Parser, Subcommand};

// ---------------------------------------------------------------------------
// Argument surface
// ---------------------------------------------------------------------------

/// Exact verification of the box-truncated transform and lemma
/// identities, with seeded sampling and stable exit codes.
#[derive(Parser)]
#[command(name = "bailey-lab", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the two matrix blocks are two-sided inverses on a box.
    InvertCheck(RawArgs),
    /// Check a sampled pair against its defining sums on a box.
    PairCheck(RawArgs),
    /// Check that one lemma step maps a pair to a pair.
    LemmaCheck(RawArgs),
    /// Run a chain of lemma steps from the unit seed, checking every link.
    Chain(RawArgs),
    /// Compare rank-1 entries with the classical closed forms.
    ReduceClassical(RawArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::InvertCheck(_) => "invert-check",
            Command::PairCheck(_) => "pair-check",
            Command::LemmaCheck(_) => "lemma-check",
            Command::Chain(_) => "chain",
            Command::ReduceClassical(_) => "reduce-classical",
        }
    }

    fn raw(&self) -> &RawArgs {
        match self {
            Command::InvertCheck(raw)
            | Command::PairCheck(raw)
            | Command::LemmaCheck(raw)
            | Command::Chain(raw)
            | Command::ReduceClassical(raw) => raw,
        }
    }
}

/// Every value arrives as a string and is parsed in one place, so flag
/// and config-file values get identical validation and messages.
#[derive(Args, Default, Clone)]
struct RawArgs {
    /// Family: A or C.
    #[arg(long)]
    group: Option<String>,
    /// Rank (number of box components); inferred from --box if omitted.
    #[arg(long)]
    rank: Option<String>,
    /// Box upper corner, comma-separated nonnegative integers.
    #[arg(long = "box")]
    bbox: Option<String>,
    /// Independent sampled trials (default 1).
    #[arg(long)]
    trials: Option<String>,
    /// Sampling seed (default 0); trial t uses seed + t.
    #[arg(long)]
    seed: Option<String>,
    /// Explicit base value, e.g. 1/2.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Explicit family-A parameter a.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Explicit parameter vector, e.g. 1/3,2/5.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Explicit family-A lemma parameter (with --sigma).
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<String>,
    /// Explicit family-A lemma parameter (with --rho).
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    /// Explicit family-C lemma parameter (with --beta).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Explicit family-C lemma parameter (with --alpha).
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Grid bound for reduce-classical (default 6).
    #[arg(long)]
    bound: Option<String>,
    /// Chain step, e.g. rho=2,sigma=3 (A) or alpha=2,beta=3 (C); repeatable.
    #[arg(long = "step")]
    steps: Vec<String>,
    /// Report format: machine (default) or human.
    #[arg(long)]
    format: Option<String>,
    /// Write reports to this file instead of stdout.
    #[arg(long)]
    output: Option<String>,
    /// Flat key = value file supplying defaults for the flags above.
    #[arg(long)]
    config: Option<String>,
    /// Worker threads (default: all cores; 1 forces serial). Falls
    /// back to the BAILEY_LAB_JOBS environment variable.
    #[arg(long)]
    jobs: Option<String>,
}

// ---------------------------------------------------------------------------
// Errors and exit codes
// ---------------------------------------------------------------------------

enum RunError {
    /// Bad invocation: message to stderr, exit 3, nothing checked.
    Usage(String),
    /// The engine stopped (pole mid-run, sampler exhaustion): exit 2.
    Engine(String),
}

fn usage<T>(msg: impl Into<String>) -> Result<T, RunError> {
    Err(RunError::Usage(msg.into()))
}

fn exit_for(reports: &[Report]) -> u8 {
    if reports.iter().any(|r| r.verdict() == Verdict::Fail) {
        1
    } else if reports.iter().any(|r| r.verdict() == Verdict::Inadmissible) {
        2
    } else {
        0
    }
}

// ---------------------------------------------------------------------------
// Option resolution: config file, merging, typed parsing
// ---------------------------------------------------------------------------

const CONFIG_KEYS: &[&str] = &[
    "group", "rank", "box", "trials", "seed", "q", "a", "x", "rho", "sigma", "alpha", "beta",
    "bound", "step", "format", "output", "jobs",
];

/// Parsed config file: single-valued keys plus ordered step lines.
struct ConfigFile {
    values: BTreeMap<String, String>,
    steps: Vec<String>,
}

fn load_config(path: &str) -> Result<ConfigFile, RunError> {
    let text = fs::read_to_string(path)
        .map_err(|e| RunError::Usage(format!("cannot read config file {path}: {e}")))?;
    let mut values = BTreeMap::new();
    let mut steps = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return usage(format!(
                "config file {path} line {}: expected key = value, got {line:?}",
                lineno + 1
            ));
        };
        let key = key.trim();
        let value = value.trim();
        if !CONFIG_KEYS.contains(&key) {
            return usage(format!(
                "config file {path} line {}: unknown key {key:?}",
                lineno + 1
            ));
        }
        if key == "step" {
            steps.push(value.to_string());
        } else {
            values.insert(key.to_string(), value.to_string());
        }
    }
    Ok(ConfigFile { values, steps })
}

/// Flag values override config-file values; command-line --step lists
/// replace config step lists entirely.
struct Options {
    raw: RawArgs,
}

impl Options {
    fn merge(raw: &RawArgs) -> Result<Options, RunError> {
        let mut merged = raw.clone();
        if let Some(path) = &raw.config {
            let file = load_config(path)?;
            let fill = |slot: &mut Option<String>, key: &str| {
                if slot.is_none() {
                    if let Some(v) = file.values.get(key) {
                        *slot = Some(v.clone());
                    }
                }
            };
            fill(&mut merged.group, "group");
            fill(&mut merged.rank, "rank");
            fill(&mut merged.bbox, "box");
            fill(&mut merged.trials, "trials");
            fill(&mut merged.seed, "seed");
            fill(&mut merged.q, "q");
            fill(&mut merged.a, "a");
            fill(&mut merged.x, "x");
            fill(&mut merged.rho, "rho");
            fill(&mut merged.sigma, "sigma");
            fill(&mut merged.alpha, "alpha");
            fill(&mut merged.beta, "beta");
            fill(&mut merged.bound, "bound");
            fill(&mut merged.format, "format");
            fill(&mut merged.output, "output");
            fill(&mut merged.jobs, "jobs");
            if merged.steps.is_empty() {
                merged.steps = file.steps;
            }
        }
        Ok(Options { raw: merged })
    }

    /// Flags that were supplied but mean nothing to this command.
    fn reject_inapplicable(&self, command: &str, given_on_cli: &RawArgs) -> Result<(), RunError> {
        let lemma = command == "lemma-check";
        let chain = command == "chain";
        let classical = command == "reduce-classical";
        let checks: [(&str, bool, bool); 8] = [
            ("--rho", given_on_cli.rho.is_some(), lemma || chain),
            ("--sigma", given_on_cli.sigma.is_some(), lemma || chain),
            ("--alpha", given_on_cli.alpha.is_some(), lemma || chain),
            ("--beta", given_on_cli.beta.is_some(), lemma || chain),
            ("--step", !given_on_cli.steps.is_empty(), chain),
            ("--bound", given_on_cli.bound.is_some(), classical),
            ("--box", given_on_cli.bbox.is_some(), !classical),
            ("--rank", given_on_cli.rank.is_some(), !classical),
        ];
        for (flag, given, applies) in checks {
            if given && !applies {
                return usage(format!("{flag} does not apply to {command}"));
            }
        }
        if classical {
            if given_on_cli.group.is_some() && given_on_cli.group.as_deref() != Some("A") {
                return usage("reduce-classical is defined for family A only");
            }
            if given_on_cli.x.is_some() {
                return usage("--x does not apply to reduce-classical (entries are ratio-free at rank 1)");
            }
        }
        Ok(())
    }

    fn group(&self) -> Result<Group, RunError> {
        match self.raw.group.as_deref() {
            Some("A") => Ok(Group::A),
            Some("C") => Ok(Group::C),
            Some(other) => usage(format!("--group must be A or C, got {other:?}")),
            None => usage("--group is required (A or C)"),
        }
    }

    /// Box from --box, cross-checked against --rank when both appear.
    fn bbox(&self) -> Result<IndexBox, RunError> {
        let rank = match self.raw.rank.as_deref() {
            None => None,
            Some(s) => {
                let r: usize = s
                    .parse()
                    .map_err(|_| RunError::Usage(format!("--rank expects an integer, got {s:?}")))?;
                if r == 0 {
                    return usage("--rank must be at least 1");
                }
                Some(r)
            }
        };
        let Some(spec) = self.raw.bbox.as_deref() else {
            return usage("--box is required (comma-separated nonnegative integers)");
        };
        let mut upper = Vec::new();
        for part in spec.split(',') {
            let n: i64 = part.trim().parse().map_err(|_| {
                RunError::Usage(format!("--box component {part:?} is not an integer"))
            })?;
            if n < 0 {
                return usage(format!("--box component {n} is negative"));
            }
            upper.push(n);
        }
        if let Some(r) = rank {
            if upper.len() != r {
                return usage(format!(
                    "--rank {r} disagrees with --box {spec} ({} components)",
                    upper.len()
                ));
            }
        }
        let upper = MultiIndex::new(upper)
            .map_err(|e| RunError::Usage(format!("--box is invalid: {e}")))?;
        Ok(IndexBox::new(upper))
    }

    fn trials(&self) -> Result<u64, RunError> {
        match self.raw.trials.as_deref() {
            None => Ok(1),
            Some(s) => {
                let t: u64 = s.parse().map_err(|_| {
                    RunError::Usage(format!("--trials expects an integer, got {s:?}"))
                })?;
                if t == 0 {
                    return usage("--trials must be at least 1");
                }
                Ok(t)
            }
        }
    }

    fn seed(&self) -> Result<u64, RunError> {
        match self.raw.seed.as_deref() {
            None => Ok(0),
            Some(s) => s
                .parse()
                .map_err(|_| RunError::Usage(format!("--seed expects an integer, got {s:?}"))),
        }
    }

    fn bound(&self) -> Result<i64, RunError> {
        match self.raw.bound.as_deref() {
            None => Ok(6),
            Some(s) => {
                let b: i64 = s.parse().map_err(|_| {
                    RunError::Usage(format!("--bound expects an integer, got {s:?}"))
                })?;
                if b < 0 {
                    return usage("--bound must be nonnegative");
                }
                Ok(b)
            }
        }
    }

    fn format(&self) -> Result<Format, RunError> {
        match self.raw.format.as_deref() {
            None | Some("machine") => Ok(Format::Machine),
            Some("human") => Ok(Format::Human),
            Some(other) => usage(format!("--format must be machine or human, got {other:?}")),
        }
    }

    fn jobs(&self) -> Result<Option<usize>, RunError> {
        let source = match &self.raw.jobs {
            Some(s) => Some(("--jobs", s.clone())),
            None => std::env::var("BAILEY_LAB_JOBS")
                .ok()
                .map(|s| ("BAILEY_LAB_JOBS", s)),
        };
        match source {
            None => Ok(None),
            Some((origin, s)) => {
                let n: usize = s.parse().map_err(|_| {
                    RunError::Usage(format!("{origin} expects an integer, got {s:?}"))
                })?;
                if n == 0 {
                    return usage(format!("{origin} must be at least 1"));
                }
                Ok(Some(n))
            }
        }
    }

    fn rational(&self, flag: &str, value: &str) -> Result<Rational, RunError> {
        value
            .parse()
            .map_err(|e| RunError::Usage(format!("{flag} value {value:?} is invalid: {e}")))
    }

    /// Explicit base parameters: all-or-nothing. --q and --x together
    /// (plus --a exactly for family A) switch sampling off.
    fn explicit_params(&self, group: Group, rank: usize) -> Result<Option<Params>, RunError> {
        let raw = &self.raw;
        if raw.q.is_none() && raw.x.is_none() && raw.a.is_none() {
            return Ok(None);
        }
        let (Some(q), Some(x)) = (raw.q.as_deref(), raw.x.as_deref()) else {
            return usage("explicit parameters need both --q and --x");
        };
        let q = self.rational("--q", q)?;
        let mut xs = Vec::new();
        for part in x.split(',') {
            xs.push(self.rational("--x", part.trim())?);
        }
        if xs.len() != rank {
            return usage(format!(
                "--x has {} components but the box has rank {rank}",
                xs.len()
            ));
        }
        let params = match group {
            Group::A => {
                let Some(a) = raw.a.as_deref() else {
                    return usage("family A needs --a alongside --q and --x");
                };
                let a = self.rational("--a", a)?;
                Params::A(
                    GroupParamsA::new(q, a, xs)
                        .map_err(|e| RunError::Usage(format!("explicit parameters invalid: {e}")))?,
                )
            }
            Group::C => {
                if raw.a.is_some() {
                    return usage("--a applies to family A only");
                }
                Params::C(
                    GroupParamsC::new(q, xs)
                        .map_err(|e| RunError::Usage(format!("explicit parameters invalid: {e}")))?,
                )
            }
        };
        Ok(Some(params))
    }

    /// Explicit lemma parameters: the family's pair of flags, both or
    /// neither.
    fn explicit_lemma(&self, group: Group) -> Result<Option<LemmaParams>, RunError> {
        let raw = &self.raw;
        match group {
            Group::A => {
                if raw.alpha.is_some() || raw.beta.is_some() {
                    return usage("--alpha/--beta apply to family C; family A uses --rho/--sigma");
                }
                match (raw.rho.as_deref(), raw.sigma.as_deref()) {
                    (None, None) => Ok(None),
                    (Some(rho), Some(sigma)) => {
                        let rho = self.rational("--rho", rho)?;
                        let sigma = self.rational("--sigma", sigma)?;
                        let lp = LemmaParamsA::new(rho, sigma)
                            .map_err(|e| RunError::Usage(format!("lemma parameters invalid: {e}")))?;
                        Ok(Some(LemmaParams::A(lp)))
                    }
                    _ => usage("--rho and --sigma must be given together"),
                }
            }
            Group::C => {
                if raw.rho.is_some() || raw.sigma.is_some() {
                    return usage("--rho/--sigma apply to family A; family C uses --alpha/--beta");
                }
                match (raw.alpha.as_deref(), raw.beta.as_deref()) {
                    (None, None) => Ok(None),
                    (Some(alpha), Some(beta)) => {
                        let alpha = self.rational("--alpha", alpha)?;
                        let beta = self.rational("--beta", beta)?;
                        let lp = LemmaParamsC::new(alpha, beta)
                            .map_err(|e| RunError::Usage(format!("lemma parameters invalid: {e}")))?;
                        Ok(Some(LemmaParams::C(lp)))
                    }
                    _ => usage("--alpha and --beta must be given together"),
                }
            }
        }
    }

    /// Ordered chain steps parsed against the family's parameter names.
    fn chain_steps(&self, group: Group) -> Result<Vec<LemmaParams>, RunError> {
        if self.raw.steps.is_empty() {
            return usage("chain needs at least one --step (rho=..,sigma=.. or alpha=..,beta=..)");
        }
        let (first_key, second_key) = match group {
            Group::A => ("rho", "sigma"),
            Group::C => ("alpha", "beta"),
        };
        let mut steps = Vec::new();
        for spec in &self.raw.steps {
            let mut first = None;
            let mut second = None;
            for part in spec.split(',') {
                let Some((key, value)) = part.split_once('=') else {
                    return usage(format!("--step {spec:?}: expected key=value, got {part:?}"));
                };
                let (key, value) = (key.trim(), value.trim());
                let slot = if key == first_key {
                    &mut first
                } else if key == second_key {
                    &mut second
                } else {
                    return usage(format!(
                        "--step {spec:?}: family {group} steps use {first_key}= and {second_key}="
                    ));
                };
                if slot.is_some() {
                    return usage(format!("--step {spec:?}: {key} given twice"));
                }
                *slot = Some(self.rational("--step", value)?);
            }
            let (Some(first), Some(second)) = (first, second) else {
                return usage(format!(
                    "--step {spec:?}: needs both {first_key}= and {second_key}="
                ));
            };
            let lp = match group {
                Group::A => LemmaParamsA::new(first, second).map(LemmaParams::A),
                Group::C => LemmaParamsC::new(first, second).map(LemmaParams::C),
            }
            .map_err(|e| RunError::Usage(format!("--step {spec:?} invalid: {e}")))?;
            steps.push(lp);
        }
        Ok(steps)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Machine,
    Human,
}

// ---------------------------------------------------------------------------
// Command execution
// ---------------------------------------------------------------------------

fn engine(e: Error) -> RunError {
    RunError::Engine(e.to_string())
}

/// Params per trial: the explicit set once, or one sampled set per
/// trial at seed + t.
fn param_schedule(
    o: &Options,
    group: Group,
    bbox: &IndexBox,
) -> Result<Vec<(u64, Params)>, RunError> {
    let explicit = o.explicit_params(group, bbox.rank())?;
    let seed = o.seed()?;
    match explicit {
        Some(p) => Ok(vec![(seed, p)]),
        None => {
            let trials = o.trials()?;
            let mut out = Vec::new();
            for t in 0..trials {
                let trial_seed = seed.wrapping_add(t);
                let mut sampler = ParamSampler::from_seed(trial_seed);
                let p = sampler.next_params(group, bbox).map_err(engine)?;
                out.push((trial_seed, p));
            }
            Ok(out)
        }
    }
}

/// A pair for checks that need one: random A side when the parameters
/// are admissible, a typed placeholder otherwise (the checks re-scan
/// admissibility first and return inadmissible before reading it).
fn pair_or_placeholder(p: &Params, bbox: &IndexBox, seed: u64) -> Result<BaileyPair, RunError> {
    if admissibility(p, bbox).is_empty() {
        let mut sampler = ParamSampler::from_seed(seed ^ 0x9e3779b97f4a7c15);
        sampler.next_pair(p, bbox).map_err(engine)
    } else {
        let delta = SequenceOracle::delta(bbox.clone());
        BaileyPair::from_oracles(p.clone(), delta.clone(), delta).map_err(engine)
    }
}

fn cmd_invert(o: &Options) -> Result<Vec<Report>, RunError> {
    let group = o.group()?;
    let bbox = o.bbox()?;
    Ok(param_schedule(o, group, &bbox)?
        .iter()
        .map(|(_, p)| check_inversion(p, &bbox))
        .collect())
}

fn cmd_pair(o: &Options) -> Result<Vec<Report>, RunError> {
    let group = o.group()?;
    let bbox = o.bbox()?;
    let mut reports = Vec::new();
    for (seed, p) in param_schedule(o, group, &bbox)? {
        let pair = pair_or_placeholder(&p, &bbox, seed)?;
        reports.push(check_bailey_pair(&pair));
    }
    Ok(reports)
}

fn cmd_lemma(o: &Options) -> Result<Vec<Report>, RunError> {
    let group = o.group()?;
    let bbox = o.bbox()?;
    let explicit_lp = o.explicit_lemma(group)?;
    let mut reports = Vec::new();
    for (seed, p) in param_schedule(o, group, &bbox)? {
        let lp = match &explicit_lp {
            Some(lp) => lp.clone(),
            None => {
                let mut sampler = ParamSampler::from_seed(seed ^ 0x51f15eed);
                sampler.next_lemma_params(&p, &bbox).map_err(engine)?
            }
        };
        let pair = pair_or_placeholder(&p, &bbox, seed)?;
        reports.push(check_lemma(&pair, &lp, &bbox));
    }
    Ok(reports)
}

fn cmd_chain(o: &Options) -> Result<Vec<Report>, RunError> {
    let group = o.group()?;
    let bbox = o.bbox()?;
    let steps = o.chain_steps(group)?;
    let mut reports = Vec::new();
    for (_, p) in param_schedule(o, group, &bbox)? {
        let seed_pair = if admissibility(&p, &bbox).is_empty() {
            unit_pair(&p, &bbox).map_err(engine)?
        } else {
            let delta = SequenceOracle::delta(bbox.clone());
            BaileyPair::from_oracles(p.clone(), delta.clone(), delta).map_err(engine)?
        };
        reports.push(check_chain(&seed_pair, &steps, &bbox));
    }
    Ok(reports)
}

fn cmd_classical(o: &Options) -> Result<Vec<Report>, RunError> {
    let bound = o.bound()?;
    let raw = &o.raw;
    let explicit = match (raw.q.as_deref(), raw.a.as_deref()) {
        (None, None) => None,
        (Some(q), Some(a)) => Some((o.rational("--q", q)?, o.rational("--a", a)?)),
        _ => return usage("explicit classical parameters need both --q and --a"),
    };
    match explicit {
        Some((q, a)) => Ok(vec![check_classical_reduction(&q, &a, bound)]),
        None => {
            let seed = o.seed()?;
            let bbox = IndexBox::new(MultiIndex::new(vec![bound]).map_err(engine)?);
            let mut reports = Vec::new();
            for t in 0..o.trials()? {
                let mut sampler = ParamSampler::from_seed(seed.wrapping_add(t));
                let p = sampler.next_params(Group::A, &bbox).map_err(engine)?;
                let Params::A(pa) = &p else { unreachable!() };
                reports.push(check_classical_reduction(pa.q(), pa.a(), bound));
            }
            Ok(reports)
        }
    }
}

// ---------------------------------------------------------------------------

fn run(cli: &Cli) -> Result<u8, RunError> {
    let raw = cli.command.raw();
    let o = Options::merge(raw)?;
    o.reject_inapplicable(cli.command.name(), raw)?;
    if let Some(jobs) = o.jobs()? {
        // the global pool can only be installed once per process; a
        // second attempt means a harness already set it, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let format = o.format()?;
    let reports = match &cli.command {
        Command::InvertCheck(_) => cmd_invert(&o)?,
        Command::PairCheck(_) => cmd_pair(&o)?,
        Command::LemmaCheck(_) => cmd_lemma(&o)?,
        Command::Chain(_) => cmd_chain(&o)?,
        Command::ReduceClassical(_) => cmd_classical(&o)?,
    };
    let rendered: String = reports
        .iter()
        .map(|r| match format {
            Format::Machine => r.render_machine(),
            Format::Human => r.render_human(),
        })
        .collect();
    for r in &reports {
        eprintln!(
            "# check {} finished in {:.3} ms",
            r.check(),
            r.elapsed().as_secs_f64() * 1e3
        );
    }
    match &o.raw.output {
        Some(path) => {
            let path = PathBuf::from(path);
            fs::write(&path, rendered).map_err(|e| {
                RunError::Engine(format!("cannot write output file {}: {e}", path.display()))
            })?;
            eprintln!("# wrote {} report(s) to {}", reports.len(), path.display());
        }
        None => print!("{rendered}"),
    }
    Ok(exit_for(&reports))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own exit convention reserves 2; here exit 2 means
            // "inadmissible", so usage errors remap to 3 while help
            // and version stay successes
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(RunError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(3)
        }
        Err(RunError::Engine(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
