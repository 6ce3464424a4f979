//! Command-line front end: parse knowledge-base files, run the merging
//! operators, print results with provenance, and drive the simulator.
//!
//! Exit codes for `merge`: 0 for a non-empty result, 2 when no admissible
//! mistake hypothesis exists (the result is `false`), 1 for input or
//! search errors. All other commands use 0/1.

mod problem;

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kbmerge::engine::{
    general_merge, rm_merge_in, rmel_merge_in, MergeConfig, MergeOutcome, MistakeKinds, Ranking,
};
use kbmerge::logic::{parse_formula, KnowledgeProfile, LogicError, Variable};
use kbmerge::ranking::DeltaMode;
use kbmerge::sim::{evaluate, generate, OperatorChoice, RecoveryReport};
use kbmerge::Substitution;

use problem::{parse_problem, ProblemFile};

#[derive(Parser)]
#[command(name = "kbmerge", version, about = "Merge inconsistent knowledge bases by inverting hypothesized acquisition mistakes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Merge the knowledge bases of a problem file under its bounds.
    Merge(MergeArgs),
    /// Generate random scenarios with injected mistakes and score recovery.
    Simulate(SimulateArgs),
    /// Validate a problem file's bounds (satisfiable A, B, and A & B).
    Check(CheckArgs),
    /// Score explicitly supplied substitution pairs for a two-base file.
    Rank(RankArgs),
    /// Parse a formula and echo its canonical form.
    Parse(ParseArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    Rmel,
    Rm,
    General,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeltaModeArg {
    Linear,
    Quotient,
    Restricted,
}

impl From<DeltaModeArg> for DeltaMode {
    fn from(m: DeltaModeArg) -> Self {
        match m {
            DeltaModeArg::Linear => DeltaMode::LinearCount,
            DeltaModeArg::Quotient => DeltaMode::Quotient,
            DeltaModeArg::Restricted => DeltaMode::RestrictedSum,
        }
    }
}

#[derive(Args)]
struct MergeArgs {
    /// Problem file with `[kb]` sections and optional `[upper]`/`[lower]` bounds.
    file: String,
    #[arg(long, value_enum, default_value = "rmel")]
    operator: OperatorArg,
    #[arg(long, value_enum, default_value = "linear")]
    delta_mode: DeltaModeArg,
    /// Hypothesis budget per knowledge base (general operator).
    #[arg(long, default_value_t = 2)]
    budget: usize,
    /// Print one line per disjunct with provenance and score.
    #[arg(long)]
    explain: bool,
    /// Cap on the model-space universe (variables plus fresh primes).
    #[arg(long, default_value_t = kbmerge::logic::DEFAULT_UNIVERSE_CAP)]
    max_universe: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    vars: usize,
    #[arg(long, default_value_t = 2)]
    sources: usize,
    #[arg(long, default_value_t = 1)]
    budget: usize,
    /// Comma-separated mistake kinds: renaming, generalization,
    /// particularization (or ren/gen/par).
    #[arg(long, default_value = "renaming,generalization,particularization")]
    kinds: String,
    #[arg(long, default_value_t = 10)]
    runs: usize,
}

#[derive(Args)]
struct CheckArgs {
    file: String,
    #[arg(long, default_value_t = kbmerge::logic::DEFAULT_UNIVERSE_CAP)]
    max_universe: usize,
}

#[derive(Args)]
struct RankArgs {
    /// Problem file with exactly two `[kb]` sections.
    file: String,
    /// Substitution pair `LEFT/RIGHT`, each side a comma-separated list
    /// of from=to entries (empty side = identity). Repeatable.
    #[arg(long = "pair", required = true)]
    pairs: Vec<String>,
    #[arg(long, default_value_t = kbmerge::logic::DEFAULT_UNIVERSE_CAP)]
    max_universe: usize,
}

#[derive(Args)]
struct ParseArgs {
    /// Formula file; reads standard input when omitted or `-`.
    file: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Merge(args) => cmd_merge(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Rank(args) => cmd_rank(&args),
        Command::Parse(args) => cmd_parse(&args),
    };
    match code {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read_problem(path: &str) -> Result<ProblemFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    parse_problem(&text).map_err(|e| format!("{path}: {e}"))
}

fn build_profile(p: &ProblemFile, cap: usize) -> Result<KnowledgeProfile, String> {
    KnowledgeProfile::with_cap(p.kbs.clone(), p.upper.clone(), p.lower.clone(), cap)
        .map_err(|e| e.to_string())
}

fn cmd_merge(args: &MergeArgs) -> Result<ExitCode, String> {
    let problem = read_problem(&args.file)?;
    if matches!(args.operator, OperatorArg::Rmel | OperatorArg::Rm) && problem.kbs.len() != 2 {
        return Err(format!(
            "operator needs exactly two knowledge bases, the file has {}",
            problem.kbs.len()
        ));
    }
    let profile = build_profile(&problem, args.max_universe)?;
    let cfg = MergeConfig {
        budget_per_base: args.budget,
        delta_mode: args.delta_mode.into(),
        ranking: Ranking::Heuristic,
        ..MergeConfig::default()
    };
    let outcome: MergeOutcome = match args.operator {
        OperatorArg::Rmel => rmel_merge_in(&profile),
        OperatorArg::Rm => rm_merge_in(&profile, &cfg),
        OperatorArg::General => general_merge(&profile, &cfg),
    }
    .map_err(|e| e.to_string())?;

    println!("{}", outcome.result);
    if args.explain {
        for (i, d) in outcome.disjuncts.iter().enumerate() {
            println!("{}: {} :: {} :: score={:.4}", i + 1, d.formula, d.provenance, d.score.value());
        }
    }
    if outcome.admissible() {
        Ok(ExitCode::from(0))
    } else {
        Ok(ExitCode::from(2))
    }
}

fn parse_kinds(spec: &str) -> Result<MistakeKinds, String> {
    let mut kinds =
        MistakeKinds { renaming: false, generalization: false, particularization: false };
    for part in spec.split(',') {
        match part.trim() {
            "renaming" | "ren" => kinds.renaming = true,
            "generalization" | "gen" => kinds.generalization = true,
            "particularization" | "par" => kinds.particularization = true,
            "" => {}
            other => return Err(format!("unknown mistake kind `{other}`")),
        }
    }
    if !(kinds.renaming || kinds.generalization || kinds.particularization) {
        return Err("at least one mistake kind is required".to_string());
    }
    Ok(kinds)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<ExitCode, String> {
    let kinds = parse_kinds(&args.kinds)?;
    let renaming_only = kinds.renaming && !kinds.generalization && !kinds.particularization;
    let operator = if renaming_only && args.sources == 2 {
        OperatorChoice::Rmel
    } else {
        OperatorChoice::General
    };
    let cfg = MergeConfig { kinds, ..MergeConfig::default() };

    let mut admissible = 0usize;
    let mut sound = 0usize;
    let mut complete = 0usize;
    for run in 0..args.runs {
        let seed = args.seed.wrapping_add(run as u64);
        let scenario = generate(seed, args.vars, args.sources, args.budget, kinds)
            .map_err(|e| e.to_string())?;
        let report: RecoveryReport =
            evaluate(&scenario, operator, &cfg).map_err(|e| e.to_string())?;
        admissible += report.admissible as usize;
        sound += report.sound_wrt_sources as usize;
        complete += report.complete_wrt_sources as usize;
        println!(
            "run={run} seed={seed} admissible={} sound={} complete={} sound_exact={} disjuncts={} injected={} score_min={} universe={}",
            report.admissible,
            report.sound_wrt_sources,
            report.complete_wrt_sources,
            report.sound_exact.map_or_else(|| "n/a".to_string(), |b| b.to_string()),
            report.disjunct_count,
            report.injected_count,
            report.min_score.map_or_else(|| "none".to_string(), |s| format!("{s:.4}")),
            report.universe_size,
        );
    }
    if args.runs > 0 {
        let rate = |n: usize| n as f64 / args.runs as f64;
        println!(
            "runs={} admissible_rate={:.3} sound_rate={:.3} complete_rate={:.3}",
            args.runs,
            rate(admissible),
            rate(sound),
            rate(complete),
        );
    }
    Ok(ExitCode::from(0))
}

fn cmd_check(args: &CheckArgs) -> Result<ExitCode, String> {
    let problem = read_problem(&args.file)?;
    match KnowledgeProfile::with_cap(
        problem.kbs.clone(),
        problem.upper.clone(),
        problem.lower.clone(),
        args.max_universe,
    ) {
        Ok(profile) => {
            println!(
                "ok: {} knowledge bases over {} variables ({} with fresh primes)",
                problem.kbs.len(),
                profile.base_universe().len(),
                profile.universe().len(),
            );
            Ok(ExitCode::from(0))
        }
        Err(LogicError::UnsatisfiableBound { name: "A & B" }) => {
            println!("invalid: A and B contradict");
            Ok(ExitCode::from(1))
        }
        Err(LogicError::UnsatisfiableBound { name }) => {
            println!("invalid: {name} is unsatisfiable");
            Ok(ExitCode::from(1))
        }
        Err(other) => {
            println!("invalid: {other}");
            Ok(ExitCode::from(1))
        }
    }
}

fn parse_substitution_spec(
    spec: &str,
    profile: &KnowledgeProfile,
) -> Result<Substitution, String> {
    let mut pairs = Vec::new();
    for entry in spec.split(',') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let (from, to) = entry
            .split_once('=')
            .ok_or_else(|| format!("substitution entry `{entry}` is not from=to"))?;
        let from = from.trim().parse::<Variable>().map_err(|e| e.to_string())?;
        let to = to.trim().parse::<Variable>().map_err(|e| e.to_string())?;
        pairs.push((from, to));
    }
    Substitution::permitted(&pairs, profile).map_err(|e| e.to_string())
}

fn cmd_rank(args: &RankArgs) -> Result<ExitCode, String> {
    let problem = read_problem(&args.file)?;
    if problem.kbs.len() != 2 {
        return Err(format!(
            "rank needs exactly two knowledge bases, the file has {}",
            problem.kbs.len()
        ));
    }
    let profile = build_profile(&problem, args.max_universe)?;
    for (i, pair_spec) in args.pairs.iter().enumerate() {
        let (left_spec, right_spec) = pair_spec
            .split_once('/')
            .ok_or_else(|| format!("pair `{pair_spec}` is not LEFT/RIGHT"))?;
        let left = parse_substitution_spec(left_spec, &profile)?;
        let right = parse_substitution_spec(right_spec, &profile)?;
        let score = kbmerge::ranking::rank_renaming_pair(
            &left,
            &right,
            &problem.kbs[0],
            &problem.kbs[1],
            &profile,
        )
        .map_err(|e| e.to_string())?;
        println!(
            "pair={} left={} right={} size={} score={:.4}",
            i + 1,
            left,
            right,
            left.len() + right.len(),
            score.value(),
        );
    }
    Ok(ExitCode::from(0))
}

fn cmd_parse(args: &ParseArgs) -> Result<ExitCode, String> {
    let text = match args.file.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(|e| e.to_string())?;
            buf
        }
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
    };
    let formula = parse_formula(&text).map_err(|e| e.to_string())?;
    println!("{formula}");
    Ok(ExitCode::from(0))
}
