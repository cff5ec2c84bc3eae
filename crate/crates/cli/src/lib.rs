//! Command implementations behind the `ptrank` binary.
//!
//! Each command writes its report to the given writer and returns the
//! process exit code; see [`exit`] for the meaning of each code.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptrank_core::analysis::{
    analyze_2x2_sr2, analyze_full_schmidt, analyze_sr3_order4, analyze_vector_matrix, check_inequality,
    check_inequality_with, full_schmidt_target, reduce_sr2, CaseTag, EqualityReport, Sr2Case,
};
use ptrank_core::canonical::{gen_full_schmidt_canonical, gen_sr2_case, gen_vector_case};
use ptrank_core::document::{parse_document, parse_rational, MatrixDocument};
use ptrank_core::oracle::{budget_from_env, lemma_suite, Mode, SuiteOptions, DEFAULT_SEED, SUITES};
use ptrank_core::{BipartiteMatrix, BipartiteShape, Error, LocalEquivWitness, System};
use serde_json::{json, Value};

/// Stable process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Unreadable file, malformed JSON or a bad rational.
    pub const PARSE: i32 = 1;
    /// Input outside an analyzer's hypotheses, infeasible parameters,
    /// unknown suite or exhausted budget.
    pub const PRECONDITION: i32 = 2;
    /// An internal witness failed re-verification.
    pub const WITNESS: i32 = 3;
    /// An oracle suite found counterexamples.
    pub const VIOLATIONS: i32 = 4;
}

pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => exit::PARSE,
            Error::VerificationFailed(_) => exit::WITNESS,
            _ => exit::PRECONDITION,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(exit::PARSE, format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "ptrank", version, about = "Exact rank analysis of bipartite matrices under partial transpose")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank, Schmidt rank and partial-transpose rank of a matrix document,
    /// with a saturation verdict.
    Analyze(AnalyzeArgs),
    /// Write a document for one of the known saturating families.
    Generate(GenerateArgs),
    /// Bring a matrix to normal form and emit the local-equivalence witness.
    Reduce(ReduceArgs),
    /// Run an oracle suite.
    Oracle(OracleArgs),
    /// Same as `oracle`.
    Fuzz(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    A,
    B,
}

impl From<SystemArg> for System {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::A => System::A,
            SystemArg::B => System::B,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Auto,
    Vector,
    #[value(name = "2x2")]
    TwoByTwo,
    FullSchmidt,
    Sr2,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "b")]
    pub system: SystemArg,
    #[arg(long = "case", value_enum, default_value = "auto")]
    pub case: CaseArg,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    FullSchmidt,
    Vector,
    Sr2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Sr2CaseArg {
    I,
    Ii,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub m1: Option<usize>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of Kronecker terms in the vector family.
    #[arg(long = "K", visible_alias = "k")]
    pub k: Option<usize>,
    #[arg(long)]
    pub m2: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long = "case", value_enum)]
    pub case: Option<Sr2CaseArg>,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReduceMode {
    Auto,
    Sr2,
    FullSchmidt,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: ReduceMode,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Suite name; see `--list`.
    #[arg(long, required_unless_present = "list")]
    pub suite: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, conflicts_with = "exhaustive")]
    pub trials: Option<u64>,
    #[arg(long)]
    pub exhaustive: bool,
    /// `m1,n1,m2,n2`.
    #[arg(long)]
    pub shape: Option<String>,
    /// Comma-separated rationals, e.g. `0,1` or `-1,1/2`.
    #[arg(long, allow_hyphen_values = true)]
    pub entries: Option<String>,
    #[arg(long)]
    pub json: bool,
    /// Where counterexamples go when the suite fails; defaults to
    /// `<suite>-counterexamples.json` in the working directory.
    #[arg(long)]
    pub counterexamples: Option<PathBuf>,
    /// List the registered suites and exit.
    #[arg(long)]
    pub list: bool,
}

/// Runs a parsed command; on error the caller prints the message and exits
/// with its code.
pub fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<i32> {
    match cli.command {
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::Generate(g) => cmd_generate(&g, out),
        Command::Reduce(r) => cmd_reduce(&r, out),
        Command::Oracle(o) | Command::Fuzz(o) => cmd_oracle(&o, out),
    }
}

pub fn read_document(path: &Path) -> CliResult<BipartiteMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(exit::PARSE, format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| CliError::new(exit::PARSE, format!("{}: {e}", path.display())))
}

// ---- analyze -----------------------------------------------------------------

/// Result of one analyzer run.
#[derive(Debug)]
pub struct Analysis {
    pub analyzer: &'static str,
    pub report: EqualityReport,
    pub details: Value,
}

fn analyzer_name(case: CaseArg) -> &'static str {
    match case {
        CaseArg::Auto => "auto",
        CaseArg::Vector => "vector",
        CaseArg::TwoByTwo => "2x2",
        CaseArg::FullSchmidt => "full-schmidt",
        CaseArg::Sr2 => "sr2",
    }
}

fn run_analyzer(m: &BipartiteMatrix, case: CaseArg) -> Result<Analysis, Error> {
    let analyzer = analyzer_name(case);
    match case {
        CaseArg::Vector => {
            let a = analyze_vector_matrix(m)?;
            Ok(Analysis {
                analyzer,
                details: json!({
                    "stacked_rank": a.stacked_rank,
                    "side_by_side_rank": a.side_by_side_rank,
                    "dimension_condition": a.dimension_condition,
                    "certificate": a.certificate,
                }),
                report: a.report,
            })
        }
        CaseArg::TwoByTwo => {
            if m.schmidt_rank() == 3 {
                return Ok(Analysis {
                    analyzer,
                    report: analyze_sr3_order4(m)?,
                    details: json!({}),
                });
            }
            let a = analyze_2x2_sr2(m)?;
            Ok(Analysis {
                analyzer,
                details: json!({
                    "pencil": a.pencil,
                    "case": a.case.map(Sr2Case::label),
                    "reduced": a.reduced.as_ref().map(MatrixDocument::from_matrix),
                }),
                report: a.report,
            })
        }
        CaseArg::FullSchmidt => {
            let a = analyze_full_schmidt(m)?;
            Ok(Analysis {
                analyzer,
                details: json!({ "uniform_block_rank": a.uniform_block_rank }),
                report: a.report,
            })
        }
        CaseArg::Sr2 => {
            let red = reduce_sr2(m)?;
            let report = check_inequality(m)?.tagged(CaseTag::SchmidtRank2General);
            Ok(Analysis {
                analyzer,
                details: json!({
                    "reduced": MatrixDocument::from_matrix(&red.reduced),
                    "reduction_witness": red.witness,
                }),
                report,
            })
        }
        CaseArg::Auto => {
            let s = m.shape();
            let sr = m.schmidt_rank();
            let candidates = [
                (CaseArg::Vector, (s.n1 == 1 || s.m1 == 1) && sr >= 2),
                (CaseArg::TwoByTwo, s.m1 == 2 && s.n1 == 2 && (sr == 2 || sr == 3)),
                (CaseArg::FullSchmidt, sr == s.m1 * s.n1 && sr <= s.m2 * s.n2 && sr >= 2),
                (CaseArg::Sr2, sr == 2),
            ];
            for (case, applies) in candidates {
                if applies {
                    return run_analyzer(m, case);
                }
            }
            Ok(Analysis {
                analyzer: "unclassified",
                report: check_inequality(m)?,
                details: json!({}),
            })
        }
    }
}

/// Runs the analysis and re-expresses the ranks for `system`.
pub fn analyze_matrix(m: &BipartiteMatrix, system: System, case: CaseArg) -> CliResult<Analysis> {
    let mut a = run_analyzer(m, case)?;
    if system != a.report.system {
        let other = check_inequality_with(m, system)?;
        if other.rank_gamma != a.report.rank_gamma {
            return Err(CliError::new(
                exit::WITNESS,
                format!("Γ_A and Γ_B ranks differ ({} vs {})", other.rank_gamma, a.report.rank_gamma),
            ));
        }
        a.report.system = system;
    }
    Ok(a)
}

fn witness_line(report: &EqualityReport) -> Option<String> {
    report
        .witness_verified
        .map(|ok| format!("witness check: {}", if ok { "OK" } else { "FAIL" }))
}

pub fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> CliResult<i32> {
    let m = read_document(&args.path)?;
    let a = analyze_matrix(&m, args.system.into(), args.case)?;
    if args.json {
        let v = json!({
            "schema": SCHEMA,
            "shape": m.shape(),
            "analyzer": a.analyzer,
            "report": a.report,
            "details": a.details,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
    } else {
        writeln!(out, "shape {}, analyzer {}, case {}", m.shape(), a.analyzer, a.report.case_tag)?;
        writeln!(out, "{}", a.report.summary())?;
        if let Some(line) = witness_line(&a.report) {
            writeln!(out, "{line}")?;
        }
    }
    Ok(if a.report.witness_verified == Some(false) {
        exit::WITNESS
    } else {
        exit::OK
    })
}

// ---- generate ----------------------------------------------------------------

fn need(v: Option<usize>, flag: &str, family: &str) -> CliResult<usize> {
    v.ok_or_else(|| CliError::new(exit::PRECONDITION, format!("--family={family} needs --{flag}")))
}

pub fn generate_matrix(args: &GenerateArgs) -> CliResult<BipartiteMatrix> {
    Ok(match args.family {
        Family::FullSchmidt => gen_full_schmidt_canonical(
            need(args.m1, "m1", "full-schmidt")?,
            need(args.n1, "n1", "full-schmidt")?,
            need(args.r, "r", "full-schmidt")?,
        )?,
        Family::Vector => gen_vector_case(
            need(args.k, "K", "vector")?,
            need(args.m2, "m2", "vector")?,
            args.n2.unwrap_or(1),
            need(args.d, "d", "vector")?,
        )?
        .assemble()?,
        Family::Sr2 => {
            let case = match args.case {
                Some(Sr2CaseArg::I) => Sr2Case::ColumnPattern,
                Some(Sr2CaseArg::Ii) => Sr2Case::RowPattern,
                None => return Err(CliError::new(exit::PRECONDITION, "--family=sr2 needs --case=i|ii")),
            };
            gen_sr2_case(case, need(args.m2, "m2", "sr2")?, need(args.n2, "n2", "sr2")?, need(args.d, "d", "sr2")?)?
        }
    })
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write) -> CliResult<i32> {
    let m = generate_matrix(args)?;
    let text = MatrixDocument::from_matrix(&m).to_json();
    match &args.out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))
                .map_err(|e| CliError::new(exit::PRECONDITION, format!("cannot write {}: {e}", path.display())))?;
            writeln!(out, "wrote {} matrix of shape {} to {}", family_name(args.family), m.shape(), path.display())?;
        }
        None => writeln!(out, "{text}")?,
    }
    Ok(exit::OK)
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::FullSchmidt => "full-schmidt",
        Family::Vector => "vector",
        Family::Sr2 => "sr2",
    }
}

// ---- reduce ------------------------------------------------------------------

#[derive(Debug)]
pub struct Reduction {
    pub mode: &'static str,
    pub reduced: BipartiteMatrix,
    pub witness: LocalEquivWitness,
    pub verified: bool,
    pub details: Value,
}

pub fn reduce_matrix(m: &BipartiteMatrix, mode: ReduceMode) -> CliResult<Reduction> {
    let s = m.shape();
    let mode = match mode {
        ReduceMode::Auto => match m.schmidt_rank() {
            2 => ReduceMode::Sr2,
            k if k == s.m1 * s.n1 => ReduceMode::FullSchmidt,
            k => {
                return Err(CliError::new(
                    exit::PRECONDITION,
                    format!("no reduction for Schmidt rank {k} at shape {s}: need 2 or m1·n1"),
                ))
            }
        },
        other => other,
    };
    match mode {
        ReduceMode::Sr2 => {
            let r = reduce_sr2(m)?;
            let verified = m.apply_local(&r.witness)? == r.reduced;
            Ok(Reduction {
                mode: "sr2",
                details: json!({
                    "a_side": { "r": r.a_side.r, "t": r.a_side.t, "s": r.a_side.s, "g": r.a_side.g },
                    "b_side": { "r": r.b_side.r, "t": r.b_side.t, "s": r.b_side.s, "g": r.b_side.g },
                }),
                reduced: r.reduced,
                witness: r.witness,
                verified,
            })
        }
        ReduceMode::FullSchmidt => {
            let a = analyze_full_schmidt(m)?;
            let witness = a.report.witness.clone().ok_or_else(|| {
                CliError::new(
                    exit::PRECONDITION,
                    format!("full-Schmidt matrix does not saturate ({}); no canonical form", a.report.summary()),
                )
            })?;
            let target = full_schmidt_target(s.m1, s.n1, a.report.rank, s.m2, s.n2)?;
            let reduced = m.apply_local(&witness)?;
            Ok(Reduction {
                mode: "full-schmidt",
                verified: reduced == target,
                reduced,
                witness,
                details: json!({ "rank": a.report.rank }),
            })
        }
        ReduceMode::Auto => unreachable!(),
    }
}

pub fn cmd_reduce(args: &ReduceArgs, out: &mut dyn Write) -> CliResult<i32> {
    let m = read_document(&args.path)?;
    let r = reduce_matrix(&m, args.mode)?;
    let check = format!("witness check: {}", if r.verified { "OK" } else { "FAIL" });
    if args.json {
        let v = json!({
            "schema": SCHEMA,
            "mode": r.mode,
            "reduced": MatrixDocument::from_matrix(&r.reduced),
            "witness": r.witness,
            "witness_verified": r.verified,
            "details": r.details,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
    } else {
        writeln!(out, "mode {}", r.mode)?;
        writeln!(out, "reduced:\n{}", MatrixDocument::from_matrix(&r.reduced).to_json())?;
        writeln!(out, "witness:\n{}", serde_json::to_string_pretty(&r.witness).expect("json"))?;
        writeln!(out, "{check}")?;
    }
    Ok(if r.verified { exit::OK } else { exit::WITNESS })
}

// ---- oracle ------------------------------------------------------------------

pub fn parse_shape(text: &str) -> CliResult<BipartiteShape> {
    let dims: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::new(exit::PARSE, format!("--shape `{text}`: {e}")))?;
    match dims[..] {
        [m1, n1, m2, n2] => Ok(BipartiteShape::new(m1, n1, m2, n2)?),
        _ => Err(CliError::new(exit::PARSE, format!("--shape `{text}` needs four numbers m1,n1,m2,n2"))),
    }
}

pub fn parse_entries(text: &str) -> CliResult<Vec<ptrank_core::Rational>> {
    let entries: Vec<_> = text
        .split(',')
        .map(|p| parse_rational(p).map_err(|e| CliError::new(exit::PARSE, format!("--entries `{p}` {e}"))))
        .collect::<Result<_, _>>()?;
    Ok(entries)
}

pub fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> CliResult<i32> {
    if args.list {
        for s in SUITES {
            let modes = if s.supports_exhaustive { "random, exhaustive" } else { "random" };
            writeln!(out, "{:<28} [{modes}] {}", s.name, s.statement)?;
        }
        return Ok(exit::OK);
    }
    let name = args.suite.as_deref().unwrap_or_default();
    let opts = SuiteOptions {
        seed: args.seed,
        trials: args.trials,
        mode: args.exhaustive.then_some(Mode::Exhaustive).or(args.trials.map(|_| Mode::Random)),
        shape: args.shape.as_deref().map(parse_shape).transpose()?,
        entries: args.entries.as_deref().map(parse_entries).transpose()?,
        budget: budget_from_env(),
    };
    let report = lemma_suite(name, &opts)?;
    if args.json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        writeln!(out, "{}", report.summary())?;
    }
    if report.passed {
        return Ok(exit::OK);
    }
    let path = args
        .counterexamples
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}-counterexamples.json", report.suite)));
    std::fs::write(&path, report.to_json())?;
    if !args.json {
        writeln!(out, "counterexamples written to {}", path.display())?;
    }
    Ok(exit::VIOLATIONS)
}
