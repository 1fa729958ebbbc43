//! `dopt-snf`: build, reduce, verify and search EW matrices from the shell.
//!
//! Exit codes: 0 on success or a passing check, 1 when a check fails or a
//! construction is impossible, 2 on usage and parse errors.

mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dopt_core::designs::{
    barba_double, build_example_26, build_example_66, is_barba, skew_from_tournament, Tournament,
};
use dopt_core::exactmat::{parse_matrix, write_matrix};
use dopt_core::search::{self, SearchKind, SearchSpec};
use dopt_core::snf::format_factors;
use dopt_core::verify::{
    ew_gram_check, ew_gram_check_strict, ew_tournament_check, is_skew_type, theorem_conformance, Claim,
};
use dopt_core::{smith_normal_form, Error, IntMatrix};
use report::{ReportBuilder, Status};

#[derive(Parser)]
#[command(name = "dopt-snf", version, about = "Smith normal forms and checks for EW matrices and tournaments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a matrix from a named family
    Construct(ConstructArgs),
    /// Invariant factors of a matrix
    Snf(SnfArgs),
    /// Test a structural property
    Verify(VerifyArgs),
    /// Compare a matrix against a closed-form claim
    Check(CheckArgs),
    /// Exhaustive witness searches
    Search(SearchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Example26,
    Example66,
    SkewFromTournament,
    BarbaDouble,
    Circulant,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// First row for `circulant`, whitespace separated
    #[arg(long, allow_hyphen_values = true)]
    row: Option<String>,
    /// Input matrix for `skew-from-tournament` and `barba-double`
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Output path; stdout when absent
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SnfArgs {
    /// Matrix file, or `-` for stdin
    input: PathBuf,
    /// Also print the unimodular transforms
    #[arg(long)]
    transforms: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    /// EW up to row/column negation and permutation
    Ew,
    /// The literal two-block Gram identity
    EwStrict,
    Skew,
    Barba,
    EwTournament,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    property: Property,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    input: PathBuf,
    /// Claim id, e.g. main, scaled-inverse, block-squarefree
    #[arg(long)]
    theorem: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// ew-tournament, circulant-tournament, circulant-barba,
    /// two-circulant-skew-ew or barba-problem
    #[arg(long)]
    kind: String,
    /// Order; `barba-problem` takes a comma-separated list
    #[arg(long, value_delimiter = ',', required = true)]
    order: Vec<usize>,
    /// Candidate ceiling, overriding DOPT_SNF_MAX_CANDIDATES
    #[arg(long)]
    limit: Option<u64>,
    /// Write witnesses here as concatenated matrices
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[arg(long)]
    json: bool,
}

enum Failure {
    /// Exit 1
    Failed(String),
    /// Exit 2
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::UnknownClaim(_) => Failure::Usage(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

type Outcome = Result<Status, Failure>;

fn read_input(path: &PathBuf) -> Result<IntMatrix, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    parse_matrix(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Failed(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Failed(e.to_string())),
    }
}

fn input_names(paths: &[&PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

fn cmd_construct(args: &ConstructArgs) -> Outcome {
    let need_input = || -> Result<IntMatrix, Failure> {
        read_input(args.input.as_ref().ok_or_else(|| Failure::Usage("this family needs --input".into()))?)
    };
    let m = match args.family {
        Family::Example26 => build_example_26(),
        Family::Example66 => build_example_66(),
        Family::SkewFromTournament => skew_from_tournament(&Tournament::new(need_input()?)?),
        Family::BarbaDouble => barba_double(&need_input()?)?,
        Family::Circulant => {
            let row = args.row.as_deref().ok_or_else(|| Failure::Usage("circulant needs --row".into()))?;
            let vals = row
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<i64>().map_err(|_| Failure::Usage(format!("bad row entry `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            IntMatrix::circulant(&vals)?
        }
    };
    write_output(args.out.as_ref(), &write_matrix(&m))?;
    Ok(Status::Pass)
}

fn cmd_snf(args: &SnfArgs, report: &mut ReportBuilder) -> Outcome {
    let m = read_input(&args.input)?;
    let res = smith_normal_form(&m, args.transforms);
    if !args.json {
        println!("{}", format_factors(&res.factors));
        if let (Some(l), Some(r)) = (&res.left, &res.right) {
            print!("# left\n{}# right\n{}", write_matrix(l), write_matrix(r));
        }
    }
    report.push("snf", &res);
    report.push("factors", format_factors(&res.factors));
    Ok(Status::Pass)
}

fn cmd_verify(args: &VerifyArgs, report: &mut ReportBuilder) -> Outcome {
    let m = read_input(&args.input)?;
    let verdict = match args.property {
        Property::Ew => {
            let r = ew_gram_check(&m)?;
            report.push("ew", &r);
            r.verdict
        }
        Property::EwStrict => {
            let v = ew_gram_check_strict(&m)?;
            report.push("ew-strict", serde_json::json!({ "verdict": v }));
            v
        }
        Property::Skew => {
            let v = is_skew_type(&m);
            report.push("skew", serde_json::json!({ "verdict": v }));
            v
        }
        Property::Barba => {
            let v = is_barba(&m)?;
            report.push("barba", serde_json::json!({ "verdict": v }));
            v
        }
        Property::EwTournament => {
            let r = ew_tournament_check(&Tournament::new(m)?)?;
            report.push("ew-tournament", &r);
            r.verdict
        }
    };
    if !args.json {
        println!("{}", if verdict { "true" } else { "false" });
    }
    Ok(if verdict { Status::Pass } else { Status::Fail })
}

fn cmd_check(args: &CheckArgs, report: &mut ReportBuilder) -> Outcome {
    let claim: Claim = args.theorem.parse()?;
    let m = read_input(&args.input)?;
    let c = theorem_conformance(&m, claim)?;
    if !args.json {
        println!("{}: {}", c.claim_id, if c.pass { "pass" } else { "fail" });
        println!("computed  {}", format_factors(&c.computed));
        println!("predicted {}", format_factors(&c.predicted));
        if let Some(d) = &c.detail {
            println!("{d}");
        }
    }
    let pass = c.pass;
    report.push("theorem-check", &c);
    Ok(if pass { Status::Pass } else { Status::Fail })
}

fn cmd_search(args: &SearchArgs, report: &mut ReportBuilder) -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.parallel.max(1))
        .build()
        .map_err(|e| Failure::Failed(e.to_string()))?;
    let parallel = args.parallel > 1;
    let gate = args.limit.unwrap_or_else(search::max_candidates);
    if args.kind == "barba-problem" {
        let rows = pool.install(|| search::barba_problem_scan_with(&args.order, gate, parallel))?;
        for row in &rows {
            if !args.json {
                println!(
                    "order {}: {} Barba matrices among {} candidates",
                    row.barba_order, row.barba_count, row.candidates
                );
                for (snf, count) in &row.snf_counts {
                    println!("  {count:>4}  {snf}");
                }
            }
            report.push("barba-scan", row);
        }
        return Ok(Status::Pass);
    }
    let kind: SearchKind = args.kind.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let [order] = args.order[..] else {
        return Err(Failure::Usage(format!("`{}` takes a single --order", args.kind)));
    };
    let spec = SearchSpec { limit: Some(gate), parallel, ..SearchSpec::new(kind, order) };
    let outcome = pool.install(|| search::run(&spec))?;
    if let Some(out) = &args.out {
        let text: String = outcome.witnesses.iter().map(write_matrix).collect();
        write_output(Some(out), &text)?;
    }
    if !args.json {
        println!("{} witnesses among {} candidates", outcome.witnesses.len(), outcome.candidates);
    }
    report.push(
        "search",
        serde_json::json!({
            "search_kind": kind.id(),
            "order": order,
            "candidates": outcome.candidates,
            "witnesses": outcome.witnesses.len(),
            "out": args.out.as_ref().map(|p| p.display().to_string()),
        }),
    );
    Ok(Status::Pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (name, inputs, json) = match &cli.command {
        Command::Construct(a) => ("construct", input_names(&a.input.iter().collect::<Vec<_>>()), false),
        Command::Snf(a) => ("snf", input_names(&[&a.input]), a.json),
        Command::Verify(a) => ("verify", input_names(&[&a.input]), a.json),
        Command::Check(a) => ("check", input_names(&[&a.input]), a.json),
        Command::Search(a) => ("search", vec![], a.json),
    };
    let mut report = ReportBuilder::new(name, inputs);
    let outcome = match &cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Snf(a) => cmd_snf(a, &mut report),
        Command::Verify(a) => cmd_verify(a, &mut report),
        Command::Check(a) => cmd_check(a, &mut report),
        Command::Search(a) => cmd_search(a, &mut report),
    };
    let (status, code, message) = match outcome {
        Ok(Status::Pass) => (Status::Pass, 0, None),
        Ok(s) => (s, 1, None),
        Err(Failure::Failed(m)) => (Status::Error, 1, Some(m)),
        Err(Failure::Usage(m)) => (Status::Error, 2, Some(m)),
    };
    if let Some(m) = &message {
        eprintln!("error: {m}");
        report.push("error", serde_json::json!({ "message": m }));
    }
    if json {
        let doc = report.finish(status);
        println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
    }
    ExitCode::from(code)
}
