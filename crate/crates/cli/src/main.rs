//! `qanneal`: build QUBO programs, solve them, classify search states,
//! report resources and sweep builders over N.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 usage error, 3 too many
//! free variables for exhaustive search, 4 a ground state that does not
//! decode consistently.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qanneal::analyzer::{
    degree_histogram_compare, fit_points, resource_report, sweep, write_csv, Builder, FitModel, HistogramComparison,
    ResourceReport, SweepOptions, SweepRow,
};
use qanneal::bounds::compile_bounds;
use qanneal::io::{emit_qubo, parse_qubo, write_atomic, ExactValue, SolveReport, VarMap};
use qanneal::parallel::Parallelism;
use qanneal::poly::{Assignment, Role};
use qanneal::program::{Program, SearchVariant};
use qanneal::search::{compile_assign, compile_search, Predicate, SearchConfig, SearchProgram};
use qanneal::solver::{
    classify_states, enumerate_ground_states, search_class, simulated_anneal, AnnealSchedule, EnumerateOptions,
    DEFAULT_FREE_LIMIT, DEFAULT_GROUND_CAP,
};
use qanneal::sort::{build_sort, SortWeights};
use qanneal::Error;

/// Relative output paths resolve against this directory when it is set.
const OUT_DIR_ENV: &str = "QANNEAL_OUT_DIR";

#[derive(Parser)]
#[command(name = "qanneal", version, about = "Compile array operations into QUBO Hamiltonians and solve them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write `<out>.qubo` and `<out>.varmap.json` for one program.
    Build(BuildArgs),
    /// Find ground states of a QUBO file and decode them.
    Solve(SolveArgs),
    /// Minimum energy per state class of a search program.
    Classify(ClassifyArgs),
    /// Variable counts and QUBO connectivity of one program.
    Analyze(AnalyzeArgs),
    /// Build a family of programs over N and write a CSV row per point.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Search,
    Count,
    Bounds,
    Sort,
    Assign,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Sum,
    Or,
}

impl From<VariantArg> for SearchVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Sum => SearchVariant::Summation,
            VariantArg::Or => SearchVariant::LogicalOr,
        }
    }
}

#[derive(Args, Clone)]
struct ProgramArgs {
    #[arg(value_enum)]
    kind: Kind,
    /// Number of array elements.
    #[arg(long)]
    n: usize,
    /// Bits per element.
    #[arg(long)]
    bits: usize,
    #[arg(long, value_enum, default_value = "sum")]
    variant: VariantArg,
    /// Array contents in decimal, comma separated; bits are stored LSB first.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<u64>>,
    /// Search or bounds target, or the value written by `assign`.
    #[arg(long)]
    target: Option<u64>,
    /// Index written by `assign`.
    #[arg(long)]
    index: Option<u64>,
    /// Field predicate replacing equality, e.g. `0:4>1 & 4:4==0`.
    #[arg(long)]
    predicate: Option<String>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    program: ProgramArgs,
    /// Output prefix; defaults to `<kind>_n<N>_k<bits>`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Anneal,
}

#[derive(Args)]
struct SolveArgs {
    /// QUBO text file.
    qubo: PathBuf,
    /// Variable map; defaults to the `.varmap.json` next to the QUBO.
    #[arg(long)]
    varmap: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: Mode,
    /// JSON object of extra bindings: a variable label to 0/1, or a register
    /// group (such as `x` or `A[2]`) to a decimal value.
    #[arg(long)]
    clamp: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    sweeps: usize,
    #[arg(long, default_value_t = 100)]
    reads: usize,
    #[arg(long, default_value_t = 0.1)]
    beta_start: f64,
    #[arg(long, default_value_t = 10.0)]
    beta_end: f64,
    /// Largest number of free variables enumerated exhaustively.
    #[arg(long, default_value_t = DEFAULT_FREE_LIMIT)]
    free_limit: usize,
    /// Ground states listed in the report.
    #[arg(long, default_value_t = DEFAULT_GROUND_CAP)]
    cap: usize,
    #[arg(long)]
    sequential: bool,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    bits: usize,
    #[arg(long, value_enum, default_value = "sum")]
    variant: VariantArg,
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<u64>>,
    #[arg(long)]
    target: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_FREE_LIMIT)]
    free_limit: usize,
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    program: ProgramArgs,
    /// Also analyze this search variant and compare degree histograms.
    #[arg(long, value_enum)]
    compare: Option<VariantArg>,
    /// Degree above which variables are counted in the comparison.
    #[arg(long, default_value_t = 8)]
    threshold: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepBuilder {
    SearchSum,
    SearchOr,
    Bounds,
    Sort,
}

impl From<SweepBuilder> for Builder {
    fn from(b: SweepBuilder) -> Self {
        match b {
            SweepBuilder::SearchSum => Builder::SearchSum,
            SweepBuilder::SearchOr => Builder::SearchOr,
            SweepBuilder::Bounds => Builder::Bounds,
            SweepBuilder::Sort => Builder::Sort,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FitArg {
    Linear,
    Quadratic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Column {
    TotalVars,
    AncillaVars,
    MaxDegree,
    TermCount,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(value_enum)]
    builder: SweepBuilder,
    /// Explicit N values, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to", "step"])]
    ns: Option<Vec<usize>>,
    #[arg(long, requires = "to")]
    from: Option<usize>,
    #[arg(long, requires = "from")]
    to: Option<usize>,
    #[arg(long, default_value_t = 1)]
    step: usize,
    #[arg(long)]
    bits: usize,
    /// Write 0 in `build_millis` so output is reproducible.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    sequential: bool,
    /// Fit a model of one column against N; the fit goes to stderr as JSON.
    #[arg(long, value_enum)]
    fit: Option<FitArg>,
    #[arg(long, value_enum, default_value = "total-vars")]
    fit_column: Column,
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidArgument(msg.into()).into()
}

fn parallelism(sequential: bool) -> Parallelism {
    if sequential {
        Parallelism::Sequential
    } else {
        Parallelism::Parallel
    }
}

fn out_path(p: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn write_output(path: Option<&Path>, contents: &[u8]) -> anyhow::Result<()> {
    match path {
        Some(p) => Ok(write_atomic(&out_path(p), contents)?),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(contents)?;
            Ok(())
        }
    }
}

fn build_program(a: &ProgramArgs) -> anyhow::Result<Box<dyn Program>> {
    let values = a.values.as_deref();
    let no_index = |kind: &str| match a.index {
        Some(_) => Err(usage(format!("--index applies to assign, not {kind}"))),
        None => Ok(()),
    };
    let no_predicate = |kind: &str| match a.predicate {
        Some(_) => Err(usage(format!("--predicate applies to search and count, not {kind}"))),
        None => Ok(()),
    };
    let predicate = a.predicate.as_deref().map(str::parse::<Predicate>).transpose()?;
    Ok(match a.kind {
        Kind::Search | Kind::Count => {
            no_index("search")?;
            let variant = if a.kind == Kind::Count { SearchVariant::Count } else { a.variant.into() };
            if predicate.is_some() && a.target.is_some() {
                return Err(usage("a predicate search has no target"));
            }
            let config = SearchConfig { predicate, ..SearchConfig::new(a.n, a.bits, variant) };
            Box::new(compile_search(&config)?.with_values(values, a.target)?)
        }
        Kind::Bounds => {
            no_index("bounds")?;
            no_predicate("bounds")?;
            Box::new(compile_bounds(a.n, a.bits)?.with_values(values, a.target)?)
        }
        Kind::Sort => {
            no_index("sort")?;
            no_predicate("sort")?;
            if a.target.is_some() {
                return Err(usage("sort takes no target"));
            }
            let p = build_sort(a.n, a.bits, &SortWeights::default())?;
            match values {
                Some(v) => Box::new(p.with_values(v)?),
                None => Box::new(p),
            }
        }
        Kind::Assign => {
            no_predicate("assign")?;
            Box::new(compile_assign(a.n, a.bits)?.with_values(values, a.index, a.target)?)
        }
    })
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Search => "search",
        Kind::Count => "count",
        Kind::Bounds => "bounds",
        Kind::Sort => "sort",
        Kind::Assign => "assign",
    }
}

fn cmd_build(args: &BuildArgs) -> anyhow::Result<()> {
    let a = &args.program;
    let p = build_program(a)?;
    let prefix = args.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}_n{}_k{}", kind_name(a.kind), a.n, a.bits)));
    let prefix = out_path(&prefix);
    let with_ext = |ext: &str| {
        let mut s = prefix.clone().into_os_string();
        s.push(ext);
        PathBuf::from(s)
    };
    let (qubo_path, varmap_path) = (with_ext(".qubo"), with_ext(".varmap.json"));
    let mut comments = vec![format!("qanneal {} n={} bits={}", kind_name(a.kind), a.n, a.bits)];
    if matches!(a.kind, Kind::Search) {
        comments.push(format!("variant {}", SearchVariant::from(a.variant)));
    }
    comments.push(format!("variables {}", p.registry().len()));
    write_atomic(&qubo_path, emit_qubo(p.qubo(), &comments).as_bytes())?;
    write_atomic(&varmap_path, VarMap::from_program(p.as_ref()).to_json().as_bytes())?;
    eprintln!("wrote {} and {}", qubo_path.display(), varmap_path.display());
    Ok(())
}

/// `foo.qubo` → `foo.varmap.json`.
fn default_varmap(qubo: &Path) -> PathBuf {
    let s = qubo.to_string_lossy();
    PathBuf::from(format!("{}.varmap.json", s.strip_suffix(".qubo").unwrap_or(&s)))
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Bindings from a clamp file: labels take 0/1, register groups a value.
fn clamp_file(path: &Path, vm: &VarMap) -> anyhow::Result<Assignment> {
    let text = read(path)?;
    let entries: BTreeMap<String, u64> =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut a = Assignment::new();
    for (key, value) in entries {
        if let Some(info) = vm.variables.iter().find(|v| v.label == key) {
            if value > 1 {
                return Err(usage(format!("variable `{key}` takes 0 or 1, got {value}")));
            }
            a.set(info.id, value == 1);
            continue;
        }
        let bits: Vec<_> = vm.variables.iter().filter(|v| v.group == key && v.role == Role::Input).map(|v| v.id).collect();
        if bits.is_empty() {
            return Err(usage(format!("no variable or register named `{key}`")));
        }
        if bits.len() < 64 && value >> bits.len() != 0 {
            return Err(usage(format!("{value} does not fit the {}-bit register `{key}`", bits.len())));
        }
        for (j, &v) in bits.iter().enumerate() {
            a.set(v, (value >> j) & 1 == 1);
        }
    }
    Ok(a)
}

fn cmd_solve(args: &SolveArgs) -> anyhow::Result<()> {
    let qubo = parse_qubo(&read(&args.qubo)?)?;
    let vm_path = args.varmap.clone().unwrap_or_else(|| default_varmap(&args.qubo));
    let vm = match (args.varmap.is_some(), vm_path.exists()) {
        (true, _) | (false, true) => Some(VarMap::from_json(&read(&vm_path)?)?),
        (false, false) => None,
    };
    let mut clamp = match &vm {
        Some(vm) => vm.clamp_assignment()?,
        None => Assignment::new(),
    };
    if let Some(path) = &args.clamp {
        let vm = vm.as_ref().ok_or_else(|| usage("--clamp needs a variable map"))?;
        clamp.extend(&clamp_file(path, vm)?);
    }
    let mode = parallelism(args.sequential);
    let result = match args.mode {
        Mode::Exhaustive => {
            let opts = EnumerateOptions { free_limit: args.free_limit, cap: args.cap, parallelism: mode };
            enumerate_ground_states(&qubo.base, &clamp, &opts)?
        }
        Mode::Anneal => {
            let schedule = AnnealSchedule {
                sweeps: args.sweeps,
                reads: args.reads,
                beta_start: args.beta_start,
                beta_end: args.beta_end,
                seed: args.seed,
            };
            simulated_anneal(&qubo.base, &clamp, &schedule, mode)?
        }
    };
    let report = SolveReport::new(&result, vm.as_ref().map(|v| &v.decode));
    write_output(args.out.as_deref(), report.to_json().as_bytes())?;
    report.check_decoded()?;
    Ok(())
}

#[derive(Serialize)]
struct ClassifyReport {
    variant: SearchVariant,
    states: u64,
    valid_found: Option<ExactValue>,
    valid_not_found: Option<ExactValue>,
    invalid: Option<ExactValue>,
}

fn cmd_classify(args: &ClassifyArgs) -> anyhow::Result<()> {
    let variant: SearchVariant = args.variant.into();
    let p: SearchProgram =
        compile_search(&SearchConfig::new(args.n, args.bits, variant))?.with_values(args.values.as_deref(), args.target)?;
    let m = classify_states(&p, &p.clamp, args.free_limit, parallelism(args.sequential), search_class)?;
    let report = ClassifyReport {
        variant,
        states: m.states,
        valid_found: m.valid_found.as_ref().map(ExactValue::from),
        valid_not_found: m.valid_not_found.as_ref().map(ExactValue::from),
        invalid: m.invalid.as_ref().map(ExactValue::from),
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

#[derive(Serialize)]
struct AnalyzeReport {
    #[serde(flatten)]
    report: ResourceReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<HistogramComparison>,
}

fn cmd_analyze(args: &AnalyzeArgs) -> anyhow::Result<()> {
    let p = build_program(&args.program)?;
    let report = resource_report(p.as_ref());
    let comparison = match args.compare {
        None => None,
        Some(v) => {
            if args.program.kind != Kind::Search {
                return Err(usage("--compare applies to search programs"));
            }
            let other = build_program(&ProgramArgs { variant: v, ..args.program.clone() })?;
            Some(degree_histogram_compare(&report, &resource_report(other.as_ref()), args.threshold))
        }
    };
    println!("{}", serde_json::to_string_pretty(&AnalyzeReport { report, comparison })?);
    Ok(())
}

#[derive(Serialize)]
struct FitReport {
    model: FitModel,
    column: &'static str,
    /// Leading coefficient first.
    coefficients: Vec<ExactValue>,
    r_squared: f64,
}

fn column(row: &SweepRow, c: Column) -> (&'static str, usize) {
    match c {
        Column::TotalVars => ("total_vars", row.total_vars),
        Column::AncillaVars => ("ancilla_vars", row.ancilla_vars),
        Column::MaxDegree => ("max_degree", row.max_degree),
        Column::TermCount => ("term_count", row.term_count),
    }
}

fn cmd_sweep(args: &SweepArgs) -> anyhow::Result<()> {
    let ns: Vec<usize> = match (&args.ns, args.from, args.to) {
        (Some(ns), _, _) => ns.clone(),
        (None, Some(from), Some(to)) => {
            if args.step == 0 {
                return Err(usage("--step must be positive"));
            }
            (from..=to).step_by(args.step).collect()
        }
        _ => return Err(usage("give --ns or --from/--to")),
    };
    if ns.is_empty() {
        return Err(usage("the N list is empty"));
    }
    let opts = SweepOptions { parallelism: parallelism(args.sequential), timing: !args.no_timing };
    let rows = sweep(args.builder.into(), &ns, args.bits, &opts)?;
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    write_output(args.out.as_deref(), &csv)?;

    if let Some(f) = args.fit {
        let model = match f {
            FitArg::Linear => FitModel::Linear,
            FitArg::Quadratic => FitModel::Quadratic,
        };
        let ok_rows: Vec<&SweepRow> = rows.iter().filter(|r| r.error.is_empty()).collect();
        let name = column(rows.first().expect("non-empty sweep"), args.fit_column).0;
        let points: Vec<(i64, i64)> = ok_rows.iter().map(|r| (r.n as i64, column(r, args.fit_column).1 as i64)).collect();
        let fit = fit_points(model, &points)?;
        let report = FitReport {
            model,
            column: name,
            coefficients: fit.coefficients.iter().map(ExactValue::from).collect(),
            r_squared: fit.r_squared_f64(),
        };
        eprintln!("{}", serde_json::to_string_pretty(&report)?);
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Capacity { .. }) => 3,
        Some(Error::Inconsistent(_)) => 4,
        Some(Error::Numeric(_)) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_valid() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn varmap_beside_qubo() {
        assert_eq!(default_varmap(Path::new("out/s.qubo")), PathBuf::from("out/s.varmap.json"));
        assert_eq!(default_varmap(Path::new("s")), PathBuf::from("s.varmap.json"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Capacity { free: 30, limit: 24 }.into()), 3);
        assert_eq!(exit_code(&Error::Inconsistent("x".into()).into()), 4);
        assert_eq!(exit_code(&usage("bad")), 2);
        assert_eq!(exit_code(&anyhow::anyhow!("io")), 1);
    }
}
