//! `analyze`: batch front end for circuit noise-tolerance analysis.
//!
//! Exit codes: 0 ok, 1 runtime failure, 2 usage error.

mod output;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use qtol_core::analysis::{self, AnalysisConfig, AnalysisResult};
use qtol_core::generators::{self, BenchmarkParams, BenchmarkSpec, Family};
use qtol_core::{qasm, Bitstring, Circuit, Engine, ErrorRates, SuccessCriterion};
use thiserror::Error;

use output::{Format, Record, TOOL_VERSION};

#[derive(Debug, Parser)]
#[command(name = "analyze", version, about = "Success probability and tolerable Pauli error rates of quantum circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expected success probability at a given error rate.
    Success {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        rates: RateArgs,
        #[command(flatten)]
        criterion: CriterionArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Largest uniform error rate that still reaches a target success probability.
    Tolerable {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        criterion: CriterionArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Success probability across a family and size range at a fixed rate.
    Sweep {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        rates: RateArgs,
        #[command(flatten)]
        criterion: CriterionArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Fit tolerable rate = a/G and predict it at a larger gate count.
    Extrapolate {
        /// Gate count G* to predict at.
        #[arg(long, value_parser = parse_positive)]
        target_gates: f64,
        /// CSV of measured points with columns G,rate (header optional).
        #[arg(long, conflicts_with_all = ["family", "qasm"])]
        points_file: Option<PathBuf>,
        /// Also fit an intercept: rate = a/G + b.
        #[arg(long)]
        affine: bool,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        target: OptTargetArgs,
        #[command(flatten)]
        criterion: CriterionArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Mean heavy-output probability over random quantum-volume circuits.
    Qv {
        /// Single width.
        #[arg(long, conflicts_with = "widths")]
        width: Option<usize>,
        /// Width range, e.g. `2..6` (inclusive) or `2,3,5`.
        #[arg(long, value_parser = parse_widths)]
        widths: Option<Widths>,
        /// Number of random circuits per width.
        #[arg(long, default_value_t = analysis::DEFAULT_QV_CIRCUITS)]
        circuits: usize,
        /// Expand two-qubit blocks into CX templates.
        #[arg(long)]
        decompose_qv: bool,
        #[command(flatten)]
        rates: RateArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Clone, Args)]
struct SourceArgs {
    /// Benchmark family.
    #[arg(long, value_parser = parse_family, conflicts_with = "qasm")]
    family: Option<Family>,
    /// OpenQASM 2.0 circuit file.
    #[arg(long)]
    qasm: Option<PathBuf>,
    /// Circuit width for a single benchmark.
    #[arg(long, conflicts_with = "widths")]
    width: Option<usize>,
    /// Width range, e.g. `3..8` (inclusive) or `3,5,7`.
    #[arg(long, value_parser = parse_widths)]
    widths: Option<Widths>,
    /// BV hidden string (width - 1 bits, most significant first).
    #[arg(long)]
    hidden_string: Option<String>,
    /// Grover marked element.
    #[arg(long)]
    marked: Option<usize>,
    /// Grover iteration count.
    #[arg(long)]
    iterations: Option<usize>,
    /// RYRZ entangling depth.
    #[arg(long)]
    depth: Option<usize>,
    /// Expand QV two-qubit blocks into CX templates.
    #[arg(long)]
    decompose_qv: bool,
}

#[derive(Debug, Clone, Args)]
struct RateArgs {
    /// Uniform total Pauli rate p (p/3 per Pauli type).
    #[arg(long, value_parser = parse_probability, conflicts_with_all = ["px", "pz", "py"])]
    rate: Option<f64>,
    #[arg(long, value_parser = parse_probability)]
    px: Option<f64>,
    #[arg(long, value_parser = parse_probability)]
    pz: Option<f64>,
    #[arg(long, value_parser = parse_probability)]
    py: Option<f64>,
}

#[derive(Debug, Clone, Args)]
struct TargetArgs {
    /// Target success probability, strictly between 0 and 1.
    #[arg(long, value_parser = parse_open_unit)]
    target: f64,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Debug, Clone, Args)]
struct OptTargetArgs {
    /// Target success probability when measuring points from a family.
    #[arg(long, value_parser = parse_open_unit)]
    target: Option<f64>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Debug, Clone, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = analysis::DEFAULT_MAX_EVALUATIONS)]
    max_evaluations: usize,
    #[arg(long, default_value_t = analysis::DEFAULT_SEARCH_TOLERANCE, value_parser = parse_probability)]
    tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionKind {
    Fidelity,
    CorrectOutcome,
    HeavyOutput,
}

impl CriterionKind {
    fn as_str(self) -> &'static str {
        match self {
            CriterionKind::Fidelity => "fidelity",
            CriterionKind::CorrectOutcome => "correct-outcome",
            CriterionKind::HeavyOutput => "heavy-output",
        }
    }
}

#[derive(Debug, Clone, Args)]
struct CriterionArgs {
    /// Success criterion; defaults to correct-outcome for BV and Grover,
    /// heavy-output for QV and fidelity otherwise.
    #[arg(long, value_enum)]
    criterion: Option<CriterionKind>,
    /// Expected outcome bitstring for correct-outcome (MSB first).
    #[arg(long)]
    outcome: Option<String>,
}

#[derive(Debug, Clone, Args)]
struct RunArgs {
    /// Master seed for circuit generation and Monte Carlo sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo runs per estimate.
    #[arg(long, default_value_t = qtol_core::noise::DEFAULT_RUNS)]
    runs: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads; defaults to available parallelism.
    #[arg(long)]
    threads: Option<usize>,
    /// State-vector memory budget in MiB.
    #[arg(long, default_value_t = 1024)]
    memory_budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Widths(Vec<usize>);

fn parse_probability(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not a probability in [0, 1]"))
    }
}

fn parse_open_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} must lie strictly between 0 and 1"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} must be positive"))
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

fn parse_widths(s: &str) -> Result<Widths, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad width '{t}': {e}"));
    let widths = if let Some((a, b)) = s.split_once("..") {
        let (lo, hi) = (num(a)?, num(b.trim_start_matches('='))?);
        if lo > hi {
            return Err(format!("empty range {s}"));
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if widths.is_empty() {
        return Err("no widths given".into());
    }
    Ok(Widths(widths))
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: qasm::ParseError },
    #[error(transparent)]
    Generator(#[from] generators::GeneratorError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error(transparent)]
    Criterion(#[from] qtol_core::criteria::CriterionError),
    #[error("points file {path}: {message}")]
    Points { path: String, message: String },
    #[error(transparent)]
    Output(#[from] output::OutputError),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// A circuit plus the provenance needed to describe it in a record.
struct Job {
    family: String,
    width: usize,
    circuit: Circuit,
    criterion: SuccessCriterion,
    criterion_kind: CriterionKind,
    /// Flags that rebuild exactly this circuit, used in the config echo.
    source_flags: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => Cli::command().error(ErrorKind::ArgumentConflict, msg).exit(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run_args(cmd: &Command) -> &RunArgs {
    match cmd {
        Command::Success { run, .. }
        | Command::Tolerable { run, .. }
        | Command::Sweep { run, .. }
        | Command::Extrapolate { run, .. }
        | Command::Qv { run, .. } => run,
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let run_cfg = run_args(&cli.command).clone();
    if run_cfg.runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = run_cfg.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool.build()?;
    let records = pool.install(|| dispatch(&cli.command, &run_cfg))?;
    output::write_results(&records, run_cfg.format, run_cfg.output.as_deref())?;
    Ok(())
}

fn analysis_config(run: &RunArgs, search: Option<&SearchArgs>) -> AnalysisConfig {
    let mut cfg = AnalysisConfig {
        n_runs: run.runs,
        engine: Engine {
            memory_budget: run.memory_budget.saturating_mul(1 << 20),
        },
        ..Default::default()
    };
    if let Some(s) = search {
        cfg.max_evaluations = s.max_evaluations;
        cfg.tolerance = s.tolerance;
    }
    cfg
}

fn dispatch(cmd: &Command, run: &RunArgs) -> Result<Vec<Record>, CliError> {
    match cmd {
        Command::Success {
            source,
            rates,
            criterion,
            ..
        } => {
            if source.widths.is_some() {
                return Err(CliError::Usage("success takes --width; use sweep for a range".into()));
            }
            let rates = resolve_rates(rates)?;
            let job = single_job(source, criterion, run.seed)?;
            Ok(vec![success_record("success", &job, &rates, run)?])
        }
        Command::Sweep {
            source,
            rates,
            criterion,
            ..
        } => {
            let rates = resolve_rates(rates)?;
            if source.family.is_none() {
                return Err(CliError::Usage("sweep needs --family".into()));
            }
            family_jobs(source, criterion, run.seed)?
                .iter()
                .map(|job| success_record("sweep", job, &rates, run))
                .collect()
        }
        Command::Tolerable {
            source,
            target,
            criterion,
            ..
        } => {
            let jobs = if source.qasm.is_some() || source.widths.is_none() {
                vec![single_job(source, criterion, run.seed)?]
            } else {
                family_jobs(source, criterion, run.seed)?
            };
            jobs.iter()
                .map(|job| tolerable_record(job, target.target, &target.search, run))
                .collect()
        }
        Command::Extrapolate {
            target_gates,
            points_file,
            affine,
            source,
            target,
            criterion,
            ..
        } => {
            let mut records = Vec::new();
            let points = match points_file {
                Some(path) => read_points(path)?,
                None => {
                    let Some(t) = target.target else {
                        return Err(CliError::Usage("extrapolate needs --points-file or --family with --target".into()));
                    };
                    if source.family.is_none() || source.widths.is_none() {
                        return Err(CliError::Usage("extrapolate needs --family and --widths to measure points".into()));
                    }
                    let search = &target.search;
                    for job in family_jobs(source, criterion, run.seed)? {
                        records.push(tolerable_record(&job, t, search, run)?);
                    }
                    records
                        .iter()
                        .map(|r| (r.gates.unwrap_or(0) as f64, r.value))
                        .collect()
                }
            };
            let fit = if *affine {
                analysis::fit_inverse_affine(&points)?
            } else {
                analysis::fit_inverse(&points)?
            };
            let (family, config) = match points_file {
                Some(p) => (
                    "points".to_string(),
                    format!("extrapolate --points-file {}", p.display()),
                ),
                None => (
                    source.family.map(|f| f.as_str().to_string()).unwrap_or_default(),
                    format!(
                        "extrapolate --family {} --widths {} --target {}",
                        source.family.map(Family::as_str).unwrap_or(""),
                        widths_flag(source.widths.as_ref().expect("checked above")),
                        target.target.expect("checked above"),
                    ),
                ),
            };
            let mut config = format!("{config} --target-gates {target_gates}");
            if *affine {
                config.push_str(" --affine");
            }
            write!(config, " --seed {}", run.seed).expect("string write");
            records.push(Record {
                mode: "extrapolate".into(),
                family,
                width: None,
                gates: Some(target_gates.round() as usize),
                k: None,
                m: None,
                rate_or_target: target.target,
                value: fit.predict(*target_gates),
                stderr: None,
                regime: "FIT".into(),
                seed: run.seed,
                samples: Some(fit.points.len()),
                expected_errors: Some(target_gates * fit.predict(*target_gates)),
                fit_coefficient: Some(fit.coefficient),
                fit_mse: Some(fit.mse),
                tool_version: TOOL_VERSION.into(),
                config,
            });
            Ok(records)
        }
        Command::Qv {
            width,
            widths,
            circuits,
            decompose_qv,
            rates,
            ..
        } => {
            let rates = resolve_rates(rates)?;
            let widths = match (width, widths) {
                (Some(w), None) => vec![*w],
                (None, Some(ws)) => ws.0.clone(),
                _ => return Err(CliError::Usage("qv needs --width or --widths".into())),
            };
            let cfg = analysis_config(run, None);
            widths
                .into_iter()
                .map(|w| {
                    let r = analysis::qv_success(w, &rates, *circuits, run.seed, *decompose_qv, &cfg)?;
                    let mut config = format!("qv --width {w} {} --circuits {circuits}", rate_flags(&rates));
                    if *decompose_qv {
                        config.push_str(" --decompose-qv");
                    }
                    write!(config, " --runs {} --seed {}", run.runs, run.seed).expect("string write");
                    Ok(Record {
                        mode: "qv".into(),
                        family: Family::Qv.as_str().into(),
                        width: Some(w),
                        gates: None,
                        k: None,
                        m: None,
                        rate_or_target: Some(rates.total()),
                        value: r.value,
                        stderr: r.stderr,
                        regime: r.regime.as_str().into(),
                        seed: run.seed,
                        samples: r.samples,
                        expected_errors: Some(r.expected_errors),
                        fit_coefficient: None,
                        fit_mse: None,
                        tool_version: TOOL_VERSION.into(),
                        config,
                    })
                })
                .collect()
        }
    }
}

fn resolve_rates(args: &RateArgs) -> Result<ErrorRates, CliError> {
    let rates = match (args.rate, args.px, args.pz, args.py) {
        (Some(p), ..) => ErrorRates::uniform(p),
        (None, None, None, None) => return Err(CliError::Usage("give --rate or any of --px/--pz/--py".into())),
        (None, x, z, y) => ErrorRates::new(x.unwrap_or(0.0), z.unwrap_or(0.0), y.unwrap_or(0.0)),
    };
    rates.map_err(|e| CliError::Usage(e.to_string()))
}

fn rate_flags(rates: &ErrorRates) -> String {
    format!("--px {} --pz {} --py {}", rates.p_x(), rates.p_z(), rates.p_y())
}

fn widths_flag(w: &Widths) -> String {
    w.0.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn benchmark_params(source: &SourceArgs) -> Result<BenchmarkParams, CliError> {
    let hidden_string = source
        .hidden_string
        .as_deref()
        .map(str::parse::<Bitstring>)
        .transpose()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(BenchmarkParams {
        hidden_string,
        marked: source.marked,
        iterations: source.iterations,
        hlf_matrix: None,
        depth: source.depth,
        decompose_qv: source.decompose_qv,
    })
}

fn source_flags(source: &SourceArgs, family: Family, width: usize) -> String {
    let mut s = format!("--family {} --width {width}", family.as_str());
    if let Some(h) = &source.hidden_string {
        write!(s, " --hidden-string {h}").expect("string write");
    }
    if let Some(m) = source.marked {
        write!(s, " --marked {m}").expect("string write");
    }
    if let Some(i) = source.iterations {
        write!(s, " --iterations {i}").expect("string write");
    }
    if let Some(d) = source.depth {
        write!(s, " --depth {d}").expect("string write");
    }
    if source.decompose_qv {
        s.push_str(" --decompose-qv");
    }
    s
}

fn default_criterion(family: Option<Family>) -> CriterionKind {
    match family {
        Some(Family::Bv | Family::Grover) => CriterionKind::CorrectOutcome,
        Some(Family::Qv) => CriterionKind::HeavyOutput,
        _ => CriterionKind::Fidelity,
    }
}

fn build_criterion(
    kind: CriterionKind,
    outcome: Option<&str>,
    spec: Option<&BenchmarkSpec>,
    seed: u64,
) -> Result<SuccessCriterion, CliError> {
    Ok(match kind {
        CriterionKind::Fidelity => SuccessCriterion::Fidelity,
        CriterionKind::HeavyOutput => SuccessCriterion::HeavyOutput,
        CriterionKind::CorrectOutcome => {
            let bits = match (outcome, spec) {
                (Some(o), _) => o.parse::<Bitstring>().map_err(|e| CliError::Usage(e.to_string()))?,
                (None, Some(spec)) => generators::correct_outcome(spec, seed)?,
                (None, None) => {
                    return Err(CliError::Usage("correct-outcome on a QASM circuit needs --outcome".into()));
                }
            };
            SuccessCriterion::CorrectOutcome(bits)
        }
    })
}

fn single_job(source: &SourceArgs, criterion: &CriterionArgs, seed: u64) -> Result<Job, CliError> {
    match (&source.qasm, source.family) {
        (Some(path), _) => {
            let circuit = load_qasm(path)?;
            let kind = criterion.criterion.unwrap_or(if criterion.outcome.is_some() {
                CriterionKind::CorrectOutcome
            } else {
                CriterionKind::Fidelity
            });
            let crit = build_criterion(kind, criterion.outcome.as_deref(), None, seed)?;
            Ok(Job {
                family: "qasm".into(),
                width: circuit.width(),
                circuit,
                criterion: crit,
                criterion_kind: kind,
                source_flags: format!("--qasm {}", path.display()),
            })
        }
        (None, Some(family)) => {
            let width = source
                .width
                .ok_or_else(|| CliError::Usage("--family needs --width".into()))?;
            family_job(source, criterion, family, width, seed)
        }
        (None, None) => Err(CliError::Usage("give --family or --qasm".into())),
    }
}

fn family_jobs(source: &SourceArgs, criterion: &CriterionArgs, seed: u64) -> Result<Vec<Job>, CliError> {
    let family = source
        .family
        .ok_or_else(|| CliError::Usage("this mode needs --family".into()))?;
    let widths = match (&source.width, &source.widths) {
        (Some(w), None) => vec![*w],
        (None, Some(ws)) => ws.0.clone(),
        _ => return Err(CliError::Usage("give --width or --widths".into())),
    };
    widths
        .into_iter()
        .map(|w| family_job(source, criterion, family, w, seed))
        .collect()
}

fn family_job(
    source: &SourceArgs,
    criterion: &CriterionArgs,
    family: Family,
    width: usize,
    seed: u64,
) -> Result<Job, CliError> {
    let spec = BenchmarkSpec::new(family, width).with_params(benchmark_params(source)?);
    let circuit = generators::generate(&spec, seed)?;
    let kind = criterion.criterion.unwrap_or(default_criterion(Some(family)));
    let crit = build_criterion(kind, criterion.outcome.as_deref(), Some(&spec), seed)?;
    Ok(Job {
        family: family.as_str().into(),
        width,
        circuit,
        criterion: crit,
        criterion_kind: kind,
        source_flags: source_flags(source, family, width),
    })
}

fn load_qasm(path: &Path) -> Result<Circuit, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let parsed = qasm::parse_bytes(&bytes).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    for w in &parsed.warnings {
        eprintln!("warning: {}:{}: {}", path.display(), w.line, w.message);
    }
    Ok(parsed.circuit)
}

fn read_points(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let err = |message: String| CliError::Points {
        path: path.display().to_string(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| err(e.to_string()))?;
    let mut points = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| err(e.to_string()))?;
        if row.len() < 2 {
            return Err(err(format!("row {} has fewer than 2 columns", i + 1)));
        }
        match (row[0].parse::<f64>(), row[1].parse::<f64>()) {
            (Ok(g), Ok(r)) => points.push((g, r)),
            _ if i == 0 => continue,
            _ => return Err(err(format!("row {} is not numeric", i + 1))),
        }
    }
    Ok(points)
}

fn criterion_flags(job: &Job) -> String {
    match &job.criterion {
        SuccessCriterion::CorrectOutcome(b) => format!("--criterion {} --outcome {}", job.criterion_kind.as_str(), b.as_str()),
        _ => format!("--criterion {}", job.criterion_kind.as_str()),
    }
}

fn base_record(mode: &str, job: &Job, rate_or_target: f64, r: &AnalysisResult, seed: u64, config: String) -> Record {
    let stats = job.circuit.stats();
    Record {
        mode: mode.into(),
        family: job.family.clone(),
        width: Some(job.width),
        gates: Some(stats.total),
        k: Some(stats.single_qubit),
        m: Some(stats.two_qubit),
        rate_or_target: Some(rate_or_target),
        value: r.value,
        stderr: r.stderr,
        regime: r.regime.as_str().into(),
        seed,
        samples: r.samples,
        expected_errors: Some(r.expected_errors),
        fit_coefficient: None,
        fit_mse: None,
        tool_version: TOOL_VERSION.into(),
        config,
    }
}

fn success_record(mode: &str, job: &Job, rates: &ErrorRates, run: &RunArgs) -> Result<Record, CliError> {
    let cfg = analysis_config(run, None);
    let r = analysis::success_probability(&job.circuit, rates, &job.criterion, run.seed, &cfg)?;
    let config = format!(
        "success {} {} {} --runs {} --seed {}",
        job.source_flags,
        rate_flags(rates),
        criterion_flags(job),
        run.runs,
        run.seed
    );
    Ok(base_record(mode, job, rates.total(), &r, run.seed, config))
}

fn tolerable_record(job: &Job, target: f64, search: &SearchArgs, run: &RunArgs) -> Result<Record, CliError> {
    let cfg = analysis_config(run, Some(search));
    let r = analysis::tolerable_error_rate(&job.circuit, target, &job.criterion, run.seed, &cfg)?;
    let config = format!(
        "tolerable {} --target {target} {} --max-evaluations {} --tolerance {} --runs {} --seed {}",
        job.source_flags,
        criterion_flags(job),
        search.max_evaluations,
        search.tolerance,
        run.runs,
        run.seed
    );
    Ok(base_record("tolerable", job, target, &r, run.seed, config))
}
