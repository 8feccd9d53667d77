use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sigbits::bernoulli::{required_samples, BitRange};
use sigbits::error_model::{ErrorKind, Reference};
use sigbits::report::{
    analyze, curves_csv, demo_cramer, parse_estimators, AnalysisConfig, Estimator, OutputFormat, SignificanceReport,
};
use sigbits::samples::{parse_value, SampleSet};
use sigbits::stats::Probability;
use sigbits::stochastic::{NoiseConfig, NoiseModel};
use sigbits::tables::{compare_nsamples, compare_shift, nsamples_table, shift_table, SampleCountSpec, ShiftSpec};
use sigbits::{Error, Result};

const DEFAULT_SEED: u64 = 1;
const SEED_VAR: &str = "SIGBITS_SEED";

#[derive(Parser)]
#[command(name = "sigbits", version, about = "Certified significant and contributing bits of stochastic samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run estimators on a sample file and print a report.
    Analyze(AnalyzeArgs),
    /// Samples needed for a distribution-free certificate at (p, confidence).
    SampleSize {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        confidence: f64,
    },
    /// Regenerate the sample-count and shift tables.
    Tables {
        #[arg(long, value_enum, default_value_t = Which::Both)]
        which: Which,
        /// Output directory; tables go to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Aligned text instead of CSV.
        #[arg(long)]
        text: bool,
    },
    /// Generate Cramer benchmark samples and analyze them.
    DemoCramer(DemoArgs),
    /// Per-bit Bernoulli curves as CSV.
    Curves(AnalyzeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Nsamples,
    Shift,
    Both,
}

#[derive(Args)]
struct EstimatorArgs {
    /// Comma separated subset of cnh,bernoulli,mca,cestac.
    #[arg(long, default_value = "cnh,bernoulli,mca,cestac")]
    estimators: String,
    #[arg(long, default_value_t = 0.95)]
    p: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Target probability for contributing bits.
    #[arg(long)]
    contribution_p: Option<f64>,
    /// Highest bit rank examined: 53 or 24.
    #[arg(long, default_value = "53")]
    bits: String,
    #[arg(long, default_value = "json")]
    format: String,
    /// Exit with status 2 when a precondition warning is raised.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    input: PathBuf,
    /// "mean", a number, or a second sample file paired by line.
    #[arg(long, default_value = "mean")]
    reference: String,
    /// absolute or relative.
    #[arg(long, default_value = "relative")]
    kind: String,
    #[command(flatten)]
    est: EstimatorArgs,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 10000)]
    n: usize,
    #[arg(long, default_value = "mca_rr")]
    model: String,
    #[arg(long, default_value_t = 52)]
    t: u32,
    /// Overrides SIGBITS_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for x0.txt, x1.txt and report.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write samples as hexadecimal floats.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    est: EstimatorArgs,
}

enum Outcome {
    Ok,
    PreconditionFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::PreconditionFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("sigbits: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Analyze(args) => {
            let (x, reference, config, format) = load(&args)?;
            let report = analyze(&x, reference, &config)?.with_source(args.input.display().to_string());
            emit(&report.render(format)?, args.out.as_deref())?;
            Ok(strict_outcome(&config, &report))
        }
        Command::Curves(args) => {
            let (x, reference, mut config, _) = load(&args)?;
            config.estimators.insert(Estimator::Bernoulli);
            let report = analyze(&x, reference, &config)?;
            emit(&curves_csv(&report.curves), args.out.as_deref())?;
            Ok(strict_outcome(&config, &report))
        }
        Command::SampleSize { p, confidence } => {
            let p = Probability::new(p).map_err(usage)?;
            let c = Probability::new(confidence).map_err(usage)?;
            println!("{}", required_samples(p, c.complement()));
            Ok(Outcome::Ok)
        }
        Command::Tables { which, out, text } => tables(which, out.as_deref(), text),
        Command::DemoCramer(args) => demo(args),
    }
}

fn usage(e: Error) -> Error {
    match e {
        Error::Domain(msg) => Error::Usage(msg),
        other => Error::Usage(other.to_string()),
    }
}

fn config_from(est: &EstimatorArgs, kind: ErrorKind) -> Result<(AnalysisConfig, OutputFormat)> {
    let estimators = parse_estimators(&est.estimators)?;
    let mut config = AnalysisConfig::new(kind, estimators, est.p, est.alpha).map_err(usage)?;
    if let Some(cp) = est.contribution_p {
        Probability::new(cp).map_err(usage)?;
        config.contribution_p = Some(cp);
    }
    config.bit_range = est.bits.parse::<BitRange>()?;
    config.strict = est.strict;
    Ok((config, est.format.parse()?))
}

fn load(args: &AnalyzeArgs) -> Result<(SampleSet, Reference, AnalysisConfig, OutputFormat)> {
    let kind: ErrorKind = args.kind.parse()?;
    let (config, format) = config_from(&args.est, kind)?;
    let x = SampleSet::from_path(&args.input)?;
    let reference = if args.reference == "mean" {
        Reference::SampleMean
    } else if let Ok(v) = parse_value(&args.reference) {
        Reference::Scalar(v)
    } else {
        Reference::Paired(SampleSet::from_path(&args.reference)?)
    };
    Ok((x, reference, config, format))
}

fn strict_outcome(config: &AnalysisConfig, report: &SignificanceReport) -> Outcome {
    let failed = report.precondition_warnings();
    if config.strict && !failed.is_empty() {
        for w in failed {
            eprintln!("sigbits: strict: {w}");
        }
        Outcome::PreconditionFailed
    } else {
        Outcome::Ok
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn tables(which: Which, out: Option<&Path>, text: bool) -> Result<Outcome> {
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
    }
    let ext = if text { "txt" } else { "csv" };
    if matches!(which, Which::Nsamples | Which::Both) {
        let t = nsamples_table(&SampleCountSpec::standard());
        let body = if text { t.to_text() } else { t.to_csv() };
        emit(&body, out.map(|d| d.join(format!("nsamples_table.{ext}"))).as_deref())?;
        eprintln!(
            "nsamples: (0.95, 0.99) = {}, (0.999, 0.999) = {}, (0.66, 0.66) = {}; golden: {}",
            t.cell("0.95", "0.99").unwrap_or_default(),
            t.cell("0.999", "0.999").unwrap_or_default(),
            t.cell("0.66", "0.66").unwrap_or_default(),
            compare_nsamples(&t)
        );
    }
    if matches!(which, Which::Shift | Which::Both) {
        let t = shift_table(&ShiftSpec::standard())?;
        let body = if text { t.to_text() } else { t.to_csv() };
        emit(&body, out.map(|d| d.join(format!("shift_table.{ext}"))).as_deref())?;
        eprintln!(
            "shift: (3, p0.9/c0.95) = {:.3}, (10000, p0.99/c0.99) = {:.3}, (30, p0.9/c0.9) = {:.3}; golden: {}",
            t.cell("3", "p0.9/c0.95").unwrap_or_default(),
            t.cell("10000", "p0.99/c0.99").unwrap_or_default(),
            t.cell("30", "p0.9/c0.9").unwrap_or_default(),
            compare_shift(&t, 0.0)
        );
    }
    Ok(Outcome::Ok)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("{SEED_VAR}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn demo(args: DemoArgs) -> Result<Outcome> {
    if args.n < 2 {
        return Err(Error::Usage(format!("--n must be at least 2, got {}", args.n)));
    }
    let model: NoiseModel = args.model.parse()?;
    let seed = resolve_seed(args.seed)?;
    let noise = if model == NoiseModel::IeeeNominal {
        NoiseConfig::ieee()
    } else {
        NoiseConfig::new(model, args.t, seed).map_err(usage)?
    };
    let (config, format) = config_from(&args.est, ErrorKind::Relative)?;
    let ([x0, x1], report) = demo_cramer(args.n, &noise, &config)?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        x0.write(dir.join("x0.txt"), args.exact)?;
        x1.write(dir.join("x1.txt"), args.exact)?;
        fs::write(dir.join("report.json"), report.to_json()?)?;
    }
    let stdout = match format {
        OutputFormat::Json => report.to_json()?,
        OutputFormat::Csv => report.x0.to_csv(),
        OutputFormat::Text => format!("[x0]\n{}[x1]\n{}", report.x0.to_text(), report.x1.to_text()),
    };
    emit(&stdout, None)?;
    let failed = report.precondition_warnings();
    if config.strict && !failed.is_empty() {
        for w in failed {
            eprintln!("sigbits: strict: {w}");
        }
        return Ok(Outcome::PreconditionFailed);
    }
    Ok(Outcome::Ok)
}
