use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pppt_core::experiments::{self, grid, Scale, SweepMethod, SweepSpec, Table, SCHEMA_VERSION, TOOL_VERSION};
use pppt_core::fixed_rate::{compare_c_vs_t, highest_throughput};
use pppt_core::ian::optimal_density;
use pppt_core::sim::{estimate_cognitive, estimate_fixed_rate, InterferenceMode, RateMode, SimOptions};
use pppt_core::{DecodingRule, Error, NetworkConfig};

/// Spatial throughput of Poisson ad hoc networks with interference-as-noise
/// and optimal decoding.
///
/// All randomness is derived from --seed (default 0). PPPT_THREADS caps the
/// number of worker threads.
#[derive(Parser)]
#[command(name = "pppt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rate density on a grid.
    Pdf(PdfArgs),
    /// Throughput versus density.
    Sweep(SweepArgs),
    /// Data behind the figures, one file per figure.
    Figures(FigureArgs),
    /// Monte Carlo estimate at one density.
    Simulate(SimulateArgs),
    /// Density maximizing the IAN cognitive throughput.
    OptimalDensity(OptimalArgs),
    /// Cognitive versus fixed-rate throughput at one density.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct Geometry {
    /// Path-loss exponent (> 2).
    #[arg(long, default_value_t = 4.0)]
    alpha: f64,
    /// Link distance.
    #[arg(long, default_value_t = 1.0)]
    d: f64,
}

#[derive(Args)]
struct PdfArgs {
    #[arg(long, default_value = "ian")]
    rule: DecodingRule,
    #[arg(long)]
    lambda: f64,
    #[command(flatten)]
    geometry: Geometry,
    /// OPT only: condition on this many jointly decoded interferers.
    #[arg(long)]
    n: Option<usize>,
    /// Explicit evaluation points (comma separated); overrides the grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Vec<f64>,
    #[arg(long, default_value_t = 0.0)]
    x_min: f64,
    #[arg(long, default_value_t = 10.0)]
    x_max: f64,
    #[arg(long, default_value_t = 1001)]
    points: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, default_value_t = 10_000)]
    realizations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "full")]
    mode: InterferenceMode,
    /// OPT decode-set powers.
    #[arg(long, default_value = "exact")]
    rate_mode: RateMode,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 1e-2)]
    lambda_min: f64,
    #[arg(long, default_value_t = 10.0)]
    lambda_max: f64,
    #[arg(long, default_value_t = 30)]
    points: usize,
    /// Log-spaced grid (the default).
    #[arg(long, overrides_with = "linear")]
    log: bool,
    #[arg(long, overrides_with = "log")]
    linear: bool,
    #[command(flatten)]
    geometry: Geometry,
    #[arg(long, value_delimiter = ',', default_values = ["ian", "opt"])]
    rule: Vec<DecodingRule>,
    #[arg(long, value_delimiter = ',', default_values = ["cognitive"])]
    method: Vec<SweepMethod>,
    #[command(flatten)]
    sim: SimArgs,
    /// Rate of the IAN lower bound.
    #[arg(long, default_value_t = 1.0)]
    y_ian: f64,
    /// OPT lower-bound rate with no decoded interferer; state i uses y·log2(2+i)/(1+i).
    #[arg(long, default_value_t = 2.0)]
    y_opt: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FigureArgs {
    /// Figures to produce (2-6); all when omitted.
    #[arg(long, value_delimiter = ',')]
    fig: Vec<u8>,
    /// Directory receiving fig<N>.csv or fig<N>.json.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, default_value_t = 10_000)]
    realizations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimMethod {
    Cognitive,
    Fixed,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    lambda: f64,
    #[command(flatten)]
    geometry: Geometry,
    #[arg(long, default_value = "ian")]
    rule: DecodingRule,
    #[arg(long, value_enum, default_value = "cognitive")]
    method: SimMethod,
    #[command(flatten)]
    sim: SimArgs,
    /// Sampling window radius; defaults to max(10·d, 40/√λ).
    #[arg(long)]
    window: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct OptimalArgs {
    #[command(flatten)]
    geometry: Geometry,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    lambda: f64,
    #[command(flatten)]
    geometry: Geometry,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(Error),
    Io(io::Error),
    Cells(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn write_table(table: &Table, out: Option<&Path>, format: Format) -> io::Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    match format {
        Format::Csv => table.write_csv(&mut w)?,
        Format::Json => table.write_json(&mut w)?,
    }
    w.flush()
}

fn emit(table: &Table, output: &Output) -> Result<(), Failure> {
    write_table(table, output.out.as_deref(), output.format)?;
    report(table)
}

fn report(table: &Table) -> Result<(), Failure> {
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    if table.warnings.is_empty() {
        Ok(())
    } else {
        Err(Failure::Cells(table.warnings.len()))
    }
}

fn single_row(meta: String, pairs: &[(&str, f64)]) -> Table {
    Table {
        meta,
        columns: pairs.iter().map(|(k, _)| k.to_string()).collect(),
        rows: vec![pairs.iter().map(|(_, v)| *v).collect()],
        warnings: Vec::new(),
    }
}

fn header(command: &str) -> String {
    format!("pppt schema={SCHEMA_VERSION} version={TOOL_VERSION} command={command}")
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Pdf(a) => {
            let cfg = NetworkConfig::new(a.lambda, a.geometry.d, a.geometry.alpha)?;
            let xs = if a.x.is_empty() {
                if a.x_min.partial_cmp(&a.x_max) != Some(std::cmp::Ordering::Less) || a.points < 2 {
                    return Err(Error::Config("need x_min < x_max and at least 2 points".into()).into());
                }
                grid(a.x_min, a.x_max, a.points, Scale::Linear)
            } else {
                a.x
            };
            emit(&experiments::pdf_table(&cfg, a.rule, a.n, &xs)?, &a.output)
        }
        Command::Sweep(a) => {
            let spec = SweepSpec {
                lambda_min: a.lambda_min,
                lambda_max: a.lambda_max,
                points: a.points,
                scale: if a.linear { Scale::Linear } else { Scale::Log },
                d: a.geometry.d,
                alpha: a.geometry.alpha,
                rules: a.rule,
                methods: a.method,
                realizations: a.sim.realizations,
                seed: a.sim.seed,
                sim: SimOptions { interference: a.sim.mode, rate_mode: a.sim.rate_mode, window_radius: None },
                y_ian: a.y_ian,
                y_opt: a.y_opt,
            };
            emit(&experiments::run_sweep(&spec)?, &a.output)
        }
        Command::Figures(a) => {
            let figs = if a.fig.is_empty() { experiments::FIGURES.to_vec() } else { a.fig };
            for &f in &figs {
                experiments::figure_spec(f)?;
            }
            let ext = match a.format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            let mut failed = 0;
            for f in figs {
                let table = experiments::figure(f, a.realizations, a.seed)?;
                write_table(&table, Some(&a.out.join(format!("fig{f}.{ext}"))), a.format)?;
                if let Err(Failure::Cells(n)) = report(&table) {
                    failed += n;
                }
            }
            if failed > 0 {
                Err(Failure::Cells(failed))
            } else {
                Ok(())
            }
        }
        Command::Simulate(a) => {
            let cfg = NetworkConfig::new(a.lambda, a.geometry.d, a.geometry.alpha)?;
            let opts = SimOptions { interference: a.sim.mode, rate_mode: a.sim.rate_mode, window_radius: a.window };
            let est = match a.method {
                SimMethod::Cognitive => estimate_cognitive(&cfg, a.rule, &opts, a.sim.realizations, a.sim.seed)?,
                SimMethod::Fixed => {
                    let solution = highest_throughput(&cfg, a.rule)?;
                    estimate_fixed_rate(&solution, &opts, a.sim.realizations, a.sim.seed)?
                }
            };
            let meta = format!(
                "{} rule={} method={} mode={} rate_mode={} alpha={} d={}",
                header("simulate"),
                a.rule,
                est.method.as_str(),
                est.interference_mode,
                est.rate_mode.map_or("none", |m| m.as_str()),
                a.geometry.alpha,
                a.geometry.d
            );
            let table = single_row(
                meta,
                &[
                    ("lambda", est.lambda),
                    ("mean", est.mean),
                    ("stderr", est.stderr),
                    ("n_realizations", est.n_realizations as f64),
                    ("seed", est.seed as f64),
                    ("window_radius", est.window_radius),
                ],
            );
            emit(&table, &a.output)
        }
        Command::OptimalDensity(a) => {
            let opt = optimal_density(a.geometry.d, a.geometry.alpha)?;
            let table = single_row(
                header("optimal-density"),
                &[
                    ("d", a.geometry.d),
                    ("alpha", a.geometry.alpha),
                    ("lambda", opt.lambda),
                    ("cognitive_ian_quadrature", opt.throughput.value),
                    ("golden_section_lambda", opt.golden_section_lambda),
                ],
            );
            emit(&table, &a.output)
        }
        Command::Compare(a) => {
            let cfg = NetworkConfig::new(a.lambda, a.geometry.d, a.geometry.alpha)?;
            let c = compare_c_vs_t(&cfg)?;
            let meta = format!("{} alpha={} d={}", header("compare"), a.geometry.alpha, a.geometry.d);
            let table = single_row(
                meta,
                &[
                    ("lambda", c.lambda),
                    ("cognitive_ian_quadrature", c.c_ian),
                    ("fixed_rate_ian_quadrature", c.t_ian),
                    ("cognitive_opt_quadrature", c.c_opt),
                    ("fixed_rate_opt_quadrature", c.t_opt),
                    ("gap_ian", c.gap_ian),
                    ("gap_opt", c.gap_opt),
                ],
            );
            emit(&table, &a.output)
        }
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("PPPT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("PPPT_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Cells(n)) => {
            eprintln!("error: {n} cell(s) could not be computed");
            ExitCode::from(3)
        }
    }
}
