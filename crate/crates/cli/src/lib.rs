//! The `synto` command line: generator tables, formal group series, generic
//! spectral sequence runs, and charts.

pub mod chart;
pub mod render;

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use synto_core::formal_group::{p_series, right_unit_t, FormalGroupError, Ideal};
use synto_core::graded::is_prime;
use synto_core::ss::{
    build_page, parse_presentation, run_to_stable, BidegreeRule, PageLog, SsError, Window,
};
use synto_core::summand::{
    default_window, derive_differentials, run_pipeline, run_tcminus, run_tp, ss_window,
    FrobeniusUnit, GeneratorTable, PipelineConfig, SummandError,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn generated_by() -> String {
    format!("synto {VERSION}")
}

/// Exit code for malformed input or arguments.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for a failed internal consistency check.
pub const EXIT_ASSERTION: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Assertion(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Assertion(_) => EXIT_ASSERTION,
        }
    }
}

impl From<SsError> for CliError {
    fn from(e: SsError) -> CliError {
        match e {
            SsError::Parse { .. }
            | SsError::NotPrime(_)
            | SsError::Invalid(_)
            | SsError::Unbounded(_) => CliError::Usage(e.to_string()),
            e => CliError::Assertion(e.to_string()),
        }
    }
}

impl From<FormalGroupError> for CliError {
    fn from(e: FormalGroupError) -> CliError {
        match e {
            FormalGroupError::WindowTooSmall { .. } | FormalGroupError::BadIdeal(_) => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Assertion(e.to_string()),
        }
    }
}

impl From<SummandError> for CliError {
    fn from(e: SummandError) -> CliError {
        match e {
            SummandError::NotPrime(_) | SummandError::WindowTooSmall(_) => {
                CliError::Usage(e.to_string())
            }
            SummandError::Ss(e) => e.into(),
            SummandError::FormalGroup(e) => e.into(),
            e => CliError::Assertion(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "synto",
    version,
    about = "Mod (p, v1, v2) syntomic cohomology of the Adams summand"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the generator table of syntomic cohomology mod (p, v1).
    Syntomic(SyntomicArgs),
    /// Print formal group law series.
    Fgl {
        #[command(subcommand)]
        series: FglCommand,
    },
    /// Run a spectral sequence from a presentation file or a preset.
    Ss(SsArgs),
    /// Draw a generator table.
    Chart(ChartArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Table,
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct SyntomicArgs {
    #[arg(long, short)]
    pub prime: u64,
    #[arg(long, value_enum, default_value_t = TableFormat::Table)]
    pub format: TableFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Degree window `MIN,MAX` or `MIN,MAX,WMIN,WMAX` (default -2,2p²+2p+2,0,2p²).
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Frobenius unit convention: one, minus-one, indexed.
    #[arg(long, default_value = "one")]
    pub unit: FrobeniusUnit,
    /// Skip closed-form, bookkeeping and Hodge–Tate checks.
    #[arg(long)]
    pub no_verify: bool,
    #[arg(long, short, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct FglArgs {
    #[arg(long, short)]
    pub prime: u64,
    /// Reduction ideal, e.g. `p` or `p,v1`.
    #[arg(long = "mod")]
    pub ideal: Option<String>,
    /// Truncation: terms of t-degree at least this are dropped.
    #[arg(long)]
    pub trunc: Option<i64>,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    pub format: TextFormat,
}

#[derive(Debug, Subcommand)]
pub enum FglCommand {
    /// [p](t) = exp(p·log t).
    PSeries(FglArgs),
    /// η_R(t) in the Hopf algebroid.
    RightUnit(FglArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Tp,
    Tcminus,
}

#[derive(Debug, Args)]
pub struct SsArgs {
    /// Presentation file (`gen`, `rel`, `diff`, `window`, `prime` lines).
    pub file: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "file")]
    pub preset: Option<Preset>,
    #[arg(long, short, default_value_t = 2)]
    pub prime: u64,
    /// Table degree window `MIN,MAX` for presets.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    pub format: TextFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChartFormat {
    Svg,
    Ascii,
}

#[derive(Debug, Args)]
pub struct ChartArgs {
    /// Generator table JSON (as written by `syntomic --format json`).
    pub table: Option<PathBuf>,
    /// Compute the table for this prime instead of reading one.
    #[arg(long, short, conflicts_with = "table")]
    pub prime: Option<u64>,
    #[arg(long, value_enum, default_value_t = ChartFormat::Svg)]
    pub format: ChartFormat,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn parse_ints(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Usage(format!("bad window `{s}`")))
        })
        .collect()
}

/// Parses `MIN,MAX` or `MIN,MAX,WMIN,WMAX`; missing weights come from `fallback`.
pub fn parse_window(s: &str, fallback: Window) -> Result<Window, CliError> {
    let v = parse_ints(s)?;
    let w = match v.as_slice() {
        [a, b] => Window::new((*a, *b), fallback.weight),
        [a, b, c, d] => Window::new((*a, *b), (*c, *d)),
        _ => {
            return Err(CliError::Usage(format!(
                "bad window `{s}`: expected MIN,MAX[,WMIN,WMAX]"
            )))
        }
    };
    if w.degree.0 > w.degree.1 || w.weight.0 > w.weight.1 {
        return Err(CliError::Usage(format!(
            "bad window `{s}`: min exceeds max"
        )));
    }
    Ok(w)
}

fn require_prime(p: u64) -> Result<(), CliError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{p} is not prime")))
    }
}

/// Where ANSI styling is used, from `SYNTO_COLOR` (`auto`, `always`, `never`).
pub fn color_enabled(to_terminal: bool) -> bool {
    match std::env::var("SYNTO_COLOR").as_deref() {
        Ok("always") => true,
        Ok("never") => false,
        _ => to_terminal,
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn cmd_syntomic(args: &SyntomicArgs) -> Result<GeneratorTable, CliError> {
    require_prime(args.prime)?;
    let window = args
        .window
        .as_deref()
        .map(|w| parse_window(w, default_window(args.prime)))
        .transpose()?;
    let config = PipelineConfig {
        prime: args.prime,
        window,
        unit: args.unit,
        verify: !args.no_verify,
    };
    let out = run_pipeline(&config)?;
    if args.verbose > 0 {
        for d in &out.differentials {
            eprintln!("{d}");
        }
        for c in &out.derivation_checks {
            eprintln!("check: {c}");
        }
        for v in &out.verified {
            eprintln!("verified: {v}");
        }
    }
    let text = match args.format {
        TableFormat::Table => {
            let color = args.output.is_none() && color_enabled(io::stdout().is_terminal());
            render::table_text(&out.table, color)
        }
        TableFormat::Json => render::table_json(&out.table),
        TableFormat::Csv => render::table_csv(&out.table)?,
        TableFormat::Svg => chart::svg(&out.table, &generated_by()),
    };
    emit(&args.output, &text)?;
    Ok(out.table)
}

/// The series text for an `fgl` command.
pub fn cmd_fgl(command: &FglCommand) -> Result<String, CliError> {
    let (args, right_unit) = match command {
        FglCommand::PSeries(a) => (a, false),
        FglCommand::RightUnit(a) => (a, true),
    };
    let p = args.prime;
    require_prime(p)?;
    let ideal: Ideal = match &args.ideal {
        Some(s) => s
            .parse()
            .map_err(|e: FormalGroupError| CliError::Usage(e.to_string()))?,
        None => Ideal::none(),
    };
    let pi = p as i64;
    let series = if right_unit {
        let bound = args.trunc.unwrap_or(pi + 2);
        right_unit_t(p, bound, &ideal)?.series
    } else {
        let bound = args
            .trunc
            .unwrap_or_else(|| ideal.height().map_or(2, |h| pi.pow(h as u32) + 1));
        p_series(p, bound, &ideal)?
    };
    Ok(match args.format {
        TextFormat::Text => format!("{}\n", series.display(true)),
        TextFormat::Json => {
            render::series_json(&series, if right_unit { "right-unit" } else { "p-series" })
        }
    })
}

/// The page log of an `ss` run.
pub fn cmd_ss(args: &SsArgs) -> Result<PageLog, CliError> {
    if let Some(preset) = args.preset {
        require_prime(args.prime)?;
        let degrees = match &args.window {
            Some(w) => parse_window(w, default_window(args.prime))?.degree,
            None => default_window(args.prime).degree,
        };
        let derived = derive_differentials(args.prime)?;
        let window = ss_window(args.prime, degrees);
        let (_, log) = match preset {
            Preset::Tp => run_tp(&derived, window)?,
            Preset::Tcminus => run_tcminus(&derived, window)?,
        };
        return Ok(log);
    }
    let Some(path) = &args.file else {
        return Err(CliError::Usage(
            "give a presentation file or --preset".into(),
        ));
    };
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file = parse_presentation(&text).map_err(|e| match e {
        SsError::Parse { line, message } => {
            CliError::Usage(format!("{}:{line}: {message}", path.display()))
        }
        e => e.into(),
    })?;
    let e1 = build_page(&file.presentation, file.window)?;
    let max_page = file.spec.last_page().unwrap_or(1) + 1;
    let (_, log) = run_to_stable(&e1, &file.spec, &BidegreeRule::adams(), max_page)?;
    Ok(log)
}

pub fn cmd_chart(args: &ChartArgs) -> Result<String, CliError> {
    let table = match (&args.table, args.prime) {
        (_, Some(p)) => {
            require_prime(p)?;
            run_pipeline(&PipelineConfig::new(p))?.table
        }
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Err(CliError::Usage("give a table file or --prime".into())),
    };
    Ok(match args.format {
        ChartFormat::Svg => chart::svg(&table, &generated_by()),
        ChartFormat::Ascii => chart::ascii(&table),
    })
}

/// Runs one parsed command line, writing results to stdout or files.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Syntomic(args) => {
            cmd_syntomic(args)?;
        }
        Command::Fgl { series } => emit(&None, &cmd_fgl(series)?)?,
        Command::Ss(args) => {
            let log = cmd_ss(args)?;
            let text = match args.format {
                TextFormat::Text => render::page_log_text(&log),
                TextFormat::Json => {
                    serde_json::to_string_pretty(&log).expect("page log serializes") + "\n"
                }
            };
            emit(&None, &text)?;
        }
        Command::Chart(args) => emit(&args.output, &cmd_chart(args)?)?,
    }
    Ok(())
}
