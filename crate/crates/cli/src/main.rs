//! `ptune`: build and inspect Pythagorean, natural and equal-tempered scales.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use proportional_tuning::analysis::{compare_to_equal, interval_census, mean_table_with_kind};
use proportional_tuning::generator::{mean_closure, GeneratorConfig, DEFAULT_MAX_GENERATIONS};
use proportional_tuning::scales::{canonical, equal_temperament, pythagorean_by_diapente};
use proportional_tuning::{report, Error, MeanKind, Ratio, Restriction, Scale};

const EXIT_USAGE: u8 = 2;
const EXIT_CAP_HIT: u8 = 3;
const EXIT_OVERFLOW: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Plain,
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Parser)]
#[command(name = "ptune", version, about = "Exact construction and analysis of tuning systems")]
struct Cli {
    /// Output format.
    #[arg(long, short, value_enum, global = true, default_value = "plain")]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a scale with exact fractions, cents and step intervals.
    ///
    /// SCALE is a canonical name (T, T5, PYTHAGOREAN, NATURAL, SN1, SN2,
    /// FINALES, HEXACHORD_NATURAL), `pythagorean:steps=K`, `equal:N=K`
    /// or `tones:1,9/8,5/4,2`.
    Scale { scale: String },
    /// Iterate the mean generator from a seed scale to a fixpoint.
    Closure {
        seed: String,
        /// Allowed primes, comma separated; must include 2.
        #[arg(long, default_value = "2,3,5")]
        primes: String,
        /// Mean kinds, comma separated from A, G, H.
        #[arg(long, default_value = "A")]
        kinds: String,
        #[arg(long, default_value_t = DEFAULT_MAX_GENERATIONS)]
        max_generations: usize,
    },
    /// Tabulate pairwise means of a scale and classify each cell.
    Table {
        scale: String,
        #[arg(long, default_value = "2,3,5")]
        primes: String,
        /// A (arithmetic) or H (harmonic).
        #[arg(long, default_value = "A")]
        kind: String,
    },
    /// Compare each tone with the nearest degree of an equal temperament.
    Compare {
        scale: String,
        #[arg(long = "N", short = 'n', default_value_t = 12)]
        divisions: u32,
    },
    /// Count the step intervals of a scale.
    Intervals { scale: String },
}

enum Failure {
    Usage(String),
    Overflow,
    CapHit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Overflow => Failure::Overflow,
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn parse_count<T: std::str::FromStr>(text: &str, what: &str) -> Result<T, Failure> {
    text.trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("invalid {what}: {text:?}")))
}

fn resolve_scale(arg: &str) -> Result<Scale, Failure> {
    if let Some(rest) = arg.strip_prefix("pythagorean:") {
        let steps = rest
            .strip_prefix("steps=")
            .ok_or_else(|| Failure::Usage(format!("expected pythagorean:steps=K, got {arg:?}")))?;
        return Ok(pythagorean_by_diapente(parse_count(steps, "step count")?)?);
    }
    if let Some(rest) = arg.strip_prefix("tones:") {
        let ratios = rest
            .split(',')
            .map(|t| t.trim().parse::<Ratio>())
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Scale::from_ratios(arg, ratios)?);
    }
    Ok(canonical(arg)?)
}

fn parse_kinds(text: &str) -> Result<Vec<MeanKind>, Failure> {
    Ok(text
        .split(',')
        .map(|k| k.trim().parse::<MeanKind>())
        .collect::<Result<Vec<_>, _>>()?)
}

fn render_scale(arg: &str, format: OutputFormat) -> Result<String, Failure> {
    if let Some(rest) = arg.strip_prefix("equal:") {
        let n = rest
            .strip_prefix("N=")
            .ok_or_else(|| Failure::Usage(format!("expected equal:N=K, got {arg:?}")))?;
        let et = equal_temperament(parse_count(n, "division count")?)?;
        return Ok(match format {
            OutputFormat::Plain => report::equal_plain(&et),
            OutputFormat::Json => report::equal_json(&et),
            OutputFormat::Csv => report::equal_csv(&et),
            OutputFormat::Markdown => report::equal_markdown(&et),
        });
    }
    let scale = resolve_scale(arg)?;
    Ok(match format {
        OutputFormat::Plain => report::scale_plain(&scale)?,
        OutputFormat::Json => report::scale_json(&scale),
        OutputFormat::Csv => report::scale_csv(&scale),
        OutputFormat::Markdown => report::scale_markdown(&scale)?,
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Scale { scale } => render_scale(&scale, format),
        Command::Closure {
            seed,
            primes,
            kinds,
            max_generations,
        } => {
            let seed = resolve_scale(&seed)?;
            let restriction: Restriction = primes.parse()?;
            let config = GeneratorConfig::new(parse_kinds(&kinds)?, restriction, max_generations, true)?;
            let trace = mean_closure(&seed, &config)?;
            let out = match format {
                OutputFormat::Plain => report::trace_plain(&trace),
                OutputFormat::Json => report::trace_json(&trace),
                OutputFormat::Csv => report::trace_csv(&trace),
                OutputFormat::Markdown => report::trace_markdown(&trace),
            };
            if trace.fixpoint_reached {
                Ok(out)
            } else {
                Err(Failure::CapHit(out))
            }
        }
        Command::Table { scale, primes, kind } => {
            let scale = resolve_scale(&scale)?;
            let restriction: Restriction = primes.parse()?;
            let table = mean_table_with_kind(&scale, &restriction, kind.trim().parse()?)?;
            Ok(match format {
                OutputFormat::Plain => report::table_plain(&table),
                OutputFormat::Json => report::table_json(&table),
                OutputFormat::Csv => report::table_csv(&table),
                OutputFormat::Markdown => report::table_markdown(&table),
            })
        }
        Command::Compare { scale, divisions } => {
            let rows = compare_to_equal(&resolve_scale(&scale)?, divisions)?;
            Ok(match format {
                OutputFormat::Plain => report::compare_plain(&rows, divisions),
                OutputFormat::Json => report::compare_json(&rows),
                OutputFormat::Csv => report::compare_csv(&rows),
                OutputFormat::Markdown => report::compare_markdown(&rows, divisions),
            })
        }
        Command::Intervals { scale } => {
            let census = interval_census(&resolve_scale(&scale)?)?;
            Ok(match format {
                OutputFormat::Plain => report::census_plain(&census),
                OutputFormat::Json => report::census_json(&census),
                OutputFormat::Csv => report::census_csv(&census),
                OutputFormat::Markdown => report::census_markdown(&census),
            })
        }
    }
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    // A closed pipe is not worth a panic.
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(Failure::CapHit(text)) => {
            emit(&text);
            eprintln!("ptune: generation cap reached before a fixpoint");
            ExitCode::from(EXIT_CAP_HIT)
        }
        Err(Failure::Overflow) => {
            eprintln!("ptune: {}", Error::Overflow);
            ExitCode::from(EXIT_OVERFLOW)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("ptune: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
