//! Argument parsing and orchestration for the `lsndyn` binary.

use std::ffi::OsString;
use std::path::PathBuf;

use chrono::FixedOffset;
use clap::{Args, Parser, Subcommand, ValueEnum};
use lsndyn_core::ingest::parse_iso8601;
use lsndyn_core::{
    emit_report, run_compute, CalendarUnit, ClosenessVariant, ColumnMap, DdnMode, Destination, Directedness, Error,
    IngestConfig, InputFormat, MetricKind, NormalizationBase, OutputFormat, RunConfig, Sections, TimestampFormat,
    WindowPlan, WindowSpec,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_OUTPUT: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INGEST: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "lsndyn",
    version,
    about = "Quantify the dynamicity of a longitudinal social network from a timestamped edge list",
    after_help = "Exit codes: 0 success, 1 output write failure, 2 usage error, 3 ingest failure, \
                  4 internal consistency failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report: top actors, per-window and network dynamicity, full DDA vector and matrix
    Compute(RunArgs),
    /// Top-k actors by dynamicity (DDA) per metric
    Actors(RunArgs),
    /// Dynamicity of each short-interval network (DDN_SIN)
    Windows(RunArgs),
    /// Network-level dynamicity (DDN) per metric
    Network(RunArgs),
    /// Actor x window dynamicity matrix
    Matrix(RunArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClosenessArg {
    /// Sum of inverse distances; defined on disconnected graphs
    Harmonic,
    /// Classic closeness within the reachable set, Wasserman-Faust corrected
    Wf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormBaseArg {
    /// Normalize each network by its own size
    PerNetwork,
    /// Normalize every network by the aggregated network's size
    Aggregated,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DdnModeArg {
    /// Sum of actor contributions, 1 - DDA* + mean(DDA)
    Eq6,
    /// Mean actor dynamicity
    Mean,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TimestampArg {
    Epoch,
    EpochMillis,
    Iso8601,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputFormatArg {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormatArg {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Edge list to analyze
    #[arg(long, value_name = "PATH")]
    input: PathBuf,

    /// Input format
    #[arg(long, value_enum, default_value = "csv")]
    format: InputFormatArg,

    /// Column mapping: `source=a,target=b,timestamp=c[,weight=d]`, or columns in that
    /// role order (names or 0-based positions). Default: positions 0,1,2 for CSV;
    /// keys source,target,timestamp for JSONL
    #[arg(long, value_name = "MAP")]
    columns: Option<String>,

    /// CSV field delimiter (single character; `\t` for tab)
    #[arg(long, default_value = ",", value_name = "CHAR")]
    delimiter: String,

    /// CSV input has no header row
    #[arg(long)]
    no_header: bool,

    /// Timestamp encoding. ISO-8601 values without an offset are read at --tz-offset
    #[arg(long, value_enum, default_value = "epoch")]
    timestamp_format: TimestampArg,

    /// Lower-case actor labels so that labels differing only in case are one actor
    #[arg(long)]
    casefold: bool,

    /// Windowing: month | week | day (calendar, at --tz-offset; weeks start Monday),
    /// fixed:<seconds>[@<origin>] (origin defaults to the first event),
    /// bounds:<file> (one boundary per line, epoch seconds or ISO-8601).
    /// Windows are half-open [start, end); empty windows are kept
    #[arg(long, default_value = "month", value_name = "SPEC")]
    window: String,

    /// Fixed UTC offset for calendar windows and offset-less ISO-8601 input,
    /// as +HH:MM, -HH:MM or seconds
    #[arg(long, default_value = "+00:00", value_name = "OFFSET", allow_hyphen_values = true)]
    tz_offset: String,

    /// Treat interactions as directed (source -> target). Default: undirected
    #[arg(long)]
    directed: bool,

    /// Comma-separated metrics: degree, in_degree, out_degree, closeness, betweenness
    /// (in/out degree need --directed)
    #[arg(long, default_value = "degree,closeness,betweenness", value_name = "LIST")]
    metrics: String,

    /// Closeness variant
    #[arg(long, value_enum, default_value = "harmonic")]
    closeness: ClosenessArg,

    /// Normalization base for centralities
    #[arg(long, value_enum, default_value = "per-network")]
    norm_base: NormBaseArg,

    /// Network-level dynamicity formula
    #[arg(long, value_enum, default_value = "eq6")]
    ddn_mode: DdnModeArg,

    /// Number of actors in the top-dynamicity tables
    #[arg(long, default_value_t = 5, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
    top: u64,

    /// Output file (JSON, text) or directory (CSV). Default: standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Report format. Numbers carry 12 significant digits
    #[arg(long, value_enum, default_value = "text")]
    output_format: OutputFormatArg,
}

/// What went wrong before or during a run.
#[derive(Debug)]
pub enum CliError {
    /// Includes `--help` and `--version`, which exit successfully.
    Clap(clap::Error),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Clap(e) if e.use_stderr() => EXIT_USAGE,
            CliError::Clap(_) => EXIT_OK,
            CliError::Run(e) => exit_code(e),
        }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => EXIT_USAGE,
        Error::Ingest(_) | Error::Io { .. } | Error::OutsideWindows { .. } => EXIT_INGEST,
        Error::Consistency(_) => EXIT_INTERNAL,
        Error::Output { .. } => EXIT_OUTPUT,
    }
}

fn usage(msg: String) -> CliError {
    CliError::Clap(clap::Error::raw(clap::error::ErrorKind::ValueValidation, msg + "\n"))
}

/// Parses `+HH:MM`, `-HH:MM`, `Z`/`UTC` or signed seconds.
pub fn parse_tz_offset(raw: &str) -> Option<i32> {
    let raw = raw.trim();
    if raw.eq_ignore_ascii_case("z") || raw.eq_ignore_ascii_case("utc") {
        return Some(0);
    }
    if let Ok(secs) = raw.parse::<i32>() {
        return (secs.abs() < 86_400).then_some(secs);
    }
    let (sign, rest) = match raw.as_bytes().first()? {
        b'+' => (1, &raw[1..]),
        b'-' => (-1, &raw[1..]),
        _ => return None,
    };
    let (h, m) = rest.split_once(':').unwrap_or((rest, "0"));
    let (h, m): (i32, i32) = (h.parse().ok()?, m.parse().ok()?);
    (h < 24 && m < 60).then_some(sign * (h * 3600 + m * 60))
}

/// Parses a `--window` value.
pub fn parse_window(raw: &str, utc_offset_seconds: i32) -> Result<WindowSpec, String> {
    let calendar = |unit| Ok(WindowSpec::Plan(WindowPlan::Calendar { unit, utc_offset_seconds }));
    match raw.trim() {
        "month" => calendar(CalendarUnit::Month),
        "week" => calendar(CalendarUnit::Week),
        "day" => calendar(CalendarUnit::Day),
        other => {
            if let Some(rest) = other.strip_prefix("fixed:") {
                let (len, origin) = match rest.split_once('@') {
                    Some((l, o)) => (l, Some(o)),
                    None => (rest, None),
                };
                let length: i64 = len
                    .parse()
                    .ok()
                    .filter(|&l| l > 0)
                    .ok_or_else(|| format!("invalid window length `{len}` in `{raw}`"))?;
                let tz = chrono_offset(utc_offset_seconds)?;
                let origin = origin
                    .map(|o| {
                        o.parse::<i64>()
                            .ok()
                            .or_else(|| parse_iso8601(o, &tz))
                            .ok_or_else(|| format!("invalid window origin `{o}` in `{raw}`"))
                    })
                    .transpose()?;
                Ok(WindowSpec::Plan(WindowPlan::FixedDuration { length, origin }))
            } else if let Some(path) = other.strip_prefix("bounds:") {
                if path.is_empty() {
                    return Err(format!("missing file in `{raw}`"));
                }
                Ok(WindowSpec::BoundsFile { path: PathBuf::from(path), utc_offset_seconds })
            } else {
                Err(format!("invalid window spec `{raw}` (expected month, week, day, fixed:<seconds> or bounds:<file>)"))
            }
        }
    }
}

fn chrono_offset(secs: i32) -> Result<FixedOffset, String> {
    FixedOffset::east_opt(secs).ok_or_else(|| format!("UTC offset {secs}s is out of range"))
}

/// Parses a metric list, dropping repeats.
pub fn parse_metrics(raw: &str) -> Result<Vec<MetricKind>, String> {
    let mut out = Vec::new();
    for token in raw.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let kind: MetricKind = token.parse().map_err(|_| format!("invalid metric `{token}`"))?;
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    if out.is_empty() {
        return Err("at least one metric is required".into());
    }
    Ok(out)
}

fn parse_delimiter(raw: &str) -> Result<u8, String> {
    match raw {
        "\\t" | "tab" => Ok(b'\t'),
        s if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        s => Err(format!("invalid delimiter `{s}` (one ASCII character)")),
    }
}

impl RunArgs {
    fn into_config(self, sections: Sections) -> Result<RunConfig, CliError> {
        let tz = parse_tz_offset(&self.tz_offset).ok_or_else(|| usage(format!("invalid --tz-offset `{}`", self.tz_offset)))?;
        let window = parse_window(&self.window, tz).map_err(usage)?;
        let metrics = parse_metrics(&self.metrics).map_err(usage)?;
        let directedness = if self.directed { Directedness::Directed } else { Directedness::Undirected };
        if !self.directed {
            if let Some(kind) = metrics.iter().find(|k| k.requires_directed()) {
                return Err(usage(format!("metric `{kind}` requires --directed")));
            }
        }
        let format = match self.format {
            InputFormatArg::Csv => InputFormat::Csv,
            InputFormatArg::Jsonl => InputFormat::Jsonl,
        };
        let columns = match &self.columns {
            Some(raw) => raw.parse::<ColumnMap>().map_err(|e| usage(format!("invalid --columns `{raw}`: {e}")))?,
            None => ColumnMap::default_for(format),
        };
        let ingest = IngestConfig {
            format,
            delimiter: parse_delimiter(&self.delimiter).map_err(usage)?,
            columns,
            timestamp_format: match self.timestamp_format {
                TimestampArg::Epoch => TimestampFormat::EpochSeconds,
                TimestampArg::EpochMillis => TimestampFormat::EpochMillis,
                TimestampArg::Iso8601 => TimestampFormat::Iso8601,
            },
            naive_utc_offset_seconds: tz,
            casefold_ids: self.casefold,
            has_header: !self.no_header,
        };
        Ok(RunConfig {
            input: self.input,
            ingest,
            window,
            directedness,
            metrics,
            closeness_variant: match self.closeness {
                ClosenessArg::Harmonic => ClosenessVariant::Harmonic,
                ClosenessArg::Wf => ClosenessVariant::WfCorrected,
            },
            normalization_base: match self.norm_base {
                NormBaseArg::PerNetwork => NormalizationBase::PerNetwork,
                NormBaseArg::Aggregated => NormalizationBase::AggregatedN,
            },
            ddn_mode: match self.ddn_mode {
                DdnModeArg::Eq6 => DdnMode::Eq6Literal,
                DdnModeArg::Mean => DdnMode::MeanDda,
            },
            top_k: usize::try_from(self.top).map_err(|_| usage(format!("--top {} is too large", self.top)))?,
            output_format: match self.output_format {
                OutputFormatArg::Csv => OutputFormat::Csv,
                OutputFormatArg::Json => OutputFormat::Json,
                OutputFormatArg::Text => OutputFormat::Text,
            },
            out: self.out,
            sections,
        })
    }
}

/// Turns an argument vector (program name first) into a validated run.
pub fn parse_cli<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Clap)?;
    let none = Sections::none();
    let (args, sections) = match cli.command {
        Command::Compute(a) => (a, Sections::all()),
        Command::Actors(a) => (a, Sections { top_actors: true, ..none }),
        Command::Windows(a) => (a, Sections { windows: true, ..none }),
        Command::Network(a) => (a, Sections { network: true, ..none }),
        Command::Matrix(a) => (a, Sections { matrix: true, ..none }),
    };
    args.into_config(sections)
}

/// Runs the analysis and writes the report.
pub fn execute(config: &RunConfig) -> Result<(), Error> {
    let report = run_compute(config)?;
    let destination = config.out.clone().map_or(Destination::Stdout, Destination::Path);
    emit_report(&report, config.output_format, &destination)
}
