//! Report assembly and rendering.
//!
//! Report numbers are rounded to 12 significant digits when the report is
//! assembled, so every rendering (and a JSON round trip) sees the same
//! values. Renderings are byte-stable for identical input and config.
//!
//! JSON schema (`lsndyn.report/1`):
//!
//! ```text
//! { "schema", "metadata": { tool, version, input, ingest, config, n, m, windows[] },
//!   "metrics": [ { metric, spec, top_actors?[], windows?[], network?, actors?[], matrix?[] } ] }
//! ```
//!
//! Undefined per-window values are `null`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::DateTime;
use serde::{Deserialize, Serialize};

use crate::centrality::{ClosenessVariant, MetricKind, MetricSpec, NormalizationBase};
use crate::dynamicity::DdnMode;
use crate::error::{Error, Result};
use crate::graph::Directedness;
use crate::ingest::IngestConfig;
use crate::pipeline::{Analysis, LoadedInput, RunConfig};
use crate::temporal::WindowPlan;

pub const SCHEMA: &str = "lsndyn.report/1";
pub const TOOL: &str = "lsndyn";
pub const SIGNIFICANT_DIGITS: usize = 12;
pub const UNDEFINED_TEXT: &str = "undef";

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Shortest representation of an already-rounded report number.
pub fn format_number(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "text" | "txt" => Ok(OutputFormat::Text),
            _ => Err(Error::config(format!("unknown output format `{s}`"))),
        }
    }
}

/// Which tables a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sections {
    pub top_actors: bool,
    pub windows: bool,
    pub network: bool,
    pub actors: bool,
    pub matrix: bool,
}

impl Sections {
    pub fn all() -> Self {
        Sections { top_actors: true, windows: true, network: true, actors: true, matrix: true }
    }

    pub fn none() -> Self {
        Sections { top_actors: false, windows: false, network: false, actors: false, matrix: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub path: PathBuf,
    pub sha256: String,
    pub config: IngestConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub rows_read: usize,
    pub rows_accepted: usize,
    pub rows_malformed: usize,
    pub self_loops_seen: usize,
    pub duplicate_events: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub window_plan: WindowPlan,
    pub directedness: Directedness,
    pub metrics: Vec<MetricKind>,
    pub closeness_variant: ClosenessVariant,
    pub normalization_base: NormalizationBase,
    pub ddn_mode: DdnMode,
    pub top_k: usize,
    pub sections: Sections,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowMeta {
    /// 1-based.
    pub window: usize,
    pub start: i64,
    pub end: i64,
    pub start_utc: String,
    pub end_utc: String,
    pub events: usize,
    pub edges: usize,
    /// Actors present (w).
    pub actors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub tool: String,
    pub version: String,
    pub input: InputEcho,
    pub ingest: IngestSummary,
    pub config: ConfigEcho,
    pub n: usize,
    pub m: usize,
    pub windows: Vec<WindowMeta>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedActor {
    pub rank: usize,
    pub actor_id: String,
    pub dda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowRow {
    pub window: usize,
    pub w: usize,
    pub ddn_sin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRow {
    pub mode: DdnMode,
    pub ddn: f64,
    pub ddn_eq6_literal: f64,
    pub ddn_mean_dda: f64,
    pub dda_star: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActorRow {
    pub actor_id: String,
    pub dda: f64,
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub actor_id: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub metric: MetricKind,
    pub spec: MetricSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_actors: Option<Vec<RankedActor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub windows: Option<Vec<WindowRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actors: Option<Vec<ActorRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<MatrixRow>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicityReport {
    pub schema: String,
    pub metadata: ReportMetadata,
    pub metrics: Vec<MetricReport>,
}

fn utc_string(ts: i64) -> String {
    DateTime::from_timestamp(ts, 0)
        .map(|dt| dt.format("%Y-%m-%dT%H:%M:%SZ").to_string())
        .unwrap_or_else(|| ts.to_string())
}

impl DynamicityReport {
    pub fn assemble(config: &RunConfig, input: &LoadedInput, analysis: &Analysis) -> Self {
        let sections = config.sections;
        let options = &analysis.options;
        let diag = &input.diagnostics;
        let windows = analysis
            .sliced
            .sins
            .iter()
            .map(|sin| WindowMeta {
                window: sin.window.index + 1,
                start: sin.window.start,
                end: sin.window.end,
                start_utc: utc_string(sin.window.start),
                end_utc: utc_string(sin.window.end),
                events: sin.event_count,
                edges: sin.graph.edge_count(),
                actors: analysis.presence.window_size(sin.window.index),
            })
            .collect();
        let metadata = ReportMetadata {
            tool: TOOL.to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            input: InputEcho {
                path: config.input.clone(),
                sha256: input.sha256.clone(),
                config: config.ingest.clone(),
            },
            ingest: IngestSummary {
                rows_read: diag.rows_read,
                rows_accepted: diag.rows_accepted,
                rows_malformed: diag.malformed.len(),
                self_loops_seen: diag.self_loops_seen,
                duplicate_events: diag.duplicate_events,
            },
            config: ConfigEcho {
                window_plan: options.window.clone(),
                directedness: options.directedness,
                metrics: options.metrics.clone(),
                closeness_variant: options.closeness_variant,
                normalization_base: options.normalization_base,
                ddn_mode: options.ddn_mode,
                top_k: options.top_k,
                sections,
            },
            n: analysis.sliced.n(),
            m: analysis.sliced.m(),
            windows,
        };

        let metrics = analysis
            .metrics
            .iter()
            .map(|ma| MetricReport {
                metric: ma.spec.kind,
                spec: ma.spec,
                top_actors: sections.top_actors.then(|| {
                    ma.top
                        .iter()
                        .enumerate()
                        .map(|(i, (a, d))| RankedActor { rank: i + 1, actor_id: a.to_string(), dda: round_sig(*d) })
                        .collect()
                }),
                windows: sections.windows.then(|| {
                    ma.windows
                        .per_window
                        .iter()
                        .zip(&ma.windows.w)
                        .enumerate()
                        .map(|(j, (v, &w))| WindowRow { window: j + 1, w, ddn_sin: v.map(round_sig) })
                        .collect()
                }),
                network: sections.network.then(|| NetworkRow {
                    mode: ma.network.mode,
                    ddn: round_sig(ma.network.ddn),
                    ddn_eq6_literal: round_sig(ma.ddn_eq6_literal),
                    ddn_mean_dda: round_sig(ma.ddn_mean_dda),
                    dda_star: round_sig(ma.actors.dda_star),
                    n: analysis.sliced.n(),
                }),
                actors: sections.actors.then(|| {
                    ma.actors
                        .dda
                        .iter()
                        .map(|(a, &d)| ActorRow {
                            actor_id: a.to_string(),
                            dda: round_sig(d),
                            contribution: round_sig(ma.network.contributions[a]),
                        })
                        .collect()
                }),
                matrix: sections.matrix.then(|| {
                    ma.matrix
                        .actors
                        .iter()
                        .zip(&ma.matrix.rows)
                        .map(|(a, row)| MatrixRow {
                            actor_id: a.to_string(),
                            values: row.iter().copied().map(round_sig).collect(),
                        })
                        .collect()
                }),
            })
            .collect();

        DynamicityReport { schema: SCHEMA.to_owned(), metadata, metrics }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ingest(format!("invalid report JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        render_text(self)
    }

    /// CSV tables as `(file name, contents)`, in a fixed order.
    pub fn csv_tables(&self) -> Vec<(String, String)> {
        render_csv(self)
    }

    pub fn metric(&self, kind: MetricKind) -> Option<&MetricReport> {
        self.metrics.iter().find(|m| m.metric == kind)
    }
}

/// Where [`emit_report`] writes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    /// A file for JSON and text, a directory for CSV.
    Path(PathBuf),
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Output { path: path.to_owned(), source })
}

pub fn emit_report(report: &DynamicityReport, format: OutputFormat, destination: &Destination) -> Result<()> {
    match (format, destination) {
        (OutputFormat::Csv, Destination::Path(dir)) => {
            fs::create_dir_all(dir).map_err(|source| Error::Output { path: dir.clone(), source })?;
            write_file(&dir.join("metadata.json"), &(serde_json::to_string_pretty(&report.metadata).expect("metadata serializes") + "\n"))?;
            for (name, body) in report.csv_tables() {
                write_file(&dir.join(name), &body)?;
            }
            Ok(())
        }
        (_, Destination::Path(path)) => write_file(path, &render(report, format)),
        (_, Destination::Stdout) => {
            let mut out = std::io::stdout().lock();
            out.write_all(render(report, format).as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| Error::Output { path: PathBuf::from("<stdout>"), source })
        }
    }
}

/// The whole report as one string; CSV tables are concatenated with
/// `# <file name>` separators.
pub fn render(report: &DynamicityReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Text => report.to_text(),
        OutputFormat::Csv => {
            let mut s = String::new();
            for (i, (name, body)) in report.csv_tables().into_iter().enumerate() {
                if i > 0 {
                    s.push('\n');
                }
                let _ = writeln!(s, "# {name}");
                s.push_str(&body);
            }
            s
        }
    }
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn render_csv(report: &DynamicityReport) -> Vec<(String, String)> {
    let mut tables = Vec::new();
    let m = report.metadata.m;
    for mr in &report.metrics {
        let key = mr.metric.name();
        if let Some(top) = &mr.top_actors {
            let rows = top.iter().map(|r| vec![r.rank.to_string(), r.actor_id.clone(), format_number(r.dda)]);
            tables.push((format!("top_actors_{key}.csv"), csv_table(&["rank", "actor_id", "dda"], rows)));
        }
        if let Some(windows) = &mr.windows {
            let rows = windows.iter().map(|r| {
                vec![r.window.to_string(), r.w.to_string(), r.ddn_sin.map(format_number).unwrap_or_default()]
            });
            tables.push((format!("windows_{key}.csv"), csv_table(&["window", "w", "ddn_sin"], rows)));
        }
        if let Some(actors) = &mr.actors {
            let rows = actors
                .iter()
                .map(|r| vec![r.actor_id.clone(), format_number(r.dda), format_number(r.contribution)]);
            tables.push((format!("actors_{key}.csv"), csv_table(&["actor_id", "dda", "contribution"], rows)));
        }
        if let Some(matrix) = &mr.matrix {
            let cols: Vec<String> = (1..=m).map(|j| format!("w{j}")).collect();
            let header: Vec<&str> = std::iter::once("actor_id").chain(cols.iter().map(String::as_str)).collect();
            let rows = matrix.iter().map(|r| {
                std::iter::once(r.actor_id.clone()).chain(r.values.iter().map(|&v| format_number(v))).collect()
            });
            tables.push((format!("matrix_{key}.csv"), csv_table(&header, rows)));
        }
    }
    let network: Vec<Vec<String>> = report
        .metrics
        .iter()
        .filter_map(|mr| {
            mr.network.as_ref().map(|n| {
                vec![
                    mr.metric.name().to_owned(),
                    n.mode.to_string(),
                    format_number(n.ddn),
                    format_number(n.ddn_eq6_literal),
                    format_number(n.ddn_mean_dda),
                    format_number(n.dda_star),
                    n.n.to_string(),
                ]
            })
        })
        .collect();
    if !network.is_empty() {
        tables.push((
            "network.csv".to_owned(),
            csv_table(&["metric", "mode", "ddn", "ddn_eq6_literal", "ddn_mean_dda", "dda_star", "n"], network),
        ));
    }
    tables
}

/// Left-aligned columns separated by two spaces, trailing blanks trimmed.
fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            let _ = write!(line, "{cell:<width$}", width = widths[c]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn render_text(report: &DynamicityReport) -> String {
    let md = &report.metadata;
    let cfg = &md.config;
    let mut out = String::new();
    let _ = writeln!(out, "{} {} dynamicity report", md.tool, md.version);
    let _ = writeln!(out, "input: {} (sha256 {})", md.input.path.display(), md.input.sha256);
    let _ = writeln!(
        out,
        "rows: {} read, {} accepted, {} malformed, {} self-loops, {} duplicates",
        md.ingest.rows_read, md.ingest.rows_accepted, md.ingest.rows_malformed, md.ingest.self_loops_seen, md.ingest.duplicate_events
    );
    let _ = writeln!(out, "actors (n): {}  windows (m): {}  graphs: {}", md.n, md.m, cfg.directedness);
    let _ = writeln!(
        out,
        "closeness: {}  normalization: {}  network mode: {}",
        cfg.closeness_variant, cfg.normalization_base, cfg.ddn_mode
    );

    let with_top: Vec<&MetricReport> = report.metrics.iter().filter(|m| m.top_actors.is_some()).collect();
    if !with_top.is_empty() {
        let _ = writeln!(out, "\nTOP-{} ACTORS SHOWING HIGHER DYNAMICITY (DDA)", cfg.top_k);
        let depth = with_top.iter().map(|m| m.top_actors.as_ref().map_or(0, Vec::len)).max().unwrap_or(0);
        let mut titles = Vec::new();
        let mut header = Vec::new();
        for m in &with_top {
            titles.extend([m.metric.title().to_owned(), String::new()]);
            header.extend(["Actor ID".to_owned(), "Dynamicity".to_owned()]);
        }
        let mut rows = vec![header];
        for i in 0..depth {
            let mut row = Vec::new();
            for m in &with_top {
                match m.top_actors.as_ref().and_then(|t| t.get(i)) {
                    Some(r) => row.extend([r.actor_id.clone(), format_number(r.dda)]),
                    None => row.extend([String::new(), String::new()]),
                }
            }
            rows.push(row);
        }
        // Titles span an actor/value column pair.
        let body = aligned(&rows);
        let pair_widths: Vec<usize> = (0..with_top.len())
            .map(|g| {
                let w = |c: usize| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0);
                w(2 * g) + 2 + w(2 * g + 1)
            })
            .collect();
        let mut title_line = String::new();
        for (g, t) in titles.iter().step_by(2).enumerate() {
            if g > 0 {
                title_line.push_str("  ");
            }
            let _ = write!(title_line, "{t:<width$}", width = pair_widths[g]);
        }
        out.push_str(title_line.trim_end());
        out.push('\n');
        out.push_str(&body);
    }

    let with_windows: Vec<&MetricReport> = report.metrics.iter().filter(|m| m.windows.is_some()).collect();
    if !with_windows.is_empty() {
        let _ = writeln!(out, "\nDYNAMICITY SHOWN BY SHORT-INTERVAL NETWORKS (DDN_SIN)");
        let mut header = vec!["SIN ID".to_owned(), "Start (UTC)".to_owned(), "Actors".to_owned()];
        header.extend(with_windows.iter().map(|m| capitalize(m.metric.name())));
        let mut rows = vec![header];
        for meta in &md.windows {
            let mut row = vec![meta.window.to_string(), meta.start_utc.clone(), meta.actors.to_string()];
            for m in &with_windows {
                let v = m
                    .windows
                    .as_ref()
                    .and_then(|w| w.get(meta.window - 1))
                    .and_then(|r| r.ddn_sin);
                row.push(v.map(format_number).unwrap_or_else(|| UNDEFINED_TEXT.to_owned()));
            }
            rows.push(row);
        }
        out.push_str(&aligned(&rows));
    }

    let with_network: Vec<&MetricReport> = report.metrics.iter().filter(|m| m.network.is_some()).collect();
    if !with_network.is_empty() {
        let _ = writeln!(out, "\nDEGREE OF DYNAMICITY SHOWN BY THE NETWORK (DDN)");
        let mut rows = vec![vec![
            "Metric".to_owned(),
            "DDN".to_owned(),
            "DDN eq6_literal".to_owned(),
            "DDN mean_dda".to_owned(),
            "DDA*".to_owned(),
        ]];
        for m in &with_network {
            let n = m.network.as_ref().expect("filtered");
            rows.push(vec![
                capitalize(m.metric.name()),
                format_number(n.ddn),
                format_number(n.ddn_eq6_literal),
                format_number(n.ddn_mean_dda),
                format_number(n.dda_star),
            ]);
        }
        out.push_str(&aligned(&rows));
    }

    // The three summary tables stand on their own; the matrix is only printed
    // when it is what was asked for.
    let matrix_only = !(cfg.sections.top_actors || cfg.sections.windows || cfg.sections.network);
    for m in report.metrics.iter().filter(|m| matrix_only && m.matrix.is_some()) {
        let _ = writeln!(out, "\nACTOR x WINDOW DYNAMICITY ({})", m.metric.name());
        let mut header = vec!["Actor ID".to_owned()];
        header.extend((1..=md.m).map(|j| format!("SIN {j}")));
        let mut rows = vec![header];
        for r in m.matrix.as_ref().expect("filtered") {
            let mut row = vec![r.actor_id.clone()];
            row.extend(r.values.iter().map(|&v| format_number(v)));
            rows.push(row);
        }
        out.push_str(&aligned(&rows));
    }
    out
}

fn capitalize(s: &str) -> String {
    let s = s.replace('_', "-");
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}
