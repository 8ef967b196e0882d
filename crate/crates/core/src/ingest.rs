//! Reading timestamped edge lists.
//!
//! Each accepted row is one `(source, target, timestamp)` interaction. Rows
//! that fail validation are skipped and listed in [`IngestDiagnostics`];
//! when more than half of the rows are malformed the whole read fails, since
//! that usually means the column mapping or timestamp format is wrong.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use chrono::{DateTime, FixedOffset, NaiveDate, NaiveDateTime, TimeZone};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::ActorId;
use crate::temporal::{TemporalEdgeList, TemporalEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "jsonl" | "ndjson" => Ok(InputFormat::Jsonl),
            _ => Err(Error::config(format!("unknown input format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimestampFormat {
    #[default]
    EpochSeconds,
    EpochMillis,
    Iso8601,
}

impl FromStr for TimestampFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "epoch" | "epoch_seconds" | "seconds" => Ok(TimestampFormat::EpochSeconds),
            "epoch_millis" | "millis" => Ok(TimestampFormat::EpochMillis),
            "iso8601" | "iso" | "rfc3339" => Ok(TimestampFormat::Iso8601),
            _ => Err(Error::config(format!("unknown timestamp format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnRef::Index(i) => write!(f, "#{i}"),
            ColumnRef::Name(n) => f.write_str(n),
        }
    }
}

impl ColumnRef {
    fn parse(token: &str) -> Self {
        let token = token.trim();
        token
            .parse::<usize>()
            .map(ColumnRef::Index)
            .unwrap_or_else(|_| ColumnRef::Name(token.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMap {
    pub source: ColumnRef,
    pub target: ColumnRef,
    pub timestamp: ColumnRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<ColumnRef>,
}

impl ColumnMap {
    pub fn positional() -> Self {
        ColumnMap {
            source: ColumnRef::Index(0),
            target: ColumnRef::Index(1),
            timestamp: ColumnRef::Index(2),
            weight: None,
        }
    }

    pub fn named() -> Self {
        ColumnMap {
            source: ColumnRef::Name("source".into()),
            target: ColumnRef::Name("target".into()),
            timestamp: ColumnRef::Name("timestamp".into()),
            weight: None,
        }
    }

    pub fn default_for(format: InputFormat) -> Self {
        match format {
            InputFormat::Csv => ColumnMap::positional(),
            InputFormat::Jsonl => ColumnMap::named(),
        }
    }

    fn refs(&self) -> impl Iterator<Item = &ColumnRef> {
        [&self.source, &self.target, &self.timestamp]
            .into_iter()
            .chain(self.weight.as_ref())
    }
}

impl FromStr for ColumnMap {
    type Err = Error;

    /// Either `role=column` pairs (`source=from,target=to,timestamp=date`) or
    /// columns listed in role order (`0,1,2` or `from,to,date,weight`).
    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
        let (mut source, mut target, mut timestamp, mut weight) = (None, None, None, None);
        if tokens.iter().any(|t| t.contains('=')) {
            for token in &tokens {
                let (role, col) = token
                    .split_once('=')
                    .ok_or_else(|| Error::config(format!("column mapping `{token}` is not role=column")))?;
                let col = ColumnRef::parse(col);
                let slot = match role.trim().to_ascii_lowercase().as_str() {
                    "source" | "src" | "from" => &mut source,
                    "target" | "dst" | "to" => &mut target,
                    "timestamp" | "time" | "ts" => &mut timestamp,
                    "weight" => &mut weight,
                    other => return Err(Error::config(format!("unknown column role `{other}`"))),
                };
                *slot = Some(col);
            }
        } else {
            if !(3..=4).contains(&tokens.len()) {
                return Err(Error::config(format!(
                    "expected 3 or 4 columns (source,target,timestamp[,weight]), got `{s}`"
                )));
            }
            let mut cols = tokens.iter().map(|t| ColumnRef::parse(t));
            source = cols.next();
            target = cols.next();
            timestamp = cols.next();
            weight = cols.next();
        }
        let missing = |role: &str| Error::config(format!("column mapping lacks the `{role}` role"));
        Ok(ColumnMap {
            source: source.ok_or_else(|| missing("source"))?,
            target: target.ok_or_else(|| missing("target"))?,
            timestamp: timestamp.ok_or_else(|| missing("timestamp"))?,
            weight,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestConfig {
    pub format: InputFormat,
    pub delimiter: u8,
    pub columns: ColumnMap,
    pub timestamp_format: TimestampFormat,
    /// Offset applied to ISO-8601 timestamps that carry none.
    pub naive_utc_offset_seconds: i32,
    pub casefold_ids: bool,
    pub has_header: bool,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            format: InputFormat::Csv,
            delimiter: b',',
            columns: ColumnMap::positional(),
            timestamp_format: TimestampFormat::EpochSeconds,
            naive_utc_offset_seconds: 0,
            casefold_ids: false,
            has_header: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MalformedRow {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestDiagnostics {
    pub rows_read: usize,
    pub rows_accepted: usize,
    pub self_loops_seen: usize,
    /// Accepted rows repeating an earlier (source, target, timestamp).
    pub duplicate_events: usize,
    pub malformed: Vec<MalformedRow>,
}

impl IngestDiagnostics {
    fn record(&mut self, line: u64, outcome: std::result::Result<TemporalEvent, String>, seen: &mut HashSet<(ActorId, ActorId, i64)>) -> Option<TemporalEvent> {
        self.rows_read += 1;
        match outcome {
            Ok(event) => {
                self.rows_accepted += 1;
                if event.source == event.target {
                    self.self_loops_seen += 1;
                }
                if !seen.insert((event.source.clone(), event.target.clone(), event.timestamp)) {
                    self.duplicate_events += 1;
                }
                Some(event)
            }
            Err(reason) => {
                self.malformed.push(MalformedRow { line, reason });
                None
            }
        }
    }
}

struct FieldParser<'a> {
    config: &'a IngestConfig,
    naive_tz: FixedOffset,
}

impl<'a> FieldParser<'a> {
    fn new(config: &'a IngestConfig) -> Result<Self> {
        let naive_tz = FixedOffset::east_opt(config.naive_utc_offset_seconds).ok_or_else(|| {
            Error::config(format!("UTC offset {}s is out of range", config.naive_utc_offset_seconds))
        })?;
        Ok(FieldParser { config, naive_tz })
    }

    fn actor(&self, raw: &str, role: &str) -> std::result::Result<ActorId, String> {
        let id = if self.config.casefold_ids {
            ActorId::new(raw.to_lowercase())
        } else {
            ActorId::new(raw)
        };
        id.ok_or_else(|| format!("empty {role}"))
    }

    fn timestamp(&self, raw: &str) -> std::result::Result<i64, String> {
        let raw = raw.trim();
        if raw.is_empty() {
            return Err("empty timestamp".into());
        }
        let parse_number = || -> std::result::Result<i64, String> {
            raw.parse::<i64>().or_else(|_| match raw.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x.floor() as i64),
                _ => Err(format!("invalid timestamp `{raw}`")),
            })
        };
        match self.config.timestamp_format {
            TimestampFormat::EpochSeconds => parse_number(),
            TimestampFormat::EpochMillis => Ok(parse_number()?.div_euclid(1000)),
            TimestampFormat::Iso8601 => parse_iso8601(raw, &self.naive_tz)
                .ok_or_else(|| format!("invalid ISO-8601 timestamp `{raw}`")),
        }
    }

    fn weight(&self, raw: Option<&str>) -> std::result::Result<Option<f64>, String> {
        match raw.map(str::trim) {
            None | Some("") => Ok(None),
            Some(w) => match w.parse::<f64>() {
                Ok(x) if x.is_finite() && x > 0.0 => Ok(Some(x)),
                _ => Err(format!("invalid weight `{w}`")),
            },
        }
    }

    fn event(
        &self,
        source: Option<&str>,
        target: Option<&str>,
        timestamp: Option<&str>,
        weight: Option<&str>,
    ) -> std::result::Result<TemporalEvent, String> {
        let source = self.actor(source.ok_or("missing source field")?, "source")?;
        let target = self.actor(target.ok_or("missing target field")?, "target")?;
        let timestamp = self.timestamp(timestamp.ok_or("missing timestamp field")?)?;
        let weight = self.weight(weight)?;
        Ok(TemporalEvent { source, target, timestamp, weight })
    }
}

/// Parses an ISO-8601 / RFC 3339 timestamp to epoch seconds. Inputs without
/// an offset are read in `naive_tz`.
pub fn parse_iso8601(raw: &str, naive_tz: &FixedOffset) -> Option<i64> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(raw) {
        return Some(dt.timestamp());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f%:z", "%Y-%m-%dT%H:%M:%S%.f%z", "%Y-%m-%d %H:%M:%S%.f%:z"] {
        if let Ok(dt) = DateTime::parse_from_str(raw, fmt) {
            return Some(dt.timestamp());
        }
    }
    let naive = ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M"]
        .iter()
        .find_map(|fmt| NaiveDateTime::parse_from_str(raw, fmt).ok())
        .or_else(|| {
            NaiveDate::parse_from_str(raw, "%Y-%m-%d")
                .ok()
                .and_then(|d| d.and_hms_opt(0, 0, 0))
        })?;
    naive_tz.from_local_datetime(&naive).single().map(|dt| dt.timestamp())
}

fn check_malformed_ratio(diag: &IngestDiagnostics) -> Result<()> {
    if diag.rows_read > 0 && diag.malformed.len() * 2 > diag.rows_read {
        let first = &diag.malformed[0];
        return Err(Error::ingest(format!(
            "{} of {} rows malformed (first at line {}: {}); check --columns and --timestamp-format",
            diag.malformed.len(),
            diag.rows_read,
            first.line,
            first.reason
        )));
    }
    Ok(())
}

/// Reads an edge list according to `config`.
pub fn parse_edge_list<R: Read>(input: R, config: &IngestConfig) -> Result<(TemporalEdgeList, IngestDiagnostics)> {
    let (events, diag) = match config.format {
        InputFormat::Csv => parse_csv(input, config)?,
        InputFormat::Jsonl => parse_jsonl(input, config)?,
    };
    check_malformed_ratio(&diag)?;
    Ok((events, diag))
}

fn parse_csv<R: Read>(input: R, config: &IngestConfig) -> Result<(TemporalEdgeList, IngestDiagnostics)> {
    let parser = FieldParser::new(config)?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(config.delimiter)
        .has_headers(config.has_header)
        .flexible(true)
        .trim(csv::Trim::None)
        .from_reader(input);

    let header: Option<Vec<String>> = if config.has_header {
        let h = reader.headers().map_err(|e| Error::ingest(format!("cannot read header: {e}")))?;
        Some(h.iter().map(|s| s.trim().to_owned()).collect())
    } else {
        None
    };
    let resolve = |col: &ColumnRef| -> Result<usize> {
        match (col, &header) {
            (ColumnRef::Index(i), _) => Ok(*i),
            (ColumnRef::Name(name), Some(h)) => h
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::ingest(format!("header has no column named `{name}` (found: {})", h.join(", ")))),
            (ColumnRef::Name(name), None) => Err(Error::config(format!(
                "column `{name}` given by name but the input has no header"
            ))),
        }
    };
    let src = resolve(&config.columns.source)?;
    let dst = resolve(&config.columns.target)?;
    let ts = resolve(&config.columns.timestamp)?;
    let wt = config.columns.weight.as_ref().map(resolve).transpose()?;
    if let Some(h) = &header {
        if let Some(max) = [Some(src), Some(dst), Some(ts), wt].into_iter().flatten().max() {
            if max >= h.len() {
                return Err(Error::ingest(format!(
                    "column #{max} requested but the header has {} columns",
                    h.len()
                )));
            }
        }
    }

    let mut diag = IngestDiagnostics::default();
    let mut seen = HashSet::new();
    let mut events = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        let line = reader.position().line();
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(line, |p| p.line());
                let outcome = parser.event(record.get(src), record.get(dst), record.get(ts), wt.and_then(|w| record.get(w)));
                events.extend(diag.record(line, outcome, &mut seen));
            }
            Err(e) if e.is_io_error() => {
                return Err(Error::ingest(format!("read failed near line {line}: {e}")));
            }
            Err(e) => {
                events.extend(diag.record(line, Err(format!("unparseable row: {e}")), &mut seen));
            }
        }
    }
    Ok((events, diag))
}

fn json_field<'v>(obj: &'v serde_json::Map<String, Value>, col: &ColumnRef) -> Option<std::borrow::Cow<'v, str>> {
    let ColumnRef::Name(name) = col else { return None };
    match obj.get(name)? {
        Value::String(s) => Some(std::borrow::Cow::Borrowed(s.as_str())),
        Value::Number(n) => Some(std::borrow::Cow::Owned(n.to_string())),
        _ => None,
    }
}

fn parse_jsonl<R: Read>(input: R, config: &IngestConfig) -> Result<(TemporalEdgeList, IngestDiagnostics)> {
    if let Some(col) = config.columns.refs().find(|c| matches!(c, ColumnRef::Index(_))) {
        return Err(Error::config(format!("JSONL input needs named columns, got position {col}")));
    }
    let parser = FieldParser::new(config)?;
    let mut diag = IngestDiagnostics::default();
    let mut seen = HashSet::new();
    let mut events = Vec::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line.map_err(|e| Error::ingest(format!("read failed at line {line_no}: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let outcome = match serde_json::from_str::<Value>(&line) {
            Ok(Value::Object(obj)) => {
                let cols = &config.columns;
                parser.event(
                    json_field(&obj, &cols.source).as_deref(),
                    json_field(&obj, &cols.target).as_deref(),
                    json_field(&obj, &cols.timestamp).as_deref(),
                    cols.weight.as_ref().and_then(|w| json_field(&obj, w)).as_deref(),
                )
            }
            Ok(_) => Err("line is not a JSON object".to_owned()),
            Err(e) => Err(format!("invalid JSON: {e}")),
        };
        events.extend(diag.record(line_no, outcome, &mut seen));
    }
    Ok((events, diag))
}

/// Rejects an empty event list; otherwise returns the input unchanged.
pub fn validate(events: TemporalEdgeList) -> Result<TemporalEdgeList> {
    if events.is_empty() {
        return Err(Error::ingest("no events to analyze"));
    }
    Ok(events)
}

/// Writes `source,target,timestamp` CSV (plus `weight` when any event has
/// one), epoch seconds.
pub fn write_canonical_csv<W: Write>(events: &[TemporalEvent], out: W) -> Result<()> {
    let with_weight = events.iter().any(|e| e.weight.is_some());
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io {
        context: "writing canonical CSV".into(),
        source: e.into(),
    };
    if with_weight {
        w.write_record(["source", "target", "timestamp", "weight"]).map_err(io)?;
    } else {
        w.write_record(["source", "target", "timestamp"]).map_err(io)?;
    }
    for e in events {
        let ts = e.timestamp.to_string();
        if with_weight {
            let weight = e.weight.map(|x| x.to_string()).unwrap_or_default();
            w.write_record([e.source.as_str(), e.target.as_str(), &ts, &weight]).map_err(io)?;
        } else {
            w.write_record([e.source.as_str(), e.target.as_str(), &ts]).map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::Io { context: "writing canonical CSV".into(), source: e })
}

/// Ingest settings that read what [`write_canonical_csv`] writes.
pub fn canonical_config() -> IngestConfig {
    let mut columns = ColumnMap::named();
    columns.weight = None;
    IngestConfig { columns, ..IngestConfig::default() }
}
