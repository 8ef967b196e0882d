//! Slicing a timestamped edge list into short-interval networks.
//!
//! Windows are half-open `[start, end)` and contiguous. Empty windows are
//! kept so that window positions track the observation design. Window
//! positions are 0-based in this API and 1-based in reports.

use std::fmt;

use chrono::{Datelike, Duration, FixedOffset, NaiveDate, TimeZone};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ActorId, BuildStats, Directedness, Graph};

/// Upper bound on the number of windows a plan may expand to.
pub const MAX_WINDOWS: usize = 100_000;

/// Transition weights: (current, previous) presence.
pub const ALPHA_PRESENT_PRESENT: f64 = 1.0;
pub const ALPHA_PRESENT_ABSENT: f64 = 0.5;
pub const ALPHA_ABSENT_PRESENT: f64 = 0.0;
pub const ALPHA_ABSENT_ABSENT: f64 = 0.0;
/// Weight of an actor present in the first window.
pub const ALPHA_FIRST_PRESENT: f64 = 1.0;

/// One directed interaction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalEvent {
    pub source: ActorId,
    pub target: ActorId,
    /// Seconds since the Unix epoch, UTC.
    pub timestamp: i64,
    /// Parsed for provenance; the measures are unweighted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

impl TemporalEvent {
    pub fn new(source: ActorId, target: ActorId, timestamp: i64) -> Self {
        TemporalEvent { source, target, timestamp, weight: None }
    }
}

pub type TemporalEdgeList = Vec<TemporalEvent>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CalendarUnit {
    Day,
    /// ISO weeks, starting Monday 00:00 local time.
    Week,
    Month,
}

impl fmt::Display for CalendarUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CalendarUnit::Day => "day",
            CalendarUnit::Week => "week",
            CalendarUnit::Month => "month",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum WindowPlan {
    /// Equal-length windows on a grid anchored at `origin` (the earliest
    /// event when unset).
    FixedDuration { length: i64, origin: Option<i64> },
    /// Civil-calendar windows in a fixed UTC offset.
    Calendar { unit: CalendarUnit, utc_offset_seconds: i32 },
    /// Windows between consecutive, strictly increasing boundaries.
    Explicit { boundaries: Vec<i64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    /// 0-based position.
    pub index: usize,
    pub start: i64,
    pub end: i64,
}

impl Window {
    pub fn contains(&self, t: i64) -> bool {
        self.start <= t && t < self.end
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn too_many(count: usize) -> Error {
    Error::config(format!("window plan expands to {count}+ windows (limit {MAX_WINDOWS})"))
}

fn unit_start(date: NaiveDate, unit: CalendarUnit) -> NaiveDate {
    match unit {
        CalendarUnit::Day => date,
        CalendarUnit::Week => date - Duration::days(i64::from(date.weekday().num_days_from_monday())),
        CalendarUnit::Month => date.with_day(1).expect("day 1 exists"),
    }
}

fn next_unit(date: NaiveDate, unit: CalendarUnit) -> Option<NaiveDate> {
    match unit {
        CalendarUnit::Day => date.succ_opt(),
        CalendarUnit::Week => date.checked_add_signed(Duration::days(7)),
        CalendarUnit::Month => {
            let (y, m) = if date.month() == 12 { (date.year() + 1, 1) } else { (date.year(), date.month() + 1) };
            NaiveDate::from_ymd_opt(y, m, 1)
        }
    }
}

impl WindowPlan {
    pub fn month() -> Self {
        WindowPlan::Calendar { unit: CalendarUnit::Month, utc_offset_seconds: 0 }
    }

    /// Expands the plan into windows covering `[min_ts, max_ts]`.
    ///
    /// Explicit plans are returned as given; whether they cover the events
    /// is checked by [`slice`].
    pub fn windows(&self, min_ts: i64, max_ts: i64) -> Result<Vec<Window>> {
        if min_ts > max_ts {
            return Err(Error::consistency("window span has min > max"));
        }
        let bounds: Vec<(i64, i64)> = match self {
            WindowPlan::FixedDuration { length, origin } => {
                if *length <= 0 {
                    return Err(Error::config(format!("window length must be positive, got {length}")));
                }
                let origin = origin.unwrap_or(min_ts);
                let first = floor_div(min_ts - origin, *length);
                let last = floor_div(max_ts - origin, *length);
                let count = (last - first + 1) as usize;
                if count > MAX_WINDOWS {
                    return Err(too_many(count));
                }
                (first..=last)
                    .map(|k| (origin + k * length, origin + (k + 1) * length))
                    .collect()
            }
            WindowPlan::Calendar { unit, utc_offset_seconds } => {
                let tz = FixedOffset::east_opt(*utc_offset_seconds).ok_or_else(|| {
                    Error::config(format!("UTC offset {utc_offset_seconds}s is out of range"))
                })?;
                let to_ts = |d: NaiveDate| -> Result<i64> {
                    let local = d.and_hms_opt(0, 0, 0).expect("midnight exists");
                    tz.from_local_datetime(&local)
                        .single()
                        .map(|dt| dt.timestamp())
                        .ok_or_else(|| Error::config("calendar boundary is not representable"))
                };
                let first_local = tz
                    .timestamp_opt(min_ts, 0)
                    .single()
                    .ok_or_else(|| Error::config(format!("timestamp {min_ts} is out of range")))?;
                let mut day = unit_start(first_local.date_naive(), *unit);
                let mut start = to_ts(day)?;
                let mut out = Vec::new();
                while start <= max_ts {
                    let next = next_unit(day, *unit)
                        .ok_or_else(|| Error::config("calendar window past the supported date range"))?;
                    let end = to_ts(next)?;
                    out.push((start, end));
                    if out.len() > MAX_WINDOWS {
                        return Err(too_many(out.len()));
                    }
                    day = next;
                    start = end;
                }
                out
            }
            WindowPlan::Explicit { boundaries } => {
                if boundaries.len() < 2 {
                    return Err(Error::config("explicit window plan needs at least two boundaries"));
                }
                if let Some(w) = boundaries.windows(2).find(|w| w[0] >= w[1]) {
                    return Err(Error::config(format!(
                        "window boundaries must strictly increase ({} then {})",
                        w[0], w[1]
                    )));
                }
                if boundaries.len() - 1 > MAX_WINDOWS {
                    return Err(too_many(boundaries.len() - 1));
                }
                boundaries.windows(2).map(|w| (w[0], w[1])).collect()
            }
        };
        Ok(bounds
            .into_iter()
            .enumerate()
            .map(|(index, (start, end))| Window { index, start, end })
            .collect())
    }
}

/// A short-interval network: one window's graph plus bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortIntervalNetwork {
    pub window: Window,
    pub graph: Graph,
    pub event_count: usize,
    pub build: BuildStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlicedNetwork {
    pub sins: Vec<ShortIntervalNetwork>,
    pub aggregated: Graph,
}

impl SlicedNetwork {
    /// Number of windows.
    pub fn m(&self) -> usize {
        self.sins.len()
    }

    /// Number of actors in the aggregated network.
    pub fn n(&self) -> usize {
        self.aggregated.node_count()
    }
}

/// Partitions `events` into the plan's windows and builds every network.
pub fn slice(events: &[TemporalEvent], plan: &WindowPlan, mode: Directedness) -> Result<SlicedNetwork> {
    let (Some(min_ts), Some(max_ts)) = (
        events.iter().map(|e| e.timestamp).min(),
        events.iter().map(|e| e.timestamp).max(),
    ) else {
        return Err(Error::ingest("no events to analyze"));
    };
    let windows = plan.windows(min_ts, max_ts)?;

    let mut buckets: Vec<Vec<(ActorId, ActorId)>> = vec![Vec::new(); windows.len()];
    let mut outside = Vec::new();
    for e in events {
        let pos = windows.partition_point(|w| w.start <= e.timestamp);
        match pos.checked_sub(1).map(|i| &windows[i]) {
            Some(w) if w.contains(e.timestamp) => {
                buckets[w.index].push((e.source.clone(), e.target.clone()))
            }
            _ => outside.push(e.timestamp),
        }
    }
    if !outside.is_empty() {
        outside.sort_unstable();
        outside.dedup();
        return Err(Error::OutsideWindows { timestamps: outside });
    }

    let sins: Vec<ShortIntervalNetwork> = windows
        .into_par_iter()
        .zip(buckets)
        .map(|(window, edges)| {
            let event_count = edges.len();
            let (graph, build) = Graph::build(edges, mode, []);
            ShortIntervalNetwork { window, graph, event_count, build }
        })
        .collect();
    let graphs: Vec<Graph> = sins.iter().map(|s| s.graph.clone()).collect();
    let aggregated = Graph::union(&graphs)?;
    // Union of an all-empty window set falls back to undirected.
    let aggregated = if aggregated.mode() == mode { aggregated } else { Graph::empty(mode) };
    Ok(SlicedNetwork { sins, aggregated })
}

/// Actor-by-window presence over the aggregated actor universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresenceMatrix {
    pub actors: Vec<ActorId>,
    /// `present[i][j]`: actor `i` has an incident edge in window `j`.
    pub present: Vec<Vec<bool>>,
    m: usize,
}

impl PresenceMatrix {
    pub fn new(actors: Vec<ActorId>, present: Vec<Vec<bool>>, m: usize) -> Result<Self> {
        if actors.len() != present.len() || present.iter().any(|row| row.len() != m) {
            return Err(Error::consistency("presence matrix shape does not match n x m"));
        }
        Ok(PresenceMatrix { actors, present, m })
    }

    pub fn n(&self) -> usize {
        self.actors.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_present(&self, actor: usize, window: usize) -> bool {
        self.present[actor][window]
    }

    /// Number of actors present in window `j` (w_j).
    pub fn window_size(&self, window: usize) -> usize {
        self.present.iter().filter(|row| row[window]).count()
    }
}

pub fn presence_matrix(sliced: &SlicedNetwork) -> PresenceMatrix {
    let actors = sliced.aggregated.nodes().to_vec();
    let present = actors
        .iter()
        .map(|a| {
            sliced
                .sins
                .iter()
                .map(|sin| sin.graph.index_of(a).is_some_and(|v| sin.graph.has_edges(v)))
                .collect()
        })
        .collect();
    PresenceMatrix { actors, present, m: sliced.m() }
}

/// The transition weight for one actor and window; `previous` is `None` for
/// the first window.
pub fn transition_alpha(current: bool, previous: Option<bool>) -> f64 {
    match (current, previous) {
        (true, None) => ALPHA_FIRST_PRESENT,
        (false, None) => 0.0,
        (true, Some(true)) => ALPHA_PRESENT_PRESENT,
        (true, Some(false)) => ALPHA_PRESENT_ABSENT,
        (false, Some(true)) => ALPHA_ABSENT_PRESENT,
        (false, Some(false)) => ALPHA_ABSENT_ABSENT,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaWeights {
    pub actors: Vec<ActorId>,
    /// `alpha[i][j]` for actor `i`, window `j`.
    pub alpha: Vec<Vec<f64>>,
}

impl AlphaWeights {
    pub fn m(&self) -> usize {
        self.alpha.first().map_or(0, Vec::len)
    }
}

pub fn alpha_weights(presence: &PresenceMatrix) -> AlphaWeights {
    let alpha = presence
        .present
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, &cur)| transition_alpha(cur, j.checked_sub(1).map(|p| row[p])))
                .collect()
        })
        .collect();
    AlphaWeights { actors: presence.actors.clone(), alpha }
}
