//! End-to-end analysis: ingest, slice, score every network, measure.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::centrality::{compute_metric, CentralityScores, ClosenessVariant, MetricKind, MetricSpec, NormalizationBase};
use crate::dynamicity::{
    actor_window_dynamicity, network_dynamicity, rank_actors, window_dynamicity, ActorDynamicity,
    ActorWindowMatrix, DdnMode, NetworkDynamicity, ObservedValues, WindowDynamicity,
};
use crate::error::{Error, Result};
use crate::graph::{ActorId, Directedness};
use crate::ingest::{parse_edge_list, parse_iso8601, validate, IngestConfig, IngestDiagnostics};
use crate::report::{DynamicityReport, OutputFormat, Sections};
use crate::temporal::{alpha_weights, presence_matrix, slice, AlphaWeights, PresenceMatrix, SlicedNetwork, TemporalEvent, WindowPlan};

/// How windows are chosen; boundary files are read when the run starts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum WindowSpec {
    Plan(WindowPlan),
    BoundsFile { path: PathBuf, utc_offset_seconds: i32 },
}

impl WindowSpec {
    pub fn resolve(&self) -> Result<WindowPlan> {
        match self {
            WindowSpec::Plan(plan) => Ok(plan.clone()),
            WindowSpec::BoundsFile { path, utc_offset_seconds } => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::config(format!("cannot read window bounds {}: {e}", path.display()))
                })?;
                Ok(WindowPlan::Explicit { boundaries: parse_bounds(&text, *utc_offset_seconds)? })
            }
        }
    }
}

/// One boundary per line, as epoch seconds or ISO-8601. Blank lines and
/// `#` comments are ignored.
pub fn parse_bounds(text: &str, utc_offset_seconds: i32) -> Result<Vec<i64>> {
    let tz = chrono::FixedOffset::east_opt(utc_offset_seconds)
        .ok_or_else(|| Error::config(format!("UTC offset {utc_offset_seconds}s is out of range")))?;
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(line, l)| {
            l.parse::<i64>()
                .ok()
                .or_else(|| parse_iso8601(l, &tz))
                .ok_or_else(|| Error::config(format!("bad window boundary `{l}` on line {line}")))
        })
        .collect()
}

/// Everything that shapes the analysis once events are in hand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub window: WindowPlan,
    pub directedness: Directedness,
    pub metrics: Vec<MetricKind>,
    pub closeness_variant: ClosenessVariant,
    pub normalization_base: NormalizationBase,
    pub ddn_mode: DdnMode,
    pub top_k: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            window: WindowPlan::month(),
            directedness: Directedness::Undirected,
            metrics: vec![MetricKind::Degree, MetricKind::Closeness, MetricKind::Betweenness],
            closeness_variant: ClosenessVariant::Harmonic,
            normalization_base: NormalizationBase::PerNetwork,
            ddn_mode: DdnMode::Eq6Literal,
            top_k: 5,
        }
    }
}

impl AnalysisOptions {
    pub fn metric_specs(&self) -> Vec<MetricSpec> {
        self.metrics
            .iter()
            .map(|&kind| {
                MetricSpec::new(kind)
                    .with_closeness(self.closeness_variant)
                    .with_base(self.normalization_base)
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.metrics.is_empty() {
            return Err(Error::config("at least one metric is required"));
        }
        if self.top_k == 0 {
            return Err(Error::config("top-k must be at least 1"));
        }
        if !self.directedness.is_directed() {
            if let Some(kind) = self.metrics.iter().find(|k| k.requires_directed()) {
                return Err(Error::config(format!("{kind} requires --directed")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub ingest: IngestConfig,
    pub window: WindowSpec,
    pub directedness: Directedness,
    pub metrics: Vec<MetricKind>,
    pub closeness_variant: ClosenessVariant,
    pub normalization_base: NormalizationBase,
    pub ddn_mode: DdnMode,
    pub top_k: usize,
    pub output_format: OutputFormat,
    /// Standard output when unset; a directory for CSV output.
    pub out: Option<PathBuf>,
    pub sections: Sections,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        let defaults = AnalysisOptions::default();
        RunConfig {
            input: input.into(),
            ingest: IngestConfig::default(),
            window: WindowSpec::Plan(defaults.window),
            directedness: defaults.directedness,
            metrics: defaults.metrics,
            closeness_variant: defaults.closeness_variant,
            normalization_base: defaults.normalization_base,
            ddn_mode: defaults.ddn_mode,
            top_k: defaults.top_k,
            output_format: OutputFormat::Text,
            out: None,
            sections: Sections::all(),
        }
    }

    pub fn analysis_options(&self) -> Result<AnalysisOptions> {
        let options = AnalysisOptions {
            window: self.window.resolve()?,
            directedness: self.directedness,
            metrics: self.metrics.clone(),
            closeness_variant: self.closeness_variant,
            normalization_base: self.normalization_base,
            ddn_mode: self.ddn_mode,
            top_k: self.top_k,
        };
        options.validate()?;
        Ok(options)
    }
}

/// All measures for one metric, at full precision.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricAnalysis {
    pub spec: MetricSpec,
    pub aggregated_scores: CentralityScores,
    pub window_scores: Vec<CentralityScores>,
    pub observed: ObservedValues,
    pub matrix: ActorWindowMatrix,
    pub actors: ActorDynamicity,
    pub windows: WindowDynamicity,
    /// Network dynamicity in the configured mode.
    pub network: NetworkDynamicity,
    pub ddn_eq6_literal: f64,
    pub ddn_mean_dda: f64,
    pub top: Vec<(ActorId, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub options: AnalysisOptions,
    pub sliced: SlicedNetwork,
    pub presence: PresenceMatrix,
    pub alpha: AlphaWeights,
    pub metrics: Vec<MetricAnalysis>,
}

impl Analysis {
    pub fn metric(&self, kind: MetricKind) -> Option<&MetricAnalysis> {
        self.metrics.iter().find(|m| m.spec.kind == kind)
    }
}

fn analyze_metric(
    spec: MetricSpec,
    sliced: &SlicedNetwork,
    presence: &PresenceMatrix,
    alpha: &AlphaWeights,
    options: &AnalysisOptions,
) -> Result<MetricAnalysis> {
    let n = sliced.n();
    let aggregated_scores = compute_metric(&sliced.aggregated, &spec, n)?;
    let window_scores = sliced
        .sins
        .par_iter()
        .map(|sin| compute_metric(&sin.graph, &spec, n))
        .collect::<Result<Vec<_>>>()?;

    let observed = ObservedValues::new(&aggregated_scores, &window_scores)?;
    let matrix = actor_window_dynamicity(&observed, alpha)?;
    let actors = ActorDynamicity::from_matrix(&matrix)?;
    let windows = window_dynamicity(&observed, alpha, presence)?;
    let network = network_dynamicity(&actors, n, options.ddn_mode)?;
    let ddn_eq6_literal = network_dynamicity(&actors, n, DdnMode::Eq6Literal)?.ddn;
    let ddn_mean_dda = network_dynamicity(&actors, n, DdnMode::MeanDda)?.ddn;
    let top = rank_actors(&actors, options.top_k);
    Ok(MetricAnalysis {
        spec,
        aggregated_scores,
        window_scores,
        observed,
        matrix,
        actors,
        windows,
        network,
        ddn_eq6_literal,
        ddn_mean_dda,
        top,
    })
}

/// Runs every configured metric over `events`.
pub fn analyze(events: &[TemporalEvent], options: &AnalysisOptions) -> Result<Analysis> {
    options.validate()?;
    let sliced = slice(events, &options.window, options.directedness)?;
    if sliced.n() == 0 {
        return Err(Error::ingest("no actors: every event is a self-loop"));
    }
    let presence = presence_matrix(&sliced);
    let alpha = alpha_weights(&presence);
    let metrics = options
        .metric_specs()
        .into_par_iter()
        .map(|spec| analyze_metric(spec, &sliced, &presence, &alpha, options))
        .collect::<Result<Vec<_>>>()?;
    Ok(Analysis { options: options.clone(), sliced, presence, alpha, metrics })
}

/// Input bytes plus their digest, for provenance.
pub struct LoadedInput {
    pub events: Vec<TemporalEvent>,
    pub diagnostics: IngestDiagnostics,
    pub sha256: String,
}

pub fn load_input(path: &Path, ingest: &IngestConfig) -> Result<LoadedInput> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        context: format!("cannot read {}", path.display()),
        source,
    })?;
    let sha256 = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    let (events, diagnostics) = parse_edge_list(bytes.as_slice(), ingest)?;
    let events = validate(events)?;
    Ok(LoadedInput { events, diagnostics, sha256 })
}

/// Ingest, analyze and assemble the report described by `config`.
pub fn run_compute(config: &RunConfig) -> Result<DynamicityReport> {
    let options = config.analysis_options()?;
    let input = load_input(&config.input, &config.ingest)?;
    let analysis = analyze(&input.events, &options)?;
    Ok(DynamicityReport::assemble(config, &input, &analysis))
}
