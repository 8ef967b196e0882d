//! Dynamicity measures for longitudinal social networks.
//!
//! A timestamped edge list is cut into short-interval networks (one per time
//! window) and one aggregated network. Actor centralities on each network are
//! compared to quantify how much each actor, each window, and the network as
//! a whole change over the observation period.
//!
//! ```
//! use lsndyn_core::{analyze, ActorId, AnalysisOptions, MetricKind, TemporalEvent, WindowPlan};
//!
//! let id = |s: &str| ActorId::new(s).unwrap();
//! let events = vec![
//!     TemporalEvent::new(id("a"), id("b"), 5),
//!     TemporalEvent::new(id("b"), id("c"), 15),
//! ];
//! let options = AnalysisOptions {
//!     window: WindowPlan::FixedDuration { length: 10, origin: Some(0) },
//!     metrics: vec![MetricKind::Degree],
//!     ..AnalysisOptions::default()
//! };
//! let analysis = analyze(&events, &options).unwrap();
//! let degree = analysis.metric(MetricKind::Degree).unwrap();
//! assert_eq!(analysis.sliced.m(), 2);
//! assert!(degree.actors.dda_star > 0.0);
//! ```

pub mod centrality;
pub mod dynamicity;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod pipeline;
pub mod report;
pub mod temporal;

pub use centrality::{
    betweenness_centrality, closeness_centrality, compute_metric, degree_centrality, CentralityScores,
    ClosenessVariant, DegreeDirection, MetricKind, MetricSpec, NormalizationBase,
};
pub use dynamicity::{
    actor_contribution, actor_dynamicity, actor_window_dynamicity, network_dynamicity, rank_actors,
    window_dynamicity, ActorDynamicity, ActorWindowMatrix, DdnMode, NetworkDynamicity, ObservedValues,
    WindowDynamicity,
};
pub use error::{Error, Result};
pub use graph::{ActorId, BuildStats, Directedness, Graph};
pub use ingest::{parse_edge_list, validate, ColumnMap, ColumnRef, IngestConfig, IngestDiagnostics, InputFormat, TimestampFormat};
pub use pipeline::{analyze, run_compute, Analysis, AnalysisOptions, MetricAnalysis, RunConfig, WindowSpec};
pub use report::{emit_report, render, Destination, DynamicityReport, OutputFormat, Sections};
pub use temporal::{
    alpha_weights, presence_matrix, slice, AlphaWeights, CalendarUnit, PresenceMatrix, ShortIntervalNetwork,
    SlicedNetwork, TemporalEdgeList, TemporalEvent, Window, WindowPlan,
};
