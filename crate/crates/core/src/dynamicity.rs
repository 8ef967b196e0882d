//! Dynamicity measures at actor, window and network level.
//!
//! For actor `i` and window `j` the weighted deviation is
//! `alpha(i, j) * |ov_an(i) - ov_sin(j, i)|`, where `ov_an` is the actor's
//! score in the aggregated network and `ov_sin` its score in window `j`
//! (zero when absent). Everything else is a mean or a rescaling of that
//! actor-by-window matrix.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::centrality::CentralityScores;
use crate::error::{Error, Result};
use crate::graph::ActorId;
use crate::temporal::{AlphaWeights, PresenceMatrix};

/// Centrality observations over the aggregated actor universe.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedValues {
    pub actors: Vec<ActorId>,
    /// Score in the aggregated network, per actor.
    pub aggregated: Vec<f64>,
    /// `per_window[j][i]`: score of actor `i` in window `j`, zero if absent.
    pub per_window: Vec<Vec<f64>>,
}

impl ObservedValues {
    /// Lines up window scores with the aggregated actor order. Actors missing
    /// from a window's scores observe zero there.
    pub fn new(aggregated: &CentralityScores, per_window: &[CentralityScores]) -> Result<Self> {
        let actors: Vec<ActorId> = aggregated.scores.keys().cloned().collect();
        for (j, window) in per_window.iter().enumerate() {
            if let Some(stray) = window.scores.keys().find(|a| !aggregated.scores.contains_key(*a)) {
                return Err(Error::consistency(format!(
                    "actor {stray} scored in window {} but absent from the aggregated network",
                    j + 1
                )));
            }
        }
        let ov_an = aggregated.scores.values().copied().collect();
        let ov_sin = per_window
            .iter()
            .map(|w| actors.iter().map(|a| w.get(a).unwrap_or(0.0)).collect())
            .collect();
        Ok(ObservedValues { actors, aggregated: ov_an, per_window: ov_sin })
    }

    pub fn n(&self) -> usize {
        self.actors.len()
    }

    pub fn m(&self) -> usize {
        self.per_window.len()
    }
}

fn check_alignment(obs: &ObservedValues, alpha: &AlphaWeights) -> Result<()> {
    if obs.actors != alpha.actors {
        return Err(Error::consistency("observed values and alpha weights cover different actors"));
    }
    if obs.per_window.iter().any(|w| w.len() != obs.n()) {
        return Err(Error::consistency("window observations do not cover every actor"));
    }
    if alpha.alpha.iter().any(|row| row.len() != obs.m()) {
        return Err(Error::consistency(format!(
            "alpha weights do not span the {} observed windows",
            obs.m()
        )));
    }
    Ok(())
}

/// Per-actor, per-window weighted deviations (n rows, m columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActorWindowMatrix {
    pub actors: Vec<ActorId>,
    pub rows: Vec<Vec<f64>>,
}

impl ActorWindowMatrix {
    pub fn m(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn row(&self, actor: &ActorId) -> Option<&[f64]> {
        self.actors.binary_search(actor).ok().map(|i| self.rows[i].as_slice())
    }
}

pub fn actor_window_dynamicity(obs: &ObservedValues, alpha: &AlphaWeights) -> Result<ActorWindowMatrix> {
    check_alignment(obs, alpha)?;
    let rows = (0..obs.n())
        .map(|i| {
            (0..obs.m())
                .map(|j| alpha.alpha[i][j] * (obs.aggregated[i] - obs.per_window[j][i]).abs())
                .collect()
        })
        .collect();
    Ok(ActorWindowMatrix { actors: obs.actors.clone(), rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActorDynamicity {
    pub dda: BTreeMap<ActorId, f64>,
    /// Largest DDA over all actors; zero for an empty network.
    pub dda_star: f64,
}

impl ActorDynamicity {
    /// Row means of the actor-by-window matrix.
    pub fn from_matrix(matrix: &ActorWindowMatrix) -> Result<Self> {
        let m = matrix.m();
        if m == 0 {
            return Err(Error::consistency("dynamicity needs at least one window"));
        }
        let dda: BTreeMap<ActorId, f64> = matrix
            .actors
            .iter()
            .cloned()
            .zip(matrix.rows.iter().map(|row| row.iter().sum::<f64>() / m as f64))
            .collect();
        let dda_star = dda.values().copied().fold(0.0, f64::max);
        Ok(ActorDynamicity { dda, dda_star })
    }

    pub fn len(&self) -> usize {
        self.dda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dda.is_empty()
    }

    pub fn mean(&self) -> f64 {
        if self.dda.is_empty() {
            0.0
        } else {
            self.dda.values().sum::<f64>() / self.dda.len() as f64
        }
    }
}

pub fn actor_dynamicity(obs: &ObservedValues, alpha: &AlphaWeights) -> Result<ActorDynamicity> {
    if obs.m() == 0 {
        return Err(Error::consistency("dynamicity needs at least one window"));
    }
    ActorDynamicity::from_matrix(&actor_window_dynamicity(obs, alpha)?)
}

/// Each actor's share of network dynamicity, `[1 - (DDA* - DDA_i)] / n`.
pub fn actor_contribution(ad: &ActorDynamicity, n: usize) -> Result<BTreeMap<ActorId, f64>> {
    if n == 0 {
        return Err(Error::config("network has no actors"));
    }
    let n = n as f64;
    Ok(ad
        .dda
        .iter()
        .map(|(a, &d)| (a.clone(), (1.0 - (ad.dda_star - d)) / n))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowDynamicity {
    /// `None` for windows without actors.
    pub per_window: Vec<Option<f64>>,
    /// Actors present per window.
    pub w: Vec<usize>,
}

pub fn window_dynamicity(
    obs: &ObservedValues,
    alpha: &AlphaWeights,
    presence: &PresenceMatrix,
) -> Result<WindowDynamicity> {
    check_alignment(obs, alpha)?;
    if presence.actors != obs.actors || presence.m() != obs.m() {
        return Err(Error::consistency("presence matrix does not match the observations"));
    }
    let mut per_window = Vec::with_capacity(obs.m());
    let mut w = Vec::with_capacity(obs.m());
    for j in 0..obs.m() {
        let (count, total) = (0..obs.n())
            .filter(|&i| presence.is_present(i, j))
            .fold((0usize, 0.0), |(c, t), i| {
                (c + 1, t + alpha.alpha[i][j] * (obs.aggregated[i] - obs.per_window[j][i]).abs())
            });
        per_window.push((count > 0).then(|| total / count as f64));
        w.push(count);
    }
    Ok(WindowDynamicity { per_window, w })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DdnMode {
    /// Sum of actor contributions, `sum_i [1 - (DDA* - DDA_i)] / n`.
    #[default]
    Eq6Literal,
    /// Mean actor dynamicity.
    MeanDda,
}

impl fmt::Display for DdnMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DdnMode::Eq6Literal => "eq6_literal",
            DdnMode::MeanDda => "mean_dda",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkDynamicity {
    pub ddn: f64,
    pub contributions: BTreeMap<ActorId, f64>,
    pub mode: DdnMode,
}

pub fn network_dynamicity(ad: &ActorDynamicity, n: usize, mode: DdnMode) -> Result<NetworkDynamicity> {
    let contributions = actor_contribution(ad, n)?;
    let ddn = match mode {
        // Sum the numerators and divide once, so a static network lands on
        // exactly 1.0.
        DdnMode::Eq6Literal => {
            ad.dda.values().map(|&d| 1.0 - (ad.dda_star - d)).sum::<f64>() / n as f64
        }
        DdnMode::MeanDda => ad.dda.values().sum::<f64>() / n as f64,
    };
    Ok(NetworkDynamicity { ddn, contributions, mode })
}

/// Top `k` actors by DDA, ties broken by ascending label.
pub fn rank_actors(ad: &ActorDynamicity, k: usize) -> Vec<(ActorId, f64)> {
    let mut ranked: Vec<(ActorId, f64)> = ad.dda.iter().map(|(a, &d)| (a.clone(), d)).collect();
    ranked.sort_by(by_dda_desc);
    ranked.truncate(k);
    ranked
}

/// Descending-DDA comparator shared by reports.
pub fn by_dda_desc(a: &(ActorId, f64), b: &(ActorId, f64)) -> Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}
