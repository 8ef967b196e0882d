//! Synthetic workloads shared by the benchmarks.

use lsndyn_core::{ActorId, Directedness, Graph, TemporalEvent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seconds in a 30-day month, used to lay out synthetic monthly windows.
pub const MONTH: i64 = 30 * 86_400;

pub fn actor(i: usize) -> ActorId {
    ActorId::new(format!("user{i:05}")).expect("non-empty label")
}

/// An Erdős–Rényi style graph with `edges` random pairs over `nodes` actors.
pub fn random_graph(nodes: usize, edges: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = (0..edges).map(|_| (actor(rng.gen_range(0..nodes)), actor(rng.gen_range(0..nodes))));
    Graph::build(pairs, Directedness::Undirected, []).0
}

/// Email-like events: each actor belongs to a small team and mostly writes
/// to teammates, with occasional cross-team messages. Timestamps spread
/// uniformly over `months` windows of [`MONTH`] seconds starting at 0.
pub fn synthetic_events(actors: usize, events: usize, months: i64, seed: u64) -> Vec<TemporalEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let team = 25usize;
    (0..events)
        .map(|_| {
            let s = rng.gen_range(0..actors);
            let t = if rng.gen_bool(0.8) {
                let base = s - s % team;
                (base + rng.gen_range(0..team)).min(actors - 1)
            } else {
                rng.gen_range(0..actors)
            };
            let ts = rng.gen_range(0..months * MONTH);
            TemporalEvent::new(actor(s), actor(t), ts)
        })
        .collect()
}
