//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

mod common;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use common::{
    floyd_warshall, harmonic_oracle, id, incidence_degree, label, normalized_betweenness_oracle, wf_oracle,
};
use lsndyn::{execute, parse_cli};
use lsndyn_core::temporal::transition_alpha;
use lsndyn_core::{
    alpha_weights, analyze, betweenness_centrality, closeness_centrality, degree_centrality, render, run_compute,
    ActorId, AnalysisOptions, ClosenessVariant, DdnMode, DegreeDirection, Directedness, DynamicityReport, Graph,
    MetricKind, NormalizationBase, OutputFormat, PresenceMatrix, RunConfig, TemporalEvent, WindowPlan, WindowSpec,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const FIXTURES: &str = "tests/fixtures";
const ALL_METRICS: [MetricKind; 3] = [MetricKind::Degree, MetricKind::Closeness, MetricKind::Betweenness];

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn check_vec(what: &str, got: &[f64], want: &[f64], tol: f64) -> Outcome {
    ensure!(got.len() == want.len(), "{what}: length {} vs {}", got.len(), want.len());
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        ensure!(close(*g, *w, tol), "{what}[{i}]: got {g}, want {w}");
    }
    Ok(())
}

// 1. Transition weights.

fn alpha_table() -> Outcome {
    let cases = [
        (true, Some(true), 1.0),
        (true, Some(false), 0.5),
        (false, Some(true), 0.0),
        (false, Some(false), 0.0),
        (true, None, 1.0),
        (false, None, 0.0),
    ];
    for (cur, prev, want) in cases {
        let got = transition_alpha(cur, prev);
        ensure!(got == want, "alpha({cur}, {prev:?}) = {got}, want {want}");
    }

    // Every transition through the matrix form: rows PP, AP, PA, AA then a third window.
    let present = vec![
        vec![true, true, true],
        vec![false, true, false],
        vec![true, false, true],
        vec![false, false, false],
    ];
    let actors = ["pp", "ap", "pa", "aa"].map(id).to_vec();
    let alpha = alpha_weights(&PresenceMatrix::new(actors, present, 3).map_err(|e| e.to_string())?);
    let want = [[1.0, 1.0, 1.0], [0.0, 0.5, 0.0], [1.0, 0.0, 0.5], [0.0, 0.0, 0.0]];
    for (row, want) in alpha.alpha.iter().zip(want) {
        ensure!(row[..] == want[..], "alpha row {row:?}, want {want:?}");
    }
    Ok(())
}

// 2. Centralities against brute-force oracles.

fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, density: f64) -> (Graph, usize) {
    let n = rng.gen_range(1..=max_nodes);
    let mode = if rng.gen_bool(0.5) { Directedness::Directed } else { Directedness::Undirected };
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(density) {
                edges.push((label(a), label(b)));
            }
        }
    }
    let graph = Graph::build(edges, mode, (0..n).map(label)).0;
    // Half the time normalize by a larger enclosing network.
    let base = if rng.gen_bool(0.5) { n } else { n + rng.gen_range(1..10) };
    (graph, base)
}

fn scores_vec(scores: &lsndyn_core::CentralityScores, g: &Graph) -> Vec<f64> {
    g.nodes().iter().map(|v| scores.get(v).unwrap_or(f64::NAN)).collect()
}

fn directional_degree(g: &Graph, base: usize, outgoing: bool) -> Vec<f64> {
    let edges: Vec<(ActorId, ActorId)> = g.edges().collect();
    g.nodes()
        .iter()
        .map(|v| {
            let count = edges.iter().filter(|(a, b)| if outgoing { a == v } else { b == v }).count();
            if base < 2 { 0.0 } else { count as f64 / (base - 1) as f64 }
        })
        .collect()
}

fn centrality_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c3a_711e);
    for case in 0..200 {
        let density = rng.gen_range(0.1..0.7);
        let (g, _) = random_graph(&mut rng, 7, density);
        let got = betweenness_centrality(&g, g.node_count().max(1)).map_err(|e| e.to_string())?;
        check_vec(&format!("betweenness case {case}"), &scores_vec(&got, &g), &normalized_betweenness_oracle(&g), 1e-9)?;
    }
    for case in 0..100 {
        let density = rng.gen_range(0.0..0.15);
        let (g, base) = random_graph(&mut rng, 50, density);
        let what = |m: &str| format!("{m} case {case} (n={}, base={base})", g.node_count());
        let harmonic = closeness_centrality(&g, ClosenessVariant::Harmonic, base).map_err(|e| e.to_string())?;
        check_vec(&what("harmonic closeness"), &scores_vec(&harmonic, &g), &harmonic_oracle(&g, base), 1e-9)?;
        let wf = closeness_centrality(&g, ClosenessVariant::WfCorrected, base).map_err(|e| e.to_string())?;
        check_vec(&what("wf closeness"), &scores_vec(&wf, &g), &wf_oracle(&g, base), 1e-9)?;
        let degree = degree_centrality(&g, DegreeDirection::All, base).map_err(|e| e.to_string())?;
        check_vec(&what("degree"), &scores_vec(&degree, &g), &incidence_degree(&g, base), 1e-9)?;
        if g.is_directed() {
            for (dir, outgoing) in [(DegreeDirection::Out, true), (DegreeDirection::In, false)] {
                let got = degree_centrality(&g, dir, base).map_err(|e| e.to_string())?;
                check_vec(&what("directional degree"), &scores_vec(&got, &g), &directional_degree(&g, base, outgoing), 1e-9)?;
            }
        }
        ensure!(floyd_warshall(&g).len() == g.node_count(), "oracle size");
    }
    Ok(())
}

// 3. Fixture S1 end to end.

fn s1_config(closeness: ClosenessVariant) -> RunConfig {
    let mut config = RunConfig::new(Path::new(FIXTURES).join("s1_events.csv"));
    config.window = WindowSpec::Plan(WindowPlan::FixedDuration { length: 100, origin: Some(0) });
    config.metrics = ALL_METRICS.to_vec();
    config.closeness_variant = closeness;
    config
}

fn oracle_f64(v: &Value) -> Option<f64> {
    v.as_f64()
}

fn check_metric_against_oracle(report: &DynamicityReport, kind: MetricKind, oracle: &Value, actors: &[String]) -> Outcome {
    let tol = 1e-9;
    let m = report.metric(kind).ok_or_else(|| format!("{kind} missing from report"))?;
    let name = kind.name();

    let rows = m.actors.as_ref().ok_or("actors section missing")?;
    ensure!(rows.len() == actors.len(), "{name}: {} actor rows", rows.len());
    for row in rows {
        let want_dda = oracle["dda"][&row.actor_id].as_f64().ok_or(format!("oracle dda {}", row.actor_id))?;
        let want_contrib = oracle["contribution"][&row.actor_id].as_f64().ok_or("oracle contribution")?;
        ensure!(close(row.dda, want_dda, tol), "{name} DDA {}: {} vs {want_dda}", row.actor_id, row.dda);
        ensure!(
            close(row.contribution, want_contrib, tol),
            "{name} DDN^i {}: {} vs {want_contrib}",
            row.actor_id,
            row.contribution
        );
    }

    let windows = m.windows.as_ref().ok_or("windows section missing")?;
    let want_sin = oracle["ddn_sin"].as_array().ok_or("oracle ddn_sin")?;
    ensure!(windows.len() == want_sin.len(), "{name}: {} window rows", windows.len());
    for (row, want) in windows.iter().zip(want_sin) {
        match (row.ddn_sin, oracle_f64(want)) {
            (Some(g), Some(w)) => ensure!(close(g, w, tol), "{name} DDN_SIN w{}: {g} vs {w}", row.window),
            (None, None) => {}
            (g, w) => return Err(format!("{name} DDN_SIN w{}: {g:?} vs {w:?}", row.window)),
        }
    }

    let net = m.network.as_ref().ok_or("network section missing")?;
    let eq6 = oracle["ddn_eq6"].as_f64().ok_or("oracle ddn_eq6")?;
    let mean = oracle["ddn_mean"].as_f64().ok_or("oracle ddn_mean")?;
    ensure!(close(net.ddn_eq6_literal, eq6, tol), "{name} eq6 DDN {} vs {eq6}", net.ddn_eq6_literal);
    ensure!(close(net.ddn_mean_dda, mean, tol), "{name} mean DDN {} vs {mean}", net.ddn_mean_dda);
    ensure!(close(net.ddn, eq6, tol), "{name} configured DDN {} vs {eq6}", net.ddn);

    let matrix = m.matrix.as_ref().ok_or("matrix section missing")?;
    for row in matrix {
        let want: Vec<f64> = oracle["matrix"][&row.actor_id]
            .as_array()
            .ok_or("oracle matrix row")?
            .iter()
            .map(|v| v.as_f64().unwrap_or(f64::NAN))
            .collect();
        check_vec(&format!("{name} matrix {}", row.actor_id), &row.values, &want, tol)?;
    }
    Ok(())
}

fn fixture_s1() -> Outcome {
    let text = std::fs::read_to_string(Path::new(FIXTURES).join("s1_oracle.json")).map_err(|e| e.to_string())?;
    let oracle: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let actors: Vec<String> =
        oracle["actors"].as_array().ok_or("oracle actors")?.iter().map(|a| a.as_str().unwrap_or("").to_owned()).collect();

    let report = run_compute(&s1_config(ClosenessVariant::Harmonic)).map_err(|e| e.to_string())?;
    ensure!(report.metadata.n == 5 && report.metadata.m == 3, "n={} m={}", report.metadata.n, report.metadata.m);
    check_metric_against_oracle(&report, MetricKind::Degree, &oracle["degree"], &actors)?;
    check_metric_against_oracle(&report, MetricKind::Closeness, &oracle["closeness_harmonic"], &actors)?;
    check_metric_against_oracle(&report, MetricKind::Betweenness, &oracle["betweenness"], &actors)?;

    let report = run_compute(&s1_config(ClosenessVariant::WfCorrected)).map_err(|e| e.to_string())?;
    check_metric_against_oracle(&report, MetricKind::Closeness, &oracle["closeness_wf"], &actors)?;

    // Presence-driven weights, via the in-memory pipeline.
    let loaded = lsndyn_core::pipeline::load_input(
        &Path::new(FIXTURES).join("s1_events.csv"),
        &lsndyn_core::IngestConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let options = AnalysisOptions {
        window: WindowPlan::FixedDuration { length: 100, origin: Some(0) },
        metrics: vec![MetricKind::Degree],
        ..AnalysisOptions::default()
    };
    let analysis = analyze(&loaded.events, &options).map_err(|e| e.to_string())?;
    for (i, actor) in analysis.alpha.actors.iter().enumerate() {
        let want: Vec<f64> = oracle["alpha"][actor.as_str()]
            .as_array()
            .ok_or("oracle alpha")?
            .iter()
            .map(|v| v.as_f64().unwrap_or(f64::NAN))
            .collect();
        ensure!(analysis.alpha.alpha[i] == want, "alpha {actor}: {:?} vs {want:?}", analysis.alpha.alpha[i]);
    }
    Ok(())
}

// 4. A network that never changes.

fn static_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0057_a71c);
    for case in 0..40 {
        let n = rng.gen_range(2..=20);
        let m = rng.gen_range(1..=6);
        let directed = rng.gen_bool(0.5);
        let mut edges: Vec<(usize, usize)> = (1..n).map(|b| (rng.gen_range(0..b), b)).collect();
        for _ in 0..rng.gen_range(0..n * 2) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                edges.push((a, b));
            }
        }
        let events: Vec<TemporalEvent> = (0..m)
            .flat_map(|j| edges.iter().map(move |&(a, b)| TemporalEvent::new(label(a), label(b), 10 * j as i64 + 3)))
            .collect();
        let options = AnalysisOptions {
            window: WindowPlan::Explicit { boundaries: (0..=m as i64).map(|j| 10 * j).collect() },
            directedness: if directed { Directedness::Directed } else { Directedness::Undirected },
            metrics: ALL_METRICS.to_vec(),
            closeness_variant: if rng.gen_bool(0.5) { ClosenessVariant::Harmonic } else { ClosenessVariant::WfCorrected },
            normalization_base: NormalizationBase::PerNetwork,
            ..AnalysisOptions::default()
        };
        let analysis = analyze(&events, &options).map_err(|e| e.to_string())?;
        for metric in &analysis.metrics {
            let kind = metric.spec.kind;
            ensure!(metric.actors.dda.values().all(|&d| d == 0.0), "case {case} {kind}: nonzero DDA");
            ensure!(
                metric.windows.per_window.iter().all(|w| *w == Some(0.0)),
                "case {case} {kind}: DDN_SIN {:?}",
                metric.windows.per_window
            );
            ensure!(metric.ddn_eq6_literal == 1.0, "case {case} {kind}: eq6 DDN {}", metric.ddn_eq6_literal);
        }
    }
    Ok(())
}

// 5. Range properties on random temporal networks.

fn random_temporal(rng: &mut ChaCha8Rng) -> (Vec<TemporalEvent>, usize) {
    loop {
        let n = rng.gen_range(2..=30);
        let m = rng.gen_range(1..=8);
        let p = rng.gen_range(0.1..0.9);
        let mut events = Vec::new();
        for j in 0..m {
            let present: Vec<usize> = (0..n).filter(|_| rng.gen_bool(p)).collect();
            if present.len() < 2 {
                continue;
            }
            let t = |rng: &mut ChaCha8Rng| 10 * j as i64 + rng.gen_range(0..10);
            // Every chosen actor gets at least one partner, then some extra edges.
            for &a in &present {
                let b = *present.choose(rng).unwrap();
                if a != b {
                    let ts = t(rng);
                    events.push(TemporalEvent::new(label(a), label(b), ts));
                }
            }
            for _ in 0..rng.gen_range(0..present.len() * 2) {
                let (a, b) = (*present.choose(rng).unwrap(), *present.choose(rng).unwrap());
                let ts = t(rng);
                events.push(TemporalEvent::new(label(a), label(b), ts));
            }
        }
        if events.iter().any(|e| e.source != e.target) {
            return (events, m);
        }
    }
}

fn range_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x002a_96e5);
    for case in 0..600 {
        let (events, m) = random_temporal(&mut rng);
        let options = AnalysisOptions {
            window: WindowPlan::Explicit { boundaries: (0..=m as i64).map(|j| 10 * j).collect() },
            directedness: if rng.gen_bool(0.5) { Directedness::Directed } else { Directedness::Undirected },
            metrics: ALL_METRICS.to_vec(),
            closeness_variant: if rng.gen_bool(0.5) { ClosenessVariant::Harmonic } else { ClosenessVariant::WfCorrected },
            normalization_base: if rng.gen_bool(0.5) { NormalizationBase::PerNetwork } else { NormalizationBase::AggregatedN },
            ddn_mode: DdnMode::Eq6Literal,
            top_k: 5,
        };
        let analysis = analyze(&events, &options).map_err(|e| format!("case {case}: {e}"))?;
        let n = analysis.sliced.n();
        let in_unit = |x: f64| (0.0..=1.0).contains(&x);
        for metric in &analysis.metrics {
            let tag = format!("case {case} {} (n={n}, m={m})", metric.spec.kind);
            let ad = &metric.actors;
            ensure!(ad.dda.values().all(|&d| in_unit(d)), "{tag}: DDA out of range");
            let contributions = &metric.network.contributions;
            let upper = 1.0 / n as f64;
            ensure!(contributions.values().all(|&c| (0.0..=upper).contains(&c)), "{tag}: DDN^i out of range");
            ensure!(metric.windows.per_window.iter().flatten().all(|&w| in_unit(w)), "{tag}: DDN_SIN out of range");
            for (j, w) in metric.windows.per_window.iter().enumerate() {
                ensure!(w.is_some() == (metric.windows.w[j] > 0), "{tag}: DDN_SIN definedness in window {j}");
            }
            ensure!(in_unit(metric.ddn_eq6_literal) && in_unit(metric.ddn_mean_dda), "{tag}: DDN out of range");
            let closed = 1.0 - ad.dda_star + ad.mean();
            ensure!(close(metric.ddn_eq6_literal, closed, 1e-12), "{tag}: eq6 {} vs {closed}", metric.ddn_eq6_literal);
            for (actor, &d) in &ad.dda {
                if d == ad.dda_star {
                    ensure!(contributions[actor] == upper, "{tag}: argmax {actor} gets {}", contributions[actor]);
                }
            }
        }
    }
    Ok(())
}

// 6. Report shape and golden file.

fn s1_cli_args() -> Vec<String> {
    let args = "lsndyn compute --input tests/fixtures/s1_events.csv --window fixed:100@0 \
                --metrics degree,closeness,betweenness --top 5";
    args.split_whitespace().map(str::to_owned).collect()
}

fn golden_report() -> Outcome {
    let config = parse_cli(s1_cli_args()).map_err(|e| format!("{e:?}"))?;
    let report = run_compute(&config).map_err(|e| e.to_string())?;
    let text = render(&report, OutputFormat::Text);
    let golden = std::fs::read_to_string(Path::new(FIXTURES).join("s1_report.txt")).map_err(|e| e.to_string())?;
    if text != golden {
        let diff = text.lines().zip(golden.lines()).position(|(a, b)| a != b).unwrap_or(text.lines().count().min(golden.lines().count()));
        return Err(format!("text report differs from golden at line {}", diff + 1));
    }

    let lines: Vec<&str> = text.lines().collect();
    let section = |title: &str| -> Result<usize, String> {
        lines.iter().position(|l| l.starts_with(title)).ok_or(format!("missing section `{title}`"))
    };
    let block = |start: usize| -> Vec<&str> { lines[start + 1..].iter().take_while(|l| !l.is_empty()).copied().collect() };

    let top = block(section("TOP-5 ACTORS SHOWING HIGHER DYNAMICITY (DDA)")?);
    ensure!(top.len() == 2 + 5, "top-5 block has {} lines", top.len());
    for title in ["Degree Centrality", "Closeness Centrality", "Betweenness Centrality"] {
        ensure!(top[0].contains(title), "top-5 header lacks {title}");
    }
    ensure!(top[1].matches("Actor ID").count() == 3 && top[1].matches("Dynamicity").count() == 3, "top-5 column pairs");
    ensure!(top[2..].iter().all(|l| l.split_whitespace().count() == 6), "top-5 rows need three (actor, value) pairs");

    let windows = block(section("DYNAMICITY SHOWN BY SHORT-INTERVAL NETWORKS (DDN_SIN)")?);
    ensure!(windows.len() == 1 + 3, "window block has {} lines", windows.len());
    for col in ["SIN ID", "Degree", "Closeness", "Betweenness"] {
        ensure!(windows[0].contains(col), "window header lacks {col}");
    }
    ensure!(windows[1..].iter().all(|l| l.split_whitespace().count() == 6), "window rows need id, start, actors and three values");

    let network = block(section("DEGREE OF DYNAMICITY SHOWN BY THE NETWORK (DDN)")?);
    ensure!(network.len() == 1 + 3, "network block has {} lines", network.len());
    for (row, title) in network[1..].iter().zip(["Degree", "Closeness", "Betweenness"]) {
        ensure!(row.starts_with(title), "network row `{row}` should start with {title}");
    }
    Ok(())
}

// 7. Scale and byte-identical reruns.

const MONTH_STARTS_2001: [i64; 7] = [978_307_200, 980_985_600, 983_404_800, 986_083_200, 988_675_200, 991_353_600, 993_945_600];

fn write_scale_dataset(path: &Path) -> std::io::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2001);
    let actors = 2500;
    let team = 25;
    let mut out = String::from("source,target,timestamp\n");
    for _ in 0..50_000 {
        let a = rng.gen_range(0..actors);
        let b = if rng.gen_bool(0.8) {
            (a / team) * team + rng.gen_range(0..team)
        } else {
            rng.gen_range(0..actors)
        };
        let t = rng.gen_range(MONTH_STARTS_2001[0]..MONTH_STARTS_2001[6]);
        writeln!(out, "user{a:05},user{b:05},{t}").unwrap();
    }
    // Every actor sends at least one message so the universe is complete.
    for a in 0..actors {
        let b = (a + 1) % actors;
        let t = rng.gen_range(MONTH_STARTS_2001[0]..MONTH_STARTS_2001[6]);
        writeln!(out, "user{a:05},user{b:05},{t}").unwrap();
    }
    std::fs::write(path, out)
}

fn scale_run() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("events.csv");
    write_scale_dataset(&input).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("report{run}.json"));
        let args = [
            "lsndyn", "compute", "--input", input.to_str().unwrap(), "--window", "month", "--metrics",
            "degree,closeness,betweenness", "--top", "5", "--output-format", "json", "--out", out.to_str().unwrap(),
        ];
        let config = parse_cli(args).map_err(|e| format!("{e:?}"))?;
        let started = Instant::now();
        execute(&config).map_err(|e| e.to_string())?;
        let took = started.elapsed();
        ensure!(took < Duration::from_secs(60), "run {run} took {took:?}");
        let bytes = std::fs::read(&out).map_err(|e| e.to_string())?;
        let report = DynamicityReport::from_json(std::str::from_utf8(&bytes).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure!(report.metadata.n == 2500, "n = {}", report.metadata.n);
        ensure!(report.metadata.m == 6, "m = {}", report.metadata.m);
        ensure!(report.metadata.ingest.rows_accepted == 52_500, "rows = {}", report.metadata.ingest.rows_accepted);
        println!("    scale run {run}: {:.2}s, {} bytes", took.as_secs_f64(), bytes.len());
        outputs.push(bytes);
    }
    ensure!(outputs[0] == outputs[1], "reports differ between runs");
    Ok(())
}

// 8. Ties resolved by label.

fn tie_dataset(rng: &mut ChaCha8Rng) -> String {
    // Window 1: x, m, c around hub h. Window 2: x, m, c as a triangle.
    // A static pair p-q sits in both. x, m and c share the top DDA; p and q tie below.
    let mut rows = vec![
        ("x", "h", 1), ("m", "h", 2), ("c", "h", 3), ("p", "q", 4),
        ("x", "m", 11), ("m", "c", 12), ("c", "x", 13), ("q", "p", 14),
    ];
    rows.shuffle(rng);
    let mut out = String::from("source,target,timestamp\n");
    for (a, b, t) in rows {
        writeln!(out, "{a},{b},{t}").unwrap();
    }
    out
}

fn tie_breaking() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut seen: Option<(Vec<(usize, String, f64)>, String)> = None;
    for run in 0..10 {
        let input = dir.path().join(format!("ties{run}.csv"));
        std::fs::write(&input, tie_dataset(&mut rng)).map_err(|e| e.to_string())?;
        let mut config = RunConfig::new(&input);
        config.window = WindowSpec::Plan(WindowPlan::FixedDuration { length: 10, origin: Some(0) });
        config.metrics = vec![MetricKind::Degree];
        config.top_k = 5;
        let report = run_compute(&config).map_err(|e| e.to_string())?;
        let top: Vec<(usize, String, f64)> = report
            .metric(MetricKind::Degree)
            .and_then(|m| m.top_actors.clone())
            .ok_or("no top actors")?
            .into_iter()
            .map(|r| (r.rank, r.actor_id, r.dda))
            .collect();
        let labels: Vec<&str> = top.iter().map(|(_, a, _)| a.as_str()).collect();
        ensure!(labels == ["c", "m", "x", "p", "q"], "run {run}: ranking {labels:?}");
        ensure!(top[0].2 == top[1].2 && top[1].2 == top[2].2, "run {run}: top three do not tie: {top:?}");
        ensure!(top[2].2 > top[3].2, "run {run}: tie group not strictly on top");
        let metrics = serde_json::to_string(&report.metrics).map_err(|e| e.to_string())?;
        match &seen {
            None => seen = Some((top, metrics)),
            Some((t, m)) => ensure!(*t == top && *m == metrics, "run {run} differs from run 0"),
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 alpha table conformance", alpha_table, Duration::from_secs(1)),
        ("2 centrality oracle equivalence", centrality_oracles, Duration::from_secs(30)),
        ("3 fixture S1 end-to-end", fixture_s1, Duration::from_secs(1)),
        ("4 static-network identity", static_identity, Duration::from_secs(1)),
        ("5 range properties", range_properties, Duration::from_secs(60)),
        ("6 report structure (golden S1)", golden_report, Duration::from_secs(60)),
        ("7 scale and determinism", scale_run, Duration::from_secs(120)),
        ("8 tie-breaking determinism", tie_breaking, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    let mut results = BTreeMap::new();
    for (name, check, budget) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let took = started.elapsed();
        let outcome = outcome.and_then(|()| {
            if took <= budget { Ok(()) } else { Err(format!("took {took:?}, budget {budget:?}")) }
        });
        match &outcome {
            Ok(()) => println!("PASS  criterion {name} ({:.2}s)", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name} ({:.2}s): {why}", took.as_secs_f64());
            }
        }
        results.insert(name, outcome.is_ok());
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
