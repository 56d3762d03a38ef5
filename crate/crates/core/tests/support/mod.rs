//! Checks shared by the property suite and the acceptance runner.
//!
//! Each check returns `Err(reason)` on the first counterexample so proptest can
//! shrink it and the acceptance runner can print it.

#![allow(dead_code)]

use std::collections::HashSet;

use avcs::coords::{align, bfs_hops, AlignRule, VirtualCoords};
use avcs::geom::segments_cross;
use avcs::harness::{evaluate, metrics_csv, parse_config, Scenario, ScenarioConfig};
use avcs::routing::{
    forwarding_set, greedy_route, lcr_route, planarize, route, sp_route, GeoMetric, HopMode, PlanarMethod,
    ProgressMetric, RouteResult,
};
use avcs::{NodeId, Topology};

pub fn random_config(n: usize, side: f64, degree: f64, seed: u64, extra: &str) -> ScenarioConfig {
    parse_config(&format!(
        "deployment = random\nn = {n}\nwidth = {side}\nheight = {side}\nradio_range = degree:{degree}\nseed = {seed}\n{extra}"
    ))
    .expect("valid config")
}

/// `None` when the largest component is too small to host distinct anchors.
pub fn random_scenario(n: usize, side: f64, degree: f64, seed: u64, extra: &str) -> Option<Scenario> {
    Scenario::build(&random_config(n, side, degree, seed, extra)).ok()
}

/// Hop counts to every anchor change by at most one across an edge.
pub fn check_lipschitz(sc: &Scenario) -> Result<(), String> {
    match sc.vcs.lipschitz_violations(&sc.topology).first() {
        None => Ok(()),
        Some((u, v)) => Err(format!("edge {u}-{v} jumps by more than one hop")),
    }
}

/// Aligned values stay within the range of the integer values in the node's
/// `depth`-hop ball, and do not depend on anything outside it.
pub fn check_alignment(sc: &Scenario, depth: u32, rule: AlignRule, probes: &[NodeId]) -> Result<(), String> {
    let t = &sc.topology;
    let aligned = align::<f64>(&sc.vcs, t, depth, rule);
    for &u in probes {
        let hops = bfs_hops(t, u);
        let near = |v: NodeId| hops[v].is_some_and(|h| h <= depth);
        for k in 0..sc.vcs.dims() {
            let ball = (0..t.len()).filter(|&v| near(v)).map(|v| sc.vcs.of(v)[k]);
            let (lo, hi) = ball.fold((u32::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)));
            let x = aligned.of(u)[k];
            if x < lo as f64 - 1e-9 || x > hi as f64 + 1e-9 {
                return Err(format!("node {u} coordinate {k} = {x} outside [{lo}, {hi}]"));
            }
        }
        // Shift everything farther than `depth` hops; u must not notice.
        let rows: Vec<Vec<u32>> = (0..t.len())
            .map(|v| sc.vcs.of(v).iter().map(|&c| if near(v) { c } else { c + 7 }).collect())
            .collect();
        let moved = align::<f64>(&VirtualCoords::from_rows(&rows), t, depth, rule);
        if moved.of(u) != aligned.of(u) {
            return Err(format!("node {u} depends on nodes beyond {depth} hops"));
        }
    }
    Ok(())
}

/// A greedy route never revisits a node, every hop gets strictly closer (the
/// hand-off to an adjacent destination only needs to not get farther), and a
/// failed route stops at a node with an empty forwarding set.
pub fn check_greedy_route<M: ProgressMetric<f64> + ?Sized>(
    r: &RouteResult,
    metric: &M,
    t: &Topology,
) -> Result<(), String> {
    let mut seen = HashSet::new();
    if let Some(u) = r.path.iter().find(|&&u| !seen.insert(u)) {
        return Err(format!("{}->{} revisits {u}", r.src, r.dst));
    }
    for (i, w) in r.path.windows(2).enumerate() {
        let (a, b) = (metric.distance(w[0], r.dst), metric.distance(w[1], r.dst));
        let closer = if w[1] == r.dst { b <= a } else { b < a };
        if r.modes[i] != HopMode::Greedy || !closer {
            return Err(format!("{}->{}: hop {}->{} goes from {a} to {b}", r.src, r.dst, w[0], w[1]));
        }
    }
    if !r.is_delivered() {
        let last = *r.path.last().unwrap();
        if !forwarding_set(last, r.dst, metric, t).is_empty() || t.are_adjacent(last, r.dst) {
            return Err(format!("{}->{} gave up at {last} with a way forward", r.src, r.dst));
        }
    }
    Ok(())
}

/// Greedy on geographic and aligned virtual coordinates over sampled pairs.
pub fn check_greedy(sc: &Scenario, pairs: &[(NodeId, NodeId)]) -> Result<(), String> {
    let geo = GeoMetric::new(&sc.geo);
    let virt = sc.metric();
    for &(s, d) in pairs {
        check_greedy_route(&greedy_route(s, d, &geo, &sc.topology, sc.ttl), &geo, &sc.topology)?;
        check_greedy_route(&greedy_route(s, d, &virt, &sc.topology, sc.ttl), &virt, &sc.topology)?;
    }
    Ok(())
}

/// Every delivered route is a walk on the graph at least as long as the shortest path.
pub fn check_stretch(sc: &Scenario, pairs: &[(NodeId, NodeId)]) -> Result<(), String> {
    let ctx = sc.context();
    for &(s, d) in pairs {
        let sp = sp_route(s, d, &sc.topology).hops();
        let r = route(sc.config.protocol, s, d, &ctx).map_err(|e| e.to_string())?;
        if !r.path.windows(2).all(|w| sc.topology.are_adjacent(w[0], w[1])) {
            return Err(format!("{} {s}->{d} uses a non-edge", sc.config.protocol));
        }
        if r.is_delivered() && r.hops() < sp {
            return Err(format!("{} {s}->{d}: {} hops beats the shortest path {sp}", sc.config.protocol, r.hops()));
        }
    }
    Ok(())
}

/// RNG is a subgraph of GG, and neither has two properly crossing edges.
pub fn check_planar(t: &Topology) -> Result<(), String> {
    let pos = t.deployment().positions();
    let gg = planarize(t, pos, PlanarMethod::Gabriel);
    let rng = planarize(t, pos, PlanarMethod::RelativeNeighborhood);
    if let Some((u, v)) = rng.edges().find(|&(u, v)| !gg.has_edge(u, v)) {
        return Err(format!("RNG edge {u}-{v} missing from GG"));
    }
    for g in [&gg, &rng] {
        let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
        for (i, &(a, b)) in edges.iter().enumerate() {
            for &(c, d) in &edges[i + 1..] {
                if [a, b].contains(&c) || [a, b].contains(&d) {
                    continue;
                }
                if segments_cross(&pos[a], &pos[b], &pos[c], &pos[d]) {
                    return Err(format!("{} edges {a}-{b} and {c}-{d} cross", g.method()));
                }
            }
        }
    }
    Ok(())
}

/// LCR delivers every pair of a connected topology given `2 |V|` hops.
pub fn check_lcr_complete(sc: &Scenario, pairs: &[(NodeId, NodeId)]) -> Result<(), String> {
    let metric = sc.metric();
    let ttl = 2 * sc.len();
    for &(s, d) in pairs {
        let r = lcr_route(s, d, &metric, &sc.topology, ttl);
        if !r.is_delivered() {
            return Err(format!("lcr {s}->{d} failed: {:?}", r.outcome));
        }
    }
    Ok(())
}

/// Two evaluations of the same config give the same bytes, whatever the pool size.
pub fn check_determinism(cfg: &ScenarioConfig) -> Result<(), String> {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("pool");
        pool.install(|| {
            let sc = Scenario::build(cfg).map_err(|e| e.to_string())?;
            evaluate(&sc).map(|row| metrics_csv(&[row])).map_err(|e| e.to_string())
        })
    };
    let first = run(1)?;
    for threads in [1, 3] {
        let again = run(threads)?;
        if again != first {
            return Err(format!("{threads}-thread run differs:\n{first}{again}"));
        }
    }
    Ok(())
}

/// Deterministic spread of ordered pairs over `n` nodes.
pub fn spread_pairs(n: usize, count: usize, salt: usize) -> Vec<(NodeId, NodeId)> {
    (0..count)
        .map(|i| {
            let s = (i * 7919 + salt * 104_729) % n;
            let d = (i * 6007 + salt * 15_485_863 + 1) % n;
            (s, d)
        })
        .filter(|(s, d)| s != d)
        .collect()
}
