//! Pairwise evaluation and the aggregated metrics row.

use std::fmt::Write as _;

use rand::seq::index;
use rayon::prelude::*;

use crate::coords::bfs_hops;
use crate::routing::{route, Outcome, RouteResult};
use crate::topology::{seeded_rng, NodeId};

use super::scenario::Scenario;
use super::HarnessError;

/// RNG stream used to sample source-destination pairs.
pub(crate) const PAIR_STREAM: u64 = 2;

pub const METRICS_HEADER: &str = "scenario_id,protocol,coord_system,distance,align_depth,mean_degree,pairs,\
greedy_ratio,delivery_ratio,stretch_greedy,stretch_all,stretch_complementary";

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub scenario_id: String,
    pub protocol: String,
    pub coord_system: String,
    pub distance: String,
    pub align_depth: u32,
    pub mean_degree: f64,
    /// Reachable ordered pairs evaluated.
    pub pairs: usize,
    pub greedy_ratio: f64,
    pub delivery_ratio: f64,
    /// Mean hops / shortest hops over pure-greedy deliveries.
    pub stretch_greedy: f64,
    /// Mean hops / shortest hops over every delivery.
    pub stretch_all: f64,
    /// Mean, over mixed deliveries, of the hops taken from the first
    /// complementary hop onwards divided by the shortest path from that point.
    pub stretch_complementary: f64,
    /// Ordered pairs left out because an endpoint is outside the evaluated component.
    pub excluded_pairs: usize,
}

fn real(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.6}")
    }
}

impl MetricsRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.scenario_id,
            self.protocol,
            self.coord_system,
            self.distance,
            self.align_depth,
            real(self.mean_degree),
            self.pairs,
            real(self.greedy_ratio),
            real(self.delivery_ratio),
            real(self.stretch_greedy),
            real(self.stretch_all),
            real(self.stretch_complementary),
        )
    }
}

/// Header plus one line per row.
pub fn metrics_csv(rows: &[MetricsRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{METRICS_HEADER}");
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv());
    }
    out
}

/// Ordered pairs as `dst * (n - 1) + r`, where `r` skips over `dst` itself.
fn decode_pair(p: usize, n: usize) -> (NodeId, NodeId) {
    let dst = p / (n - 1);
    let r = p % (n - 1);
    let src = if r < dst { r } else { r + 1 };
    (src, dst)
}

/// Pair indices to evaluate, sorted (so pairs arrive grouped by destination).
pub fn select_pairs(n: usize, budget: usize, seed: u64) -> Vec<usize> {
    let total = n * n.saturating_sub(1);
    if budget == 0 || budget >= total {
        return (0..total).collect();
    }
    let mut rng = seeded_rng(seed, PAIR_STREAM);
    let mut picked = index::sample(&mut rng, total, budget).into_vec();
    picked.sort_unstable();
    picked
}

/// One evaluated pair.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PairRecord {
    outcome: Outcome,
    stretch: f64,
    complementary_stretch: Option<f64>,
}

fn record(r: &RouteResult, from_dst: &[Option<u32>]) -> PairRecord {
    let shortest = |node: NodeId| from_dst[node].expect("same component") as f64;
    let stretch = r.hops() as f64 / shortest(r.src);
    let complementary_stretch = match (r.outcome, r.first_complementary_node()) {
        (Outcome::DeliveredMixed, Some(i)) => Some((r.hops() - i) as f64 / shortest(r.path[i])),
        _ => None,
    };
    PairRecord {
        outcome: r.outcome,
        stretch,
        complementary_stretch,
    }
}

/// Running mean.
#[derive(Default, Clone, Copy)]
struct Mean {
    n: usize,
    sum: f64,
}

impl Mean {
    fn add(&mut self, v: f64) {
        self.n += 1;
        self.sum += v;
    }

    fn value(self) -> f64 {
        if self.n == 0 {
            f64::NAN
        } else {
            self.sum / self.n as f64
        }
    }
}

/// Routes the selected pairs and aggregates them.
///
/// Pairs are grouped by destination and routed in parallel; the groups are
/// folded in a fixed order, so the result does not depend on the worker count.
pub fn evaluate(sc: &Scenario) -> Result<MetricsRow, HarnessError> {
    let n = sc.len();
    let pairs = if n < 2 { Vec::new() } else { select_pairs(n, sc.config.sample, sc.config.seed) };
    let mut groups: Vec<&[usize]> = Vec::new();
    let mut rest = pairs.as_slice();
    while let Some(&first) = rest.first() {
        let dst = first / (n - 1);
        let len = rest.iter().position(|&p| p / (n - 1) != dst).unwrap_or(rest.len());
        groups.push(&rest[..len]);
        rest = &rest[len..];
    }

    let ctx = sc.context();
    let protocol = sc.config.protocol;
    let records: Vec<Vec<PairRecord>> = groups
        .par_iter()
        .map(|group| {
            let dst = group[0] / (n - 1);
            let from_dst = bfs_hops(&sc.topology, dst);
            group
                .iter()
                .map(|&p| {
                    let (src, dst) = decode_pair(p, n);
                    route(protocol, src, dst, &ctx).map(|r| record(&r, &from_dst))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let (mut greedy, mut delivered) = (0usize, 0usize);
    let (mut s_greedy, mut s_all, mut s_comp) = (Mean::default(), Mean::default(), Mean::default());
    for rec in records.iter().flatten() {
        match rec.outcome {
            Outcome::DeliveredGreedy => {
                greedy += 1;
                delivered += 1;
                s_greedy.add(rec.stretch);
                s_all.add(rec.stretch);
            }
            Outcome::DeliveredMixed => {
                delivered += 1;
                s_all.add(rec.stretch);
            }
            Outcome::Failed(_) => {}
        }
        if let Some(c) = rec.complementary_stretch {
            s_comp.add(c);
        }
    }
    let evaluated = pairs.len();
    let ratio = |k: usize| if evaluated == 0 { f64::NAN } else { k as f64 / evaluated as f64 };
    let total = sc.len() + sc.excluded_nodes;
    Ok(MetricsRow {
        scenario_id: sc.config.id.clone(),
        protocol: protocol.name().to_string(),
        coord_system: sc.coord_system().to_string(),
        distance: sc.distance_name().to_string(),
        align_depth: sc.aligned.depth(),
        mean_degree: sc.topology.mean_degree(),
        pairs: evaluated,
        greedy_ratio: ratio(greedy),
        delivery_ratio: ratio(delivered),
        stretch_greedy: s_greedy.value(),
        stretch_all: s_all.value(),
        stretch_complementary: s_comp.value(),
        excluded_pairs: total * total.saturating_sub(1) - n * n.saturating_sub(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::parse_config;

    fn eval(text: &str) -> MetricsRow {
        evaluate(&Scenario::build(&parse_config(text).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn pair_decoding_covers_every_ordered_pair_once() {
        let n = 7;
        let mut seen: Vec<(usize, usize)> = (0..n * (n - 1)).map(|p| decode_pair(p, n)).collect();
        assert!(seen.iter().all(|&(s, d)| s != d && s < n && d < n));
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), n * (n - 1));
    }

    #[test]
    fn sampling_is_seeded_and_sorted() {
        let a = select_pairs(100, 500, 3);
        assert_eq!(a, select_pairs(100, 500, 3));
        assert_ne!(a, select_pairs(100, 500, 4));
        assert_eq!(a.len(), 500);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(select_pairs(10, 90, 1), (0..90).collect::<Vec<_>>());
        assert_eq!(select_pairs(10, 1000, 1).len(), 90);
    }

    #[test]
    fn void_free_grid_geo_is_perfect() {
        let row = eval("rows = 8\ncols = 8\nprotocol = gf-geo");
        assert_eq!(row.pairs, 64 * 63);
        assert_eq!((row.greedy_ratio, row.delivery_ratio, row.stretch_greedy), (1.0, 1.0, 1.0));
        assert!(row.stretch_complementary.is_nan());
        assert!(row.to_csv().ends_with(",1.000000,1.000000,1.000000,1.000000,NaN"));
    }

    #[test]
    fn shortest_path_has_unit_stretch() {
        let row = eval("rows = 6\ncols = 6\nvoids = remove(5)\nprotocol = sp");
        assert_eq!((row.greedy_ratio, row.stretch_all), (1.0, 1.0));
    }

    #[test]
    fn complementary_modes_deliver_around_a_hole() {
        for p in ["gpsr-gg", "gpsr-rng", "lcr", "bvr"] {
            let row = eval(&format!("rows = 12\ncols = 12\nvoids = remove(21)\nprotocol = {p}\nttl_factor = 20"));
            assert_eq!(row.delivery_ratio, 1.0, "{p}");
            assert!(row.greedy_ratio < 1.0, "{p}");
            assert!(row.greedy_ratio <= row.delivery_ratio);
            assert!(row.stretch_complementary >= 1.0, "{p}");
            assert!(row.stretch_greedy <= row.stretch_all, "{p}");
        }
    }

    #[test]
    fn csv_header_matches_columns() {
        let row = eval("rows = 3\ncols = 3\nprotocol = gf-vcs\nradio_range = 1.5");
        let csv = metrics_csv(&[row]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
        assert!(lines[1].starts_with("scenario,gf-vcs,vcs,euclid,0,"));
    }
}
