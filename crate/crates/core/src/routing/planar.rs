use std::fmt;

use crate::geom::Point;
use crate::scalar::Scalar;
use crate::topology::{NodeId, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanarMethod {
    /// Gabriel graph: no witness in the closed disc whose diameter is the edge.
    Gabriel,
    /// Relative neighbourhood graph: no witness strictly inside the lune of the edge.
    RelativeNeighborhood,
}

impl fmt::Display for PlanarMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlanarMethod::Gabriel => "GG",
            PlanarMethod::RelativeNeighborhood => "RNG",
        })
    }
}

/// Subgraph of a topology kept for face routing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarGraph {
    method: PlanarMethod,
    adjacency: Vec<Vec<NodeId>>,
}

impl PlanarGraph {
    pub fn method(&self) -> PlanarMethod {
        self.method
    }

    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.adjacency[id]
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Removes topology edges that have a witness among the endpoints' neighbours.
///
/// The Gabriel test uses the closed disc so that cocircular configurations
/// (the four corners of a grid square) drop both diagonals; the lune test is
/// strict, which keeps the RNG a subgraph of this Gabriel graph.
pub fn planarize<T: Scalar>(t: &Topology<T>, positions: &[Point<T>], method: PlanarMethod) -> PlanarGraph {
    assert_eq!(positions.len(), t.len(), "one position per node");
    let mut adjacency = vec![Vec::new(); t.len()];
    for (u, v) in t.edges() {
        let (pu, pv) = (positions[u], positions[v]);
        let duv = pu.dist_sq(&pv);
        let witnessed = t
            .neighbors(u)
            .iter()
            .chain(t.neighbors(v))
            .filter(|&&w| w != u && w != v)
            .any(|&w| {
                let (a, b) = (positions[w].dist_sq(&pu), positions[w].dist_sq(&pv));
                match method {
                    PlanarMethod::Gabriel => a + b <= duv,
                    PlanarMethod::RelativeNeighborhood => a.max(b) < duv,
                }
            });
        if !witnessed {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    PlanarGraph { method, adjacency }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{build_udg, Deployment};

    fn topo(points: &[(f64, f64)], range: f64) -> Topology<f64> {
        let pts = points.iter().map(|&(x, y)| Point::new(x, y)).collect();
        build_udg(&Deployment::new(pts, 10.0, 10.0).unwrap(), range).unwrap()
    }

    #[test]
    fn single_edge_survives() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0)], 1.0);
        for m in [PlanarMethod::Gabriel, PlanarMethod::RelativeNeighborhood] {
            let pg = planarize(&t, t.deployment().positions(), m);
            assert_eq!(pg.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        }
    }

    #[test]
    fn unit_square_loses_both_diagonals() {
        let t = topo(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], 1.5);
        assert_eq!(t.edge_count(), 6);
        for m in [PlanarMethod::Gabriel, PlanarMethod::RelativeNeighborhood] {
            let pg = planarize(&t, t.deployment().positions(), m);
            assert_eq!(pg.edge_count(), 4, "{m}");
            assert!(!pg.has_edge(0, 2) && !pg.has_edge(1, 3));
        }
    }

    #[test]
    fn obtuse_witness_only_breaks_rng() {
        // w sits in the lune of (u, v) but outside the Gabriel disc.
        let t = topo(&[(0.0, 0.0), (2.0, 0.0), (1.0, 1.2)], 3.0);
        let gg = planarize(&t, t.deployment().positions(), PlanarMethod::Gabriel);
        let rng = planarize(&t, t.deployment().positions(), PlanarMethod::RelativeNeighborhood);
        assert!(gg.has_edge(0, 1));
        assert!(!rng.has_edge(0, 1));
    }
}
