//! Min-cost flow kernel: successive shortest paths with Johnson
//! potentials, incremental re-optimisation after weight or capacity
//! changes, and single-unit rerouting along an edge.

mod network;
mod residual;

pub use network::{Edge, EdgeId, FlowNetwork, VertexId};
pub use residual::{
    build_residual, shortest_residual_path, ResidualArc, ResidualGraph, ResidualPath,
};

use residual::{dijkstra, for_each_residual_arc, ShortestPaths};
use thiserror::Error;

/// Vertex potentials keeping reduced residual weights non-negative.
pub type Potentials = Vec<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("edge demands cannot be satisfied")]
    Infeasible,
    #[error("negative reduced cost: potentials are not valid")]
    NegativeReducedCost,
    #[error("vertex out of range")]
    UnknownVertex,
    #[error("capacity below demand or negative demand")]
    InvalidCapacity,
}

/// An integral flow with its value and total weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub edge_flow: Vec<i64>,
    pub value: i64,
    pub cost: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Increase,
    Decrease,
}

/// A network together with a min-cost max-flow and valid potentials.
#[derive(Clone, Debug)]
pub struct MinCostFlow {
    network: FlowNetwork,
    edge_flow: Vec<i64>,
    value: i64,
    potentials: Potentials,
}

/// Computes a min-cost flow among the maximum-value flows.
pub fn min_cost_max_flow(network: &FlowNetwork) -> Result<Flow, FlowError> {
    MinCostFlow::solve(network.clone()).map(|m| m.flow())
}

impl MinCostFlow {
    pub fn solve(mut network: FlowNetwork) -> Result<Self, FlowError> {
        let s = network.source();
        let t = network.sink();
        // A return arc t -> s priced below any achievable cost turns the
        // problem into a min-cost circulation that maximises value first.
        let mut big: i64 = 1;
        let (mut out_s, mut in_t, mut in_s, mut out_t) = (0i64, 0i64, 0i64, 0i64);
        for e in network.edges() {
            big += e.weight.abs() * e.capacity;
            if e.from != e.to {
                if e.from == s {
                    out_s += e.capacity;
                }
                if e.to == t {
                    in_t += e.capacity;
                }
                if e.to == s {
                    in_s += e.capacity;
                }
                if e.from == t {
                    out_t += e.capacity;
                }
            }
        }
        let base = network.edges().len();
        let mut extra = 0;
        if s != t {
            // an s -> t arc priced at `big` lets demands force a negative value
            for (from, to, w, bound) in
                [(t, s, -big, out_s.min(in_t)), (s, t, big, in_s.min(out_t))]
            {
                network.try_add_edge(from, to, w, bound.max(0), 0)?;
                extra += 1;
            }
        }

        // Saturate negative edges and start other edges at their demand;
        // with zero potentials every residual arc then has a non-negative
        // reduced weight.
        let edge_flow: Vec<i64> = network
            .edges()
            .iter()
            .map(|e| if e.weight < 0 { e.capacity } else { e.demand })
            .collect();
        let n = network.vertex_count();
        let mut m = MinCostFlow {
            network,
            edge_flow,
            value: 0,
            potentials: vec![0; n],
        };
        let mut excess = m.imbalance();
        m.route_imbalances(&mut excess)?;
        if extra == 2 {
            m.value = m.edge_flow[base] - m.edge_flow[base + 1];
        }
        for _ in 0..extra {
            m.edge_flow.pop();
            m.network.pop_edge();
        }
        Ok(m)
    }

    pub fn network(&self) -> &FlowNetwork {
        &self.network
    }

    pub fn edge_flow(&self) -> &[i64] {
        &self.edge_flow
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn cost(&self) -> i64 {
        self.network.cost_of(&self.edge_flow)
    }

    pub fn potentials(&self) -> &Potentials {
        &self.potentials
    }

    pub fn flow(&self) -> Flow {
        Flow {
            edge_flow: self.edge_flow.clone(),
            value: self.value,
            cost: self.cost(),
        }
    }

    fn imbalance(&self) -> Vec<i64> {
        let mut excess = vec![0i64; self.network.vertex_count()];
        for (e, &f) in self.network.edges().iter().zip(&self.edge_flow) {
            excess[e.from] -= f;
            excess[e.to] += f;
        }
        excess
    }

    fn shortest_from(&self, v: VertexId, skip: Option<EdgeId>) -> Result<ShortestPaths, FlowError> {
        let net = &self.network;
        let flow = &self.edge_flow;
        dijkstra(net.vertex_count(), v, &self.potentials, skip, &|u, f| {
            for_each_residual_arc(net, flow, u, f)
        })
    }

    fn augment(&mut self, path: &[ResidualArc], amount: i64) {
        for a in path {
            if a.forward {
                self.edge_flow[a.edge] += amount;
            } else {
                self.edge_flow[a.edge] -= amount;
            }
        }
    }

    /// Sends every excess to some deficit along shortest residual paths.
    fn route_imbalances(&mut self, excess: &mut [i64]) -> Result<(), FlowError> {
        while let Some(u) = excess.iter().position(|&b| b > 0) {
            let sp = self.shortest_from(u, None)?;
            let target = (0..excess.len())
                .filter(|&v| excess[v] < 0)
                .filter_map(|v| sp.distance(&self.potentials, v).map(|d| (d, v)))
                .min();
            let Some((_, v)) = target else {
                return Err(FlowError::Infeasible);
            };
            let path = sp.path_to(v);
            let amount = path
                .iter()
                .map(|a| a.residual_capacity)
                .fold(excess[u].min(-excess[v]), i64::min);
            sp.update_potentials(&mut self.potentials);
            self.augment(&path, amount);
            excess[u] -= amount;
            excess[v] += amount;
        }
        Ok(())
    }

    /// Augments source-to-sink while a path exists.
    fn augment_to_max(&mut self) -> Result<(), FlowError> {
        let (s, t) = (self.network.source(), self.network.sink());
        loop {
            let sp = self.shortest_from(s, None)?;
            if sp.reduced[t].is_none() {
                sp.update_potentials(&mut self.potentials);
                return Ok(());
            }
            let path = sp.path_to(t);
            let amount = path.iter().map(|a| a.residual_capacity).min().unwrap_or(0);
            sp.update_potentials(&mut self.potentials);
            self.augment(&path, amount);
            self.value += amount;
        }
    }

    /// True residual distances from `v` to every vertex.
    pub fn distances_from(&self, v: VertexId) -> Result<Vec<Option<i64>>, FlowError> {
        let sp = self.shortest_from(v, None)?;
        Ok((0..self.network.vertex_count())
            .map(|u| sp.distance(&self.potentials, u))
            .collect())
    }

    /// Cost of the cheapest flow of the same value whose flow on `e` is
    /// one unit higher (or lower). `None` when no such flow exists.
    pub fn reroute_cost(&self, e: EdgeId, dir: Direction) -> Result<Option<i64>, FlowError> {
        Ok(self.reroute_path(e, dir)?.map(|(_, c)| c))
    }

    /// The rerouted flow itself, with its exact cost.
    pub fn reroute_unit(&self, e: EdgeId, dir: Direction) -> Result<Option<Flow>, FlowError> {
        let Some((path, cost)) = self.reroute_path(e, dir)? else {
            return Ok(None);
        };
        let mut edge_flow = self.edge_flow.clone();
        for a in &path {
            edge_flow[a.edge] += if a.forward { 1 } else { -1 };
        }
        edge_flow[e] += match dir {
            Direction::Increase => 1,
            Direction::Decrease => -1,
        };
        Ok(Some(Flow {
            edge_flow,
            value: self.value,
            cost,
        }))
    }

    fn reroute_path(
        &self,
        e: EdgeId,
        dir: Direction,
    ) -> Result<Option<(Vec<ResidualArc>, i64)>, FlowError> {
        let edge = self.network.edge(e);
        let f = self.edge_flow[e];
        let (start, end, w) = match dir {
            Direction::Increase if f < edge.capacity => (edge.to, edge.from, edge.weight),
            Direction::Decrease if f > edge.demand => (edge.from, edge.to, -edge.weight),
            _ => return Ok(None),
        };
        if edge.from == edge.to {
            return Ok(Some((Vec::new(), self.cost() + w)));
        }
        let sp = self.shortest_from(start, Some(e))?;
        Ok(sp
            .distance(&self.potentials, end)
            .map(|d| (sp.path_to(end), self.cost() + w + d)))
    }

    /// Changes edge weights and restores optimality.
    pub fn set_weights(&mut self, changes: &[(EdgeId, i64)]) -> Result<(), FlowError> {
        for &(e, w) in changes {
            self.network.edge_mut(e).weight = w;
        }
        let mut excess = vec![0i64; self.network.vertex_count()];
        let mut dirty = false;
        for &(e, _) in changes {
            dirty |= self.fix_reduced_cost(e, &mut excess);
        }
        if dirty {
            self.route_imbalances(&mut excess)?;
        }
        Ok(())
    }

    // Saturates or empties `e` when one of its residual arcs has a negative
    // reduced weight.
    fn fix_reduced_cost(&mut self, e: EdgeId, excess: &mut [i64]) -> bool {
        let edge = self.network.edge(e).clone();
        if edge.from == edge.to {
            return false;
        }
        let f = self.edge_flow[e];
        let reduced = edge.weight + self.potentials[edge.from] - self.potentials[edge.to];
        let target = if reduced < 0 && f < edge.capacity {
            edge.capacity
        } else if reduced > 0 && f > edge.demand {
            edge.demand
        } else {
            return false;
        };
        let delta = target - f;
        self.edge_flow[e] = target;
        excess[edge.from] -= delta;
        excess[edge.to] += delta;
        true
    }

    /// Changes an edge capacity and restores a min-cost max-flow.
    pub fn set_capacity(&mut self, e: EdgeId, capacity: i64) -> Result<(), FlowError> {
        let edge = self.network.edge(e).clone();
        if capacity < edge.demand {
            return Err(FlowError::InvalidCapacity);
        }
        self.network.edge_mut(e).capacity = capacity;
        let mut excess = vec![0i64; self.network.vertex_count()];
        let f = self.edge_flow[e];
        if f > capacity {
            self.edge_flow[e] = capacity;
            excess[edge.from] += f - capacity;
            excess[edge.to] -= f - capacity;
        }
        self.fix_reduced_cost(e, &mut excess);
        if self.route_imbalances(&mut excess).is_err() {
            // The value must drop; start over on the modified network.
            *self = MinCostFlow::solve(self.network.clone())?;
            return Ok(());
        }
        if capacity > edge.capacity {
            self.augment_to_max()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FlowNetwork {
        let mut g = FlowNetwork::new(4, 0, 3);
        g.add_edge(0, 1, 1, 1);
        g.add_edge(0, 2, 2, 1);
        g.add_edge(1, 3, 1, 1);
        g.add_edge(2, 3, 1, 1);
        g.add_edge(1, 2, -1, 1);
        g
    }

    #[test]
    fn diamond_max_flow() {
        let f = min_cost_max_flow(&diamond()).unwrap();
        assert_eq!(f.value, 2);
        assert_eq!(f.cost, 5);
    }

    #[test]
    fn demand_forces_flow() {
        let mut g = FlowNetwork::new(3, 0, 2);
        g.add_edge(0, 1, 0, 2);
        g.try_add_edge(1, 2, 5, 2, 2).unwrap();
        let f = min_cost_max_flow(&g).unwrap();
        assert_eq!(f.edge_flow, vec![2, 2]);
        assert_eq!(f.cost, 10);
    }

    #[test]
    fn infeasible_demand() {
        let mut g = FlowNetwork::new(3, 0, 2);
        g.add_edge(0, 1, 0, 1);
        g.try_add_edge(1, 2, 0, 3, 2).unwrap();
        assert_eq!(min_cost_max_flow(&g), Err(FlowError::Infeasible));
    }

    #[test]
    fn weight_change_reoptimises() {
        let mut m = MinCostFlow::solve(diamond()).unwrap();
        m.set_weights(&[(1, -4)]).unwrap();
        let fresh = MinCostFlow::solve(m.network().clone()).unwrap();
        assert_eq!(m.cost(), fresh.cost());
        assert!(m.network().is_feasible(m.edge_flow()));
    }

    #[test]
    fn residual_query_matches_kernel() {
        let m = MinCostFlow::solve(diamond()).unwrap();
        let r = build_residual(m.network(), &m.flow());
        let mut pi = m.potentials().clone();
        let p = shortest_residual_path(&r, &mut pi, 3, 0).unwrap().unwrap();
        let d = m.distances_from(3).unwrap();
        assert_eq!(Some(p.cost), d[0]);
    }
}
