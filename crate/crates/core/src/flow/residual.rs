use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::network::{EdgeId, FlowNetwork, VertexId};
use super::{Flow, FlowError, Potentials};

/// One arc of a residual graph. `forward` arcs push more flow along
/// `edge`; backward arcs cancel flow on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidualArc {
    pub from: VertexId,
    pub to: VertexId,
    pub weight: i64,
    pub residual_capacity: i64,
    pub edge: EdgeId,
    pub forward: bool,
}

/// Explicit residual graph of a network under a flow.
#[derive(Clone, Debug)]
pub struct ResidualGraph {
    vertices: usize,
    arcs: Vec<ResidualArc>,
    out: Vec<Vec<usize>>,
}

impl ResidualGraph {
    pub fn arcs(&self) -> &[ResidualArc] {
        &self.arcs
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn arcs_from(&self, v: VertexId) -> impl Iterator<Item = &ResidualArc> {
        self.out[v].iter().map(move |&i| &self.arcs[i])
    }
}

/// A path through the residual graph and its true (unreduced) cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualPath {
    pub arcs: Vec<ResidualArc>,
    pub cost: i64,
}

pub(crate) fn for_each_residual_arc(
    network: &FlowNetwork,
    edge_flow: &[i64],
    v: VertexId,
    f: &mut dyn FnMut(ResidualArc),
) {
    for &id in network.incident(v) {
        let e = network.edge(id);
        if e.from == e.to {
            continue;
        }
        let x = edge_flow[id];
        if e.from == v && x < e.capacity {
            f(ResidualArc {
                from: v,
                to: e.to,
                weight: e.weight,
                residual_capacity: e.capacity - x,
                edge: id,
                forward: true,
            });
        }
        if e.to == v && x > e.demand {
            f(ResidualArc {
                from: v,
                to: e.from,
                weight: -e.weight,
                residual_capacity: x - e.demand,
                edge: id,
                forward: false,
            });
        }
    }
}

pub fn build_residual(network: &FlowNetwork, flow: &Flow) -> ResidualGraph {
    let n = network.vertex_count();
    let mut arcs = Vec::new();
    let mut out = vec![Vec::new(); n];
    for v in 0..n {
        for_each_residual_arc(network, &flow.edge_flow, v, &mut |a| {
            out[v].push(arcs.len());
            arcs.push(a);
        });
    }
    ResidualGraph {
        vertices: n,
        arcs,
        out,
    }
}

/// Single-source Dijkstra over reduced weights.
pub(crate) struct ShortestPaths {
    pub source: VertexId,
    /// Reduced distance from the source, `None` when unreachable.
    pub reduced: Vec<Option<i64>>,
    pub pred: Vec<Option<ResidualArc>>,
}

impl ShortestPaths {
    /// True distance from the source to `v`.
    pub fn distance(&self, potentials: &[i64], v: VertexId) -> Option<i64> {
        self.reduced[v].map(|d| d - potentials[self.source] + potentials[v])
    }

    pub fn path_to(&self, v: VertexId) -> Vec<ResidualArc> {
        let mut arcs = Vec::new();
        let mut cur = v;
        while let Some(a) = self.pred[cur] {
            arcs.push(a);
            cur = a.from;
        }
        arcs.reverse();
        arcs
    }

    /// Shifts potentials by the reduced distances so reduced weights stay
    /// non-negative after augmenting along a shortest path.
    pub fn update_potentials(&self, potentials: &mut [i64]) {
        let far = self.reduced.iter().flatten().copied().max().unwrap_or(0);
        for (p, d) in potentials.iter_mut().zip(&self.reduced) {
            *p += d.unwrap_or(far);
        }
    }
}

pub(crate) fn dijkstra(
    vertices: usize,
    source: VertexId,
    potentials: &[i64],
    skip_edge: Option<EdgeId>,
    arcs_from: &dyn Fn(VertexId, &mut dyn FnMut(ResidualArc)),
) -> Result<ShortestPaths, FlowError> {
    let mut reduced: Vec<Option<i64>> = vec![None; vertices];
    let mut pred: Vec<Option<ResidualArc>> = vec![None; vertices];
    let mut done = vec![false; vertices];
    let mut heap = BinaryHeap::new();
    reduced[source] = Some(0);
    heap.push(Reverse((0i64, source)));
    let mut error = None;
    while let Some(Reverse((d, v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        arcs_from(v, &mut |a: ResidualArc| {
            if Some(a.edge) == skip_edge {
                return;
            }
            let w = a.weight + potentials[a.from] - potentials[a.to];
            if w < 0 {
                error = Some(FlowError::NegativeReducedCost);
                return;
            }
            let nd = d + w;
            if !done[a.to] && reduced[a.to].is_none_or(|old| nd < old) {
                reduced[a.to] = Some(nd);
                pred[a.to] = Some(a);
                heap.push(Reverse((nd, a.to)));
            }
        });
        if let Some(e) = error {
            return Err(e);
        }
    }
    Ok(ShortestPaths {
        source,
        reduced,
        pred,
    })
}

/// Shortest path between two vertices of a residual graph.
///
/// `potentials` must make every reduced weight non-negative; they are
/// updated afterwards so that this still holds. Returns `Ok(None)` when
/// `to` is unreachable.
pub fn shortest_residual_path(
    graph: &ResidualGraph,
    potentials: &mut Potentials,
    from: VertexId,
    to: VertexId,
) -> Result<Option<ResidualPath>, FlowError> {
    if potentials.len() != graph.vertex_count() {
        return Err(FlowError::NegativeReducedCost);
    }
    let sp = dijkstra(graph.vertex_count(), from, potentials, None, &|v, f| {
        for a in graph.arcs_from(v) {
            f(*a)
        }
    })?;
    let result = sp.distance(potentials, to).map(|cost| ResidualPath {
        arcs: sp.path_to(to),
        cost,
    });
    sp.update_potentials(potentials);
    Ok(result)
}
