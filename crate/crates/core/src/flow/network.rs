use super::FlowError;

pub type VertexId = usize;
pub type EdgeId = usize;

/// A directed edge with integer weight, capacity and demand (lower bound).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub weight: i64,
    pub capacity: i64,
    pub demand: i64,
}

/// Directed network with a designated source and sink.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork {
    vertices: usize,
    source: VertexId,
    sink: VertexId,
    edges: Vec<Edge>,
    incident: Vec<Vec<EdgeId>>,
}

impl FlowNetwork {
    pub fn new(vertices: usize, source: VertexId, sink: VertexId) -> Self {
        assert!(
            source < vertices && sink < vertices,
            "terminal out of range"
        );
        FlowNetwork {
            vertices,
            source,
            sink,
            edges: Vec::new(),
            incident: vec![Vec::new(); vertices],
        }
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.incident.push(Vec::new());
        self.vertices += 1;
        self.vertices - 1
    }

    pub fn add_edge(&mut self, from: VertexId, to: VertexId, weight: i64, capacity: i64) -> EdgeId {
        self.try_add_edge(from, to, weight, capacity, 0)
            .expect("invalid edge")
    }

    pub fn try_add_edge(
        &mut self,
        from: VertexId,
        to: VertexId,
        weight: i64,
        capacity: i64,
        demand: i64,
    ) -> Result<EdgeId, FlowError> {
        if from >= self.vertices || to >= self.vertices {
            return Err(FlowError::UnknownVertex);
        }
        if demand < 0 || capacity < demand {
            return Err(FlowError::InvalidCapacity);
        }
        let id = self.edges.len();
        self.edges.push(Edge {
            from,
            to,
            weight,
            capacity,
            demand,
        });
        self.incident[from].push(id);
        if to != from {
            self.incident[to].push(id);
        }
        Ok(id)
    }

    pub(crate) fn pop_edge(&mut self) {
        let id = self.edges.len() - 1;
        let e = self.edges.pop().expect("no edge");
        self.incident[e.from].retain(|&x| x != id);
        self.incident[e.to].retain(|&x| x != id);
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn sink(&self) -> VertexId {
        self.sink
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub(crate) fn edge_mut(&mut self, e: EdgeId) -> &mut Edge {
        &mut self.edges[e]
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v]
    }

    /// Total weight of a flow assignment.
    pub fn cost_of(&self, edge_flow: &[i64]) -> i64 {
        self.edges
            .iter()
            .zip(edge_flow)
            .map(|(e, &f)| e.weight * f)
            .sum()
    }

    /// Net flow leaving the source.
    pub fn value_of(&self, edge_flow: &[i64]) -> i64 {
        let s = self.source;
        self.edges
            .iter()
            .zip(edge_flow)
            .map(|(e, &f)| {
                if e.from == e.to {
                    0
                } else if e.from == s {
                    f
                } else if e.to == s {
                    -f
                } else {
                    0
                }
            })
            .sum()
    }

    /// Checks bounds and conservation at every vertex other than the terminals.
    pub fn is_feasible(&self, edge_flow: &[i64]) -> bool {
        if edge_flow.len() != self.edges.len() {
            return false;
        }
        let mut balance = vec![0i64; self.vertices];
        for (e, &f) in self.edges.iter().zip(edge_flow) {
            if f < e.demand || f > e.capacity {
                return false;
            }
            balance[e.from] -= f;
            balance[e.to] += f;
        }
        (0..self.vertices)
            .filter(|&v| v != self.source && v != self.sink)
            .all(|v| balance[v] == 0)
    }
}
