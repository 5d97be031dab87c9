//! Soft global cost functions represented by flow networks.
//!
//! Each function keeps a min-cost flow over its network. Unary costs
//! moved in or out of the function shift the weights of the edges that
//! stand for a variable taking a value, so the flow cost always equals the
//! function's minimum over the current domains.

mod alldiff;
mod automaton;
mod gcc;
mod regular;
mod same;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cost::Cost;
use crate::flow::{EdgeId, FlowError, FlowNetwork, MinCostFlow};
use crate::model::{Value, VarId};

pub use alldiff::{build_soft_alldifferent, decompose_alldiff_dec};
pub use automaton::Automaton;
pub use gcc::build_soft_gcc;
pub use regular::{build_soft_regular, build_soft_stretch, stretch_automaton};
pub use same::build_soft_same;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlobalError {
    #[error("scope is empty")]
    EmptyScope,
    #[error("scope and domain lists differ in length")]
    ScopeMismatch,
    #[error("measure `{0}` is not defined for this function")]
    UnsupportedMeasure(ViolationMeasure),
    #[error("value {0} lies outside the alphabet")]
    OutsideAlphabet(Value),
    #[error("bounds for value {0} have lb > ub")]
    BadBounds(Value),
    #[error("sum of lower bounds exceeds scope size or sum of upper bounds falls short")]
    GccPrecondition,
    #[error("malformed automaton: {0}")]
    BadAutomaton(String),
    #[error("both halves of a same function need equal size")]
    UnequalHalves,
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// How violation of a soft global constraint is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationMeasure {
    /// Fewest variables whose values must change.
    Var,
    /// Number of violated binary disequalities.
    Dec,
    /// Total shortfall and excess of value occurrences.
    Val,
    /// Edit distance to the language.
    Edit,
}

impl fmt::Display for ViolationMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationMeasure::Var => "var",
            ViolationMeasure::Dec => "dec",
            ViolationMeasure::Val => "val",
            ViolationMeasure::Edit => "edit",
        })
    }
}

impl FromStr for ViolationMeasure {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "var" => Ok(ViolationMeasure::Var),
            "dec" => Ok(ViolationMeasure::Dec),
            "val" => Ok(ViolationMeasure::Val),
            "edit" => Ok(ViolationMeasure::Edit),
            _ => Err(format!("unknown measure `{s}`")),
        }
    }
}

/// Per-value lower and upper bounds (occurrences, or stretch lengths).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OccurrenceBounds(BTreeMap<Value, (u64, u64)>);

impl OccurrenceBounds {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Value, lb: u64, ub: u64) -> Self {
        self.0.insert(v, (lb, ub));
        self
    }

    pub fn insert(&mut self, v: Value, lb: u64, ub: u64) {
        self.0.insert(v, (lb, ub));
    }

    pub fn get(&self, v: Value) -> Option<(u64, u64)> {
        self.0.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Value, u64, u64)> + '_ {
        self.0.iter().map(|(&v, &(l, u))| (v, l, u))
    }

    pub fn values(&self) -> impl Iterator<Item = Value> + '_ {
        self.0.keys().copied()
    }

    fn check(&self) -> Result<(), GlobalError> {
        match self.iter().find(|&(_, l, u)| l > u) {
            Some((v, _, _)) => Err(GlobalError::BadBounds(v)),
            None => Ok(()),
        }
    }
}

/// Family and parameters of a soft global cost function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlobalKind {
    AllDifferent {
        measure: ViolationMeasure,
    },
    Gcc {
        measure: ViolationMeasure,
        bounds: OccurrenceBounds,
    },
    /// The first `left` scope variables form one half, the rest the other.
    Same {
        left: usize,
    },
    Regular {
        measure: ViolationMeasure,
        automaton: Automaton,
    },
    Stretch {
        measure: ViolationMeasure,
        bounds: OccurrenceBounds,
        automaton: Automaton,
    },
}

impl GlobalKind {
    /// Violation of a complete tuple, `None` when infinite.
    pub fn violation(&self, values: &[Value]) -> Option<u64> {
        match self {
            GlobalKind::AllDifferent { measure } => Some(alldiff::violation(*measure, values)),
            GlobalKind::Gcc { measure, bounds } => Some(gcc::violation(*measure, bounds, values)),
            GlobalKind::Same { left } => Some(same::violation(&values[..*left], &values[*left..])),
            GlobalKind::Regular { measure, automaton }
            | GlobalKind::Stretch {
                measure, automaton, ..
            } => match measure {
                ViolationMeasure::Edit => automaton.edit_distance(values),
                _ => automaton.hamming_distance(values),
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GlobalKind::AllDifferent { .. } => "alldifferent",
            GlobalKind::Gcc { .. } => "gcc",
            GlobalKind::Same { .. } => "same",
            GlobalKind::Regular { .. } => "regular",
            GlobalKind::Stretch { .. } => "stretch",
        }
    }
}

/// Network layout handed over by a family builder.
pub(crate) struct Plan {
    pub network: FlowNetwork,
    /// Edges standing for "scope variable k takes its p-th value".
    pub edge_map: Vec<Vec<Vec<EdgeId>>>,
    pub offset: i64,
    pub required: i64,
}

#[derive(Clone, Debug)]
enum FlowState {
    Solved(MinCostFlow),
    Broken(FlowNetwork),
}

impl FlowState {
    fn network(&self) -> &FlowNetwork {
        match self {
            FlowState::Solved(m) => m.network(),
            FlowState::Broken(n) => n,
        }
    }
}

/// A soft global cost function backed by a min-cost flow.
#[derive(Clone, Debug)]
pub struct FlowBasedCostFunction {
    kind: GlobalKind,
    scope: Vec<VarId>,
    domains: Vec<Vec<Value>>,
    state: FlowState,
    base_weights: Vec<i64>,
    edge_map: Vec<Vec<Vec<EdgeId>>>,
    unary_delta: Vec<Vec<i64>>,
    delta: i64,
    offset: i64,
    required: i64,
    suspended: Vec<Vec<bool>>,
}

pub(crate) fn check_scope(scope: &[VarId], domains: &[Vec<Value>]) -> Result<(), GlobalError> {
    if scope.is_empty() {
        return Err(GlobalError::EmptyScope);
    }
    if scope.len() != domains.len() {
        return Err(GlobalError::ScopeMismatch);
    }
    Ok(())
}

impl FlowBasedCostFunction {
    pub(crate) fn from_plan(
        kind: GlobalKind,
        scope: Vec<VarId>,
        domains: Vec<Vec<Value>>,
        plan: Plan,
    ) -> Result<Self, GlobalError> {
        let base_weights = plan.network.edges().iter().map(|e| e.weight).collect();
        let state = match MinCostFlow::solve(plan.network.clone()) {
            Ok(m) => FlowState::Solved(m),
            Err(FlowError::Infeasible) => FlowState::Broken(plan.network),
            Err(e) => return Err(e.into()),
        };
        Ok(FlowBasedCostFunction {
            kind,
            unary_delta: domains.iter().map(|d| vec![0; d.len()]).collect(),
            suspended: domains.iter().map(|d| vec![false; d.len()]).collect(),
            scope,
            domains,
            state,
            base_weights,
            edge_map: plan.edge_map,
            delta: 0,
            offset: plan.offset,
            required: plan.required,
        })
    }

    pub fn kind(&self) -> &GlobalKind {
        &self.kind
    }

    pub fn scope(&self) -> &[VarId] {
        &self.scope
    }

    pub fn domains(&self) -> &[Vec<Value>] {
        &self.domains
    }

    pub fn network(&self) -> &FlowNetwork {
        self.state.network()
    }

    pub fn edges_for(&self, k: usize, p: usize) -> &[EdgeId] {
        &self.edge_map[k][p]
    }

    pub fn unary_delta(&self, k: usize, p: usize) -> i64 {
        self.unary_delta[k][p]
    }

    /// Constant removed from the function by projections onto the
    /// zero-arity cost.
    pub fn projected_constant(&self) -> i64 {
        self.delta
    }

    /// Constant added to the flow cost to obtain the function value.
    pub fn constant(&self) -> i64 {
        self.offset - self.delta
    }

    /// Flow value every tuple corresponds to.
    pub fn required_flow(&self) -> i64 {
        self.required
    }

    pub fn is_suspended(&self, k: usize, p: usize) -> bool {
        self.suspended[k][p]
    }

    fn solved(&self) -> Option<&MinCostFlow> {
        match &self.state {
            FlowState::Solved(m) if m.value() == self.required => Some(m),
            _ => None,
        }
    }

    fn to_cost(&self, raw: Option<i64>, top: Cost) -> Cost {
        match raw {
            Some(c) => Cost::from_signed(c + self.offset - self.delta, top),
            None => top,
        }
    }

    /// Minimum over all tuples of the current domains.
    pub fn min_cost(&self, top: Cost) -> Cost {
        self.to_cost(self.solved().map(|m| m.cost()), top)
    }

    /// For every value of scope variable `k`, the minimum over tuples
    /// that assign it. Suspended values read as `top`.
    pub fn min_cost_given_all(&self, k: usize, top: Cost) -> Vec<Cost> {
        let n = self.domains[k].len();
        let Some(m) = self.solved() else {
            return vec![top; n];
        };
        let cost = m.cost();
        let net = m.network();
        let flow = m.edge_flow();
        let mut cache: HashMap<usize, Vec<Option<i64>>> = HashMap::new();
        let mut out = Vec::with_capacity(n);
        for p in 0..n {
            if self.suspended[k][p] {
                out.push(top);
                continue;
            }
            let edges = &self.edge_map[k][p];
            let raw = if edges.iter().any(|&e| flow[e] > 0) {
                Some(cost)
            } else {
                let mut best: Option<i64> = None;
                for &e in edges {
                    let edge = net.edge(e);
                    if flow[e] >= edge.capacity {
                        continue;
                    }
                    let dist = cache
                        .entry(edge.to)
                        .or_insert_with(|| m.distances_from(edge.to).expect("valid potentials"));
                    if let Some(d) = dist[edge.from] {
                        let c = cost + edge.weight + d;
                        best = Some(best.map_or(c, |b| b.min(c)));
                    }
                }
                best
            };
            out.push(self.to_cost(raw, top));
        }
        out
    }

    pub fn min_cost_given(&self, k: usize, p: usize, top: Cost) -> Cost {
        self.min_cost_given_all(k, top)[p]
    }

    /// Current cost of a tuple given as domain positions.
    pub fn value_at(&self, positions: &[usize], top: Cost) -> Cost {
        let values: Vec<Value> = positions
            .iter()
            .enumerate()
            .map(|(k, &p)| self.domains[k][p])
            .collect();
        match self.kind.violation(&values) {
            None => top,
            Some(base) => {
                let shift: i64 = positions
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| self.unary_delta[k][p])
                    .sum();
                let c = base as i64 + shift - self.delta;
                debug_assert!(c >= 0, "global cost went negative");
                Cost::from_signed(c, top)
            }
        }
    }

    fn reweight(&mut self, changes: Vec<(EdgeId, i64)>) {
        if changes.is_empty() {
            return;
        }
        match &mut self.state {
            FlowState::Solved(m) => {
                if m.set_weights(&changes).is_err() {
                    let mut net = m.network().clone();
                    for &(e, w) in &changes {
                        net.edge_mut(e).weight = w;
                    }
                    self.state = FlowState::Broken(net);
                }
            }
            FlowState::Broken(net) => {
                for &(e, w) in &changes {
                    net.edge_mut(e).weight = w;
                }
            }
        }
    }

    /// Adds `amount[p]` to the unary shift of every listed value of scope
    /// variable `k`, then re-optimises once.
    pub(crate) fn shift_unary(&mut self, k: usize, amounts: &[(usize, i64)]) {
        let mut changes = Vec::new();
        for &(p, a) in amounts {
            if a == 0 {
                continue;
            }
            self.unary_delta[k][p] += a;
            for &e in &self.edge_map[k][p] {
                changes.push((e, self.base_weights[e] + self.unary_delta[k][p]));
            }
        }
        self.reweight(changes);
    }

    /// Removes `alpha` from every tuple assigning value `p` to scope
    /// variable `k` (the caller adds it to the unary cost).
    pub fn project(&mut self, k: usize, p: usize, alpha: i64) {
        self.shift_unary(k, &[(p, -alpha)]);
    }

    /// Adds `alpha` to every tuple assigning value `p` to scope variable
    /// `k` (the caller removes it from the unary cost).
    pub fn extend(&mut self, k: usize, p: usize, alpha: i64) {
        self.shift_unary(k, &[(p, alpha)]);
    }

    /// Removes a constant from every tuple.
    pub fn subtract_constant(&mut self, alpha: i64) {
        self.delta += alpha;
    }

    fn set_capacities(&mut self, edges: &[EdgeId], cap: i64) {
        let mut rebuild = false;
        match &mut self.state {
            FlowState::Solved(m) => {
                for &e in edges {
                    if m.set_capacity(e, cap).is_err() {
                        let mut net = m.network().clone();
                        for &e in edges {
                            net.edge_mut(e).capacity = cap;
                        }
                        self.state = FlowState::Broken(net);
                        return;
                    }
                }
            }
            FlowState::Broken(net) => {
                for &e in edges {
                    net.edge_mut(e).capacity = cap;
                }
                rebuild = true;
            }
        }
        if rebuild {
            if let Ok(m) = MinCostFlow::solve(self.state.network().clone()) {
                self.state = FlowState::Solved(m);
            }
        }
    }

    /// Removes value `p` of scope variable `k` from the network. Returns
    /// `false` when the function can no longer reach its required flow.
    pub fn suspend(&mut self, k: usize, p: usize) -> bool {
        if !self.suspended[k][p] {
            self.suspended[k][p] = true;
            let edges = self.edge_map[k][p].clone();
            self.set_capacities(&edges, 0);
        }
        self.solved().is_some()
    }

    pub fn restore(&mut self, k: usize, p: usize) -> bool {
        if self.suspended[k][p] {
            self.suspended[k][p] = false;
            let edges = self.edge_map[k][p].clone();
            self.set_capacities(&edges, 1);
        }
        self.solved().is_some()
    }

    pub fn is_feasible(&self) -> bool {
        self.solved().is_some()
    }

    /// Per-edge flow of the cached optimum, if there is one.
    pub fn cached_flow(&self) -> Option<&[i64]> {
        self.solved().map(|m| m.edge_flow())
    }

    /// Raw cost of the cached optimum, before the constant is added.
    pub fn cached_cost(&self) -> Option<i64> {
        self.solved().map(|m| m.cost())
    }

    /// Tuple carried by the cached flow: for each scope variable, the value
    /// whose edges carry one unit. `None` when the flow does not decode.
    pub fn decode_tuple(&self) -> Option<Vec<usize>> {
        let flow = self.cached_flow()?;
        let mut tuple = Vec::with_capacity(self.scope.len());
        for k in 0..self.scope.len() {
            let mut chosen = None;
            for p in 0..self.domains[k].len() {
                let sum: i64 = self.edge_map[k][p].iter().map(|&e| flow[e]).sum();
                match sum {
                    0 => {}
                    1 if chosen.is_none() => chosen = Some(p),
                    _ => return None,
                }
            }
            tuple.push(chosen?);
        }
        Some(tuple)
    }
}

/// Sorted union of the given domains plus any extra values.
pub(crate) fn value_universe(
    domains: &[Vec<Value>],
    extra: impl IntoIterator<Item = Value>,
) -> Vec<Value> {
    let mut all: Vec<Value> = domains.iter().flatten().copied().chain(extra).collect();
    all.sort_unstable();
    all.dedup();
    all
}
