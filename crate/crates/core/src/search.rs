//! Depth-first branch and bound with maintained consistency.

use std::time::{Duration, Instant};

use crate::cost::Cost;
use crate::model::{Value, Wcsp};
use crate::propagation::{Consistency, Propagator};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub consistency: Consistency,
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Only solutions strictly cheaper than this are accepted.
    pub upper_bound: Option<Cost>,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(consistency: Consistency) -> Self {
        SearchConfig {
            consistency,
            node_limit: None,
            time_limit: None,
            upper_bound: None,
            seed: 0,
        }
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig::new(Consistency::WeakEdgac)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Optimal,
    Infeasible,
    LimitReached,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub status: SearchStatus,
    /// Cost of the best solution found, if any.
    pub cost: Option<Cost>,
    pub assignment: Option<Vec<Value>>,
    /// Branching nodes visited.
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SearchStatus::Optimal
    }
}

struct LimitHit;

struct Solver<'a> {
    original: &'a Wcsp,
    cfg: &'a SearchConfig,
    prop: Propagator,
    start: Instant,
    nodes: u64,
    best: Option<(Cost, Vec<usize>)>,
}

impl Solver<'_> {
    fn check_limits(&self) -> Result<(), LimitHit> {
        if self.cfg.node_limit.is_some_and(|n| self.nodes >= n) {
            return Err(LimitHit);
        }
        if self
            .cfg
            .time_limit
            .is_some_and(|t| self.start.elapsed() >= t)
        {
            return Err(LimitHit);
        }
        Ok(())
    }

    fn dfs(&mut self, w: &mut Wcsp) -> Result<(), LimitHit> {
        let Some(x) = (0..w.num_vars()).find(|&x| w.var(x).size() > 1) else {
            self.leaf(w);
            return Ok(());
        };
        self.check_limits()?;
        self.nodes += 1;
        let mut order: Vec<usize> = w.var(x).live_positions().collect();
        order.sort_by_key(|&p| (w.var(x).unary(p), p));
        for p in order {
            if w.w_zero().is_top(w.top()) {
                break;
            }
            w.push_state();
            let ok = w.assign(x, p).is_ok() && self.prop.enforce_after(w, &[x]).is_ok();
            let out = if ok { self.dfs(w) } else { Ok(()) };
            w.pop_state().expect("balanced trail");
            out?;
        }
        Ok(())
    }

    fn leaf(&mut self, w: &mut Wcsp) {
        let tuple: Vec<usize> = (0..w.num_vars())
            .map(|x| w.var(x).live_positions().next().expect("non-empty domain"))
            .collect();
        let cost = self.original.evaluate_positions(&tuple);
        if cost.is_top(w.top()) {
            return;
        }
        w.set_top(cost);
        self.best = Some((cost, tuple));
    }
}

/// Finds a minimum-cost assignment of `original`, which is left untouched.
pub fn solve(original: &Wcsp, cfg: &SearchConfig) -> SearchResult {
    let start = Instant::now();
    let mut w = original.clone();
    let top = match cfg.upper_bound {
        Some(ub) => ub.min(original.top()),
        None => original.top(),
    };
    w.set_top(top);
    let mut solver = Solver {
        original,
        cfg,
        prop: Propagator::new(&w, cfg.consistency),
        start,
        nodes: 0,
        best: None,
    };
    let outcome = if solver.prop.enforce_all(&mut w).is_ok() {
        solver.dfs(&mut w)
    } else {
        Ok(())
    };
    let status = match (&outcome, &solver.best) {
        (Err(LimitHit), _) => SearchStatus::LimitReached,
        (Ok(()), Some(_)) => SearchStatus::Optimal,
        (Ok(()), None) => SearchStatus::Infeasible,
    };
    let (cost, assignment) = match solver.best {
        Some((c, tuple)) => {
            let values = tuple
                .iter()
                .enumerate()
                .map(|(x, &p)| original.var(x).value(p))
                .collect();
            (Some(c), Some(values))
        }
        None => (None, None),
    };
    SearchResult {
        status,
        cost,
        assignment,
        nodes: solver.nodes,
        elapsed: start.elapsed(),
    }
}
