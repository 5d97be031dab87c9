use std::collections::BTreeMap;

use super::{
    check_scope, value_universe, FlowBasedCostFunction, GlobalError, GlobalKind, OccurrenceBounds,
    Plan, ViolationMeasure,
};
use crate::flow::FlowNetwork;
use crate::model::{Value, VarId};

pub(crate) fn violation(
    measure: ViolationMeasure,
    bounds: &OccurrenceBounds,
    values: &[Value],
) -> u64 {
    let mut counts: BTreeMap<Value, u64> = BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_default() += 1;
    }
    let n = values.len() as u64;
    let (mut short, mut excess) = (0u64, 0u64);
    let universe = value_universe(&[values.to_vec()], bounds.values());
    for v in universe {
        let c = counts.get(&v).copied().unwrap_or(0);
        let (lb, ub) = bounds.get(v).unwrap_or((0, n));
        short += lb.saturating_sub(c);
        excess += c.saturating_sub(ub);
    }
    match measure {
        ViolationMeasure::Val => short + excess,
        _ => short.max(excess),
    }
}

/// Soft global cardinality under the `var` or `val` measure.
///
/// Values without explicit bounds may occur any number of times.
pub fn build_soft_gcc(
    scope: Vec<VarId>,
    domains: Vec<Vec<Value>>,
    bounds: OccurrenceBounds,
    measure: ViolationMeasure,
) -> Result<FlowBasedCostFunction, GlobalError> {
    check_scope(&scope, &domains)?;
    bounds.check()?;
    if !matches!(measure, ViolationMeasure::Var | ViolationMeasure::Val) {
        return Err(GlobalError::UnsupportedMeasure(measure));
    }
    let n = scope.len();
    let nn = n as u64;
    let values = value_universe(&domains, bounds.values());
    let bound = |v: Value| bounds.get(v).unwrap_or((0, nn));
    if measure == ViolationMeasure::Var {
        let lbs: u64 = values.iter().map(|&v| bound(v).0).sum();
        let ubs: u64 = values.iter().map(|&v| bound(v).1.min(nn)).sum();
        if lbs > nn || ubs < nn {
            return Err(GlobalError::GccPrecondition);
        }
    }
    let (s, t) = (0, 1);
    let var_vertex = |i: usize| 2 + i;
    let val_vertex = |j: usize| 2 + n + j;
    let pool = 2 + n + values.len();
    let mut g = FlowNetwork::new(pool + 1, s, t);
    let mut edge_map = Vec::with_capacity(n);
    for (i, dom) in domains.iter().enumerate() {
        g.add_edge(s, var_vertex(i), 0, 1);
        let row = dom
            .iter()
            .map(|v| {
                let j = values.binary_search(v).expect("value in universe");
                vec![g.add_edge(var_vertex(i), val_vertex(j), 0, 1)]
            })
            .collect();
        edge_map.push(row);
    }
    let n64 = n as i64;
    let mut offset = 0i64;
    for (j, &v) in values.iter().enumerate() {
        let (lb, ub) = bound(v);
        let (lb, ub) = (lb as i64, ub.min(nn) as i64);
        match measure {
            ViolationMeasure::Val => {
                // convex marginal: shortfall below lb, free up to ub, excess above
                offset += lb;
                if lb > 0 {
                    g.add_edge(val_vertex(j), t, -1, lb.min(n64));
                }
                if ub > lb {
                    g.add_edge(val_vertex(j), t, 0, ub - lb);
                }
                g.add_edge(val_vertex(j), t, 1, n64);
            }
            _ => {
                g.try_add_edge(val_vertex(j), t, 0, ub.max(lb), lb)?;
                g.add_edge(val_vertex(j), pool, 1, n64);
                g.add_edge(pool, val_vertex(j), 0, n64);
            }
        }
    }
    let plan = Plan {
        network: g,
        edge_map,
        offset,
        required: n64,
    };
    FlowBasedCostFunction::from_plan(GlobalKind::Gcc { measure, bounds }, scope, domains, plan)
}
