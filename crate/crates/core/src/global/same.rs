use std::collections::BTreeMap;

use super::{check_scope, value_universe, FlowBasedCostFunction, GlobalError, GlobalKind, Plan};
use crate::flow::FlowNetwork;
use crate::model::{Value, VarId};

/// Half the size of the symmetric difference of the two value multisets.
pub(crate) fn violation(left: &[Value], right: &[Value]) -> u64 {
    let mut diff: BTreeMap<Value, i64> = BTreeMap::new();
    for &v in left {
        *diff.entry(v).or_default() += 1;
    }
    for &v in right {
        *diff.entry(v).or_default() -= 1;
    }
    diff.values().map(|d| d.unsigned_abs()).sum::<u64>() / 2
}

/// Soft same under the `var` measure: both halves should hold the same
/// multiset of values.
pub fn build_soft_same(
    left: Vec<VarId>,
    right: Vec<VarId>,
    left_domains: Vec<Vec<Value>>,
    right_domains: Vec<Vec<Value>>,
) -> Result<FlowBasedCostFunction, GlobalError> {
    check_scope(&left, &left_domains)?;
    check_scope(&right, &right_domains)?;
    if left.len() != right.len() {
        return Err(GlobalError::UnequalHalves);
    }
    let n = left.len();
    let mut domains = left_domains;
    domains.extend(right_domains);
    let values = value_universe(&domains, []);
    let (s, t) = (0, 1);
    let x = |i: usize| 2 + i;
    let y = |i: usize| 2 + n + i;
    let val = |j: usize| 2 + 2 * n + j;
    let hub = 2 + 2 * n + values.len();
    let mut g = FlowNetwork::new(hub + 1, s, t);
    let mut edge_map = Vec::with_capacity(2 * n);
    let pos = |v: &Value| values.binary_search(v).expect("value in universe");
    for (i, dom) in domains[..n].iter().enumerate() {
        g.add_edge(s, x(i), 0, 1);
        edge_map.push(
            dom.iter()
                .map(|v| vec![g.add_edge(x(i), val(pos(v)), 0, 1)])
                .collect(),
        );
    }
    for (i, dom) in domains[n..].iter().enumerate() {
        edge_map.push(
            dom.iter()
                .map(|v| vec![g.add_edge(val(pos(v)), y(i), 0, 1)])
                .collect(),
        );
        g.add_edge(y(i), t, 0, 1);
    }
    // a unit switching value pays one through the hub
    for j in 0..values.len() {
        g.add_edge(val(j), hub, 1, n as i64);
        g.add_edge(hub, val(j), 0, n as i64);
    }
    let mut scope = left;
    scope.extend(right);
    let plan = Plan {
        network: g,
        edge_map,
        offset: 0,
        required: n as i64,
    };
    FlowBasedCostFunction::from_plan(GlobalKind::Same { left: n }, scope, domains, plan)
}
