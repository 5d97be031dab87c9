use std::collections::BTreeMap;

use super::{
    check_scope, value_universe, FlowBasedCostFunction, GlobalError, GlobalKind, Plan,
    ViolationMeasure,
};
use crate::cost::Cost;
use crate::flow::FlowNetwork;
use crate::model::{Value, VarId};
use crate::table::TableCostFunction;

pub(crate) fn violation(measure: ViolationMeasure, values: &[Value]) -> u64 {
    let mut counts: BTreeMap<Value, u64> = BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_default() += 1;
    }
    match measure {
        ViolationMeasure::Dec => counts.values().map(|&c| c * (c - 1) / 2).sum(),
        _ => values.len() as u64 - counts.len() as u64,
    }
}

/// Soft all-different under the `var` or `dec` measure.
pub fn build_soft_alldifferent(
    scope: Vec<VarId>,
    domains: Vec<Vec<Value>>,
    measure: ViolationMeasure,
) -> Result<FlowBasedCostFunction, GlobalError> {
    check_scope(&scope, &domains)?;
    if !matches!(measure, ViolationMeasure::Var | ViolationMeasure::Dec) {
        return Err(GlobalError::UnsupportedMeasure(measure));
    }
    let values = value_universe(&domains, []);
    let n = scope.len();
    let (s, t) = (0, 1);
    let var_vertex = |i: usize| 2 + i;
    let val_vertex = |j: usize| 2 + n + j;
    let mut g = FlowNetwork::new(2 + n + values.len(), s, t);
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
    for (j, v) in values.iter().enumerate() {
        let users = domains.iter().filter(|d| d.contains(v)).count() as i64;
        match measure {
            ViolationMeasure::Dec => {
                for k in 0..users {
                    g.add_edge(val_vertex(j), t, k, 1);
                }
            }
            _ => {
                g.add_edge(val_vertex(j), t, 0, 1);
                if users > 1 {
                    g.add_edge(val_vertex(j), t, 1, users - 1);
                }
            }
        }
    }
    let plan = Plan {
        network: g,
        edge_map,
        offset: 0,
        required: n as i64,
    };
    FlowBasedCostFunction::from_plan(GlobalKind::AllDifferent { measure }, scope, domains, plan)
}

/// Pairwise disequality tables whose sum equals the `dec` measure.
pub fn decompose_alldiff_dec(scope: &[VarId], domains: &[Vec<Value>]) -> Vec<TableCostFunction> {
    let mut out = Vec::new();
    for i in 0..scope.len() {
        for j in i + 1..scope.len() {
            let mut t = TableCostFunction::new(
                vec![scope[i], scope[j]],
                vec![domains[i].len(), domains[j].len()],
                Cost::ZERO,
            );
            for (a, va) in domains[i].iter().enumerate() {
                if let Some(b) = domains[j].iter().position(|vb| vb == va) {
                    t.set(&[a, b], Cost(1));
                }
            }
            out.push(t);
        }
    }
    out
}
