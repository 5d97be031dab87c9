//! Exhaustive integral flow enumeration for small networks.

use rand::Rng;
use wcspflow::flow::{Direction, FlowError, FlowNetwork, MinCostFlow};

/// Calls `visit` with every integral flow within bounds that conserves
/// flow at every non-terminal vertex.
pub fn enumerate_flows(net: &FlowNetwork, visit: &mut dyn FnMut(&[i64])) {
    let m = net.edges().len();
    let n = net.vertex_count();
    // last edge index touching each vertex; a vertex is closed after it
    let mut last = vec![None; n];
    for (i, e) in net.edges().iter().enumerate() {
        last[e.from] = Some(i);
        last[e.to] = Some(i);
    }
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); m];
    for v in 0..n {
        if v == net.source() || v == net.sink() {
            continue;
        }
        if let Some(i) = last[v] {
            closes[i].push(v);
        }
    }
    let mut flow = vec![0i64; m];
    let mut balance = vec![0i64; n];
    rec(net, 0, &closes, &mut flow, &mut balance, visit);
}

fn rec(
    net: &FlowNetwork,
    i: usize,
    closes: &[Vec<usize>],
    flow: &mut Vec<i64>,
    balance: &mut Vec<i64>,
    visit: &mut dyn FnMut(&[i64]),
) {
    if i == flow.len() {
        visit(flow);
        return;
    }
    let e = net.edge(i).clone();
    for x in e.demand..=e.capacity {
        flow[i] = x;
        balance[e.from] -= x;
        balance[e.to] += x;
        if closes[i].iter().all(|&v| balance[v] == 0) {
            rec(net, i + 1, closes, flow, balance, visit);
        }
        balance[e.from] += x;
        balance[e.to] -= x;
    }
}

pub struct FlowSummary {
    pub max_value: i64,
    pub min_cost: i64,
    /// best[e][k]: cheapest max-value flow with k units on edge e.
    pub best: Vec<Vec<Option<i64>>>,
}

pub fn summarize(net: &FlowNetwork) -> Option<FlowSummary> {
    let mut all: Vec<(i64, i64, Vec<i64>)> = Vec::new();
    enumerate_flows(net, &mut |f| {
        all.push((net.value_of(f), net.cost_of(f), f.to_vec()));
    });
    let max_value = all.iter().map(|x| x.0).max()?;
    let mut best: Vec<Vec<Option<i64>>> = net
        .edges()
        .iter()
        .map(|e| vec![None; e.capacity as usize + 1])
        .collect();
    let mut min_cost = i64::MAX;
    for (v, c, f) in &all {
        if *v != max_value {
            continue;
        }
        min_cost = min_cost.min(*c);
        for (e, &x) in f.iter().enumerate() {
            let slot = &mut best[e][x as usize];
            *slot = Some(slot.map_or(*c, |o: i64| o.min(*c)));
        }
    }
    Some(FlowSummary {
        max_value,
        min_cost,
        best,
    })
}

pub fn random_network<R: Rng>(rng: &mut R, with_demands: bool) -> FlowNetwork {
    let n = rng.gen_range(2..=8);
    let m = rng.gen_range(1..=14);
    let mut g = FlowNetwork::new(n, 0, n - 1);
    for _ in 0..m {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n);
        if a == b {
            b = (b + 1) % n;
        }
        let cap = rng.gen_range(0..=2);
        let demand = if with_demands && cap > 0 && rng.gen_bool(0.15) {
            1
        } else {
            0
        };
        let w = rng.gen_range(-5..=5);
        g.try_add_edge(a, b, w, cap, demand).unwrap();
    }
    g
}

/// Compares the kernel against enumeration, including every reroute.
pub fn check_network(net: &FlowNetwork) -> Result<(), String> {
    let summary = summarize(net);
    let solved = MinCostFlow::solve(net.clone());
    let (summary, m) = match (summary, solved) {
        (None, Err(FlowError::Infeasible)) => return Ok(()),
        (None, other) => {
            return Err(format!(
                "oracle infeasible, kernel gave {:?}",
                other.map(|m| m.cost())
            ))
        }
        (Some(_), Err(e)) => return Err(format!("kernel error {e}")),
        (Some(s), Ok(m)) => (s, m),
    };
    if !net.is_feasible(m.edge_flow()) {
        return Err("kernel flow violates bounds or conservation".into());
    }
    if m.value() != summary.max_value || net.value_of(m.edge_flow()) != m.value() {
        return Err(format!(
            "value {} expected {}",
            m.value(),
            summary.max_value
        ));
    }
    if m.cost() != summary.min_cost {
        return Err(format!("cost {} expected {}", m.cost(), summary.min_cost));
    }
    for e in 0..net.edges().len() {
        let f = m.edge_flow()[e];
        for (dir, k) in [(Direction::Increase, f + 1), (Direction::Decrease, f - 1)] {
            let expected = if k < 0 {
                None
            } else {
                summary.best[e].get(k as usize).copied().flatten()
            };
            let got = m.reroute_cost(e, dir).map_err(|x| x.to_string())?;
            if got != expected {
                return Err(format!(
                    "reroute e{e} {dir:?}: got {got:?} expected {expected:?}"
                ));
            }
            if let Some(flow) = m.reroute_unit(e, dir).map_err(|x| x.to_string())? {
                if !net.is_feasible(&flow.edge_flow) || net.cost_of(&flow.edge_flow) != flow.cost {
                    return Err(format!("rerouted flow on e{e} is not consistent"));
                }
            }
        }
    }
    Ok(())
}
