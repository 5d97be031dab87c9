use std::collections::{BTreeMap, BTreeSet};

use super::{
    check_scope, Automaton, FlowBasedCostFunction, GlobalError, GlobalKind, OccurrenceBounds, Plan,
    ViolationMeasure,
};
use crate::flow::FlowNetwork;
use crate::model::{Value, VarId};

/// Layered network over automaton states. Edges between layer `i` and
/// `i + 1` read scope variable `i`; the `var` measure adds unit-weight
/// substitutions, `edit` further adds deletions and in-layer insertions.
fn layered_plan(domains: &[Vec<Value>], automaton: &Automaton, measure: ViolationMeasure) -> Plan {
    let n = domains.len();
    let q = automaton.state_count();
    let (s, t) = (0, 1);
    let node = |i: usize, state: usize| 2 + i * q + state;
    let mut g = FlowNetwork::new(2 + (n + 1) * q, s, t);
    g.add_edge(s, node(0, automaton.initial()), 0, 1);

    // symbols leading from one state to another
    let mut labels: BTreeMap<(usize, usize), BTreeSet<Value>> = BTreeMap::new();
    for (a, c, b) in automaton.transitions() {
        labels.entry((a, b)).or_default().insert(c);
    }
    let edit = measure == ViolationMeasure::Edit;
    let mut edge_map: Vec<Vec<Vec<usize>>> =
        domains.iter().map(|d| vec![Vec::new(); d.len()]).collect();
    let insertions = |g: &mut FlowNetwork, i: usize| {
        for &(a, b) in labels.keys() {
            if a != b {
                g.add_edge(node(i, a), node(i, b), 1, 1);
            }
        }
    };
    for (i, dom) in domains.iter().enumerate() {
        if edit {
            insertions(&mut g, i);
        }
        for (p, &u) in dom.iter().enumerate() {
            for (&(a, b), syms) in &labels {
                let w = if syms.contains(&u) { 0 } else { 1 };
                edge_map[i][p].push(g.add_edge(node(i, a), node(i + 1, b), w, 1));
            }
            if edit {
                for state in 0..q {
                    if !labels.contains_key(&(state, state)) {
                        edge_map[i][p].push(g.add_edge(node(i, state), node(i + 1, state), 1, 1));
                    }
                }
            }
        }
    }
    if edit {
        insertions(&mut g, n);
    }
    for f in automaton.finals() {
        g.add_edge(node(n, f), t, 0, 1);
    }
    Plan {
        network: g,
        edge_map,
        offset: 0,
        required: 1,
    }
}

fn check_alphabet(domains: &[Vec<Value>], alphabet: &[Value]) -> Result<(), GlobalError> {
    for v in domains.iter().flatten() {
        if !alphabet.contains(v) {
            return Err(GlobalError::OutsideAlphabet(*v));
        }
    }
    Ok(())
}

/// Soft regular under the `var` (Hamming) or `edit` measure.
pub fn build_soft_regular(
    scope: Vec<VarId>,
    domains: Vec<Vec<Value>>,
    automaton: Automaton,
    measure: ViolationMeasure,
) -> Result<FlowBasedCostFunction, GlobalError> {
    check_scope(&scope, &domains)?;
    if !matches!(measure, ViolationMeasure::Var | ViolationMeasure::Edit) {
        return Err(GlobalError::UnsupportedMeasure(measure));
    }
    check_alphabet(&domains, automaton.alphabet())?;
    let plan = layered_plan(&domains, &automaton, measure);
    FlowBasedCostFunction::from_plan(
        GlobalKind::Regular { measure, automaton },
        scope,
        domains,
        plan,
    )
}

/// Automaton accepting words whose maximal runs of each value `v` have
/// length within the bounds given for `v`.
///
/// State 0 is the start; the others are (value, run length) pairs.
pub fn stretch_automaton(bounds: &OccurrenceBounds) -> Result<Automaton, GlobalError> {
    let entries: Vec<(Value, u64, u64)> = bounds.iter().collect();
    let mut id = BTreeMap::new();
    let mut next = 1usize;
    for &(v, lb, ub) in &entries {
        if lb > ub || ub == 0 {
            return Err(GlobalError::BadBounds(v));
        }
        for len in 1..=ub {
            id.insert((v, len), next);
            next += 1;
        }
    }
    let mut trans = Vec::new();
    let mut finals = Vec::new();
    for &(v, lb, ub) in &entries {
        trans.push((0, v, id[&(v, 1)]));
        for len in 1..=ub {
            let here = id[&(v, len)];
            if len < ub {
                trans.push((here, v, id[&(v, len + 1)]));
            }
            if len >= lb {
                finals.push(here);
                for &(w, _, _) in &entries {
                    if w != v {
                        trans.push((here, w, id[&(w, 1)]));
                    }
                }
            }
        }
    }
    let alphabet = entries.iter().map(|e| e.0).collect();
    Automaton::new(next, alphabet, 0, finals, trans)
}

/// Soft stretch, delegated to a soft regular over its run automaton.
pub fn build_soft_stretch(
    scope: Vec<VarId>,
    domains: Vec<Vec<Value>>,
    bounds: OccurrenceBounds,
    measure: ViolationMeasure,
) -> Result<FlowBasedCostFunction, GlobalError> {
    check_scope(&scope, &domains)?;
    bounds.check()?;
    if !matches!(measure, ViolationMeasure::Var | ViolationMeasure::Edit) {
        return Err(GlobalError::UnsupportedMeasure(measure));
    }
    let automaton = stretch_automaton(&bounds)?;
    check_alphabet(&domains, automaton.alphabet())?;
    let plan = layered_plan(&domains, &automaton, measure);
    let kind = GlobalKind::Stretch {
        measure,
        bounds,
        automaton,
    };
    FlowBasedCostFunction::from_plan(kind, scope, domains, plan)
}
