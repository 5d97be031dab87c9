use std::collections::BTreeSet;

use super::gac::{dgac_pass, find_full_support, gac_pass, min_given_with};
use super::nc::{enforce_nc, prune_counted};
use super::partition::{find_cost_providing_partition, CostProvidingPartition};
use super::{PropagationStats, Queues};
use crate::cost::{oplus, Cost};
use crate::model::{Contradiction, VarId, Wcsp};

/// Scope positions of the variables in `block`.
fn positions(w: &Wcsp, f: usize, block: &[VarId]) -> Vec<usize> {
    block
        .iter()
        .map(|&y| {
            w.function(f)
                .position_in_scope(y)
                .expect("block inside scope")
        })
        .collect()
}

/// Cost every value of `x` would carry if each incident function drew on
/// the unary costs of its block.
pub(crate) fn existential_costs(w: &Wcsp, partition: &CostProvidingPartition) -> Vec<Cost> {
    let x = partition.var;
    let top = w.top();
    let mut total: Vec<Cost> = (0..w.var(x).values().len())
        .map(|p| {
            if w.var(x).is_live(p) {
                w.var(x).unary(p)
            } else {
                top
            }
        })
        .collect();
    for (f, block) in &partition.blocks {
        let k = w
            .function(*f)
            .position_in_scope(x)
            .expect("incident function");
        let inner = min_given_with(w, *f, k, &positions(w, *f, block));
        for (t, c) in total.iter_mut().zip(inner) {
            *t = oplus(*t, c, top);
        }
    }
    total
}

/// Gives `x` a weakly fully supported value if it lacks one, raising the
/// lower bound. Returns whether costs moved.
pub fn find_existential_support(
    w: &mut Wcsp,
    partition: &CostProvidingPartition,
    qs: &mut Queues,
) -> Result<bool, Contradiction> {
    let x = partition.var;
    let alpha = existential_costs(w, partition)
        .into_iter()
        .enumerate()
        .filter(|&(p, _)| w.var(x).is_live(p))
        .map(|(_, c)| c)
        .min()
        .unwrap_or(Cost::ZERO);
    if alpha == Cost::ZERO {
        return Ok(false);
    }
    for (f, block) in &partition.blocks {
        let k = w
            .function(*f)
            .position_in_scope(x)
            .expect("incident function");
        let out = find_full_support(w, *f, k, &positions(w, *f, block))?;
        for y in out.raised {
            qs.r.insert(y);
            qs.s.insert(y);
        }
    }
    Ok(true)
}

fn weak_egac_pass(
    w: &mut Wcsp,
    pending: &mut BTreeSet<VarId>,
    partitions: &[CostProvidingPartition],
    qs: &mut Queues,
    st: &mut PropagationStats,
) -> Result<(), Contradiction> {
    while let Some(x) = pending.pop_first() {
        prune_counted(w, qs, st)?;
        st.existential_supports += 1;
        if find_existential_support(w, &partitions[x], qs)? {
            qs.r.insert(x);
            pending.insert(x);
            pending.extend(w.neighbors(x));
        }
    }
    Ok(())
}

pub(crate) fn weak_edgac_from(
    w: &mut Wcsp,
    qs: &mut Queues,
    partitions: &[CostProvidingPartition],
    st: &mut PropagationStats,
) -> Result<(), Contradiction> {
    enforce_nc(w, qs)?;
    while !qs.is_empty() {
        st.iterations += 1;
        let mut pending: BTreeSet<VarId> = qs.s.clone();
        for &x in &qs.s {
            pending.extend(w.neighbors(x));
        }
        weak_egac_pass(w, &mut pending, partitions, qs, st)?;
        qs.s.clear();
        dgac_pass(w, qs, st)?;
        gac_pass(w, qs, st)?;
        prune_counted(w, qs, st)?;
    }
    Ok(())
}

/// Enforces weak existential directional generalized arc consistency
/// with the greedy cost-providing partitions.
pub fn enforce_weak_edgac(w: &mut Wcsp) -> Result<PropagationStats, Contradiction> {
    let partitions: Vec<CostProvidingPartition> = (0..w.num_vars())
        .map(|x| find_cost_providing_partition(w, x))
        .collect();
    let mut st = PropagationStats::default();
    weak_edgac_from(w, &mut Queues::full(w.num_vars()), &partitions, &mut st)?;
    Ok(st)
}
