use std::collections::BTreeSet;

use crate::model::{FnId, VarId, Wcsp};

/// For one variable, which neighbours each incident function may draw
/// unary costs from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostProvidingPartition {
    pub var: VarId,
    /// One block per incident function, in claiming order.
    pub blocks: Vec<(FnId, Vec<VarId>)>,
}

impl CostProvidingPartition {
    pub fn block(&self, f: FnId) -> Option<&[VarId]> {
        self.blocks
            .iter()
            .find(|(g, _)| *g == f)
            .map(|(_, b)| b.as_slice())
    }
}

/// Greedy partition: larger scopes claim unclaimed neighbours first.
pub fn find_cost_providing_partition(w: &Wcsp, x: VarId) -> CostProvidingPartition {
    let mut left: BTreeSet<VarId> = w.neighbors(x);
    let mut fs = w.functions_of(x).to_vec();
    fs.sort_by_key(|&f| (std::cmp::Reverse(w.function(f).arity()), f));
    let blocks = fs
        .into_iter()
        .map(|f| {
            let scope = w.function(f).scope();
            let claimed: Vec<VarId> = scope.iter().copied().filter(|y| left.contains(y)).collect();
            for y in scope {
                left.remove(y);
            }
            (f, claimed)
        })
        .collect();
    CostProvidingPartition { var: x, blocks }
}
