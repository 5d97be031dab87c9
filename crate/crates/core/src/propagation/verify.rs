//! Definitional consistency checks by enumeration of live tuples. They
//! never look at flows or queues, only at current cost values.

use super::partition::find_cost_providing_partition;
use super::Consistency;
use crate::cost::{oplus, Cost};
use crate::model::{FnId, VarId, Wcsp};

/// Minimum over live tuples of `f` with scope position `k` fixed to `p`,
/// adding the unary costs of the variables in `extra`.
pub fn brute_min_given(w: &Wcsp, f: FnId, k: usize, p: usize, extra: &[VarId]) -> Cost {
    let top = w.top();
    let scope = w.function(f).scope().to_vec();
    let mut tuple = vec![0usize; scope.len()];
    let mut best = top;
    enumerate(w, &scope, Some((k, p)), 0, &mut tuple, &mut |t| {
        let mut c = w.function_value(f, t);
        for (m, &y) in scope.iter().enumerate() {
            if extra.contains(&y) {
                c = oplus(c, w.var(y).unary(t[m]), top);
            }
        }
        if c < best {
            best = c;
        }
    });
    best
}

fn enumerate(
    w: &Wcsp,
    scope: &[VarId],
    fixed: Option<(usize, usize)>,
    i: usize,
    tuple: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if i == scope.len() {
        visit(tuple);
        return;
    }
    if let Some((k, p)) = fixed {
        if k == i {
            tuple[i] = p;
            enumerate(w, scope, fixed, i + 1, tuple, visit);
            return;
        }
    }
    let live: Vec<usize> = w.var(scope[i]).live_positions().collect();
    for p in live {
        tuple[i] = p;
        enumerate(w, scope, fixed, i + 1, tuple, visit);
    }
}

fn brute_min(w: &Wcsp, f: FnId) -> Cost {
    let scope = w.function(f).scope().to_vec();
    let mut tuple = vec![0usize; scope.len()];
    let mut best = w.top();
    enumerate(w, &scope, None, 0, &mut tuple, &mut |t| {
        best = best.min(w.function_value(f, t));
    });
    best
}

/// Every value is below top with the lower bound and each domain holds a
/// zero-cost value.
pub fn is_node_consistent(w: &Wcsp) -> bool {
    let top = w.top();
    (0..w.num_vars()).all(|x| {
        let v = w.var(x);
        v.live_positions()
            .all(|p| !oplus(w.w_zero(), v.unary(p), top).is_top(top))
            && v.live_positions().any(|p| v.unary(p) == Cost::ZERO)
    })
}

/// Every function has a zero-cost live tuple.
pub fn is_zero_ic(w: &Wcsp) -> bool {
    (0..w.functions().len()).all(|f| brute_min(w, f) == Cost::ZERO)
}

/// Zero-inverse consistent, and every value of every scope variable has
/// a tuple keeping the total below top.
pub fn is_strong_zero_ic(w: &Wcsp) -> bool {
    let top = w.top();
    is_zero_ic(w)
        && each_value(w, |f, k, x, p| {
            let c = oplus(w.w_zero(), w.var(x).unary(p), top);
            !oplus(c, brute_min_given(w, f, k, p, &[]), top).is_top(top)
        })
}

/// Node consistent and every value has a zero-cost tuple in every
/// function over it.
pub fn is_gac(w: &Wcsp) -> bool {
    is_node_consistent(w)
        && each_value(w, |f, k, _, p| {
            brute_min_given(w, f, k, p, &[]) == Cost::ZERO
        })
}

/// Generalized arc consistent and every value has a full support with
/// respect to the later variables of each function.
pub fn is_fdgac(w: &Wcsp) -> bool {
    is_gac(w)
        && each_value(w, |f, k, x, p| {
            let later: Vec<VarId> = w
                .function(f)
                .scope()
                .iter()
                .copied()
                .filter(|&y| y > x)
                .collect();
            brute_min_given(w, f, k, p, &later) == Cost::ZERO
        })
}

/// Variables holding a zero-cost value fully supported in every incident
/// function with respect to that function's block of the greedy
/// cost-providing partition.
pub fn is_weak_egac(w: &Wcsp) -> bool {
    (0..w.num_vars()).all(|x| {
        let part = find_cost_providing_partition(w, x);
        w.var(x).live_positions().any(|p| {
            w.var(x).unary(p) == Cost::ZERO
                && part.blocks.iter().all(|(f, block)| {
                    let k = w.function(*f).position_in_scope(x).expect("incident");
                    brute_min_given(w, *f, k, p, block) == Cost::ZERO
                })
        })
    })
}

pub fn is_weak_edgac(w: &Wcsp) -> bool {
    is_fdgac(w) && is_weak_egac(w)
}

/// Existential directional arc consistency for networks of binary
/// functions: full directional arc consistency, and each variable has a
/// zero-cost value with a full support in every function towards the
/// other variable.
pub fn is_edac(w: &Wcsp) -> bool {
    is_fdgac(w)
        && (0..w.num_vars()).all(|x| {
            w.var(x).live_positions().any(|p| {
                w.var(x).unary(p) == Cost::ZERO
                    && w.functions_of(x).iter().all(|&f| {
                        let scope = w.function(f).scope();
                        let k = w.function(f).position_in_scope(x).expect("incident");
                        let others: Vec<VarId> =
                            scope.iter().copied().filter(|&y| y != x).collect();
                        brute_min_given(w, f, k, p, &others) == Cost::ZERO
                    })
            })
        })
}

fn each_value(w: &Wcsp, mut check: impl FnMut(FnId, usize, VarId, usize) -> bool) -> bool {
    for f in 0..w.functions().len() {
        let scope = w.function(f).scope().to_vec();
        for (k, &x) in scope.iter().enumerate() {
            for p in w.var(x).live_positions() {
                if !check(f, k, x, p) {
                    return false;
                }
            }
        }
    }
    true
}

/// Checks the definition of `level` directly.
pub fn verify_consistency(w: &Wcsp, level: Consistency) -> bool {
    match level {
        Consistency::None => is_node_consistent(w),
        Consistency::StrongZeroIc => is_strong_zero_ic(w),
        Consistency::Gac => is_gac(w),
        Consistency::Fdgac => is_fdgac(w),
        Consistency::WeakEdgac => is_weak_edgac(w),
    }
}
