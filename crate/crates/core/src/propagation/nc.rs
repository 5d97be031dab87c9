use std::collections::BTreeSet;

use super::{check_bound, ordered_functions, PropagationStats, Queues};
use crate::cost::{oplus, Cost};
use crate::model::{Contradiction, FnId, VarId, Wcsp};

/// Removes every value whose unary cost plus the lower bound reaches top,
/// pushing the affected variables on all queues and re-projecting their
/// unary costs. Repeats while the lower bound keeps rising.
pub fn prune_val(w: &mut Wcsp, qs: &mut Queues) -> Result<(), Contradiction> {
    let mut stats = PropagationStats::default();
    prune_counted(w, qs, &mut stats)
}

pub(crate) fn prune_counted(
    w: &mut Wcsp,
    qs: &mut Queues,
    st: &mut PropagationStats,
) -> Result<(), Contradiction> {
    loop {
        check_bound(w)?;
        let top = w.top();
        let mut raised = false;
        for x in 0..w.num_vars() {
            let doomed: Vec<usize> = w
                .var(x)
                .live_positions()
                .filter(|&p| oplus(w.w_zero(), w.var(x).unary(p), top).is_top(top))
                .collect();
            if doomed.is_empty() {
                continue;
            }
            for p in doomed {
                w.remove_value(x, p)?;
                st.removals += 1;
            }
            qs.push_all(x);
            if w.unary_project(x) > Cost::ZERO {
                raised = true;
            }
        }
        if !raised {
            return check_bound(w);
        }
    }
}

/// Projects every unary cost minimum into the lower bound, then prunes.
pub fn enforce_nc(w: &mut Wcsp, qs: &mut Queues) -> Result<(), Contradiction> {
    for x in 0..w.num_vars() {
        w.unary_project(x);
    }
    prune_val(w, qs)
}

/// Moves the minimum of every function into the lower bound. Returns
/// whether anything moved.
pub fn enforce_zero_ic(w: &mut Wcsp) -> Result<bool, Contradiction> {
    let mut moved = false;
    for f in 0..w.functions().len() {
        let alpha = w.min_cost(f);
        if alpha > Cost::ZERO {
            w.project_constant(f, alpha);
            moved = true;
        }
        check_bound(w)?;
    }
    Ok(moved)
}

/// Removes the values of scope variable `k` of `f` that have no tuple
/// keeping the total below top. Returns whether a value was removed.
pub fn find_zero_support(w: &mut Wcsp, f: FnId, k: usize) -> Result<bool, Contradiction> {
    let x = w.function(f).scope()[k];
    let top = w.top();
    let given = w.min_cost_given_all(f, k);
    let doomed: Vec<usize> = w
        .var(x)
        .live_positions()
        .filter(|&p| oplus(oplus(w.w_zero(), w.var(x).unary(p), top), given[p], top).is_top(top))
        .collect();
    for &p in &doomed {
        w.remove_value(x, p)?;
    }
    Ok(!doomed.is_empty())
}

/// Enforces strong zero-inverse consistency together with node
/// consistency.
pub fn enforce_strong_zero_ic(w: &mut Wcsp) -> Result<(), Contradiction> {
    let mut qs = Queues::full(w.num_vars());
    strong_zero_ic_from(w, &mut qs, None, &mut PropagationStats::default())
}

/// Same as [`enforce_strong_zero_ic`], popping variables by increasing
/// `var_rank` and visiting each variable's functions by increasing
/// `fn_rank`.
pub fn enforce_strong_zero_ic_ordered(
    w: &mut Wcsp,
    var_rank: &[usize],
    fn_rank: &[usize],
) -> Result<(), Contradiction> {
    let mut qs = Queues::full(w.num_vars());
    strong_zero_ic_from(
        w,
        &mut qs,
        Some((var_rank, fn_rank)),
        &mut PropagationStats::default(),
    )
}

pub(crate) fn strong_zero_ic_from(
    w: &mut Wcsp,
    qs: &mut Queues,
    order: Option<(&[usize], &[usize])>,
    st: &mut PropagationStats,
) -> Result<(), Contradiction> {
    let n = w.num_vars();
    let rank = |x: VarId| order.map_or(x, |(r, _)| r[x]);
    let mut queue: BTreeSet<(usize, VarId)> = qs.q.iter().map(|&x| (rank(x), x)).collect();
    let mut scratch = Queues::new();
    enforce_nc(w, &mut scratch)?;
    if enforce_zero_ic(w)? {
        queue = (0..n).map(|x| (rank(x), x)).collect();
    }
    for &x in &scratch.q {
        queue.insert((rank(x), x));
    }
    while let Some((_, xj)) = queue.pop_first() {
        st.iterations += 1;
        let mut fs = ordered_functions(w, xj);
        if let Some((_, fr)) = order {
            fs.sort_by_key(|&f| fr[f]);
        }
        for f in fs {
            let scope = w.function(f).scope().to_vec();
            let mut restart = false;
            for (k, &xi) in scope.iter().enumerate() {
                if xi == xj && scope.len() > 1 {
                    continue;
                }
                let before = w.w_zero();
                if find_zero_support(w, f, k)? {
                    st.removals += 1;
                    queue.insert((rank(xi), xi));
                    w.unary_project(xi);
                    let mut touched = Queues::new();
                    prune_counted(w, &mut touched, st)?;
                    for &y in &touched.q {
                        queue.insert((rank(y), y));
                    }
                }
                if w.w_zero() > before {
                    restart = true;
                }
            }
            if enforce_zero_ic(w)? || restart {
                let mut touched = Queues::new();
                prune_counted(w, &mut touched, st)?;
                queue = (0..n).map(|x| (rank(x), x)).collect();
            }
        }
    }
    check_bound(w)
}
