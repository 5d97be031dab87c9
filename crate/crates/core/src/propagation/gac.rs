use super::nc::{enforce_nc, prune_counted};
use super::{check_bound, ordered_functions, PropagationStats, Queues};
use crate::cost::{oplus, Cost};
use crate::model::{Contradiction, CostFunction, FnId, VarId, Wcsp};

/// Projects onto each value of scope variable `k` of `f` the minimum cost
/// of `f` over tuples using that value, then re-projects the unary costs.
/// Returns whether a unary cost rose.
pub fn find_support(w: &mut Wcsp, f: FnId, k: usize) -> Result<bool, Contradiction> {
    let x = w.function(f).scope()[k];
    let given = w.min_cost_given_all(f, k);
    let amounts: Vec<(usize, Cost)> = w
        .var(x)
        .live_positions()
        .filter(|&p| given[p] > Cost::ZERO)
        .map(|p| (p, given[p]))
        .collect();
    w.project_many(f, k, &amounts);
    w.unary_project(x);
    check_bound(w)?;
    Ok(!amounts.is_empty())
}

/// What a call to [`find_full_support`] changed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FullSupport {
    /// Some unary cost of the supported variable rose.
    pub increased: bool,
    /// Some unary cost was extended into the function.
    pub extended: bool,
    /// Variables of `U` left with a unary cost above its earlier value.
    pub raised: Vec<VarId>,
}

/// Extends the unary costs of the scope positions `u` into `f`, then
/// restores simple supports for position `k` and for each of `u`.
pub fn find_full_support(
    w: &mut Wcsp,
    f: FnId,
    k: usize,
    u: &[usize],
) -> Result<FullSupport, Contradiction> {
    let scope = w.function(f).scope().to_vec();
    let mut out = FullSupport::default();
    let mut before = Vec::with_capacity(u.len());
    for &m in u {
        let y = scope[m];
        let amounts: Vec<(usize, Cost)> = w
            .var(y)
            .live_positions()
            .map(|p| (p, w.var(y).unary(p)))
            .filter(|&(_, c)| c > Cost::ZERO)
            .collect();
        before.push(w.var(y).unary_costs().to_vec());
        if !amounts.is_empty() {
            out.extended = true;
            w.extend_many(f, m, &amounts);
        }
    }
    out.increased = find_support(w, f, k)?;
    for (i, &m) in u.iter().enumerate() {
        find_support(w, f, m)?;
        let y = scope[m];
        if w.var(y)
            .live_positions()
            .any(|p| w.var(y).unary(p) > before[i][p])
        {
            out.raised.push(y);
        }
    }
    Ok(out)
}

/// For every value of scope position `k`, the minimum over tuples using
/// it of `f` plus the unary costs of the scope positions in `extra`.
pub(crate) fn min_given_with(w: &Wcsp, f: FnId, k: usize, extra: &[usize]) -> Vec<Cost> {
    let top = w.top();
    let scope = w.function(f).scope();
    let x = scope[k];
    match w.function(f) {
        CostFunction::Table(t) => {
            let mut best = vec![top; w.var(x).values().len()];
            t.for_each_live(w.vars(), None, &mut |tuple, c| {
                let mut total = c.clamp_top(top);
                for &m in extra {
                    total = oplus(total, w.var(scope[m]).unary(tuple[m]), top);
                }
                let p = tuple[k];
                if total < best[p] {
                    best[p] = total;
                }
            });
            best
        }
        CostFunction::Global(g) => {
            let mut g = (**g).clone();
            for &m in extra {
                let y = scope[m];
                let amounts: Vec<(usize, i64)> = w
                    .var(y)
                    .live_positions()
                    .map(|p| (p, w.var(y).unary(p).clamp_top(top).0 as i64))
                    .collect();
                g.shift_unary(m, &amounts);
            }
            let mut out = g.min_cost_given_all(k, top);
            for (p, c) in out.iter_mut().enumerate() {
                if !w.var(x).is_live(p) {
                    *c = top;
                }
            }
            out
        }
    }
}

/// One pass of the simple-support queue: pops the smallest variable of
/// `Q` and revisits every other variable of its functions.
pub(crate) fn gac_pass(
    w: &mut Wcsp,
    qs: &mut Queues,
    st: &mut PropagationStats,
) -> Result<(), Contradiction> {
    while let Some(xj) = qs.q.pop_first() {
        for f in ordered_functions(w, xj) {
            let scope = w.function(f).scope().to_vec();
            for (k, &xi) in scope.iter().enumerate() {
                if xi == xj && scope.len() > 1 {
                    continue;
                }
                st.supports += 1;
                if find_support(w, f, k)? {
                    qs.r.insert(xi);
                    qs.s.insert(xi);
                }
            }
        }
        prune_counted(w, qs, st)?;
    }
    Ok(())
}

/// Live and not yet doomed by node consistency.
pub(crate) fn viable(w: &Wcsp, x: VarId, p: usize) -> bool {
    w.var(x).is_live(p) && !oplus(w.w_zero(), w.var(x).unary(p), w.top()).is_top(w.top())
}

/// Scope positions of `f` ordered by decreasing variable index.
fn descending(scope: &[VarId]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scope.len()).collect();
    order.sort_by_key(|&k| std::cmp::Reverse(scope[k]));
    order
}

/// Restores full supports for every variable of `f` with respect to the
/// later variables of its scope. Positions are visited from the last
/// variable down; passes repeat until one finds every support in place.
fn sweep(
    w: &mut Wcsp,
    f: FnId,
    qs: &mut Queues,
    st: &mut PropagationStats,
) -> Result<(), Contradiction> {
    let scope = w.function(f).scope().to_vec();
    let order = descending(&scope);
    loop {
        prune_counted(w, qs, st)?;
        let mut moved = false;
        for &k in &order {
            let x = scope[k];
            let later: Vec<usize> = (0..scope.len()).filter(|&m| scope[m] > x).collect();
            let supported = min_given_with(w, f, k, &later)
                .into_iter()
                .enumerate()
                .all(|(p, c)| !viable(w, x, p) || c == Cost::ZERO);
            if supported {
                continue;
            }
            st.full_supports += 1;
            moved = true;
            let out = find_full_support(w, f, k, &later)?;
            qs.r.insert(x);
            for y in out.raised {
                qs.r.insert(y);
            }
        }
        if !moved {
            return Ok(());
        }
        qs.s.extend(scope.iter().copied());
    }
}

/// Pops the largest variable of `R` and sweeps each of its functions.
pub(crate) fn dgac_pass(
    w: &mut Wcsp,
    qs: &mut Queues,
    st: &mut PropagationStats,
) -> Result<(), Contradiction> {
    while let Some(xu) = qs.r.pop_last() {
        for f in ordered_functions(w, xu) {
            sweep(w, f, qs, st)?;
        }
    }
    Ok(())
}

pub(crate) fn gac_from(
    w: &mut Wcsp,
    qs: &mut Queues,
    st: &mut PropagationStats,
) -> Result<(), Contradiction> {
    enforce_nc(w, qs)?;
    while !qs.q.is_empty() {
        st.iterations += 1;
        gac_pass(w, qs, st)?;
    }
    Ok(())
}

pub(crate) fn fdgac_from(
    w: &mut Wcsp,
    qs: &mut Queues,
    st: &mut PropagationStats,
) -> Result<(), Contradiction> {
    enforce_nc(w, qs)?;
    while !qs.q.is_empty() || !qs.r.is_empty() {
        st.iterations += 1;
        gac_pass(w, qs, st)?;
        dgac_pass(w, qs, st)?;
        prune_counted(w, qs, st)?;
    }
    Ok(())
}

/// Enforces generalized arc consistency with node consistency.
pub fn enforce_gac(w: &mut Wcsp) -> Result<PropagationStats, Contradiction> {
    let mut st = PropagationStats::default();
    gac_from(w, &mut Queues::full(w.num_vars()), &mut st)?;
    Ok(st)
}

/// Enforces full directional generalized arc consistency.
pub fn enforce_fdgac(w: &mut Wcsp) -> Result<PropagationStats, Contradiction> {
    let mut st = PropagationStats::default();
    fdgac_from(w, &mut Queues::full(w.num_vars()), &mut st)?;
    Ok(st)
}
