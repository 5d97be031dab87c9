use super::BenchError;
use crate::cost::Cost;
use crate::model::{Value, Wcsp};

/// Default limit on the number of complete assignments enumerated.
pub const ENUMERATION_CAP: f64 = 1e6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    /// Minimum cost and the lexicographically first assignment reaching it.
    Optimal(Cost, Vec<Value>),
    /// Every assignment costs top.
    Infeasible,
}

/// Exhaustive minimisation over all complete assignments. Refuses when
/// the search space exceeds `cap`.
pub fn oracle_solve_capped(w: &Wcsp, cap: f64) -> Result<OracleOutcome, BenchError> {
    let space: f64 = w.vars().iter().map(|v| v.values().len() as f64).product();
    if space > cap {
        return Err(BenchError::TooLarge { space, cap });
    }
    let n = w.num_vars();
    let sizes: Vec<usize> = w.vars().iter().map(|v| v.values().len()).collect();
    if sizes.contains(&0) {
        return Ok(OracleOutcome::Infeasible);
    }
    let mut tuple = vec![0usize; n];
    let mut best: Option<(Cost, Vec<usize>)> = None;
    loop {
        let c = w.evaluate_positions(&tuple);
        if !c.is_top(w.top()) && best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, tuple.clone()));
        }
        // odometer with the last variable fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(match best {
                    Some((c, t)) => OracleOutcome::Optimal(
                        c,
                        t.iter()
                            .enumerate()
                            .map(|(x, &p)| w.var(x).value(p))
                            .collect(),
                    ),
                    None => OracleOutcome::Infeasible,
                });
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < sizes[i] {
                break;
            }
            tuple[i] = 0;
        }
    }
}

pub fn oracle_solve(w: &Wcsp) -> Result<OracleOutcome, BenchError> {
    oracle_solve_capped(w, ENUMERATION_CAP)
}
