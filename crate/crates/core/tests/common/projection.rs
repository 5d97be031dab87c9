//! Checks shared by the projection-safety tests.

use rand::Rng;
use wcspflow::{Cost, FnId, Wcsp};

use super::global_oracle::brute_min;

pub fn check_minima(w: &Wcsp, f: FnId) {
    assert_eq!(w.min_cost(f), brute_min(w, f, None), "min_cost");
    let scope = w.function(f).scope().to_vec();
    for (k, &x) in scope.iter().enumerate() {
        let given = w.min_cost_given_all(f, k);
        for p in w.var(x).live_positions() {
            assert_eq!(
                given[p],
                brute_min(w, f, Some((k, p))),
                "min_cost_given k={k} p={p}"
            );
        }
    }
}

/// Flow sums on the value edges are 0 or 1, the flow decodes to a tuple,
/// and that tuple costs what the flow costs.
pub fn check_decoding(w: &Wcsp, f: FnId) {
    let g = w.function(f).as_global().unwrap();
    let Some(flow) = g.cached_flow() else {
        assert_eq!(brute_min(w, f, None), w.top());
        return;
    };
    let tuple = g.decode_tuple().expect("flow decodes");
    for (k, &x) in g.scope().iter().enumerate() {
        for p in 0..g.domains()[k].len() {
            let sum: i64 = g.edges_for(k, p).iter().map(|&e| flow[e]).sum();
            assert!(sum == 0 || sum == 1, "flow sum {sum}");
            assert_eq!(sum == 1, tuple[k] == p);
        }
        assert!(w.var(x).is_live(tuple[k]));
    }
    let cost = Cost::from_signed(g.cached_cost().unwrap() + g.constant(), w.top());
    assert_eq!(cost, w.function_value(f, &tuple));
    assert_eq!(cost, w.min_cost(f));
}

pub fn random_step<R: Rng>(rng: &mut R, w: &mut Wcsp, f: FnId) {
    let scope = w.function(f).scope().to_vec();
    let k = rng.gen_range(0..scope.len());
    let x = scope[k];
    let live: Vec<usize> = w.var(x).live_positions().collect();
    let p = live[rng.gen_range(0..live.len())];
    let v = w.var(x).value(p);
    match rng.gen_range(0..10) {
        0..=3 => {
            let avail = w.min_cost_given(f, k, p);
            if !avail.is_top(w.top()) && avail.0 > 0 {
                let alpha = Cost(rng.gen_range(1..=avail.0));
                w.project(f, x, v, alpha).unwrap();
            }
        }
        4..=6 => {
            let avail = w.var(x).unary(p);
            if avail.0 > 0 {
                let alpha = Cost(rng.gen_range(1..=avail.0));
                w.extend(f, x, v, alpha).unwrap();
            }
        }
        7 => {
            if live.len() > 1 {
                let _ = w.remove_value(x, p);
            }
        }
        _ => {
            let m = w.min_cost(f);
            if !m.is_top(w.top()) && m.0 > 0 {
                w.project_constant(f, m);
            }
        }
    }
}
