//! Random small mixed networks of tables and global functions.

use rand::seq::SliceRandom;
use rand::Rng;
use wcspflow::global::{
    build_soft_alldifferent, build_soft_gcc, build_soft_regular, build_soft_same, OccurrenceBounds,
    ViolationMeasure,
};
use wcspflow::{Cost, TableCostFunction, Value, Wcsp};

use super::global_oracle::random_automaton;

pub const ALPHABET: [Value; 4] = [0, 1, 2, 3];

/// Up to five variables over up to four values, a few tables and up to
/// two global functions. With `binary_only`, only binary tables whose
/// scopes share at most one variable.
pub fn random_mixed<R: Rng>(rng: &mut R, binary_only: bool) -> Wcsp {
    let n = rng.gen_range(2..=5);
    let top = *[5u64, 8, 12, 1000].choose(rng).unwrap();
    let mut w = Wcsp::new("mixed", Cost(top));
    for i in 0..n {
        let d = rng.gen_range(if binary_only { 2 } else { 1 }..=4);
        let mut vals = ALPHABET.to_vec();
        vals.shuffle(rng);
        vals.truncate(d);
        vals.sort_unstable();
        let x = w.add_variable(format!("x{i}"), vals).unwrap();
        let costs = (0..d).map(|_| Cost(rng.gen_range(0..4))).collect();
        w.set_unary(x, costs).unwrap();
    }
    let mut used_pairs = Vec::new();
    let tables = rng.gen_range(1..=if binary_only { 5 } else { 3 });
    for _ in 0..tables {
        let arity = if binary_only {
            2
        } else {
            rng.gen_range(2..=3.min(n))
        };
        let mut scope: Vec<usize> = (0..n).collect();
        scope.shuffle(rng);
        scope.truncate(arity);
        if binary_only {
            let mut key = scope.clone();
            key.sort_unstable();
            if used_pairs.contains(&key) {
                continue;
            }
            used_pairs.push(key);
        }
        let sizes: Vec<usize> = scope.iter().map(|&x| w.var(x).values().len()).collect();
        let mut t = TableCostFunction::new(scope, sizes, Cost::ZERO);
        let entries: Vec<Vec<usize>> = t.entries().map(|(pos, _)| pos).collect();
        for pos in entries {
            let c = if rng.gen_bool(0.1) {
                Cost(top)
            } else {
                Cost(rng.gen_range(0..5))
            };
            t.set(&pos, c);
        }
        w.add_table(t).unwrap();
    }
    if binary_only {
        return w;
    }
    let globals = rng.gen_range(0..=2);
    for _ in 0..globals {
        let size = rng.gen_range(2..=n.min(4));
        let mut scope: Vec<usize> = (0..n).collect();
        scope.shuffle(rng);
        scope.truncate(size);
        let doms = w.domains_of(&scope);
        let built = match rng.gen_range(0..7) {
            0 => build_soft_alldifferent(scope, doms, ViolationMeasure::Var),
            1 => build_soft_alldifferent(scope, doms, ViolationMeasure::Dec),
            2 | 3 => {
                let mut bounds = OccurrenceBounds::new();
                for v in ALPHABET {
                    let lb = rng.gen_range(0..=1);
                    bounds.insert(v, lb, lb + rng.gen_range(0..=2));
                }
                let m = if rng.gen_bool(0.5) {
                    ViolationMeasure::Val
                } else {
                    ViolationMeasure::Var
                };
                build_soft_gcc(scope, doms, bounds, m)
            }
            4 if size % 2 == 0 => {
                let h = size / 2;
                build_soft_same(
                    scope[..h].to_vec(),
                    scope[h..].to_vec(),
                    doms[..h].to_vec(),
                    doms[h..].to_vec(),
                )
            }
            _ => {
                let m = if rng.gen_bool(0.5) {
                    ViolationMeasure::Var
                } else {
                    ViolationMeasure::Edit
                };
                let states = rng.gen_range(1..=3);
                build_soft_regular(scope, doms, random_automaton(rng, states, &ALPHABET), m)
            }
        };
        if let Ok(g) = built {
            w.add_global(g).unwrap();
        }
    }
    w
}

/// Every complete tuple of positions over the full (original) domains.
pub fn all_tuples(w: &Wcsp) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for x in 0..w.num_vars() {
        let d = w.var(x).values().len();
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |p| {
                    let mut t2 = t.clone();
                    t2.push(p);
                    t2
                })
            })
            .collect();
    }
    out
}

/// Optimum over all complete tuples.
pub fn brute_optimum(w: &Wcsp) -> Cost {
    all_tuples(w)
        .iter()
        .map(|t| w.evaluate_positions(t))
        .min()
        .unwrap_or(w.top())
}

/// Whether `after` assigns every complete tuple the cost `before` does,
/// tuples through removed values having cost top in `before`.
pub fn equivalent(before: &Wcsp, after: &Wcsp) -> bool {
    let top = before.top();
    all_tuples(before).iter().all(|t| {
        let old = before.evaluate_positions(t);
        let live = t.iter().enumerate().all(|(x, &p)| after.var(x).is_live(p));
        if live {
            old.clamp_top(top) == after.evaluate_positions(t).clamp_top(top)
        } else {
            old.is_top(top)
        }
    })
}
