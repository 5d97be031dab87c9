//! Brute-force semantics of the soft global functions and random
//! instances over them.

use rand::seq::SliceRandom;
use rand::Rng;
use wcspflow::global::{
    build_soft_alldifferent, build_soft_gcc, build_soft_regular, build_soft_same, Automaton,
    GlobalError, GlobalKind, OccurrenceBounds, ViolationMeasure,
};
use wcspflow::{Cost, FnId, Value, Wcsp};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    AllDiffVar,
    AllDiffDec,
    GccVar,
    GccVal,
    SameVar,
    RegularVar,
    RegularEdit,
}

pub const VARIANTS: [Variant; 7] = [
    Variant::AllDiffVar,
    Variant::AllDiffDec,
    Variant::GccVar,
    Variant::GccVal,
    Variant::SameVar,
    Variant::RegularVar,
    Variant::RegularEdit,
];

/// Every word of the given length over `alphabet`.
pub fn words(alphabet: &[Value], len: usize) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&c| {
                    let mut w2 = w.clone();
                    w2.push(c);
                    w2
                })
            })
            .collect();
    }
    out
}

pub fn hamming(a: &[Value], b: &[Value]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

pub fn levenshtein(a: &[Value], b: &[Value]) -> u64 {
    let mut prev: Vec<u64> = (0..=b.len() as u64).collect();
    for i in 1..=a.len() {
        let mut cur = vec![i as u64; b.len() + 1];
        for j in 1..=b.len() {
            let sub = prev[j - 1] + u64::from(a[i - 1] != b[j - 1]);
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn universe(values: &[Value], bounds: &OccurrenceBounds) -> Vec<Value> {
    let mut u: Vec<Value> = values.iter().copied().chain(bounds.values()).collect();
    u.sort_unstable();
    u.dedup();
    u
}

fn count(values: &[Value], v: Value) -> u64 {
    values.iter().filter(|&&x| x == v).count() as u64
}

/// Violation by definition, found by exhaustive search where the
/// definition is a minimisation.
pub fn brute_violation(kind: &GlobalKind, values: &[Value]) -> Option<u64> {
    let n = values.len();
    match kind {
        GlobalKind::AllDifferent {
            measure: ViolationMeasure::Dec,
        } => {
            let mut pairs = 0;
            for i in 0..n {
                for j in i + 1..n {
                    pairs += u64::from(values[i] == values[j]);
                }
            }
            Some(pairs)
        }
        GlobalKind::AllDifferent { .. } => {
            // change repeated occurrences to fresh values
            let fresh = (0..n).filter(|&i| values[..i].contains(&values[i])).count();
            Some(fresh as u64)
        }
        GlobalKind::Gcc { measure, bounds } => {
            let u = universe(values, bounds);
            let within = |w: &[Value]| {
                u.iter().all(|&v| {
                    let (lb, ub) = bounds.get(v).unwrap_or((0, n as u64));
                    let c = count(w, v);
                    lb <= c && c <= ub
                })
            };
            match measure {
                ViolationMeasure::Val => Some(
                    u.iter()
                        .map(|&v| {
                            let (lb, ub) = bounds.get(v).unwrap_or((0, n as u64));
                            let c = count(values, v);
                            lb.saturating_sub(c) + c.saturating_sub(ub)
                        })
                        .sum(),
                ),
                _ => words(&u, n)
                    .iter()
                    .filter(|w| within(w))
                    .map(|w| hamming(values, w))
                    .min(),
            }
        }
        GlobalKind::Same { left } => {
            let (a, b) = values.split_at(*left);
            permutations(b.len())
                .iter()
                .map(|p| (0..a.len()).filter(|&i| a[i] != b[p[i]]).count() as u64)
                .min()
        }
        GlobalKind::Regular { measure, automaton }
        | GlobalKind::Stretch {
            measure, automaton, ..
        } => {
            if *measure == ViolationMeasure::Edit {
                let longest = n + automaton.state_count();
                (0..=longest)
                    .flat_map(|len| words(automaton.alphabet(), len))
                    .filter(|w| automaton.accepts(w))
                    .map(|w| levenshtein(values, &w))
                    .min()
            } else {
                words(automaton.alphabet(), n)
                    .iter()
                    .filter(|w| automaton.accepts(w))
                    .map(|w| hamming(values, w))
                    .min()
            }
        }
    }
}

pub fn random_automaton<R: Rng>(rng: &mut R, states: usize, alphabet: &[Value]) -> Automaton {
    loop {
        let mut trans = Vec::new();
        for q in 0..states {
            for &c in alphabet {
                if rng.gen_bool(0.7) {
                    trans.push((q, c, rng.gen_range(0..states)));
                }
            }
        }
        let finals: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.4)).collect();
        if finals.is_empty() {
            continue;
        }
        return Automaton::new(states, alphabet.to_vec(), 0, finals, trans).unwrap();
    }
}

fn random_domain<R: Rng>(rng: &mut R, universe: &[Value]) -> Vec<Value> {
    let size = rng.gen_range(1..=universe.len());
    let mut d: Vec<Value> = universe.to_vec();
    d.shuffle(rng);
    d.truncate(size);
    d
}

/// A network of a few variables with random unary costs and one global
/// function of the given variant. Returns the network and function id.
pub fn random_global_instance<R: Rng>(rng: &mut R, variant: Variant) -> (Wcsp, FnId) {
    loop {
        let universe: Vec<Value> = vec![0, 1, 2];
        let n = match variant {
            Variant::SameVar => 2 * rng.gen_range(1..=2),
            _ => rng.gen_range(2..=4),
        };
        let mut w = Wcsp::new("rand", Cost(1000));
        for i in 0..n {
            let d = random_domain(rng, &universe);
            let x = w.add_variable(format!("x{i}"), d.clone()).unwrap();
            let costs = d.iter().map(|_| Cost(rng.gen_range(0..4))).collect();
            w.set_unary(x, costs).unwrap();
        }
        let scope: Vec<usize> = (0..n).collect();
        let doms = w.domains_of(&scope);
        let mut bounds = OccurrenceBounds::new();
        for &v in &universe {
            let lb = rng.gen_range(0..=2);
            bounds.insert(v, lb, lb + rng.gen_range(0..=2));
        }
        let built: Result<_, GlobalError> = match variant {
            Variant::AllDiffVar => build_soft_alldifferent(scope, doms, ViolationMeasure::Var),
            Variant::AllDiffDec => build_soft_alldifferent(scope, doms, ViolationMeasure::Dec),
            Variant::GccVar => build_soft_gcc(scope, doms, bounds, ViolationMeasure::Var),
            Variant::GccVal => build_soft_gcc(scope, doms, bounds, ViolationMeasure::Val),
            Variant::SameVar => {
                let h = n / 2;
                build_soft_same(
                    scope[..h].to_vec(),
                    scope[h..].to_vec(),
                    doms[..h].to_vec(),
                    doms[h..].to_vec(),
                )
            }
            Variant::RegularVar | Variant::RegularEdit => {
                let m = if variant == Variant::RegularVar {
                    ViolationMeasure::Var
                } else {
                    ViolationMeasure::Edit
                };
                let states = rng.gen_range(2..=3);
                build_soft_regular(scope, doms, random_automaton(rng, states, &universe), m)
            }
        };
        match built {
            Ok(g) => {
                let f = w.add_global(g).unwrap();
                return (w, f);
            }
            Err(GlobalError::GccPrecondition) => continue,
            Err(e) => panic!("build failed: {e}"),
        }
    }
}

/// Every tuple over the live values of `scope`, as positions.
pub fn live_tuples(w: &Wcsp, scope: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &x in scope {
        let live: Vec<usize> = w.var(x).live_positions().collect();
        out = out
            .into_iter()
            .flat_map(|t| {
                live.iter().map(move |&p| {
                    let mut t2 = t.clone();
                    t2.push(p);
                    t2
                })
            })
            .collect();
    }
    out
}

/// Minimum of function `f` over live tuples, optionally with scope
/// position `k` fixed to domain position `p`.
pub fn brute_min(w: &Wcsp, f: FnId, fixed: Option<(usize, usize)>) -> Cost {
    let scope = w.function(f).scope().to_vec();
    live_tuples(w, &scope)
        .iter()
        .filter(|t| fixed.is_none_or(|(k, p)| t[k] == p))
        .map(|t| w.function_value(f, t))
        .min()
        .unwrap_or(w.top())
}
