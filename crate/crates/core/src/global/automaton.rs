use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt::Write as _;

use super::GlobalError;
use crate::model::Value;

/// Deterministic finite automaton over integer symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    states: usize,
    alphabet: Vec<Value>,
    initial: usize,
    finals: BTreeSet<usize>,
    delta: BTreeMap<(usize, Value), usize>,
}

impl Automaton {
    pub fn new(
        states: usize,
        alphabet: Vec<Value>,
        initial: usize,
        finals: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, Value, usize)>,
    ) -> Result<Self, GlobalError> {
        let bad = |m: &str| GlobalError::BadAutomaton(m.to_string());
        if states == 0 || initial >= states {
            return Err(bad("initial state out of range"));
        }
        let finals: BTreeSet<usize> = finals.into_iter().collect();
        if finals.iter().any(|&q| q >= states) {
            return Err(bad("final state out of range"));
        }
        let symbols: BTreeSet<Value> = alphabet.iter().copied().collect();
        if symbols.len() != alphabet.len() {
            return Err(bad("repeated alphabet symbol"));
        }
        let mut delta = BTreeMap::new();
        for (q, c, r) in transitions {
            if q >= states || r >= states {
                return Err(bad("transition state out of range"));
            }
            if !symbols.contains(&c) {
                return Err(bad("transition symbol outside alphabet"));
            }
            if delta.insert((q, c), r).is_some_and(|old| old != r) {
                return Err(bad("nondeterministic transition"));
            }
        }
        Ok(Automaton {
            states,
            alphabet,
            initial,
            finals,
            delta,
        })
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn alphabet(&self) -> &[Value] {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.contains(&q)
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        self.finals.iter().copied()
    }

    pub fn step(&self, q: usize, c: Value) -> Option<usize> {
        self.delta.get(&(q, c)).copied()
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, Value, usize)> + '_ {
        self.delta.iter().map(|(&(q, c), &r)| (q, c, r))
    }

    pub fn accepts(&self, word: &[Value]) -> bool {
        let mut q = self.initial;
        for &c in word {
            match self.step(q, c) {
                Some(r) => q = r,
                None => return false,
            }
        }
        self.is_final(q)
    }

    /// Fewest substitutions turning `word` into an accepted word of the
    /// same length. `None` if no accepted word has that length.
    pub fn hamming_distance(&self, word: &[Value]) -> Option<u64> {
        let mut cur: Vec<Option<u64>> = vec![None; self.states];
        cur[self.initial] = Some(0);
        for &x in word {
            let mut next = vec![None; self.states];
            for (q, c, r) in self.transitions() {
                if let Some(d) = cur[q] {
                    let nd = d + u64::from(c != x);
                    if next[r].is_none_or(|o| nd < o) {
                        next[r] = Some(nd);
                    }
                }
            }
            cur = next;
        }
        self.finals.iter().filter_map(|&q| cur[q]).min()
    }

    /// Fewest insertions, deletions and substitutions turning `word` into
    /// an accepted word. `None` when the language is empty.
    pub fn edit_distance(&self, word: &[Value]) -> Option<u64> {
        let n = word.len();
        let s = self.states;
        let idx = |i: usize, q: usize| i * s + q;
        let mut dist = vec![u64::MAX; (n + 1) * s];
        let mut heap = BinaryHeap::new();
        dist[idx(0, self.initial)] = 0;
        heap.push(Reverse((0u64, 0usize, self.initial)));
        while let Some(Reverse((d, i, q))) = heap.pop() {
            if d > dist[idx(i, q)] {
                continue;
            }
            let mut relax = |j: usize, r: usize, w: u64, heap: &mut BinaryHeap<_>| {
                if d + w < dist[idx(j, r)] {
                    dist[idx(j, r)] = d + w;
                    heap.push(Reverse((d + w, j, r)));
                }
            };
            for &c in &self.alphabet {
                if let Some(r) = self.step(q, c) {
                    relax(i, r, 1, &mut heap);
                    if i < n {
                        relax(i + 1, r, u64::from(c != word[i]), &mut heap);
                    }
                }
            }
            if i < n {
                relax(i + 1, q, 1, &mut heap);
            }
        }
        self.finals
            .iter()
            .map(|&q| dist[idx(n, q)])
            .filter(|&d| d != u64::MAX)
            .min()
    }

    /// Parses the line-oriented text form:
    ///
    /// ```text
    /// states 3
    /// alphabet 0 1
    /// initial q0
    /// final q2
    /// trans q0 0 q1
    /// ```
    pub fn parse(text: &str) -> Result<Self, GlobalError> {
        let bad = |m: String| GlobalError::BadAutomaton(m);
        let mut states = None;
        let mut alphabet = Vec::new();
        let mut initial = None;
        let mut finals = Vec::new();
        let mut trans = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tok = line.split_whitespace();
            let key = tok.next().unwrap_or_default();
            let rest: Vec<&str> = tok.collect();
            let at = |m: &str| bad(format!("line {}: {m}", no + 1));
            match key {
                "states" => {
                    states = Some(
                        rest.first()
                            .and_then(|t| t.parse::<usize>().ok())
                            .ok_or_else(|| at("expected state count"))?,
                    )
                }
                "alphabet" => {
                    for t in rest {
                        alphabet.push(
                            t.parse::<Value>()
                                .map_err(|_| at("symbol must be an integer"))?,
                        );
                    }
                }
                "initial" => {
                    initial =
                        Some(parse_state(rest.first().copied()).ok_or_else(|| at("bad state"))?)
                }
                "final" => {
                    for t in rest {
                        finals.push(parse_state(Some(t)).ok_or_else(|| at("bad state"))?);
                    }
                }
                "trans" => {
                    if rest.len() != 3 {
                        return Err(at("trans needs: from symbol to"));
                    }
                    let q = parse_state(Some(rest[0])).ok_or_else(|| at("bad state"))?;
                    let c = rest[1]
                        .parse::<Value>()
                        .map_err(|_| at("symbol must be an integer"))?;
                    let r = parse_state(Some(rest[2])).ok_or_else(|| at("bad state"))?;
                    trans.push((q, c, r));
                }
                other => return Err(at(&format!("unknown directive `{other}`"))),
            }
        }
        let states = states.ok_or_else(|| bad("missing `states`".into()))?;
        let initial = initial.ok_or_else(|| bad("missing `initial`".into()))?;
        Automaton::new(states, alphabet, initial, finals, trans)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "states {}", self.states);
        let syms: Vec<String> = self.alphabet.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "alphabet {}", syms.join(" "));
        let _ = writeln!(out, "initial q{}", self.initial);
        let fin: Vec<String> = self.finals.iter().map(|q| format!("q{q}")).collect();
        let _ = writeln!(out, "final {}", fin.join(" "));
        for (q, c, r) in self.transitions() {
            let _ = writeln!(out, "trans q{q} {c} q{r}");
        }
        out
    }
}

fn parse_state(tok: Option<&str>) -> Option<usize> {
    let t = tok?;
    t.strip_prefix('q').unwrap_or(t).parse().ok()
}
