//! Line-based instance files.
//!
//! ```text
//! wcsp demo
//! seed 7
//! top 1099511627776
//! w0 0
//! var x0 0 1 2
//! var x1 0 1 2
//! unary 0 3 0 9
//! table 0 1 default 0
//! tuple 1 1 5
//! end
//! global alldifferent var 0 1
//! global gcc val 0 1 bounds 0:1:1 1:0:2
//! global same 1 0 1
//! global stretch edit 0 1 bounds 0:2:2 1:2:3
//! global regular var 0 1
//! states 1
//! alphabet 0 1 2
//! initial q0
//! final q0
//! end
//! ```
//!
//! Table tuples and unary lines list values, not positions. Only entries
//! that differ from the default are written. Globals are stored as built,
//! so files describe fresh models, not propagated ones.

use std::fmt::Write as _;

use super::BenchError;
use crate::cost::Cost;
use crate::global::{
    build_soft_alldifferent, build_soft_gcc, build_soft_regular, build_soft_same,
    build_soft_stretch, Automaton, GlobalKind, OccurrenceBounds, ViolationMeasure,
};
use crate::model::{CostFunction, Value, VarId, Wcsp};
use crate::table::TableCostFunction;

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn bounds_text(b: &OccurrenceBounds) -> String {
    join(b.iter().map(|(v, l, u)| format!("{v}:{l}:{u}")))
}

pub fn write_instance(w: &Wcsp) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "wcsp {}", w.name());
    if let Some(seed) = w.seed() {
        let _ = writeln!(out, "seed {seed}");
    }
    let _ = writeln!(out, "top {}", w.top());
    let _ = writeln!(out, "w0 {}", w.w_zero());
    for v in w.vars() {
        let _ = writeln!(out, "var {} {}", v.name(), join(v.values()));
    }
    for (x, v) in w.vars().iter().enumerate() {
        if v.unary_costs().iter().any(|&c| c > Cost::ZERO) {
            let _ = writeln!(out, "unary {x} {}", join(v.unary_costs()));
        }
    }
    for f in w.functions() {
        match f {
            CostFunction::Table(t) => write_table(&mut out, w, t),
            CostFunction::Global(g) => {
                let scope = join(g.scope());
                match g.kind() {
                    GlobalKind::AllDifferent { measure } => {
                        let _ = writeln!(out, "global alldifferent {measure} {scope}");
                    }
                    GlobalKind::Gcc { measure, bounds } => {
                        let _ = writeln!(
                            out,
                            "global gcc {measure} {scope} bounds {}",
                            bounds_text(bounds)
                        );
                    }
                    GlobalKind::Same { left } => {
                        let _ = writeln!(out, "global same {left} {scope}");
                    }
                    GlobalKind::Stretch {
                        measure, bounds, ..
                    } => {
                        let _ = writeln!(
                            out,
                            "global stretch {measure} {scope} bounds {}",
                            bounds_text(bounds)
                        );
                    }
                    GlobalKind::Regular { measure, automaton } => {
                        let _ = writeln!(out, "global regular {measure} {scope}");
                        out.push_str(&automaton.to_text());
                        out.push_str("end\n");
                    }
                }
            }
        }
    }
    out
}

fn write_table(out: &mut String, w: &Wcsp, t: &TableCostFunction) {
    // the most frequent cost becomes the default
    let mut counts = std::collections::BTreeMap::new();
    for (_, c) in t.entries() {
        *counts.entry(c).or_insert(0usize) += 1;
    }
    let default = counts
        .iter()
        .max_by_key(|&(c, n)| (*n, std::cmp::Reverse(*c)))
        .map_or(Cost::ZERO, |(c, _)| *c);
    let _ = writeln!(out, "table {} default {default}", join(t.scope()));
    for (tuple, c) in t.entries() {
        if c != default {
            let values = tuple
                .iter()
                .zip(t.scope())
                .map(|(&p, &x)| w.var(x).value(p));
            let _ = writeln!(out, "tuple {} {c}", join(values));
        }
    }
    out.push_str("end\n");
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (no, raw) in self.inner.by_ref() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                return Some((no + 1, line));
            }
        }
        None
    }
}

fn err(line: usize, msg: impl Into<String>) -> BenchError {
    BenchError::Parse {
        line,
        msg: msg.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T, BenchError> {
    tok.parse()
        .map_err(|_| err(line, format!("expected a number, got `{tok}`")))
}

fn parse_bounds(line: usize, toks: &[&str]) -> Result<OccurrenceBounds, BenchError> {
    let mut b = OccurrenceBounds::new();
    for t in toks {
        let parts: Vec<&str> = t.split(':').collect();
        if parts.len() != 3 {
            return Err(err(line, format!("bound `{t}` is not value:lb:ub")));
        }
        b.insert(
            num(line, parts[0])?,
            num(line, parts[1])?,
            num(line, parts[2])?,
        );
    }
    Ok(b)
}

/// Splits `a b c bounds ...` into the scope and the bound tokens.
fn scope_and_bounds<'t>(
    line: usize,
    toks: &[&'t str],
) -> Result<(Vec<VarId>, Vec<&'t str>), BenchError> {
    let cut = toks
        .iter()
        .position(|&t| t == "bounds")
        .unwrap_or(toks.len());
    let scope = toks[..cut]
        .iter()
        .map(|t| num(line, t))
        .collect::<Result<_, _>>()?;
    let rest = toks.get(cut + 1..).unwrap_or(&[]).to_vec();
    Ok((scope, rest))
}

pub fn parse_instance(text: &str) -> Result<Wcsp, BenchError> {
    let mut lines = Lines {
        inner: text.lines().enumerate().peekable(),
    };
    let (no, first) = lines.next().ok_or_else(|| err(0, "empty file"))?;
    let name = first
        .strip_prefix("wcsp")
        .map(str::trim)
        .ok_or_else(|| err(no, "file must start with `wcsp <name>`"))?;
    let mut seed = None;
    let mut top = None;
    let mut w0 = Cost::ZERO;
    let mut w: Option<Wcsp> = None;
    let mut pending_vars: Vec<(String, Vec<Value>)> = Vec::new();

    fn ready<'w>(
        w: &'w mut Option<Wcsp>,
        name: &str,
        top: Option<Cost>,
        seed: Option<u64>,
        w0: Cost,
        vars: &mut Vec<(String, Vec<Value>)>,
        line: usize,
    ) -> Result<&'w mut Wcsp, BenchError> {
        if w.is_none() {
            let top = top.ok_or_else(|| err(line, "missing `top` before functions"))?;
            let mut m = Wcsp::new(name, top);
            m.set_seed(seed);
            m.set_w_zero(w0);
            for (n, vals) in vars.drain(..) {
                m.add_variable(n, vals)
                    .map_err(|e| err(line, e.to_string()))?;
            }
            *w = Some(m);
        }
        Ok(w.as_mut().expect("just built"))
    }

    while let Some((no, line)) = lines.next() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "seed" => seed = Some(num(no, toks.get(1).copied().unwrap_or(""))?),
            "top" => top = Some(Cost(num(no, toks.get(1).copied().unwrap_or(""))?)),
            "w0" => w0 = Cost(num(no, toks.get(1).copied().unwrap_or(""))?),
            "var" => {
                if w.is_some() {
                    return Err(err(no, "variables must precede costs"));
                }
                let name = toks.get(1).ok_or_else(|| err(no, "var needs a name"))?;
                let vals = toks[2..]
                    .iter()
                    .map(|t| num(no, t))
                    .collect::<Result<_, _>>()?;
                pending_vars.push((name.to_string(), vals));
            }
            "unary" => {
                let m = ready(&mut w, name, top, seed, w0, &mut pending_vars, no)?;
                let x: VarId = num(no, toks.get(1).copied().unwrap_or(""))?;
                let costs = toks[2..]
                    .iter()
                    .map(|t| num(no, t).map(Cost))
                    .collect::<Result<_, _>>()?;
                m.set_unary(x, costs).map_err(|e| err(no, e.to_string()))?;
            }
            "table" => {
                let m = ready(&mut w, name, top, seed, w0, &mut pending_vars, no)?;
                let cut = toks
                    .iter()
                    .position(|&t| t == "default")
                    .ok_or_else(|| err(no, "table needs a default"))?;
                let scope: Vec<VarId> = toks[1..cut]
                    .iter()
                    .map(|t| num(no, t))
                    .collect::<Result<_, _>>()?;
                let default = Cost(num(no, toks.get(cut + 1).copied().unwrap_or(""))?);
                if scope.iter().any(|&x| x >= m.num_vars()) {
                    return Err(err(no, "table scope names an unknown variable"));
                }
                let sizes = scope.iter().map(|&x| m.var(x).values().len()).collect();
                let mut t = TableCostFunction::new(scope.clone(), sizes, default);
                loop {
                    let (tn, tl) = lines.next().ok_or_else(|| err(no, "unterminated table"))?;
                    if tl == "end" {
                        break;
                    }
                    let tt: Vec<&str> = tl.split_whitespace().collect();
                    if tt[0] != "tuple" || tt.len() != scope.len() + 2 {
                        return Err(err(tn, "expected `tuple <values> <cost>`"));
                    }
                    let mut pos = Vec::with_capacity(scope.len());
                    for (k, &x) in scope.iter().enumerate() {
                        let v: Value = num(tn, tt[k + 1])?;
                        pos.push(
                            m.var(x)
                                .position_of(v)
                                .ok_or_else(|| err(tn, format!("value {v} not in domain")))?,
                        );
                    }
                    t.set(&pos, Cost(num(tn, tt[scope.len() + 1])?));
                }
                m.add_table(t).map_err(|e| err(no, e.to_string()))?;
            }
            "global" => {
                let m = ready(&mut w, name, top, seed, w0, &mut pending_vars, no)?;
                parse_global(m, &toks, no, &mut lines)?;
            }
            other => return Err(err(no, format!("unknown directive `{other}`"))),
        }
    }
    let last = text.lines().count();
    ready(&mut w, name, top, seed, w0, &mut pending_vars, last)?;
    Ok(w.expect("built"))
}

fn parse_global(
    m: &mut Wcsp,
    toks: &[&str],
    no: usize,
    lines: &mut Lines<'_>,
) -> Result<(), BenchError> {
    let family = toks.get(1).copied().unwrap_or("");
    let scope_of = |xs: &[VarId]| -> Result<Vec<Vec<Value>>, BenchError> {
        if xs.iter().any(|&x| x >= m.num_vars()) {
            return Err(err(no, "scope names an unknown variable"));
        }
        Ok(m.domains_of(xs))
    };
    let measure = |i: usize| -> Result<ViolationMeasure, BenchError> {
        toks.get(i)
            .ok_or_else(|| err(no, "missing measure"))?
            .parse()
            .map_err(|e: String| err(no, e))
    };
    let g = match family {
        "alldifferent" => {
            let (scope, _) = scope_and_bounds(no, &toks[3..])?;
            build_soft_alldifferent(scope.clone(), scope_of(&scope)?, measure(2)?)
        }
        "gcc" => {
            let (scope, b) = scope_and_bounds(no, &toks[3..])?;
            build_soft_gcc(
                scope.clone(),
                scope_of(&scope)?,
                parse_bounds(no, &b)?,
                measure(2)?,
            )
        }
        "stretch" => {
            let (scope, b) = scope_and_bounds(no, &toks[3..])?;
            build_soft_stretch(
                scope.clone(),
                scope_of(&scope)?,
                parse_bounds(no, &b)?,
                measure(2)?,
            )
        }
        "same" => {
            let left: usize = num(no, toks.get(2).copied().unwrap_or(""))?;
            let (scope, _) = scope_and_bounds(no, &toks[3..])?;
            if left > scope.len() {
                return Err(err(no, "left half longer than scope"));
            }
            let doms = scope_of(&scope)?;
            build_soft_same(
                scope[..left].to_vec(),
                scope[left..].to_vec(),
                doms[..left].to_vec(),
                doms[left..].to_vec(),
            )
        }
        "regular" => {
            let (scope, _) = scope_and_bounds(no, &toks[3..])?;
            let mut body = String::new();
            loop {
                let (_, l) = lines
                    .next()
                    .ok_or_else(|| err(no, "unterminated automaton"))?;
                if l == "end" {
                    break;
                }
                body.push_str(l);
                body.push('\n');
            }
            let a = Automaton::parse(&body).map_err(|e| err(no, e.to_string()))?;
            build_soft_regular(scope.clone(), scope_of(&scope)?, a, measure(2)?)
        }
        other => return Err(err(no, format!("unknown global family `{other}`"))),
    }
    .map_err(|e| err(no, e.to_string()))?;
    m.add_global(g).map_err(|e| err(no, e.to_string()))?;
    Ok(())
}
