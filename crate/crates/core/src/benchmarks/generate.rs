use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::BenchError;
use crate::cost::{Cost, UNBOUNDED_TOP};
use crate::global::{
    build_soft_alldifferent, build_soft_gcc, build_soft_regular, build_soft_same,
    build_soft_stretch, decompose_alldiff_dec, Automaton, GlobalError, OccurrenceBounds,
    ViolationMeasure,
};
use crate::model::{Value, VarId, Wcsp};
use crate::table::TableCostFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    AllInterval,
    LatinSquare,
    RoundRobin,
    FairSchedule,
    PeopleMission,
    NurseRoster,
    SlidingStretch,
    LatinSquareGcc,
    AlldiffBinaryDecomposition,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::AllInterval,
        Family::LatinSquare,
        Family::RoundRobin,
        Family::FairSchedule,
        Family::PeopleMission,
        Family::NurseRoster,
        Family::SlidingStretch,
        Family::LatinSquareGcc,
        Family::AlldiffBinaryDecomposition,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::AllInterval => "all-interval",
            Family::LatinSquare => "latin-square",
            Family::RoundRobin => "round-robin",
            Family::FairSchedule => "fair-schedule",
            Family::PeopleMission => "people-mission",
            Family::NurseRoster => "nurse-roster",
            Family::SlidingStretch => "sliding-stretch",
            Family::LatinSquareGcc => "latin-square-gcc",
            Family::AlldiffBinaryDecomposition => "alldiff-binary-decomposition",
        }
    }

    /// Number of size parameters the family takes.
    pub fn arity(self) -> usize {
        match self {
            Family::RoundRobin | Family::FairSchedule => 3,
            Family::PeopleMission => 2,
            _ => 1,
        }
    }

    pub fn default_measure(self) -> ViolationMeasure {
        match self {
            Family::LatinSquareGcc => ViolationMeasure::Val,
            Family::AlldiffBinaryDecomposition => ViolationMeasure::Dec,
            _ => ViolationMeasure::Var,
        }
    }

    fn measures(self) -> &'static [ViolationMeasure] {
        use ViolationMeasure::*;
        match self {
            Family::AllInterval | Family::LatinSquare => &[Var, Dec],
            Family::RoundRobin | Family::LatinSquareGcc => &[Var, Val],
            Family::FairSchedule | Family::PeopleMission => &[Var],
            Family::NurseRoster | Family::SlidingStretch => &[Var, Edit],
            Family::AlldiffBinaryDecomposition => &[Dec],
        }
    }

    /// Sizes used by the benchmark suite.
    pub fn default_size(self) -> Vec<usize> {
        match self {
            Family::AllInterval | Family::AlldiffBinaryDecomposition => vec![8],
            Family::LatinSquare | Family::LatinSquareGcc => vec![4],
            Family::RoundRobin => vec![4, 3, 2],
            Family::FairSchedule => vec![4, 5, 5],
            Family::PeopleMission => vec![6, 4],
            Family::NurseRoster => vec![3],
            Family::SlidingStretch => vec![30],
        }
    }

    /// Sizes small enough for exhaustive enumeration.
    pub fn tiny_size(self) -> Vec<usize> {
        match self {
            Family::AllInterval | Family::AlldiffBinaryDecomposition => vec![4],
            Family::LatinSquare | Family::LatinSquareGcc => vec![3],
            Family::RoundRobin => vec![3, 1, 2],
            Family::FairSchedule => vec![2, 3, 3],
            Family::PeopleMission => vec![2, 3],
            Family::NurseRoster => vec![2],
            Family::SlidingStretch => vec![10],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// A benchmark family with its size parameters.
///
/// Sizes by family: all-interval, latin squares, nurse roster, sliding
/// stretch and the decomposition take `[n]`; round robin takes
/// `[teams, periods, weeks]`; fair schedule takes `[shifts, days, persons]`;
/// people-mission takes `[missions, persons per group]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchmarkSpec {
    pub family: Family,
    pub size: Vec<usize>,
    pub measure: ViolationMeasure,
    pub seed: u64,
}

impl BenchmarkSpec {
    pub fn new(family: Family, size: Vec<usize>, seed: u64) -> Self {
        BenchmarkSpec {
            family,
            size,
            measure: family.default_measure(),
            seed,
        }
    }

    pub fn with_measure(mut self, measure: ViolationMeasure) -> Self {
        self.measure = measure;
        self
    }

    /// Size parameters joined by `x`, as written in reports.
    pub fn size_label(&self) -> String {
        self.size
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::InvalidSpec(m));
        if self.size.len() != self.family.arity() {
            return bad(format!(
                "{} takes {} size parameters",
                self.family,
                self.family.arity()
            ));
        }
        if self.size.contains(&0) {
            return bad("sizes must be positive".into());
        }
        if !self.family.measures().contains(&self.measure) {
            return bad(format!(
                "{} does not support measure {}",
                self.family, self.measure
            ));
        }
        let s = &self.size;
        match self.family {
            Family::AllInterval
            | Family::AlldiffBinaryDecomposition
            | Family::LatinSquare
            | Family::LatinSquareGcc
                if s[0] < 2 =>
            {
                bad("order must be at least 2".into())
            }
            Family::RoundRobin if s[0] < 2 => bad("round robin needs at least two teams".into()),
            Family::FairSchedule | Family::PeopleMission if s[s.len() - 1] < 2 => {
                bad("at least two persons are needed".into())
            }
            Family::SlidingStretch if s[0] < 5 => bad("sliding problems need n >= 5".into()),
            _ => Ok(()),
        }
    }
}

fn build_err(e: GlobalError) -> BenchError {
    BenchError::InvalidSpec(e.to_string())
}

struct Builder {
    w: Wcsp,
    rng: ChaCha8Rng,
}

impl Builder {
    fn new(spec: &BenchmarkSpec) -> Self {
        let name = format!("{}-{}-{}", spec.family, spec.size_label(), spec.measure);
        let mut w = Wcsp::new(name, UNBOUNDED_TOP);
        w.set_seed(Some(spec.seed));
        Builder {
            w,
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
        }
    }

    /// Adds a variable with unary costs drawn uniformly from 0..=9.
    fn var(&mut self, name: String, values: Vec<Value>) -> VarId {
        let costs = values
            .iter()
            .map(|_| Cost(self.rng.gen_range(0..=9)))
            .collect();
        let x = self.w.add_variable(name, values).expect("valid variable");
        self.w.set_unary(x, costs).expect("matching length");
        x
    }

    fn doms(&self, scope: &[VarId]) -> Vec<Vec<Value>> {
        self.w.domains_of(scope)
    }

    fn alldiff(&mut self, scope: Vec<VarId>, m: ViolationMeasure) -> Result<(), BenchError> {
        let d = self.doms(&scope);
        let g = build_soft_alldifferent(scope, d, m).map_err(build_err)?;
        self.w.add_global(g).expect("matching domains");
        Ok(())
    }

    fn gcc(
        &mut self,
        scope: Vec<VarId>,
        b: OccurrenceBounds,
        m: ViolationMeasure,
    ) -> Result<(), BenchError> {
        let d = self.doms(&scope);
        let g = build_soft_gcc(scope, d, b, m).map_err(build_err)?;
        self.w.add_global(g).expect("matching domains");
        Ok(())
    }

    fn same(&mut self, left: Vec<VarId>, right: Vec<VarId>) -> Result<(), BenchError> {
        let (dl, dr) = (self.doms(&left), self.doms(&right));
        let g = build_soft_same(left, right, dl, dr).map_err(build_err)?;
        self.w.add_global(g).expect("matching domains");
        Ok(())
    }

    /// A table that is zero exactly on tuples accepted by `ok`, top elsewhere.
    fn hard(&mut self, scope: Vec<VarId>, ok: impl Fn(&[Value]) -> bool) {
        let t = self.table(
            scope,
            |vals| if ok(vals) { Cost::ZERO } else { UNBOUNDED_TOP },
        );
        self.w.add_table(t).expect("valid table");
    }

    fn table(&self, scope: Vec<VarId>, cost: impl Fn(&[Value]) -> Cost) -> TableCostFunction {
        let sizes: Vec<usize> = scope
            .iter()
            .map(|&x| self.w.var(x).values().len())
            .collect();
        let mut t = TableCostFunction::new(scope.clone(), sizes, Cost::ZERO);
        let entries: Vec<Vec<usize>> = t.entries().map(|(p, _)| p).collect();
        for pos in entries {
            let vals: Vec<Value> = pos
                .iter()
                .zip(&scope)
                .map(|(&p, &x)| self.w.var(x).value(p))
                .collect();
            t.set(&pos, cost(&vals));
        }
        t
    }
}

/// Builds the instance described by `spec`.
pub fn generate(spec: &BenchmarkSpec) -> Result<Wcsp, BenchError> {
    spec.validate()?;
    let mut b = Builder::new(spec);
    let s = &spec.size;
    let m = spec.measure;
    match spec.family {
        Family::AllInterval | Family::AlldiffBinaryDecomposition => {
            all_interval(&mut b, s[0], m, spec.family)?
        }
        Family::LatinSquare | Family::LatinSquareGcc => {
            latin(&mut b, s[0], m, spec.family == Family::LatinSquareGcc)?
        }
        Family::RoundRobin => round_robin(&mut b, s[0], s[1], s[2], m)?,
        Family::FairSchedule => fair_schedule(&mut b, s[0], s[1], s[2])?,
        Family::PeopleMission => people_mission(&mut b, s[0], s[1])?,
        Family::NurseRoster => nurse_roster(&mut b, s[0], m)?,
        Family::SlidingStretch => sliding(&mut b, s[0], m)?,
    }
    Ok(b.w)
}

fn range(n: usize) -> Vec<Value> {
    (0..n as Value).collect()
}

fn all_interval(
    b: &mut Builder,
    n: usize,
    m: ViolationMeasure,
    family: Family,
) -> Result<(), BenchError> {
    let s: Vec<VarId> = (0..n)
        .map(|i| b.var(format!("s{}", i + 1), range(n)))
        .collect();
    let d: Vec<VarId> = (0..n - 1)
        .map(|i| b.var(format!("d{}", i + 1), range(n)))
        .collect();
    if family == Family::AlldiffBinaryDecomposition {
        for scope in [&s, &d] {
            for t in decompose_alldiff_dec(scope, &b.doms(scope)) {
                b.w.add_table(t).expect("valid table");
            }
        }
    } else {
        b.alldiff(s.clone(), m)?;
        b.alldiff(d.clone(), m)?;
    }
    for i in 0..n - 1 {
        b.hard(vec![s[i], s[i + 1], d[i]], |v| v[2] == (v[0] - v[1]).abs());
    }
    Ok(())
}

fn latin(b: &mut Builder, n: usize, m: ViolationMeasure, gcc: bool) -> Result<(), BenchError> {
    let x: Vec<Vec<VarId>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| b.var(format!("x{i}_{j}"), range(n)))
                .collect()
        })
        .collect();
    let mut lines: Vec<Vec<VarId>> = x.clone();
    lines.extend((0..n).map(|j| (0..n).map(|i| x[i][j]).collect()));
    for line in lines {
        if gcc {
            let bounds = range(n)
                .into_iter()
                .fold(OccurrenceBounds::new(), |acc, v| acc.with(v, 1, 1));
            b.gcc(line, bounds, m)?;
        } else {
            b.alldiff(line, m)?;
        }
    }
    Ok(())
}

/// Match code of the unordered pair `{a, b}` of `n` teams.
pub fn match_code(a: Value, b: Value, n: usize) -> Value {
    let (lo, hi) = (a.min(b), a.max(b));
    lo * n as Value + hi
}

fn round_robin(
    b: &mut Builder,
    n: usize,
    periods: usize,
    weeks: usize,
    m: ViolationMeasure,
) -> Result<(), BenchError> {
    let teams = range(n);
    let codes: Vec<Value> = (0..n as Value)
        .flat_map(|a| (a + 1..n as Value).map(move |c| match_code(a, c, n)))
        .collect();
    let mut slots = vec![vec![(0, 0, 0); periods]; weeks];
    for (i, week) in slots.iter_mut().enumerate() {
        for (j, slot) in week.iter_mut().enumerate() {
            let s = b.var(format!("s{i}_{j}"), teams.clone());
            let t = b.var(format!("t{i}_{j}"), teams.clone());
            let mm = b.var(format!("m{i}_{j}"), codes.clone());
            *slot = (s, t, mm);
        }
    }
    for week in &slots {
        for &(s, t, mm) in week {
            b.hard(vec![s, t, mm], |v| {
                v[0] != v[1] && v[2] == match_code(v[0], v[1], n)
            });
        }
    }
    let per_week = 2 * periods;
    let week_lb = u64::from(per_week >= n);
    let week_ub = per_week.div_ceil(n) as u64;
    for week in &slots {
        let scope: Vec<VarId> = week.iter().flat_map(|&(s, t, _)| [s, t]).collect();
        let bounds = teams.iter().fold(OccurrenceBounds::new(), |acc, &a| {
            acc.with(a, week_lb, week_ub)
        });
        b.gcc(scope, bounds, m)?;
    }
    let period_ub = 2.max((2 * weeks).div_ceil(n)) as u64;
    for j in 0..periods {
        let scope: Vec<VarId> = slots.iter().flat_map(|w| [w[j].0, w[j].1]).collect();
        let bounds = teams
            .iter()
            .fold(OccurrenceBounds::new(), |acc, &a| acc.with(a, 0, period_ub));
        b.gcc(scope, bounds, m)?;
    }
    let matches = periods * weeks;
    let match_lb = u64::from(matches >= codes.len());
    let match_ub = matches.div_ceil(codes.len()) as u64;
    let scope: Vec<VarId> = slots.iter().flatten().map(|&(_, _, mm)| mm).collect();
    let bounds = codes.iter().fold(OccurrenceBounds::new(), |acc, &c| {
        acc.with(c, match_lb, match_ub)
    });
    b.gcc(scope, bounds, m)
}

fn fair_schedule(
    b: &mut Builder,
    shifts: usize,
    days: usize,
    persons: usize,
) -> Result<(), BenchError> {
    let x: Vec<Vec<VarId>> = (0..persons)
        .map(|i| {
            (0..days)
                .map(|j| b.var(format!("x{i}_{j}"), range(shifts)))
                .collect()
        })
        .collect();
    for p in 0..persons {
        for q in p + 1..persons {
            b.same(x[p].clone(), x[q].clone())?;
        }
    }
    Ok(())
}

fn people_mission(b: &mut Builder, missions: usize, persons: usize) -> Result<(), BenchError> {
    let x: Vec<Vec<VarId>> = (0..3)
        .map(|g| {
            (0..persons)
                .map(|i| b.var(format!("x{i}_{g}"), range(missions)))
                .collect()
        })
        .collect();
    b.same(x[0].clone(), x[1].clone())?;
    b.same(x[1].clone(), x[2].clone())?;
    // one soft restriction per person of the first group: a random
    // team-mate pair from the other groups is discouraged from sharing a
    // mission with them
    for i in 0..persons {
        let j = b.rng.gen_range(0..persons);
        let k = b.rng.gen_range(0..persons);
        let penalty = Cost(b.rng.gen_range(1..=9));
        let t = b.table(vec![x[0][i], x[1][j], x[2][k]], |v| {
            if v[0] == v[1] && v[1] == v[2] {
                penalty
            } else {
                Cost::ZERO
            }
        });
        b.w.add_table(t).expect("valid table");
    }
    Ok(())
}

pub const PM: Value = 0;
pub const AM: Value = 1;
pub const NIGHT: Value = 2;
pub const OFF: Value = 3;

/// Accepts shift strings in which the AM shifts form at most one run and
/// so do the days off.
pub fn packing_automaton() -> Automaton {
    // state = 3 * am + off, each in {0 not seen, 1 inside run, 2 run closed}
    let id = |am: usize, off: usize| 3 * am + off;
    let advance = |phase: usize, hit: bool| -> Option<usize> {
        match (phase, hit) {
            (0, true) | (1, true) => Some(1),
            (0, false) => Some(0),
            (1, false) | (2, false) => Some(2),
            (2, true) => None,
            _ => unreachable!(),
        }
    };
    let mut trans = Vec::new();
    for am in 0..3 {
        for off in 0..3 {
            for c in [PM, AM, NIGHT, OFF] {
                if let (Some(a), Some(o)) = (advance(am, c == AM), advance(off, c == OFF)) {
                    trans.push((id(am, off), c, id(a, o)));
                }
            }
        }
    }
    Automaton::new(9, vec![PM, AM, NIGHT, OFF], 0, 0..9, trans).expect("well-formed automaton")
}

fn nurse_roster(b: &mut Builder, nurses: usize, m: ViolationMeasure) -> Result<(), BenchError> {
    const DAYS: usize = 4;
    let shifts = vec![PM, AM, NIGHT, OFF];
    let x: Vec<Vec<VarId>> = (0..nurses)
        .map(|i| {
            (0..DAYS)
                .map(|j| b.var(format!("x{i}_{j}"), shifts.clone()))
                .collect()
        })
        .collect();
    let d = DAYS as u64;
    for row in &x {
        let bounds = OccurrenceBounds::new()
            .with(AM, 0, 3)
            .with(PM, 2, d)
            .with(NIGHT, 1, d)
            .with(OFF, 1, d);
        b.gcc(row.clone(), bounds, ViolationMeasure::Val)?;
    }
    for j in 0..DAYS {
        let col: Vec<VarId> = x.iter().map(|row| row[j]).collect();
        let bounds = OccurrenceBounds::new()
            .with(AM, 2, 2)
            .with(PM, 1, 1)
            .with(NIGHT, 1, 1)
            .with(OFF, 0, nurses as u64);
        b.gcc(col, bounds, ViolationMeasure::Val)?;
    }
    for row in &x {
        let d = b.doms(row);
        let g = build_soft_regular(row.clone(), d, packing_automaton(), m).map_err(build_err)?;
        b.w.add_global(g).expect("matching domains");
    }
    Ok(())
}

fn sliding(b: &mut Builder, n: usize, m: ViolationMeasure) -> Result<(), BenchError> {
    let x: Vec<VarId> = (0..n)
        .map(|i| b.var(format!("x{}", i + 1), vec![0, 1]))
        .collect();
    let bounds = OccurrenceBounds::new().with(0, 2, 2).with(1, 2, 3);
    for i in 0..5 {
        let scope = x[i..n - 4 + i].to_vec();
        let d = b.doms(&scope);
        let g = build_soft_stretch(scope, d, bounds.clone(), m).map_err(build_err)?;
        b.w.add_global(g).expect("matching domains");
    }
    Ok(())
}
