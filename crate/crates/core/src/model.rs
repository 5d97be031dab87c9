//! Weighted constraint network: variables with unary costs, a zero-arity
//! lower bound, table functions and flow-based global functions, plus the
//! trail used to undo changes on backtrack.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cost::{ominus, oplus, Cost};
use crate::global::{FlowBasedCostFunction, GlobalError};
use crate::table::TableCostFunction;

pub type VarId = usize;
pub type FnId = usize;
pub type Value = i64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown variable {0}")]
    UnknownVariable(VarId),
    #[error("value {value} is not in the domain of variable {var}")]
    UnknownValue { var: VarId, value: Value },
    #[error("repeated value in domain of `{0}`")]
    RepeatedValue(String),
    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },
    #[error("table sizes do not match the scope domains")]
    TableShape,
    #[error("global function domains do not match the scope variables")]
    GlobalShape,
    #[error("amount exceeds the available cost")]
    TooMuch,
    #[error("pop without matching push")]
    UnbalancedPop,
    #[error(transparent)]
    Global(#[from] GlobalError),
}

/// Reason a network has no solution below top.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum Contradiction {
    #[error("domain of variable {0} is empty")]
    Wipeout(VarId),
    #[error("lower bound reached top")]
    LowerBound,
    #[error("cost function {0} cannot be satisfied")]
    Infeasible(FnId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    name: String,
    values: Vec<Value>,
    unary: Vec<Cost>,
    live: Vec<bool>,
    size: usize,
}

impl Variable {
    fn new(name: String, values: Vec<Value>) -> Self {
        let n = values.len();
        Variable {
            name,
            values,
            unary: vec![Cost::ZERO; n],
            live: vec![true; n],
            size: n,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Original domain, in order. Positions index into this list.
    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn value(&self, p: usize) -> Value {
        self.values[p]
    }

    pub fn position_of(&self, v: Value) -> Option<usize> {
        self.values.iter().position(|&x| x == v)
    }

    pub fn unary(&self, p: usize) -> Cost {
        self.unary[p]
    }

    pub fn unary_costs(&self) -> &[Cost] {
        &self.unary
    }

    pub fn is_live(&self, p: usize) -> bool {
        self.live[p]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn live_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.values.len()).filter(move |&p| self.live[p])
    }

    pub fn live_values(&self) -> Vec<Value> {
        self.live_positions().map(|p| self.values[p]).collect()
    }
}

#[derive(Clone, Debug)]
pub enum CostFunction {
    Table(TableCostFunction),
    Global(Box<FlowBasedCostFunction>),
}

impl CostFunction {
    pub fn scope(&self) -> &[VarId] {
        match self {
            CostFunction::Table(t) => t.scope(),
            CostFunction::Global(g) => g.scope(),
        }
    }

    pub fn arity(&self) -> usize {
        self.scope().len()
    }

    pub fn is_global(&self) -> bool {
        matches!(self, CostFunction::Global(_))
    }

    pub fn as_table(&self) -> Option<&TableCostFunction> {
        match self {
            CostFunction::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_global(&self) -> Option<&FlowBasedCostFunction> {
        match self {
            CostFunction::Global(g) => Some(g),
            _ => None,
        }
    }

    pub fn position_in_scope(&self, x: VarId) -> Option<usize> {
        self.scope().iter().position(|&y| y == x)
    }
}

#[derive(Clone, Debug)]
enum Saved {
    Var(VarId, Variable, usize),
    Function(FnId, CostFunction, usize),
}

#[derive(Clone, Debug, Default)]
struct Trail {
    marks: Vec<(usize, Cost)>,
    saved: Vec<Saved>,
    var_stamp: Vec<usize>,
    fn_stamp: Vec<usize>,
}

/// A weighted constraint network.
#[derive(Clone, Debug)]
pub struct Wcsp {
    name: String,
    seed: Option<u64>,
    top: Cost,
    w_zero: Cost,
    vars: Vec<Variable>,
    functions: Vec<CostFunction>,
    var_functions: Vec<Vec<FnId>>,
    trail: Trail,
}

impl Wcsp {
    pub fn new(name: impl Into<String>, top: Cost) -> Self {
        Wcsp {
            name: name.into(),
            seed: None,
            top,
            w_zero: Cost::ZERO,
            vars: Vec::new(),
            functions: Vec::new(),
            var_functions: Vec::new(),
            trail: Trail::default(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn set_seed(&mut self, seed: Option<u64>) {
        self.seed = seed;
    }

    pub fn add_variable(
        &mut self,
        name: impl Into<String>,
        values: Vec<Value>,
    ) -> Result<VarId, ModelError> {
        let name = name.into();
        let distinct: BTreeSet<Value> = values.iter().copied().collect();
        if distinct.len() != values.len() {
            return Err(ModelError::RepeatedValue(name));
        }
        self.vars.push(Variable::new(name, values));
        self.var_functions.push(Vec::new());
        self.trail.var_stamp.push(0);
        Ok(self.vars.len() - 1)
    }

    fn check_var(&self, x: VarId) -> Result<(), ModelError> {
        if x < self.vars.len() {
            Ok(())
        } else {
            Err(ModelError::UnknownVariable(x))
        }
    }

    pub fn set_unary(&mut self, x: VarId, costs: Vec<Cost>) -> Result<(), ModelError> {
        self.check_var(x)?;
        let expected = self.vars[x].values.len();
        if costs.len() != expected {
            return Err(ModelError::Length {
                expected,
                got: costs.len(),
            });
        }
        self.touch_var(x);
        self.vars[x].unary = costs;
        Ok(())
    }

    pub fn set_w_zero(&mut self, c: Cost) {
        self.w_zero = c;
    }

    /// Domains of the given variables, as needed by global builders.
    pub fn domains_of(&self, scope: &[VarId]) -> Vec<Vec<Value>> {
        scope.iter().map(|&x| self.vars[x].values.clone()).collect()
    }

    pub fn add_table(&mut self, table: TableCostFunction) -> Result<FnId, ModelError> {
        for (&x, &n) in table.scope().iter().zip(table.sizes()) {
            self.check_var(x)?;
            if self.vars[x].values.len() != n {
                return Err(ModelError::TableShape);
            }
        }
        Ok(self.push_function(CostFunction::Table(table)))
    }

    pub fn add_global(&mut self, g: FlowBasedCostFunction) -> Result<FnId, ModelError> {
        for (&x, dom) in g.scope().iter().zip(g.domains()) {
            self.check_var(x)?;
            if &self.vars[x].values != dom {
                return Err(ModelError::GlobalShape);
            }
        }
        Ok(self.push_function(CostFunction::Global(Box::new(g))))
    }

    fn push_function(&mut self, f: CostFunction) -> FnId {
        let id = self.functions.len();
        for &x in f.scope() {
            if !self.var_functions[x].contains(&id) {
                self.var_functions[x].push(id);
            }
        }
        self.functions.push(f);
        self.trail.fn_stamp.push(0);
        id
    }

    pub fn top(&self) -> Cost {
        self.top
    }

    /// Lowers (or sets) the forbidden cost. Stored costs are not touched.
    pub fn set_top(&mut self, top: Cost) {
        self.top = top;
    }

    pub fn w_zero(&self) -> Cost {
        self.w_zero.clamp_top(self.top)
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var(&self, x: VarId) -> &Variable {
        &self.vars[x]
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn functions(&self) -> &[CostFunction] {
        &self.functions
    }

    pub fn function(&self, f: FnId) -> &CostFunction {
        &self.functions[f]
    }

    pub fn functions_of(&self, x: VarId) -> &[FnId] {
        &self.var_functions[x]
    }

    /// Variables sharing a cost function with `x`, excluding `x`.
    pub fn neighbors(&self, x: VarId) -> BTreeSet<VarId> {
        self.var_functions[x]
            .iter()
            .flat_map(|&f| self.functions[f].scope().iter().copied())
            .filter(|&y| y != x)
            .collect()
    }

    /// Number of complete tuples over the current domains.
    pub fn search_space_size(&self) -> f64 {
        self.vars.iter().map(|v| v.size as f64).product()
    }

    // ---- evaluation ----

    /// Current cost of a scope tuple given as domain positions.
    pub fn function_value(&self, f: FnId, positions: &[usize]) -> Cost {
        match &self.functions[f] {
            CostFunction::Table(t) => t.get(positions).clamp_top(self.top),
            CostFunction::Global(g) => g.value_at(positions, self.top),
        }
    }

    /// Cost of a complete tuple of domain positions.
    pub fn evaluate_positions(&self, tuple: &[usize]) -> Cost {
        let top = self.top;
        let mut total = self.w_zero();
        for (x, &p) in tuple.iter().enumerate() {
            total = oplus(total, self.vars[x].unary[p], top);
        }
        let mut scratch = Vec::new();
        for f in 0..self.functions.len() {
            if total.is_top(top) {
                return top;
            }
            scratch.clear();
            scratch.extend(self.functions[f].scope().iter().map(|&x| tuple[x]));
            total = oplus(total, self.function_value(f, &scratch), top);
        }
        total
    }

    /// Cost of a complete assignment given as one value per variable.
    pub fn evaluate_tuple(&self, values: &[Value]) -> Result<Cost, ModelError> {
        Ok(self.evaluate_positions(&self.positions_of(values)?))
    }

    pub fn positions_of(&self, values: &[Value]) -> Result<Vec<usize>, ModelError> {
        if values.len() != self.vars.len() {
            return Err(ModelError::Length {
                expected: self.vars.len(),
                got: values.len(),
            });
        }
        values
            .iter()
            .enumerate()
            .map(|(x, &v)| {
                self.vars[x]
                    .position_of(v)
                    .ok_or(ModelError::UnknownValue { var: x, value: v })
            })
            .collect()
    }

    /// Minimum of a function over the current domains.
    pub fn min_cost(&self, f: FnId) -> Cost {
        match &self.functions[f] {
            CostFunction::Table(t) => t.min_live(&self.vars, None, self.top),
            CostFunction::Global(g) => g.min_cost(self.top),
        }
    }

    /// For each value of scope variable `k` of `f`, the minimum of `f`
    /// over live tuples using it. Dead values read as top.
    pub fn min_cost_given_all(&self, f: FnId, k: usize) -> Vec<Cost> {
        let x = self.functions[f].scope()[k];
        let var = &self.vars[x];
        match &self.functions[f] {
            CostFunction::Table(t) => (0..var.values.len())
                .map(|p| {
                    if var.live[p] {
                        t.min_live(&self.vars, Some((k, p)), self.top)
                    } else {
                        self.top
                    }
                })
                .collect(),
            CostFunction::Global(g) => g.min_cost_given_all(k, self.top),
        }
    }

    pub fn min_cost_given(&self, f: FnId, k: usize, p: usize) -> Cost {
        match &self.functions[f] {
            CostFunction::Table(t) => t.min_live(&self.vars, Some((k, p)), self.top),
            CostFunction::Global(g) => g.min_cost_given(k, p, self.top),
        }
    }

    // ---- trail ----

    pub fn depth(&self) -> usize {
        self.trail.marks.len()
    }

    pub fn push_state(&mut self) {
        self.trail.marks.push((self.trail.saved.len(), self.w_zero));
    }

    pub fn pop_state(&mut self) -> Result<(), ModelError> {
        let (len, w_zero) = self.trail.marks.pop().ok_or(ModelError::UnbalancedPop)?;
        while self.trail.saved.len() > len {
            match self.trail.saved.pop().expect("trail entry") {
                Saved::Var(x, v, stamp) => {
                    self.vars[x] = v;
                    self.trail.var_stamp[x] = stamp;
                }
                Saved::Function(f, c, stamp) => {
                    self.functions[f] = c;
                    self.trail.fn_stamp[f] = stamp;
                }
            }
        }
        self.w_zero = w_zero;
        Ok(())
    }

    fn touch_var(&mut self, x: VarId) {
        let d = self.trail.marks.len();
        if d > 0 && self.trail.var_stamp[x] != d {
            let old = self.trail.var_stamp[x];
            self.trail
                .saved
                .push(Saved::Var(x, self.vars[x].clone(), old));
            self.trail.var_stamp[x] = d;
        }
    }

    fn touch_fn(&mut self, f: FnId) {
        let d = self.trail.marks.len();
        if d > 0 && self.trail.fn_stamp[f] != d {
            let old = self.trail.fn_stamp[f];
            self.trail
                .saved
                .push(Saved::Function(f, self.functions[f].clone(), old));
            self.trail.fn_stamp[f] = d;
        }
    }

    // ---- cost moves ----

    pub fn add_w_zero(&mut self, alpha: Cost) {
        self.w_zero = oplus(self.w_zero, alpha, self.top);
    }

    /// Removes value `p` from the domain of `x` and from every global
    /// function network over `x`.
    pub fn remove_value(&mut self, x: VarId, p: usize) -> Result<(), Contradiction> {
        if !self.vars[x].live[p] {
            return Ok(());
        }
        self.touch_var(x);
        self.vars[x].live[p] = false;
        self.vars[x].size -= 1;
        let mut result = Ok(());
        for i in 0..self.var_functions[x].len() {
            let f = self.var_functions[x][i];
            if self.functions[f].is_global() {
                self.touch_fn(f);
                let k = self.functions[f].position_in_scope(x).expect("scope");
                if let CostFunction::Global(g) = &mut self.functions[f] {
                    if !g.suspend(k, p) && result.is_ok() {
                        result = Err(Contradiction::Infeasible(f));
                    }
                }
            }
        }
        if self.vars[x].size == 0 {
            return Err(Contradiction::Wipeout(x));
        }
        result
    }

    /// Reduces the domain of `x` to the single position `p`.
    pub fn assign(&mut self, x: VarId, p: usize) -> Result<(), Contradiction> {
        for q in 0..self.vars[x].values.len() {
            if q != p {
                self.remove_value(x, q)?;
            }
        }
        Ok(())
    }

    /// Moves the smallest live unary cost of `x` into the lower bound.
    pub fn unary_project(&mut self, x: VarId) -> Cost {
        let top = self.top;
        let alpha = self.vars[x]
            .live_positions()
            .map(|p| self.vars[x].unary[p].clamp_top(top))
            .min()
            .unwrap_or(Cost::ZERO);
        if alpha > Cost::ZERO {
            self.touch_var(x);
            for c in &mut self.vars[x].unary {
                *c = ominus(*c, alpha, top).unwrap_or(Cost::ZERO);
            }
            self.add_w_zero(alpha);
        }
        alpha
    }

    /// Moves per-value amounts from `f` onto the unary costs of its `k`-th
    /// scope variable. Each amount must not exceed the matching column
    /// minimum; amounts at or above top just forbid the value.
    pub(crate) fn project_many(&mut self, f: FnId, k: usize, amounts: &[(usize, Cost)]) {
        let top = self.top;
        let x = self.functions[f].scope()[k];
        let moves: Vec<(usize, Cost)> = amounts
            .iter()
            .copied()
            .filter(|&(_, a)| a > Cost::ZERO)
            .collect();
        if moves.is_empty() {
            return;
        }
        self.touch_var(x);
        for &(p, a) in &moves {
            self.vars[x].unary[p] = oplus(self.vars[x].unary[p], a, top);
        }
        let finite: Vec<(usize, Cost)> =
            moves.into_iter().filter(|&(_, a)| !a.is_top(top)).collect();
        if finite.is_empty() {
            return;
        }
        self.touch_fn(f);
        match &mut self.functions[f] {
            CostFunction::Table(t) => {
                for &(p, a) in &finite {
                    t.project(k, p, a, top);
                }
            }
            CostFunction::Global(g) => {
                let shift: Vec<(usize, i64)> =
                    finite.iter().map(|&(p, a)| (p, -(a.0 as i64))).collect();
                g.shift_unary(k, &shift);
            }
        }
    }

    /// Moves per-value unary costs of the `k`-th scope variable into `f`.
    pub(crate) fn extend_many(&mut self, f: FnId, k: usize, amounts: &[(usize, Cost)]) {
        let top = self.top;
        let x = self.functions[f].scope()[k];
        let moves: Vec<(usize, Cost)> = amounts
            .iter()
            .copied()
            .filter(|&(_, a)| a > Cost::ZERO && !a.is_top(top))
            .collect();
        if moves.is_empty() {
            return;
        }
        self.touch_var(x);
        self.touch_fn(f);
        for &(p, a) in &moves {
            let u = self.vars[x].unary[p];
            self.vars[x].unary[p] = ominus(u, a, top).unwrap_or(Cost::ZERO);
        }
        match &mut self.functions[f] {
            CostFunction::Table(t) => {
                for &(p, a) in &moves {
                    t.extend(k, p, a, top);
                }
            }
            CostFunction::Global(g) => {
                let shift: Vec<(usize, i64)> =
                    moves.iter().map(|&(p, a)| (p, a.0 as i64)).collect();
                g.shift_unary(k, &shift);
            }
        }
    }

    /// Projects `alpha` from `f` onto `W_x(v)`, checking it is safe.
    pub fn project(&mut self, f: FnId, x: VarId, v: Value, alpha: Cost) -> Result<(), ModelError> {
        let (k, p) = self.locate(f, x, v)?;
        if alpha > self.min_cost_given(f, k, p) {
            return Err(ModelError::TooMuch);
        }
        self.project_many(f, k, &[(p, alpha)]);
        Ok(())
    }

    /// Extends `alpha` from `W_x(v)` into `f`, checking it is available.
    pub fn extend(&mut self, f: FnId, x: VarId, v: Value, alpha: Cost) -> Result<(), ModelError> {
        let (k, p) = self.locate(f, x, v)?;
        if alpha > self.vars[x].unary[p] || alpha.is_top(self.top) {
            return Err(ModelError::TooMuch);
        }
        self.extend_many(f, k, &[(p, alpha)]);
        Ok(())
    }

    fn locate(&self, f: FnId, x: VarId, v: Value) -> Result<(usize, usize), ModelError> {
        self.check_var(x)?;
        let k = self.functions[f]
            .position_in_scope(x)
            .ok_or(ModelError::UnknownVariable(x))?;
        let p = self.vars[x]
            .position_of(v)
            .ok_or(ModelError::UnknownValue { var: x, value: v })?;
        Ok((k, p))
    }

    /// Moves a constant from `f` into the lower bound.
    pub fn project_constant(&mut self, f: FnId, alpha: Cost) {
        if alpha == Cost::ZERO {
            return;
        }
        let top = self.top;
        if !alpha.is_top(top) {
            self.touch_fn(f);
            match &mut self.functions[f] {
                CostFunction::Table(t) => t.subtract_all(alpha, top),
                CostFunction::Global(g) => g.subtract_constant(alpha.0 as i64),
            }
        }
        self.add_w_zero(alpha);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vars() -> Wcsp {
        let mut w = Wcsp::new("t", Cost(10));
        let a = w.add_variable("a", vec![0, 1]).unwrap();
        let b = w.add_variable("b", vec![0, 1]).unwrap();
        w.set_unary(a, vec![Cost(1), Cost(3)]).unwrap();
        let mut t = TableCostFunction::new(vec![a, b], vec![2, 2], Cost::ZERO);
        t.set(&[0, 0], Cost(4));
        t.set(&[0, 1], Cost(5));
        w.add_table(t).unwrap();
        w
    }

    #[test]
    fn evaluation_sums_terms() {
        let w = two_vars();
        assert_eq!(w.evaluate_tuple(&[0, 0]).unwrap(), Cost(5));
        assert_eq!(w.evaluate_tuple(&[0, 1]).unwrap(), Cost(6));
        assert_eq!(w.evaluate_tuple(&[1, 1]).unwrap(), Cost(3));
    }

    #[test]
    fn trail_restores_everything() {
        let mut w = two_vars();
        w.push_state();
        w.project(0, 1, 0, Cost(4)).unwrap_err();
        w.project(0, 0, 0, Cost(4)).unwrap();
        w.remove_value(1, 1).unwrap();
        w.unary_project(0);
        assert_eq!(w.w_zero(), Cost(3));
        w.pop_state().unwrap();
        assert_eq!(w.w_zero(), Cost::ZERO);
        assert!(w.var(1).is_live(1));
        assert_eq!(w.var(0).unary(0), Cost(1));
        assert_eq!(w.function_value(0, &[0, 0]), Cost(4));
        assert_eq!(w.pop_state(), Err(ModelError::UnbalancedPop));
    }
}
