use crate::cost::Cost;
use crate::model::{VarId, Variable};

/// Extensional cost function over a fixed scope, stored densely.
///
/// Tuples are addressed by domain positions of the scope variables, in
/// the order of the original domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableCostFunction {
    scope: Vec<VarId>,
    sizes: Vec<usize>,
    strides: Vec<usize>,
    costs: Vec<Cost>,
}

impl TableCostFunction {
    pub fn new(scope: Vec<VarId>, sizes: Vec<usize>, default: Cost) -> Self {
        assert_eq!(scope.len(), sizes.len());
        let mut strides = vec![1; sizes.len()];
        for k in (0..sizes.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * sizes[k + 1];
        }
        let total = sizes.iter().product();
        TableCostFunction {
            scope,
            sizes,
            strides,
            costs: vec![default; total],
        }
    }

    pub fn scope(&self) -> &[VarId] {
        &self.scope
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    fn index(&self, positions: &[usize]) -> usize {
        positions
            .iter()
            .zip(&self.strides)
            .map(|(p, s)| p * s)
            .sum()
    }

    pub fn get(&self, positions: &[usize]) -> Cost {
        self.costs[self.index(positions)]
    }

    pub fn set(&mut self, positions: &[usize], c: Cost) {
        let i = self.index(positions);
        self.costs[i] = c;
    }

    /// Every stored entry together with its tuple of positions.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, Cost)> + '_ {
        (0..self.costs.len()).map(move |i| (self.decode(i), self.costs[i]))
    }

    fn decode(&self, mut i: usize) -> Vec<usize> {
        let mut t = vec![0; self.sizes.len()];
        for k in 0..self.sizes.len() {
            t[k] = i / self.strides[k];
            i %= self.strides[k];
        }
        t
    }

    /// Visits each tuple of live values, optionally with scope variable
    /// `k` fixed to position `p`.
    pub fn for_each_live(
        &self,
        vars: &[Variable],
        fixed: Option<(usize, usize)>,
        f: &mut dyn FnMut(&[usize], Cost),
    ) {
        let choices: Vec<Vec<usize>> = self
            .scope
            .iter()
            .enumerate()
            .map(|(k, &x)| match fixed {
                Some((fk, fp)) if fk == k => vec![fp],
                _ => vars[x].live_positions().collect(),
            })
            .collect();
        if choices.iter().any(|c| c.is_empty()) {
            return;
        }
        let mut idx = vec![0usize; choices.len()];
        let mut tuple: Vec<usize> = choices.iter().map(|c| c[0]).collect();
        loop {
            f(&tuple, self.get(&tuple));
            let mut k = choices.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    tuple[k] = choices[k][idx[k]];
                    break;
                }
                idx[k] = 0;
                tuple[k] = choices[k][0];
            }
        }
    }

    /// Minimum over live tuples, with `k` fixed to `p` when given.
    pub fn min_live(&self, vars: &[Variable], fixed: Option<(usize, usize)>, top: Cost) -> Cost {
        let mut best = top;
        self.for_each_live(vars, fixed, &mut |_, c| {
            if c < best {
                best = c;
            }
        });
        best.clamp_top(top)
    }

    fn update_where(&mut self, k: usize, p: usize, op: impl Fn(Cost) -> Cost) {
        for i in 0..self.costs.len() {
            if (i / self.strides[k]) % self.sizes[k] == p {
                self.costs[i] = op(self.costs[i]);
            }
        }
    }

    /// Subtracts `alpha` from all finite entries whose `k`-th position is
    /// `p`. Entries of dead tuples that fall below `alpha` go to zero.
    pub fn project(&mut self, k: usize, p: usize, alpha: Cost, top: Cost) {
        self.update_where(k, p, |c| {
            if c.is_top(top) {
                c
            } else {
                Cost(c.0.saturating_sub(alpha.0))
            }
        });
    }

    /// Adds `alpha` to all entries whose `k`-th position is `p`.
    pub fn extend(&mut self, k: usize, p: usize, alpha: Cost, top: Cost) {
        self.update_where(k, p, |c| crate::cost::oplus(c, alpha, top));
    }

    /// Subtracts `alpha` from every finite entry.
    pub fn subtract_all(&mut self, alpha: Cost, top: Cost) {
        for c in &mut self.costs {
            if !c.is_top(top) {
                *c = Cost(c.0.saturating_sub(alpha.0));
            }
        }
    }
}
