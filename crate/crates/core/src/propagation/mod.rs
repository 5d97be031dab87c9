//! Soft local consistencies over mixed table and flow-based functions.
//!
//! Every enforcement procedure is an equivalence-preserving sequence of
//! projections, extensions and value removals on a [`Wcsp`]. They share
//! the propagation queues in [`Queues`]; callers that only changed a few
//! variables can seed the queues with those and run incrementally.

mod edgac;
mod gac;
mod nc;
mod partition;
pub mod verify;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::model::{Contradiction, VarId, Wcsp};

pub use edgac::{enforce_weak_edgac, find_existential_support};
pub use gac::{enforce_fdgac, enforce_gac, find_full_support, find_support, FullSupport};
pub use nc::{
    enforce_nc, enforce_strong_zero_ic, enforce_strong_zero_ic_ordered, enforce_zero_ic,
    find_zero_support, prune_val,
};
pub use partition::{find_cost_providing_partition, CostProvidingPartition};
pub use verify::verify_consistency;

/// Consistency level maintained during search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Consistency {
    /// Node consistency only.
    None,
    StrongZeroIc,
    Gac,
    Fdgac,
    WeakEdgac,
}

impl Consistency {
    pub const ALL: [Consistency; 5] = [
        Consistency::None,
        Consistency::StrongZeroIc,
        Consistency::Gac,
        Consistency::Fdgac,
        Consistency::WeakEdgac,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Consistency::None => "none",
            Consistency::StrongZeroIc => "soic",
            Consistency::Gac => "gac",
            Consistency::Fdgac => "fdgac",
            Consistency::WeakEdgac => "wedgac",
        }
    }
}

impl fmt::Display for Consistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Consistency {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Consistency::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                format!("unknown consistency `{s}` (expected none, soic, gac, fdgac or wedgac)")
            })
    }
}

/// Propagation queues. `q` holds variables whose domains shrank, `r`
/// variables whose unary costs rose, `s` variables to revisit for
/// existential support.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Queues {
    pub q: BTreeSet<VarId>,
    pub r: BTreeSet<VarId>,
    pub s: BTreeSet<VarId>,
}

impl Queues {
    pub fn new() -> Self {
        Self::default()
    }

    /// All three queues holding every variable.
    pub fn full(n: usize) -> Self {
        let all: BTreeSet<VarId> = (0..n).collect();
        Queues {
            q: all.clone(),
            r: all.clone(),
            s: all,
        }
    }

    /// All three queues holding the given variables.
    pub fn touched(vars: &[VarId]) -> Self {
        let set: BTreeSet<VarId> = vars.iter().copied().collect();
        Queues {
            q: set.clone(),
            r: set.clone(),
            s: set,
        }
    }

    pub fn push_all(&mut self, x: VarId) {
        self.q.insert(x);
        self.r.insert(x);
        self.s.insert(x);
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty() && self.r.is_empty() && self.s.is_empty()
    }

    pub fn clear(&mut self) {
        self.q.clear();
        self.r.clear();
        self.s.clear();
    }
}

/// Work counters of an enforcement run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PropagationStats {
    /// Iterations of the outermost fixpoint loop.
    pub iterations: u64,
    pub supports: u64,
    pub full_supports: u64,
    pub existential_supports: u64,
    pub removals: u64,
}

/// Maintains one consistency level on a network across many calls.
#[derive(Clone, Debug)]
pub struct Propagator {
    level: Consistency,
    partitions: Vec<CostProvidingPartition>,
    stats: PropagationStats,
    last_top: Option<crate::cost::Cost>,
}

impl Propagator {
    pub fn new(w: &Wcsp, level: Consistency) -> Self {
        let partitions = if level == Consistency::WeakEdgac {
            (0..w.num_vars())
                .map(|x| find_cost_providing_partition(w, x))
                .collect()
        } else {
            Vec::new()
        };
        Propagator {
            level,
            partitions,
            stats: PropagationStats::default(),
            last_top: None,
        }
    }

    pub fn level(&self) -> Consistency {
        self.level
    }

    pub fn stats(&self) -> PropagationStats {
        self.stats
    }

    /// Enforces the level from scratch.
    pub fn enforce_all(&mut self, w: &mut Wcsp) -> Result<(), Contradiction> {
        let mut qs = Queues::full(w.num_vars());
        self.run(w, &mut qs)
    }

    /// Re-enforces after the domains of `touched` changed. Falls back to
    /// full queues when top dropped since the last call.
    pub fn enforce_after(&mut self, w: &mut Wcsp, touched: &[VarId]) -> Result<(), Contradiction> {
        let mut qs = match self.last_top {
            Some(t) if w.top() < t => Queues::full(w.num_vars()),
            _ => Queues::touched(touched),
        };
        self.run(w, &mut qs)
    }

    fn run(&mut self, w: &mut Wcsp, qs: &mut Queues) -> Result<(), Contradiction> {
        self.last_top = Some(w.top());
        let st = &mut self.stats;
        let result = match self.level {
            Consistency::None => enforce_nc(w, qs),
            Consistency::StrongZeroIc => nc::strong_zero_ic_from(w, qs, None, st),
            Consistency::Gac => gac::gac_from(w, qs, st),
            Consistency::Fdgac => gac::fdgac_from(w, qs, st),
            Consistency::WeakEdgac => edgac::weak_edgac_from(w, qs, &self.partitions, st),
        };
        qs.clear();
        result
    }
}

/// Enforces `level` on the whole network.
pub fn enforce(w: &mut Wcsp, level: Consistency) -> Result<PropagationStats, Contradiction> {
    let mut p = Propagator::new(w, level);
    p.enforce_all(w)?;
    Ok(p.stats())
}

pub(crate) fn check_bound(w: &Wcsp) -> Result<(), Contradiction> {
    if w.w_zero().is_top(w.top()) {
        Err(Contradiction::LowerBound)
    } else {
        Ok(())
    }
}

/// Functions over `x`, tables before globals.
pub(crate) fn ordered_functions(w: &Wcsp, x: VarId) -> Vec<usize> {
    let mut fs = w.functions_of(x).to_vec();
    fs.sort_by_key(|&f| (w.function(f).is_global(), f));
    fs
}
