//! Bounded cost arithmetic.
//!
//! Costs live in `[0, top]` where `top` is the forbidden cost. Any stored
//! value at or above `top` reads as `top`, so lowering `top` during search
//! never requires rewriting stored costs.

use std::fmt;

/// A non-negative cost. Values at or above the current top are forbidden.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(pub u64);

/// Top used when no upper bound is known.
pub const UNBOUNDED_TOP: Cost = Cost(1 << 40);

impl Cost {
    pub const ZERO: Cost = Cost(0);

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Reads `self` under `top`: anything at or above `top` becomes `top`.
    #[inline]
    pub fn clamp_top(self, top: Cost) -> Cost {
        if self.0 >= top.0 {
            top
        } else {
            self
        }
    }

    #[inline]
    pub fn is_top(self, top: Cost) -> bool {
        self.0 >= top.0
    }

    /// Converts a signed network cost, clamping into `[0, top]`.
    pub fn from_signed(c: i64, top: Cost) -> Cost {
        if c <= 0 {
            Cost::ZERO
        } else {
            Cost(c as u64).clamp_top(top)
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for Cost {
    fn from(v: u64) -> Self {
        Cost(v)
    }
}

/// `a ⊕ b = min(top, a + b)`.
#[inline]
pub fn oplus(a: Cost, b: Cost, top: Cost) -> Cost {
    Cost(a.0.saturating_add(b.0)).clamp_top(top)
}

/// `a ⊖ b`: `a - b` for finite `a`, `top` when `a` is `top`.
///
/// Requires `b <= a`. Returns `None` otherwise.
#[inline]
pub fn ominus(a: Cost, b: Cost, top: Cost) -> Option<Cost> {
    if a.is_top(top) {
        return Some(top);
    }
    if b.0 > a.0 {
        return None;
    }
    Some(Cost(a.0 - b.0))
}

/// Sum of a sequence under `top`.
pub fn oplus_all<I: IntoIterator<Item = Cost>>(costs: I, top: Cost) -> Cost {
    costs
        .into_iter()
        .fold(Cost::ZERO, |acc, c| oplus(acc, c, top))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_absorbs() {
        let top = Cost(5);
        assert_eq!(oplus(Cost(3), Cost(4), top), top);
        assert_eq!(ominus(top, Cost(2), top), Some(top));
        assert_eq!(ominus(Cost(9), Cost(2), top), Some(top));
        assert_eq!(ominus(Cost(3), Cost(4), top), None);
    }

    #[test]
    fn signed_conversion() {
        assert_eq!(Cost::from_signed(-3, Cost(10)), Cost::ZERO);
        assert_eq!(Cost::from_signed(12, Cost(10)), Cost(10));
        assert_eq!(Cost::from_signed(7, Cost(10)), Cost(7));
    }
}
