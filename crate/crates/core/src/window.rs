use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed integer interval `[lo, hi]` over which exhaustive checks run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// `[-r, r]`.
    pub fn symmetric(r: u32) -> Self {
        Self {
            lo: -i64::from(r),
            hi: i64::from(r),
        }
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn len(&self) -> u64 {
        (i128::from(self.hi) - i128::from(self.lo) + 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// Widens both ends by `margin`.
    pub fn enlarged(&self, margin: i64) -> Result<Self> {
        let lo = self.lo.checked_sub(margin);
        let hi = self.hi.checked_add(margin);
        match (lo, hi) {
            (Some(lo), Some(hi)) => Window::new(lo, hi),
            _ => Err(Error::Overflow(format!("enlarging {self:?} by {margin}"))),
        }
    }
}

/// A (possibly infinite) set of integers given by a membership test.
pub trait IntegerSet {
    fn contains(&self, n: &BigInt) -> bool;

    /// All members, when the set is known to be finite.
    fn finite_members(&self) -> Option<Vec<BigInt>> {
        None
    }
}

impl<S: IntegerSet + ?Sized> IntegerSet for &S {
    fn contains(&self, n: &BigInt) -> bool {
        (**self).contains(n)
    }

    fn finite_members(&self) -> Option<Vec<BigInt>> {
        (**self).finite_members()
    }
}

/// The whole group `Z`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AllIntegers;

impl IntegerSet for AllIntegers {
    fn contains(&self, _: &BigInt) -> bool {
        true
    }
}

/// An explicit finite set.
#[derive(Debug, Clone, Default)]
pub struct ExplicitSet(pub std::collections::BTreeSet<BigInt>);

impl ExplicitSet {
    pub fn from_values<I: IntoIterator<Item = i64>>(values: I) -> Self {
        Self(values.into_iter().map(BigInt::from).collect())
    }
}

impl IntegerSet for ExplicitSet {
    fn contains(&self, n: &BigInt) -> bool {
        self.0.contains(n)
    }

    fn finite_members(&self) -> Option<Vec<BigInt>> {
        Some(self.0.iter().cloned().collect())
    }
}

/// Membership given by a predicate.
pub struct PredicateSet<F>(pub F);

impl<F: Fn(&BigInt) -> bool> IntegerSet for PredicateSet<F> {
    fn contains(&self, n: &BigInt) -> bool {
        (self.0)(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_validation() {
        assert!(Window::new(3, 2).is_err());
        let w = Window::new(-2, 2).unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.iter().collect::<Vec<_>>(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(w.enlarged(3).unwrap(), Window::new(-5, 5).unwrap());
        assert!(Window::new(i64::MIN, 0).unwrap().enlarged(1).is_err());
        assert_eq!(Window::symmetric(7), Window::new(-7, 7).unwrap());
    }
}
