//! Index arithmetic for basis labels: integers and half-integers (ℤ or
//! ℤ + 1/2), plus contiguous windows of either kind.

use crate::scalar::{ParseScalarError, Rational};
use num_traits::One;
use std::fmt;
use std::str::FromStr;

/// An index in ℤ ∪ (ℤ + 1/2), stored as its double so arithmetic stays in
/// integers. Indices of different parity never mix inside one window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfIndex {
    doubled: i64,
}

impl HalfIndex {
    pub fn from_int(n: i64) -> Self {
        HalfIndex { doubled: 2 * n }
    }

    /// The half-integer `n + 1/2`.
    pub fn half(n: i64) -> Self {
        HalfIndex { doubled: 2 * n + 1 }
    }

    pub fn from_doubled(doubled: i64) -> Self {
        HalfIndex { doubled }
    }

    pub fn doubled(self) -> i64 {
        self.doubled
    }

    pub fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    /// 0 for integer indices, 1 for half-integers.
    pub fn parity(self) -> u8 {
        (self.doubled.rem_euclid(2)) as u8
    }

    pub fn as_int(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.doubled / 2)
        } else {
            None
        }
    }

    /// Shift by an integer amount; the parity class is preserved.
    pub fn shift(self, by: i64) -> Self {
        HalfIndex { doubled: self.doubled + 2 * by }
    }

    /// Integer offset to `other` within the same parity class.
    pub fn offset_to(self, other: HalfIndex) -> i64 {
        debug_assert_eq!(self.parity(), other.parity(), "offset across parity classes");
        (other.doubled - self.doubled) / 2
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(self.doubled, 2).expect("constant denominator")
    }

    pub fn to_f64(self) -> f64 {
        self.doubled as f64 / 2.0
    }
}

impl fmt::Display for HalfIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl FromStr for HalfIndex {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r: Rational = s.parse()?;
        let as_err = || ParseScalarError {
            literal: s.to_string(),
            reason: "index must be an integer or half-integer".to_string(),
        };
        let doubled = &r + &r;
        if !doubled.denom().is_one() {
            return Err(as_err());
        }
        let d: i64 = doubled.numer().try_into().map_err(|_| as_err())?;
        Ok(HalfIndex::from_doubled(d))
    }
}

/// A nonempty contiguous index window `{lo, lo+1, …, hi}` inside one parity
/// class (all integers, or all half-integers).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexWindow {
    lo: HalfIndex,
    hi: HalfIndex,
}

/// Error from constructing or shrinking an index window.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WindowError {
    #[error("window bounds {0} and {1} lie in different parity classes")]
    MixedParity(HalfIndex, HalfIndex),
    #[error("window {{{0}..{1}}} is empty")]
    Empty(HalfIndex, HalfIndex),
}

impl IndexWindow {
    pub fn new(lo: HalfIndex, hi: HalfIndex) -> Result<Self, WindowError> {
        if lo.parity() != hi.parity() {
            return Err(WindowError::MixedParity(lo, hi));
        }
        if lo > hi {
            return Err(WindowError::Empty(lo, hi));
        }
        Ok(IndexWindow { lo, hi })
    }

    /// Integer window `{lo..hi}`.
    pub fn integers(lo: i64, hi: i64) -> Self {
        IndexWindow::new(HalfIndex::from_int(lo), HalfIndex::from_int(hi))
            .expect("integer window bounds")
    }

    /// Half-integer window `{lo+1/2 .. hi+1/2}`.
    pub fn half_integers(lo: i64, hi: i64) -> Self {
        IndexWindow::new(HalfIndex::half(lo), HalfIndex::half(hi))
            .expect("half-integer window bounds")
    }

    /// `{1..n}`, the window used by the sine-basis families.
    pub fn positive(n: i64) -> Self {
        IndexWindow::integers(1, n)
    }

    /// Integer or half-integer window of the parity `shift` ∈ {0, 1} whose
    /// members lie in `[lo, hi]` (bounds given as integers).
    pub fn with_parity(lo: i64, hi: i64, shift: u8) -> Result<Self, WindowError> {
        if shift == 0 {
            IndexWindow::new(HalfIndex::from_int(lo), HalfIndex::from_int(hi))
        } else {
            IndexWindow::new(HalfIndex::half(lo), HalfIndex::half(hi - 1))
        }
    }

    pub fn lo(&self) -> HalfIndex {
        self.lo
    }

    pub fn hi(&self) -> HalfIndex {
        self.hi
    }

    pub fn parity(&self) -> u8 {
        self.lo.parity()
    }

    pub fn len(&self) -> usize {
        ((self.hi.doubled() - self.lo.doubled()) / 2 + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn contains(&self, idx: HalfIndex) -> bool {
        idx.parity() == self.parity() && self.lo <= idx && idx <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = HalfIndex> + '_ {
        let lo = self.lo.doubled();
        let hi = self.hi.doubled();
        (lo..=hi).step_by(2).map(HalfIndex::from_doubled)
    }

    /// Position of `idx` within the window (0-based), if contained.
    pub fn position(&self, idx: HalfIndex) -> Option<usize> {
        if self.contains(idx) {
            Some(((idx.doubled() - self.lo.doubled()) / 2) as usize)
        } else {
            None
        }
    }

    /// Index at 0-based position `pos`.
    pub fn at(&self, pos: usize) -> HalfIndex {
        debug_assert!(pos < self.len());
        HalfIndex::from_doubled(self.lo.doubled() + 2 * pos as i64)
    }

    /// Shrinks both ends by `margin` steps; `None` once nothing remains.
    pub fn shrink(&self, margin: u64) -> Option<IndexWindow> {
        let lo = self.lo.shift(margin as i64);
        let hi = self.hi.shift(-(margin as i64));
        if lo > hi {
            None
        } else {
            Some(IndexWindow { lo, hi })
        }
    }
}

impl fmt::Display for IndexWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}..{}}}", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn integer_window_basics() {
        let w = IndexWindow::integers(-3, 3);
        assert_eq!(w.len(), 7);
        assert!(w.contains(HalfIndex::from_int(0)));
        assert!(!w.contains(HalfIndex::half(0)));
        assert_eq!(w.to_string(), "{-3..3}");
        let members: Vec<i64> = w.iter().map(|i| i.as_int().unwrap()).collect();
        assert_eq!(members, vec![-3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn half_integer_window_basics() {
        let w = IndexWindow::half_integers(-2, 1);
        // {-3/2, -1/2, 1/2, 3/2}
        assert_eq!(w.len(), 4);
        assert!(w.contains(HalfIndex::half(0)));
        assert!(!w.contains(HalfIndex::from_int(1)));
        assert_eq!(w.to_string(), "{-3/2..3/2}");
    }

    #[test]
    fn mixed_parity_rejected() {
        let r = IndexWindow::new(HalfIndex::from_int(0), HalfIndex::half(3));
        assert!(matches!(r, Err(WindowError::MixedParity(_, _))));
    }

    #[test]
    fn shrink_to_empty() {
        let w = IndexWindow::integers(-2, 2);
        assert_eq!(w.shrink(2), Some(IndexWindow::integers(0, 0)));
        assert_eq!(w.shrink(3), None);
    }

    #[test]
    fn index_display_and_parse() {
        for s in ["0", "7", "-4", "3/2", "-3/2", "1/2"] {
            let i: HalfIndex = s.parse().unwrap();
            assert_eq!(i.to_string(), s);
        }
        assert!("1/3".parse::<HalfIndex>().is_err());
    }

    proptest! {
        #[test]
        fn shift_round_trip(n in -100i64..100, by in -50i64..50, half in proptest::bool::ANY) {
            let base = if half { HalfIndex::half(n) } else { HalfIndex::from_int(n) };
            let moved = base.shift(by);
            prop_assert_eq!(moved.parity(), base.parity());
            prop_assert_eq!(base.offset_to(moved), by);
            prop_assert_eq!(moved.shift(-by), base);
        }

        #[test]
        fn window_position_round_trip(lo in -20i64..20, extra in 0i64..20, half in proptest::bool::ANY) {
            let w = if half {
                IndexWindow::half_integers(lo, lo + extra)
            } else {
                IndexWindow::integers(lo, lo + extra)
            };
            for (pos, idx) in w.iter().enumerate() {
                prop_assert_eq!(w.position(idx), Some(pos));
                prop_assert_eq!(w.at(pos), idx);
            }
        }
    }
}
