//! Finite unions of half-open rational intervals inside `[0, 1)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A canonical finite union of half-open intervals `[a, b)` with
/// `0 <= a < b <= 1`.
///
/// Canonical form: sorted, pairwise disjoint, no zero-length pieces, and
/// touching pieces merged. Two sets are equal (mod null sets) iff their
/// canonical forms are equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IntervalSet {
    intervals: Vec<(Rational, Rational)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    /// The whole unit interval `[0, 1)`.
    pub fn unit() -> Self {
        IntervalSet { intervals: vec![(Rational::zero(), Rational::one())] }
    }

    /// Canonicalizes arbitrary pieces. Zero-length pieces are dropped;
    /// reversed or out-of-range pieces are rejected.
    pub fn try_from_intervals<I>(pieces: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let zero = Rational::zero();
        let one = Rational::one();
        let mut v = Vec::new();
        for (lo, hi) in pieces {
            if lo < zero || hi > one || lo > hi {
                return Err(Error::Schema(format!("interval [{lo}, {hi}) is not inside [0, 1)")));
            }
            v.push((lo, hi));
        }
        Ok(Self::canonical(v))
    }

    /// Same as [`IntervalSet::try_from_intervals`] for inputs known to be in range.
    pub fn from_intervals<I>(pieces: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        Self::try_from_intervals(pieces).expect("interval out of range")
    }

    /// Single interval `[lo, hi)`.
    pub fn interval(lo: Rational, hi: Rational) -> Self {
        Self::from_intervals([(lo, hi)])
    }

    fn canonical(mut v: Vec<(Rational, Rational)>) -> Self {
        v.retain(|(lo, hi)| lo < hi);
        v.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(v.len());
        for (lo, hi) in v {
            if let Some(last) = out.last_mut() {
                if lo <= last.1 {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                    continue;
                }
            }
            out.push((lo, hi));
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Lebesgue measure.
    pub fn measure(&self) -> Rational {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = (&a[i].0).max(&b[j].0);
            let hi = (&a[i].1).min(&b[j].1);
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        Self::canonical(self.intervals.iter().chain(other.intervals.iter()).cloned().collect())
    }

    /// `self \ other`.
    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for (lo, hi) in &self.intervals {
            let mut cur = lo.clone();
            for (olo, ohi) in &other.intervals {
                if ohi <= &cur {
                    continue;
                }
                if olo >= hi {
                    break;
                }
                if olo > &cur {
                    out.push((cur.clone(), olo.clone()));
                }
                if ohi > &cur {
                    cur = ohi.clone();
                }
                if &cur >= hi {
                    break;
                }
            }
            if &cur < hi {
                out.push((cur, hi.clone()));
            }
        }
        Self::canonical(out)
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Measure of `self ∩ other` without materializing it.
    pub fn overlap_measure(&self, other: &IntervalSet) -> Rational {
        self.intersection(other).measure()
    }

    pub fn overlaps(&self, other: &IntervalSet) -> bool {
        !self.intersection(other).is_empty()
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        for (k, (lo, hi)) in self.intervals.iter().enumerate() {
            if k > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "[{lo}, {hi})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::r;

    fn set(pieces: &[(i64, i64, i64, i64)]) -> IntervalSet {
        IntervalSet::from_intervals(pieces.iter().map(|&(a, b, c, d)| (r(a, b), r(c, d))))
    }

    #[test]
    fn canonical_merges_and_drops() {
        let s = set(&[(1, 2, 3, 4), (0, 1, 1, 4), (1, 4, 1, 2), (3, 4, 3, 4)]);
        assert_eq!(s, set(&[(0, 1, 3, 4)]));
        assert_eq!(s.measure(), r(3, 4));
        let overlapping = set(&[(0, 1, 1, 2), (1, 4, 3, 4)]);
        assert_eq!(overlapping, set(&[(0, 1, 3, 4)]));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(IntervalSet::try_from_intervals([(r(-1, 2), r(1, 2))]).is_err());
        assert!(IntervalSet::try_from_intervals([(r(1, 2), r(3, 2))]).is_err());
        assert!(IntervalSet::try_from_intervals([(r(3, 4), r(1, 4))]).is_err());
    }

    #[test]
    fn set_algebra() {
        let a = set(&[(0, 1, 1, 2), (3, 4, 1, 1)]);
        let b = set(&[(1, 4, 7, 8)]);
        assert_eq!(a.intersection(&b), set(&[(1, 4, 1, 2), (3, 4, 7, 8)]));
        assert_eq!(a.difference(&b), set(&[(0, 1, 1, 4), (7, 8, 1, 1)]));
        assert_eq!(b.difference(&a), set(&[(1, 2, 3, 4)]));
        assert_eq!(a.union(&b), IntervalSet::unit());
        assert!(set(&[(1, 4, 1, 2)]).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert!(IntervalSet::empty().is_subset(&a));
    }

    #[test]
    fn difference_with_many_holes() {
        let a = IntervalSet::unit();
        let b = set(&[(1, 8, 1, 4), (1, 2, 5, 8), (7, 8, 1, 1)]);
        assert_eq!(a.difference(&b), set(&[(0, 1, 1, 8), (1, 4, 1, 2), (5, 8, 7, 8)]));
        assert_eq!(a.difference(&b).measure() + b.measure(), r(1, 1));
    }
}
