use std::fmt;

use num_traits::{One, Zero};

use super::rational::{fmt_rat, max_r, min_r, Rational};
use crate::error::{Error, Result};

/// A finite union of disjoint half-open intervals `[a, b) ⊆ [0, 1]`, kept sorted
/// with touching intervals merged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Region {
    intervals: Vec<(Rational, Rational)>,
}

impl Region {
    /// Rejects overlapping or out-of-range intervals. Touching intervals are merged.
    pub fn new(mut intervals: Vec<(Rational, Rational)>) -> Result<Self> {
        for (a, b) in &intervals {
            if a >= b {
                return Err(Error::BadRegion(format!("empty interval [{}, {})", fmt_rat(a), fmt_rat(b))));
            }
            if *a < Rational::zero() || *b > Rational::one() {
                return Err(Error::BadRegion(format!(
                    "interval [{}, {}) leaves [0, 1]",
                    fmt_rat(a),
                    fmt_rat(b)
                )));
            }
        }
        intervals.sort();
        for w in intervals.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(Error::BadRegion(format!(
                    "intervals [{}, {}) and [{}, {}) overlap",
                    fmt_rat(&w[0].0),
                    fmt_rat(&w[0].1),
                    fmt_rat(&w[1].0),
                    fmt_rat(&w[1].1)
                )));
            }
        }
        Ok(Self::from_sorted(intervals))
    }

    // Sorted, non-overlapping input; merges touching neighbours and drops empties.
    pub(crate) fn from_sorted(intervals: Vec<(Rational, Rational)>) -> Self {
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            if a >= b {
                continue;
            }
            if let Some(last) = out.last_mut() {
                if last.1 >= a {
                    if b > last.1 {
                        last.1 = b;
                    }
                    continue;
                }
            }
            out.push((a, b));
        }
        Region { intervals: out }
    }

    pub fn empty() -> Self {
        Region::default()
    }

    pub fn unit() -> Self {
        Region { intervals: vec![(Rational::zero(), Rational::one())] }
    }

    pub fn interval(a: Rational, b: Rational) -> Result<Self> {
        Region::new(vec![(a, b)])
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.intervals.iter().any(|(a, b)| a <= t && t < b)
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a0, a1) = &self.intervals[i];
            let (b0, b1) = &other.intervals[j];
            let lo = max_r(a0, b0);
            let hi = min_r(a1, b1);
            if lo < hi {
                out.push((lo, hi));
            }
            if a1 <= b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Region::from_sorted(out)
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut all: Vec<_> = self.intervals.iter().chain(other.intervals.iter()).cloned().collect();
        all.sort();
        Region::from_sorted(all)
    }

    pub fn complement(&self) -> Region {
        let mut out = Vec::new();
        let mut cursor = Rational::zero();
        for (a, b) in &self.intervals {
            if cursor < *a {
                out.push((cursor.clone(), a.clone()));
            }
            cursor = b.clone();
        }
        if cursor < Rational::one() {
            out.push((cursor, Rational::one()));
        }
        Region::from_sorted(out)
    }
}

impl serde::Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> =
            self.intervals.iter().map(|(a, b)| format!("[{},{})", fmt_rat(a), fmt_rat(b))).collect();
        f.write_str(&parts.join("u"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::rat;

    #[test]
    fn overlapping_intervals_rejected() {
        let r = Region::new(vec![(rat(0, 1), rat(1, 2)), (rat(1, 4), rat(3, 4))]);
        assert!(matches!(r, Err(Error::BadRegion(_))));
    }

    #[test]
    fn touching_intervals_merge() {
        let r = Region::new(vec![(rat(1, 2), rat(1, 1)), (rat(0, 1), rat(1, 2))]).unwrap();
        assert_eq!(r, Region::unit());
    }

    #[test]
    fn set_algebra() {
        let a = Region::interval(rat(0, 1), rat(1, 2)).unwrap();
        let b = Region::interval(rat(1, 4), rat(1, 1)).unwrap();
        assert_eq!(a.intersect(&b).measure(), rat(1, 4));
        assert_eq!(a.union(&b), Region::unit());
        assert_eq!(a.complement(), Region::interval(rat(1, 2), rat(1, 1)).unwrap());
        assert!(a.contains(&rat(0, 1)) && !a.contains(&rat(1, 2)));
    }
}
