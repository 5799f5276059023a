//! Eventually-affine real sequences indexed from 1.
//!
//! The prefix is stored as maximal affine runs over index ranges, so long constant
//! or affine stretches (block indicators at coordinate 2^4000, `min(z/n, 1)` and the
//! like) cost a handful of rationals rather than one per coordinate.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{big, floor_int, fmt_rat, Rational};
use crate::error::{Error, Result};

/// The affine map `n ↦ slope·n + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Line {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        Line { slope, intercept }
    }

    pub fn constant(c: Rational) -> Self {
        Line { slope: Rational::zero(), intercept: c }
    }

    pub fn at(&self, n: &BigInt) -> Rational {
        if self.slope.is_zero() {
            return self.intercept.clone();
        }
        if self.slope.is_integer() && self.intercept.is_integer() {
            return Rational::from_integer(self.slope.numer() * n + self.intercept.numer());
        }
        &self.slope * big(n) + &self.intercept
    }

    pub fn add(&self, o: &Line) -> Line {
        Line::new(&self.slope + &o.slope, &self.intercept + &o.intercept)
    }

    pub fn sub(&self, o: &Line) -> Line {
        Line::new(&self.slope - &o.slope, &self.intercept - &o.intercept)
    }

    pub fn scale(&self, c: &Rational) -> Line {
        Line::new(&self.slope * c, &self.intercept * c)
    }

    fn through(n: &BigInt, p: &Rational, q: &Rational) -> Line {
        let slope = q - p;
        let intercept = p - &slope * big(n);
        Line::new(slope, intercept)
    }
}

/// Coordinates `start..=end` follow `line`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub start: BigInt,
    pub end: BigInt,
    pub line: Line,
}

impl Segment {
    fn len_is_one(&self) -> bool {
        self.start == self.end
    }
}

/// Shape of the coordinates past the prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    Zero,
    Const(Rational),
    Affine(Rational, Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TailSeq {
    segs: Vec<Segment>,
    tail: Line,
}

/// A maximal interval of indices on which a sequence is affine; `end = None` means ∞.
#[derive(Clone, Debug)]
pub struct Piece {
    pub start: BigInt,
    pub end: Option<BigInt>,
    pub line: Line,
}

impl TailSeq {
    pub fn new(segs: Vec<Segment>, tail: Line) -> Result<Self> {
        let mut next = BigInt::one();
        for s in &segs {
            if s.start != next || s.end < s.start {
                return Err(Error::InvalidElement("sequence segments must tile 1..L contiguously".into()));
            }
            next = &s.end + 1;
        }
        Ok(Self::canonical(segs, tail))
    }

    pub fn from_prefix(prefix: Vec<Rational>, tail: Tail) -> Self {
        let segs = prefix
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let n = BigInt::from(i + 1);
                Segment { start: n.clone(), end: n, line: Line::constant(v) }
            })
            .collect();
        Self::canonical(segs, tail.line())
    }

    pub fn with_tail(tail: Tail) -> Self {
        TailSeq { segs: Vec::new(), tail: tail.line() }.recanon()
    }

    pub fn zero() -> Self {
        Self::with_tail(Tail::Zero)
    }

    /// The constant-one sequence.
    pub fn ones() -> Self {
        Self::with_tail(Tail::Const(Rational::one()))
    }

    /// `z = (1, 2, 3, …)`.
    pub fn ramp() -> Self {
        Self::with_tail(Tail::Affine(Rational::one(), Rational::zero()))
    }

    /// `e_i`.
    pub fn unit_vector(i: u64) -> Self {
        let i = BigInt::from(i.max(1));
        Self::indicator_range(&i, &i)
    }

    /// Indicator of coordinates `lo..=hi`.
    pub fn indicator_range(lo: &BigInt, hi: &BigInt) -> Self {
        let mut segs = Vec::new();
        if *lo > BigInt::one() {
            segs.push(Segment { start: BigInt::one(), end: lo - 1, line: Line::constant(Rational::zero()) });
        }
        segs.push(Segment { start: lo.clone(), end: hi.clone(), line: Line::constant(Rational::one()) });
        Self::canonical(segs, Line::constant(Rational::zero()))
    }

    /// Indicator of coordinates `≥ lo`.
    pub fn indicator_from(lo: &BigInt) -> Self {
        let mut segs = Vec::new();
        if *lo > BigInt::one() {
            segs.push(Segment { start: BigInt::one(), end: lo - 1, line: Line::constant(Rational::zero()) });
        }
        Self::canonical(segs, Line::constant(Rational::one()))
    }

    fn recanon(self) -> Self {
        Self::canonical(self.segs, self.tail)
    }

    fn canonical(segs: Vec<Segment>, tail: Line) -> Self {
        let mut segs: Vec<Segment> = segs
            .into_iter()
            .filter(|s| s.start <= s.end)
            .map(|mut s| {
                if s.len_is_one() {
                    s.line = Line::constant(s.line.at(&s.start));
                }
                s
            })
            .collect();
        // Minimal prefix: drop trailing coordinates that already follow the tail.
        while let Some(last) = segs.last_mut() {
            if last.line == tail {
                segs.pop();
                continue;
            }
            if last.line.at(&last.end) == tail.at(&last.end) {
                if last.len_is_one() {
                    segs.pop();
                } else {
                    last.end -= 1;
                    if last.len_is_one() {
                        last.line = Line::constant(last.line.at(&last.start));
                    }
                }
                continue;
            }
            break;
        }
        TailSeq { segs: greedy_runs(segs), tail }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segs
    }

    pub fn tail_line(&self) -> &Line {
        &self.tail
    }

    pub fn tail(&self) -> Tail {
        if !self.tail.slope.is_zero() {
            Tail::Affine(self.tail.slope.clone(), self.tail.intercept.clone())
        } else if self.tail.intercept.is_zero() {
            Tail::Zero
        } else {
            Tail::Const(self.tail.intercept.clone())
        }
    }

    /// Number of prefix coordinates `L`; coordinates past `L` follow the tail.
    pub fn prefix_len(&self) -> BigInt {
        self.segs.last().map(|s| s.end.clone()).unwrap_or_else(BigInt::zero)
    }

    pub fn eval(&self, n: &BigInt) -> Rational {
        let idx = self.segs.partition_point(|s| s.end < *n);
        match self.segs.get(idx) {
            Some(s) if s.start <= *n => s.line.at(n),
            _ => self.tail.at(n),
        }
    }

    pub fn eval_u64(&self, n: u64) -> Rational {
        self.eval(&BigInt::from(n))
    }

    pub fn is_zero(&self) -> bool {
        self.segs.is_empty() && self.tail.slope.is_zero() && self.tail.intercept.is_zero()
    }

    pub fn pieces(&self) -> Vec<Piece> {
        let mut out: Vec<Piece> = self
            .segs
            .iter()
            .map(|s| Piece { start: s.start.clone(), end: Some(s.end.clone()), line: s.line.clone() })
            .collect();
        out.push(Piece { start: self.prefix_len() + 1, end: None, line: self.tail.clone() });
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let segs = self.segs.iter().map(|s| Segment { line: s.line.scale(c), ..s.clone() }).collect();
        Self::canonical(segs, self.tail.scale(c))
    }

    pub fn sum(&self, other: &TailSeq) -> Self {
        self.pointwise(other, |a, b| a.add(b))
    }

    pub fn diff(&self, other: &TailSeq) -> Self {
        self.pointwise(other, |a, b| a.sub(b))
    }

    fn pointwise(&self, other: &TailSeq, f: impl Fn(&Line, &Line) -> Line) -> Self {
        let mut segs = Vec::new();
        let mut tail = None;
        for (start, end, a, b) in overlay(self, other) {
            match end {
                Some(end) => segs.push(Segment { start, end, line: f(&a, &b) }),
                None => tail = Some(f(&a, &b)),
            }
        }
        Self::canonical(segs, tail.expect("overlay ends with the tail piece"))
    }

    pub fn meet(&self, other: &TailSeq) -> Self {
        self.lattice_op(other, true)
    }

    pub fn join(&self, other: &TailSeq) -> Self {
        self.lattice_op(other, false)
    }

    fn lattice_op(&self, other: &TailSeq, take_min: bool) -> Self {
        // `first_wins(a, b)` decides which line is the result on a one-signed stretch.
        let pick = |a: &Line, b: &Line, u: &BigInt, v: &BigInt| -> Line {
            let (a_le, a_ge) = if a.slope.is_zero() && b.slope.is_zero() {
                (a.intercept <= b.intercept, a.intercept >= b.intercept)
            } else {
                let (au, bu, av, bv) = (a.at(u), b.at(u), a.at(v), b.at(v));
                (au <= bu && av <= bv, au >= bu && av >= bv)
            };
            if (take_min && a_le) || (!take_min && a_ge) { a.clone() } else { b.clone() }
        };
        let mut segs = Vec::new();
        let mut tail = None;
        for (start, end, a, b) in overlay(self, other) {
            let d = a.sub(&b);
            let split = if a == b || d.slope.is_zero() {
                None
            } else {
                Some(floor_int(&(-&d.intercept / &d.slope)))
            };
            match end {
                Some(end) => match split {
                    Some(k) if start <= k && k < end => {
                        segs.push(Segment { start: start.clone(), end: k.clone(), line: pick(&a, &b, &start, &k) });
                        let k1: BigInt = &k + 1;
                        segs.push(Segment { start: k1.clone(), end: end.clone(), line: pick(&a, &b, &k1, &end) });
                    }
                    _ => segs.push(Segment { line: pick(&a, &b, &start, &end), start, end }),
                },
                None => {
                    let mut from = start.clone();
                    if let Some(k) = split {
                        if start <= k {
                            segs.push(Segment { start: start.clone(), end: k.clone(), line: pick(&a, &b, &start, &k) });
                            from = k + 1;
                        }
                    }
                    // Past every crossing the sign of `a - b` is fixed.
                    let far = &from + 1;
                    tail = Some(pick(&a, &b, &from, &far));
                }
            }
        }
        Self::canonical(segs, tail.expect("overlay ends with the tail piece"))
    }

    pub fn abs(&self) -> Self {
        if self.is_nonneg() {
            return self.clone();
        }
        self.join(&self.scale(&-Rational::one()))
    }

    /// Sufficient test for `self ≥ 0`, exact on every sequence whose tail is nonnegative.
    fn is_nonneg(&self) -> bool {
        let seg_ok = self.segs.iter().all(|s| !s.line.at(&s.start).is_negative() && !s.line.at(&s.end).is_negative());
        seg_ok && !self.tail.slope.is_negative() && !self.tail.at(&self.prefix_len()).is_negative()
    }

    /// `Some(P)` when the sequence vanishes past coordinate `P`.
    pub fn support_end(&self) -> Option<BigInt> {
        if self.tail.slope.is_zero() && self.tail.intercept.is_zero() {
            Some(self.prefix_len())
        } else {
            None
        }
    }

    pub fn to_text(&self) -> String {
        let segs: Vec<String> = self
            .segs
            .iter()
            .map(|s| {
                if !s.line.slope.is_zero() && s.end == &s.start + 1 {
                    // Two-point runs read better as two values.
                    let (a, b) = (s.line.at(&s.start), s.line.at(&s.end));
                    format!("{0}..{0}={1},{2}..{2}={3}", s.start, fmt_rat(&a), s.end, fmt_rat(&b))
                } else if s.line.slope.is_zero() {
                    format!("{}..{}={}", s.start, s.end, fmt_rat(&s.line.intercept))
                } else {
                    format!("{}..{}={}*n+{}", s.start, s.end, fmt_rat(&s.line.slope), fmt_rat(&s.line.intercept))
                }
            })
            .collect();
        let tail = match self.tail() {
            Tail::Zero => "zero".to_string(),
            Tail::Const(c) => format!("const {}", fmt_rat(&c)),
            Tail::Affine(a, b) => format!("affine {} {}", fmt_rat(&a), fmt_rat(&b)),
        };
        format!("seq [{}] {}", segs.join(","), tail)
    }
}

impl Tail {
    pub fn line(&self) -> Line {
        match self {
            Tail::Zero => Line::constant(Rational::zero()),
            Tail::Const(c) => Line::constant(c.clone()),
            Tail::Affine(a, b) => Line::new(a.clone(), b.clone()),
        }
    }
}

/// Common refinement of two sequences' affine pieces: `(start, end, line_a, line_b)`.
pub(crate) fn overlay(a: &TailSeq, b: &TailSeq) -> Vec<(BigInt, Option<BigInt>, Line, Line)> {
    let pa = a.pieces();
    let pb = b.pieces();
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut cursor = BigInt::one();
    loop {
        let (x, y) = (&pa[i], &pb[j]);
        let end = match (&x.end, &y.end) {
            (Some(e1), Some(e2)) => Some(e1.min(e2).clone()),
            (Some(e), None) | (None, Some(e)) => Some(e.clone()),
            (None, None) => None,
        };
        out.push((cursor.clone(), end.clone(), x.line.clone(), y.line.clone()));
        let Some(end) = end else { break };
        if x.end.as_ref() == Some(&end) {
            i += 1;
        }
        if y.end.as_ref() == Some(&end) {
            j += 1;
        }
        cursor = end + 1;
    }
    out
}

/// Left-to-right greedy split of the prefix values into maximal affine runs. The
/// result depends only on the coordinate values, which makes it a canonical form.
fn greedy_runs(segs: Vec<Segment>) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::with_capacity(segs.len());
    let mut cur: Option<Segment> = None;
    for mut seg in segs {
        while seg.start <= seg.end {
            let Some(c) = cur.take() else {
                cur = Some(seg.clone());
                break;
            };
            if c.len_is_one() {
                let p = c.line.at(&c.start);
                let q = seg.line.at(&seg.start);
                let line = Line::through(&c.start, &p, &q);
                if !seg.len_is_one() && seg.line == line {
                    cur = Some(Segment { start: c.start, end: seg.end.clone(), line });
                    break;
                }
                cur = Some(Segment { start: c.start, end: seg.start.clone(), line });
                seg.start += 1;
                continue;
            }
            let on_line = if seg.len_is_one() {
                c.line.at(&seg.start) == seg.line.at(&seg.start)
            } else {
                seg.line == c.line
            };
            if on_line {
                cur = Some(Segment { end: seg.end.clone(), ..c });
                break;
            }
            if c.line.at(&seg.start) == seg.line.at(&seg.start) {
                out.push(Segment { end: seg.start.clone(), ..c });
                seg.start += 1;
            } else {
                out.push(c);
            }
        }
    }
    out.extend(cur);
    for s in &mut out {
        if s.len_is_one() {
            s.line = Line::constant(s.line.at(&s.start));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::{int, rat};

    fn n(i: i64) -> BigInt {
        BigInt::from(i)
    }

    #[test]
    fn canonical_prefix_is_minimal() {
        let s = TailSeq::from_prefix(vec![int(3), int(-5), int(0), int(0)], Tail::Zero);
        assert_eq!(s.prefix_len(), n(2));
        let c = TailSeq::from_prefix(vec![int(1), int(1)], Tail::Const(int(1)));
        assert_eq!(c, TailSeq::ones());
    }

    #[test]
    fn greedy_runs_are_value_determined() {
        // 1, 2, 5, 8 then zeros, built from two different segmentations.
        let a = TailSeq::from_prefix(vec![int(1), int(2), int(5), int(8)], Tail::Zero);
        let b = TailSeq::new(
            vec![
                Segment { start: n(1), end: n(1), line: Line::constant(int(1)) },
                Segment { start: n(2), end: n(4), line: Line::new(int(3), int(-4)) },
            ],
            Line::constant(int(0)),
        )
        .unwrap();
        assert_eq!(a, b);
        for i in 1..8 {
            assert_eq!(a.eval(&n(i)), b.eval(&n(i)));
        }
    }

    #[test]
    fn meet_with_scaled_ramp_stays_compact() {
        let tiny = TailSeq::ramp().scale(&rat(1, 1_000_000));
        let m = tiny.meet(&TailSeq::ones());
        assert!(m.segments().len() <= 2);
        assert_eq!(m.eval(&n(500_000)), rat(1, 2));
        assert_eq!(m.eval(&n(5_000_000)), int(1));
        assert_eq!(m.tail(), Tail::Const(int(1)));
    }

    #[test]
    fn abs_of_prefix() {
        let s = TailSeq::from_prefix(vec![int(3), int(-5)], Tail::Zero);
        assert_eq!(s.abs(), TailSeq::from_prefix(vec![int(3), int(5)], Tail::Zero));
        let r = TailSeq::with_tail(Tail::Affine(int(1), int(-3))).abs();
        for i in 1..10 {
            assert_eq!(r.eval(&n(i)), int((i - 3).abs()));
        }
    }

    #[test]
    fn huge_block_indicator() {
        let lo = BigInt::one() << 4000u32;
        let hi = (BigInt::one() << 4001u32) - 1;
        let b = TailSeq::indicator_range(&lo, &hi);
        assert_eq!(b.segments().len(), 2);
        assert_eq!(b.eval(&lo), int(1));
        assert_eq!(b.eval(&(&lo - 1)), int(0));
        let b2 = TailSeq::indicator_range(&(&hi + 1), &((BigInt::one() << 4002u32) - 1));
        assert!(b.meet(&b2).is_zero());
    }
}
