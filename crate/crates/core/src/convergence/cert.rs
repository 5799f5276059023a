//! Rate certificates, refutation patterns and the certifier interface families implement.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::lattice::rational::{dyadic, floor_int, floor_log2, fmt_rat, int, pow, Small};
use crate::lattice::{Element, ExtScalar, NormValue, Point, Rational, Region};
use crate::spaces::SpacePair;

/// A nonincreasing upper bound on a gauge (or on its `root`-th power).
#[derive(Clone, Debug, PartialEq)]
pub enum RateKind {
    /// `c / n^r`
    PowerLaw { c: Rational, r: u32 },
    /// `c · 2^(-⌊log₂ n⌋)`
    DyadicLog { c: Rational },
    /// `0` for every `n > L`; no claim up to `L`.
    EventuallyZeroAfter(u64),
    /// `(bound, N)`: gauge `≤ bound` for all `n ≥ N`.
    Table(Vec<(Rational, u64)>),
    /// `factor · (a(n) + b(n))`
    Sum { a: Box<RateKind>, b: Box<RateKind>, factor: Rational },
}

impl RateKind {
    pub fn bound(&self, n: u64) -> Option<Rational> {
        let n = n.max(1);
        match self {
            RateKind::PowerLaw { c, r } => Some(c / pow(&int(n as i64), *r)),
            RateKind::DyadicLog { c } => Some(c * dyadic(floor_log2(n) as u64)),
            RateKind::EventuallyZeroAfter(l) => (n > *l).then(Rational::zero),
            RateKind::Table(rows) => rows.iter().filter(|(_, from)| *from <= n).map(|(b, _)| b).min().cloned(),
            RateKind::Sum { a, b, factor } => Some(factor * (a.bound(n)? + b.bound(n)?)),
        }
    }

    /// [`RateKind::bound`] in machine arithmetic; `None` when it does not fit.
    pub(crate) fn bound_small(&self, n: u64) -> Option<Small> {
        let n = n.max(1) as i128;
        match self {
            RateKind::PowerLaw { c, r } => Small::of(c)?.div(Small::int(n.checked_pow(*r)?)),
            RateKind::DyadicLog { c } => Small::of(c)?.div(Small::int(1i128 << floor_log2(n as u64))),
            RateKind::EventuallyZeroAfter(l) => (n > *l as i128).then_some(Small::ZERO),
            RateKind::Table(_) => None,
            RateKind::Sum { a, b, factor } => Small::of(factor)?.mul(a.bound_small(n as u64)?.add(b.bound_small(n as u64)?)?),
        }
    }

    /// Structural sanity: nonnegative constants, positive exponents, monotone tables.
    pub fn is_well_formed(&self) -> bool {
        match self {
            RateKind::PowerLaw { c, r } => !c.is_negative() && *r > 0,
            RateKind::DyadicLog { c } => !c.is_negative(),
            RateKind::EventuallyZeroAfter(_) => true,
            RateKind::Table(rows) => rows.iter().all(|(b, _)| !b.is_negative()),
            RateKind::Sum { a, b, factor } => a.is_well_formed() && b.is_well_formed() && !factor.is_negative(),
        }
    }

    /// `true` when the bound tends to 0, so the certificate witnesses a null limit.
    pub fn vanishes(&self) -> bool {
        match self {
            RateKind::PowerLaw { .. } | RateKind::DyadicLog { .. } | RateKind::EventuallyZeroAfter(_) => true,
            RateKind::Table(rows) => rows.iter().any(|(b, _)| b.is_zero()),
            RateKind::Sum { a, b, .. } => a.vanishes() && b.vanishes(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            RateKind::PowerLaw { c, r } => format!("PowerLaw(C={}, r={r})", fmt_rat(c)),
            RateKind::DyadicLog { c } => format!("DyadicLog(C={})", fmt_rat(c)),
            RateKind::EventuallyZeroAfter(l) => format!("EventuallyZeroAfter({l})"),
            RateKind::Table(rows) => {
                let r: Vec<String> = rows.iter().map(|(b, n)| format!("{}@{n}", fmt_rat(b))).collect();
                format!("Table[{}]", r.join(","))
            }
            RateKind::Sum { a, b, factor } => format!("Sum({}, {}, x{})", a.describe(), b.describe(), fmt_rat(factor)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateCert {
    pub kind: RateKind,
    /// The bound applies to `gauge^root`.
    pub root: u32,
    pub applies_to: String,
}

impl RateCert {
    pub fn new(kind: RateKind, applies_to: impl Into<String>) -> Self {
        RateCert { kind, root: 1, applies_to: applies_to.into() }
    }

    pub fn rooted(kind: RateKind, root: u32, applies_to: impl Into<String>) -> Self {
        RateCert { kind, root: root.max(1), applies_to: applies_to.into() }
    }

    pub fn zero_after(l: u64, applies_to: impl Into<String>) -> Self {
        Self::new(RateKind::EventuallyZeroAfter(l), applies_to)
    }

    pub fn bound_value(&self, n: u64) -> Option<NormValue> {
        let b = self.kind.bound(n)?;
        Some(if self.root == 1 {
            NormValue::exact(b)
        } else {
            NormValue::Power { p: self.root, power: ExtScalar::Finite(b) }
        })
    }

    /// `value ≤ bound(n)`; vacuous where the certificate makes no claim.
    pub fn dominates(&self, n: u64, value: &NormValue) -> bool {
        let v = match value {
            NormValue::Exact(ExtScalar::Finite(v)) if self.root == 1 => Some(v),
            NormValue::Power { p, power: ExtScalar::Finite(v) } if *p == self.root => Some(v),
            _ => None,
        };
        if let Some(gt) = v.and_then(Small::of).zip(self.kind.bound_small(n)).and_then(|(v, b)| v.gt(b)) {
            return !gt;
        }
        match self.bound_value(n) {
            None => true,
            Some(b) => value.cmp_value(&b) != Ordering::Greater,
        }
    }

    pub fn describe(&self) -> String {
        if self.root == 1 { self.kind.describe() } else { format!("{}^(1/{})", self.kind.describe(), self.root) }
    }
}

impl Serialize for RateCert {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&format_args!("{} for {}", self.describe(), self.applies_to))
    }
}

/// Indices at which a refutation claims `value ≥ ε`.
#[derive(Clone, Debug, PartialEq)]
pub enum Pattern {
    /// Every `n ≥ n0`.
    From(u64),
    /// The dyadic blocks containing `t`: `n = 2^j + ⌊t·2^j⌋` for every `j ≥ 0`.
    TypewriterHits(Rational),
}

impl Pattern {
    pub fn indices_upto(&self, horizon: u64) -> Vec<u64> {
        match self {
            Pattern::From(n0) => ((*n0).max(1)..=horizon).collect(),
            Pattern::TypewriterHits(t) => {
                let mut out = Vec::new();
                for j in 0..63u32 {
                    let block = floor_int(&(t * Rational::from_integer(BigInt::one() << j)));
                    let n = (BigInt::one() << j) + block;
                    match n.to_u64() {
                        Some(n) if n <= horizon => out.push(n),
                        _ => break,
                    }
                }
                out
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Pattern::From(n0) => format!("every n >= {n0}"),
            Pattern::TypewriterHits(t) => format!("n = 2^j + floor({}*2^j), j >= 0", fmt_rat(t)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Refutation {
    pub epsilon: Rational,
    pub pattern: Pattern,
    pub description: String,
}

impl Refutation {
    pub fn new(epsilon: Rational, pattern: Pattern, description: impl Into<String>) -> Self {
        Refutation { epsilon, pattern, description: description.into() }
    }

    pub fn describe(&self) -> String {
        format!("{}; value >= {} at {}", self.description, fmt_rat(&self.epsilon), self.pattern.describe())
    }
}

/// Almost-everywhere behaviour of a family of functions on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum AeCert {
    /// Pointwise decay, certified by `point_rate`, at every point outside a finite null set.
    Decay { null_set: Vec<Rational> },
    /// On `region` (positive measure) values `≥ ε` recur along each point's `point_refutation` pattern.
    Recurrence { region: Region, epsilon: Rational },
}

/// Closed-form knowledge a family carries about itself. Every claim is re-verified by
/// exact computation before a checker relies on it.
pub trait Certifier: Send + Sync {
    fn un_rate(&self, _pair: &SpacePair, _x: &Element) -> Option<RateCert> {
        None
    }
    fn un_refutation(&self, _pair: &SpacePair, _x: &Element) -> Option<Refutation> {
        None
    }
    /// Bound on `μ{|y_n| > ε}`.
    fn measure_rate(&self, _eps: &Rational) -> Option<RateCert> {
        None
    }
    /// `μ{|y_n| > ε} ≥ ε` along the pattern, with `ε` the refutation's epsilon.
    fn measure_refutation(&self) -> Option<Refutation> {
        None
    }
    fn point_rate(&self, _at: &Point) -> Option<RateCert> {
        None
    }
    fn point_refutation(&self, _at: &Point) -> Option<Refutation> {
        None
    }
    fn uniform_rate(&self, _e: &Element) -> Option<RateCert> {
        None
    }
    fn uniform_refutation(&self, _e: &Element) -> Option<Refutation> {
        None
    }
    fn ae(&self) -> Option<AeCert> {
        None
    }
}

pub struct NoCertificates;

impl Certifier for NoCertificates {}

/// Largest "nice" positive rational not exceeding `v` (for `v > 0`); `1` for `∞`.
pub fn rational_below(v: &NormValue) -> Option<Rational> {
    if v.is_zero() {
        return None;
    }
    if v.is_infinite() {
        return Some(Rational::one());
    }
    if let NormValue::Exact(ExtScalar::Finite(r)) = v {
        return Some(r.clone());
    }
    let mut cand = {
        let f = v.to_f64() * (1.0 - 1e-9);
        let scaled = (f * (1u64 << 40) as f64).floor();
        Rational::new(BigInt::from(scaled as i128), BigInt::one() << 40u32)
    };
    for _ in 0..200 {
        if cand.is_positive() && v.cmp_rat(&cand) != Ordering::Less {
            return Some(cand);
        }
        cand = if cand.is_positive() { cand / int(2) } else { dyadic(60) };
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::rat;

    #[test]
    fn bounds() {
        assert_eq!(RateKind::DyadicLog { c: int(1) }.bound(5), Some(rat(1, 4)));
        assert_eq!(RateKind::PowerLaw { c: int(3), r: 2 }.bound(3), Some(rat(1, 3)));
        assert_eq!(RateKind::EventuallyZeroAfter(4).bound(4), None);
        assert_eq!(RateKind::EventuallyZeroAfter(4).bound(5), Some(int(0)));
        let t = RateKind::Table(vec![(int(1), 1), (rat(1, 2), 10)]);
        assert_eq!(t.bound(9), Some(int(1)));
        assert_eq!(t.bound(10), Some(rat(1, 2)));
    }

    #[test]
    fn typewriter_hits() {
        // t = 1/3 lies in [0,1), [0,1/2), [1/4,1/2), [1/4,3/8) ...
        assert_eq!(Pattern::TypewriterHits(rat(1, 3)).indices_upto(16), vec![1, 2, 5, 10]);
    }

    #[test]
    fn rooted_domination() {
        let c = RateCert::rooted(RateKind::PowerLaw { c: int(1), r: 1 }, 2, "x");
        // gauge √(1/4) = 1/2 against bound √(1/n) at n = 4 → equal
        let g = NormValue::Power { p: 2, power: ExtScalar::Finite(rat(1, 4)) };
        assert!(c.dominates(4, &g));
        assert!(!c.dominates(5, &g));
    }

    #[test]
    fn below_roots() {
        let v = NormValue::Power { p: 2, power: ExtScalar::Finite(int(2)) };
        let r = rational_below(&v).unwrap();
        assert!(pow(&r, 2) <= int(2) && r > rat(14, 10));
    }
}
