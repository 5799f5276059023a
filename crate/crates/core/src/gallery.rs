//! Closed-form example and counterexample families, each carrying the certificates its
//! definition makes available, plus the table of verdicts they are expected to produce.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::convergence::cert::{rational_below, AeCert, Certifier, Pattern, RateCert, RateKind, Refutation};
use crate::convergence::family::Family;
use crate::convergence::{raw_gauge, Mode, VerdictClass};
use crate::error::{Error, Result};
use crate::lattice::norm::unit_norm;
use crate::lattice::rational::{dyadic, floor_int, floor_log2, floor_log2_big, int, min_r, pow, power_sum, rat};
use crate::lattice::{DirectSum, Element, ExtScalar, Kind, NormSpec, PlFn, Point, Rational, Region, StepFn, Tail, TailSeq};
use crate::spaces::SpacePair;

/// How the pair's norm aggregates: an exact `p`-th power integral/sum, or a supremum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Power(u32),
    Sup,
}

fn shape(pair: &SpacePair) -> Option<Shape> {
    match &pair.norm {
        NormSpec::L1 | NormSpec::Ell1 | NormSpec::SumL1 => Some(Shape::Power(1)),
        NormSpec::Lp(p) if p.is_integer() => p.to_integer().to_u32().map(Shape::Power),
        NormSpec::Sup | NormSpec::EllInf => Some(Shape::Sup),
        _ => None,
    }
}

/// Largest value of a function carrier.
fn fn_sup(x: &Element) -> Option<Rational> {
    match x {
        Element::Step(f) => f.values().iter().max().cloned(),
        Element::Pl(f) => f.ys().iter().max().cloned(),
        _ => None,
    }
}

fn seq(x: &Element) -> Option<&TailSeq> {
    match x {
        Element::Seq(s) => Some(s),
        _ => None,
    }
}

/// `(P, c)` when `x` equals the positive constant `c` past coordinate `P`.
fn const_tail(x: &Element) -> Option<(BigInt, Rational)> {
    let s = seq(x)?;
    match s.tail() {
        Tail::Const(c) if c.is_positive() => Some((s.prefix_len(), c)),
        _ => None,
    }
}

fn u64_of(n: &BigInt) -> u64 {
    n.to_u64().unwrap_or(u64::MAX)
}

/// `n = 2^j + i` ↦ `[i/2^j, (i+1)/2^j)`.
pub fn typewriter_block(n: u64) -> (Rational, Rational) {
    let n = n.max(1);
    let j = floor_log2(n);
    let i = n - (1u64 << j);
    let w = dyadic(j as u64);
    (int(i as i64) * &w, int(i as i64 + 1) * &w)
}

pub fn typewriter_element(n: u64) -> StepFn {
    let (a, b) = typewriter_block(n);
    StepFn::block(a, b, Rational::one()).expect("dyadic blocks lie in [0,1]")
}

/// Largest `k ≥ 0` with `2^-k > t`, for `0 < t < 1`.
fn dyadic_depth_above(t: &Rational) -> u64 {
    let mut k = 0;
    while dyadic(k + 1) > *t {
        k += 1;
    }
    k
}

struct TypewriterCert;

impl Certifier for TypewriterCert {
    fn un_rate(&self, pair: &SpacePair, x: &Element) -> Option<RateCert> {
        let Shape::Power(p) = shape(pair)? else { return None };
        let m = min_r(&fn_sup(x)?, &Rational::one());
        Some(RateCert::rooted(RateKind::DyadicLog { c: pow(&m, p) }, p, x.to_text()))
    }

    fn measure_rate(&self, eps: &Rational) -> Option<RateCert> {
        Some(if *eps < Rational::one() {
            RateCert::new(RateKind::DyadicLog { c: Rational::one() }, "level sets")
        } else {
            RateCert::zero_after(0, "level sets")
        })
    }

    fn point_refutation(&self, at: &Point) -> Option<Refutation> {
        let Point::T(t) = at else { return None };
        (!t.is_negative() && *t < Rational::one())
            .then(|| Refutation::new(Rational::one(), Pattern::TypewriterHits(t.clone()), "t lies in one block of every generation"))
    }

    fn ae(&self) -> Option<AeCert> {
        Some(AeCert::Recurrence { region: Region::unit(), epsilon: rat(1, 2) })
    }
}

/// `T_n`, the indicators of the dyadic blocks swept left to right, generation by generation.
pub fn typewriter() -> Family {
    Family::new("typewriter", Kind::Step, |n| typewriter_element(n).into())
        .with_certifier(TypewriterCert)
        .with_null_limit()
        .with_range(StepFn::one().into())
}

struct TypewriterDyadicCert;

impl Certifier for TypewriterDyadicCert {
    fn un_rate(&self, pair: &SpacePair, x: &Element) -> Option<RateCert> {
        TypewriterCert.un_rate(pair, x)
    }

    fn measure_rate(&self, eps: &Rational) -> Option<RateCert> {
        TypewriterCert.measure_rate(eps)
    }

    fn point_rate(&self, at: &Point) -> Option<RateCert> {
        let Point::T(t) = at else { return None };
        if !t.is_positive() {
            return None;
        }
        let l = if *t >= Rational::one() { 0 } else { dyadic_depth_above(t) };
        Some(RateCert::zero_after(l, "point"))
    }

    fn point_refutation(&self, at: &Point) -> Option<Refutation> {
        matches!(at, Point::T(t) if t.is_zero())
            .then(|| Refutation::new(Rational::one(), Pattern::From(1), "0 lies in every block [0, 2^-k)"))
    }

    fn ae(&self) -> Option<AeCert> {
        Some(AeCert::Decay { null_set: vec![Rational::zero()] })
    }
}

/// `k ↦ T_{2^k} = χ[0, 2^-k)`.
pub fn typewriter_dyadic() -> Family {
    Family::new("typewriter_dyadic", Kind::Step, |k| {
        StepFn::block(Rational::zero(), dyadic(k), Rational::one()).expect("valid block").into()
    })
    .with_certifier(TypewriterDyadicCert)
    .with_null_limit()
    .with_range(StepFn::one().into())
}

struct MovingBumpCert;

impl Certifier for MovingBumpCert {
    fn un_rate(&self, pair: &SpacePair, x: &Element) -> Option<RateCert> {
        let Element::Pl(f) = x else { return None };
        match shape(pair)? {
            // |f_n| ∧ x ≤ x ≤ Lip(x)·t on [0, 1/n] when x(0) = 0
            Shape::Sup if f.eval(&Rational::zero()).is_zero() => {
                Some(RateCert::new(RateKind::PowerLaw { c: f.lipschitz(), r: 1 }, x.to_text()))
            }
            Shape::Sup => None,
            // at most min(1, sup x) on a support of length 1/(n(n+1)) ≤ 1/n²
            Shape::Power(p) => {
                let m = min_r(&fn_sup(x)?, &Rational::one());
                Some(RateCert::rooted(RateKind::PowerLaw { c: pow(&m, p), r: 2 }, p, x.to_text()))
            }
        }
    }

    fn un_refutation(&self, pair: &SpacePair, x: &Element) -> Option<Refutation> {
        let Element::Pl(f) = x else { return None };
        if shape(pair)? != Shape::Sup {
            return None;
        }
        let x0 = f.eval(&Rational::zero());
        if !x0.is_positive() {
            return None;
        }
        let l = f.lipschitz();
        // the peak sits below 1/n, where x ≥ x(0) − Lip(x)/n
        if l.is_zero() {
            return Some(Refutation::new(min_r(&x0, &Rational::one()), Pattern::From(1), "bump peak 1 against x ≥ x(0)"));
        }
        let half = &x0 / int(2);
        let n0 = crate::lattice::rational::ceil_int(&(int(2) * &l / &x0));
        Some(Refutation::new(
            min_r(&half, &Rational::one()),
            Pattern::From(u64_of(&n0).max(1)),
            "bump peak 1 where x ≥ x(0)/2",
        ))
    }

    fn measure_rate(&self, eps: &Rational) -> Option<RateCert> {
        Some(if *eps < Rational::one() {
            RateCert::new(RateKind::PowerLaw { c: Rational::one(), r: 2 }, "level sets")
        } else {
            RateCert::zero_after(0, "level sets")
        })
    }

    fn point_rate(&self, at: &Point) -> Option<RateCert> {
        let Point::T(t) = at else { return None };
        if !t.is_positive() {
            return Some(RateCert::zero_after(0, "point"));
        }
        Some(RateCert::zero_after(u64_of(&floor_int(&(Rational::one() / t))), "point"))
    }

    fn ae(&self) -> Option<AeCert> {
        Some(AeCert::Decay { null_set: Vec::new() })
    }
}

/// Tent of height 1 on `[1/(n+1), 1/n]`.
pub fn moving_bump() -> Family {
    Family::new("moving_bump", Kind::Pl, |n| {
        let n = n as i64;
        PlFn::tent(&rat(1, n + 1), &rat(1, n), &Rational::one()).expect("valid tent").into()
    })
    .with_certifier(MovingBumpCert)
    .with_null_limit()
    .with_range(PlFn::one().into())
}

struct UnitVectorsCert;

impl Certifier for UnitVectorsCert {
    fn un_rate(&self, _pair: &SpacePair, x: &Element) -> Option<RateCert> {
        let l = seq(x)?.support_end()?;
        Some(RateCert::zero_after(u64_of(&l), x.to_text()))
    }

    fn un_refutation(&self, _pair: &SpacePair, x: &Element) -> Option<Refutation> {
        let (p, c) = const_tail(x)?;
        let eps = min_r(&c, &Rational::one());
        Some(Refutation::new(eps, Pattern::From(u64_of(&p) + 1), "e_n ∧ x = min(1, c)·e_n past the prefix of x"))
    }

    fn point_rate(&self, at: &Point) -> Option<RateCert> {
        let Point::N(i) = at else { return None };
        Some(RateCert::zero_after(u64_of(i), "coordinate"))
    }

    fn uniform_refutation(&self, e: &Element) -> Option<Refutation> {
        let s = seq(e)?;
        let p = u64_of(&s.prefix_len()) + 1;
        match s.tail() {
            Tail::Const(c) if c.is_positive() => Some(Refutation::new(c.recip(), Pattern::From(p), "‖e_n‖_e = 1/c past the prefix")),
            Tail::Zero => Some(Refutation::new(Rational::one(), Pattern::From(p), "e_n lies outside I_e")),
            _ => None,
        }
    }
}

/// `e_n`.
pub fn unit_vectors() -> Family {
    Family::new("unit_vectors", Kind::Seq, |n| TailSeq::unit_vector(n).into())
        .with_certifier(UnitVectorsCert)
        .with_null_limit()
        .with_range(TailSeq::ones().into())
}

struct ScaledRampCert;

impl Certifier for ScaledRampCert {
    fn un_rate(&self, pair: &SpacePair, x: &Element) -> Option<RateCert> {
        let l = seq(x)?.support_end()?;
        // coordinate i of z/n is i/n; only i ≤ L meets x
        Some(match shape(pair)? {
            Shape::Sup => RateCert::new(RateKind::PowerLaw { c: Rational::from_integer(l), r: 1 }, x.to_text()),
            Shape::Power(p) => RateCert::rooted(RateKind::PowerLaw { c: power_sum(p, &l), r: p }, p, x.to_text()),
        })
    }

    fn un_refutation(&self, pair: &SpacePair, x: &Element) -> Option<Refutation> {
        if shape(pair)? != Shape::Sup {
            return None;
        }
        let (_, c) = const_tail(x)?;
        Some(Refutation::new(c, Pattern::From(1), "i/n exceeds the tail value c of x for large i"))
    }

    fn point_rate(&self, at: &Point) -> Option<RateCert> {
        let Point::N(i) = at else { return None };
        Some(RateCert::new(RateKind::PowerLaw { c: Rational::from_integer(i.clone()), r: 1 }, "coordinate"))
    }

    fn uniform_refutation(&self, e: &Element) -> Option<Refutation> {
        matches!(seq(e)?.tail(), Tail::Zero | Tail::Const(_))
            .then(|| Refutation::new(Rational::one(), Pattern::From(1), "z/n is unbounded against a bounded e"))
    }
}

/// `z/n` for `z = (1, 2, 3, …)`.
pub fn scaled_ramp() -> Family {
    Family::new("scaled_ramp", Kind::Seq, |n| TailSeq::ramp().scale(&rat(1, n as i64)).into())
        .with_certifier(ScaledRampCert)
        .with_null_limit()
}

struct ScaledUnitCert;

impl Certifier for ScaledUnitCert {
    fn un_rate(&self, pair: &SpacePair, x: &Element) -> Option<RateCert> {
        let s = seq(x)?;
        match shape(pair)? {
            Shape::Sup => Some(RateCert::new(RateKind::PowerLaw { c: Rational::one(), r: 1 }, x.to_text())),
            Shape::Power(p) => {
                let l = s.support_end()?;
                Some(RateCert::rooted(RateKind::PowerLaw { c: Rational::from_integer(l), r: p }, p, x.to_text()))
            }
        }
    }

    fn point_rate(&self, at: &Point) -> Option<RateCert> {
        matches!(at, Point::N(_)).then(|| RateCert::new(RateKind::PowerLaw { c: Rational::one(), r: 1 }, "coordinate"))
    }

    fn uniform_rate(&self, e: &Element) -> Option<RateCert> {
        let ExtScalar::Finite(c) = unit_norm(&TailSeq::ones().into(), e).ok()? else { return None };
        Some(RateCert::new(RateKind::PowerLaw { c, r: 1 }, e.to_text()))
    }

    fn uniform_refutation(&self, e: &Element) -> Option<Refutation> {
        (unit_norm(&TailSeq::ones().into(), e).ok()? == ExtScalar::PositiveInfinity)
            .then(|| Refutation::new(Rational::one(), Pattern::From(1), "1 lies outside I_e"))
    }
}

/// `(1/n)·𝟙`.
pub fn scaled_unit() -> Family {
    Family::new("scaled_unit", Kind::Seq, |n| TailSeq::ones().scale(&rat(1, n as i64)).into())
        .with_certifier(ScaledUnitCert)
        .with_null_limit()
        .with_range(TailSeq::ones().into())
}

/// Index of the last block `[2^(n-1), 2^n)` that meets `1..=l`.
fn last_block_meeting(l: &BigInt) -> u64 {
    if l.is_zero() {
        0
    } else {
        floor_log2_big(l) + 1
    }
}

struct DisjointBlocksCert;

impl Certifier for DisjointBlocksCert {
    fn un_rate(&self, _pair: &SpacePair, x: &Element) -> Option<RateCert> {
        let l = seq(x)?.support_end()?;
        Some(RateCert::zero_after(last_block_meeting(&l), x.to_text()))
    }

    fn un_refutation(&self, pair: &SpacePair, x: &Element) -> Option<Refutation> {
        if shape(pair)? != Shape::Sup {
            return None;
        }
        let (p, c) = const_tail(x)?;
        Some(Refutation::new(
            min_r(&c, &Rational::one()),
            Pattern::From(last_block_meeting(&p) + 1),
            "blocks past the prefix of x meet its constant tail",
        ))
    }

    fn point_rate(&self, at: &Point) -> Option<RateCert> {
        let Point::N(i) = at else { return None };
        Some(RateCert::zero_after(last_block_meeting(i), "coordinate"))
    }

    fn uniform_refutation(&self, e: &Element) -> Option<Refutation> {
        let s = seq(e)?;
        let from = last_block_meeting(&s.prefix_len()) + 1;
        match s.tail() {
            Tail::Const(c) if c.is_positive() => Some(Refutation::new(c.recip(), Pattern::From(from), "‖χ_B‖_e = 1/c on the tail")),
            Tail::Zero => Some(Refutation::new(Rational::one(), Pattern::From(from), "blocks lie outside I_e")),
            _ => None,
        }
    }
}

/// Indicator of the coordinate block `[2^(n-1), 2^n)`.
pub fn disjoint_blocks() -> Family {
    Family::new("disjoint_blocks", Kind::Seq, |n| {
        let lo = BigInt::one() << (n - 1);
        let hi = (BigInt::one() << n) - 1;
        TailSeq::indicator_range(&lo, &hi).into()
    })
    .with_certifier(DisjointBlocksCert)
    .with_null_limit()
    .with_range(TailSeq::ones().into())
}

/// Refutations for increasing positive families, read off the first nonzero term among
/// `n = 1, 2, 4, …, 2^20`: every later gauge, level measure or value is at least as large.
struct IncreasingCert {
    eval: Arc<dyn Fn(u64) -> Element + Send + Sync>,
}

impl IncreasingCert {
    fn first(&self, nonzero: impl Fn(&Element) -> bool) -> Option<(u64, Element)> {
        (0..=20).map(|k| 1u64 << k).map(|n| (n, (self.eval)(n))).find(|(_, y)| nonzero(y))
    }
}

impl Certifier for IncreasingCert {
    fn un_refutation(&self, pair: &SpacePair, x: &Element) -> Option<Refutation> {
        let (n0, y) = self.first(|y| raw_gauge(y, x, pair).is_ok_and(|g| !g.is_zero()))?;
        let eps = rational_below(&raw_gauge(&y, x, pair).ok()?)?;
        Some(Refutation::new(eps, Pattern::From(n0), "increasing family: the gauge never decreases"))
    }

    fn measure_refutation(&self) -> Option<Refutation> {
        let (n0, y) = self.first(|y| !y.is_zero())?;
        let level = fn_sup(&y)? / int(2);
        let mu = y.level_measure(&level).ok()?;
        Some(Refutation::new(min_r(&level, &mu), Pattern::From(n0), "increasing family: level sets never shrink"))
    }

    fn point_refutation(&self, at: &Point) -> Option<Refutation> {
        let (n0, y) = self.first(|y| y.eval(at).is_ok_and(|v| !v.is_zero()))?;
        Some(Refutation::new(y.eval(at).ok()?, Pattern::From(n0), "increasing family: values never decrease"))
    }

    fn uniform_refutation(&self, e: &Element) -> Option<Refutation> {
        let (n0, y) = self.first(|y| unit_norm(y, e).is_ok_and(|v| v != ExtScalar::zero()))?;
        let eps = match unit_norm(&y, e).ok()? {
            ExtScalar::Finite(r) => r,
            ExtScalar::PositiveInfinity => Rational::one(),
        };
        Some(Refutation::new(eps, Pattern::From(n0), "increasing family: the unit norm never decreases"))
    }

    fn ae(&self) -> Option<AeCert> {
        let (_, y) = self.first(|y| !y.is_zero())?;
        let Element::Step(f) = y else { return None };
        let epsilon = f.values().iter().filter(|v| v.is_positive()).min()?.clone();
        Some(AeCert::Recurrence { region: f.support(), epsilon })
    }
}

/// `y_n − 𝟙 = −χ[1 − 1/n, 1)` for [`ramp_up`].
struct RampUpDeviation;

impl Certifier for RampUpDeviation {
    fn un_rate(&self, pair: &SpacePair, x: &Element) -> Option<RateCert> {
        let Shape::Power(p) = shape(pair)? else { return None };
        let m = min_r(&fn_sup(x)?, &Rational::one());
        Some(RateCert::rooted(RateKind::PowerLaw { c: pow(&m, p), r: 1 }, p, x.to_text()))
    }

    fn measure_rate(&self, eps: &Rational) -> Option<RateCert> {
        Some(if *eps < Rational::one() {
            RateCert::new(RateKind::PowerLaw { c: Rational::one(), r: 1 }, "level sets")
        } else {
            RateCert::zero_after(0, "level sets")
        })
    }

    fn point_rate(&self, at: &Point) -> Option<RateCert> {
        let Point::T(t) = at else { return None };
        (*t < Rational::one()).then(|| RateCert::zero_after(u64_of(&floor_int(&(Rational::one() - t).recip())), "point"))
    }

    fn ae(&self) -> Option<AeCert> {
        Some(AeCert::Decay { null_set: Vec::new() })
    }
}

fn ramp_up_element(n: u64) -> Element {
    let b = Rational::one() - rat(1, n as i64);
    if b.is_zero() {
        return StepFn::zero().into();
    }
    StepFn::block(Rational::zero(), b, Rational::one()).expect("valid block").into()
}

/// `χ[0, 1 − 1/n)`, increasing to `𝟙`.
pub fn ramp_up() -> Family {
    let one: Element = StepFn::one().into();
    Family::new("ramp_up", Kind::Step, ramp_up_element)
        .with_certifier(IncreasingCert { eval: Arc::new(ramp_up_element) })
        .with_limit(one.clone(), RampUpDeviation)
        .with_supremum(one.clone())
        .with_range(one)
}

/// `y_n − 𝟙 = −χ[n+1, ∞)` for [`truncated_ones`].
struct TruncatedOnesDeviation;

impl Certifier for TruncatedOnesDeviation {
    fn un_rate(&self, _pair: &SpacePair, x: &Element) -> Option<RateCert> {
        let l = seq(x)?.support_end()?;
        Some(RateCert::zero_after(u64_of(&l), x.to_text()))
    }

    fn un_refutation(&self, pair: &SpacePair, x: &Element) -> Option<Refutation> {
        if shape(pair)? != Shape::Sup {
            return None;
        }
        let (_, c) = const_tail(x)?;
        Some(Refutation::new(min_r(&c, &Rational::one()), Pattern::From(1), "the missing tail meets the constant tail of x"))
    }

    fn point_rate(&self, at: &Point) -> Option<RateCert> {
        let Point::N(i) = at else { return None };
        Some(RateCert::zero_after(u64_of(i).saturating_sub(1), "coordinate"))
    }

    fn uniform_refutation(&self, e: &Element) -> Option<Refutation> {
        match seq(e)?.tail() {
            Tail::Const(c) if c.is_positive() => Some(Refutation::new(c.recip(), Pattern::From(1), "‖χ[n+1,∞)‖_e ≥ 1/c")),
            Tail::Zero => Some(Refutation::new(Rational::one(), Pattern::From(1), "χ[n+1,∞) lies outside I_e")),
            _ => None,
        }
    }
}

fn truncated_ones_element(n: u64) -> Element {
    TailSeq::indicator_range(&BigInt::one(), &BigInt::from(n)).into()
}

/// `χ{1, …, n}`, increasing to `𝟙`.
pub fn truncated_ones() -> Family {
    let one: Element = TailSeq::ones().into();
    Family::new("truncated_ones", Kind::Seq, truncated_ones_element)
        .with_certifier(IncreasingCert { eval: Arc::new(truncated_ones_element) })
        .with_limit(one.clone(), TruncatedOnesDeviation)
        .with_supremum(one.clone())
        .with_range(one)
}

pub fn constant_one() -> Family {
    Family::constant("constant_one", StepFn::one().into()).with_range(StepFn::one().into())
}

/// `𝟙` on `[1/2, 1)`: constant and disjoint from the band `A = [0, 1/2)`.
pub fn off_band() -> Family {
    let y = StepFn::block(rat(1, 2), Rational::one(), Rational::one()).expect("valid block");
    Family::constant("off_band", y.into())
}

pub fn zero() -> Family {
    Family::zero(Kind::Step)
}

pub fn zero_seq() -> Family {
    Family::zero(Kind::Seq).renamed("zero_seq")
}

/// Per-component typewriter rates: component `c` at index `n` is `T_k` with `γ_c(k) = n`, so
/// past `n` it is bounded by `min(1, sup x_c)·2^-⌊log₂ k⌋` for the first `k` with `γ_c(k) ≥ n`.
struct GammaCert {
    gamma: Arc<Vec<Vec<u64>>>,
}

impl Certifier for GammaCert {
    fn un_rate(&self, pair: &SpacePair, x: &Element) -> Option<RateCert> {
        if shape(pair)? != Shape::Power(1) {
            return None;
        }
        let Element::Sum(xs) = x else { return None };
        let weights: Vec<Rational> = (0..self.gamma.len() as u32)
            .map(|c| {
                let f = xs.component(c);
                min_r(f.values().iter().max().expect("nonempty"), &Rational::one()).max(Rational::zero())
            })
            .collect();
        let mut breaks: Vec<u64> = vec![1];
        breaks.extend(self.gamma.iter().flatten().map(|n| n + 1));
        breaks.sort_unstable();
        breaks.dedup();
        let mut rows: Vec<(Rational, u64)> = Vec::new();
        for n in breaks {
            let mut b = Rational::zero();
            for (c, tuple) in self.gamma.iter().enumerate() {
                let k = tuple.partition_point(|&m| m < n);
                if k < tuple.len() {
                    b += &weights[c] * dyadic(floor_log2(k as u64 + 1) as u64);
                }
            }
            if rows.last().is_none_or(|(prev, _)| *prev != b) {
                rows.push((b, n));
            }
        }
        Some(RateCert::new(RateKind::Table(rows), x.to_text()))
    }
}

fn validate_gamma(gamma: &[Vec<u64>]) -> Result<()> {
    for (c, t) in gamma.iter().enumerate() {
        if t.first() == Some(&0) || t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadParams(format!("tuple {c} of Γ is not a strictly increasing sequence of positive integers")));
        }
    }
    if gamma.len() > u32::MAX as usize {
        return Err(Error::BadParams("Γ is too large".into()));
    }
    Ok(())
}

/// `y_n` with component `c` equal to `T_k` when `n` is the `k`-th entry of `γ_c`, else 0;
/// every tuple is truncated to its first `k_max` entries.
pub fn gamma_family(gamma: &[Vec<u64>], k_max: usize) -> Result<Family> {
    validate_gamma(gamma)?;
    let gamma: Arc<Vec<Vec<u64>>> = Arc::new(gamma.iter().map(|t| t.iter().copied().take(k_max).collect()).collect());
    let g = gamma.clone();
    let fam = Family::new("gamma", Kind::Sum, move |n| {
        DirectSum::new(
            g.iter()
                .enumerate()
                .filter_map(|(c, t)| t.binary_search(&n).ok().map(|k| (c as u32, typewriter_element(k as u64 + 1)))),
        )
        .into()
    })
    .with_certifier(GammaCert { gamma });
    Ok(fam.with_null_limit())
}

/// The eight default tuples, each truncated to `k` entries.
pub fn default_gamma(k: usize) -> Vec<(String, Vec<u64>)> {
    let k64 = k as u64;
    vec![
        ("full".to_string(), (1..=k64).collect()),
        ("evens".to_string(), (1..=k64).map(|i| 2 * i).collect()),
        ("odds".to_string(), (1..=k64).map(|i| 2 * i - 1).collect()),
        ("multiples_of_3".to_string(), (1..=k64).map(|i| 3 * i).collect()),
        ("squares".to_string(), (1..=k64).map(|i| i * i).collect()),
        ("powers_of_2".to_string(), (1..=k64.min(62)).map(|i| 1u64 << i).collect()),
        ("triangular".to_string(), (1..=k64).map(|i| i * (i + 1) / 2).collect()),
        ("shift_10".to_string(), (1..=k64).map(|i| i + 10).collect()),
    ]
}

pub const DEFAULT_GAMMA_K: usize = 64;

#[derive(Clone, Debug, Serialize)]
pub struct Expected {
    pub pair: String,
    pub mode: Mode,
    pub class: VerdictClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub anchor: &'static str,
    pub expected: Vec<Expected>,
}

fn rows(r: &[(&str, Mode, VerdictClass)]) -> Vec<Expected> {
    r.iter().map(|(p, m, c)| Expected { pair: p.to_string(), mode: *m, class: *c }).collect()
}

/// Every gallery entry with its expected verdicts. `pair` is `-` for modes that do not
/// depend on an ideal; uniform rows use the strong unit of the named pair.
pub fn entries() -> Vec<GalleryEntry> {
    use Mode::*;
    use VerdictClass::*;
    vec![
        GalleryEntry {
            name: "typewriter",
            params: "none",
            anchor: "converges to zero in measure but at no point of [0,1)",
            expected: rows(&[
                ("L1@L0", Un, CertifiedNull),
                ("L2@L0", Un, CertifiedNull),
                ("-", Measure, CertifiedNull),
                ("-", Pointwise, Refuted),
                ("-", Ae, Refuted),
            ]),
        },
        GalleryEntry {
            name: "typewriter_dyadic",
            params: "none",
            anchor: "the subsequence n = 2^k of typewriter, supported on [0, 2^-k)",
            expected: rows(&[("L1@L0", Un, CertifiedNull), ("-", Measure, CertifiedNull), ("-", Ae, CertifiedNull)]),
        },
        GalleryEntry {
            name: "moving_bump",
            params: "none",
            anchor: "unit-height bumps on [1/(n+1), 1/n] in C[0,1]",
            expected: rows(&[
                ("X0@C01", Un, CertifiedNull),
                ("C@C01", Un, Refuted),
                ("L1@L0", Un, CertifiedNull),
                ("L2@L0", Un, CertifiedNull),
                ("-", Measure, CertifiedNull),
                ("-", Pointwise, CertifiedNull),
                ("-", Ae, CertifiedNull),
            ]),
        },
        GalleryEntry {
            name: "unit_vectors",
            params: "none",
            anchor: "e_n: null against l1, not against linf",
            expected: rows(&[
                ("l1@RN", Un, CertifiedNull),
                ("l2@RN", Un, CertifiedNull),
                ("c0@RN", Un, CertifiedNull),
                ("c00@RN", Un, CertifiedNull),
                ("linf@RN", Un, Refuted),
                ("-", Pointwise, CertifiedNull),
                ("linf@RN", Uniform, Refuted),
            ]),
        },
        GalleryEntry {
            name: "scaled_ramp",
            params: "none",
            anchor: "z/n with z = (1, 2, 3, ...): no multiple of z is small against linf",
            expected: rows(&[
                ("linf@RN", Un, Refuted),
                ("l1@RN", Un, CertifiedNull),
                ("c0@RN", Un, CertifiedNull),
                ("-", Pointwise, CertifiedNull),
                ("linf@RN", Uniform, Refuted),
            ]),
        },
        GalleryEntry {
            name: "scaled_unit",
            params: "none",
            anchor: "(1/n)·1, uniformly null",
            expected: rows(&[
                ("linf@RN", Un, CertifiedNull),
                ("l1@RN", Un, CertifiedNull),
                ("-", Pointwise, CertifiedNull),
                ("linf@RN", Uniform, CertifiedNull),
            ]),
        },
        GalleryEntry {
            name: "disjoint_blocks",
            params: "none",
            anchor: "disjoint indicators of [2^(n-1), 2^n): null exactly for order continuous X",
            expected: rows(&[
                ("l1@RN", Un, CertifiedNull),
                ("c0@RN", Un, CertifiedNull),
                ("linf@RN", Un, Refuted),
                ("-", Pointwise, CertifiedNull),
                ("linf@RN", Uniform, Refuted),
            ]),
        },
        GalleryEntry {
            name: "constant_one",
            params: "none",
            anchor: "the constant 1 in L0",
            expected: rows(&[
                ("L1@L0", Un, Refuted),
                ("L2@L0", Un, Refuted),
                ("-", Measure, Refuted),
                ("-", Ae, Refuted),
            ]),
        },
        GalleryEntry {
            name: "off_band",
            params: "none",
            anchor: "a constant disjoint from the band [0,1/2): null against the band only",
            expected: rows(&[("bandA(1)@L0", Un, CertifiedNull), ("L1@L0", Un, Refuted)]),
        },
        GalleryEntry {
            name: "ramp_up",
            params: "none",
            anchor: "increasing indicators of [0, 1 - 1/n) with supremum 1",
            expected: rows(&[("L1@L0", Un, Refuted), ("-", Measure, Refuted), ("-", Ae, Refuted)]),
        },
        GalleryEntry {
            name: "truncated_ones",
            params: "none",
            anchor: "increasing indicators of {1..n} with supremum 1",
            expected: rows(&[("l1@RN", Un, Refuted), ("linf@RN", Un, Refuted), ("-", Pointwise, Refuted)]),
        },
        GalleryEntry {
            name: "zero",
            params: "none",
            anchor: "the zero family",
            expected: rows(&[("L1@L0", Un, CertifiedNull), ("-", Measure, CertifiedNull), ("-", Ae, CertifiedNull)]),
        },
        GalleryEntry {
            name: "zero_seq",
            params: "none",
            anchor: "the zero family of sequences",
            expected: rows(&[("l1@RN", Un, CertifiedNull), ("linf@RN", Un, CertifiedNull), ("linf@RN", Uniform, CertifiedNull)]),
        },
        GalleryEntry {
            name: "gamma",
            params: "gamma: list of strictly increasing tuples (default: 8 tuples); k: truncation length (default 64)",
            anchor: "component gamma carries typewriter(k) at the k-th entry of gamma",
            expected: rows(&[("suml1@gamma", Un, CertifiedNull)]),
        },
    ]
}

/// `(family, pair, mode) ↦ class` over every entry.
pub fn expected_table() -> BTreeMap<(String, String, Mode), VerdictClass> {
    entries()
        .into_iter()
        .flat_map(|e| e.expected.into_iter().map(move |x| ((e.name.to_string(), x.pair, x.mode), x.class)))
        .collect()
}

/// A gallery family by name; `gamma` uses the default tuples.
pub fn family(name: &str) -> Result<Family> {
    Ok(match name {
        "typewriter" => typewriter(),
        "typewriter_dyadic" => typewriter_dyadic(),
        "moving_bump" => moving_bump(),
        "unit_vectors" => unit_vectors(),
        "scaled_ramp" => scaled_ramp(),
        "scaled_unit" => scaled_unit(),
        "disjoint_blocks" => disjoint_blocks(),
        "constant_one" => constant_one(),
        "off_band" => off_band(),
        "ramp_up" => ramp_up(),
        "truncated_ones" => truncated_ones(),
        "zero" => zero(),
        "zero_seq" => zero_seq(),
        "gamma" => {
            let g: Vec<Vec<u64>> = default_gamma(DEFAULT_GAMMA_K).into_iter().map(|(_, t)| t).collect();
            gamma_family(&g, DEFAULT_GAMMA_K)?
        }
        _ => return Err(Error::UnknownFamily(name.to_string())),
    })
}

pub fn names() -> Vec<&'static str> {
    entries().iter().map(|e| e.name).collect()
}

/// The gallery families of a carrier kind.
pub fn families_of(kind: Kind) -> Vec<Family> {
    names().into_iter().filter_map(|n| family(n).ok()).filter(|f| f.kind == kind).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typewriter_five() {
        assert_eq!(typewriter_block(5), (rat(1, 4), rat(1, 2)));
        assert_eq!(typewriter_block(1), (int(0), int(1)));
        assert_eq!(typewriter_block(7), (rat(3, 4), int(1)));
    }

    #[test]
    fn dyadic_depth() {
        assert_eq!(dyadic_depth_above(&rat(1, 3)), 1);
        assert_eq!(dyadic_depth_above(&rat(1, 4)), 1);
        assert_eq!(dyadic_depth_above(&rat(1, 5)), 2);
    }

    #[test]
    fn gamma_unfolds() {
        let f = gamma_family(&[(1..=8).collect(), vec![2, 4, 8]], 8).unwrap();
        let Element::Sum(y) = f.eval(3) else { panic!() };
        assert_eq!(y.component(0), typewriter_element(3));
        assert!(y.component(1).is_zero());
        let Element::Sum(y) = f.eval(4) else { panic!() };
        assert_eq!(y.component(1), typewriter_element(2));
    }

    #[test]
    fn bad_gamma() {
        assert!(gamma_family(&[vec![3, 2]], 4).is_err());
        assert!(gamma_family(&[vec![0, 2]], 4).is_err());
    }
}
