//! Exact lattice elements over four carriers and the operations shared by all of them.

pub mod norm;
pub mod pl;
pub mod rational;
pub mod region;
pub mod seq;
pub mod step;
pub mod sum;
mod text;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Serialize, Serializer};

pub use norm::{NormSpec, NormValue};
pub use pl::PlFn;
pub use rational::{ExtScalar, Rational};
pub use region::Region;
pub use seq::{Tail, TailSeq};
pub use step::StepFn;
pub use sum::DirectSum;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    Step,
    Pl,
    Seq,
    Sum,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Step => "step",
            Kind::Pl => "pl",
            Kind::Seq => "seq",
            Kind::Sum => "sum",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Meet,
    Join,
    Sum,
    Diff,
}

impl Op {
    fn apply(self, a: &Rational, b: &Rational) -> Rational {
        match self {
            Op::Meet => a.min(b).clone(),
            Op::Join => a.max(b).clone(),
            Op::Sum => a + b,
            Op::Diff => a - b,
        }
    }
}

/// Where to read an element: a point of `[0, 1]`, a coordinate, or a component and point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    T(Rational),
    N(BigInt),
    Comp(u32, Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Step(StepFn),
    Pl(PlFn),
    Seq(TailSeq),
    Sum(DirectSum),
}

impl Element {
    pub fn kind(&self) -> Kind {
        match self {
            Element::Step(_) => Kind::Step,
            Element::Pl(_) => Kind::Pl,
            Element::Seq(_) => Kind::Seq,
            Element::Sum(_) => Kind::Sum,
        }
    }

    pub fn zero(kind: Kind) -> Element {
        match kind {
            Kind::Step => Element::Step(StepFn::zero()),
            Kind::Pl => Element::Pl(PlFn::zero()),
            Kind::Seq => Element::Seq(TailSeq::zero()),
            Kind::Sum => Element::Sum(DirectSum::zero()),
        }
    }

    /// The constant-one element of a function or sequence carrier.
    pub fn one(kind: Kind) -> Result<Element> {
        match kind {
            Kind::Step => Ok(Element::Step(StepFn::one())),
            Kind::Pl => Ok(Element::Pl(PlFn::one())),
            Kind::Seq => Ok(Element::Seq(TailSeq::ones())),
            Kind::Sum => Err(Error::KindMismatch("direct sums have no single constant-one element".into())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Step(f) => f.is_zero(),
            Element::Pl(f) => f.is_zero(),
            Element::Seq(s) => s.is_zero(),
            Element::Sum(s) => s.is_zero(),
        }
    }

    pub fn combine(&self, other: &Element, op: Op) -> Result<Element> {
        Ok(match (self, other) {
            (Element::Step(a), Element::Step(b)) => Element::Step(a.zip_with(b, |x, y| op.apply(x, y))),
            (Element::Pl(a), Element::Pl(b)) => {
                let lattice = matches!(op, Op::Meet | Op::Join);
                Element::Pl(a.zip_with(b, lattice, |x, y| op.apply(x, y)))
            }
            (Element::Seq(a), Element::Seq(b)) => Element::Seq(match op {
                Op::Meet => a.meet(b),
                Op::Join => a.join(b),
                Op::Sum => a.sum(b),
                Op::Diff => a.diff(b),
            }),
            (Element::Sum(a), Element::Sum(b)) => {
                Element::Sum(a.zip_with(b, |x, y| x.zip_with(y, |s, t| op.apply(s, t))))
            }
            _ => {
                return Err(Error::KindMismatch(format!("cannot combine {} with {}", self.kind(), other.kind())));
            }
        })
    }

    pub fn meet(&self, other: &Element) -> Result<Element> {
        self.combine(other, Op::Meet)
    }

    pub fn join(&self, other: &Element) -> Result<Element> {
        self.combine(other, Op::Join)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.combine(other, Op::Sum)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.combine(other, Op::Diff)
    }

    pub fn scale(&self, c: &Rational) -> Element {
        match self {
            Element::Step(f) => Element::Step(f.scale(c)),
            Element::Pl(f) => Element::Pl(f.scale(c)),
            Element::Seq(s) => Element::Seq(s.scale(c)),
            Element::Sum(s) => Element::Sum(s.scale(c)),
        }
    }

    pub fn abs_val(&self) -> Element {
        match self {
            Element::Step(f) if f.values().iter().all(|v| !v.is_negative()) => self.clone(),
            Element::Step(f) => Element::Step(f.map(|v| v.abs())),
            Element::Pl(f) if f.ys().iter().all(|v| !v.is_negative()) => self.clone(),
            Element::Pl(f) => Element::Pl(f.map_split_zero(|v| v.abs())),
            Element::Seq(s) => Element::Seq(s.abs()),
            Element::Sum(s) => Element::Sum(s.map(|f| f.map(|v| v.abs()))),
        }
    }

    /// Positive part `a ∨ 0`.
    pub fn pos(&self) -> Element {
        self.join(&Element::zero(self.kind())).expect("same kind")
    }

    pub fn eval(&self, at: &Point) -> Result<Rational> {
        match (self, at) {
            (Element::Step(f), Point::T(t)) => Ok(f.eval(t)),
            (Element::Pl(f), Point::T(t)) => Ok(f.eval(t)),
            (Element::Seq(s), Point::N(n)) => Ok(s.eval(n)),
            (Element::Sum(s), Point::Comp(id, t)) => Ok(s.component(*id).eval(t)),
            _ => Err(Error::KindMismatch(format!("cannot evaluate {} at {at:?}", self.kind()))),
        }
    }

    /// `a ≤ b` everywhere, decided exactly: `a ∧ b = a`.
    pub fn le(&self, other: &Element) -> Result<bool> {
        Ok(self.meet(other)? == *self)
    }

    pub fn is_positive(&self) -> bool {
        self.abs_val() == *self
    }

    pub fn norm(&self, spec: &NormSpec) -> Result<NormValue> {
        norm::norm(self, spec)
    }

    /// `μ{t : |f(t)| > ε}` for function carriers; for direct sums, the total over components.
    pub fn level_measure(&self, eps: &Rational) -> Result<Rational> {
        if !eps.is_positive() {
            return Err(Error::BadParams("level threshold must be positive".into()));
        }
        match self {
            Element::Step(f) => Ok(f.level_measure(eps)),
            Element::Pl(f) => Ok(f.level_measure(eps)),
            Element::Sum(s) => Ok(s.components().values().map(|f| f.level_measure(eps)).sum()),
            Element::Seq(_) => Err(Error::KindMismatch("level measure needs a function carrier".into())),
        }
    }

    pub fn superlevel_set(&self, eps: &Rational) -> Result<Region> {
        match self {
            Element::Step(f) => Ok(f.superlevel_set(eps)),
            Element::Pl(f) => Ok(f.superlevel_set(eps)),
            _ => Err(Error::KindMismatch(format!("superlevel sets of {} elements", self.kind()))),
        }
    }

    /// `f · χ_A`.
    pub fn restrict(&self, region: &Region) -> Result<Element> {
        match self {
            Element::Step(f) => Ok(Element::Step(f.restrict(region))),
            Element::Sum(s) => Ok(Element::Sum(s.map(|f| f.restrict(region)))),
            _ => Err(Error::KindMismatch(format!("restrict needs a step carrier, got {}", self.kind()))),
        }
    }

    pub fn to_text(&self) -> String {
        text::format(self)
    }

    pub fn parse(s: &str) -> Result<Element> {
        text::parse(s)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl From<StepFn> for Element {
    fn from(f: StepFn) -> Self {
        Element::Step(f)
    }
}

impl From<PlFn> for Element {
    fn from(f: PlFn) -> Self {
        Element::Pl(f)
    }
}

impl From<TailSeq> for Element {
    fn from(s: TailSeq) -> Self {
        Element::Seq(s)
    }
}

impl From<DirectSum> for Element {
    fn from(s: DirectSum) -> Self {
        Element::Sum(s)
    }
}
