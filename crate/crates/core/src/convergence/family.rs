use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::cert::{rational_below, AeCert, Certifier, NoCertificates, Pattern, RateCert, RateKind, Refutation};
use super::raw_gauge;
use crate::error::{Error, Result};
use crate::lattice::norm::unit_norm;
use crate::lattice::rational::{int, pow};
use crate::lattice::{Element, ExtScalar, Kind, NormValue, Op, Point, Rational};
use crate::spaces::SpacePair;

pub type EvalFn = Arc<dyn Fn(u64) -> Element + Send + Sync>;

/// A sequence `n ↦ y_n` (`n ≥ 1`) with whatever closed-form knowledge it carries.
#[derive(Clone)]
pub struct Family {
    pub name: String,
    pub kind: Kind,
    eval: EvalFn,
    pub certifier: Arc<dyn Certifier>,
    /// Declared limit and a certifier for `n ↦ y_n − limit`.
    pub limit: Option<(Element, Arc<dyn Certifier>)>,
    /// Declared supremum of an increasing family.
    pub supremum: Option<Element>,
    /// `u` with `0 ≤ y_n ≤ u` for every `n`.
    pub range: Option<Element>,
    /// The common value of a constant family.
    pub constant: Option<Element>,
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Family").field("name", &self.name).field("kind", &self.kind).finish()
    }
}

impl Family {
    pub fn new(name: impl Into<String>, kind: Kind, eval: impl Fn(u64) -> Element + Send + Sync + 'static) -> Self {
        Family {
            name: name.into(),
            kind,
            eval: Arc::new(eval),
            certifier: Arc::new(NoCertificates),
            limit: None,
            supremum: None,
            range: None,
            constant: None,
        }
    }

    pub fn with_certifier(mut self, c: impl Certifier + 'static) -> Self {
        self.certifier = Arc::new(c);
        self
    }

    pub fn with_limit(mut self, limit: Element, deviation: impl Certifier + 'static) -> Self {
        self.limit = Some((limit, Arc::new(deviation)));
        self
    }

    /// Declares 0 as the candidate limit, with the family's own certifier as deviation.
    pub fn with_null_limit(mut self) -> Self {
        self.limit = Some((Element::zero(self.kind), self.certifier.clone()));
        self
    }

    pub fn with_supremum(mut self, sup: Element) -> Self {
        self.supremum = Some(sup);
        self
    }

    pub fn with_range(mut self, u: Element) -> Self {
        self.range = Some(u);
        self
    }

    pub fn eval(&self, n: u64) -> Element {
        (self.eval)(n.max(1))
    }

    /// `n ↦ value` for every `n`; all of its certificates are computed from `value`.
    pub fn constant(name: impl Into<String>, value: Element) -> Self {
        let v = value.clone();
        let mut f = Family::new(name, value.kind(), move |_| v.clone())
            .with_certifier(ConstantCertifier { value: value.clone() });
        f.limit = Some((value.clone(), Arc::new(ConstantCertifier { value: Element::zero(value.kind()) })));
        f.constant = Some(value);
        f
    }

    pub fn zero(kind: Kind) -> Self {
        Family::constant("zero", Element::zero(kind))
    }

    /// `n ↦ y_n − c`. Certificates carry over when `c` is zero, when the family is
    /// constant, and when `c` is the declared limit.
    pub fn shifted(&self, c: &Element) -> Result<Family> {
        if c.kind() != self.kind {
            return Err(Error::KindMismatch(format!("cannot shift a {} family by a {} element", self.kind, c.kind())));
        }
        if c.is_zero() {
            let mut out = self.clone();
            if let Some((limit, dev)) = &self.limit {
                if limit.is_zero() {
                    out.certifier = dev.clone();
                }
            }
            return Ok(out);
        }
        let name = format!("{} - ({})", self.name, c.to_text());
        if let Some(v) = &self.constant {
            return Ok(Family::constant(name, v.sub(c)?));
        }
        let base = self.clone();
        let shift = c.clone();
        let mut out = Family::new(name, self.kind, move |n| base.eval(n).sub(&shift).expect("same kind"));
        if let Some((limit, dev)) = &self.limit {
            if limit == c {
                out.certifier = dev.clone();
            }
            out.limit = Some((limit.sub(c)?, dev.clone()));
        }
        Ok(out)
    }

    /// `n ↦ y_n op z_n`, with limit `a op b` when both limits are declared.
    pub fn combine(&self, other: &Family, op: Op) -> Result<Family> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch(format!("cannot combine {} and {} families", self.kind, other.kind)));
        }
        let (a, b) = (self.clone(), other.clone());
        let name = format!("({} {:?} {})", self.name, op, other.name);
        let mut out = Family::new(name, self.kind, move |n| a.eval(n).combine(&b.eval(n), op).expect("same kind"));
        if let (Some((la, da)), Some((lb, db))) = (&self.limit, &other.limit) {
            out.limit = Some((la.combine(lb, op)?, Arc::new(SumCertifier { a: da.clone(), b: db.clone() })));
        }
        Ok(out)
    }

    /// `k ↦ y_{n_k}` for a strictly increasing index map. Rate bounds are nonincreasing
    /// and `n_k ≥ k`, so they transfer; refutations do not.
    pub fn subsequence(&self, name: impl Into<String>, index: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Family {
        let base = self.clone();
        let index = Arc::new(index);
        let idx = index.clone();
        let mut out = Family::new(name, self.kind, move |k| base.eval(idx(k)));
        out.certifier = Arc::new(RatesOnly(self.certifier.clone()));
        out.limit = self.limit.as_ref().map(|(l, d)| (l.clone(), Arc::new(RatesOnly(d.clone())) as Arc<dyn Certifier>));
        out.range = self.range.clone();
        out
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Certificates for a constant family, derived by exact evaluation of its value.
pub struct ConstantCertifier {
    pub value: Element,
}

impl ConstantCertifier {
    fn gauge(&self, pair: &SpacePair, x: &Element) -> Option<NormValue> {
        raw_gauge(&self.value, x, pair).ok()
    }

    fn sup_abs(&self) -> Option<Rational> {
        match &self.value {
            Element::Step(f) => f.values().iter().map(|v| v.abs()).max(),
            Element::Pl(f) => f.ys().iter().map(|v| v.abs()).max(),
            _ => None,
        }
    }
}

impl Certifier for ConstantCertifier {
    fn un_rate(&self, pair: &SpacePair, x: &Element) -> Option<RateCert> {
        self.gauge(pair, x).filter(NormValue::is_zero).map(|_| RateCert::zero_after(0, x.to_text()))
    }

    fn un_refutation(&self, pair: &SpacePair, x: &Element) -> Option<Refutation> {
        let g = self.gauge(pair, x)?;
        let eps = rational_below(&g)?;
        Some(Refutation::new(eps, Pattern::From(1), "constant family with nonzero gauge"))
    }

    fn measure_rate(&self, eps: &Rational) -> Option<RateCert> {
        let m = self.value.level_measure(eps).ok()?;
        m.is_zero().then(|| RateCert::zero_after(0, "all levels"))
    }

    fn measure_refutation(&self) -> Option<Refutation> {
        let half = self.sup_abs()? / int(2);
        if half.is_zero() {
            return None;
        }
        let mu = self.value.level_measure(&half).ok()?;
        let eps = if mu < half { mu } else { half };
        Some(Refutation::new(eps, Pattern::From(1), "constant nonzero function"))
    }

    fn point_rate(&self, at: &Point) -> Option<RateCert> {
        self.value.eval(at).ok()?.is_zero().then(|| RateCert::zero_after(0, "point"))
    }

    fn point_refutation(&self, at: &Point) -> Option<Refutation> {
        let v = self.value.eval(at).ok()?.abs();
        (!v.is_zero()).then(|| Refutation::new(v, Pattern::From(1), "constant nonzero value"))
    }

    fn uniform_rate(&self, e: &Element) -> Option<RateCert> {
        (unit_norm(&self.value, e).ok()? == ExtScalar::zero()).then(|| RateCert::zero_after(0, e.to_text()))
    }

    fn uniform_refutation(&self, e: &Element) -> Option<Refutation> {
        let eps = match unit_norm(&self.value, e).ok()? {
            ExtScalar::PositiveInfinity => Rational::one(),
            ExtScalar::Finite(r) if r.is_zero() => return None,
            ExtScalar::Finite(r) => r,
        };
        Some(Refutation::new(eps, Pattern::From(1), "constant family outside the zero class"))
    }

    fn ae(&self) -> Option<AeCert> {
        if self.value.is_zero() {
            return Some(AeCert::Decay { null_set: Vec::new() });
        }
        // Recurrence level: the smallest nonzero |value| of a step function.
        let Element::Step(f) = &self.value else { return None };
        let epsilon = f.values().iter().filter(|v| !v.is_zero()).map(|v| v.abs()).min()?;
        Some(AeCert::Recurrence { region: f.support(), epsilon })
    }
}

/// Forwards only the certificates that survive passing to a subsequence.
pub struct RatesOnly(pub Arc<dyn Certifier>);

impl Certifier for RatesOnly {
    fn un_rate(&self, pair: &SpacePair, x: &Element) -> Option<RateCert> {
        self.0.un_rate(pair, x)
    }
    fn measure_rate(&self, eps: &Rational) -> Option<RateCert> {
        self.0.measure_rate(eps)
    }
    fn point_rate(&self, at: &Point) -> Option<RateCert> {
        self.0.point_rate(at)
    }
    fn uniform_rate(&self, e: &Element) -> Option<RateCert> {
        self.0.uniform_rate(e)
    }
    fn ae(&self) -> Option<AeCert> {
        match self.0.ae() {
            Some(d @ AeCert::Decay { .. }) => Some(d),
            _ => None,
        }
    }
}

/// Deviation certificate of a combined family: `|y∘z − a∘b| ≤ |y − a| + |z − b|` for each
/// lattice or linear operation, and `‖(u + v) ∧ x‖ ≤ ‖u ∧ x‖ + ‖v ∧ x‖`.
pub struct SumCertifier {
    pub a: Arc<dyn Certifier>,
    pub b: Arc<dyn Certifier>,
}

impl SumCertifier {
    fn join(a: RateCert, b: RateCert) -> Option<RateCert> {
        if a.root != b.root {
            return None;
        }
        // (s + t)^p ≤ 2^(p−1)(s^p + t^p)
        let factor = pow(&int(2), a.root - 1);
        let applies_to = a.applies_to.clone();
        Some(RateCert::rooted(RateKind::Sum { a: Box::new(a.kind), b: Box::new(b.kind), factor }, a.root, applies_to))
    }
}

impl Certifier for SumCertifier {
    fn un_rate(&self, pair: &SpacePair, x: &Element) -> Option<RateCert> {
        Self::join(self.a.un_rate(pair, x)?, self.b.un_rate(pair, x)?)
    }
}
