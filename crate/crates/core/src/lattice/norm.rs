//! Norms on the four carriers, including the unit norm `‖x‖_e = inf{λ : |x| ≤ λe}`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::pl::PlFn;
use super::rational::{cmp_q, fmt_rat, pow, power_sum, to_f64, ExtScalar, Rational};
use super::seq::{overlay, Line, TailSeq};
use super::step::StepFn;
use super::sum::DirectSum;
use super::Element;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NormSpec {
    L1,
    Lp(Rational),
    Sup,
    Unit(Box<Element>),
    Ell1,
    EllInf,
    SumL1,
}

impl NormSpec {
    pub fn unit(e: Element) -> Self {
        NormSpec::Unit(Box::new(e))
    }

    pub fn label(&self) -> String {
        match self {
            NormSpec::L1 => "L1".into(),
            NormSpec::Lp(p) => format!("L{}", fmt_p(p)),
            NormSpec::Sup => "sup".into(),
            NormSpec::Unit(e) => format!("unit({})", e.to_text()),
            NormSpec::Ell1 => "l1".into(),
            NormSpec::EllInf => "linf".into(),
            NormSpec::SumL1 => "suml1".into(),
        }
    }
}

pub(crate) fn fmt_p(p: &Rational) -> String {
    if p.is_integer() { p.numer().to_string() } else { fmt_rat(p) }
}

/// A norm value. Integer `p > 1` norms are kept exactly as their `p`-th power.
#[derive(Clone, Debug, PartialEq)]
pub enum NormValue {
    Exact(ExtScalar),
    /// The norm equals `power^(1/p)`.
    Power { p: u32, power: ExtScalar },
    /// Non-integer `p`; relative tolerance 1e-12.
    Approx(f64),
}

pub const APPROX_REL_TOL: f64 = 1e-12;

impl NormValue {
    pub fn zero() -> Self {
        NormValue::Exact(ExtScalar::zero())
    }

    pub fn exact(r: Rational) -> Self {
        NormValue::Exact(ExtScalar::Finite(r))
    }

    pub fn infinite() -> Self {
        NormValue::Exact(ExtScalar::PositiveInfinity)
    }

    pub fn is_infinite(&self) -> bool {
        match self {
            NormValue::Exact(v) | NormValue::Power { power: v, .. } => !v.is_finite(),
            NormValue::Approx(f) => f.is_infinite(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            NormValue::Exact(v) | NormValue::Power { power: v, .. } => *v == ExtScalar::zero(),
            NormValue::Approx(f) => *f == 0.0,
        }
    }

    pub fn is_approx(&self) -> bool {
        matches!(self, NormValue::Approx(_))
    }

    /// `(root, stored)` with value `stored^(1/root)`, when exact.
    fn rooted(&self) -> Option<(u32, &ExtScalar)> {
        match self {
            NormValue::Exact(v) => Some((1, v)),
            NormValue::Power { p, power } => Some((*p, power)),
            NormValue::Approx(_) => None,
        }
    }

    /// The exact value, when it is a rational or `∞`.
    pub fn as_exact(&self) -> Option<ExtScalar> {
        match self {
            NormValue::Exact(v) => Some(v.clone()),
            NormValue::Power { power: ExtScalar::PositiveInfinity, .. } => Some(ExtScalar::PositiveInfinity),
            NormValue::Power { p, power: ExtScalar::Finite(r) } => exact_root(r, *p).map(ExtScalar::Finite),
            NormValue::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Exact(v) => v.to_f64(),
            NormValue::Power { p, power } => power.to_f64().powf(1.0 / *p as f64),
            NormValue::Approx(f) => *f,
        }
    }

    pub fn cmp_value(&self, other: &NormValue) -> Ordering {
        match (self.rooted(), other.rooted()) {
            (Some((p, a)), Some((q, b))) => match (a, b) {
                (ExtScalar::Finite(a), ExtScalar::Finite(b)) => {
                    if p == q { cmp_q(a, b) } else { cmp_q(&pow(a, q), &pow(b, p)) }
                }
                _ => a.cmp(b),
            },
            _ => approx_cmp(self.to_f64(), other.to_f64()),
        }
    }

    pub fn cmp_rat(&self, r: &Rational) -> Ordering {
        match self.rooted() {
            Some((_, ExtScalar::PositiveInfinity)) => Ordering::Greater,
            Some((1, ExtScalar::Finite(a))) => cmp_q(a, r),
            Some((p, ExtScalar::Finite(a))) => cmp_q(a, &pow(r, p)),
            None => approx_cmp(self.to_f64(), to_f64(r)),
        }
    }

    pub fn lt_rat(&self, r: &Rational) -> bool {
        self.cmp_rat(r) == Ordering::Less
    }

    /// `|α| · self`, kept in the same representation.
    pub fn mul_abs(&self, alpha: &Rational) -> NormValue {
        let a = alpha.abs();
        match self {
            NormValue::Exact(v) => NormValue::Exact(v.mul_rat(&a)),
            NormValue::Power { p, power } => NormValue::Power { p: *p, power: power.mul_rat(&pow(&a, *p)) },
            NormValue::Approx(f) => NormValue::Approx(f * to_f64(&a)),
        }
    }

    /// `self ≤ b + c`, exact for like-rooted values with root 1 or 2.
    pub fn le_sum(&self, b: &NormValue, c: &NormValue) -> bool {
        if b.is_infinite() || c.is_infinite() {
            return true;
        }
        if self.is_infinite() {
            return false;
        }
        if let (Some((p, ExtScalar::Finite(a))), Some((q, ExtScalar::Finite(bb))), Some((r, ExtScalar::Finite(cc)))) =
            (self.rooted(), b.rooted(), c.rooted())
        {
            if p == 1 && q == 1 && r == 1 {
                return *a <= bb + cc;
            }
            if p == 2 && q == 2 && r == 2 {
                // √a ≤ √b + √c  ⟺  a − b − c ≤ 2√(bc)
                let d = a - bb - cc;
                return !d.is_positive() || &d * &d <= Rational::from_integer(4.into()) * bb * cc;
            }
        }
        let (x, y) = (self.to_f64(), b.to_f64() + c.to_f64());
        x <= y * (1.0 + APPROX_REL_TOL) + f64::MIN_POSITIVE
    }
}

fn approx_cmp(a: f64, b: f64) -> Ordering {
    if a.is_infinite() || b.is_infinite() {
        return a.partial_cmp(&b).unwrap_or(Ordering::Equal);
    }
    let scale = a.abs().max(b.abs());
    if (a - b).abs() <= APPROX_REL_TOL * scale {
        Ordering::Equal
    } else {
        a.partial_cmp(&b).unwrap_or(Ordering::Equal)
    }
}

/// `r^(1/p)` when it is rational.
fn exact_root(r: &Rational, p: u32) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().nth_root(p);
    let d = r.denom().nth_root(p);
    if num_traits::pow(n.clone(), p as usize) == *r.numer() && num_traits::pow(d.clone(), p as usize) == *r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Exact(v) => write!(f, "{v}"),
            NormValue::Power { p, power } => match self.as_exact() {
                Some(v) => write!(f, "{v}"),
                None => write!(f, "({power})^(1/{p})"),
            },
            NormValue::Approx(x) => write!(f, "{x:e}"),
        }
    }
}

impl Serialize for NormValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn norm(x: &Element, spec: &NormSpec) -> Result<NormValue> {
    let mismatch = || Error::KindMismatch(format!("norm {} does not apply to {} elements", spec.label(), x.kind()));
    match (spec, x) {
        (NormSpec::L1, Element::Step(f)) => Ok(NormValue::exact(step_power_integral(f, 1))),
        (NormSpec::L1, Element::Pl(f)) => Ok(NormValue::exact(pl_power_integral(f, 1))),
        (NormSpec::Lp(p), Element::Step(_) | Element::Pl(_) | Element::Seq(_)) => lp_norm(x, p),
        (NormSpec::Sup, Element::Step(f)) => Ok(NormValue::exact(f.values().iter().map(|v| v.abs()).max().unwrap())),
        (NormSpec::Sup, Element::Pl(f)) => Ok(NormValue::exact(f.ys().iter().map(|v| v.abs()).max().unwrap())),
        (NormSpec::Sup | NormSpec::EllInf, Element::Seq(s)) => Ok(NormValue::Exact(ell_inf(s))),
        (NormSpec::Ell1, Element::Seq(s)) => Ok(NormValue::Exact(ell_power(s, 1))),
        (NormSpec::SumL1, Element::Sum(s)) => {
            Ok(NormValue::exact(s.components().values().map(|f| step_power_integral(f, 1)).sum()))
        }
        (NormSpec::Unit(e), _) => unit_norm(x, e).map(NormValue::Exact),
        _ => Err(mismatch()),
    }
}

fn lp_norm(x: &Element, p: &Rational) -> Result<NormValue> {
    if *p < Rational::one() {
        return Err(Error::BadParams(format!("Lp needs p ≥ 1, got {}", fmt_rat(p))));
    }
    if p.is_integer() {
        let k = p.to_integer().to_u32().ok_or_else(|| Error::BadParams("exponent too large".into()))?;
        let power = match x {
            Element::Step(f) => ExtScalar::Finite(step_power_integral(f, k)),
            Element::Pl(f) => ExtScalar::Finite(pl_power_integral(f, k)),
            Element::Seq(s) => ell_power(s, k),
            Element::Sum(_) => unreachable!(),
        };
        return Ok(if k == 1 { NormValue::Exact(power) } else { NormValue::Power { p: k, power } });
    }
    let pf = to_f64(p);
    let integral = match x {
        Element::Step(f) => f.pieces().map(|(a, b, v)| to_f64(&(b - a)) * to_f64(&v.abs()).powf(pf)).sum::<f64>(),
        Element::Pl(f) => {
            let g = f.map_split_zero(|v| v.abs());
            g.pieces()
                .map(|((x0, y0), (x1, y1))| {
                    let (len, a, b) = (to_f64(&(x1 - x0)), to_f64(y0), to_f64(y1));
                    if (a - b).abs() <= f64::EPSILON * a.max(b) {
                        len * a.powf(pf)
                    } else {
                        len * (b.powf(pf + 1.0) - a.powf(pf + 1.0)) / ((pf + 1.0) * (b - a))
                    }
                })
                .sum()
        }
        _ => return Err(Error::KindMismatch("non-integer ℓp norms of sequences are not supported".into())),
    };
    Ok(NormValue::Approx(integral.powf(1.0 / pf)))
}

/// `‖a ∧ b‖` for nonnegative `a` and `b` of one function carrier, summed over the merged
/// pieces without building the meet. `None` when the norm is not an exact power norm.
pub fn meet_norm_nonneg(a: &Element, b: &Element, spec: &NormSpec) -> Option<NormValue> {
    let k: u32 = match spec {
        NormSpec::L1 => 1,
        NormSpec::Lp(p) if p.is_integer() => p.to_integer().to_u32()?,
        NormSpec::Sup => 0,
        _ => return None,
    };
    let total = match (a, b) {
        (Element::Step(f), Element::Step(g)) => {
            let (fb, gb) = (f.breaks(), g.breaks());
            let (mut i, mut j) = (0, 0);
            let mut left = Rational::zero();
            let mut acc = Rational::zero();
            while i < f.values().len() && j < g.values().len() {
                let right = fb[i + 1].clone().min(gb[j + 1].clone());
                let m = f.values()[i].clone().min(g.values()[j].clone());
                if k == 0 {
                    acc = acc.max(m);
                } else if !m.is_zero() {
                    acc += (&right - &left) * pow(&m, k);
                }
                if fb[i + 1] == right {
                    i += 1;
                }
                if gb[j + 1] == right {
                    j += 1;
                }
                left = right;
            }
            acc
        }
        (Element::Pl(f), Element::Pl(g)) => {
            let (Some((fl, fh)), Some((gl, gh))) = (f.support_hull(), g.support_hull()) else {
                return Some(if k < 2 { NormValue::exact(Rational::zero()) } else { NormValue::Power { p: k, power: ExtScalar::zero() } });
            };
            let (lo, hi) = (fl.max(gl), fh.min(gh));
            if lo > hi {
                return Some(if k < 2 { NormValue::exact(Rational::zero()) } else { NormValue::Power { p: k, power: ExtScalar::zero() } });
            }
            let (xs, ms) = f.min_nodes(g, &lo, &hi);
            if k == 0 {
                ms.into_iter().max()?
            } else {
                let mut acc = Rational::zero();
                for w in 0..xs.len().saturating_sub(1) {
                    let (y0, y1) = (&ms[w], &ms[w + 1]);
                    if y0.is_zero() && y1.is_zero() {
                        continue;
                    }
                    let len = &xs[w + 1] - &xs[w];
                    acc += if y0 == y1 {
                        len * pow(y0, k)
                    } else {
                        len * (pow(y1, k + 1) - pow(y0, k + 1)) / (Rational::from_integer((k + 1).into()) * (y1 - y0))
                    };
                }
                acc
            }
        }
        _ => return None,
    };
    Some(match k {
        0 | 1 => NormValue::exact(total),
        _ => NormValue::Power { p: k, power: ExtScalar::Finite(total) },
    })
}

/// `∫ |f|^p`.
pub fn step_power_integral(f: &StepFn, p: u32) -> Rational {
    f.pieces().map(|(a, b, v)| (b - a) * pow(&v.abs(), p)).sum()
}

/// `∫ |f|^p`, exact: on each sign-constant affine piece `∫ g^p = len·(g₁^{p+1} − g₀^{p+1}) / ((p+1)(g₁ − g₀))`.
pub fn pl_power_integral(f: &PlFn, p: u32) -> Rational {
    let g = f.map_split_zero(|v| v.abs());
    g.pieces()
        .map(|((x0, y0), (x1, y1))| {
            let len = x1 - x0;
            if y0 == y1 {
                len * pow(y0, p)
            } else {
                len * (pow(y1, p + 1) - pow(y0, p + 1)) / (Rational::from_integer((p + 1).into()) * (y1 - y0))
            }
        })
        .sum()
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `Σ_{n=lo}^{hi} |line(n)|^p` for `1 ≤ lo ≤ hi`.
fn line_power_sum(line: &Line, lo: &BigInt, hi: &BigInt, p: u32) -> Rational {
    let mut ranges = vec![(lo.clone(), hi.clone())];
    if !line.slope.is_zero() {
        let root = -&line.intercept / &line.slope;
        let k = root.numer().div_floor(root.denom());
        if *lo <= k && k < *hi {
            ranges = vec![(lo.clone(), k.clone()), (k + 1, hi.clone())];
        }
    }
    let mut total = Rational::zero();
    for (u, v) in ranges {
        let mut l = line.clone();
        if l.at(&u).is_negative() || l.at(&v).is_negative() {
            l = l.scale(&-Rational::one());
        }
        for j in 0..=p {
            let coeff = Rational::from_integer(binomial(p, j)) * pow(&l.slope, j) * pow(&l.intercept, p - j);
            if coeff.is_zero() {
                continue;
            }
            total += coeff * (power_sum(j, &v) - power_sum(j, &(&u - 1)));
        }
    }
    total
}

/// The norm of the finitely supported sequence `(v_1, …, v_m, 0, 0, …)` with every `v_i ≥ 0`,
/// for the norms that have a closed form on such sequences.
pub(crate) fn finite_nonneg_norm(values: &[Rational], spec: &NormSpec) -> Option<NormValue> {
    match spec {
        NormSpec::Ell1 => Some(NormValue::exact(values.iter().sum())),
        NormSpec::Sup | NormSpec::EllInf => Some(NormValue::exact(values.iter().max().cloned().unwrap_or_default())),
        NormSpec::Lp(p) if p.is_integer() && *p > Rational::one() => {
            let k = p.to_integer().to_u32()?;
            let power = ExtScalar::Finite(values.iter().map(|v| pow(v, k)).sum());
            Some(NormValue::Power { p: k, power })
        }
        _ => None,
    }
}

/// `Σ |x_n|^p`, infinite unless the tail is zero.
pub fn ell_power(s: &TailSeq, p: u32) -> ExtScalar {
    if s.support_end().is_none() {
        return ExtScalar::PositiveInfinity;
    }
    ExtScalar::Finite(s.segments().iter().map(|seg| line_power_sum(&seg.line, &seg.start, &seg.end, p)).sum())
}

pub fn ell_inf(s: &TailSeq) -> ExtScalar {
    let tail = s.tail_line();
    if !tail.slope.is_zero() {
        return ExtScalar::PositiveInfinity;
    }
    let mut m = tail.intercept.abs();
    for seg in s.segments() {
        for n in [&seg.start, &seg.end] {
            let v = seg.line.at(n).abs();
            if v > m {
                m = v;
            }
        }
    }
    ExtScalar::Finite(m)
}

/// `‖x‖_e`; `∞` when no multiple of `e` dominates `|x|`.
pub fn unit_norm(x: &Element, e: &Element) -> Result<ExtScalar> {
    if !e.is_positive() {
        return Err(Error::BadUnit(format!("unit {} is not positive", e.to_text())));
    }
    match (x, e) {
        (Element::Step(x), Element::Step(e)) => Ok(step_unit_norm(x, e)),
        (Element::Pl(x), Element::Pl(e)) => Ok(pl_unit_norm(x, e)),
        (Element::Seq(x), Element::Seq(e)) => Ok(seq_unit_norm(x, e)),
        (Element::Sum(x), Element::Sum(e)) => Ok(sum_unit_norm(x, e)),
        _ => Err(Error::KindMismatch(format!("unit norm of a {} element against a {} unit", x.kind(), e.kind()))),
    }
}

fn step_unit_norm(x: &StepFn, e: &StepFn) -> ExtScalar {
    let mut out = ExtScalar::zero();
    // Encode ∞ as a sentinel piece value so zip_with can stay a rational map.
    let ratio = x.zip_with(e, |a, b| if b.is_zero() { if a.is_zero() { Rational::zero() } else { -Rational::one() } } else { a.abs() / b });
    for v in ratio.values() {
        if v.is_negative() {
            return ExtScalar::PositiveInfinity;
        }
        out = out.max(ExtScalar::Finite(v.clone()));
    }
    out
}

fn sum_unit_norm(x: &DirectSum, e: &DirectSum) -> ExtScalar {
    x.components()
        .iter()
        .map(|(id, f)| step_unit_norm(f, &e.component(*id)))
        .fold(ExtScalar::zero(), ExtScalar::max)
}

/// Supremum of `X/E` on a piece where `X ≥ 0` and `E ≥ 0` are affine with the given
/// endpoint values; at an endpoint where `E = 0` the one-sided limit is used.
fn affine_ratio_sup(x0: &Rational, x1: &Rational, e0: &Rational, e1: &Rational) -> ExtScalar {
    if e0.is_zero() && e1.is_zero() {
        return if x0.is_zero() && x1.is_zero() { ExtScalar::zero() } else { ExtScalar::PositiveInfinity };
    }
    let mut out = ExtScalar::zero();
    for (xv, ev) in [(x0, e0), (x1, e1)] {
        let v = if ev.is_zero() {
            if !xv.is_zero() {
                return ExtScalar::PositiveInfinity;
            }
            ((x1 - x0) / (e1 - e0)).abs()
        } else {
            xv / ev
        };
        out = out.max(ExtScalar::Finite(v));
    }
    out
}

fn pl_unit_norm(x: &PlFn, e: &PlFn) -> ExtScalar {
    let xa = x.map_split_zero(|v| v.abs());
    // Both |x| and e are affine between consecutive merged nodes.
    let mut nodes: Vec<Rational> = xa.xs().to_vec();
    nodes.extend(e.xs().iter().cloned());
    nodes.sort();
    nodes.dedup();
    let mut out = ExtScalar::zero();
    for w in nodes.windows(2) {
        let r = affine_ratio_sup(&xa.eval(&w[0]), &xa.eval(&w[1]), &e.eval(&w[0]), &e.eval(&w[1]));
        out = out.max(r);
        if !out.is_finite() {
            break;
        }
    }
    out
}

fn seq_unit_norm(x: &TailSeq, e: &TailSeq) -> ExtScalar {
    let xa = x.abs();
    let mut out = ExtScalar::zero();
    for (start, end, lx, le) in overlay(&xa, e) {
        let r = match end {
            Some(end) => finite_seq_ratio(&lx, &le, start, end),
            None => tail_seq_ratio(&lx, &le, start),
        };
        out = out.max(r);
        if !out.is_finite() {
            break;
        }
    }
    out
}

// `|x|` is affine and nonnegative on each overlay piece, so `x/e` is monotone there.
fn finite_seq_ratio(lx: &Line, le: &Line, mut lo: BigInt, mut hi: BigInt) -> ExtScalar {
    for n in [lo.clone(), hi.clone()] {
        if le.at(&n).is_zero() && !lx.at(&n).is_zero() {
            return ExtScalar::PositiveInfinity;
        }
    }
    if le.at(&lo).is_zero() {
        lo += 1;
    }
    if lo <= hi && le.at(&hi).is_zero() {
        hi -= 1;
    }
    if lo > hi {
        return ExtScalar::zero();
    }
    let a = lx.at(&lo) / le.at(&lo);
    let b = lx.at(&hi) / le.at(&hi);
    ExtScalar::Finite(a.max(b))
}

fn tail_seq_ratio(lx: &Line, le: &Line, mut lo: BigInt) -> ExtScalar {
    if le.slope.is_zero() && le.intercept.is_zero() {
        return if lx.slope.is_zero() && lx.intercept.is_zero() { ExtScalar::zero() } else { ExtScalar::PositiveInfinity };
    }
    if le.at(&lo).is_zero() {
        if !lx.at(&lo).is_zero() {
            return ExtScalar::PositiveInfinity;
        }
        lo += 1;
    }
    let first = lx.at(&lo) / le.at(&lo);
    let limit = if le.slope.is_zero() {
        if !lx.slope.is_zero() {
            return ExtScalar::PositiveInfinity;
        }
        &lx.intercept / &le.intercept
    } else {
        &lx.slope / &le.slope
    };
    ExtScalar::Finite(first.max(limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::{int, rat};
    use crate::lattice::seq::Tail;

    #[test]
    fn step_norms() {
        let f = StepFn::new(vec![rat(0, 1), rat(1, 2), rat(1, 1)], vec![int(1), int(2)]).unwrap();
        let e = Element::Step(f);
        assert_eq!(e.norm(&NormSpec::L1).unwrap(), NormValue::exact(rat(3, 2)));
        assert_eq!(e.norm(&NormSpec::Lp(int(2))).unwrap(), NormValue::Power { p: 2, power: ExtScalar::Finite(rat(5, 2)) });
        assert_eq!(e.norm(&NormSpec::Sup).unwrap(), NormValue::exact(int(2)));
    }

    #[test]
    fn sequence_norms() {
        let s = Element::Seq(TailSeq::from_prefix(vec![int(3), int(-5)], Tail::Zero));
        let one = Element::Seq(TailSeq::ones());
        assert_eq!(s.norm(&NormSpec::unit(one)).unwrap(), NormValue::exact(int(5)));
        assert_eq!(s.norm(&NormSpec::Ell1).unwrap(), NormValue::exact(int(8)));
        let z = Element::Seq(TailSeq::ramp());
        assert!(z.norm(&NormSpec::EllInf).unwrap().is_infinite());
        let c = Element::Seq(TailSeq::ones());
        assert!(c.norm(&NormSpec::Ell1).unwrap().is_infinite());
    }

    #[test]
    fn affine_power_sums_match_brute_force() {
        let line = Line::new(rat(1, 3), int(-2));
        for p in 1..4u32 {
            let brute: Rational = (1..=20).map(|n| pow(&line.at(&BigInt::from(n)).abs(), p)).sum();
            assert_eq!(line_power_sum(&line, &BigInt::from(1), &BigInt::from(20), p), brute);
        }
    }

    #[test]
    fn pl_integrals() {
        // ∫ |2t − 1| = 1/2, ∫ (2t − 1)² = 1/3
        let f = PlFn::new(vec![rat(0, 1), rat(1, 1)], vec![int(-1), int(1)]).unwrap();
        assert_eq!(pl_power_integral(&f, 1), rat(1, 2));
        assert_eq!(pl_power_integral(&f, 2), rat(1, 3));
    }

    #[test]
    fn unit_norms_against_vanishing_units() {
        let u = PlFn::identity();
        let x = PlFn::new(vec![rat(0, 1), rat(1, 2), rat(1, 1)], vec![int(0), int(1), int(0)]).unwrap();
        assert_eq!(pl_unit_norm(&x, &u), ExtScalar::Finite(int(2)));
        assert_eq!(pl_unit_norm(&PlFn::one(), &u), ExtScalar::PositiveInfinity);
        // z against the weight (n): ratio 1 everywhere.
        assert_eq!(seq_unit_norm(&TailSeq::ramp(), &TailSeq::ramp()), ExtScalar::Finite(int(1)));
        assert_eq!(seq_unit_norm(&TailSeq::ramp(), &TailSeq::ones()), ExtScalar::PositiveInfinity);
    }

    #[test]
    fn comparisons_of_roots() {
        let a = NormValue::Power { p: 2, power: ExtScalar::Finite(int(2)) };
        assert_eq!(a.cmp_rat(&rat(7, 5)), Ordering::Greater);
        assert_eq!(a.cmp_rat(&rat(3, 2)), Ordering::Less);
        assert_eq!(NormValue::Power { p: 2, power: ExtScalar::Finite(rat(1, 4)) }.as_exact(), Some(ExtScalar::Finite(rat(1, 2))));
        let b = NormValue::Power { p: 2, power: ExtScalar::Finite(int(1)) };
        assert!(a.le_sum(&b, &b));
        assert!(!NormValue::Power { p: 2, power: ExtScalar::Finite(int(5)) }.le_sum(&b, &b));
    }
}
