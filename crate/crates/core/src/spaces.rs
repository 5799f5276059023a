//! Concrete pairs `X ⊆ Y` (an ideal inside an ambient lattice) with their structural flags.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sample::{random_pl, random_step};
use crate::lattice::rational::{fmt_rat, ser_rat, floor_log2, int, parse_rat, rat};
use crate::lattice::{DirectSum, Element, Kind, NormSpec, PlFn, Rational, Region, StepFn, Tail, TailSeq};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Ambient {
    /// Measurable functions on `[0, 1]`, carried by step and piecewise-linear functions.
    L0,
    /// All real sequences.
    RN,
    /// `C[0, 1]`.
    C01,
    /// `L0[0,1]^Γ` for a finite list of component ids.
    DirectSumL0(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Ideal {
    Lp(#[serde(serialize_with = "ser_rat")] Rational),
    EllP(u32),
    C0,
    C00,
    EllInf,
    /// Functions in `C[0,1]` vanishing at 0, sup norm.
    VanishAtZero,
    /// `C[0,1]` itself.
    Continuous,
    BandOver(Region, #[serde(serialize_with = "ser_rat")] Rational),
    FiniteSumL1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitKind {
    Strong,
    QuasiInterior,
    Weak,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UnitWitness {
    pub kind: UnitKind,
    pub element: Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpacePair {
    pub id: String,
    pub ambient: Ambient,
    pub ideal: Ideal,
    #[serde(skip)]
    pub norm: NormSpec,
    pub order_continuous: bool,
    pub atomic: bool,
    pub order_dense: bool,
    pub unit: Option<UnitWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    QuasiInteriorSingleton,
    DenseIdealBasis(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestVectorSet {
    pub vectors: Vec<Element>,
    pub provenance: Provenance,
}

pub const DEFAULT_BUDGET: usize = 16;

/// `A = [0, 1/2)` for the `bandA` pairs.
pub fn band_a() -> Region {
    Region::interval(Rational::zero(), rat(1, 2)).expect("valid interval")
}

fn lp_norm_spec(p: &Rational) -> NormSpec {
    if p.is_one() { NormSpec::L1 } else { NormSpec::Lp(p.clone()) }
}

impl SpacePair {
    /// Parses a descriptor such as `L1@L0`, `linf@RN`, `X0@C01` or `bandA(1)@L0`.
    pub fn build(descriptor: &str) -> Result<SpacePair> {
        let d = descriptor.trim();
        let unsupported = || Error::UnsupportedPair(d.to_string());
        let (ideal, ambient) = d.split_once('@').ok_or_else(unsupported)?;
        let pair = match (ideal, ambient) {
            (i, "L0") if i.starts_with("bandA(") && i.ends_with(')') => {
                let p = parse_rat(&i[6..i.len() - 1]).map_err(|_| unsupported())?;
                Self::band(band_a(), p)?
            }
            (i, "L0") if i.starts_with('L') => Self::lp(parse_rat(&i[1..]).map_err(|_| unsupported())?)?,
            ("linf", "RN") => Self::linf(),
            ("c0", "RN") => Self::c0(),
            ("c00", "RN") => Self::c00(),
            (i, "RN") if i.starts_with('l') => {
                let p: u32 = i[1..].parse().map_err(|_| unsupported())?;
                Self::ell_p(p)?
            }
            ("X0", "C01") => Self::vanish_at_zero(),
            ("C", "C01") => Self::continuous(),
            ("suml1", a) if a == "gamma" => Self::suml1(8),
            ("suml1", a) if a.starts_with("gamma(") && a.ends_with(')') => {
                let n: u32 = a[6..a.len() - 1].parse().map_err(|_| unsupported())?;
                Self::suml1(n)
            }
            _ => return Err(unsupported()),
        };
        pair.validate()?;
        Ok(pair)
    }

    pub fn lp(p: Rational) -> Result<SpacePair> {
        if p < Rational::one() {
            return Err(Error::UnsupportedPair(format!("L{}@L0 needs p ≥ 1", fmt_rat(&p))));
        }
        Ok(SpacePair {
            id: format!("L{}@L0", crate::lattice::norm::fmt_p(&p)),
            ambient: Ambient::L0,
            norm: lp_norm_spec(&p),
            ideal: Ideal::Lp(p),
            order_continuous: true,
            atomic: false,
            order_dense: true,
            unit: Some(UnitWitness { kind: UnitKind::QuasiInterior, element: StepFn::one().into() }),
        })
    }

    pub fn band(a: Region, p: Rational) -> Result<SpacePair> {
        if p < Rational::one() || a.is_empty() {
            return Err(Error::UnsupportedPair("band pairs need p ≥ 1 and a nonempty region".into()));
        }
        let dense = a == Region::unit();
        Ok(SpacePair {
            id: format!("bandA({})@L0", crate::lattice::norm::fmt_p(&p)),
            ambient: Ambient::L0,
            norm: lp_norm_spec(&p),
            unit: Some(UnitWitness { kind: UnitKind::QuasiInterior, element: StepFn::indicator(&a).into() }),
            ideal: Ideal::BandOver(a, p),
            order_continuous: true,
            atomic: false,
            order_dense: dense,
        })
    }

    pub fn ell_p(p: u32) -> Result<SpacePair> {
        if p == 0 {
            return Err(Error::UnsupportedPair("l0@RN".into()));
        }
        Ok(SpacePair {
            id: format!("l{p}@RN"),
            ambient: Ambient::RN,
            ideal: Ideal::EllP(p),
            norm: if p == 1 { NormSpec::Ell1 } else { NormSpec::Lp(int(p as i64)) },
            order_continuous: true,
            atomic: true,
            order_dense: true,
            unit: None,
        })
    }

    pub fn linf() -> SpacePair {
        SpacePair {
            id: "linf@RN".into(),
            ambient: Ambient::RN,
            ideal: Ideal::EllInf,
            norm: NormSpec::EllInf,
            order_continuous: false,
            atomic: true,
            order_dense: true,
            unit: Some(UnitWitness { kind: UnitKind::Strong, element: TailSeq::ones().into() }),
        }
    }

    pub fn c0() -> SpacePair {
        SpacePair {
            id: "c0@RN".into(),
            ambient: Ambient::RN,
            ideal: Ideal::C0,
            norm: NormSpec::EllInf,
            order_continuous: true,
            atomic: true,
            order_dense: true,
            unit: None,
        }
    }

    pub fn c00() -> SpacePair {
        SpacePair { id: "c00@RN".into(), ideal: Ideal::C00, ..Self::c0() }
    }

    pub fn vanish_at_zero() -> SpacePair {
        SpacePair {
            id: "X0@C01".into(),
            ambient: Ambient::C01,
            ideal: Ideal::VanishAtZero,
            norm: NormSpec::Sup,
            order_continuous: false,
            atomic: false,
            order_dense: true,
            unit: Some(UnitWitness { kind: UnitKind::QuasiInterior, element: PlFn::identity().into() }),
        }
    }

    /// `C[0,1]` as an ideal in itself: un-convergence is plain norm convergence.
    pub fn continuous() -> SpacePair {
        SpacePair {
            id: "C@C01".into(),
            ambient: Ambient::C01,
            ideal: Ideal::Continuous,
            norm: NormSpec::Sup,
            order_continuous: false,
            atomic: false,
            order_dense: true,
            unit: Some(UnitWitness { kind: UnitKind::Strong, element: PlFn::one().into() }),
        }
    }

    pub fn suml1(components: u32) -> SpacePair {
        let ids: Vec<u32> = (0..components).collect();
        SpacePair {
            id: if components == 8 { "suml1@gamma".into() } else { format!("suml1@gamma({components})") },
            ambient: Ambient::DirectSumL0(ids),
            ideal: Ideal::FiniteSumL1,
            norm: NormSpec::SumL1,
            order_continuous: true,
            atomic: false,
            order_dense: true,
            unit: None,
        }
    }

    /// The fixed consistency table every pair must satisfy.
    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::UnsupportedPair(format!("{}: {why}", self.id)));
        let unit_kind = self.unit.as_ref().map(|u| u.kind);
        match (&self.ideal, &self.ambient) {
            (Ideal::Lp(_), Ambient::L0) => {
                if !self.order_continuous || !self.order_dense || self.atomic {
                    return bad("Lp over L0 is order continuous, order dense and non-atomic");
                }
            }
            (Ideal::BandOver(a, _), Ambient::L0) => {
                if !self.order_continuous || (*a != Region::unit() && self.order_dense) {
                    return bad("a proper band is order continuous and not order dense");
                }
            }
            (Ideal::EllP(_) | Ideal::C0 | Ideal::C00, Ambient::RN) => {
                if !self.order_continuous || !self.atomic || !self.order_dense {
                    return bad("lp, c0 and c00 are order continuous, atomic and order dense in R^N");
                }
            }
            (Ideal::EllInf, Ambient::RN) => {
                if self.order_continuous || unit_kind != Some(UnitKind::Strong) {
                    return bad("linf is not order continuous and has the strong unit 1");
                }
            }
            (Ideal::VanishAtZero | Ideal::Continuous, Ambient::C01) => {
                if self.order_continuous || !self.order_dense {
                    return bad("sup-normed ideals of C[0,1] are order dense and not order continuous");
                }
            }
            (Ideal::FiniteSumL1, Ambient::DirectSumL0(_)) => {
                if !self.order_continuous || self.unit.is_some() {
                    return bad("the finite l1-sum is order continuous and carries no declared unit");
                }
            }
            _ => return bad("unsupported ideal/ambient combination"),
        }
        if let Some(u) = &self.unit {
            if !u.element.is_positive() || u.element.is_zero() || !self.contains(&u.element) {
                return bad("unit witness must be a nonzero positive member of X");
            }
        }
        Ok(())
    }

    /// Carriers accepted as elements of the ambient lattice.
    pub fn carriers(&self) -> &'static [Kind] {
        match self.ambient {
            Ambient::L0 => &[Kind::Step, Kind::Pl],
            Ambient::RN => &[Kind::Seq],
            Ambient::C01 => &[Kind::Pl],
            Ambient::DirectSumL0(_) => &[Kind::Sum],
        }
    }

    pub fn accepts(&self, kind: Kind) -> bool {
        self.carriers().contains(&kind)
    }

    fn ensure_kind(&self, kind: Kind) -> Result<()> {
        if self.accepts(kind) {
            Ok(())
        } else {
            Err(Error::KindMismatch(format!("{} elements do not live in the ambient of {}", kind, self.id)))
        }
    }

    /// Membership in `X`, decided exactly.
    pub fn contains(&self, x: &Element) -> bool {
        if !self.accepts(x.kind()) {
            return false;
        }
        match (&self.ideal, x) {
            (Ideal::Lp(_), _) => true,
            (Ideal::BandOver(a, _), Element::Step(f)) => f.restrict(&a.complement()).is_zero(),
            (Ideal::BandOver(a, _), Element::Pl(f)) => {
                let off = f.superlevel_set(&Rational::zero()).intersect(&a.complement());
                off.is_empty()
            }
            (Ideal::EllP(_) | Ideal::C0 | Ideal::C00, Element::Seq(s)) => s.tail() == Tail::Zero,
            (Ideal::EllInf, Element::Seq(s)) => !matches!(s.tail(), Tail::Affine(..)),
            (Ideal::VanishAtZero, Element::Pl(f)) => f.eval(&Rational::zero()).is_zero(),
            (Ideal::Continuous, Element::Pl(_)) => true,
            (Ideal::FiniteSumL1, Element::Sum(s)) => match &self.ambient {
                Ambient::DirectSumL0(ids) => s.components().keys().all(|id| ids.contains(id)),
                _ => false,
            },
            _ => false,
        }
    }

    /// `{u}` when the pair declares a strong or quasi-interior unit, otherwise `budget`
    /// positive vectors spanning a norm-dense ideal of `X`.
    pub fn test_vectors(&self, budget: usize, kind: Kind) -> Result<TestVectorSet> {
        self.ensure_kind(kind)?;
        if let Some(u) = &self.unit {
            if matches!(u.kind, UnitKind::Strong | UnitKind::QuasiInterior) {
                if let Some(v) = self.unit_in(kind) {
                    return Ok(TestVectorSet { vectors: vec![v], provenance: Provenance::QuasiInteriorSingleton });
                }
            }
        }
        self.dense_basis(budget, kind)
    }

    /// The declared unit, moved to the `kind` carrier when the pair has two.
    pub fn unit_in(&self, kind: Kind) -> Option<Element> {
        let u = &self.unit.as_ref()?.element;
        if u.kind() == kind {
            return Some(u.clone());
        }
        match (&self.ideal, kind) {
            (Ideal::Lp(_), Kind::Pl) => Some(PlFn::one().into()),
            _ => None,
        }
    }

    /// Positive partition-of-unity style basis of a norm-dense ideal of `X`.
    pub fn dense_basis(&self, budget: usize, kind: Kind) -> Result<TestVectorSet> {
        self.ensure_kind(kind)?;
        let budget = budget.max(1);
        let vectors: Vec<Element> = match (&self.ideal, kind) {
            (Ideal::Lp(_), Kind::Step) => dyadic_blocks(&Region::unit(), floor_log2(budget as u64)),
            (Ideal::BandOver(a, _), Kind::Step) => dyadic_blocks(a, floor_log2(budget as u64)),
            (Ideal::Lp(_) | Ideal::Continuous, Kind::Pl) => hats(budget, true),
            (Ideal::VanishAtZero, Kind::Pl) => hats(budget, false),
            (Ideal::BandOver(..), Kind::Pl) => {
                return Err(Error::KindMismatch("band pairs are carried by step functions".into()));
            }
            (Ideal::EllP(_) | Ideal::C0 | Ideal::C00, Kind::Seq) => {
                (1..=budget as u64).map(|i| TailSeq::unit_vector(i).into()).collect()
            }
            (Ideal::EllInf, Kind::Seq) => {
                let mut v: Vec<Element> = (1..budget as u64).map(|i| TailSeq::unit_vector(i).into()).collect();
                v.push(TailSeq::indicator_from(&BigInt::from(budget as u64)).into());
                v
            }
            (Ideal::FiniteSumL1, Kind::Sum) => match &self.ambient {
                Ambient::DirectSumL0(ids) => ids.iter().map(|id| DirectSum::single(*id, StepFn::one()).into()).collect(),
                _ => unreachable!(),
            },
            _ => return Err(Error::KindMismatch(format!("no basis of {} for {}", kind, self.id))),
        };
        Ok(TestVectorSet { vectors, provenance: Provenance::DenseIdealBasis(budget) })
    }

    /// A second, differently built family of test vectors for the same `X`, used to
    /// check that verdicts do not depend on the chosen dense ideal.
    pub fn alternative_basis(&self, budget: usize, kind: Kind, seed: u64) -> Result<Vec<Element>> {
        self.ensure_kind(kind)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let budget = budget.max(1);
        Ok(match (&self.ideal, kind) {
            (Ideal::Lp(_), Kind::Step) => {
                let mut v: Vec<Element> = vec![StepFn::one().into()];
                while v.len() < budget {
                    v.push(random_step(&mut rng, &Region::unit()).into());
                }
                v
            }
            (Ideal::BandOver(a, _), Kind::Step) => {
                let mut v: Vec<Element> = vec![StepFn::indicator(a).into()];
                while v.len() < budget {
                    v.push(random_step(&mut rng, a).into());
                }
                v
            }
            (Ideal::Lp(_) | Ideal::Continuous, Kind::Pl) => {
                let mut v: Vec<Element> = vec![PlFn::one().into()];
                while v.len() < budget {
                    v.push(random_pl(&mut rng, false).into());
                }
                v
            }
            (Ideal::VanishAtZero, Kind::Pl) => {
                let mut v: Vec<Element> = vec![PlFn::identity().into()];
                while v.len() < budget {
                    v.push(random_pl(&mut rng, true).into());
                }
                v
            }
            // Truncations of the harmonic sequence (1/i), a strictly positive element of c0.
            (Ideal::EllP(_) | Ideal::C0 | Ideal::C00, Kind::Seq) => (1..=budget as i64)
                .map(|m| TailSeq::from_prefix((1..=m).map(|i| rat(1, i)).collect(), Tail::Zero).into())
                .collect(),
            (Ideal::EllInf, Kind::Seq) => {
                let mut v: Vec<Element> = vec![TailSeq::ones().into()];
                v.extend((1..budget as i64).map(|m| TailSeq::from_prefix((1..=m).map(|i| rat(1, i)).collect(), Tail::Zero).into()));
                v
            }
            (Ideal::FiniteSumL1, Kind::Sum) => match &self.ambient {
                Ambient::DirectSumL0(ids) => {
                    let all = DirectSum::new(ids.iter().map(|id| (*id, StepFn::one())));
                    let mut v: Vec<Element> = vec![all.into()];
                    for id in ids {
                        v.push(DirectSum::single(*id, random_step(&mut rng, &Region::unit())).into());
                    }
                    v
                }
                _ => unreachable!(),
            },
            _ => return Err(Error::KindMismatch(format!("no alternative basis of {} for {}", kind, self.id))),
        })
    }

    /// For `y ≠ 0`, some `x ∈ X` with `0 < x ≤ |y|`; refuses when `|y|` is disjoint from `X`.
    pub fn order_dense_witness(&self, y: &Element) -> Result<Element> {
        self.ensure_kind(y.kind())?;
        if y.is_zero() {
            return Err(Error::BadParams("the zero element has no order-dense witness".into()));
        }
        let a = y.abs_val();
        let x = match (&self.ideal, &a) {
            (Ideal::Lp(_) | Ideal::Continuous | Ideal::FiniteSumL1, _) => a.clone(),
            (Ideal::BandOver(region, _), Element::Step(f)) => Element::Step(f.restrict(region)),
            (Ideal::EllP(_) | Ideal::C0 | Ideal::C00 | Ideal::EllInf, Element::Seq(s)) => {
                let (i, v) = first_nonzero(s);
                TailSeq::indicator_range(&i, &i).scale(&v).into()
            }
            (Ideal::VanishAtZero, Element::Pl(f)) => {
                // |y| ∧ c·min(t/t*, 1) with t* inside the first piece where |y| is not identically 0.
                let c = f.ys().iter().max().cloned().unwrap_or_default();
                let t_star = f
                    .pieces()
                    .find(|((_, y0), (_, y1))| !y0.is_zero() || !y1.is_zero())
                    .map(|((x0, _), (x1, _))| (x0 + x1) / int(2))
                    .expect("nonzero function has a nonzero piece");
                let ramp = PlFn::from_nodes(&[(Rational::zero(), Rational::zero()), (t_star, c.clone()), (Rational::one(), c)])?;
                Element::Pl(f.zip_with(&ramp, true, |p, q| p.min(q).clone()))
            }
            _ => return Err(Error::KindMismatch(format!("no witness construction for {} in {}", y.kind(), self.id))),
        };
        if x.is_zero() {
            return Err(Error::NotDense {
                order_dense: self.order_dense,
                reason: format!("|y| is disjoint from the ideal of {}", self.id),
            });
        }
        debug_assert!(x.le(&a).unwrap_or(false) && self.contains(&x));
        Ok(x)
    }
}

impl fmt::Display for SpacePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

fn first_nonzero(s: &TailSeq) -> (BigInt, Rational) {
    for seg in s.segments() {
        let v = seg.line.at(&seg.start);
        if !v.is_zero() {
            return (seg.start.clone(), v);
        }
        let w = seg.line.at(&(&seg.start + 1));
        if seg.end > seg.start && !w.is_zero() {
            return (&seg.start + 1, w);
        }
    }
    let n = s.prefix_len() + 1;
    let v = s.tail_line().at(&n);
    if !v.is_zero() {
        return (n, v);
    }
    let n1 = &n + 1;
    let v1 = s.tail_line().at(&n1);
    (n1, v1)
}

/// Indicators of the `2^depth` equal dyadic pieces of each interval of `a`.
fn dyadic_blocks(a: &Region, depth: u32) -> Vec<Element> {
    let m = 1i64 << depth;
    let mut out = Vec::new();
    for (lo, hi) in a.intervals() {
        let w = (hi - lo) / int(m);
        for i in 0..m {
            let l = lo + &w * int(i);
            let r = &l + &w;
            out.push(StepFn::block(l, r, Rational::one()).expect("inside [0,1]").into());
        }
    }
    out
}

/// Hats of half-width `1/m` centred on the grid `i/m`; they sum to 1 (or to `min(mt, 1)`
/// when the hat at 0 is left out).
fn hats(budget: usize, include_zero: bool) -> Vec<Element> {
    let m = if include_zero { (budget as i64 - 1).max(1) } else { budget as i64 };
    let w = rat(1, m);
    let start = if include_zero { 0 } else { 1 };
    (start..=m).map(|i| PlFn::hat(&rat(i, m), &w).into()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_round_trip() {
        for d in ["L1@L0", "L2@L0", "l1@RN", "linf@RN", "c0@RN", "c00@RN", "X0@C01", "C@C01", "bandA(1)@L0", "suml1@gamma"] {
            assert_eq!(SpacePair::build(d).unwrap().id, d);
        }
        assert!(matches!(SpacePair::build("L1@RN"), Err(Error::UnsupportedPair(_))));
        assert!(SpacePair::build("L1/2@L0").is_err());
    }

    #[test]
    fn inconsistent_flags_rejected() {
        let mut p = SpacePair::linf();
        p.order_continuous = true;
        assert!(p.validate().is_err());
        let mut b = SpacePair::build("bandA(1)@L0").unwrap();
        b.order_dense = true;
        assert!(b.validate().is_err());
    }

    #[test]
    fn bases_are_positive_members() {
        for d in ["L1@L0", "L2@L0", "l1@RN", "linf@RN", "c0@RN", "c00@RN", "X0@C01", "C@C01", "bandA(1)@L0", "suml1@gamma"] {
            let p = SpacePair::build(d).unwrap();
            for &k in p.carriers() {
                let Ok(set) = p.dense_basis(16, k) else { continue };
                assert!(!set.vectors.is_empty());
                for v in &set.vectors {
                    assert!(v.is_positive() && p.contains(v), "{d}: {v}");
                    assert!(!v.norm(&p.norm).unwrap().is_infinite());
                }
            }
        }
    }

    #[test]
    fn witness_is_below_y() {
        let p = SpacePair::vanish_at_zero();
        let x = p.order_dense_witness(&PlFn::one().into()).unwrap();
        assert_eq!(x.to_text(), "pl [0/1,1/2,1/1] [0/1,1/1,1/1]");
        let s = SpacePair::c0();
        let y: Element = TailSeq::from_prefix(vec![int(0), int(-3)], Tail::Zero).into();
        assert_eq!(s.order_dense_witness(&y).unwrap(), TailSeq::unit_vector(2).scale(&int(3)).into());
    }
}
