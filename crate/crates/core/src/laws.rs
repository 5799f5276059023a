//! Runnable law suites. Each law quantifies over a fixed set of families and pairs, compares
//! verdict classes (null / refuted / inconclusive) or exact values, and attaches to every
//! failed case a counterexample whose gauge can be recomputed from its text.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convergence::{
    check_in_measure, check_metric, check_pointwise, check_un, check_un_with, check_uniform_unit, gauge, limit_uniqueness_probe,
    raw_gauge, un_metric, CheckConfig, Family, Verdict, VerdictClass,
};
use crate::error::{Error, Result};
use crate::extraction::{extract_ae_subsequence, uo_subsequence_probe, ExtractConfig};
use crate::gallery::{self, default_gamma, DEFAULT_GAMMA_K};
use crate::lattice::rational::{dyadic, fmt_rat, floor_log2};
use crate::lattice::{Element, ExtScalar, Kind, NormValue, Op, PlFn, Rational, StepFn, TailSeq};
use crate::sample::{random_ambient, random_epsilon, random_positive_in, DEFAULT_SEED};
use crate::spaces::SpacePair;

pub const LAW_IDS: [&str; 15] = ["L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8", "L9", "L10", "L11", "L12", "L13", "L14", "NB"];

#[derive(Clone, Debug)]
pub struct LawConfig {
    pub check: CheckConfig,
    pub seed: u64,
    /// Sampled `(y, ε, x)` triples per pair for the neighbourhood-base axioms.
    pub nb_samples: usize,
    pub extraction_k: u32,
    pub extraction_samples: usize,
    pub gamma_k: usize,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            check: CheckConfig::default(),
            seed: DEFAULT_SEED,
            nb_samples: 1000,
            extraction_k: 12,
            extraction_samples: 1000,
            gamma_k: DEFAULT_GAMMA_K,
        }
    }
}

impl LawConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// `‖|y| ∧ x‖` for the cited element and test vector of the cited pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub family: String,
    pub pair: String,
    pub index: u64,
    pub element: String,
    pub test_vector: String,
    pub gauge: NormValue,
}

impl Counterexample {
    pub fn new(family: &str, pair: &SpacePair, index: u64, y: &Element, x: &Element) -> Result<Self> {
        Ok(Counterexample {
            family: family.to_string(),
            pair: pair.id.clone(),
            index,
            element: y.to_text(),
            test_vector: x.to_text(),
            gauge: raw_gauge(y, x, pair)?,
        })
    }

    /// Re-parses the cited element and test vector and recomputes the gauge exactly.
    pub fn reproduce(&self) -> Result<bool> {
        let pair = SpacePair::build(&self.pair)?;
        let y = Element::parse(&self.element)?;
        let x = Element::parse(&self.test_vector)?;
        Ok(raw_gauge(&y, &x, &pair)? == self.gauge)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseOutcome {
    pub case: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawSettings {
    pub families: Vec<String>,
    pub pairs: Vec<String>,
    pub horizon: u64,
    pub budget: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub statement: String,
    pub config: LawSettings,
    pub cases: Vec<CaseOutcome>,
    pub passed: bool,
}

impl LawReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("law reports serialize")
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseOutcome> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

struct Run<'a> {
    cfg: &'a LawConfig,
    families: BTreeSet<String>,
    pairs: BTreeSet<String>,
    cases: Vec<CaseOutcome>,
}

impl<'a> Run<'a> {
    fn new(cfg: &'a LawConfig) -> Self {
        Run { cfg, families: BTreeSet::new(), pairs: BTreeSet::new(), cases: Vec::new() }
    }

    fn uses(&mut self, fam: &str, pair: &str) {
        self.families.insert(fam.to_string());
        if pair != "-" {
            self.pairs.insert(pair.to_string());
        }
    }

    /// Records a case; the counterexample is only computed when the case fails.
    fn case(&mut self, case: String, passed: bool, detail: String, cex: impl FnOnce() -> Result<Option<Counterexample>>) -> Result<()> {
        let counterexample = if passed { None } else { cex()? };
        self.cases.push(CaseOutcome { case, passed, detail, counterexample });
        Ok(())
    }

    fn finish(self, law: &str, statement: &str) -> LawReport {
        let passed = !self.cases.is_empty() && self.cases.iter().all(|c| c.passed);
        LawReport {
            law: law.to_string(),
            statement: statement.to_string(),
            config: LawSettings {
                families: self.families.into_iter().collect(),
                pairs: self.pairs.into_iter().collect(),
                horizon: self.cfg.check.horizon,
                budget: self.cfg.check.budget,
                seed: self.cfg.seed,
            },
            cases: self.cases,
            passed,
        }
    }
}

fn pair(id: &str) -> SpacePair {
    SpacePair::build(id).expect("built-in pair descriptors parse")
}

fn no_cex() -> Result<Option<Counterexample>> {
    Ok(None)
}

/// The largest gauge over the second half of the horizon.
fn worst(fam: &Family, pair: &SpacePair, vectors: &[Element], cfg: &CheckConfig) -> Result<Option<Counterexample>> {
    let mut best: Option<(NormValue, u64, usize)> = None;
    for n in cfg.horizon / 2 + 1..=cfg.horizon {
        let y = fam.eval(n);
        for (i, x) in vectors.iter().enumerate() {
            let g = raw_gauge(&y, x, pair)?;
            if best.as_ref().is_none_or(|(b, _, _)| g.cmp_value(b) == Ordering::Greater) {
                best = Some((g, n, i));
            }
        }
    }
    match best {
        Some((_, n, i)) => Ok(Some(Counterexample::new(&fam.name, pair, n, &fam.eval(n), &vectors[i])?)),
        None => Ok(None),
    }
}

fn standard_worst(fam: &Family, pair: &SpacePair, cfg: &CheckConfig) -> Result<Option<Counterexample>> {
    let tv = pair.test_vectors(cfg.budget, fam.kind)?;
    worst(fam, pair, &tv.vectors, cfg)
}

fn coarse(v: &Verdict) -> &'static str {
    v.class.coarse()
}

fn gallery_families(kinds: &[Kind]) -> Vec<Family> {
    kinds.iter().flat_map(|&k| gallery::families_of(k)).collect()
}

/// The declared limit, with the verdict for `n ↦ y_n − limit`.
fn limit_verdict(fam: &Family, pair: &SpacePair, cfg: &CheckConfig) -> Result<Option<(Element, Family, Verdict)>> {
    let Some((lim, _)) = &fam.limit else { return Ok(None) };
    let dev = fam.shifted(lim)?;
    let v = check_un(&dev, pair, cfg)?;
    Ok(Some((lim.clone(), dev, v)))
}

/// Indices `1..=64` and the powers of two up to the horizon.
fn sampled_indices(horizon: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=64.min(horizon)).collect();
    out.extend((7..=floor_log2(horizon.max(1))).map(|j| 1u64 << j));
    out
}

fn l1_ops(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    let specs = vec![
        ("L1@L0", gallery::typewriter(), gallery::ramp_up()),
        ("l1@RN", gallery::unit_vectors(), gallery::truncated_ones()),
        ("X0@C01", gallery::moving_bump(), Family::constant("identity", PlFn::identity().into())),
        ("linf@RN", gallery::scaled_unit(), Family::constant("ones", TailSeq::ones().into())),
    ];
    for (pid, a, b) in specs {
        let p = pair(pid);
        let mut ready = true;
        for f in [&a, &b] {
            run.uses(&f.name, pid);
            let Some((lim, dev, v)) = limit_verdict(f, &p, ck)? else {
                run.case(format!("{} limit under {pid}", f.name), false, "no declared limit".into(), no_cex)?;
                ready = false;
                continue;
            };
            let ok = v.class == VerdictClass::CertifiedNull;
            ready &= ok;
            run.case(format!("{} -> {} under {pid}", f.name, lim.to_text()), ok, format!("{:?}", v.class), || {
                standard_worst(&dev, &p, ck)
            })?;
        }
        if !ready {
            continue;
        }
        for op in [Op::Meet, Op::Join, Op::Sum, Op::Diff] {
            let c = a.combine(&b, op)?;
            let (lim, _) = c.limit.clone().expect("both limits declared");
            let dev = c.shifted(&lim)?;
            let v = check_un(&dev, &p, ck)?;
            let ok = v.class == VerdictClass::CertifiedNull;
            let detail = format!("limit {}; {:?}", lim.to_text(), v.class);
            run.case(format!("{} under {pid}", c.name), ok, detail, || standard_worst(&dev, &p, ck))?;
        }
    }
    Ok(run.finish("L1", "certified un-limits are preserved by meets, joins, sums and differences"))
}

fn l2_dense_ideal(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    let c00 = pair("c00@RN");
    let c0 = pair("c0@RN");
    for fam in gallery::families_of(Kind::Seq) {
        run.uses(&fam.name, &c00.id);
        run.uses(&fam.name, &c0.id);
        let a = c00.dense_basis(ck.budget, Kind::Seq)?.vectors;
        let b = c0.alternative_basis(ck.budget, Kind::Seq, cfg.seed)?;
        let va = check_un_with(&fam, &c00, &a, ck)?;
        let vb = check_un_with(&fam, &c0, &b, ck)?;
        let ok = coarse(&va) == coarse(&vb);
        let detail = format!("unit vectors: {:?}; harmonic truncations: {:?}", va.class, vb.class);
        run.case(format!("{} on c00 vs c0 bases", fam.name), ok, detail, || worst(&fam, &c0, &b, ck))?;
    }
    let l1 = pair("L1@L0");
    for fam in gallery_families(&[Kind::Step, Kind::Pl]) {
        run.uses(&fam.name, &l1.id);
        let a = l1.dense_basis(ck.budget, fam.kind)?.vectors;
        let b = l1.alternative_basis(ck.budget, fam.kind, cfg.seed)?;
        let va = check_un_with(&fam, &l1, &a, ck)?;
        let vb = check_un_with(&fam, &l1, &b, ck)?;
        let ok = coarse(&va) == coarse(&vb);
        let detail = format!("simple-function basis: {:?}; random L1 basis: {:?}", va.class, vb.class);
        run.case(format!("{} on simple vs L1 bases", fam.name), ok, detail, || worst(&fam, &l1, &b, ck))?;
    }
    Ok(run.finish("L2", "verdicts do not depend on which norm-dense ideal supplies the test vectors"))
}

fn l3_nested(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    let (p1, p2) = (pair("L1@L0"), pair("L2@L0"));
    for fam in gallery_families(&[Kind::Step, Kind::Pl]) {
        run.uses(&fam.name, &p1.id);
        run.uses(&fam.name, &p2.id);
        let v1 = check_un(&fam, &p1, ck)?;
        let v2 = check_un(&fam, &p2, ck)?;
        let ok = coarse(&v1) == coarse(&v2);
        run.case(format!("{} under L1@L0 vs L2@L0", fam.name), ok, format!("{:?} vs {:?}", v1.class, v2.class), || {
            standard_worst(&fam, &p2, ck)
        })?;
    }
    Ok(run.finish("L3", "L1 and L2 induce the same un-topology on L0"))
}

fn l4_quasi_interior(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    for pid in ["L1@L0", "L2@L0", "linf@RN"] {
        let p = pair(pid);
        for fam in gallery_families(&[Kind::Step, Kind::Pl, Kind::Seq]) {
            if !p.accepts(fam.kind) {
                continue;
            }
            run.uses(&fam.name, pid);
            let u = p.unit_in(fam.kind).ok_or_else(|| Error::BadUnit(format!("{pid} has no unit for {}", fam.kind)))?;
            let basis = p.dense_basis(ck.budget, fam.kind)?.vectors;
            let vu = check_un_with(&fam, &p, std::slice::from_ref(&u), ck)?;
            let vb = check_un_with(&fam, &p, &basis, ck)?;
            let ok = coarse(&vu) == coarse(&vb);
            let detail = format!("{{u}}: {:?}; {} basis vectors: {:?}", vu.class, basis.len(), vb.class);
            run.case(format!("{} under {pid}", fam.name), ok, detail, || worst(&fam, &p, &basis, ck))?;
        }
    }
    Ok(run.finish("L4", "a quasi-interior point alone decides un-convergence"))
}

fn l5_metric(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x4c35);
    for pid in ["L1@L0", "L2@L0", "linf@RN", "X0@C01"] {
        let p = pair(pid);
        for fam in gallery_families(&[Kind::Step, Kind::Pl, Kind::Seq]) {
            if !p.accepts(fam.kind) {
                continue;
            }
            run.uses(&fam.name, pid);
            let basis = p.dense_basis(ck.budget, fam.kind)?.vectors;
            let vm = check_metric(&fam, &p, ck)?;
            let vb = check_un_with(&fam, &p, &basis, ck)?;
            let ok = coarse(&vm) == coarse(&vb);
            let detail = format!("metric: {:?}; {} basis vectors: {:?}", vm.class, basis.len(), vb.class);
            run.case(format!("{} under {pid}", fam.name), ok, detail, || worst(&fam, &p, &basis, ck))?;
        }
        // metric axioms on sampled triples
        let kind = p.carriers()[0];
        let u = crate::convergence::metric_unit(&p, kind)?;
        let mut failure: Option<(u64, Element, String)> = None;
        for i in 0..200u64 {
            let (a, b, c) = (random_ambient(&mut rng, &p), random_ambient(&mut rng, &p), random_ambient(&mut rng, &p));
            let d = |x: &Element, y: &Element| un_metric(x, y, &u, &p);
            let (ab, ba, bc, ac, aa) = (d(&a, &b)?, d(&b, &a)?, d(&b, &c)?, d(&a, &c)?, d(&a, &a)?);
            let why = if !aa.is_zero() {
                Some("d(a,a) ≠ 0")
            } else if ab != ba {
                Some("d(a,b) ≠ d(b,a)")
            } else if !ac.le_sum(&ab, &bc) {
                Some("d(a,c) > d(a,b) + d(b,c)")
            } else if ab.is_zero() && a != b {
                Some("d(a,b) = 0 for a ≠ b")
            } else {
                None
            };
            if let Some(w) = why {
                failure = Some((i, a.sub(&c)?, w.to_string()));
                break;
            }
        }
        let ok = failure.is_none();
        let detail = failure.as_ref().map_or("200 sampled triples".to_string(), |(_, _, w)| w.clone());
        run.case(format!("metric axioms on {pid}"), ok, detail, || match &failure {
            Some((i, y, _)) => Counterexample::new("sampled", &p, *i, y, &u).map(Some),
            None => Ok(None),
        })?;
    }
    Ok(run.finish("L5", "with a quasi-interior point the un-topology is given by the metric ‖|x − y| ∧ u‖"))
}

fn l6_monotone(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    for (fam, pid) in [(gallery::ramp_up(), "L1@L0"), (gallery::truncated_ones(), "l1@RN"), (gallery::truncated_ones(), "c0@RN")] {
        let p = pair(pid);
        run.uses(&fam.name, pid);
        let name = format!("{} under {pid}", fam.name);
        let Some(sup) = fam.supremum.clone() else {
            run.case(name, false, "no declared supremum".into(), no_cex)?;
            continue;
        };
        let Some((lim, dev, v)) = limit_verdict(&fam, &p, ck)? else {
            run.case(name, false, "no declared limit".into(), no_cex)?;
            continue;
        };
        if v.class != VerdictClass::CertifiedNull {
            run.case(name, false, format!("limit not certified: {:?}", v.class), || standard_worst(&dev, &p, ck))?;
            continue;
        }
        let x = p.test_vectors(ck.budget, fam.kind)?.vectors[0].clone();
        let mut bad: Option<(u64, Element, &str)> = None;
        for n in sampled_indices(ck.horizon) {
            let (y, next) = (fam.eval(n), fam.eval(n + 1));
            if !y.le(&next)? {
                bad = Some((n, y.sub(&next)?.pos(), "y_n ≰ y_{n+1}"));
                break;
            }
            if !y.le(&lim)? {
                bad = Some((n, y.sub(&lim)?.pos(), "y_n ≰ limit"));
                break;
            }
        }
        let equal = lim == sup;
        let ok = bad.is_none() && equal;
        let detail = match &bad {
            Some((n, _, w)) => format!("{w} at n = {n}"),
            None if !equal => format!("limit {} differs from supremum {}", lim.to_text(), sup.to_text()),
            None => format!("increasing on {} sampled indices, below and equal to {}", sampled_indices(ck.horizon).len(), sup.to_text()),
        };
        run.case(name, ok, detail, || match &bad {
            Some((n, excess, _)) => Counterexample::new(&fam.name, &p, *n, excess, &x).map(Some),
            None => Counterexample::new(&fam.name, &p, 0, &lim.sub(&sup)?, &x).map(Some),
        })?;
    }
    Ok(run.finish("L6", "an increasing family un-converges to its supremum"))
}

fn l7_disjoint(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    let fam = gallery::disjoint_blocks();
    let ys: Vec<Element> = (1..=64).map(|n| fam.eval(n).abs_val()).collect();
    let mut overlap = None;
    'outer: for m in 0..ys.len() {
        for n in m + 1..ys.len() {
            if !ys[m].meet(&ys[n])?.is_zero() {
                overlap = Some((m as u64 + 1, n as u64 + 1));
                break 'outer;
            }
        }
    }
    run.uses(&fam.name, "-");
    let l1 = pair("l1@RN");
    run.case(
        "pairwise disjoint for n ≤ 64".into(),
        overlap.is_none(),
        overlap.map_or("|y_m| ∧ |y_n| = 0".into(), |(m, n)| format!("y_{m} and y_{n} overlap")),
        || match overlap {
            Some((m, n)) => Counterexample::new(&fam.name, &l1, n, &fam.eval(n), &fam.eval(m).abs_val()).map(Some),
            None => Ok(None),
        },
    )?;
    for pid in ["l1@RN", "c0@RN", "linf@RN"] {
        let p = pair(pid);
        run.uses(&fam.name, pid);
        let v = check_un(&fam, &p, ck)?;
        let expected = if p.order_continuous { "null" } else { "refuted" };
        let ok = coarse(&v) == expected;
        let detail = format!("{pid}: {:?} (order continuous: {})", v.class, p.order_continuous);
        run.case(format!("disjoint_blocks under {pid}"), ok, detail, || standard_worst(&fam, &p, ck))?;
    }
    Ok(run.finish("L7", "disjoint sequences are un-null exactly when X is order continuous"))
}

fn l8_atomic(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    let (l1, linf) = (pair("l1@RN"), pair("linf@RN"));
    for fam in gallery::families_of(Kind::Seq) {
        let pw = check_pointwise(&fam, ck, None)?;
        for p in [&l1, &linf] {
            run.uses(&fam.name, &p.id);
            let un = check_un(&fam, p, ck)?;
            let ok = !un.class.is_null() || pw.class.is_null();
            let detail = format!("un {:?}, pointwise {:?}", un.class, pw.class);
            run.case(format!("{} under {}: un-null implies pointwise-null", fam.name, p.id), ok, detail.clone(), no_cex)?;
            if p.order_continuous {
                let ok = !pw.class.is_null() || un.class.is_null();
                run.case(format!("{} under {}: pointwise-null implies un-null", fam.name, p.id), ok, detail, || {
                    standard_worst(&fam, p, ck)
                })?;
            }
        }
    }
    let e = gallery::unit_vectors();
    let pw = check_pointwise(&e, ck, None)?;
    let un = check_un(&e, &linf, ck)?;
    let ones = TailSeq::ones().to_text();
    let ok = !linf.order_continuous
        && pw.class.is_null()
        && un.class == VerdictClass::Refuted
        && un.witness.as_deref() == Some(ones.as_str())
        && un.epsilon_rat() == Some(Rational::one());
    let detail = format!("pointwise {:?}; linf {:?} with witness {:?} and ε {:?}", pw.class, un.class, un.witness, un.epsilon);
    run.case("e_n: pointwise-null but not un-null under linf@RN".into(), ok, detail, || standard_worst(&e, &linf, ck))?;
    Ok(run.finish("L8", "in atomic lattices un-convergence implies pointwise convergence; the converse needs order continuity"))
}

fn l9_measure(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    let p = pair("L1@L0");
    for fam in gallery_families(&[Kind::Step, Kind::Pl]) {
        run.uses(&fam.name, &p.id);
        let un = check_un(&fam, &p, ck)?;
        let me = check_in_measure(&fam, ck, None)?;
        let ok = coarse(&un) == coarse(&me);
        run.case(format!("{}: un under L1@L0 vs in measure", fam.name), ok, format!("{:?} vs {:?}", un.class, me.class), || {
            standard_worst(&fam, &p, ck)
        })?;
    }
    Ok(run.finish("L9", "for L1 inside L0, un-convergence is convergence in measure"))
}

fn l10_uniform(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    let p = pair("linf@RN");
    let e: Element = TailSeq::ones().into();
    for fam in gallery::families_of(Kind::Seq) {
        run.uses(&fam.name, &p.id);
        let un = check_un(&fam, &p, ck)?;
        let uni = check_uniform_unit(&fam, &e, ck)?;
        let tail_ok = !uni.class.is_null() || uni.tail_in_ideal_from.is_some();
        let ok = coarse(&un) == coarse(&uni) && tail_ok;
        let detail = format!("un {:?}; uniform {:?}; tail in ideal from {:?}", un.class, uni.class, uni.tail_in_ideal_from);
        run.case(format!("{} under linf@RN", fam.name), ok, detail, || standard_worst(&fam, &p, ck))?;
    }
    Ok(run.finish("L10", "with a strong unit, un-convergence is uniform convergence relative to the unit"))
}

fn l11_intervals(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    let one_step: Element = StepFn::one().into();
    let one_seq: Element = TailSeq::ones().into();
    let specs = vec![
        (gallery::typewriter(), "L1@L0", one_step.clone()),
        (gallery::ramp_up(), "L1@L0", one_step.clone()),
        (gallery::constant_one(), "L2@L0", one_step),
        (gallery::moving_bump(), "X0@C01", PlFn::one().into()),
        (gallery::unit_vectors(), "l1@RN", one_seq.clone()),
        (gallery::disjoint_blocks(), "l1@RN", one_seq.clone()),
        (gallery::truncated_ones(), "l1@RN", one_seq),
    ];
    for (fam, pid, default_u) in specs {
        let p = pair(pid);
        run.uses(&fam.name, pid);
        let u = fam.range.clone().unwrap_or(default_u);
        let zero = Element::zero(fam.kind);
        let x = p.test_vectors(ck.budget, fam.kind)?.vectors[0].clone();
        let name = format!("{} under {pid} in [0, {}]", fam.name, u.to_text());
        let mut outside = None;
        for n in sampled_indices(ck.horizon) {
            let y = fam.eval(n);
            if !zero.le(&y)? || !y.le(&u)? {
                outside = Some((n, y));
                break;
            }
        }
        if let Some((n, y)) = outside {
            run.case(name, false, format!("y_{n} leaves the interval"), || Counterexample::new(&fam.name, &p, n, &y, &x).map(Some))?;
            continue;
        }
        let Some((lim, dev, v)) = limit_verdict(&fam, &p, ck)? else {
            run.case(name, false, "no declared limit".into(), no_cex)?;
            continue;
        };
        let certified = v.class == VerdictClass::CertifiedNull;
        let inside = zero.le(&lim)? && lim.le(&u)?;
        let detail = format!("limit {} ({:?}); inside: {inside}", lim.to_text(), v.class);
        run.case(name, certified && inside, detail, || {
            if certified {
                Counterexample::new(&fam.name, &p, 0, &lim.sub(&u)?.pos(), &x).map(Some)
            } else {
                standard_worst(&dev, &p, ck)
            }
        })?;
    }
    Ok(run.finish("L11", "order intervals are un-closed"))
}

fn l12_hausdorff(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    let off_band = gallery::off_band();
    let y = off_band.constant.clone().expect("constant family");
    let one: Element = StepFn::one().into();
    let zero_step = Element::zero(Kind::Step);
    let specs: Vec<(&str, Family, Vec<Element>, usize)> = vec![
        ("L1@L0", off_band.clone(), vec![zero_step.clone(), y.clone()], 1),
        ("L2@L0", gallery::constant_one(), vec![zero_step.clone(), one.clone(), y.clone()], 1),
        ("L1@L0", gallery::typewriter(), vec![zero_step.clone(), one], 1),
        ("l1@RN", gallery::unit_vectors(), vec![Element::zero(Kind::Seq), TailSeq::unit_vector(1).into()], 1),
        ("X0@C01", gallery::moving_bump(), vec![Element::zero(Kind::Pl), PlFn::identity().into()], 1),
        ("bandA(1)@L0", off_band, vec![zero_step, y], 2),
    ];
    for (pid, fam, candidates, expected) in specs {
        let p = pair(pid);
        run.uses(&fam.name, pid);
        let limits = limit_uniqueness_probe(&p, &fam, &candidates, ck)?;
        let ok = if p.order_dense { limits.len() == 1 && expected == 1 } else { limits.len() >= 2 && expected >= 2 };
        let shown: Vec<String> = limits.iter().map(Element::to_text).collect();
        let detail = format!("order dense: {}; un-limits among candidates: [{}]", p.order_dense, shown.join(", "));
        run.case(format!("{} under {pid}", fam.name), ok, detail, || {
            let x = p.test_vectors(ck.budget, fam.kind)?.vectors[0].clone();
            let c = limits.first().or(candidates.first()).expect("candidates");
            Counterexample::new(&fam.name, &p, ck.horizon, &fam.eval(ck.horizon).sub(c)?, &x).map(Some)
        })?;
    }
    // A band is not order dense: the off-band constant has no nonzero minorant in X.
    let band = pair("bandA(1)@L0");
    let off = gallery::off_band().constant.expect("constant family");
    let refused = matches!(band.order_dense_witness(&off), Err(Error::NotDense { .. }));
    run.case("bandA(1)@L0 refuses an order-dense witness below χ[1/2,1)".into(), refused, format!("refused: {refused}"), no_cex)?;
    Ok(run.finish("L12", "un-limits are unique exactly when X is order dense in Y"))
}

fn l13_extraction(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let ck = &cfg.check;
    let p = pair("L1@L0");
    let ecfg = ExtractConfig { samples: cfg.extraction_samples, seed: cfg.seed, ..ExtractConfig::default() };
    for fam in gallery_families(&[Kind::Step, Kind::Pl]) {
        let v = check_un(&fam, &p, ck)?;
        if !v.class.is_null() {
            continue;
        }
        run.uses(&fam.name, &p.id);
        let name = format!("{} (un-null under L1@L0, K = {})", fam.name, cfg.extraction_k);
        match extract_ae_subsequence(&fam, None, cfg.extraction_k, &ecfg) {
            Ok(r) => {
                let again = extract_ae_subsequence(&r.subsequence(&fam), None, cfg.extraction_k, &ecfg);
                let idem = again.as_ref().is_ok_and(|r2| r2.bounds_hold());
                let ok = r.bounds_hold() && idem;
                let detail = format!(
                    "indices {:?}; Σμ_k = {}; exceptional μ(U_1) = {}; {} violations; re-extraction {}",
                    r.indices,
                    fmt_rat(&r.total),
                    fmt_rat(&r.exceptional_measures[0]),
                    r.samples.violations,
                    if idem { "holds" } else { "fails" }
                );
                run.case(name, ok, detail, || {
                    let k = r.level_measures.iter().enumerate().position(|(i, m)| *m >= dyadic(i as u64 + 1)).unwrap_or(0);
                    let n = r.indices.get(k).copied().unwrap_or(1);
                    let x = p.test_vectors(ck.budget, fam.kind)?.vectors[0].clone();
                    Counterexample::new(&fam.name, &p, n, &fam.eval(n), &x).map(Some)
                })?;
            }
            Err(e) => {
                run.case(name, false, e.to_string(), || {
                    let n = match e {
                        Error::CertificateViolated { index, .. } => index,
                        _ => ck.horizon,
                    };
                    let x = p.test_vectors(ck.budget, fam.kind)?.vectors[0].clone();
                    Counterexample::new(&fam.name, &p, n, &fam.eval(n), &x).map(Some)
                })?;
            }
        }
    }
    Ok(run.finish("L13", "with a weak unit, every un-null sequence has an a.e.-null subsequence"))
}

fn l14_gamma(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let gamma = default_gamma(cfg.gamma_k);
    let report = uo_subsequence_probe(&gamma, cfg.gamma_k, &cfg.check)?;
    let p = SpacePair::suml1(gamma.len() as u32);
    run.uses("gamma", &p.id);
    let un_ok = report.un_verdict.class.is_null();
    let fam = gallery::gamma_family(&gamma.iter().map(|(_, t)| t.clone()).collect::<Vec<_>>(), cfg.gamma_k)?;
    run.case(format!("gamma family un-null under {}", p.id), un_ok, format!("{:?}", report.un_verdict.class), || {
        standard_worst(&fam, &p, &cfg.check)
    })?;
    for t in &report.tuples {
        let detail = format!(
            "component {} replays typewriter(1..{}): {}; recurrence at {} points: {}",
            t.component, t.length, t.equals_typewriter_prefix, t.recurrence_points, t.recurrence_confirmed
        );
        run.case(format!("subsequence along {} fails a.e. on its component", t.name), t.witnesses_failure, detail, || {
            let n = gamma[t.component as usize].1.first().copied().unwrap_or(1);
            let x = p.test_vectors(cfg.check.budget, Kind::Sum)?.vectors[t.component as usize].clone();
            Counterexample::new("gamma", &p, n, &fam.eval(n), &x).map(Some)
        })?;
    }
    Ok(run.finish("L14", "without a weak unit, an un-null sequence may have no a.e.-null subsequence"))
}

/// Rational `r ≥ v` for a finite norm value.
fn rational_above(v: &NormValue) -> Option<Rational> {
    match v {
        NormValue::Exact(ExtScalar::Finite(r)) => Some(r.clone()),
        NormValue::Exact(ExtScalar::PositiveInfinity) | NormValue::Power { power: ExtScalar::PositiveInfinity, .. } => None,
        _ => {
            let f = v.to_f64();
            let mut cand = Rational::from_float(f * (1.0 + 1e-9) + 1e-300)?;
            for _ in 0..64 {
                if v.cmp_rat(&cand) != Ordering::Greater {
                    return Some(cand);
                }
                cand *= Rational::from_integer(2.into());
            }
            None
        }
    }
}

fn nb_axioms(cfg: &LawConfig) -> Result<LawReport> {
    let mut run = Run::new(cfg);
    let pairs = [
        "L1@L0", "L2@L0", "bandA(1)@L0", "l1@RN", "l2@RN", "c0@RN", "c00@RN", "linf@RN", "X0@C01", "C@C01", "suml1@gamma",
    ];
    for (pi, pid) in pairs.iter().enumerate() {
        let p = pair(pid);
        run.uses("sampled", pid);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(pi as u64));
        let mut failure: Option<(u64, Element, Element, String)> = None;
        let mut translated = 0usize;
        for i in 0..cfg.nb_samples as u64 {
            let y = random_ambient(&mut rng, &p);
            let eps = random_epsilon(&mut rng);
            let x = random_positive_in(&mut rng, &p);
            let eps2 = random_epsilon(&mut rng);
            let x2 = random_positive_in(&mut rng, &p);
            let fail = |why: &str, y: &Element, x: &Element| Some((i, y.clone(), x.clone(), why.to_string()));
            let g = gauge(&y, &x, &p)?;
            let inside = g.lt_rat(&eps);
            // 0 ∈ U_{ε,x}; U_{ε,x} is symmetric
            if !gauge(&Element::zero(y.kind()), &x, &p)?.lt_rat(&eps) {
                failure = fail("0 ∉ U_{ε,x}", &Element::zero(y.kind()), &x);
            } else if gauge(&y.scale(&-Rational::one()), &x, &p)? != g {
                failure = fail("U_{ε,x} is not symmetric", &y, &x);
            }
            // U_{min(ε,ε'), x ∨ x'} ⊆ U_{ε,x} ∩ U_{ε',x'}
            let joint = x.join(&x2)?;
            let small = if eps < eps2 { eps.clone() } else { eps2.clone() };
            if failure.is_none() && gauge(&y, &joint, &p)?.lt_rat(&small) {
                if !inside {
                    failure = fail("U_{δ,x∨x'} ⊄ U_{ε,x}", &y, &x);
                } else if !gauge(&y, &x2, &p)?.lt_rat(&eps2) {
                    failure = fail("U_{δ,x∨x'} ⊄ U_{ε',x'}", &y, &x2);
                }
            }
            // y ∈ U_{ε,x} ⟹ y + U_{δ,x} ⊆ U_{ε,x} with δ = ε − ‖|y| ∧ x‖
            if failure.is_none() && inside {
                if let Some(r) = rational_above(&g).filter(|r| *r < eps) {
                    let delta = &eps - r;
                    let mut w = random_ambient(&mut rng, &p);
                    for _ in 0..40 {
                        if gauge(&w, &x, &p)?.lt_rat(&delta) {
                            break;
                        }
                        w = w.scale(&dyadic(1));
                    }
                    if gauge(&w, &x, &p)?.lt_rat(&delta) {
                        translated += 1;
                        let moved = y.add(&w)?;
                        if !gauge(&moved, &x, &p)?.lt_rat(&eps) {
                            failure = fail("y + U_{δ,x} ⊄ U_{ε,x}", &moved, &x);
                        }
                    }
                }
            }
            if failure.is_some() {
                break;
            }
        }
        let ok = failure.is_none();
        let detail = match &failure {
            Some((i, _, _, why)) => format!("sample {i}: {why}"),
            None => format!("{} triples; {} translation checks", cfg.nb_samples, translated),
        };
        run.case(format!("neighbourhood base on {pid}"), ok, detail, || match &failure {
            Some((i, y, x, _)) => Counterexample::new("sampled", &p, *i, y, x).map(Some),
            None => Ok(None),
        })?;
    }
    Ok(run.finish("NB", "the sets U_{ε,x} form a base of zero neighbourhoods"))
}

/// Runs one law of the catalog.
pub fn run_law(id: &str, cfg: &LawConfig) -> Result<LawReport> {
    match id {
        "L1" => l1_ops(cfg),
        "L2" => l2_dense_ideal(cfg),
        "L3" => l3_nested(cfg),
        "L4" => l4_quasi_interior(cfg),
        "L5" => l5_metric(cfg),
        "L6" => l6_monotone(cfg),
        "L7" => l7_disjoint(cfg),
        "L8" => l8_atomic(cfg),
        "L9" => l9_measure(cfg),
        "L10" => l10_uniform(cfg),
        "L11" => l11_intervals(cfg),
        "L12" => l12_hausdorff(cfg),
        "L13" => l13_extraction(cfg),
        "L14" => l14_gamma(cfg),
        "NB" => nb_axioms(cfg),
        _ => Err(Error::UnknownLaw(id.to_string())),
    }
}

/// Every law, in catalog order.
pub fn run_all(cfg: &LawConfig) -> Result<Vec<LawReport>> {
    LAW_IDS.iter().map(|id| run_law(id, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::to_f64;
    use num_traits::ToPrimitive;

    #[test]
    fn unknown_law() {
        assert!(matches!(run_law("L99", &LawConfig::default()), Err(Error::UnknownLaw(_))));
    }

    #[test]
    fn above_roots() {
        let v = NormValue::Power { p: 2, power: ExtScalar::Finite(Rational::from_integer(2.into())) };
        let r = rational_above(&v).unwrap();
        assert!(&r * &r >= Rational::from_integer(2.into()));
        assert!(to_f64(&r) < 1.4143);
        assert_eq!(rational_above(&NormValue::infinite()), None);
    }

    #[test]
    fn counterexample_round_trip() {
        let p = pair("L1@L0");
        let y: Element = gallery::typewriter_element(5).into();
        let c = Counterexample::new("typewriter", &p, 5, &y, &StepFn::one().into()).unwrap();
        assert_eq!(c.gauge, NormValue::exact(Rational::new(1.into(), 4.into())));
        assert!(c.reproduce().unwrap());
        assert_eq!(c.index.to_u64(), Some(5));
    }
}
