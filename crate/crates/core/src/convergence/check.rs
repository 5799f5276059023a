use std::cmp::Ordering;

use num_traits::{Signed, ToPrimitive, Zero};

use super::cert::{AeCert, RateCert, Refutation};
use super::family::Family;
use super::{metric_unit, raw_gauge, un_metric, CheckConfig, Evidence, Mode, Verdict, VerdictClass};
use crate::error::{Error, Result};
use crate::lattice::norm::{finite_nonneg_norm, meet_norm_nonneg, unit_norm};
use crate::lattice::rational::{fmt_rat, min_r, rat};
use crate::lattice::{Element, Kind, NormValue, Point, Rational, Region, Tail, TailSeq};
use crate::spaces::{SpacePair, DEFAULT_BUDGET};

/// One quantity tracked along the family, with whatever the family claims about it.
struct Probe {
    label: String,
    rate: Option<RateCert>,
    refutation: Option<Refutation>,
}

/// `values[n - 1][p]` for `n = 1..=horizon` and every probe `p`.
fn sweep<F>(fam: &Family, cfg: &CheckConfig, probes: usize, eval: F) -> Result<Vec<Vec<NormValue>>>
where
    F: Fn(&Element, usize) -> Result<NormValue> + Sync + Send,
{
    sweep_prepared(fam, cfg, probes, Ok, eval)
}

/// [`sweep`] with a per-index preparation shared by all probes.
fn sweep_prepared<P, G, F>(fam: &Family, cfg: &CheckConfig, probes: usize, prepare: G, eval: F) -> Result<Vec<Vec<NormValue>>>
where
    G: Fn(Element) -> Result<P> + Sync + Send,
    F: Fn(&P, usize) -> Result<NormValue> + Sync + Send,
{
    let idx: Vec<u64> = (1..=cfg.horizon).collect();
    let rows = cfg.exec.map(&idx, |&n| {
        let y = prepare(fam.eval(n))?;
        (0..probes).map(|p| eval(&y, p)).collect::<Result<Vec<_>>>()
    });
    rows.into_iter().collect()
}

/// Test vectors prepared for many gauges `‖|y| ∧ x‖`. A sequence `x ≥ 0` vanishing past a
/// short prefix only meets the first coordinates of `|y|`, which are computed once per `y`.
pub(crate) struct Gauger<'a> {
    pair: &'a SpacePair,
    vectors: &'a [Element],
    heads: Vec<Option<Vec<Rational>>>,
    head_len: u64,
    nonneg: Vec<bool>,
}

pub(crate) struct AbsY {
    abs: Element,
    head: Vec<Rational>,
}

const SHORT_SUPPORT: u64 = 256;

impl<'a> Gauger<'a> {
    pub(crate) fn new(pair: &'a SpacePair, vectors: &'a [Element]) -> Self {
        let heads: Vec<Option<Vec<Rational>>> = vectors
            .iter()
            .map(|x| match x {
                Element::Seq(s) => s
                    .support_end()
                    .and_then(|p| p.to_u64())
                    .filter(|&p| p <= SHORT_SUPPORT)
                    .map(|p| (1..=p).map(|i| s.eval_u64(i)).collect()),
                _ => None,
            })
            .collect();
        let head_len = heads.iter().flatten().map(|h| h.len() as u64).max().unwrap_or(0);
        let nonneg = vectors.iter().map(|x| x.abs_val() == *x).collect();
        Gauger { pair, vectors, heads, head_len, nonneg }
    }

    pub(crate) fn prepare(&self, y: Element) -> AbsY {
        let abs = y.abs_val();
        let head = match &abs {
            Element::Seq(s) if self.head_len > 0 => (1..=self.head_len).map(|i| s.eval_u64(i)).collect(),
            _ => Vec::new(),
        };
        AbsY { abs, head }
    }

    pub(crate) fn gauge(&self, y: &AbsY, p: usize) -> Result<NormValue> {
        match &self.heads[p] {
            Some(xh) => {
                let prefix: Vec<Rational> = xh.iter().zip(&y.head).map(|(x, a)| min_r(x, a)).collect();
                match finite_nonneg_norm(&prefix, &self.pair.norm) {
                    Some(v) => Ok(v),
                    None => Element::Seq(TailSeq::from_prefix(prefix, Tail::Zero)).norm(&self.pair.norm),
                }
            }
            None if self.nonneg[p] => match meet_norm_nonneg(&y.abs, &self.vectors[p], &self.pair.norm) {
                Some(v) => Ok(v),
                None => y.abs.meet(&self.vectors[p])?.norm(&self.pair.norm),
            },
            None => y.abs.meet(&self.vectors[p])?.norm(&self.pair.norm),
        }
    }
}

fn max_value<'a>(it: impl Iterator<Item = &'a NormValue>) -> Option<NormValue> {
    it.max_by(|a, b| a.cmp_value(b)).cloned()
}

fn refutation_holds(r: &Refutation, values: &[Vec<NormValue>], p: usize, horizon: u64) -> std::result::Result<(), u64> {
    let idx = r.pattern.indices_upto(horizon);
    if idx.is_empty() {
        return Err(0);
    }
    match idx.into_iter().find(|&n| values[(n - 1) as usize][p].cmp_rat(&r.epsilon) == Ordering::Less) {
        Some(n) => Err(n),
        None => Ok(()),
    }
}

fn rate_holds(c: &RateCert, values: &[Vec<NormValue>], p: usize) -> std::result::Result<(), u64> {
    if !c.kind.is_well_formed() {
        return Err(0);
    }
    match values.iter().enumerate().find(|(i, row)| !c.dominates(*i as u64 + 1, &row[p])) {
        Some((i, _)) => Err(i as u64 + 1),
        None => Ok(()),
    }
}

fn blank(fam: &Family, pair: &str, mode: Mode, cfg: &CheckConfig) -> Verdict {
    Verdict {
        family: fam.name.clone(),
        pair: pair.to_string(),
        mode,
        class: VerdictClass::Inconclusive,
        witness: None,
        epsilon: None,
        evidence: None,
        certificate: None,
        horizon: cfg.horizon,
        worst_gauge: None,
        tail_in_ideal_from: None,
        notes: Vec::new(),
    }
}

/// Certificates first (each re-verified at every `n ≤ horizon`), then the evidence in
/// the second half of the horizon.
fn decide(mut v: Verdict, cfg: &CheckConfig, probes: &[Probe], values: &[Vec<NormValue>]) -> Verdict {
    let h = cfg.horizon;
    let window_start = (h / 2) as usize;
    v.worst_gauge = max_value(values[window_start..].iter().flat_map(|row| row.iter()));

    for (p, probe) in probes.iter().enumerate() {
        let Some(r) = &probe.refutation else { continue };
        match refutation_holds(r, values, p, h) {
            Ok(()) => {
                v.class = VerdictClass::Refuted;
                v.witness = Some(probe.label.clone());
                v.set_epsilon(&r.epsilon);
                v.evidence = Some(Evidence::ClosedForm(r.describe()));
                return v;
            }
            Err(n) => v.notes.push(format!("refutation for {} not confirmed at n = {n}", probe.label)),
        }
    }

    let mut certs = Vec::new();
    for (p, probe) in probes.iter().enumerate() {
        match &probe.rate {
            Some(c) if c.kind.vanishes() => match rate_holds(c, values, p) {
                Ok(()) => certs.push(c.clone()),
                Err(n) => v.notes.push(format!("certificate {} violated at n = {n}", c.describe())),
            },
            _ => {}
        }
    }
    if !probes.is_empty() && certs.len() == probes.len() {
        v.class = VerdictClass::CertifiedNull;
        v.certificate = Some(certs);
        return v;
    }

    if values[window_start..].iter().all(|row| row.iter().all(|g| g.lt_rat(cfg.min_eps()))) {
        v.class = VerdictClass::EmpiricallyNull;
        return v;
    }
    let last_quarter = h - h / 4;
    for (p, probe) in probes.iter().enumerate() {
        let hits: Vec<u64> = (window_start..values.len())
            .filter(|&i| values[i][p].cmp_rat(cfg.max_eps()) != Ordering::Less)
            .map(|i| i as u64 + 1)
            .collect();
        if hits.last().is_some_and(|&n| n > last_quarter) {
            v.class = VerdictClass::Refuted;
            v.witness = Some(probe.label.clone());
            v.set_epsilon(&cfg.max_eps().clone());
            v.evidence = Some(Evidence::SampledIndices(hits.into_iter().take(32).collect()));
            return v;
        }
    }
    v
}

fn ensure_kind(fam: &Family, pair: &SpacePair) -> Result<()> {
    if pair.accepts(fam.kind) {
        Ok(())
    } else {
        Err(Error::KindMismatch(format!("family {} ({}) does not live in {}", fam.name, fam.kind, pair.id)))
    }
}

/// un-convergence to 0 against the pair's standard test vectors.
pub fn check_un(fam: &Family, pair: &SpacePair, cfg: &CheckConfig) -> Result<Verdict> {
    ensure_kind(fam, pair)?;
    let tv = pair.test_vectors(cfg.budget, fam.kind)?;
    check_un_with(fam, pair, &tv.vectors, cfg)
}

/// un-convergence to 0 against an explicit set of positive vectors of `X`.
pub fn check_un_with(fam: &Family, pair: &SpacePair, vectors: &[Element], cfg: &CheckConfig) -> Result<Verdict> {
    cfg.validate()?;
    ensure_kind(fam, pair)?;
    for x in vectors {
        if !x.is_positive() || !pair.contains(x) || x.kind() != fam.kind {
            return Err(Error::NotInIdeal(format!("{} is not a positive {} element of {}", x.to_text(), fam.kind, pair.id)));
        }
    }
    let probes: Vec<Probe> = vectors
        .iter()
        .map(|x| Probe {
            label: x.to_text(),
            rate: fam.certifier.un_rate(pair, x),
            refutation: fam.certifier.un_refutation(pair, x),
        })
        .collect();
    let g = Gauger::new(pair, vectors);
    let values = sweep_prepared(fam, cfg, vectors.len(), |y| Ok(g.prepare(y)), |y, p| g.gauge(y, p))?;
    Ok(decide(blank(fam, &pair.id, Mode::Un, cfg), cfg, &probes, &values))
}

fn default_points(kind: Kind) -> Result<Vec<Point>> {
    match kind {
        Kind::Seq => Ok((1..=8).map(|i| Point::N(i.into())).collect()),
        Kind::Step | Kind::Pl => Ok((0..32).map(|i| Point::T(rat(i, 32))).collect()),
        Kind::Sum => Err(Error::KindMismatch("pointwise checks need a function or sequence carrier".into())),
    }
}

fn point_label(p: &Point) -> String {
    match p {
        Point::T(t) => format!("t={}", fmt_rat(t)),
        Point::N(i) => format!("i={i}"),
        Point::Comp(c, t) => format!("{c}:t={}", fmt_rat(t)),
    }
}

/// Convergence to 0 at each coordinate (sequences) or grid point (functions); defaults are
/// coordinates `1..=8` and the points `i/32`.
pub fn check_pointwise(fam: &Family, cfg: &CheckConfig, points: Option<&[Point]>) -> Result<Verdict> {
    cfg.validate()?;
    let points = match points {
        Some(p) => p.to_vec(),
        None => default_points(fam.kind)?,
    };
    let probes: Vec<Probe> = points
        .iter()
        .map(|at| Probe {
            label: point_label(at),
            rate: fam.certifier.point_rate(at),
            refutation: fam.certifier.point_refutation(at),
        })
        .collect();
    let values = sweep(fam, cfg, points.len(), |y, p| Ok(NormValue::exact(y.eval(&points[p])?.abs())))?;
    let pair = match fam.kind {
        Kind::Seq => "RN",
        _ => "[0,1]",
    };
    Ok(decide(blank(fam, pair, Mode::Pointwise, cfg), cfg, &probes, &values))
}

/// `‖y_n‖_e → 0`, with `‖y‖_e = ∞` outside the principal ideal of `e`.
pub fn check_uniform_unit(fam: &Family, e: &Element, cfg: &CheckConfig) -> Result<Verdict> {
    cfg.validate()?;
    if !e.is_positive() || e.is_zero() || e.kind() != fam.kind {
        return Err(Error::BadUnit(format!("{} is not a positive {} element", e.to_text(), fam.kind)));
    }
    let probes = [Probe {
        label: e.to_text(),
        rate: fam.certifier.uniform_rate(e),
        refutation: fam.certifier.uniform_refutation(e),
    }];
    let values = sweep(fam, cfg, 1, |y, _| Ok(NormValue::Exact(unit_norm(y, e)?)))?;
    let mut v = decide(blank(fam, &format!("I_{}", e.to_text()), Mode::Uniform, cfg), cfg, &probes, &values);
    let last_infinite = values.iter().rposition(|row| row[0].is_infinite());
    v.tail_in_ideal_from = match last_infinite {
        None => Some(1),
        Some(i) if i + 1 < values.len() => Some(i as u64 + 2),
        Some(_) => None,
    };
    Ok(v)
}

fn measure_in(y: &Element, eps: &Rational, region: Option<&Region>) -> Result<Rational> {
    match region {
        None => y.level_measure(eps),
        Some(a) => Ok(y.superlevel_set(eps)?.intersect(a).measure()),
    }
}

/// `μ({|y_n| > ε} ∩ A) → 0` for every `ε` in the grid; `A` defaults to `[0, 1]`.
pub fn check_in_measure(fam: &Family, cfg: &CheckConfig, region: Option<&Region>) -> Result<Verdict> {
    cfg.validate()?;
    if !matches!(fam.kind, Kind::Step | Kind::Pl | Kind::Sum) {
        return Err(Error::KindMismatch(format!("{} has no measure structure", fam.kind)));
    }
    let region = region.filter(|a| **a != Region::unit());
    let mut levels: Vec<Rational> = cfg.eps_grid.clone();
    let mut probes: Vec<Probe> = levels
        .iter()
        .map(|eps| Probe { label: format!("level {}", fmt_rat(eps)), rate: fam.certifier.measure_rate(eps), refutation: None })
        .collect();
    // Shrinking the region only shrinks level sets: rates survive, refutations do not.
    if region.is_none() {
        if let Some(r) = fam.certifier.measure_refutation() {
            levels.push(r.epsilon.clone());
            probes.push(Probe { label: format!("level {}", fmt_rat(&r.epsilon)), rate: None, refutation: Some(r) });
        }
    }
    let values = sweep(fam, cfg, levels.len(), |y, p| Ok(NormValue::exact(measure_in(y, &levels[p], region)?)))?;
    // The extra refutation level is not part of the null claim.
    let grid = cfg.eps_grid.len();
    let mut v = blank(fam, region.map_or("[0,1]".to_string(), |a| a.to_string()).as_str(), Mode::Measure, cfg);
    if probes.len() > grid {
        let refute = decide(v.clone(), cfg, &probes[grid..], &values.iter().map(|r| r[grid..].to_vec()).collect::<Vec<_>>());
        if matches!(refute.evidence, Some(Evidence::ClosedForm(_))) {
            return Ok(refute);
        }
        v.notes = refute.notes;
    }
    let grid_values: Vec<Vec<NormValue>> = values.into_iter().map(|mut r| {
        r.truncate(grid);
        r
    }).collect();
    let mut out = decide(v, cfg, &probes[..grid], &grid_values);
    if out.class == VerdictClass::Refuted {
        // a level set that fails to shrink: report its own level as ε
        if let Some(w) = &out.witness {
            out.epsilon = w.strip_prefix("level ").map(str::to_string);
        }
    }
    Ok(out)
}

/// Sample points `i/64` for the almost-everywhere check.
fn ae_points() -> Vec<Rational> {
    (0..64).map(|i| rat(i, 64)).collect()
}

/// Almost-everywhere convergence to 0, from the family's declared decay or recurrence
/// certificate, spot-verified at the sample points.
pub fn check_ae(fam: &Family, cfg: &CheckConfig) -> Result<Verdict> {
    cfg.validate()?;
    if !matches!(fam.kind, Kind::Step | Kind::Pl) {
        return Err(Error::KindMismatch(format!("a.e. checks need a function carrier, not {}", fam.kind)));
    }
    let mut v = blank(fam, "[0,1]", Mode::Ae, cfg);
    let Some(cert) = fam.certifier.ae() else {
        v.notes.push("no almost-everywhere certificate".into());
        return Ok(v);
    };
    let points: Vec<Rational> = match &cert {
        AeCert::Decay { null_set } => ae_points().into_iter().filter(|t| !null_set.contains(t)).collect(),
        AeCert::Recurrence { region, .. } => ae_points().into_iter().filter(|t| region.contains(t)).collect(),
    };
    let pts: Vec<Point> = points.iter().cloned().map(Point::T).collect();
    let values = sweep(fam, cfg, pts.len(), |y, p| Ok(NormValue::exact(y.eval(&pts[p])?.abs())))?;
    v.worst_gauge = max_value(values[(cfg.horizon / 2) as usize..].iter().flat_map(|r| r.iter()));
    match cert {
        AeCert::Decay { null_set } => {
            let mut certs = Vec::new();
            for (p, at) in pts.iter().enumerate() {
                let ok = fam.certifier.point_rate(at).filter(|c| c.kind.vanishes()).map(|c| (rate_holds(&c, &values, p), c));
                match ok {
                    Some((Ok(()), c)) => certs.push(c),
                    Some((Err(n), c)) => {
                        v.notes.push(format!("{} fails at {} for n = {n}", c.describe(), point_label(at)));
                        return Ok(v);
                    }
                    None => {
                        v.notes.push(format!("no decay rate at {}", point_label(at)));
                        return Ok(v);
                    }
                }
            }
            v.class = VerdictClass::CertifiedNull;
            v.witness = Some(format!(
                "decay off {{{}}}",
                null_set.iter().map(fmt_rat).collect::<Vec<_>>().join(",")
            ));
            v.certificate = Some(certs);
        }
        AeCert::Recurrence { region, epsilon } => {
            if region.measure().is_zero() || pts.is_empty() {
                v.notes.push("recurrence region is null or unsampled".into());
                return Ok(v);
            }
            for (p, at) in pts.iter().enumerate() {
                let Some(r) = fam.certifier.point_refutation(at).filter(|r| r.epsilon >= epsilon) else {
                    v.notes.push(format!("no recurrence pattern at {}", point_label(at)));
                    return Ok(v);
                };
                if let Err(n) = refutation_holds(&r, &values, p, cfg.horizon) {
                    v.notes.push(format!("recurrence at {} not confirmed at n = {n}", point_label(at)));
                    return Ok(v);
                }
            }
            v.class = VerdictClass::Refuted;
            v.witness = Some(region.to_string());
            v.set_epsilon(&epsilon);
            v.evidence = Some(Evidence::ClosedForm(format!(
                "values >= {} recur at every point of {} (measure {}); confirmed at {} sample points",
                fmt_rat(&epsilon),
                region,
                fmt_rat(&region.measure()),
                pts.len()
            )));
        }
    }
    Ok(v)
}

/// un-convergence read off the metric `d(y_n, 0) = ‖|y_n| ∧ u‖` for the pair's unit `u`.
pub fn check_metric(fam: &Family, pair: &SpacePair, cfg: &CheckConfig) -> Result<Verdict> {
    cfg.validate()?;
    ensure_kind(fam, pair)?;
    let u = metric_unit(pair, fam.kind)?;
    let zero = Element::zero(fam.kind);
    let probes = [Probe {
        label: u.to_text(),
        rate: fam.certifier.un_rate(pair, &u),
        refutation: fam.certifier.un_refutation(pair, &u),
    }];
    let values = sweep(fam, cfg, 1, |y, _| un_metric(y, &zero, &u, pair))?;
    Ok(decide(blank(fam, &format!("metric({})", pair.id), Mode::Un, cfg), cfg, &probes, &values))
}

/// The candidates `c` for which `n ↦ y_n − c` is un-null.
pub fn limit_uniqueness_probe(pair: &SpacePair, fam: &Family, candidates: &[Element], cfg: &CheckConfig) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for c in candidates {
        if check_un(&fam.shifted(c)?, pair, cfg)?.class.is_null() {
            out.push(c.clone());
        }
    }
    Ok(out)
}

/// `true` iff `cert` dominates the exact gauge at every sampled index and test vector.
pub fn verify_certificate(fam: &Family, cert: &RateCert, pair: &SpacePair, samples: &[u64]) -> Result<bool> {
    if samples.is_empty() {
        return Err(Error::BadParams("verify_certificate needs at least one sample index".into()));
    }
    if !cert.kind.is_well_formed() {
        return Ok(false);
    }
    ensure_kind(fam, pair)?;
    let tv = pair.test_vectors(DEFAULT_BUDGET, fam.kind)?;
    for &n in samples {
        let y = fam.eval(n);
        for x in &tv.vectors {
            if !cert.dominates(n, &raw_gauge(&y, x, pair)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeRow {
    pub n: u64,
    pub test_vector_id: usize,
    pub value: NormValue,
}

/// Exact gauges for `n = 1..=n_max` against every standard test vector.
pub fn gauge_table(fam: &Family, pair: &SpacePair, n_max: u64, budget: usize) -> Result<(Vec<Element>, Vec<GaugeRow>)> {
    ensure_kind(fam, pair)?;
    let tv = pair.test_vectors(budget, fam.kind)?;
    let cfg = CheckConfig::default().with_horizon(n_max);
    let g = Gauger::new(pair, &tv.vectors);
    let values = sweep_prepared(fam, &cfg, tv.vectors.len(), |y| Ok(g.prepare(y)), |y, p| g.gauge(y, p))?;
    let rows = values
        .into_iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.into_iter().enumerate().map(move |(id, value)| GaugeRow { n: i as u64 + 1, test_vector_id: id, value })
        })
        .collect();
    Ok((tv.vectors, rows))
}
