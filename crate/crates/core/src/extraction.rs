//! Subsequence extraction: from a family that is null in measure, pick `n_1 < n_2 < …` with
//! `μ{|y_{n_k}| > 2^-k} < 2^-k`, so that off the sets `U_j = ⋃_{k ≥ j} {|y_{n_k}| > 2^-k}`,
//! whose measures are bounded by geometric tails, the subsequence is dominated by `2^-k`.
//! Also the probe of the direct-sum family over `Γ`, where no subsequence can be a.e. null.

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convergence::cert::{Pattern, RateCert};
use crate::convergence::{check_un, CheckConfig, Family, Verdict};
use crate::error::{Error, Result};
use crate::gallery::{gamma_family, typewriter_element};
use crate::lattice::rational::{dyadic, fmt_rat, rat, ser_rat, ser_rats};
use crate::lattice::{Element, Kind, Point, Rational, Region};
use crate::sample::DEFAULT_SEED;
use crate::spaces::SpacePair;

#[derive(Clone, Debug)]
pub struct ExtractConfig {
    /// Indices scanned at one step when no certificate bounds the search.
    pub horizon: u64,
    /// Largest index a certificate may point the search to.
    pub max_index: u64,
    /// Rational points used to spot-check the pointwise bounds.
    pub samples: usize,
    pub seed: u64,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig { horizon: crate::convergence::DEFAULT_HORIZON, max_index: 1 << 40, samples: 10_000, seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleCheck {
    pub points: usize,
    /// `outside[j-1]`: sampled points outside `U_j`.
    pub outside: Vec<usize>,
    /// `(t, k)` with `t ∉ U_j`, `k ≥ j` and `|y_{n_k}(t)| > 2^-k`.
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtractionResult {
    pub family: String,
    pub k: u32,
    pub indices: Vec<u64>,
    /// `μ_k = μ{|y_{n_k}| > 2^-k}`.
    #[serde(serialize_with = "ser_rats")]
    pub level_measures: Vec<Rational>,
    /// `Σ_{k ≥ j} μ_k` for `j = 1..=K`.
    #[serde(serialize_with = "ser_rats")]
    pub tail_bounds: Vec<Rational>,
    /// Exact `μ(U_j)`, never above the matching tail bound.
    #[serde(serialize_with = "ser_rats")]
    pub exceptional_measures: Vec<Rational>,
    #[serde(serialize_with = "ser_rat")]
    pub total: Rational,
    /// The measure certificate consulted at each step, if any.
    pub certificates: Vec<Option<String>>,
    pub samples: SampleCheck,
}

impl ExtractionResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("extraction results serialize")
    }

    /// Every quantitative claim of the result, rechecked from its own fields.
    pub fn bounds_hold(&self) -> bool {
        let k = self.k as usize;
        let lengths = [self.indices.len(), self.level_measures.len(), self.tail_bounds.len(), self.exceptional_measures.len()];
        if lengths.iter().any(|&l| l != k) || self.samples.outside.len() != k {
            return false;
        }
        let increasing = self.indices.windows(2).all(|w| w[0] < w[1]) && self.indices.first().is_none_or(|&n| n >= 1);
        let below = self.level_measures.iter().enumerate().all(|(i, m)| !m.is_negative() && *m < dyadic(i as u64 + 1));
        let tails = (0..k).all(|j| self.tail_bounds[j] == self.level_measures[j..].iter().sum::<Rational>());
        let exceptional = self.exceptional_measures.iter().zip(&self.tail_bounds).all(|(e, t)| e <= t);
        let total = self.total == self.level_measures.iter().sum::<Rational>() && self.total < Rational::one();
        increasing && below && tails && exceptional && total && self.samples.violations == 0
    }

    /// `k ↦ y_{n_k}`, continued past `K` by `n_K + (k − K)` so that the index map stays
    /// strictly increasing.
    pub fn subsequence(&self, fam: &Family) -> Family {
        let idx = self.indices.clone();
        let name = format!("{}[extracted {}]", fam.name, self.k);
        fam.subsequence(name, move |k| match idx.get((k as usize).wrapping_sub(1)) {
            Some(&n) => n,
            None => idx.last().copied().unwrap_or(0) + k - idx.len() as u64,
        })
    }
}

/// First `n` in `(after, max]` with `bound(n) < level`; bounds are nonincreasing in `n`.
fn certified_index(cert: &RateCert, level: &Rational, after: u64, max: u64) -> Option<u64> {
    let below = |n: u64| cert.kind.bound(n).is_some_and(|b| b < *level);
    if after >= max || !below(max) {
        return None;
    }
    let (mut lo, mut hi) = (after, max);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if below(mid) { hi = mid } else { lo = mid }
    }
    Some(hi)
}

/// Picks `n_k` as the smallest index past `n_{k-1}` whose exact level measure at `2^-k` is
/// below `2^-k`. A certificate (`cert`, or the family's own measure rate at each level)
/// bounds the scan and is checked against every exact measure computed on the way.
pub fn extract_ae_subsequence(fam: &Family, cert: Option<&RateCert>, k: u32, cfg: &ExtractConfig) -> Result<ExtractionResult> {
    if !matches!(fam.kind, Kind::Step | Kind::Pl) {
        return Err(Error::KindMismatch(format!("extraction needs a function carrier, not {}", fam.kind)));
    }
    if k == 0 {
        return Err(Error::BadParams("extraction needs K ≥ 1".into()));
    }
    let mut indices = Vec::with_capacity(k as usize);
    let mut measures = Vec::with_capacity(k as usize);
    let mut certificates = Vec::with_capacity(k as usize);
    let mut prev = 0u64;
    for step in 1..=k {
        let level = dyadic(step as u64);
        let c = cert.cloned().or_else(|| fam.certifier.measure_rate(&level));
        let limit = match &c {
            Some(c) => certified_index(c, &level, prev, cfg.max_index).ok_or(Error::HorizonExhausted(cfg.max_index))?,
            None => prev.saturating_add(cfg.horizon),
        };
        let mut found = None;
        for n in prev + 1..=limit {
            let mu = fam.eval(n).level_measure(&level)?;
            if let Some(b) = c.as_ref().and_then(|c| c.kind.bound(n)) {
                if mu > b {
                    return Err(Error::CertificateViolated {
                        step,
                        index: n,
                        detail: format!("level measure {} exceeds the bound {} at level {}", fmt_rat(&mu), fmt_rat(&b), fmt_rat(&level)),
                    });
                }
            }
            if mu < level {
                found = Some((n, mu));
                break;
            }
        }
        let Some((n, mu)) = found else {
            return Err(Error::HorizonExhausted(limit));
        };
        indices.push(n);
        measures.push(mu);
        certificates.push(c.map(|c| c.describe()));
        prev = n;
    }
    let tail_bounds: Vec<Rational> = (0..k as usize).map(|j| measures[j..].iter().sum()).collect();
    let total = tail_bounds[0].clone();

    let sets: Vec<Region> = indices
        .iter()
        .enumerate()
        .map(|(i, &n)| fam.eval(n).superlevel_set(&dyadic(i as u64 + 1)))
        .collect::<Result<_>>()?;
    let mut unions = vec![Region::empty(); k as usize];
    let mut acc = Region::empty();
    for j in (0..k as usize).rev() {
        acc = acc.union(&sets[j]);
        unions[j] = acc.clone();
    }
    let exceptional_measures = unions.iter().map(Region::measure).collect();
    let samples = check_samples(fam, &indices, &unions, cfg)?;

    Ok(ExtractionResult {
        family: fam.name.clone(),
        k,
        indices,
        level_measures: measures,
        tail_bounds,
        exceptional_measures,
        total,
        certificates,
        samples,
    })
}

/// Rational points `p/q` in `[0, 1)` with `q ≤ 10^6`.
fn sample_points(n: usize, seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let q: i64 = rng.gen_range(2..=1_000_000);
            rat(rng.gen_range(0..q), q)
        })
        .collect()
}

fn check_samples(fam: &Family, indices: &[u64], unions: &[Region], cfg: &ExtractConfig) -> Result<SampleCheck> {
    let k = indices.len();
    let ys: Vec<Element> = indices.iter().map(|&n| fam.eval(n)).collect();
    let levels: Vec<Rational> = (1..=k as u64).map(dyadic).collect();
    let mut outside = vec![0usize; k];
    let mut violations = 0;
    let points = sample_points(cfg.samples, cfg.seed);
    for t in &points {
        let at = Point::T(t.clone());
        let values: Vec<Rational> = ys.iter().map(|y| y.eval(&at).map(|v| v.abs())).collect::<Result<_>>()?;
        for j in 0..k {
            if unions[j].contains(t) {
                continue;
            }
            outside[j] += 1;
            violations += (j..k).filter(|&i| values[i] > levels[i]).count();
        }
    }
    Ok(SampleCheck { points: points.len(), outside, violations })
}

/// How the `γ`-indexed subsequence looks on one component `γ'`: at `k` it is `T_m` when
/// `γ(k)` is the `m`-th entry of `γ'`, and 0 otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossPattern {
    /// `T_1, T_2, …, T_L` in order: every point of `[0,1)` is hit in every generation.
    FullTypewriter,
    /// Only positions `2^j`: supports `[0, 2^-j)` shrink to `{0}`, so the subsequence is
    /// a.e. null on this component.
    DyadicPositions,
    NoHits,
    Other,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossEvidence {
    pub component: String,
    pub hits: usize,
    /// Typewriter positions visited, in order (first 16).
    pub positions: Vec<u64>,
    pub pattern: CrossPattern,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TupleEvidence {
    pub name: String,
    pub component: u32,
    pub length: usize,
    /// Component `γ` of `y_{γ(k)}` equals `T_k` exactly for every `k ≤ length`.
    pub equals_typewriter_prefix: bool,
    /// Points of `[0,1)` at which values `≥ 1` were confirmed along the typewriter hits.
    pub recurrence_points: usize,
    pub recurrence_confirmed: bool,
    pub witnesses_failure: bool,
    pub cross: Vec<CrossEvidence>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaReport {
    pub k: usize,
    pub pair: String,
    pub un_verdict: Verdict,
    pub tuples: Vec<TupleEvidence>,
    pub passed: bool,
}

impl GammaReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn classify(positions: &[u64]) -> CrossPattern {
    if positions.is_empty() {
        CrossPattern::NoHits
    } else if positions.iter().enumerate().all(|(i, &m)| m == i as u64 + 1) {
        CrossPattern::FullTypewriter
    } else if positions.iter().all(|m| m.is_power_of_two()) {
        CrossPattern::DyadicPositions
    } else {
        CrossPattern::Other
    }
}

fn recurrence_points(seed: u64) -> Vec<Rational> {
    let mut pts: Vec<Rational> = (0..64).map(|i| rat(i, 64)).collect();
    pts.extend(sample_points(64, seed));
    pts
}

/// Part (a): the family over `Γ` is un-null against `suml1@gamma(|Γ|)`. Part (b): along
/// each `γ ∈ Γ`, component `γ` replays the typewriter prefix, so values `≥ 1` recur at
/// every sampled point and the subsequence is not a.e. null there.
pub fn uo_subsequence_probe(gamma: &[(String, Vec<u64>)], k: usize, cfg: &CheckConfig) -> Result<GammaReport> {
    let tuples: Vec<Vec<u64>> = gamma.iter().map(|(_, t)| t.iter().copied().take(k).collect()).collect();
    let fam = gamma_family(&tuples, k).map_err(|e| Error::BadFamily(e.to_string()))?;
    let pair = SpacePair::suml1(tuples.len() as u32);
    let un_verdict = check_un(&fam, &pair, cfg)?;

    let points = recurrence_points(DEFAULT_SEED);
    let mut evidence = Vec::with_capacity(tuples.len());
    for (c, ((name, _), tuple)) in gamma.iter().zip(&tuples).enumerate() {
        let comp = |n: u64| match fam.eval(n) {
            Element::Sum(s) => s.component(c as u32),
            _ => unreachable!("gamma families are direct sums"),
        };
        let replay: Vec<_> = tuple.iter().map(|&n| comp(n)).collect();
        let equals = replay.iter().enumerate().all(|(i, f)| *f == typewriter_element(i as u64 + 1));
        let mut confirmed = !replay.is_empty();
        for t in &points {
            let hits = Pattern::TypewriterHits(t.clone()).indices_upto(replay.len() as u64);
            confirmed &= !hits.is_empty() && hits.iter().all(|&i| replay[i as usize - 1].eval(t) >= Rational::one());
        }
        let cross = gamma
            .iter()
            .zip(&tuples)
            .map(|((other, _), t2)| {
                let positions: Vec<u64> =
                    tuple.iter().filter_map(|n| t2.binary_search(n).ok()).map(|m| m as u64 + 1).collect();
                CrossEvidence {
                    component: other.clone(),
                    hits: positions.len(),
                    pattern: classify(&positions),
                    positions: positions.into_iter().take(16).collect(),
                }
            })
            .collect();
        evidence.push(TupleEvidence {
            name: name.clone(),
            component: c as u32,
            length: tuple.len(),
            equals_typewriter_prefix: equals,
            recurrence_points: points.len(),
            recurrence_confirmed: confirmed,
            witnesses_failure: equals && confirmed,
            cross,
        });
    }
    let passed = un_verdict.class.is_null() && evidence.iter().all(|e| e.witnesses_failure);
    Ok(GammaReport { k, pair: pair.id, un_verdict, tuples: evidence, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn certified_search() {
        let c = RateCert::new(crate::convergence::RateKind::DyadicLog { c: Rational::one() }, "x");
        assert_eq!(certified_index(&c, &dyadic(3), 0, 1 << 20), Some(16));
        assert_eq!(certified_index(&c, &dyadic(3), 20, 1 << 20), Some(21));
        assert_eq!(certified_index(&c, &dyadic(30), 0, 1 << 20), None);
    }

    #[test]
    fn classify_positions() {
        assert_eq!(classify(&[1, 2, 3]), CrossPattern::FullTypewriter);
        assert_eq!(classify(&[2, 4, 8]), CrossPattern::DyadicPositions);
        assert_eq!(classify(&[]), CrossPattern::NoHits);
        assert_eq!(classify(&[3, 5]), CrossPattern::Other);
    }

    #[test]
    fn small_typewriter_extraction() {
        let cfg = ExtractConfig { samples: 200, ..ExtractConfig::default() };
        let r = extract_ae_subsequence(&gallery::typewriter(), None, 4, &cfg).unwrap();
        assert_eq!(r.indices, vec![4, 8, 16, 32]);
        assert!(r.bounds_hold());
    }
}
