//! The un-gauge `‖|y| ∧ x‖`, its neighbourhoods and metric, and semi-decision checkers
//! for un, pointwise, in-measure, almost-everywhere and uniform convergence.

pub mod cert;
mod check;
pub mod family;

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

pub use cert::{AeCert, Certifier, Pattern, RateCert, RateKind, Refutation};
pub use check::{
    check_ae, check_in_measure, check_metric, check_pointwise, check_uniform_unit, check_un, check_un_with, gauge_table,
    limit_uniqueness_probe, verify_certificate, GaugeRow,
};
pub use family::Family;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::rational::{dyadic, fmt_rat};
use crate::lattice::{Element, NormValue, Rational, TailSeq};
use crate::spaces::{Ambient, SpacePair, DEFAULT_BUDGET};

pub const DEFAULT_HORIZON: u64 = 4096;

/// `{2^-1, …, 2^-20}`.
pub fn default_eps_grid() -> Vec<Rational> {
    (1..=20).map(dyadic).collect()
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub horizon: u64,
    pub eps_grid: Vec<Rational>,
    pub budget: usize,
    pub exec: Exec,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            horizon: DEFAULT_HORIZON,
            eps_grid: default_eps_grid(),
            budget: DEFAULT_BUDGET,
            exec: Exec::available_parallel(),
        }
    }
}

impl CheckConfig {
    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon.max(1);
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(1);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::BadParams("horizon must be at least 1".into()));
        }
        if self.eps_grid.is_empty() || self.eps_grid.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::BadParams("epsilon grid must be nonempty and strictly decreasing".into()));
        }
        Ok(())
    }

    pub(crate) fn min_eps(&self) -> &Rational {
        self.eps_grid.last().expect("nonempty grid")
    }

    pub(crate) fn max_eps(&self) -> &Rational {
        &self.eps_grid[0]
    }
}

/// `‖|y| ∧ x‖` in the norm of the pair, for `0 ≤ x ∈ X`.
pub fn gauge(y: &Element, x: &Element, pair: &SpacePair) -> Result<NormValue> {
    if !x.is_positive() || !pair.contains(x) {
        return Err(Error::NotInIdeal(format!("{} is not a positive element of {}", x.to_text(), pair.id)));
    }
    raw_gauge(y, x, pair)
}

/// [`gauge`] without the membership check, for test vectors validated once up front.
pub(crate) fn raw_gauge(y: &Element, x: &Element, pair: &SpacePair) -> Result<NormValue> {
    y.abs_val().meet(x)?.norm(&pair.norm)
}

/// `y ∈ U_{ε,x}`, i.e. `‖|y| ∧ x‖ < ε`.
pub fn in_un_neighborhood(y: &Element, eps: &Rational, x: &Element, pair: &SpacePair) -> Result<bool> {
    Ok(gauge(y, x, pair)?.cmp_rat(eps) == Ordering::Less)
}

/// `d(y₁, y₂) = ‖|y₁ − y₂| ∧ u‖` for the pair's declared unit `u`. Sequence pairs without
/// a representable unit in `X` accept the weak unit `𝟙` of `ℝ^ℕ`; the value may then be `∞`.
pub fn un_metric(y1: &Element, y2: &Element, u: &Element, pair: &SpacePair) -> Result<NormValue> {
    if metric_unit(pair, u.kind()).ok().as_ref() != Some(u) {
        return Err(Error::BadUnit(format!("{} is not the declared unit of {}", u.to_text(), pair.id)));
    }
    raw_gauge(&y1.sub(y2)?, u, pair)
}

/// The unit [`un_metric`] accepts for `kind` elements of `pair`.
pub fn metric_unit(pair: &SpacePair, kind: crate::lattice::Kind) -> Result<Element> {
    pair.unit_in(kind)
        .or_else(|| (pair.unit.is_none() && pair.ambient == Ambient::RN).then(|| TailSeq::ones().into()))
        .ok_or_else(|| Error::BadUnit(format!("{} declares no unit for {} elements", pair.id, kind)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Un,
    Pointwise,
    Measure,
    Ae,
    Uniform,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Mode> {
        Ok(match s {
            "un" => Mode::Un,
            "pointwise" => Mode::Pointwise,
            "measure" => Mode::Measure,
            "ae" => Mode::Ae,
            "uniform" => Mode::Uniform,
            _ => return Err(Error::BadParams(format!("unknown mode `{s}`"))),
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Un => "un",
            Mode::Pointwise => "pointwise",
            Mode::Measure => "measure",
            Mode::Ae => "ae",
            Mode::Uniform => "uniform",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VerdictClass {
    CertifiedNull,
    EmpiricallyNull,
    Refuted,
    Inconclusive,
}

impl VerdictClass {
    pub fn is_null(self) -> bool {
        matches!(self, VerdictClass::CertifiedNull | VerdictClass::EmpiricallyNull)
    }

    /// Null classes collapse; refuted and inconclusive stay apart.
    pub fn coarse(self) -> &'static str {
        match self {
            VerdictClass::CertifiedNull | VerdictClass::EmpiricallyNull => "null",
            VerdictClass::Refuted => "refuted",
            VerdictClass::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Evidence {
    ClosedForm(String),
    SampledIndices(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub family: String,
    pub pair: String,
    pub mode: Mode,
    pub class: VerdictClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<RateCert>>,
    pub horizon: u64,
    pub worst_gauge: Option<NormValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_in_ideal_from: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn epsilon_rat(&self) -> Option<Rational> {
        self.epsilon.as_deref().and_then(|e| crate::lattice::rational::parse_rat(e).ok())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdicts serialize")
    }

    pub(crate) fn set_epsilon(&mut self, eps: &Rational) {
        self.epsilon = Some(fmt_rat(eps));
    }
}

/// Runs the checker for `mode`. `pair` supplies the test vectors for `un` and the strong
/// unit for `uniform`; the other modes only use it as a label.
pub fn check(fam: &Family, pair: Option<&SpacePair>, mode: Mode, cfg: &CheckConfig) -> Result<Verdict> {
    let need_pair = || pair.ok_or_else(|| Error::BadParams(format!("mode {mode} needs a pair")));
    let mut v = match mode {
        Mode::Un => return check_un(fam, need_pair()?, cfg),
        Mode::Pointwise => check_pointwise(fam, cfg, None)?,
        Mode::Measure => check_in_measure(fam, cfg, None)?,
        Mode::Ae => check_ae(fam, cfg)?,
        Mode::Uniform => {
            let p = need_pair()?;
            let e = p
                .unit
                .as_ref()
                .filter(|u| u.kind == crate::spaces::UnitKind::Strong)
                .and_then(|_| p.unit_in(fam.kind))
                .ok_or_else(|| Error::BadUnit(format!("{} declares no strong unit for {} elements", p.id, fam.kind)))?;
            check_uniform_unit(fam, &e, cfg)?
        }
    };
    if let Some(p) = pair {
        v.pair = p.id.clone();
    }
    Ok(v)
}
