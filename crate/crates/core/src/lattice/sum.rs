use std::collections::{BTreeMap, BTreeSet};

use super::rational::Rational;
use super::step::StepFn;

/// A finite direct sum of step functions keyed by component id. Components not
/// stored are zero; stored components are never zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DirectSum {
    comps: BTreeMap<u32, StepFn>,
}

impl DirectSum {
    pub fn new(comps: impl IntoIterator<Item = (u32, StepFn)>) -> Self {
        DirectSum { comps: comps.into_iter().filter(|(_, f)| !f.is_zero()).collect() }
    }

    pub fn zero() -> Self {
        DirectSum::default()
    }

    pub fn single(id: u32, f: StepFn) -> Self {
        Self::new([(id, f)])
    }

    pub fn components(&self) -> &BTreeMap<u32, StepFn> {
        &self.comps
    }

    pub fn component(&self, id: u32) -> StepFn {
        self.comps.get(&id).cloned().unwrap_or_else(StepFn::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn zip_with(&self, other: &DirectSum, f: impl Fn(&StepFn, &StepFn) -> StepFn) -> Self {
        let ids: BTreeSet<u32> = self.comps.keys().chain(other.comps.keys()).copied().collect();
        Self::new(ids.into_iter().map(|id| (id, f(&self.component(id), &other.component(id)))))
    }

    pub fn map(&self, f: impl Fn(&StepFn) -> StepFn) -> Self {
        Self::new(self.comps.iter().map(|(id, c)| (*id, f(c))))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|f| f.scale(c))
    }
}
