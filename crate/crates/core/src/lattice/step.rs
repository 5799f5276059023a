use num_traits::{One, Signed, Zero};

use super::rational::{cmp_q, fmt_rat, Rational};
use super::region::Region;
use crate::error::{Error, Result};

/// A step function on `[0, 1)`: value `values[i]` on `[breaks[i], breaks[i+1])`.
///
/// Canonical form: `breaks` starts at 0, ends at 1, is strictly increasing, and no
/// two adjacent pieces carry the same value. The point `1` is ignored (measure zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepFn {
    breaks: Vec<Rational>,
    values: Vec<Rational>,
}

impl StepFn {
    pub fn new(breaks: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() || breaks.len() != values.len() + 1 {
            return Err(Error::InvalidElement(format!(
                "step function needs k+1 breakpoints for k values (got {} and {})",
                breaks.len(),
                values.len()
            )));
        }
        if !breaks[0].is_zero() || !breaks[breaks.len() - 1].is_one() {
            return Err(Error::InvalidElement("step breakpoints must start at 0 and end at 1".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidElement("step breakpoints must be strictly increasing".into()));
        }
        Ok(Self::canonical(breaks, values))
    }

    fn canonical(breaks: Vec<Rational>, values: Vec<Rational>) -> Self {
        let mut b = Vec::with_capacity(breaks.len());
        let mut v: Vec<Rational> = Vec::with_capacity(values.len());
        b.push(breaks[0].clone());
        for (i, val) in values.into_iter().enumerate() {
            if breaks[i] >= breaks[i + 1] {
                continue;
            }
            if v.last() == Some(&val) {
                *b.last_mut().unwrap() = breaks[i + 1].clone();
            } else {
                v.push(val);
                b.push(breaks[i + 1].clone());
            }
        }
        StepFn { breaks: b, values: v }
    }

    pub fn constant(c: Rational) -> Self {
        StepFn { breaks: vec![Rational::zero(), Rational::one()], values: vec![c] }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// `c · χ_[a,b)`.
    pub fn block(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        let region = Region::interval(a, b)?;
        Ok(Self::indicator(&region).scale(&c))
    }

    pub fn indicator(region: &Region) -> Self {
        let mut breaks = vec![Rational::zero()];
        let mut values = Vec::new();
        for (a, b) in region.intervals() {
            if a > breaks.last().unwrap() {
                values.push(Rational::zero());
                breaks.push(a.clone());
            }
            values.push(Rational::one());
            breaks.push(b.clone());
        }
        if !breaks.last().unwrap().is_one() {
            values.push(Rational::zero());
            breaks.push(Rational::one());
        }
        Self::canonical(breaks, values)
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `(left, right, value)` for each piece.
    pub fn pieces(&self) -> impl Iterator<Item = (&Rational, &Rational, &Rational)> {
        self.values.iter().enumerate().map(move |(i, v)| (&self.breaks[i], &self.breaks[i + 1], v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.len() == 1 && self.values[0].is_zero()
    }

    /// Value at `t`; `t = 1` reads the last piece.
    pub fn eval(&self, t: &Rational) -> Rational {
        let idx = match self.breaks.binary_search_by(|b| cmp_q(b, t)) {
            Ok(i) => i.min(self.values.len() - 1),
            Err(i) => i.saturating_sub(1).min(self.values.len() - 1),
        };
        self.values[idx].clone()
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self::canonical(self.breaks.clone(), self.values.iter().map(f).collect())
    }

    pub fn zip_with(&self, other: &StepFn, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let mut breaks = vec![Rational::zero()];
        let mut values = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.values.len() && j < other.values.len() {
            values.push(f(&self.values[i], &other.values[j]));
            let (ri, rj) = (&self.breaks[i + 1], &other.breaks[j + 1]);
            match cmp_q(ri, rj) {
                std::cmp::Ordering::Less => {
                    breaks.push(ri.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    breaks.push(rj.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    breaks.push(ri.clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        Self::canonical(breaks, values)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|v| v * c)
    }

    /// `{t : |f(t)| > ε}`.
    pub fn superlevel_set(&self, eps: &Rational) -> Region {
        Region::from_sorted(
            self.pieces().filter(|(_, _, v)| abs_gt(v, eps)).map(|(a, b, _)| (a.clone(), b.clone())).collect(),
        )
    }

    /// `μ{t : |f(t)| > ε}`.
    pub fn level_measure(&self, eps: &Rational) -> Rational {
        let mut total = Rational::zero();
        for (a, b, _) in self.pieces().filter(|(_, _, v)| abs_gt(v, eps)) {
            total += b - a;
        }
        total
    }

    /// `{t : f(t) ≠ 0}`.
    pub fn support(&self) -> Region {
        Region::from_sorted(
            self.pieces().filter(|(_, _, v)| !v.is_zero()).map(|(a, b, _)| (a.clone(), b.clone())).collect(),
        )
    }

    /// `f · χ_A`.
    pub fn restrict(&self, region: &Region) -> Self {
        self.zip_with(&StepFn::indicator(region), |v, m| v * m)
    }

    pub fn to_text(&self) -> String {
        let b: Vec<String> = self.breaks.iter().map(fmt_rat).collect();
        let v: Vec<String> = self.values.iter().map(fmt_rat).collect();
        format!("step [{}] [{}]", b.join(","), v.join(","))
    }
}

fn abs_gt(v: &Rational, eps: &Rational) -> bool {
    if v.is_negative() {
        cmp_q(&-v, eps).is_gt()
    } else {
        cmp_q(v, eps).is_gt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::{int, rat};

    fn s(b: &[(i64, i64)], v: &[i64]) -> StepFn {
        StepFn::new(b.iter().map(|&(n, d)| rat(n, d)).collect(), v.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn canonical_merges_equal_neighbours() {
        let f = s(&[(0, 1), (1, 4), (1, 2), (1, 1)], &[2, 2, 3]);
        assert_eq!(f.breaks().len(), 3);
        assert_eq!(f.values(), &[int(2), int(3)]);
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(StepFn::new(vec![rat(0, 1), rat(1, 2)], vec![int(1)]).is_err());
        assert!(StepFn::new(vec![rat(0, 1), rat(1, 2), rat(1, 2), rat(1, 1)], vec![int(1), int(2), int(3)]).is_err());
        assert!(StepFn::new(vec![rat(0, 1), rat(1, 1)], vec![]).is_err());
    }

    #[test]
    fn eval_half_open() {
        let f = s(&[(0, 1), (1, 2), (1, 1)], &[1, 3]);
        assert_eq!(f.eval(&rat(0, 1)), int(1));
        assert_eq!(f.eval(&rat(1, 2)), int(3));
        assert_eq!(f.eval(&rat(49, 100)), int(1));
        assert_eq!(f.eval(&rat(1, 1)), int(3));
    }

    #[test]
    fn restrict_examples() {
        let two = StepFn::constant(int(2));
        let half = Region::interval(rat(0, 1), rat(1, 2)).unwrap();
        assert_eq!(two.restrict(&half), s(&[(0, 1), (1, 2), (1, 1)], &[2, 0]));
        assert_eq!(two.restrict(&Region::unit()), two);
        let t5 = StepFn::block(rat(1, 4), rat(1, 2), int(1)).unwrap();
        let quarter = Region::interval(rat(0, 1), rat(1, 4)).unwrap();
        assert!(t5.restrict(&quarter).is_zero());
    }
}
