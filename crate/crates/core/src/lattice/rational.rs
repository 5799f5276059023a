//! Exact scalars: big rationals, the extended half-line, and small helpers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// `2^-k` as an exact rational.
pub fn dyadic(k: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// `⌊log₂ n⌋` for `n ≥ 1`.
pub fn floor_log2(n: u64) -> u32 {
    debug_assert!(n >= 1);
    63 - n.leading_zeros()
}

pub fn floor_log2_big(n: &BigInt) -> u64 {
    debug_assert!(n.is_positive());
    n.bits() - 1
}

pub fn pow(r: &Rational, e: u32) -> Rational {
    num_traits::pow(r.clone(), e as usize)
}

/// Order of two rationals by cross-multiplication, in machine words when both fit.
pub fn cmp_q(a: &Rational, b: &Rational) -> Ordering {
    if a.denom() == b.denom() {
        return a.numer().cmp(b.numer());
    }
    if let (Some(x), Some(y)) = (Small::of(a), Small::of(b)) {
        return (x.n * y.d).cmp(&(y.n * x.d));
    }
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

pub fn min_r(a: &Rational, b: &Rational) -> Rational {
    if cmp_q(a, b) != Ordering::Greater { a.clone() } else { b.clone() }
}

pub fn max_r(a: &Rational, b: &Rational) -> Rational {
    if cmp_q(a, b) != Ordering::Less { a.clone() } else { b.clone() }
}

/// Canonical text form `p/q`; the denominator is always written.
pub fn fmt_rat(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `serialize_with` helper writing a rational as the string `p/q`.
pub fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(r))
}

/// [`ser_rat`] for a list.
pub fn ser_rats<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_rat))
}

pub fn parse_rat(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// Smallest integer `≥ r`.
pub fn ceil_int(r: &Rational) -> BigInt {
    let (q, m) = r.numer().div_mod_floor(r.denom());
    if m.is_zero() { q } else { q + 1 }
}

/// Largest integer `≤ r`.
pub fn floor_int(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// A value in `[0, ∞]`, or more generally a rational extended by `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtScalar {
    Finite(Rational),
    PositiveInfinity,
}

impl ExtScalar {
    pub fn zero() -> Self {
        ExtScalar::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtScalar::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtScalar::Finite(r) => Some(r),
            ExtScalar::PositiveInfinity => None,
        }
    }

    pub fn add(&self, other: &ExtScalar) -> ExtScalar {
        match (self, other) {
            (ExtScalar::Finite(a), ExtScalar::Finite(b)) => ExtScalar::Finite(a + b),
            _ => ExtScalar::PositiveInfinity,
        }
    }

    pub fn max(self, other: ExtScalar) -> ExtScalar {
        if self >= other { self } else { other }
    }

    pub fn mul_rat(&self, r: &Rational) -> ExtScalar {
        match self {
            ExtScalar::Finite(a) => ExtScalar::Finite(a * r),
            ExtScalar::PositiveInfinity if r.is_zero() => ExtScalar::zero(),
            ExtScalar::PositiveInfinity => ExtScalar::PositiveInfinity,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtScalar::Finite(r) => to_f64(r),
            ExtScalar::PositiveInfinity => f64::INFINITY,
        }
    }
}

impl Ord for ExtScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtScalar::Finite(a), ExtScalar::Finite(b)) => cmp_q(a, b),
            (ExtScalar::Finite(_), ExtScalar::PositiveInfinity) => Ordering::Less,
            (ExtScalar::PositiveInfinity, ExtScalar::Finite(_)) => Ordering::Greater,
            (ExtScalar::PositiveInfinity, ExtScalar::PositiveInfinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for ExtScalar {
    fn from(r: Rational) -> Self {
        ExtScalar::Finite(r)
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtScalar::Finite(r) => f.write_str(&fmt_rat(r)),
            ExtScalar::PositiveInfinity => f.write_str("inf"),
        }
    }
}

/// A reduced fraction with machine-word parts, for hot loops over small rationals.
/// Every operation is checked and reports overflow as `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Small {
    n: i128,
    d: i128,
}

impl Small {
    pub(crate) const ZERO: Small = Small { n: 0, d: 1 };

    pub(crate) fn int(n: i128) -> Small {
        Small { n, d: 1 }
    }

    pub(crate) fn of(r: &Rational) -> Option<Small> {
        Some(Small { n: r.numer().to_i64()? as i128, d: r.denom().to_i64()? as i128 })
    }

    fn reduced(n: i128, d: i128) -> Option<Small> {
        if d == 0 {
            return None;
        }
        let g = n.gcd(&d);
        let (n, d) = if d < 0 { (-n / g, -d / g) } else { (n / g, d / g) };
        Some(Small { n, d })
    }

    pub(crate) fn add(self, o: Small) -> Option<Small> {
        Self::reduced(self.n.checked_mul(o.d)?.checked_add(o.n.checked_mul(self.d)?)?, self.d.checked_mul(o.d)?)
    }

    pub(crate) fn sub(self, o: Small) -> Option<Small> {
        self.add(Small { n: -o.n, d: o.d })
    }

    pub(crate) fn mul(self, o: Small) -> Option<Small> {
        Self::reduced(self.n.checked_mul(o.n)?, self.d.checked_mul(o.d)?)
    }

    pub(crate) fn div(self, o: Small) -> Option<Small> {
        Self::reduced(self.n.checked_mul(o.d)?, self.d.checked_mul(o.n)?)
    }

    pub(crate) fn neg(self) -> Small {
        Small { n: -self.n, d: self.d }
    }

    pub(crate) fn is_zero(self) -> bool {
        self.n == 0
    }

    pub(crate) fn is_negative(self) -> bool {
        self.n < 0
    }

    /// `self > o`, by cross-multiplication of positive denominators.
    pub(crate) fn gt(self, o: Small) -> Option<bool> {
        Some(self.n.checked_mul(o.d)? > o.n.checked_mul(self.d)?)
    }

    pub(crate) fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.n), BigInt::from(self.d))
    }
}

/// `Σ_{n=1}^{m} n^j` for `m ≥ 0`, exact (Faulhaber via Bernoulli numbers).
pub fn power_sum(j: u32, m: &BigInt) -> Rational {
    if m.is_zero() || m.is_negative() {
        return Rational::zero();
    }
    let mr = big(m);
    let bern = bernoulli_plus(j as usize);
    let mut acc = Rational::zero();
    let mut binom = BigInt::one();
    for k in 0..=j as usize {
        if k > 0 {
            binom = binom * BigInt::from(j as usize + 1 - k + 1) / BigInt::from(k);
        }
        acc += Rational::from_integer(binom.clone()) * &bern[k] * pow(&mr, j + 1 - k as u32);
    }
    acc / int(j as i64 + 1)
}

// B_k with the B_1 = +1/2 convention.
fn bernoulli_plus(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::zero(); n + 1];
    b[0] = Rational::one();
    for m in 1..=n {
        let mut s = Rational::zero();
        let mut binom = BigInt::one();
        for k in 0..m {
            s += Rational::from_integer(binom.clone()) * &b[k];
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b[m] = -s / int(m as i64 + 1);
    }
    if n >= 1 {
        b[1] = rat(1, 2);
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(fmt_rat(&parse_rat("6/4").unwrap()), "3/2");
        assert_eq!(fmt_rat(&parse_rat("-3").unwrap()), "-3/1");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn power_sums_match_brute_force() {
        for j in 0..6u32 {
            for m in 0..20i64 {
                let brute: Rational = (1..=m).map(|n| pow(&int(n), j)).sum();
                assert_eq!(power_sum(j, &BigInt::from(m)), brute, "j={j} m={m}");
            }
        }
    }

    #[test]
    fn infinity_absorbs() {
        let inf = ExtScalar::PositiveInfinity;
        assert_eq!(inf.add(&ExtScalar::zero()), inf);
        assert_eq!(ExtScalar::zero().max(inf.clone()), inf);
        assert!(ExtScalar::Finite(int(1_000_000)) < inf);
    }

    #[test]
    fn logs() {
        assert_eq!(floor_log2(1), 0);
        assert_eq!(floor_log2(5), 2);
        assert_eq!(floor_log2(8), 3);
        assert_eq!(floor_log2_big(&BigInt::from(9)), 3);
    }

    #[test]
    fn float_of_huge_rational() {
        let r = Rational::new(BigInt::one(), BigInt::one() << 2000u32);
        assert_eq!(to_f64(&r), 0.0);
        let r = Rational::new(BigInt::from(3) << 2000u32, BigInt::one() << 2001u32);
        assert!((to_f64(&r) - 1.5).abs() < 1e-12);
    }
}
