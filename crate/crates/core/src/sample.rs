//! Seeded random elements on a dyadic grid, for laws, tests and alternative bases.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::lattice::rational::{int, rat};
use crate::lattice::{DirectSum, Element, Kind, PlFn, Rational, Region, StepFn, Tail, TailSeq};
use crate::spaces::{Ambient, Ideal, SpacePair};

/// Seed used when neither the caller nor `UNLATTICE_SEED` supplies one.
pub const DEFAULT_SEED: u64 = 0x756e_6c61_7474;

/// Resolution of every sampled breakpoint: multiples of `1/GRID` inside `[0, 1]`.
pub const GRID: i64 = 64;

/// `lo + k(hi − lo)/64` for a random `0 < k < 64`.
pub fn random_dyadic<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational) -> Rational {
    let k: i64 = rng.gen_range(1..GRID);
    lo + (hi - lo) * rat(k, GRID)
}

/// A small signed rational `p/q` with `|p| ≤ 4q` and `q ∈ {1, 2, 4, 8}`.
pub fn random_value<R: Rng>(rng: &mut R) -> Rational {
    let q = 1i64 << rng.gen_range(0..4);
    rat(rng.gen_range(-4 * q..=4 * q), q)
}

/// A block on top of a small constant, supported in the first interval of `within`.
pub fn random_step<R: Rng>(rng: &mut R, within: &Region) -> StepFn {
    let (lo, hi) = within.intervals()[0].clone();
    let a = random_dyadic(rng, &lo, &hi);
    let b = random_dyadic(rng, &lo, &hi);
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let b = if a == b { &a + (&hi - &a) / int(2) } else { b };
    let h = rat(rng.gen_range(1..=8), rng.gen_range(1..=4));
    let base = rat(rng.gen_range(0..=2), 8);
    StepFn::block(a, b, h).expect("inside [0,1]").zip_with(&StepFn::indicator(within).scale(&base), |x, y| x + y)
}

/// A nonzero, nonnegative piecewise-linear function with nodes on the `1/64` grid.
pub fn random_pl<R: Rng>(rng: &mut R, vanish_at_zero: bool) -> PlFn {
    let k = rng.gen_range(2..6);
    let mut xs: Vec<Rational> = (1..k).map(|_| rat(rng.gen_range(1..GRID), GRID)).collect();
    xs.push(Rational::zero());
    xs.push(Rational::one());
    xs.sort();
    xs.dedup();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| if vanish_at_zero && x.is_zero() { Rational::zero() } else { rat(rng.gen_range(0..=16), 8) })
        .collect();
    let f = PlFn::new(xs, ys).expect("sorted nodes");
    if f.is_zero() { PlFn::identity() } else { f }
}

/// A signed step function with up to six pieces on the `1/64` grid.
pub fn random_signed_step<R: Rng>(rng: &mut R) -> StepFn {
    let m = rng.gen_range(1..=6);
    let mut breaks: Vec<Rational> = (0..m - 1).map(|_| rat(rng.gen_range(1..GRID), GRID)).collect();
    breaks.push(Rational::zero());
    breaks.push(Rational::one());
    breaks.sort();
    breaks.dedup();
    let values = (1..breaks.len()).map(|_| random_value(rng)).collect();
    StepFn::new(breaks, values).expect("sorted breaks")
}

/// A signed piecewise-linear function with up to six nodes on the `1/64` grid.
pub fn random_signed_pl<R: Rng>(rng: &mut R) -> PlFn {
    let m = rng.gen_range(0..=4);
    let mut xs: Vec<Rational> = (0..m).map(|_| rat(rng.gen_range(1..GRID), GRID)).collect();
    xs.push(Rational::zero());
    xs.push(Rational::one());
    xs.sort();
    xs.dedup();
    let ys = xs.iter().map(|_| random_value(rng)).collect();
    PlFn::new(xs, ys).expect("sorted nodes")
}

/// A signed sequence: a short random prefix followed by a zero, constant or affine tail.
pub fn random_seq<R: Rng>(rng: &mut R, tail: Option<Tail>) -> TailSeq {
    let len = rng.gen_range(0..=8);
    let prefix = (0..len).map(|_| random_value(rng)).collect();
    let tail = tail.unwrap_or_else(|| match rng.gen_range(0..3) {
        0 => Tail::Zero,
        1 => Tail::Const(random_value(rng)),
        _ => Tail::Affine(rat(rng.gen_range(-2..=2), rng.gen_range(1..=4)), random_value(rng)),
    });
    TailSeq::from_prefix(prefix, tail)
}

/// A signed element of the ambient lattice for `kind`; sums use components `0..components`.
pub fn random_element<R: Rng>(rng: &mut R, kind: Kind, components: u32) -> Element {
    match kind {
        Kind::Step => random_signed_step(rng).into(),
        Kind::Pl => random_signed_pl(rng).into(),
        Kind::Seq => random_seq(rng, None).into(),
        Kind::Sum => {
            let n = components.max(1);
            let picks = rng.gen_range(1..=n.min(3));
            DirectSum::new((0..picks).map(|_| (rng.gen_range(0..n), random_signed_step(rng)))).into()
        }
    }
}

/// A signed element of the ambient lattice of `pair` (first carrier of the pair).
pub fn random_ambient<R: Rng>(rng: &mut R, pair: &SpacePair) -> Element {
    let kind = pair.carriers()[0];
    match (&pair.ambient, kind) {
        (Ambient::DirectSumL0(ids), Kind::Sum) => {
            let picks = rng.gen_range(1..=ids.len().clamp(1, 3));
            DirectSum::new((0..picks).map(|_| (ids[rng.gen_range(0..ids.len())], random_signed_step(rng)))).into()
        }
        _ => random_element(rng, kind, 1),
    }
}

/// A nonzero positive element of the ideal `X` of `pair`.
pub fn random_positive_in<R: Rng>(rng: &mut R, pair: &SpacePair) -> Element {
    let x: Element = match (&pair.ideal, &pair.ambient) {
        (Ideal::Lp(_), _) => random_step(rng, &Region::unit()).into(),
        (Ideal::BandOver(a, _), _) => random_step(rng, a).into(),
        (Ideal::EllP(_) | Ideal::C0 | Ideal::C00, _) => random_seq(rng, Some(Tail::Zero)).abs().into(),
        (Ideal::EllInf, _) => {
            let tail = if rng.gen_bool(0.5) { Tail::Zero } else { Tail::Const(random_value(rng)) };
            random_seq(rng, Some(tail)).abs().into()
        }
        (Ideal::VanishAtZero, _) => random_pl(rng, true).into(),
        (Ideal::Continuous, _) => random_pl(rng, false).into(),
        (Ideal::FiniteSumL1, Ambient::DirectSumL0(ids)) => {
            let picks = rng.gen_range(1..=ids.len().clamp(1, 3));
            DirectSum::new((0..picks).map(|_| (ids[rng.gen_range(0..ids.len())], random_step(rng, &Region::unit())))).into()
        }
        (Ideal::FiniteSumL1, _) => unreachable!("finite sums live in a direct-sum ambient"),
    };
    if x.is_zero() {
        return match x {
            Element::Seq(_) => TailSeq::indicator_range(&BigInt::one(), &BigInt::one()).into(),
            other => other,
        };
    }
    x
}

/// A positive rational in `(0, 2]` with a power-of-two denominator up to `2^10`.
pub fn random_epsilon<R: Rng>(rng: &mut R) -> Rational {
    let q = 1i64 << rng.gen_range(0..=10);
    rat(rng.gen_range(1..=2 * q), q)
}

