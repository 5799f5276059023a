use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unlattice::extraction::{extract_ae_subsequence, ExtractConfig};
use unlattice::gallery;
use unlattice::lattice::norm::meet_norm_nonneg;
use unlattice::lattice::rational::cmp_q;
use unlattice::lattice::{Point, Region};
use unlattice::sample::{random_element, random_pl, random_seq, random_step};
use unlattice::{Element, Kind, NormSpec, Rational};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Step), Just(Kind::Pl), Just(Kind::Seq), Just(Kind::Sum)]
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Points at which an element of `kind` is read.
fn probes(kind: Kind) -> Vec<Point> {
    match kind {
        Kind::Step | Kind::Pl => (0..=32).map(|i| Point::T(q(i, 32))).chain([Point::T(q(1, 3)), Point::T(q(5, 7))]).collect(),
        Kind::Seq => (1..=40).map(|n| Point::N(BigInt::from(n))).chain([Point::N(BigInt::from(1_000_000))]).collect(),
        Kind::Sum => (0..3).flat_map(|c| (0..=16).map(move |i| Point::Comp(c, q(i, 16)))).collect(),
    }
}

fn at(e: &Element, p: &Point) -> Rational {
    e.eval(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lattice_operations_act_pointwise(k in kind(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_element(&mut r, k, 3);
        let b = random_element(&mut r, k, 3);
        let (meet, join, sum, abs) = (a.meet(&b).unwrap(), a.join(&b).unwrap(), a.add(&b).unwrap(), a.abs_val());
        for p in probes(k) {
            let (x, y) = (at(&a, &p), at(&b, &p));
            prop_assert_eq!(at(&meet, &p), x.clone().min(y.clone()));
            prop_assert_eq!(at(&join, &p), x.clone().max(y.clone()));
            prop_assert_eq!(at(&sum, &p), &x + &y);
            prop_assert_eq!(at(&abs, &p), x.abs());
        }
    }

    #[test]
    fn riesz_identities(k in kind(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_element(&mut r, k, 3);
        let b = random_element(&mut r, k, 3);
        let c = random_element(&mut r, k, 3);
        prop_assert_eq!(a.meet(&b).unwrap().add(&a.join(&b).unwrap()).unwrap(), a.add(&b).unwrap());
        let neg = a.scale(&-Rational::one()).pos();
        prop_assert_eq!(a.pos().add(&neg).unwrap(), a.abs_val());
        prop_assert_eq!(a.pos().sub(&neg).unwrap(), a.clone());
        prop_assert!(a.abs_val().is_positive());
        let lhs = a.meet(&b.join(&c).unwrap()).unwrap();
        let rhs = a.meet(&b).unwrap().join(&a.meet(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.meet(&b).unwrap().le(&a).unwrap());
        prop_assert_eq!(a.abs_val().abs_val(), a.abs_val());
    }

    #[test]
    fn text_round_trip(k in kind(), seed in any::<u64>()) {
        let e = random_element(&mut rng(seed), k, 3);
        prop_assert_eq!(Element::parse(&e.to_text()).unwrap(), e);
    }

    #[test]
    fn level_measure_matches_superlevel_region(pl in any::<bool>(), seed in any::<u64>(), num in 1i64..64, den_pow in 0u32..8) {
        let mut r = rng(seed);
        let e = random_element(&mut r, if pl { Kind::Pl } else { Kind::Step }, 1);
        let eps = q(num, 1 << den_pow);
        prop_assert_eq!(e.level_measure(&eps).unwrap(), e.superlevel_set(&eps).unwrap().measure());
    }

    #[test]
    fn fused_meet_norm_matches_meet_then_norm(pl in any::<bool>(), seed in any::<u64>(), which in 0usize..4) {
        let mut r = rng(seed);
        let (a, b): (Element, Element) = if pl {
            (random_pl(&mut r, false).into(), random_pl(&mut r, false).into())
        } else {
            (random_step(&mut r, &Region::unit()).into(), random_step(&mut r, &Region::unit()).into())
        };
        let spec = [NormSpec::L1, NormSpec::Lp(q(2, 1)), NormSpec::Lp(q(3, 1)), NormSpec::Sup][which].clone();
        let fused = meet_norm_nonneg(&a, &b, &spec).expect("nonnegative operands");
        let direct = a.meet(&b).unwrap().norm(&spec).unwrap();
        prop_assert_eq!(fused.cmp_value(&direct), Ordering::Equal, "{} vs {}", fused, direct);
    }

    #[test]
    fn cmp_q_agrees_with_ord(a in any::<i64>(), b in 1i64..i64::MAX, c in any::<i64>(), d in 1i64..i64::MAX, big in any::<bool>()) {
        let scale = if big { BigInt::one() << 200 } else { BigInt::one() };
        let x = Rational::new(BigInt::from(a) * &scale, BigInt::from(b));
        let y = Rational::new(BigInt::from(c), BigInt::from(d) * &scale);
        prop_assert_eq!(cmp_q(&x, &y), x.cmp(&y));
        prop_assert_eq!(cmp_q(&x, &x), Ordering::Equal);
    }

    #[test]
    fn sequence_abs_is_pointwise(seed in any::<u64>()) {
        let s: Element = random_seq(&mut rng(seed), None).into();
        let abs = s.abs_val();
        for p in probes(Kind::Seq) {
            prop_assert_eq!(at(&abs, &p), at(&s, &p).abs());
        }
    }
}

#[test]
fn typewriter_extraction_invariants() {
    let fam = gallery::typewriter();
    for k in 1..=10 {
        let cfg = ExtractConfig { samples: 400, ..ExtractConfig::default() };
        let res = extract_ae_subsequence(&fam, None, k, &cfg).unwrap();
        assert!(res.bounds_hold(), "k = {k}");
        assert_eq!(res.indices.len(), k as usize);
        assert!(res.indices.windows(2).all(|w| w[0] < w[1]));
        for (j, mu) in res.level_measures.iter().enumerate() {
            assert!(*mu <= Rational::new(BigInt::one(), BigInt::one() << (j + 1)), "μ_{} = {mu}", j + 1);
        }
        for (u, t) in res.exceptional_measures.iter().zip(&res.tail_bounds) {
            assert!(u <= t);
        }
        assert!(res.total < Rational::one());
        assert_eq!(res.samples.violations, 0);
    }
}

#[test]
fn extraction_is_seed_deterministic() {
    let fam = gallery::typewriter();
    let cfg = ExtractConfig { samples: 300, seed: 99, ..ExtractConfig::default() };
    let a = extract_ae_subsequence(&fam, None, 6, &cfg).unwrap();
    let b = extract_ae_subsequence(&fam, None, 6, &cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn every_gallery_family_evaluates() {
    for name in gallery::names() {
        let fam = gallery::family(name).unwrap();
        for n in [1u64, 2, 3, 17, 1024] {
            let y = fam.eval(n);
            assert_eq!(y.kind(), fam.kind, "{name} at {n}");
            assert_eq!(Element::parse(&y.to_text()).unwrap(), y, "{name} at {n}");
        }
    }
}

#[test]
fn typewriter_blocks_cover_the_interval() {
    // each dyadic generation of blocks tiles [0, 1] exactly once
    let fam = gallery::typewriter();
    for g in 0..6u32 {
        let first = 1u64 << g;
        let mut total = Rational::zero();
        for n in first..2 * first {
            let y = fam.eval(n);
            assert!(y.is_positive());
            total += y.level_measure(&q(1, 2)).unwrap();
        }
        assert_eq!(total, Rational::one(), "generation {g}");
    }
}
