use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use unlattice::convergence::{check, gauge, CheckConfig, Mode, VerdictClass};
use unlattice::gallery;
use unlattice::lattice::{PlFn, StepFn, TailSeq};
use unlattice::laws::Counterexample;
use unlattice::spaces::SpacePair;
use unlattice::{Element, ExtScalar, NormValue, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn pair(id: &str) -> SpacePair {
    SpacePair::build(id).unwrap()
}

#[test]
fn moving_bump_integrals() {
    // a unit-height tent over an interval of width w has ∫f = w/2 and ∫f² = w/3
    let fam = gallery::moving_bump();
    let one: Element = PlFn::one().into();
    for n in [1i64, 2, 5, 40, 999] {
        let y = fam.eval(n as u64);
        let w = q(1, n) - q(1, n + 1);
        assert_eq!(gauge(&y, &one, &pair("L1@L0")).unwrap(), NormValue::exact(&w / q(2, 1)), "n = {n}");
        let l2 = gauge(&y, &one, &pair("L2@L0")).unwrap();
        let want = NormValue::Power { p: 2, power: ExtScalar::Finite(&w / q(3, 1)) };
        assert_eq!(l2.cmp_value(&want), Ordering::Equal, "n = {n}: {l2}");
    }
}

#[test]
fn unit_vectors_meet_prefix_indicators() {
    let fam = gallery::unit_vectors();
    let l2 = pair("l2@RN");
    for len in [1u64, 3, 10] {
        let x: Element = TailSeq::indicator_range(&BigInt::one(), &BigInt::from(len)).into();
        for n in 1..=20u64 {
            let want = if n <= len { Rational::one() } else { Rational::zero() };
            let g = gauge(&fam.eval(n), &x, &l2).unwrap();
            assert_eq!(g.cmp_value(&NormValue::exact(want)), Ordering::Equal, "len {len}, n {n}: {g}");
        }
    }
}

#[test]
fn typewriter_gauge_is_block_length() {
    let fam = gallery::typewriter();
    let one: Element = StepFn::one().into();
    let l1 = pair("L1@L0");
    for n in 1..=300u64 {
        let block = 1u64 << (63 - n.leading_zeros());
        assert_eq!(gauge(&fam.eval(n), &one, &l1).unwrap(), NormValue::exact(q(1, block as i64)), "n = {n}");
    }
}

#[test]
fn unit_vectors_are_not_un_null_in_linf() {
    let cfg = CheckConfig::default().with_horizon(256);
    let v = check(&gallery::unit_vectors(), Some(&pair("linf@RN")), Mode::Un, &cfg).unwrap();
    assert_eq!(v.class, VerdictClass::Refuted);
    let v = check(&gallery::unit_vectors(), Some(&pair("c0@RN")), Mode::Un, &cfg).unwrap();
    assert_eq!(v.class.coarse(), VerdictClass::CertifiedNull.coarse());
}

#[test]
fn counterexamples_reproduce_and_detect_tampering() {
    let linf = pair("linf@RN");
    let ones: Element = TailSeq::ones().into();
    let y = gallery::unit_vectors().eval(37);
    let cex = Counterexample::new("unit_vectors", &linf, 37, &y, &ones).unwrap();
    assert_eq!(cex.gauge, NormValue::exact(Rational::one()));
    assert!(cex.reproduce().unwrap());
    let mut forged = cex.clone();
    forged.gauge = NormValue::exact(q(1, 2));
    assert!(!forged.reproduce().unwrap());
}
