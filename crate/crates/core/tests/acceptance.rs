//! Acceptance criteria 1–9, one PASS/FAIL line each. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unlattice::convergence::{
    check, check_in_measure, check_un, check_un_with, gauge, limit_uniqueness_probe, CheckConfig, VerdictClass,
};
use unlattice::extraction::{extract_ae_subsequence, uo_subsequence_probe, ExtractConfig};
use unlattice::gallery;
use unlattice::lattice::rational::dyadic;
use unlattice::lattice::{Point, StepFn, TailSeq};
use unlattice::laws::{run_all, run_law, LawConfig};
use unlattice::sample::{random_seq, random_signed_pl, random_signed_step, DEFAULT_SEED};
use unlattice::spaces::SpacePair;
use unlattice::{Element, Kind, NormValue, Rational};

type Outcome = unlattice::Result<(bool, String)>;

fn pair(id: &str) -> SpacePair {
    SpacePair::build(id).expect("known pair")
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// Gallery matrix plus the exact claims attached to four of its rows.
fn ac1() -> Outcome {
    let cfg = CheckConfig::default();
    let mut bad = Vec::new();
    let table = gallery::expected_table();
    for ((name, pid, mode), want) in &table {
        let fam = gallery::family(name)?;
        let p = (pid != "-").then(|| pair(pid));
        let got = check(&fam, p.as_ref(), *mode, &cfg)?.class;
        if got != *want {
            bad.push(format!("{name} {pid} {mode}: {got:?} != {want:?}"));
        }
    }

    let linf = check_un(&gallery::unit_vectors(), &pair("linf@RN"), &cfg)?;
    let ones = TailSeq::ones().to_text();
    if linf.class != VerdictClass::Refuted || linf.witness.as_deref() != Some(ones.as_str()) || linf.epsilon_rat() != Some(Rational::one()) {
        bad.push(format!("unit_vectors under linf@RN: {:?} witness {:?} eps {:?}", linf.class, linf.witness, linf.epsilon));
    }
    let c01 = check_un(&gallery::moving_bump(), &pair("C@C01"), &cfg)?;
    if c01.class != VerdictClass::Refuted || c01.epsilon_rat() != Some(Rational::one()) {
        bad.push(format!("moving_bump under C@C01: {:?} eps {:?}", c01.class, c01.epsilon));
    }

    // c·z/n ≥ 1 far out for every c > 0, so the sup of its meet with 𝟙 is exactly 1.
    let lp = pair("linf@RN");
    let one_seq: Element = TailSeq::ones().into();
    let ramp = gallery::scaled_ramp();
    for n in [1u64, 2, 3, 7, 64, 1000, 4096] {
        for c in [r(1, 1024), r(1, 3), r(1, 1), r(5, 2), r(1000, 1)] {
            let g = gauge(&ramp.eval(n).scale(&c), &one_seq, &lp)?;
            if g != NormValue::exact(Rational::one()) {
                bad.push(format!("scaled_ramp n={n} c={c}: gauge {g}"));
            }
        }
    }

    let l1 = pair("L1@L0");
    let one_step: Element = StepFn::one().into();
    let tw = gallery::typewriter();
    for n in 1..=cfg.horizon {
        let want = Rational::new(BigInt::one(), BigInt::one() << (63 - n.leading_zeros()));
        let g = gauge(&tw.eval(n), &one_step, &l1)?;
        if g != NormValue::exact(want.clone()) {
            bad.push(format!("typewriter gauge at n={n}: {g} != {want}"));
            break;
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("{} matrix rows, exact claims hold", table.len()) } else { bad.join("; ") }))
}

fn ac2() -> Outcome {
    let reports = run_all(&LawConfig::default())?;
    let mut failed = Vec::new();
    let mut unreproduced = 0;
    for rep in &reports {
        for c in rep.failures() {
            failed.push(format!("{}: {}", rep.law, c.case));
            if let Some(cex) = &c.counterexample {
                if !cex.reproduce()? {
                    unreproduced += 1;
                }
            }
        }
    }
    let laws = reports.iter().filter(|r| r.law.starts_with('L')).count();
    let ok = failed.is_empty() && unreproduced == 0;
    let detail = if ok { format!("{laws} laws passed") } else { format!("failures {failed:?}; unreproduced counterexamples {unreproduced}") };
    Ok((ok, detail))
}

fn ac3() -> Outcome {
    let cfg = LawConfig::default();
    let rep = run_law("NB", &cfg)?;
    let detail = format!("{} pairs × {} triples; failures {:?}", rep.cases.len(), cfg.nb_samples, rep.failures().map(|c| &c.case).collect::<Vec<_>>());
    Ok((rep.passed && cfg.nb_samples >= 1000, detail))
}

fn ac4() -> Outcome {
    let cfg = CheckConfig::default();
    let mut bad = Vec::new();
    let mut cases = 0;
    for pid in ["L1@L0", "L2@L0", "linf@RN"] {
        let p = pair(pid);
        for kind in [Kind::Step, Kind::Pl, Kind::Seq] {
            if !p.accepts(kind) {
                continue;
            }
            let u = p.unit_in(kind).expect("quasi-interior point");
            let basis = p.dense_basis(16, kind)?.vectors;
            for fam in gallery::families_of(kind) {
                let vu = check_un_with(&fam, &p, std::slice::from_ref(&u), &cfg)?;
                let vb = check_un_with(&fam, &p, &basis, &cfg)?;
                cases += 1;
                if vu.class != vb.class {
                    bad.push(format!("{} under {pid}: {:?} vs {:?}", fam.name, vu.class, vb.class));
                }
            }
        }
    }
    Ok((bad.is_empty() && cases > 0, if bad.is_empty() { format!("{cases} family/pair cases agree") } else { bad.join("; ") }))
}

fn ac5() -> Outcome {
    let cfg = CheckConfig::default();
    let (l1, l2) = (pair("L1@L0"), pair("L2@L0"));
    let mut bad = Vec::new();
    let mut cases = 0;
    for fam in gallery::families_of(Kind::Step).into_iter().chain(gallery::families_of(Kind::Pl)) {
        let u1 = check_un(&fam, &l1, &cfg)?.class;
        let u2 = check_un(&fam, &l2, &cfg)?.class;
        let m = check_in_measure(&fam, &cfg, None)?.class;
        cases += 1;
        if u1.coarse() != m.coarse() || u2.coarse() != m.coarse() {
            bad.push(format!("{}: L1 {u1:?}, L2 {u2:?}, measure {m:?}", fam.name));
        }
    }
    Ok((bad.is_empty() && cases > 0, if bad.is_empty() { format!("{cases} families agree") } else { bad.join("; ") }))
}

fn ac6() -> Outcome {
    let fam = gallery::typewriter();
    let cfg = ExtractConfig { samples: 10_000, ..ExtractConfig::default() };
    let res = extract_ae_subsequence(&fam, None, 16, &cfg)?;
    let mut ok = res.bounds_hold() && res.samples.points == 10_000 && res.samples.violations == 0;
    for (i, (&n, mu)) in res.indices.iter().zip(&res.level_measures).enumerate() {
        // T_n is an indicator of a block of length 2^-⌊log₂ n⌋.
        let len = Rational::new(BigInt::one(), BigInt::one() << (63 - n.leading_zeros()));
        ok &= *mu == len && *mu < dyadic(i as u64 + 1);
    }
    let total: Rational = res.level_measures.iter().sum();
    ok &= total < Rational::one() && total == res.total;
    Ok((ok, format!("indices {:?}, Σμ = {}", res.indices, total)))
}

fn ac7() -> Outcome {
    let gamma = gallery::default_gamma(gallery::DEFAULT_GAMMA_K);
    let cfg = CheckConfig::default();
    let a = uo_subsequence_probe(&gamma, gallery::DEFAULT_GAMMA_K, &cfg)?;
    let b = uo_subsequence_probe(&gamma, gallery::DEFAULT_GAMMA_K, &cfg)?;
    let identical = a.to_json() == b.to_json();
    let full: Vec<_> = a.tuples.iter().filter(|t| t.equals_typewriter_prefix).collect();
    let part_b = !full.is_empty() && full.iter().all(|t| t.witnesses_failure);
    let ok = gamma.len() == 8 && a.un_verdict.class.is_null() && part_b && identical && a.passed;
    Ok((ok, format!("{} tuples, part (a) {:?}, part (b) on {} full-typewriter tuples, identical {identical}", gamma.len(), a.un_verdict.class, full.len())))
}

fn ac8() -> Outcome {
    let cfg = CheckConfig::default();
    let fam = gallery::off_band();
    let y = fam.constant.clone().expect("constant family");
    let candidates = vec![Element::zero(Kind::Step), y];
    let dense = limit_uniqueness_probe(&pair("L1@L0"), &fam, &candidates, &cfg)?;
    let band = limit_uniqueness_probe(&pair("bandA(1)@L0"), &fam, &candidates, &cfg)?;
    Ok((dense.len() == 1 && band.len() >= 2, format!("L1@L0: {} limit(s); bandA(1)@L0: {} limit(s)", dense.len(), band.len())))
}

const GRID: i64 = 2048;

/// Values at `j/2048`, read off breakpoints and piece values directly.
fn step_grid(f: &StepFn) -> Vec<Rational> {
    let (b, v) = (f.breaks(), f.values());
    let mut out = Vec::with_capacity(GRID as usize + 1);
    let mut i = 0;
    for j in 0..=GRID {
        let t = r(j, GRID);
        while i + 1 < v.len() && b[i + 1] <= t {
            i += 1;
        }
        out.push(v[i].clone());
    }
    out
}

/// Values at `j/2048` by linear interpolation between consecutive nodes.
fn pl_grid(f: &unlattice::lattice::PlFn) -> Vec<Rational> {
    let (xs, ys) = (f.xs(), f.ys());
    let mut out = Vec::with_capacity(GRID as usize + 1);
    let mut i = 0;
    for j in 0..=GRID {
        let t = r(j, GRID);
        while i + 2 < xs.len() && xs[i + 1] <= t {
            i += 1;
        }
        out.push(&ys[i] + (&ys[i + 1] - &ys[i]) * (&t - &xs[i]) / (&xs[i + 1] - &xs[i]));
    }
    out
}

/// `μ{|g| > ε}` for a step function constant on every grid cell.
fn step_level_oracle(vals: &[Rational], eps: &Rational) -> Rational {
    let cells = vals[..GRID as usize].iter().filter(|v| v.abs() > *eps).count();
    r(cells as i64, GRID)
}

/// `μ{|g| > ε}` for a function affine on every grid cell: per cell, the parts of
/// `{g > ε}` and `{−g > ε}`.
fn pl_level_oracle(vals: &[Rational], eps: &Rational) -> Rational {
    let h = r(1, GRID);
    let above = |u: &Rational, v: &Rational| -> Rational {
        match (u > eps, v > eps) {
            (true, true) => h.clone(),
            (false, false) => Rational::zero(),
            _ => &h * (u.clone().max(v.clone()) - eps) / (u - v).abs(),
        }
    };
    vals.windows(2).map(|w| above(&w[0], &w[1]) + above(&-w[0].clone(), &-w[1].clone())).sum()
}

fn ac9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 0xac9);
    let points: Vec<Point> = (0..=GRID).map(|j| Point::T(r(j, GRID))).collect();
    let levels = [r(1, 64), r(1, 8), r(1, 2), r(1, 1), r(3, 2)];
    let mut bad = Vec::new();
    for case in 0..500 {
        let (a, b, va, vb): (Element, Element, Vec<Rational>, Vec<Rational>) = match case % 5 {
            0 | 1 => {
                let (f, g) = (random_signed_step(&mut rng), random_signed_step(&mut rng));
                let (vf, vg) = (step_grid(&f), step_grid(&g));
                (f.into(), g.into(), vf, vg)
            }
            2 | 3 => {
                let (f, g) = (random_signed_pl(&mut rng), random_signed_pl(&mut rng));
                let (vf, vg) = (pl_grid(&f), pl_grid(&g));
                (f.into(), g.into(), vf, vg)
            }
            _ => {
                let (f, g) = (random_seq(&mut rng, None), random_seq(&mut rng, None));
                let at = |s: &TailSeq| (1..=GRID as u64 + 1).map(|i| s.eval_u64(i)).collect::<Vec<_>>();
                let (vf, vg) = (at(&f), at(&g));
                (f.into(), g.into(), vf, vg)
            }
        };
        let pts: Vec<Point> = match a.kind() {
            Kind::Seq => (1..=GRID + 1).map(|i| Point::N(i.into())).collect(),
            _ => points.clone(),
        };
        type Pointwise = fn(&Rational, &Rational) -> Rational;
        let ops: [(&str, Element, Pointwise); 5] = [
            ("meet", a.meet(&b)?, |x, y| x.clone().min(y.clone())),
            ("join", a.join(&b)?, |x, y| x.clone().max(y.clone())),
            ("sum", a.add(&b)?, |x, y| x + y),
            ("diff", a.sub(&b)?, |x, y| x - y),
            ("abs", a.abs_val(), |x, _| x.abs()),
        ];
        for (name, res, f) in &ops {
            for (k, p) in pts.iter().enumerate() {
                if res.eval(p)? != f(&va[k], &vb[k]) {
                    bad.push(format!("case {case} {name} at {p:?}"));
                    break;
                }
            }
        }
        if a.kind() != Kind::Seq {
            for eps in &levels {
                let want = if a.kind() == Kind::Step { step_level_oracle(&va, eps) } else { pl_level_oracle(&va, eps) };
                if a.level_measure(eps)? != want {
                    bad.push(format!("case {case} level_measure at {eps}"));
                }
            }
        }
        if bad.len() > 5 {
            break;
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "500 pairs agree at every grid point".into() } else { bad.join("; ") }))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 9] = [
        (1, "gallery verdict matrix", 5, ac1),
        (2, "law suite L1-L14", 60, ac2),
        (3, "neighbourhood-base axioms", 10, ac3),
        (4, "quasi-interior reduction", 10, ac4),
        (5, "un vs in-measure on L1@L0 and L2@L0", 10, ac5),
        (6, "typewriter extraction K=16", 5, ac6),
        (7, "Gamma probe", 10, ac7),
        (8, "limit uniqueness dichotomy", 2, ac8),
        (9, "grid oracle at step 1/2048", 30, ac9),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut all = true;
    for (id, name, limit, f) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let (ok, detail) = match f() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let took = t.elapsed();
        let in_time = took < Duration::from_secs(limit);
        let pass = ok && in_time;
        all &= pass;
        let timing = if in_time { format!("{:.2}s", took.as_secs_f64()) } else { format!("{:.2}s, over the {limit}s limit", took.as_secs_f64()) };
        println!("{} AC{id} {name} ({timing}): {detail}", if pass { "PASS" } else { "FAIL" });
    }
    if all { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
