use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use unlattice::convergence::{check_in_measure, check_un, CheckConfig};
use unlattice::exec::Exec;
use unlattice::gallery;
use unlattice::spaces::SpacePair;

fn modes() -> Vec<(&'static str, Exec)> {
    vec![("sequential", Exec::Sequential), ("parallel", Exec::available_parallel())]
}

fn un_sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_un");
    group.sample_size(10);
    for (fam, pid) in [("typewriter", "L1@L0"), ("moving_bump", "L2@L0"), ("unit_vectors", "l2@RN")] {
        let family = gallery::family(fam).unwrap();
        let pair = SpacePair::build(pid).unwrap();
        for (label, exec) in modes() {
            let cfg = CheckConfig::default().with_horizon(1024).with_exec(exec);
            group.bench_with_input(BenchmarkId::new(format!("{fam}@{pid}"), label), &cfg, |b, cfg| {
                b.iter(|| check_un(&family, &pair, cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn measure_sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_in_measure");
    group.sample_size(10);
    let family = gallery::typewriter();
    for (label, exec) in modes() {
        let cfg = CheckConfig::default().with_horizon(1024).with_exec(exec);
        group.bench_with_input(BenchmarkId::new("typewriter", label), &cfg, |b, cfg| {
            b.iter(|| check_in_measure(&family, cfg, None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, un_sweeps, measure_sweeps);
criterion_main!(benches);
