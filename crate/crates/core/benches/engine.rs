use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nichols_core::arith::Field;
use nichols_core::braided::rack_space;
use nichols_core::nichols::{hilbert_series_with, EngineConfig};
use nichols_core::par::ExecMode;
use nichols_core::racks::{affine_rack, enumerate_quandles, AffineRackSpec};

fn hilbert(c: &mut Criterion) {
    let q = Field::rationals();
    let mut group = c.benchmark_group("hilbert");
    group.sample_size(10);
    for (p, a, cap) in [(3u64, 2u64, 6usize), (5, 2, 5), (7, 3, 4)] {
        let v = rack_space(&affine_rack(AffineRackSpec::new(p, a).unwrap()), &q.from_int(-1), &q).unwrap();
        for mode in [ExecMode::Sequential, ExecMode::Parallel] {
            let cfg = EngineConfig { budget: None, mode };
            group.bench_with_input(BenchmarkId::new(format!("{mode:?}"), format!("Aff({p},{a})")), &v, |b, v| {
                b.iter(|| hilbert_series_with(v, cap, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn quandles(c: &mut Criterion) {
    let mut group = c.benchmark_group("quandles");
    group.sample_size(10);
    for mode in [ExecMode::Sequential, ExecMode::Parallel] {
        group.bench_function(BenchmarkId::new(format!("{mode:?}"), 5), |b| b.iter(|| enumerate_quandles(5, mode)));
    }
    group.finish();
}

criterion_group!(benches, hilbert, quandles);
criterion_main!(benches);
