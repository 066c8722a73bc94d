use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use twc_chanlib::fixture;
use twc_core::Exec;
use twc_region::{compute_region, Mode, RegionOptions};

fn region_sweep(c: &mut Criterion) {
    let ch = fixture("example5").expect("fixture exists");
    let mut g = c.benchmark_group("outer_region_91_directions");
    g.sample_size(10);
    for (name, exec) in [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)] {
        let opts = RegionOptions { exec, ..RegionOptions::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| {
            b.iter(|| compute_region(&ch, Mode::Outer, 91, o).expect("sweep converges"))
        });
    }
    g.finish();
}

criterion_group!(benches, region_sweep);
criterion_main!(benches);
