use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ekr_core::analysis::Enumerated;
use ekr_core::classes::ConjugacyClassTable;
use ekr_core::data::data_path;
use ekr_core::exec::Exec;
use ekr_core::families::psl::totient_range;
use ekr_core::spectra::WeightVector;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn classes(c: &mut Criterion) {
    let sz8 = Enumerated::from_file(data_path("groups/sz8.gens"), Exec::Parallel).unwrap();
    let mut g = c.benchmark_group("conjugacy_classes_sz8");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| ConjugacyClassTable::compute_with(&sz8.table, exec))
        });
    }
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let sz8 = Enumerated::from_file(data_path("groups/sz8.gens"), Exec::Parallel).unwrap();
    let w = WeightVector::unit(sz8.stats.derangement_classes.len());
    let mut g = c.benchmark_group("spectrum_sz8");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sz8.spectrum(&w, exec).unwrap())
        });
    }
    g.finish();
}

fn totients(c: &mut Criterion) {
    let mut g = c.benchmark_group("totient_range_7_to_100000");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| totient_range(7, 100_000, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, classes, spectrum, totients);
criterion_main!(benches);
