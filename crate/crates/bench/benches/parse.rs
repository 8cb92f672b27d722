use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use distqa_core::engine::available_workers;
use distqa_core::rdf::{parse_bytes, parse_dataset, LineParser};
use distqa_core::ErrorPolicy;

fn lines(c: &mut Criterion) {
    let text = distqa_bench::ntriples(20_000);
    let mut group = c.benchmark_group("line_parser");
    group.throughput(Throughput::Bytes(text.len() as u64));
    group.bench_function("20k", |b| {
        b.iter(|| {
            let mut p = LineParser::default();
            let mut n = 0usize;
            for (i, line) in text.lines().enumerate() {
                n += usize::from(p.parse_line(line, i as u64 + 1).unwrap().is_some());
            }
            n
        })
    });
    group.finish();
}

fn datasets(c: &mut Criterion) {
    let mut group = c.benchmark_group("dataset");
    group.sample_size(10);
    for n in [10_000, 200_000] {
        let text = distqa_bench::ntriples(n);
        group.throughput(Throughput::Bytes(text.len() as u64));
        group.bench_with_input(BenchmarkId::new("sequential", n), &text, |b, t| {
            b.iter(|| parse_dataset(t.as_bytes(), "bench", ErrorPolicy::Strict).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("chunked", n), &text, |b, t| {
            b.iter(|| parse_bytes(t.as_bytes(), "bench", ErrorPolicy::Strict, available_workers()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, lines, datasets);
criterion_main!(benches);
