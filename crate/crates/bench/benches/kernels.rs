use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use dsc_core::curvature::{solve_right_triangle, HopWindow, TriangleSampler};
use dsc_core::graph::Bfs;
use dsc_core::{sprinkle, Manifold, Seed};

fn solver(c: &mut Criterion) {
    c.bench_function("solve positive", |b| {
        b.iter(|| solve_right_triangle(black_box(1.0), black_box(1.2), black_box(1.45)))
    });
    c.bench_function("solve negative", |b| {
        b.iter(|| solve_right_triangle(black_box(1.0), black_box(1.2), black_box(1.8)))
    });
}

fn sprinkling(c: &mut Criterion) {
    let m = Manifold::sphere2(1.0).unwrap();
    let mut group = c.benchmark_group("sprinkle");
    group.sample_size(10);
    for n in [500, 2000] {
        group.bench_function(format!("sphere V={n}"), |b| {
            b.iter(|| sprinkle(&m, n, 0.25, &mut Seed(1).stream(0), None).unwrap())
        });
    }
    group.finish();
}

fn graph_kernels(c: &mut Criterion) {
    let m = Manifold::sphere2(1.0).unwrap();
    let gg = sprinkle(&m, 2000, 0.25, &mut Seed(1).stream(0), None).unwrap();
    let n = gg.vertex_count();

    c.bench_function("bfs V=2000", |b| {
        let mut bfs = Bfs::new(n);
        let mut u = 0u32;
        b.iter(|| {
            u = (u + 97) % n as u32;
            bfs.run(&gg.graph, u)
        })
    });

    let d = gg.graph.diameter_estimate(&mut Seed(2).stream(0)).unwrap();
    let window = HopWindow::from_diameter(d);
    c.bench_function("sample triangle V=2000", |b| {
        let mut sampler = TriangleSampler::new(&gg.graph, 0.1, window);
        let mut i = 0u64;
        b.iter_batched(
            || {
                i += 1;
                Seed(3).stream(i)
            },
            |mut rng| sampler.sample(&mut rng),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, solver, sprinkling, graph_kernels);
criterion_main!(benches);
