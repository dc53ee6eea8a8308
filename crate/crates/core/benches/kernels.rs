use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use twistlab::field::{make_grid, AnalyticDistribution, AntisymmetricMatrix};
use twistlab::par;
use twistlab::spectral::{gaussian_window, stft};
use twistlab::twisted::twisted_convolution;
use twistlab::wavefront::{estimate_from_stft, EstimatorParams};

/// `("parallel", all workers)` and `("sequential", one worker)`; without the
/// `parallel` feature both run the sequential fallback.
fn modes() -> [(&'static str, usize); 2] {
    let all = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let tag = if cfg!(feature = "parallel") { "parallel" } else { "fallback" };
    [(tag, all), ("sequential", 1)]
}

fn kernels(c: &mut Criterion) {
    let g2 = make_grid(2, 24, 5.0).unwrap();
    let f = AnalyticDistribution::standard_gaussian(2).sample(&g2).unwrap();
    let h = AnalyticDistribution::gaussian(&[0.5, 0.0], 0.8, &[0.0, 1.0]).sample(&g2).unwrap();
    let theta = AntisymmetricMatrix::symplectic(1);

    let g1 = make_grid(1, 128, 12.0).unwrap();
    let u = AnalyticDistribution::chirp(vec![vec![1.0]]).sample(&g1).unwrap();
    let w = gaussian_window(&g1);
    let v = stft(&u, &w).unwrap();
    let params = EstimatorParams { directions: Some(360), ..Default::default() };

    let mut group = c.benchmark_group("kernels");
    group.sample_size(10);
    for (mode, threads) in modes() {
        group.bench_with_input(BenchmarkId::new("twisted_sum_24x24", mode), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || twisted_convolution(&f, &h, &theta).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("stft_128", mode), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || stft(&u, &w).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("estimator_360", mode), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || estimate_from_stft(&v, &params).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
