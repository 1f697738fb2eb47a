//! Sequential vs data-parallel execution of the batch-heavy stages.
//!
//! Without the `parallel` feature both variants run sequentially, which
//! makes the comparison a useful overhead check.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xlstr::augment::{cross_translate, IdentityTranslator};
use xlstr::corpus::synth::generate_dataset;
use xlstr::parallel;
use xlstr::scorer::featurize;
use xlstr::translit::{romanize_dataset, Romanizer};
use xlstr::{spearman, Execution, LanguageCode as L, Split};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_featurize(c: &mut Criterion) {
    let ds = generate_dataset(L::ENG, Split::Train, 5500, 0);
    let mut g = c.benchmark_group("featurize");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| featurize(black_box(ds.instances()), exec).unwrap()));
    }
    g.finish();
}

fn bench_romanize(c: &mut Criterion) {
    let r = Romanizer::bundled();
    let mut g = c.benchmark_group("romanize");
    for lang in [L::AMH, L::HIN, L::ARB] {
        let ds = generate_dataset(lang, Split::Train, 2000, 0);
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, lang), &ds, |b, ds| {
                b.iter(|| romanize_dataset(black_box(ds), &r, exec))
            });
        }
    }
    g.finish();
}

fn bench_spearman(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..256)
        .map(|_| {
            let x = (0..1000).map(|_| rng.gen_range(0..50) as f64).collect();
            let y = (0..1000).map(|_| rng.gen::<f64>()).collect();
            (x, y)
        })
        .collect();
    let mut g = c.benchmark_group("spearman_batch");
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| parallel::map(exec, black_box(&pairs), |(x, y)| spearman(x, y))));
    }
    g.finish();
}

fn bench_cross_translate(c: &mut Criterion) {
    let sets = [
        generate_dataset(L::ENG, Split::Train, 1500, 0),
        generate_dataset(L::HAU, Split::Train, 1500, 0),
        generate_dataset(L::KIN, Split::Train, 700, 0),
    ];
    let refs: Vec<_> = sets.iter().collect();
    let mut g = c.benchmark_group("cross_translate");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| cross_translate(black_box(&refs), &IdentityTranslator, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, bench_featurize, bench_romanize, bench_spearman, bench_cross_translate);
criterion_main!(benches);
