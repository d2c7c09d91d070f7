use std::f64::consts::FRAC_PI_4;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use singlet_core::adversary::{intercept_resend_state, lhv_rm_draw};
use singlet_core::correlations::{rm_draw, rm_expectation_numeric, BcSampler, Resolution};
use singlet_core::hypotest::binom_upper_quantile;
use singlet_core::BellHemisphereModel;

fn draws(c: &mut Criterion) {
    let rho = intercept_resend_state(0.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sampler = BcSampler::new(&rho, 2).unwrap();
    c.bench_function("bc_draw", |b| b.iter(|| sampler.draw(&mut rng)));
    c.bench_function("rm_draw", |b| {
        b.iter(|| rm_draw(&mut rng, &rho, FRAC_PI_4).unwrap())
    });
    c.bench_function("lhv_rm_draw", |b| {
        b.iter(|| lhv_rm_draw(&mut rng, &BellHemisphereModel, FRAC_PI_4))
    });
}

fn statistics(c: &mut Criterion) {
    c.bench_function("quantile_n5000", |b| {
        b.iter(|| binom_upper_quantile(0.01, 5000, 0.146447).unwrap())
    });
    let rho = intercept_resend_state(0.3, 0.7);
    c.bench_function("rm_numeric_cube48", |b| {
        b.iter(|| rm_expectation_numeric(&rho, FRAC_PI_4, Resolution::cube(48)).unwrap())
    });
}

criterion_group!(benches, draws, statistics);
criterion_main!(benches);
