use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use gcsb_core::bounds::enumerate_bounds;
use gcsb_core::campaign::FunctionKind;
use gcsb_core::network::symmetric_combination_network;
use gcsb_core::polytope::vertices_2d;
use gcsb_core::rational::int;
use gcsb_core::region::{at_capacities, common_vs_sum_private, symmetric_bound_system, symmetric_generalized_bounds};
use gcsb_core::{run_campaign, Campaign, CampaignConfig, RuleSet};

fn bounds(c: &mut Criterion) {
    c.bench_function("enumerate K=3 all rules", |b| b.iter(|| enumerate_bounds(black_box(3), RuleSet::all())));
}

fn projection(c: &mut Criterion) {
    let sys = symmetric_bound_system(5, &symmetric_generalized_bounds(5).unwrap()).unwrap();
    c.bench_function("project symmetric K=5", |b| b.iter(|| common_vs_sum_private(black_box(&sys), 5).unwrap()));
    let region = at_capacities(&common_vs_sum_private(&sys, 5).unwrap(), &[int(1), int(2), int(1), int(3), int(1)]).unwrap();
    c.bench_function("vertices symmetric K=5", |b| b.iter(|| vertices_2d(black_box(&region)).unwrap()));
}

fn flow(c: &mut Criterion) {
    let caps: Vec<_> = (1..=5).map(int).collect();
    let net = symmetric_combination_network(5, &caps).unwrap();
    c.bench_function("min cut combination K=5", |b| b.iter(|| (1..=5).map(|k| net.min_cut(k).unwrap()).count()));
}

fn campaigns(c: &mut Criterion) {
    let cfg = CampaignConfig { trials: 100, functions: FunctionKind::Entropy, ..CampaignConfig::new(Campaign::Lemma2) };
    let mut g = c.benchmark_group("campaign");
    g.sample_size(10);
    g.bench_function("lemma 2, 100 entropy trials", |b| b.iter(|| run_campaign(black_box(&cfg)).unwrap()));
    g.finish();
}

criterion_group!(benches, bounds, projection, flow, campaigns);
criterion_main!(benches);
