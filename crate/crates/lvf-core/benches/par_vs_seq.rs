//! Compares the rayon-backed batch helpers with their always-sequential
//! twins on the workloads the suites actually run: the first-order
//! commutation battery, large normal-ordered operator products, and
//! isometry-word products. `cargo bench` measures the default `parallel`
//! build; rebuilding with `--no-default-features` measures the fallback
//! dispatch itself.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use lvf_core::cuntz::{CuntzElement, CuntzWord};
use lvf_core::index::IndexWindow;
use lvf_core::jsmap::{required_margin, verify_comm_relations, JSContext};
use lvf_core::par;
use lvf_core::pairings::{PairingMatrix, VectorCoeffs};
use lvf_core::sample::Sampler;
use lvf_core::weyl::WeylElement;

type CommInstance = (PairingMatrix, PairingMatrix, VectorCoeffs, VectorCoeffs, JSContext);

fn comm_instances(count: usize) -> Vec<CommInstance> {
    let mut sampler = Sampler::new(404);
    let window = IndexWindow::integers(-8, 8);
    (0..count)
        .map(|i| {
            let a = sampler.banded_matrix(&window, (i % 3) as u64, 50);
            let b = sampler.banded_matrix(&window, ((i + 1) % 3) as u64, 50);
            let h = sampler.vector(&window, 60);
            let r = sampler.vector(&window, 60);
            let margin = required_margin(&[&a, &b]).expect("finite bands");
            let ctx = JSContext::exact(window.clone(), margin);
            (a, b, h, r, ctx)
        })
        .collect()
}

fn bench_comm_battery(c: &mut Criterion) {
    let inputs = comm_instances(48);
    let run = |(a, b, h, r, ctx): CommInstance| {
        verify_comm_relations(&a, &b, &h, &r, &ctx).expect("identities hold")
    };
    let mut group = c.benchmark_group("comm-battery-48-instances");
    group.bench_function("map_collect", |bch| {
        bch.iter_batched(
            || inputs.clone(),
            |batch| par::map_collect(batch, run),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("map_collect_seq", |bch| {
        bch.iter_batched(
            || inputs.clone(),
            |batch| par::map_collect_seq(batch, run),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn dense_weyl_element(sampler: &mut Sampler, terms: usize) -> WeylElement {
    let window = IndexWindow::integers(-6, 6);
    let mut total = WeylElement::zero();
    while total.terms().count() < terms {
        let extra = sampler.weyl_element(&window, 8, 3);
        total = &total + &extra;
    }
    total
}

fn bench_weyl_product(c: &mut Criterion) {
    let mut sampler = Sampler::new(405);
    let a = dense_weyl_element(&mut sampler, 160);
    let b = dense_weyl_element(&mut sampler, 160);
    let mut group = c.benchmark_group("weyl-product-160x160-terms");
    group.sample_size(20);
    group.bench_function("multiply_par", |bch| {
        bch.iter(|| a.multiply_par(&b, 64).expect("capped product"))
    });
    group.bench_function("multiply_seq", |bch| {
        bch.iter(|| a.multiply_seq(&b, 64).expect("capped product"))
    });
    group.finish();
}

fn dense_cuntz_element(sampler: &mut Sampler, terms: usize) -> CuntzElement {
    let window = IndexWindow::integers(1, 3);
    let mut items = Vec::with_capacity(terms);
    for _ in 0..terms {
        let pick = |sampler: &mut Sampler| {
            let len = 1 + sampler.usize_below(3);
            (0..len).map(|_| window.at(sampler.usize_below(window.len()))).collect::<Vec<_>>()
        };
        let word = CuntzWord::new(pick(sampler), pick(sampler));
        items.push((word, sampler.gscalar(4, 3)));
    }
    CuntzElement::from_terms(items)
}

fn bench_cuntz_product(c: &mut Criterion) {
    let mut sampler = Sampler::new(406);
    let a = dense_cuntz_element(&mut sampler, 400);
    let b = dense_cuntz_element(&mut sampler, 400);
    let mut group = c.benchmark_group("cuntz-product-400x400-terms");
    group.sample_size(20);
    group.bench_function("multiply_par", |bch| bch.iter(|| a.multiply_par(&b)));
    group.bench_function("multiply_seq", |bch| bch.iter(|| a.multiply_seq(&b)));
    group.finish();
}

criterion_group!(benches, bench_comm_battery, bench_weyl_product, bench_cuntz_product);
criterion_main!(benches);
