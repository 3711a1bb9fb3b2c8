use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dorp_bench::{monoid, rees_generators, sample};
use dorp_core::enumerate::{enumerate_all_partial_maps, enumerate_dorp};
use dorp_core::greens::{key_partition, RelationKind};
use dorp_core::rank::{exact_rank, monoid_generating_set};
use dorp_core::semigroup::{closure, CayleyTable, ClosureOptions};
use dorp_core::{Bounds, Composition, ReesQuotient};
use std::hint::black_box;

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    for n in [5, 7, 8] {
        g.bench_with_input(BenchmarkId::new("dorp", n), &n, |b, &n| {
            b.iter(|| enumerate_dorp(n, &Bounds::default()).unwrap().len())
        });
    }
    g.bench_function("filter-all/5", |b| {
        b.iter(|| {
            enumerate_all_partial_maps(5, &Bounds::default())
                .unwrap()
                .filter(|m| m.in_dorp())
                .count()
        })
    });
    g.finish();
}

fn composition(c: &mut Criterion) {
    let maps = sample(6, 7);
    c.bench_function("compose/sample-6", |b| {
        b.iter(|| {
            let mut acc = 0usize;
            for x in &maps {
                for y in &maps {
                    acc += black_box(x.then(y)).height();
                }
            }
            acc
        })
    });
}

fn closures(c: &mut Criterion) {
    let mut g = c.benchmark_group("closure");
    g.sample_size(20);
    for n in [4, 5, 6] {
        let gens = monoid_generating_set(n).unwrap().into_vec();
        g.bench_with_input(BenchmarkId::new("monoid", n), &gens, |b, gens| {
            b.iter(|| {
                closure(gens, &Composition, ClosureOptions::default())
                    .unwrap()
                    .len()
            })
        });
    }
    let rule = ReesQuotient::new(6, 2).unwrap();
    let gens = rees_generators(6, 2);
    g.bench_function("rees/6/2", |b| {
        b.iter(|| {
            closure(&gens, &rule, ClosureOptions::default())
                .unwrap()
                .len()
        })
    });
    g.finish();
}

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("table");
    g.sample_size(10);
    let m5 = monoid(5).into_vec();
    g.bench_function("cayley/5", |b| {
        b.iter(|| CayleyTable::build(&m5, &Composition, 1000).unwrap().len())
    });
    let m4 = monoid(4).into_vec();
    let t4 = CayleyTable::build(&m4, &Composition, 1000).unwrap();
    g.bench_function("exact-rank/4", |b| {
        b.iter(|| exact_rank(&t4, None).unwrap().rank)
    });
    g.bench_function("key-partition/D*/5", |b| {
        let t5 = CayleyTable::build(&m5, &Composition, 1000).unwrap();
        b.iter(|| key_partition(&t5, RelationKind::DStar).class_count())
    });
    g.finish();
}

criterion_group!(benches, enumeration, composition, closures, tables);
criterion_main!(benches);
