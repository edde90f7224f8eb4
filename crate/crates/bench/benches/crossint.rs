use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use crossint_core::certify::{certify_grid, LemmaId};
use crossint_core::family::{example1_pair, transversal};
use crossint_core::kset::{lex_rank, lex_unrank};
use crossint_core::search::{brute_oracle, max_product_search};
use crossint_core::{GroundSpec, KSet};

fn certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify_grid");
    for lemma in [LemmaId::Key, LemmaId::Key1, LemmaId::Key2] {
        group.bench_with_input(BenchmarkId::from_parameter(lemma), &lemma, |b, &l| {
            b.iter(|| certify_grid(l, 8, 40, None).unwrap())
        });
    }
    group.bench_function("ratio_bound_t4", |b| {
        b.iter(|| certify_grid(LemmaId::RatioBound, 8, 40, Some(4)).unwrap())
    });
    group.finish();
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    for n in [5u32, 6, 7] {
        group.bench_with_input(BenchmarkId::new("brute", n), &n, |b, &n| {
            b.iter(|| brute_oracle(n, 2).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("bnb", n), &n, |b, &n| {
            b.iter(|| max_product_search(n, 2, None).unwrap())
        });
    }
    group.bench_function("bnb_6_3", |b| {
        b.iter(|| max_product_search(6, 3, None).unwrap())
    });
    group.finish();
}

fn ranks(c: &mut Criterion) {
    let g = GroundSpec::full(64, 32).unwrap();
    let total = g.total();
    c.bench_function("lex_unrank_64_32", |b| {
        let mut r = 0u64;
        b.iter(|| {
            r = r.wrapping_add(0x9E37_79B9_7F4A_7C15) % total;
            lex_unrank(&g, black_box(r)).unwrap()
        })
    });
    let s = lex_unrank(&g, total / 3).unwrap();
    c.bench_function("lex_rank_64_32", |b| {
        b.iter(|| lex_rank(&g, black_box(s)).unwrap())
    });
}

fn families(c: &mut Criterion) {
    let f0 = KSet::from_elems(&[2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
    let g0 = KSet::from_elems(&[9, 10, 11, 12, 13, 14, 15, 16]).unwrap();
    c.bench_function("example1_17_8", |b| {
        b.iter(|| example1_pair(17, 8, f0, g0).unwrap())
    });
    let (f, _) = example1_pair(
        13,
        4,
        KSet::from_elems(&[2, 3, 4, 5]).unwrap(),
        KSet::from_elems(&[5, 6, 7, 8]).unwrap(),
    )
    .unwrap();
    c.bench_function("transversal_13_4", |b| {
        b.iter(|| transversal(black_box(&f), 4).unwrap())
    });
}

criterion_group!(benches, certify, search, ranks, families);
criterion_main!(benches);
