use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fourfold::abelian::abelianize;
use fourfold::obstruction::{decide_almost_complex, enumerate_chern_classes, DEFAULT_SEARCH_BOUND};
use fourfold::{build_form, family_invariants, smith_normal_form, FamilyId, ManifoldInvariants};
use num_bigint::BigInt;

fn decide_families(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide_almost_complex");
    for id in [
        FamilyId::M1 { g: 50 },
        FamilyId::M2 { g: 20, n: 20 },
        FamilyId::M3 { g: 20, n: 20 },
        FamilyId::M4 { n: 15 },
    ] {
        let m = family_invariants(id).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(id), &m, |b, m| {
            b.iter(|| decide_almost_complex(black_box(m), DEFAULT_SEARCH_BOUND).unwrap())
        });
    }
    group.finish();
}

fn box_search(c: &mut Criterion) {
    // indefinite odd form with no closed form: forces the shell search
    let form = build_form("matrix [[2,1,0],[1,-2,1],[0,1,3]]").unwrap();
    let m = ManifoldInvariants {
        name: "box".into(),
        chi: BigInt::from(40),
        tau: BigInt::from(1),
        w2: Some(vec![false, true, true]),
        form,
        b1: 0,
        h1: fourfold::AbelianGroup::free(0),
        presentation: None,
    };
    c.bench_function("shell search rank 3", |b| {
        b.iter(|| decide_almost_complex(black_box(&m), 16).unwrap())
    });
    let m2 = family_invariants(FamilyId::M4 { n: 2 }).unwrap();
    c.bench_function("enumerate 2H bound 6", |b| {
        b.iter(|| enumerate_chern_classes(black_box(&m2), 6).unwrap())
    });
}

fn homology(c: &mut Criterion) {
    let m = family_invariants(FamilyId::M2 { g: 20, n: 20 }).unwrap();
    let p = m.presentation.unwrap();
    c.bench_function("abelianize M2 g=20 n=20", |b| b.iter(|| abelianize(black_box(&p))));
    let rel = p.relation_matrix();
    c.bench_function("smith normal form M2 g=20 n=20", |b| b.iter(|| smith_normal_form(black_box(&rel))));
}

criterion_group!(benches, decide_families, box_search, homology);
criterion_main!(benches);
