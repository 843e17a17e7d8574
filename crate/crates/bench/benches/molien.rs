use criterion::{black_box, criterion_group, criterion_main, Criterion};

use reflectia::formulas::main_theorem;
use reflectia::groups::{declared_profile, generate, resolve_group, DEFAULT_CAP};
use reflectia::molien::molien;

fn closure(c: &mut Criterion) {
    let mut g = c.benchmark_group("closure");
    for name in ["B3", "G(3,1,3)", "G4", "H3"] {
        let spec = resolve_group(name).unwrap();
        g.bench_function(name, |b| b.iter(|| generate(black_box(&spec), DEFAULT_CAP).unwrap()));
    }
    g.finish();
}

fn brute(c: &mut Criterion) {
    let mut g = c.benchmark_group("molien");
    g.sample_size(20);
    for name in ["A3", "B3", "G(3,1,3)", "G(2,2,4)", "G4", "G8", "H3"] {
        let group = generate(&resolve_group(name).unwrap(), DEFAULT_CAP).unwrap();
        g.bench_function(name, |b| b.iter(|| molien(black_box(&group)).unwrap()));
    }
    g.finish();
}

fn closed_forms(c: &mut Criterion) {
    let mut g = c.benchmark_group("main_theorem");
    for name in ["A4", "H3", "G(4,1,4)", "G32"] {
        let p = declared_profile(&resolve_group(name).unwrap()).unwrap();
        g.bench_function(name, |b| b.iter(|| (0..=p.n).map(|r| main_theorem(black_box(&p), r).unwrap()).count()));
    }
    g.finish();
}

criterion_group!(benches, closure, brute, closed_forms);
criterion_main!(benches);
