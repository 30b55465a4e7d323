use criterion::{black_box, criterion_group, criterion_main, Criterion};
use mage_core::bgg::{kernel_basis, DEFAULT_CAP};
use mage_core::expr::parse_function;
use mage_core::poly::gcd;
use mage_core::symbols::{is_completely_exceptional, PdeFunction};

fn bgg(c: &mut Criterion) {
    c.bench_function("kernel_basis n=3 r=1", |b| b.iter(|| kernel_basis(black_box(3), 1, DEFAULT_CAP).unwrap()));
    let mut g = c.benchmark_group("slow");
    g.sample_size(10);
    g.bench_function("kernel_basis n=4 r=1", |b| b.iter(|| kernel_basis(black_box(4), 1, 1 << 24).unwrap()));
    g.finish();
}

fn polys(c: &mut Criterion) {
    let f = parse_function("(p11 + p12^2 - 3)*(2*p11*p22 - p12 + 1)^2", 2).unwrap();
    let g = parse_function("(p11 + p12^2 - 3)*(p22^3 - p11*p12 + 5)", 2).unwrap();
    let (a, b) = (f.numer().clone(), g.numer().clone());
    c.bench_function("gcd bivariate", |bn| bn.iter(|| gcd(black_box(&a), black_box(&b))));
}

fn exceptional(c: &mut Criterion) {
    let cases = [
        ("monge-ampere n=2", "p11*p22 - p12^2 + p11 + 1", 2),
        ("graph n=2", "p22 - (p12^2 - 1)/p11", 2),
        ("monge-ampere n=3", "p33 - p11*p22 + p12^2", 3),
        ("non-exceptional n=3", "p33 - p11^2 + p12*p23", 3),
    ];
    for (name, src, n) in cases {
        let f = PdeFunction::parse(src, n).unwrap();
        c.bench_function(name, |b| b.iter(|| is_completely_exceptional(black_box(&f)).unwrap()));
    }
}

criterion_group!(benches, bgg, polys, exceptional);
criterion_main!(benches);
