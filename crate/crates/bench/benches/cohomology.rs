use criterion::{criterion_group, criterion_main, Criterion};

use locdiv::linalg::{howell_form, kernel};
use locdiv::verifier::{Session, VerifyConfig};
use locdiv::{Cohomology, GModule, MatrixGroup, Ring, RingMatrix, DEFAULT_CAP};
use locdiv_bench::fixtures;

fn cohomology(c: &mut Criterion) {
    for (name, g) in fixtures() {
        let m = GModule::new(g.ring());
        c.bench_function(&format!("h1/{name}"), |b| {
            b.iter(|| Cohomology::new(&g, &m).and_then(|c| c.h1()).unwrap())
        });
        c.bench_function(&format!("h1_loc/{name}"), |b| {
            b.iter(|| Cohomology::new(&g, &m).and_then(|c| c.h1_loc()).unwrap())
        });
    }
}

fn closure(c: &mut Criterion) {
    for (name, g) in fixtures() {
        let gens = g.generators().to_vec();
        c.bench_function(&format!("close/{name}"), |b| {
            b.iter(|| MatrixGroup::close(g.ring(), &gens, DEFAULT_CAP).unwrap())
        });
    }
}

fn linear_algebra(c: &mut Criterion) {
    let r = Ring::new(5, 2).unwrap();
    let data: Vec<u32> = (0..24 * 12).map(|i| (i * 7 + i / 5) % 25).collect();
    let m = RingMatrix::from_data(r, 24, 12, data);
    c.bench_function("howell/24x12_mod25", |b| b.iter(|| howell_form(&m)));
    c.bench_function("kernel/24x12_mod25", |b| b.iter(|| kernel(&m)));
}

fn verifier(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    g.bench_function("lemma-3.1/p5", |b| {
        b.iter(|| {
            Session::new(VerifyConfig::new(5, 42))
                .unwrap()
                .run("lemma-3.1")
                .unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, cohomology, closure, linear_algebra, verifier);
criterion_main!(benches);
