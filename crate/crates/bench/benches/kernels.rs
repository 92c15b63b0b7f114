use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use spincm::jets::Jet;
use spincm::operators::{commutator, CouplingContext, Operator};
use spincm::spectrum::{self, enumerate_spectrum, SpectrumOptions};
use spincm::{eigen, Lattice};
use spincm_bench::{lattice, params, point, state};

fn elliptic(c: &mut Criterion) {
    let lat = lattice();
    let z = Complex64::new(0.31, 0.27);
    let mut g = c.benchmark_group("elliptic");
    g.bench_function("wp", |b| b.iter(|| lat.wp(black_box(z))));
    g.bench_function("zeta", |b| b.iter(|| lat.zeta(black_box(z))));
    g.bench_function("sigma", |b| b.iter(|| lat.sigma(black_box(z))));
    g.bench_function("wp_jet/8", |b| b.iter(|| lat.wp_jet(black_box(z), 8)));
    g.bench_function("lattice_setup", |b| {
        b.iter(|| Lattice::new(Complex64::new(1.0, 0.0), black_box(Complex64::new(0.25, 1.2))))
    });
    g.finish();
}

fn jets(c: &mut Criterion) {
    let x = point();
    let mut g = c.benchmark_group("jet_multiply");
    for degree in [4, 6, 8] {
        let f = Jet::exp_linear(x, degree, [0.3, -0.2, 0.5].map(|v| Complex64::new(v, 0.1)));
        let h = Jet::exp_linear(x, degree, [-0.1, 0.4, 0.2].map(|v| Complex64::new(v, -0.3)));
        g.bench_with_input(BenchmarkId::from_parameter(degree), &degree, |b, _| b.iter(|| &f * &h));
    }
    g.finish();
}

fn operators(c: &mut Criterion) {
    let ctx = CouplingContext::new(1.0, lattice()).expect("valid coupling");
    let psi = state(6);
    let alpha = Complex64::new(0.2, 0.3);
    let mut g = c.benchmark_group("commutator");
    g.sample_size(20);
    g.bench_function("H_Jspin", |b| {
        b.iter(|| commutator(Operator::Hamiltonian, Operator::Jspin(alpha), black_box(&psi), &ctx))
    });
    g.bench_function("H_J1", |b| b.iter(|| commutator(Operator::Hamiltonian, Operator::J1, black_box(&psi), &ctx)));
    g.finish();
}

fn wavefunction(c: &mut Criterion) {
    let lat = lattice();
    let p = params(&lat);
    let x = point();
    let mut g = c.benchmark_group("wavefunction");
    g.bench_function("psi0", |b| b.iter(|| eigen::psi0(black_box(&p), x, &lat)));
    g.bench_function("psi0_jets/4", |b| b.iter(|| eigen::psi0_jets(black_box(&p), x, 4, &lat)));
    g.bench_function("eigen_data", |b| b.iter(|| eigen::eigen_data(black_box(&p), &lat)));
    g.finish();
}

fn spectra(c: &mut Criterion) {
    let lat = Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.3)).expect("valid periods");
    let seed = (Complex64::new(0.02, 0.3), Complex64::new(0.01, 0.45));
    let mut g = c.benchmark_group("spectrum");
    g.sample_size(10);
    g.bench_function("solve_level", |b| b.iter(|| spectrum::solve_level(-1, -2, black_box(seed), &lat)));
    let opts = SpectrumOptions {
        l_max: 1,
        seeds_per_cell: 3,
        ..SpectrumOptions::default()
    };
    g.bench_function("enumerate/lmax1", |b| b.iter(|| enumerate_spectrum(black_box(&opts), &lat)));
    g.finish();
}

criterion_group!(benches, elliptic, jets, operators, wavefunction, spectra);
criterion_main!(benches);
