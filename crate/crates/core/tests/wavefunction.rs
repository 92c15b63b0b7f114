use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spincm::eigen::{self, WaveParams};
use spincm::jets::Coords;
use spincm::operators::{apply_h, CouplingContext};
use spincm::spin::{self, ParticlePerm};
use spincm::verify::{random_lambdas, regularity_ratio};
use spincm::{Error, Lattice};

fn lattice() -> Lattice {
    Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.25, 1.2)).unwrap()
}

fn params(rng: &mut ChaCha8Rng, lat: &Lattice) -> WaveParams {
    let (u, v) = random_lambdas(rng, lat);
    let total = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
    eigen::complete_params(u, v, total, Complex64::new(1.0, 0.0), lat).unwrap()
}

fn point(rng: &mut ChaCha8Rng) -> Coords {
    [0.0, 0.35, 0.7].map(|o| Complex64::new(o + rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)))
}

#[test]
fn symmetrized_state_is_an_energy_eigenstate() {
    let lat = lattice();
    let ctx = CouplingContext::new(1.0, lat.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..4 {
        let p = params(&mut rng, &lat);
        let e = eigen::eigen_data(&p, &lat).unwrap().energy;
        let x = point(&mut rng);
        let psi = eigen::psi0_jets(&p, x, 4, &lat).unwrap();
        let h = apply_h(&psi, &ctx).unwrap();
        let scale = psi.values().max_abs() * (1.0 + e.norm());
        for (hv, v) in h.values().iter().zip(psi.values().iter()) {
            assert!((hv - e * v).norm() < 1e-9 * scale);
        }
    }
}

#[test]
fn symmetrized_state_lives_in_one_down_spin_sector() {
    let lat = lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let p = params(&mut rng, &lat);
    let psi = eigen::psi0(&p, point(&mut rng), &lat).unwrap();
    for (label, v) in psi.iter().enumerate() {
        if spin::down_count(label) != 1 {
            assert_eq!(*v, Complex64::new(0.0, 0.0));
        }
    }
    let sum = psi.iter().copied().sum::<Complex64>();
    assert!(sum.norm() < 1e-12 * psi.max_abs());
}

#[test]
fn invariant_under_simultaneous_exchange() {
    let lat = lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let p = params(&mut rng, &lat);
    let x = point(&mut rng);
    let psi = eigen::psi0(&p, x, &lat).unwrap();
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let swapped = ParticlePerm::transposition(i, j).apply_at(|y| eigen::psi0(&p, y, &lat), x).unwrap();
        assert!(swapped.sub(&psi).max_abs() < 1e-10 * psi.max_abs());
    }
}

#[test]
fn reflected_state_shares_energy_with_opposite_momentum() {
    let lat = lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let p = params(&mut rng, &lat);
    let a = eigen::eigen_data(&p, &lat).unwrap();
    let b = eigen::eigen_data(&p.reversed(), &lat).unwrap();
    assert!((a.energy - b.energy).norm() < 1e-10 * a.energy.norm());
    assert!((a.j2 + b.j2).norm() < 1e-10 * (1.0 + a.j2.norm()));
    let x = point(&mut rng);
    let psi1 = eigen::psi1(&p, x, &lat).unwrap();
    let psi0 = eigen::psi0(&p, x.map(|v| -v), &lat).unwrap();
    assert!(psi1.add(&psi0).max_abs() < 1e-12 * psi0.max_abs());
}

#[test]
fn no_pole_on_particle_collisions() {
    let lat = lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..3 {
        let p = params(&mut rng, &lat);
        let x1 = Complex64::new(0.3, 0.05);
        let x = [x1, x1, Complex64::new(-0.4, 0.02)];
        assert!(regularity_ratio(&p, x, &lat).unwrap() < 1e-6);
    }
}

#[test]
fn coincident_spectral_parameters_rejected() {
    let lat = lattice();
    let l = Complex64::new(0.3, 0.2);
    let err = eigen::complete_params(l, l, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), &lat).unwrap_err();
    assert!(matches!(err, Error::DegenerateParams(_)));
}

#[test]
fn two_body_reference_is_bloch_periodic() {
    let lat = lattice();
    let alpha = Complex64::new(0.2, 0.4);
    let x = Complex64::new(0.3, 0.1);
    let (f, _) = eigen::lame_reference(alpha, x, &lat).unwrap();
    let (g, _) = eigen::lame_reference(alpha, x + 2.0 * lat.omega1(), &lat).unwrap();
    let factor = eigen::lame_bloch_factor(alpha, &lat).unwrap();
    assert!((g - factor * f).norm() < 1e-10 * f.norm());
    assert!(eigen::lame_residual(alpha, x, &lat).unwrap() < 1e-10);
}
