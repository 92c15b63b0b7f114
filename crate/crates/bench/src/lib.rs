//! Fixtures shared by the benchmarks.

use num_complex::Complex64;
use spincm::jets::{Coords, Jet};
use spincm::{eigen, Lattice, SpinField, WaveParams};

pub fn lattice() -> Lattice {
    Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.25, 1.2)).expect("valid periods")
}

pub fn point() -> Coords {
    [Complex64::new(0.05, 0.02), Complex64::new(0.38, -0.04), Complex64::new(0.71, 0.03)]
}

pub fn params(lat: &Lattice) -> WaveParams {
    eigen::complete_params(
        Complex64::new(0.21, 0.33),
        Complex64::new(-0.37, 0.18),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        lat,
    )
    .expect("generic spectral parameters")
}

/// A generic test state: distinct plane waves in each spin component.
pub fn state(degree: usize) -> SpinField<Jet> {
    let x = point();
    SpinField::from_fn(|label| {
        let k = [0.3, -0.7, 1.1].map(|v| Complex64::new(v * (label as f64 + 1.0).sqrt(), 0.1 * label as f64));
        Jet::exp_linear(x, degree, k)
    })
}
