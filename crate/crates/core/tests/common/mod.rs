//! Reference evaluators built without the library's theta series: lattice
//! sums resummed along the second period, and σ by quadrature of ζ.

#![allow(dead_code)]

use std::f64::consts::PI;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rand::Rng;
use spincm::Lattice;

const ROWS: i64 = 40;

fn csc2(z: Complex64) -> Complex64 {
    let s = z.sin();
    1.0 / (s * s)
}

fn cot(z: Complex64) -> Complex64 {
    z.cos() / z.sin()
}

/// Half-periods `(ω₁, ω₂)` with rows summed in closed form along `2ω₂`.
#[derive(Debug, Clone, Copy)]
pub struct Reference {
    pub w1: Complex64,
    pub w2: Complex64,
}

impl Reference {
    pub fn new(w1: Complex64, w2: Complex64) -> Self {
        Self { w1, w2 }
    }

    pub fn of(lat: &Lattice) -> Self {
        Self::new(lat.omega1(), lat.omega2())
    }

    fn scale(&self) -> Complex64 {
        PI / (2.0 * self.w2)
    }

    pub fn wp(&self, z: Complex64) -> Complex64 {
        let c = self.scale();
        let mut s = csc2(c * z) - 1.0 / 3.0;
        for m in 1..=ROWS {
            for sign in [1.0, -1.0] {
                let shift = 2.0 * sign * m as f64 * self.w1;
                s += csc2(c * (z - shift)) - csc2(c * shift);
            }
        }
        c * c * s
    }

    pub fn zeta(&self, z: Complex64) -> Complex64 {
        let c = self.scale();
        let mut s = c * cot(c * z) + z * c * c / 3.0;
        for m in 1..=ROWS {
            for sign in [1.0, -1.0] {
                let u = c * 2.0 * sign * m as f64 * self.w1;
                s += c * (cot(c * z - u) + cot(u)) + z * c * c * csc2(u);
            }
        }
        s
    }

    /// `σ(z) = z·exp ∫₀^z (ζ(t) − 1/t) dt` along the segment.
    pub fn sigma(&self, z: Complex64) -> Complex64 {
        let rule = GaussLegendre::new(48.try_into().expect("nonzero"));
        let integral: Complex64 = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| {
                let t = 0.5 * (x + 1.0);
                let p = z * t;
                (self.zeta(p) - 1.0 / p) * w
            })
            .sum::<Complex64>()
            * 0.5
            * z;
        z * integral.exp()
    }

    pub fn eta1(&self) -> Complex64 {
        self.zeta(self.w1)
    }

    pub fn eta2(&self) -> Complex64 {
        self.zeta(self.w2)
    }
}

/// `|ω₁| ∈ [0.5, 2]`, arbitrary phase, `τ` in a well-conditioned strip.
pub fn random_periods<R: Rng>(rng: &mut R) -> (Complex64, Complex64) {
    let w1 = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI));
    let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.8));
    (w1, w1 * tau)
}

/// A point of the period cell at least `margin·|ω₁|` from every lattice point.
pub fn random_point<R: Rng>(rng: &mut R, w1: Complex64, w2: Complex64, margin: f64) -> Complex64 {
    loop {
        let z = 2.0 * rng.gen_range(-0.5..0.5) * w1 + 2.0 * rng.gen_range(-0.5..0.5) * w2;
        let near = (-1..=1).any(|m| {
            (-1..=1).any(|n| (z - 2.0 * m as f64 * w1 - 2.0 * n as f64 * w2).norm() < margin * w1.norm())
        });
        if !near {
            return z;
        }
    }
}

pub fn rel(value: Complex64, reference: Complex64) -> f64 {
    (value - reference).norm() / reference.norm().max(f64::MIN_POSITIVE)
}

pub fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}
