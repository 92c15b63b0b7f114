//! Truncated Taylor polynomials in the three particle coordinates.
//!
//! A [`Jet`] of degree `D` about a base point stores `∂ᵃf/a!` for every
//! multi-index `a = (a₁, a₂, a₃)` with `|a| ≤ D`, in graded order. Products
//! and sums truncate to the smaller operand degree, and each partial
//! derivative lowers the degree by one, so differential operators can be
//! composed exactly up to the starting degree.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::elliptic::Lattice;
use crate::error::{Error, Result};

/// Largest supported jet degree.
pub const MAX_DEGREE: usize = 12;

/// Default working degree: a third-order operator composed with a
/// second-order one leaves a first-order remainder.
pub const DEFAULT_DEGREE: usize = 6;

pub type Coords = [Complex64; 3];
pub type MultiIndex = [usize; 3];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Number of monomials of total degree `≤ degree` in three variables.
pub const fn monomial_count(degree: usize) -> usize {
    (degree + 1) * (degree + 2) * (degree + 3) / 6
}

/// Position of a multi-index in graded order.
pub fn index_of(a: MultiIndex) -> usize {
    let d = a[0] + a[1] + a[2];
    let r = a[1] + a[2];
    d * (d + 1) * (d + 2) / 6 + r * (r + 1) / 2 + a[2]
}

/// All multi-indices of degree `≤ MAX_DEGREE` in graded order; the first
/// `monomial_count(D)` entries are exactly those of degree `≤ D`.
pub fn multi_indices() -> &'static [MultiIndex] {
    static TABLE: OnceLock<Vec<MultiIndex>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(monomial_count(MAX_DEGREE));
        for d in 0..=MAX_DEGREE {
            for r in 0..=d {
                for a3 in 0..=r {
                    v.push([d - r, r - a3, a3]);
                }
            }
        }
        v
    })
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    base: Coords,
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl Jet {
    pub fn zero(base: Coords, degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "jet degree {degree} exceeds {MAX_DEGREE}");
        Self {
            base,
            degree,
            coeffs: vec![ZERO; monomial_count(degree)],
        }
    }

    pub fn constant(base: Coords, degree: usize, value: Complex64) -> Self {
        let mut j = Self::zero(base, degree);
        j.coeffs[0] = value;
        j
    }

    /// The coordinate function `x_i`.
    pub fn variable(base: Coords, degree: usize, i: usize) -> Self {
        let mut j = Self::constant(base, degree, base[i]);
        if degree > 0 {
            let mut a = [0; 3];
            a[i] = 1;
            j.coeffs[index_of(a)] = Complex64::new(1.0, 0.0);
        }
        j
    }

    /// Builds a jet from raw graded-order coefficients.
    pub fn from_coeffs(base: Coords, degree: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != monomial_count(degree) {
            return Err(Error::InvalidInput(format!(
                "degree {degree} jet needs {} coefficients, got {}",
                monomial_count(degree),
                coeffs.len()
            )));
        }
        Ok(Self {
            base,
            degree,
            coeffs,
        })
    }

    /// `exp(k·x)`.
    pub fn exp_linear(base: Coords, degree: usize, k: Coords) -> Self {
        let value = (k[0] * base[0] + k[1] * base[1] + k[2] * base[2]).exp();
        let mut j = Self::zero(base, degree);
        for (slot, a) in j.coeffs.iter_mut().zip(multi_indices()) {
            let mut c = value;
            for i in 0..3 {
                c *= k[i].powu(a[i] as u32) / factorial(a[i]);
            }
            *slot = c;
        }
        j
    }

    /// Composes a univariate Taylor series `Σ tₙhⁿ` with `h = δx_j − δx_k`.
    pub fn from_pair_series(
        base: Coords,
        degree: usize,
        pair: (usize, usize),
        taylor: &[Complex64],
    ) -> Self {
        let (j, k) = pair;
        assert!(j != k && j < 3 && k < 3, "invalid coordinate pair {pair:?}");
        assert!(taylor.len() > degree, "univariate series too short");
        let mut out = Self::zero(base, degree);
        for (n, &t) in taylor.iter().enumerate().take(degree + 1) {
            for p in 0..=n {
                let mut a = [0; 3];
                a[j] = p;
                a[k] = n - p;
                let sign = if (n - p) % 2 == 0 { 1.0 } else { -1.0 };
                out.coeffs[index_of(a)] = t * binomial(n, p) * sign;
            }
        }
        out
    }

    pub fn base(&self) -> Coords {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, a: MultiIndex) -> Complex64 {
        if a[0] + a[1] + a[2] > self.degree {
            ZERO
        } else {
            self.coeffs[index_of(a)]
        }
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `∂ᵃf` (as opposed to the stored `∂ᵃf/a!`).
    pub fn derivative(&self, a: MultiIndex) -> Complex64 {
        self.coeff(a) * factorial(a[0]) * factorial(a[1]) * factorial(a[2])
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn truncate(&self, degree: usize) -> Self {
        let degree = degree.min(self.degree);
        Self {
            base: self.base,
            degree,
            coeffs: self.coeffs[..monomial_count(degree)].to_vec(),
        }
    }

    fn check_base(&self, other: &Jet) -> Result<()> {
        if self.base == other.base {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    pub fn try_add(&self, other: &Jet) -> Result<Jet> {
        self.check_base(other)?;
        let degree = self.degree.min(other.degree);
        let n = monomial_count(degree);
        let coeffs = self.coeffs[..n]
            .iter()
            .zip(&other.coeffs[..n])
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            base: self.base,
            degree,
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Jet) -> Result<Jet> {
        self.try_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn try_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_base(other)?;
        let degree = self.degree.min(other.degree);
        let idx = multi_indices();
        let mut out = vec![ZERO; monomial_count(degree)];
        for (ia, a) in idx[..monomial_count(degree)].iter().enumerate() {
            let ca = self.coeffs[ia];
            if ca == ZERO {
                continue;
            }
            let rest = degree - (a[0] + a[1] + a[2]);
            for (ib, b) in idx[..monomial_count(rest)].iter().enumerate() {
                let cb = other.coeffs[ib];
                if cb == ZERO {
                    continue;
                }
                out[index_of([a[0] + b[0], a[1] + b[1], a[2] + b[2]])] += ca * cb;
            }
        }
        Ok(Self {
            base: self.base,
            degree,
            coeffs: out,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Jet {
        Self {
            base: self.base,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self += factor · other`, truncating to the smaller degree.
    pub fn add_scaled(&mut self, other: &Jet, factor: Complex64) {
        assert!(self.base == other.base, "jets expanded about different base points");
        if other.degree < self.degree {
            *self = self.truncate(other.degree);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += factor * b;
        }
    }

    /// `∂^times/∂x_dir^times`; the result has degree `degree - times`.
    pub fn partial(&self, dir: usize, times: usize) -> Result<Jet> {
        if times > self.degree {
            return Err(Error::OverDifferentiation {
                degree: self.degree,
                times,
            });
        }
        assert!(dir < 3, "coordinate index {dir} out of range");
        let degree = self.degree - times;
        let idx = multi_indices();
        let coeffs = idx[..monomial_count(degree)]
            .iter()
            .map(|a| {
                let mut b = *a;
                b[dir] += times;
                let falling: f64 = (a[dir] + 1..=b[dir]).map(|i| i as f64).product();
                self.coeffs[index_of(b)] * falling
            })
            .collect();
        Ok(Self {
            base: self.base,
            degree,
            coeffs,
        })
    }

    /// Mixed derivative `∂ᵃ`.
    pub fn partial_multi(&self, a: MultiIndex) -> Result<Jet> {
        let mut out = self.clone();
        for (dir, &times) in a.iter().enumerate() {
            if times > 0 {
                out = out.partial(dir, times)?;
            }
        }
        Ok(out)
    }

    /// The jet of `g(y) = f(y_{π(1)}, y_{π(2)}, y_{π(3)})` where `self` is
    /// the jet of `f` and `map[i] = π(i)`.
    pub fn compose_permutation(&self, map: [usize; 3]) -> Jet {
        let mut base = [ZERO; 3];
        for i in 0..3 {
            base[map[i]] = self.base[i];
        }
        let idx = multi_indices();
        let coeffs = idx[..monomial_count(self.degree)]
            .iter()
            .map(|a| self.coeffs[index_of([a[map[0]], a[map[1]], a[map[2]]])])
            .collect();
        Jet {
            base,
            degree: self.degree,
            coeffs,
        }
    }

    /// Evaluates the truncated polynomial at `base + delta`.
    pub fn eval_offset(&self, delta: Coords) -> Complex64 {
        multi_indices()[..monomial_count(self.degree)]
            .iter()
            .zip(&self.coeffs)
            .map(|(a, c)| {
                c * delta[0].powu(a[0] as u32) * delta[1].powu(a[1] as u32) * delta[2].powu(a[2] as u32)
            })
            .sum()
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.try_add(rhs).expect("jets expanded about different base points")
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.try_sub(rhs).expect("jets expanded about different base points")
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.try_mul(rhs).expect("jets expanded about different base points")
    }
}

impl Mul<Complex64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: Complex64) -> Jet {
        self.scale(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Univariate functions that can be lifted onto a coordinate difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairKind {
    Wp,
    WpPrime,
    Zeta,
    Sigma,
    /// `f_α(u) = σ(u + α) / (σ(u) σ(α))`.
    Lax(Complex64),
}

/// Jet of `g(x_j − x_k + shift)` about `base`.
pub fn lift_pair_function(
    kind: PairKind,
    pair: (usize, usize),
    shift: Complex64,
    lat: &Lattice,
    base: Coords,
    degree: usize,
) -> Result<Jet> {
    let (j, k) = pair;
    let u = base[j] - base[k] + shift;
    let taylor = match kind {
        PairKind::Wp => lat.wp_jet(u, degree)?.taylor(),
        PairKind::WpPrime => {
            let t = lat.wp_jet(u, degree + 1)?.taylor();
            (0..=degree).map(|n| t[n + 1] * (n + 1) as f64).collect()
        }
        PairKind::Zeta => lat.zeta_jet(u, degree)?.taylor(),
        PairKind::Sigma => lat.sigma_taylor(u, degree)?,
        PairKind::Lax(alpha) => {
            let s = lat.sigma(alpha);
            if lat.is_near_lattice(alpha, crate::elliptic::POLE_GUARD) {
                return Err(Error::Pole {
                    z: alpha,
                    lattice_point: lat.nearest_point(alpha).1,
                });
            }
            lat.sigma_ratio_taylor(u, alpha, degree)?
                .into_iter()
                .map(|c| c / s)
                .collect()
        }
    };
    Ok(Jet::from_pair_series(base, degree, pair, &taylor))
}
