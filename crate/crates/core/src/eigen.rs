//! Explicit eigenfunctions at coupling `a = 1` in the total-spin-1/2 sector.
//!
//! With `Y = A − B` and `Z = A − C`,
//!
//! ```text
//! Y = b σ(μ₁₂) σ(x₁₂ + λ₁₂) σ(x₃₁ + λ₃₁) / [σ(x₁₂) σ(x₃₁)] · exp(k·x)
//! Z = b σ(λ₁₂) σ(x₁₂ + μ₁₂) σ(x₂₃ + μ₂₃) / [σ(x₁₂) σ(x₂₃)] · exp(k·x)
//! ```
//!
//! where `μ₁₂ = λ₁₂ − λ₃₁`, `μ₂₃ = −λ₃₁`, and the momenta satisfy
//! `k₁ − k₂ = ζ(λ₃₁ − λ₁₂) − ζ(λ₁₂)`, `k₂ − k₃ = ζ(λ₃₁) + ζ(λ₁₂)`.
//! The amplitudes follow from `A + B + C = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{Lattice, POLE_GUARD};
use crate::error::{Error, Result};
use crate::jets::{lift_pair_function, Coords, Jet, PairKind};
use crate::spin::{sector_embed, sector_embed_jets, ParticlePerm, SpinField};

/// Minimum separation, relative to `|ω₁|`, of the spectral parameters from
/// the degeneracy loci `λ₁₂ ≡ 0`, `λ₃₁ ≡ 0`, `λ₁₂ ≡ λ₃₁`.
pub const DEGENERACY_GUARD: f64 = 1e-9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Parameters `(k₁, k₂, k₃, λ₁₂, λ₃₁, b)` of the eigenfunction ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub k: [Complex64; 3],
    pub lambda12: Complex64,
    pub lambda31: Complex64,
    pub b: Complex64,
}

impl WaveParams {
    pub fn mu12(&self) -> Complex64 {
        self.lambda12 - self.lambda31
    }

    pub fn mu23(&self) -> Complex64 {
        -self.lambda31
    }

    pub fn total_momentum(&self) -> Complex64 {
        self.k[0] + self.k[1] + self.k[2]
    }

    /// `(k, λ) → (−k, −λ)`.
    pub fn reversed(&self) -> Self {
        Self {
            k: self.k.map(|x| -x),
            lambda12: -self.lambda12,
            lambda31: -self.lambda31,
            b: self.b,
        }
    }

    /// Residuals of the two momentum conditions.
    pub fn momentum_residuals(&self, lat: &Lattice) -> Result<[Complex64; 2]> {
        let (d1, d2) = momentum_differences(self.lambda12, self.lambda31, lat)?;
        Ok([self.k[0] - self.k[1] - d1, self.k[1] - self.k[2] - d2])
    }
}

/// Energy and the eigenvalues of `J₁`, `J₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenData {
    pub energy: Complex64,
    pub j1: Complex64,
    pub j2: Complex64,
}

fn check_lambdas(l12: Complex64, l31: Complex64, lat: &Lattice) -> Result<()> {
    for (value, what) in [
        (l12, "lambda12 is congruent to 0"),
        (l31, "lambda31 is congruent to 0"),
        (l12 - l31, "lambda12 is congruent to lambda31"),
    ] {
        if !value.is_finite() {
            return Err(Error::DegenerateParams("non-finite spectral parameter".into()));
        }
        if lat.is_near_lattice(value, DEGENERACY_GUARD) {
            return Err(Error::DegenerateParams(what.into()));
        }
    }
    Ok(())
}

/// `(k₁ − k₂, k₂ − k₃)` required by the ansatz.
pub fn momentum_differences(l12: Complex64, l31: Complex64, lat: &Lattice) -> Result<(Complex64, Complex64)> {
    check_lambdas(l12, l31, lat)?;
    Ok((
        lat.zeta(l31 - l12)? - lat.zeta(l12)?,
        lat.zeta(l31)? + lat.zeta(l12)?,
    ))
}

/// Solves the momentum conditions for `k` with `k₁ + k₂ + k₃ = total`.
pub fn complete_params(
    lambda12: Complex64,
    lambda31: Complex64,
    total: Complex64,
    b: Complex64,
    lat: &Lattice,
) -> Result<WaveParams> {
    let (d1, d2) = momentum_differences(lambda12, lambda31, lat)?;
    let k2 = (total - d1 + d2) / 3.0;
    Ok(WaveParams {
        k: [k2 + d1, k2, k2 - d2],
        lambda12,
        lambda31,
        b,
    })
}

fn plane_wave(k: &[Complex64; 3], x: Coords) -> Complex64 {
    (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]).exp()
}

/// `σ(u + λ)/σ(u)`.
fn ratio(lat: &Lattice, u: Complex64, lambda: Complex64) -> Complex64 {
    lat.sigma(u + lambda) / lat.sigma(u)
}

fn check_point(x: Coords, pairs: &[(usize, usize)], lat: &Lattice) -> Result<()> {
    for &(j, k) in pairs {
        if lat.is_near_lattice(x[j] - x[k], POLE_GUARD) {
            return Err(Error::CoincidentCoordinates { pair: (j.min(k), j.max(k)) });
        }
    }
    Ok(())
}

/// `Y(x)` and `Z(x)`.
pub fn eval_yz(p: &WaveParams, x: Coords, lat: &Lattice) -> Result<(Complex64, Complex64)> {
    check_lambdas(p.lambda12, p.lambda31, lat)?;
    check_point(x, &[(0, 1), (2, 0), (1, 2)], lat)?;
    let e = p.b * plane_wave(&p.k, x);
    let (x12, x23, x31) = (x[0] - x[1], x[1] - x[2], x[2] - x[0]);
    let y = lat.sigma(p.mu12()) * ratio(lat, x12, p.lambda12) * ratio(lat, x31, p.lambda31) * e;
    let z = lat.sigma(p.lambda12) * ratio(lat, x12, p.mu12()) * ratio(lat, x23, p.mu23()) * e;
    Ok((y, z))
}

/// Closed form of `Y − Z = C − B`.
pub fn y_minus_z_closed(p: &WaveParams, x: Coords, lat: &Lattice) -> Result<Complex64> {
    check_point(x, &[(1, 2), (2, 0)], lat)?;
    let (x23, x31) = (x[1] - x[2], x[2] - x[0]);
    Ok(-p.b
        * lat.sigma(p.lambda31)
        * ratio(lat, x23, -p.lambda12)
        * ratio(lat, x31, p.lambda31 - p.lambda12)
        * plane_wave(&p.k, x))
}

/// Jets of `Y` and `Z` about `x`.
pub fn eval_yz_jets(p: &WaveParams, x: Coords, degree: usize, lat: &Lattice) -> Result<(Jet, Jet)> {
    check_lambdas(p.lambda12, p.lambda31, lat)?;
    check_point(x, &[(0, 1), (2, 0), (1, 2)], lat)?;
    // σ(u + λ)/σ(u) = σ(λ) f_λ(u)
    let lift_ratio = |pair, lambda: Complex64| -> Result<Jet> {
        Ok(lift_pair_function(PairKind::Lax(lambda), pair, c(0.0), lat, x, degree)?.scale(lat.sigma(lambda)))
    };
    let e = Jet::exp_linear(x, degree, p.k).scale(p.b);
    let y = &(&lift_ratio((0, 1), p.lambda12)? * &lift_ratio((2, 0), p.lambda31)?) * &e;
    let z = &(&lift_ratio((0, 1), p.mu12())? * &lift_ratio((1, 2), p.mu23())?) * &e;
    Ok((y.scale(lat.sigma(p.mu12())), z.scale(lat.sigma(p.lambda12))))
}

/// `(A, B, C)` from `A − B = Y`, `A − C = Z`, `A + B + C = 0`.
pub fn abc_from_yz(y: Complex64, z: Complex64) -> (Complex64, Complex64, Complex64) {
    ((y + z) / 3.0, (z - 2.0 * y) / 3.0, (y - 2.0 * z) / 3.0)
}

pub fn components_abc(p: &WaveParams, x: Coords, lat: &Lattice) -> Result<(Complex64, Complex64, Complex64)> {
    let (y, z) = eval_yz(p, x, lat)?;
    Ok(abc_from_yz(y, z))
}

pub fn components_abc_jets(p: &WaveParams, x: Coords, degree: usize, lat: &Lattice) -> Result<(Jet, Jet, Jet)> {
    let (y, z) = eval_yz_jets(p, x, degree, lat)?;
    let third = c(1.0 / 3.0);
    let a = (&y + &z).scale(third);
    let b = (&z - &y.scale(c(2.0))).scale(third);
    let cc = (&y - &z.scale(c(2.0))).scale(third);
    Ok((a, b, cc))
}

/// The unsymmetrized sector state `A|↑↑↓⟩ + B|↑↓↑⟩ + C|↓↑↑⟩`.
pub fn psi(p: &WaveParams, x: Coords, lat: &Lattice) -> Result<SpinField<Complex64>> {
    let (a, b, cc) = components_abc(p, x, lat)?;
    sector_embed(a, b, cc)
}

pub fn psi_jets(p: &WaveParams, x: Coords, degree: usize, lat: &Lattice) -> Result<SpinField<Jet>> {
    let (a, b, cc) = components_abc_jets(p, x, degree, lat)?;
    sector_embed_jets(a, b, cc)
}

/// `ψ₀ = Σ_π Π_π ψ`, the symmetrization over all particle permutations.
pub fn psi0(p: &WaveParams, x: Coords, lat: &Lattice) -> Result<SpinField<Complex64>> {
    let mut total = SpinField::zero();
    for pi in ParticlePerm::all() {
        total = total.add(&pi.apply_at(|y| psi(p, y, lat), x)?);
    }
    Ok(total)
}

pub fn psi0_jets(p: &WaveParams, x: Coords, degree: usize, lat: &Lattice) -> Result<SpinField<Jet>> {
    let mut total = SpinField::zero_jets(x, degree);
    for pi in ParticlePerm::all() {
        let term = pi.apply_jets(|y| psi_jets(p, y, degree, lat), x)?;
        total.add_scaled(&term, c(1.0));
    }
    Ok(total)
}

/// `ψ₁(x) = ψ₀(x; −k, −λ)`.
pub fn psi1(p: &WaveParams, x: Coords, lat: &Lattice) -> Result<SpinField<Complex64>> {
    psi0(&p.reversed(), x, lat)
}

pub fn psi1_jets(p: &WaveParams, x: Coords, degree: usize, lat: &Lattice) -> Result<SpinField<Jet>> {
    psi0_jets(&p.reversed(), x, degree, lat)
}

/// `E`, `j₁`, `j₂` for the given parameters.
pub fn eigen_data(p: &WaveParams, lat: &Lattice) -> Result<EigenData> {
    let (l12, l31) = (p.lambda12, p.lambda31);
    check_lambdas(l12, l31, lat)?;
    let kk = p.total_momentum();
    let (w12, dw12) = lat.wp_pair(l12)?;
    let (w31, dw31) = lat.wp_pair(l31)?;
    let (w, dw) = lat.wp_pair(l12 - l31)?;
    let energy = -kk * kk / 6.0 - (w12 + w31 + w) / 3.0;
    let j2 = lat.zeta(l12)? - lat.zeta(l31)? - lat.zeta(l12 - l31)?;
    let j1 = kk * kk * kk / 27.0 - kk / 9.0 * j2 * j2 - (14.0 * j2 * j2 * j2 + 9.0 * (dw12 - dw31 - dw)) / 54.0;
    Ok(EigenData { energy, j1, j2 })
}

/// `j₁` with the momentum term linear in `j₂`; agrees with
/// [`eigen_data`] only when `k₁ + k₂ + k₃ = 0`.
pub fn j1_linear_momentum_term(p: &WaveParams, lat: &Lattice) -> Result<Complex64> {
    let d = eigen_data(p, lat)?;
    let kk = p.total_momentum();
    Ok(d.j1 + kk / 9.0 * d.j2 * d.j2 - kk / 9.0 * d.j2)
}

fn half_laplacian(f: &Jet) -> Result<Jet> {
    let mut out = Jet::zero(f.base(), f.degree().saturating_sub(2));
    for dir in 0..3 {
        out.add_scaled(&f.partial(dir, 2)?, c(0.5));
    }
    Ok(out)
}

fn wp_values(x: Coords, lat: &Lattice) -> Result<[Complex64; 3]> {
    Ok([lat.wp(x[0] - x[1])?, lat.wp(x[2] - x[0])?, lat.wp(x[1] - x[2])?])
}

fn relative(terms: &[Complex64]) -> f64 {
    let total: Complex64 = terms.iter().sum();
    let scale = terms.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        0.0
    } else {
        total.norm() / scale
    }
}

/// Relative residuals of the coupled equations for `Y` and `Z` at `x`.
pub fn coupled_residuals(p: &WaveParams, x: Coords, energy: Complex64, lat: &Lattice) -> Result<[f64; 2]> {
    let (yj, zj) = eval_yz_jets(p, x, 2, lat)?;
    let (y, z) = (yj.value(), zj.value());
    let [w12, w31, w23] = wp_values(x, lat)?;
    let ly = half_laplacian(&yj)?.value();
    let lz = half_laplacian(&zj)?.value();
    Ok([
        relative(&[ly, energy * y, -w12 * (y + z), -(2.0 * y - z) * w31]),
        relative(&[lz, energy * z, -w12 * (y + z), -(2.0 * z - y) * w23]),
    ])
}

/// Relative residuals of the three component equations for `A`, `B`, `C`.
pub fn component_residuals(p: &WaveParams, x: Coords, energy: Complex64, lat: &Lattice) -> Result<[f64; 3]> {
    let (aj, bj, cj) = components_abc_jets(p, x, 2, lat)?;
    let (a, b, cc) = (aj.value(), bj.value(), cj.value());
    let [w12, w31, w23] = wp_values(x, lat)?;
    let sum = w12 + w31 + w23;
    let eq = |f: &Jet, v: Complex64, exch: [Complex64; 3]| -> Result<f64> {
        Ok(relative(&[half_laplacian(f)?.value(), energy * v, -sum * v, -exch[0], -exch[1], -exch[2]]))
    };
    Ok([
        eq(&aj, a, [w12 * a, w31 * cc, w23 * b])?,
        eq(&bj, b, [w12 * cc, w31 * b, w23 * a])?,
        eq(&cj, cc, [w12 * b, w31 * a, w23 * cc])?,
    ])
}

/// One row of the parameter/permutation correspondence: the parameters
/// obtained from `(k, λ₁₂, λ₃₁)` and the particle permutation and sign with
/// `ψ(x; transformed) = sign · Π ψ(x; original)`.
#[derive(Debug, Clone, Copy)]
pub struct OrbitRow {
    pub params: WaveParams,
    pub perm: ParticlePerm,
    pub sign: f64,
    pub label: &'static str,
}

/// The six rows of the parameter orbit under particle permutations.
pub fn table_orbit(p: &WaveParams) -> [OrbitRow; 6] {
    let [k1, k2, k3] = p.k;
    let (l12, l31) = (p.lambda12, p.lambda31);
    let row = |k, lambda12, lambda31, perm, sign, label| OrbitRow {
        params: WaveParams {
            k,
            lambda12,
            lambda31,
            b: p.b,
        },
        perm,
        sign,
        label,
    };
    let t = ParticlePerm::transposition;
    [
        row([k1, k2, k3], l12, l31, ParticlePerm::identity(), 1.0, "identity"),
        row([k2, k1, k3], -(l12 - l31), l31, t(0, 1), -1.0, "-P12"),
        row([k1, k3, k2], -l31, -l12, t(1, 2), -1.0, "-P23"),
        row([k3, k2, k1], l12, l12 - l31, t(2, 0), -1.0, "-P31"),
        row([k2, k3, k1], -l31, l12 - l31, t(1, 2).compose(&t(0, 1)), 1.0, "P12 P23"),
        row([k3, k1, k2], -(l12 - l31), -l12, t(2, 1).compose(&t(0, 2)), 1.0, "P13 P32"),
    ]
}

/// Two-body reference: `ψ(x) = exp(−xζ(α)) σ(x + α)/σ(x)` with `E = −℘(α)`
/// solves `−ψ″ + 2℘(x)ψ = Eψ`.
pub fn lame_reference(alpha: Complex64, x: Complex64, lat: &Lattice) -> Result<(Complex64, Complex64)> {
    let psi = (-x * lat.zeta(alpha)?).exp() * lat.sigma(x + alpha) / lat.sigma(x);
    if lat.is_near_lattice(x, POLE_GUARD) {
        return Err(Error::Pole {
            z: x,
            lattice_point: lat.nearest_point(x).1,
        });
    }
    Ok((psi, -lat.wp(alpha)?))
}

/// Taylor coefficients of the two-body reference solution about `x`.
pub fn lame_reference_taylor(alpha: Complex64, x: Complex64, lat: &Lattice, order: usize) -> Result<Vec<Complex64>> {
    let base = [x, c(0.0), c(0.0)];
    let ratio = lift_pair_function(PairKind::Lax(alpha), (0, 1), c(0.0), lat, base, order)?;
    let wave = Jet::exp_linear(base, order, [-lat.zeta(alpha)?, c(0.0), c(0.0)]);
    let jet = (&ratio * &wave).scale(lat.sigma(alpha));
    Ok((0..=order).map(|n| jet.coeff([n, 0, 0])).collect())
}

/// Residual `−ψ″ + 2℘ψ − Eψ` of the two-body reference, relative to `|Eψ|`.
pub fn lame_residual(alpha: Complex64, x: Complex64, lat: &Lattice) -> Result<f64> {
    let t = lame_reference_taylor(alpha, x, lat, 2)?;
    let (_, energy) = lame_reference(alpha, x, lat)?;
    let wp = lat.wp(x)?;
    let second = 2.0 * t[2];
    let terms = [second, 2.0 * wp * t[0], energy * t[0]];
    let scale = terms.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok((-terms[0] + terms[1] - terms[2]).norm() / scale)
}

/// `exp(2(η₁α − ζ(α)ω₁))`, the multiplier of the two-body reference under
/// `x → x + 2ω₁`.
pub fn lame_bloch_factor(alpha: Complex64, lat: &Lattice) -> Result<Complex64> {
    Ok((2.0 * (lat.eta1() * alpha - lat.zeta(alpha)? * lat.omega1())).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat() -> Lattice {
        Lattice::new(c(1.0), Complex64::new(0.3, 1.1)).unwrap()
    }

    fn params() -> WaveParams {
        complete_params(Complex64::new(0.31, 0.12), Complex64::new(-0.22, 0.35), Complex64::new(0.1, -0.05), c(1.0), &lat()).unwrap()
    }

    const X: Coords = [
        Complex64 { re: 0.13, im: 0.05 },
        Complex64 { re: -0.41, im: 0.12 },
        Complex64 { re: 0.37, im: -0.2 },
    ];

    #[test]
    fn opposite_lambdas_give_equal_k2_k3() {
        let l = Complex64::new(0.3, 0.2);
        let p = complete_params(l, -l, c(0.0), c(1.0), &lat()).unwrap();
        assert!((p.k[1] - p.k[2]).norm() < 1e-14);
        assert!(p.total_momentum().norm() < 1e-14);
    }

    #[test]
    fn momentum_conditions_hold() {
        let lat = lat();
        let p = params();
        for r in p.momentum_residuals(&lat).unwrap() {
            assert!(r.norm() < 1e-12);
        }
        assert!((p.total_momentum() - Complex64::new(0.1, -0.05)).norm() < 1e-14);
    }

    #[test]
    fn degenerate_lambdas_rejected() {
        let lat = lat();
        let l = Complex64::new(0.3, 0.2);
        for (a, b) in [(l, l), (c(0.0), l), (l, c(0.0)), (l, l + lat.point(1, 0))] {
            assert!(matches!(complete_params(a, b, c(0.0), c(1.0), &lat), Err(Error::DegenerateParams(_))));
        }
    }

    #[test]
    fn abc_inversion() {
        let lat = lat();
        let p = params();
        let (y, z) = eval_yz(&p, X, &lat).unwrap();
        let (a, b, cc) = components_abc(&p, X, &lat).unwrap();
        assert!((a + b + cc).norm() < 1e-13 * a.norm().max(1.0));
        assert!((a - b - y).norm() < 1e-14 * y.norm());
        assert!((a - cc - z).norm() < 1e-14 * z.norm());
    }

    #[test]
    fn jets_agree_with_values() {
        let lat = lat();
        let p = params();
        let (y, z) = eval_yz(&p, X, &lat).unwrap();
        let (yj, zj) = eval_yz_jets(&p, X, 3, &lat).unwrap();
        assert!((yj.value() - y).norm() < 1e-12 * y.norm());
        assert!((zj.value() - z).norm() < 1e-12 * z.norm());
    }

    #[test]
    fn energy_is_invariant_under_reversal() {
        let lat = lat();
        let p = params();
        let d = eigen_data(&p, &lat).unwrap();
        let r = eigen_data(&p.reversed(), &lat).unwrap();
        assert!((d.energy - r.energy).norm() < 1e-12);
        assert!((d.j2 + r.j2).norm() < 1e-12);
    }

    #[test]
    fn two_body_reference() {
        let lat = lat();
        let alpha = Complex64::new(0.27, 0.19);
        let x = Complex64::new(0.33, -0.14);
        assert!(lame_residual(alpha, x, &lat).unwrap() < 1e-10);
        let (p0, _) = lame_reference(alpha, x, &lat).unwrap();
        let (p1, _) = lame_reference(alpha, x + 2.0 * lat.omega1(), &lat).unwrap();
        assert!((p1 / p0 - lame_bloch_factor(alpha, &lat).unwrap()).norm() < 1e-10);
    }
}
