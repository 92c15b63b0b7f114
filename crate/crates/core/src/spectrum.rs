//! Quantization of the `a = 1` eigenfunctions on the real circle
//! `x ∈ ℝ mod 2ω₁`.
//!
//! Periodicity of `ψ₀` in each coordinate separately requires
//!
//! ```text
//! k₁ω₁ + η₁(λ₁₂ − λ₃₁) = iπn₁,   k₂ω₁ − η₁λ₁₂ = iπn₂,   k₃ω₁ + η₁λ₃₁ = iπn₃,
//! ```
//!
//! with `η₁ = ζ(ω₁)`. Their differences give the two conditions solved here,
//!
//! ```text
//! F₁ = (k₁ − k₂)ω₁ + η₁(2λ₁₂ − λ₃₁) − iπl₁ = 0,
//! F₂ = (k₂ − k₃)ω₁ − η₁(λ₁₂ + λ₃₁) − iπl₂ = 0,
//! ```
//!
//! and their sum fixes the total momentum `K = iπl₀/ω₁` with
//! `l₀ ≡ l₁ − l₂ (mod 3)`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use log::{debug, warn};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{self, EigenData, WaveParams};
use crate::elliptic::Lattice;
use crate::error::{Error, Result};
use crate::jets::Coords;
use crate::operators::{apply_h, eigen_residual, CouplingContext};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Levels whose `λ` pairs agree to this tolerance (relative to `|ω₁|`)
/// after lattice reduction are the same level.
pub const DEDUP_TOL: f64 = 1e-8;
/// Seeds closer than this (relative to `|ω₁|`) to a degeneracy locus are skipped.
pub const SEED_EXCLUSION: f64 = 0.05;
/// Maximum admissible boundary-condition residual of an emitted level.
/// Distance (relative to `|ω₁|`) from an odd-orbit fixed point below which a
/// solution is treated as lying on it.
pub const ANTISYMMETRY_TOL: f64 = 1e-6;
pub const LEVEL_TOL: f64 = 1e-10;
/// Maximum admissible Bloch and eigen-equation residuals of an emitted level.
pub const VALIDATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            tolerance: 1e-12,
            max_halvings: 10,
        }
    }
}

/// One quantized state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Level {
    pub l0: i64,
    pub l1: i64,
    pub l2: i64,
    pub lambda12: Complex64,
    pub lambda31: Complex64,
    pub params: WaveParams,
    pub data: EigenData,
    pub newton_iters: usize,
    pub residual: f64,
}

impl Level {
    pub fn energy(&self) -> Complex64 {
        self.data.energy
    }

    pub fn labels(&self) -> (i64, i64, i64) {
        (self.l0, self.l1, self.l2)
    }

    /// Rebuilds a level from its quantum numbers and spectral parameters,
    /// recomputing the momenta, eigenvalues and boundary residual.
    pub fn from_solution(l0: i64, l1: i64, l2: i64, l12: Complex64, l31: Complex64, lat: &Lattice) -> Result<Self> {
        if !l0_compatible(l0, l1, l2) {
            return Err(Error::InvalidInput(format!(
                "l0 = {l0} is incompatible with (l1, l2) = ({l1}, {l2})"
            )));
        }
        let mut level = build_level(l0, l1, l2, l12, l31, 0, 0.0, lat)?;
        level.residual = norm2(&bc_residual(l12, l31, l1, l2, lat)?);
        Ok(level)
    }
}

/// The center-of-mass number of smallest magnitude compatible with `(l₁, l₂)`.
pub fn default_l0(l1: i64, l2: i64) -> i64 {
    let r = (l1 - l2).rem_euclid(3);
    if r == 2 {
        -1
    } else {
        r
    }
}

pub fn l0_compatible(l0: i64, l1: i64, l2: i64) -> bool {
    (l0 - l1 + l2).rem_euclid(3) == 0
}

/// `K = iπl₀/ω₁`.
pub fn total_momentum(l0: i64, lat: &Lattice) -> Complex64 {
    I * PI * l0 as f64 / lat.omega1()
}

fn bc_unlabelled(l12: Complex64, l31: Complex64, lat: &Lattice) -> Result<[Complex64; 2]> {
    let (d1, d2) = eigen::momentum_differences(l12, l31, lat)?;
    let (w, eta) = (lat.omega1(), lat.eta1());
    Ok([d1 * w + eta * (2.0 * l12 - l31), d2 * w - eta * (l12 + l31)])
}

/// `(F₁, F₂)` at the given quantum numbers.
pub fn bc_residual(l12: Complex64, l31: Complex64, l1: i64, l2: i64, lat: &Lattice) -> Result<[Complex64; 2]> {
    let [f1, f2] = bc_unlabelled(l12, l31, lat)?;
    Ok([f1 - I * PI * l1 as f64, f2 - I * PI * l2 as f64])
}

/// The first condition with the linear term `−η₁(λ₁₂ − 2λ₃₁)` in place of
/// `η₁(2λ₁₂ − λ₃₁)`; kept for comparison only, it is not a consequence of
/// the quasi-periodicity of `ψ₀`.
pub fn bc_residual_alternate(l12: Complex64, l31: Complex64, l1: i64, l2: i64, lat: &Lattice) -> Result<[Complex64; 2]> {
    let (d1, _) = eigen::momentum_differences(l12, l31, lat)?;
    let [_, f2] = bc_residual(l12, l31, l1, l2, lat)?;
    let f1 = d1 * lat.omega1() - lat.eta1() * (l12 - 2.0 * l31) - I * PI * l1 as f64;
    Ok([f1, f2])
}

/// Per-coordinate Bloch exponents `k_jω₁ + (quasi-period phase)`, each of
/// which must lie in `iπℤ`.
pub fn bloch_exponents(p: &WaveParams, lat: &Lattice) -> [Complex64; 3] {
    let (w, eta) = (lat.omega1(), lat.eta1());
    [
        p.k[0] * w + eta * (p.lambda12 - p.lambda31),
        p.k[1] * w - eta * p.lambda12,
        p.k[2] * w + eta * p.lambda31,
    ]
}

/// `∂(F₁, F₂)/∂(λ₁₂, λ₃₁)`.
pub fn bc_jacobian(l12: Complex64, l31: Complex64, lat: &Lattice) -> Result<[[Complex64; 2]; 2]> {
    let (w, eta) = (lat.omega1(), lat.eta1());
    let p12 = lat.wp(l12)?;
    let p31 = lat.wp(l31)?;
    let pd = lat.wp(l31 - l12)?;
    Ok([
        [w * (pd + p12) + 2.0 * eta, -w * pd - eta],
        [-w * p12 - eta, -w * p31 - eta],
    ])
}

fn norm2(f: &[Complex64; 2]) -> f64 {
    f[0].norm().max(f[1].norm())
}

fn newton(
    l1: i64,
    l2: i64,
    seed: (Complex64, Complex64),
    lat: &Lattice,
    opts: &NewtonOptions,
) -> Result<(Complex64, Complex64, usize, f64)> {
    let (mut u, mut v) = seed;
    let mut f = bc_residual(u, v, l1, l2, lat)?;
    let mut fnorm = norm2(&f);
    let mut iters = 0;
    while fnorm >= opts.tolerance {
        if iters == opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations: iters,
                residual: fnorm,
            });
        }
        iters += 1;
        let [[a, b], [c, d]] = bc_jacobian(u, v, lat)?;
        let det = a * d - b * c;
        if det.norm() == 0.0 || !det.is_finite() {
            return Err(Error::NoConvergence {
                iterations: iters,
                residual: fnorm,
            });
        }
        let du = (d * f[0] - b * f[1]) / det;
        let dv = (a * f[1] - c * f[0]) / det;
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let (nu, nv) = (u - step * du, v - step * dv);
            if let Ok(nf) = bc_residual(nu, nv, l1, l2, lat) {
                let n = norm2(&nf);
                if n.is_finite() && (n < fnorm || accepted.is_none()) {
                    accepted = Some((nu, nv, nf, n));
                    if n < fnorm {
                        break;
                    }
                }
            }
            step *= 0.5;
        }
        let Some((nu, nv, nf, n)) = accepted else {
            return Err(Error::NoConvergence {
                iterations: iters,
                residual: fnorm,
            });
        };
        (u, v, f, fnorm) = (nu, nv, nf, n);
    }
    Ok((u, v, iters, fnorm))
}

/// Solves the boundary conditions from `seed` with the default `l₀`.
pub fn solve_level(l1: i64, l2: i64, seed: (Complex64, Complex64), lat: &Lattice) -> Result<Level> {
    solve_level_with(default_l0(l1, l2), l1, l2, seed, lat, &NewtonOptions::default())
}

pub fn solve_level_with(
    l0: i64,
    l1: i64,
    l2: i64,
    seed: (Complex64, Complex64),
    lat: &Lattice,
    opts: &NewtonOptions,
) -> Result<Level> {
    if !l0_compatible(l0, l1, l2) {
        return Err(Error::InvalidInput(format!(
            "l0 = {l0} is incompatible with (l1, l2) = ({l1}, {l2}); need l0 ≡ l1 - l2 (mod 3)"
        )));
    }
    let (l12, l31, iters, residual) = newton(l1, l2, seed, lat, opts)?;
    if is_antisymmetric_point(l12, l31, lat) {
        return Err(Error::DegenerateParams(format!(
            "solution ({l12}, {l31}) is fixed by an odd permutation; the symmetrized state vanishes"
        )));
    }
    build_level(l0, l1, l2, l12, l31, iters, residual, lat)
}

#[allow(clippy::too_many_arguments)]
fn build_level(
    l0: i64,
    l1: i64,
    l2: i64,
    l12: Complex64,
    l31: Complex64,
    newton_iters: usize,
    residual: f64,
    lat: &Lattice,
) -> Result<Level> {
    let params = eigen::complete_params(l12, l31, total_momentum(l0, lat), Complex64::new(1.0, 0.0), lat)?;
    let data = eigen::eigen_data(&params, lat)?;
    Ok(Level {
        l0,
        l1,
        l2,
        lambda12: l12,
        lambda31: l31,
        params,
        data,
        newton_iters,
        residual,
    })
}

/// The level with `(k, λ) → (−k, −λ)`, i.e. the `ψ₁` partner.
pub fn reflected(level: &Level, lat: &Lattice) -> Result<Level> {
    let mut r = build_level(
        -level.l0,
        -level.l1,
        -level.l2,
        -level.lambda12,
        -level.lambda31,
        0,
        0.0,
        lat,
    )?;
    r.residual = norm2(&bc_residual(r.lambda12, r.lambda31, r.l1, r.l2, lat)?);
    Ok(r)
}

/// Images of `(λ₁₂, λ₃₁)` under the particle-permutation orbit.
pub fn orbit_lambdas(l12: Complex64, l31: Complex64) -> [(Complex64, Complex64); 6] {
    let m = l12 - l31;
    [(l12, l31), (-m, l31), (-l31, -l12), (l12, m), (-l31, m), (-m, -l12)]
}

/// Whether `(λ₁₂, λ₃₁)` is fixed by one of the odd orbit elements
/// (`λ₃₁ ≡ −λ₁₂`, `λ₃₁ ≡ 2λ₁₂`, `λ₁₂ ≡ 2λ₃₁`), where `ψ = −Π ψ` and the
/// symmetrized `ψ₀` vanishes identically.
pub fn is_antisymmetric_point(l12: Complex64, l31: Complex64, lat: &Lattice) -> bool {
    let tol = ANTISYMMETRY_TOL;
    [l12 + l31, l31 - 2.0 * l12, l12 - 2.0 * l31]
        .iter()
        .any(|&z| lat.is_near_lattice(z, tol))
}

/// Quantum numbers of an exact solution, read off from the boundary conditions.
fn labels_of(l12: Complex64, l31: Complex64, lat: &Lattice) -> Result<Option<(i64, i64)>> {
    let f = bc_unlabelled(l12, l31, lat)?;
    let n = f.map(|z| z / (I * PI));
    let r = n.map(|z| z.re.round());
    let off = n.iter().zip(&r).map(|(z, q)| (z - q).norm()).fold(0.0, f64::max);
    Ok((off < 1e-6).then_some((r[0] as i64, r[1] as i64)))
}

fn congruent(a: Complex64, b: Complex64, lat: &Lattice) -> bool {
    lat.nearest_point(a - b).0 < DEDUP_TOL * lat.omega1().norm()
}

fn same_state(a: &Level, b: &Level, lat: &Lattice) -> bool {
    a.l0 == b.l0
        && orbit_lambdas(a.lambda12, a.lambda31)
            .iter()
            .any(|&(u, v)| congruent(u, b.lambda12, lat) && congruent(v, b.lambda31, lat))
}

fn canonical_key(l: &Level) -> (i64, i64, i64, f64, f64, f64, f64) {
    (
        l.l1.abs() + l.l2.abs(),
        l.l1,
        l.l2,
        l.lambda12.re,
        l.lambda12.im,
        l.lambda31.re,
        l.lambda31.im,
    )
}

fn key_cmp(a: &Level, b: &Level) -> Ordering {
    let (ka, kb) = (canonical_key(a), canonical_key(b));
    ka.0.cmp(&kb.0)
        .then(ka.1.cmp(&kb.1))
        .then(ka.2.cmp(&kb.2))
        .then(ka.3.total_cmp(&kb.3))
        .then(ka.4.total_cmp(&kb.4))
        .then(ka.5.total_cmp(&kb.5))
        .then(ka.6.total_cmp(&kb.6))
}

/// Reduces a solution into the central cell and picks the orbit image with
/// in-range quantum numbers and the smallest canonical key.
fn canonicalize(level: &Level, l_max: i64, lat: &Lattice) -> Result<Option<Level>> {
    let mut best: Option<Level> = None;
    for (u, v) in orbit_lambdas(level.lambda12, level.lambda31) {
        let (u, v) = (lat.reduce(u), lat.reduce(v));
        let Some((l1, l2)) = labels_of(u, v, lat)? else {
            continue;
        };
        if l1.abs() > l_max || l2.abs() > l_max || !l0_compatible(level.l0, l1, l2) {
            continue;
        }
        let mut cand = build_level(level.l0, l1, l2, u, v, level.newton_iters, 0.0, lat)?;
        cand.residual = norm2(&bc_residual(u, v, l1, l2, lat)?);
        if best.as_ref().is_none_or(|b| key_cmp(&cand, b) == Ordering::Less) {
            best = Some(cand);
        }
    }
    Ok(best)
}

/// `|ψ₀(x + 2ω₁e_j) − ψ₀(x)| / |ψ₀(x)|` for `j = 1, 2, 3`.
pub fn bloch_residuals(params: &WaveParams, x: Coords, lat: &Lattice) -> Result<[f64; 3]> {
    let base = eigen::psi0(params, x, lat)?;
    let scale = base.max_abs();
    let mut out = [0.0; 3];
    for (j, r) in out.iter_mut().enumerate() {
        let mut y = x;
        y[j] += 2.0 * lat.omega1();
        *r = eigen::psi0(params, y, lat)?.sub(&base).max_abs() / scale;
    }
    Ok(out)
}

/// A random configuration on the real circle, away from coincidences.
pub fn random_circle_point<R: Rng>(rng: &mut R, lat: &Lattice) -> Coords {
    let period = 2.0 * lat.omega1().re;
    loop {
        let x: Coords = std::array::from_fn(|_| Complex64::new(rng.gen_range(0.0..period), 0.0));
        let gap = [(0, 1), (1, 2), (2, 0)]
            .iter()
            .map(|&(j, k)| lat.nearest_point(x[j] - x[k]).0)
            .fold(f64::INFINITY, f64::min);
        if gap > 0.05 * period {
            return x;
        }
    }
}

/// Residuals recorded when validating a level.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LevelCheck {
    pub boundary: f64,
    pub momentum: f64,
    pub bloch: f64,
    pub hamiltonian: f64,
}

impl LevelCheck {
    pub fn passed(&self) -> bool {
        self.boundary < LEVEL_TOL && self.momentum < LEVEL_TOL && self.bloch < VALIDATION_TOL && self.hamiltonian < VALIDATION_TOL
    }
}

/// Boundary conditions, momentum conditions, Bloch periodicity in all three
/// coordinates and `Hψ₀ = Eψ₀` at `points` random circle configurations.
pub fn validate_level<R: Rng>(level: &Level, lat: &Lattice, rng: &mut R, points: usize) -> Result<LevelCheck> {
    let ctx = CouplingContext::new(1.0, lat.clone())?;
    let mut check = LevelCheck {
        boundary: norm2(&bc_residual(level.lambda12, level.lambda31, level.l1, level.l2, lat)?),
        momentum: norm2(&level.params.momentum_residuals(lat)?),
        ..LevelCheck::default()
    };
    for _ in 0..points {
        let x = random_circle_point(rng, lat);
        check.bloch = bloch_residuals(&level.params, x, lat)?.into_iter().fold(check.bloch, f64::max);
        let psi = eigen::psi0_jets(&level.params, x, 2, lat)?;
        let h = apply_h(&psi, &ctx)?;
        check.hamiltonian = check.hamiltonian.max(eigen_residual(&h, &psi, level.data.energy));
    }
    Ok(check)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub l_max: i64,
    pub seeds_per_cell: usize,
    pub rng_seed: u64,
    pub newton: NewtonOptions,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            l_max: 2,
            seeds_per_cell: 4,
            rng_seed: 0,
            newton: NewtonOptions::default(),
        }
    }
}

/// Counters describing an enumeration run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub seeds: usize,
    pub converged: usize,
    pub failed: usize,
    pub out_of_range: usize,
    pub duplicates: usize,
    pub vanishing: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    pub levels: Vec<Level>,
    pub diagnostics: Diagnostics,
}

/// Seed grid: `n²` points per spectral parameter over the central cell,
/// all pairs, minus those near a degeneracy locus.
pub fn seed_grid(n: usize, lat: &Lattice) -> Vec<(Complex64, Complex64)> {
    let ticks: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64 - 0.5).collect();
    let points: Vec<Complex64> = ticks
        .iter()
        .flat_map(|&s| ticks.iter().map(move |&t| (s, t)))
        .map(|(s, t)| 2.0 * s * lat.omega1() + 2.0 * t * lat.omega2())
        .collect();
    let mut seeds = Vec::new();
    for &u in &points {
        for &v in &points {
            if [u, v, u - v].iter().all(|&z| !lat.is_near_lattice(z, SEED_EXCLUSION)) {
                seeds.push((u, v));
            }
        }
    }
    seeds
}

fn ensure_real_period(lat: &Lattice) -> Result<()> {
    let w = lat.omega1();
    if w.im.abs() > 1e-14 * w.norm() {
        return Err(Error::InvalidInput(format!(
            "the circle period 2*omega1 must be real, got omega1 = {w}"
        )));
    }
    Ok(())
}

fn energy_order(a: &Level, b: &Level) -> Ordering {
    a.data
        .energy
        .re
        .total_cmp(&b.data.energy.re)
        .then(a.labels().cmp(&b.labels()))
        .then(a.data.energy.im.total_cmp(&b.data.energy.im))
        .then(key_cmp(a, b))
}

/// All distinct levels with `|l₁|, |l₂| ≤ l_max`, sorted by `Re E`.
pub fn enumerate_spectrum(opts: &SpectrumOptions, lat: &Lattice) -> Result<Spectrum> {
    ensure_real_period(lat)?;
    if opts.l_max < 0 || opts.seeds_per_cell == 0 {
        return Err(Error::InvalidInput("l_max must be non-negative and seeds_per_cell positive".into()));
    }
    let seeds = seed_grid(opts.seeds_per_cell, lat);
    let labels: Vec<(i64, i64)> = (-opts.l_max..=opts.l_max)
        .flat_map(|l1| (-opts.l_max..=opts.l_max).map(move |l2| (l1, l2)))
        .collect();
    let jobs: Vec<((i64, i64), (Complex64, Complex64))> =
        labels.iter().flat_map(|&l| seeds.iter().map(move |&s| (l, s))).collect();

    let outcomes: Vec<Result<Option<Level>>> = jobs
        .par_iter()
        .map(|&((l1, l2), seed)| {
            let level = solve_level_with(default_l0(l1, l2), l1, l2, seed, lat, &opts.newton)?;
            canonicalize(&level, opts.l_max, lat)
        })
        .collect();

    let mut diag = Diagnostics {
        seeds: jobs.len(),
        ..Diagnostics::default()
    };
    let mut found = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(Some(level)) => {
                diag.converged += 1;
                found.push(level);
            }
            Ok(None) => {
                diag.converged += 1;
                diag.out_of_range += 1;
            }
            Err(Error::DegenerateParams(e)) => {
                diag.vanishing += 1;
                debug!("seed rejected: {e}");
            }
            Err(e) => {
                diag.failed += 1;
                debug!("seed rejected: {e}");
            }
        }
    }

    found.sort_by(key_cmp);
    let mut unique: Vec<Level> = Vec::new();
    for level in found {
        if unique.iter().any(|u| same_state(u, &level, lat)) {
            diag.duplicates += 1;
        } else {
            unique.push(level);
        }
    }

    let checks: Vec<Result<LevelCheck>> = unique
        .par_iter()
        .enumerate()
        .map(|(i, level)| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed.wrapping_add(i as u64));
            validate_level(level, lat, &mut rng, 3)
        })
        .collect();
    let mut levels = Vec::new();
    for (level, check) in unique.into_iter().zip(checks) {
        match check {
            Ok(c) if c.passed() => levels.push(level),
            Ok(c) => {
                diag.rejected += 1;
                warn!("level {:?} failed validation: {c:?}", level.labels());
            }
            Err(e) => {
                diag.rejected += 1;
                warn!("level {:?} failed validation: {e}", level.labels());
            }
        }
    }
    levels.sort_by(energy_order);
    Ok(Spectrum { levels, diagnostics: diag })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat() -> Lattice {
        Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.3)).unwrap()
    }

    #[test]
    fn default_l0_is_minimal_and_compatible() {
        for l1 in -4..=4 {
            for l2 in -4..=4 {
                let l0 = default_l0(l1, l2);
                assert!(l0_compatible(l0, l1, l2));
                assert!(l0.abs() <= 1);
                assert_eq!(default_l0(-l1, -l2), -l0);
            }
        }
    }

    #[test]
    fn boundary_conditions_are_differences_of_bloch_exponents() {
        let lat = lat();
        let p = eigen::complete_params(
            Complex64::new(0.31, 0.22),
            Complex64::new(-0.27, 0.41),
            Complex64::new(0.2, 0.1),
            Complex64::new(1.0, 0.0),
            &lat,
        )
        .unwrap();
        let e = bloch_exponents(&p, &lat);
        let f = bc_residual(p.lambda12, p.lambda31, 0, 0, &lat).unwrap();
        assert!((f[0] - (e[0] - e[1])).norm() < 1e-12);
        assert!((f[1] - (e[1] - e[2])).norm() < 1e-12);
        assert!((e[0] + e[1] + e[2] - p.total_momentum() * lat.omega1()).norm() < 1e-12);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let lat = lat();
        let (u, v) = (Complex64::new(0.31, 0.22), Complex64::new(-0.27, 0.41));
        let jac = bc_jacobian(u, v, &lat).unwrap();
        let h = 1e-6;
        for (col, (du, dv)) in [(h, 0.0), (0.0, h)].into_iter().enumerate() {
            let fp = bc_residual(u + du, v + dv, 0, 0, &lat).unwrap();
            let fm = bc_residual(u - du, v - dv, 0, 0, &lat).unwrap();
            for row in 0..2 {
                let fd = (fp[row] - fm[row]) / (2.0 * h);
                assert!((fd - jac[row][col]).norm() < 1e-6 * (1.0 + fd.norm()));
            }
        }
    }

    #[test]
    fn residual_is_odd() {
        let lat = lat();
        let (u, v) = (Complex64::new(0.31, 0.22), Complex64::new(-0.27, 0.41));
        let f = bc_residual(u, v, 1, -2, &lat).unwrap();
        let g = bc_residual(-u, -v, -1, 2, &lat).unwrap();
        assert!((f[0] + g[0]).norm() < 1e-12 && (f[1] + g[1]).norm() < 1e-12);
    }

    #[test]
    fn seeds_avoid_degeneracies() {
        let lat = lat();
        let seeds = seed_grid(4, &lat);
        assert!(!seeds.is_empty());
        for (u, v) in seeds {
            assert!(!lat.is_near_lattice(u - v, SEED_EXCLUSION));
        }
    }

    #[test]
    fn complex_period_rejected() {
        let lat = Lattice::new(Complex64::new(1.0, 0.2), Complex64::new(0.0, 1.3)).unwrap();
        assert!(matches!(enumerate_spectrum(&SpectrumOptions::default(), &lat), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn incompatible_l0_rejected() {
        let lat = lat();
        let seed = (Complex64::new(0.3, 0.2), Complex64::new(-0.2, 0.4));
        let r = solve_level_with(1, 0, 0, seed, &lat, &NewtonOptions::default());
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }
}
