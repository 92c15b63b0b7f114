//! Differential-spin operators of the three-particle system, applied to spin
//! fields of jets.
//!
//! * `H = −½Σ∂ⱼ² + Σ_{j<k} a(a + S_jk) ℘(x_jk)`
//! * `J_spin(α) = ∂₁∂₂∂₃ + ½Σ a(a + S_jk)(℘(x_jk) − ℘(α))∂_l + λ Σ f(x_jk)f(x_kl)f(x_lj) S_jk S_kl`
//!   with `f(u) = σ(u + α)/(σ(u)σ(α))` and `λ = a²/3`
//! * `J₁ = ∂₁∂₂∂₃ + ½Σ a(a + S_jk)℘(x_jk)∂_l + (a²/3) Σ φ_jkl S_jk S_kl`
//! * `J₂ = ½Σ S_jk ∂_l − (a/3) Σ ψ_jkl S_jk S_kl`
//!
//! Sums written `Σ` without qualification run over the six ordered triples
//! `(j, k, l)` of distinct indices. Every operator of order `r` maps a degree-`D`
//! jet field to a degree `D − r` field.

use num_complex::Complex64;
use rand::Rng;

use crate::elliptic::{Lattice, POLE_GUARD};
use crate::error::{Error, Result};
use crate::jets::{lift_pair_function, Coords, Jet, PairKind};
use crate::spin::{sjk, SpinField};

/// The six ordered triples of distinct particle indices.
pub const ORDERED_TRIPLES: [(usize, usize, usize); 6] = [
    (0, 1, 2),
    (1, 2, 0),
    (2, 0, 1),
    (0, 2, 1),
    (2, 1, 0),
    (1, 0, 2),
];

/// Unordered pairs `j < k` with the remaining index `l`.
pub const PAIRS: [(usize, usize, usize); 3] = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Coupling constant, lattice, and the coefficient of the three-body
/// exchange term.
#[derive(Debug, Clone)]
pub struct CouplingContext {
    a: f64,
    lat: Lattice,
    lambda_coeff: f64,
}

impl CouplingContext {
    pub fn new(a: f64, lat: Lattice) -> Result<Self> {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::InvalidInput(format!("coupling a = {a} must be finite and non-negative")));
        }
        Ok(Self {
            a,
            lat,
            lambda_coeff: a * a / 3.0,
        })
    }

    /// Replaces the exchange coefficient `a²/3`. Only useful as a negative
    /// control: commutation with `H` holds for `a²/3` alone.
    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda_coeff = lambda;
        self
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lat
    }

    pub fn lambda_coeff(&self) -> f64 {
        self.lambda_coeff
    }
}

/// The `α`-independent coefficients of
/// `Φ_jkl(α) = −½℘′(α) + ψ_jkl ℘(α) + φ_jkl`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiDecomposition {
    pub psi: Complex64,
    pub phi: Complex64,
}

impl PhiDecomposition {
    pub fn reconstruct(&self, alpha: Complex64, lat: &Lattice) -> Result<Complex64> {
        let (p, dp) = lat.wp_pair(alpha)?;
        Ok(-0.5 * dp + self.psi * p + self.phi)
    }
}

fn check_pairs(x: Coords, lat: &Lattice) -> Result<()> {
    for (j, k, _) in PAIRS {
        if lat.is_near_lattice(x[j] - x[k], POLE_GUARD) {
            return Err(Error::CoincidentCoordinates { pair: (j, k) });
        }
    }
    Ok(())
}

/// `ψ_jkl = ζ(x_jk) + ζ(x_kl) + ζ(x_lj)` and
/// `φ_jkl = −⅙{℘′(x_jk) + ℘′(x_kl) + ℘′(x_lj) + 2ψ_jkl³}`.
pub fn phi_decompose(x: Coords, triple: (usize, usize, usize), lat: &Lattice) -> Result<PhiDecomposition> {
    check_pairs(x, lat)?;
    let (j, k, l) = triple;
    let diffs = [x[j] - x[k], x[k] - x[l], x[l] - x[j]];
    let mut psi = c(0.0);
    let mut dp_sum = c(0.0);
    for d in diffs {
        psi += lat.zeta(d)?;
        dp_sum += lat.wp_prime(d)?;
    }
    let phi = -(dp_sum + 2.0 * psi * psi * psi) / 6.0;
    Ok(PhiDecomposition { psi, phi })
}

/// `Φ_jkl(α) = f(x_jk) f(x_kl) f(x_lj)` evaluated directly.
pub fn phi_product(x: Coords, triple: (usize, usize, usize), alpha: Complex64, lat: &Lattice) -> Result<Complex64> {
    check_pairs(x, lat)?;
    let (j, k, l) = triple;
    let s_alpha = lat.sigma(alpha);
    if lat.is_near_lattice(alpha, POLE_GUARD) {
        return Err(Error::Pole {
            z: alpha,
            lattice_point: lat.nearest_point(alpha).1,
        });
    }
    let f = |u: Complex64| lat.sigma(u + alpha) / (lat.sigma(u) * s_alpha);
    Ok(f(x[j] - x[k]) * f(x[k] - x[l]) * f(x[l] - x[j]))
}

/// The operators that can be applied to jet fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operator {
    Hamiltonian,
    /// Total momentum `Σ∂_l`.
    Momentum,
    /// The spectral-parameter family `J_spin(α)`.
    Jspin(Complex64),
    /// `J_spin(α)` without the three-body exchange term; does not commute with `H`.
    NaiveJspin(Complex64),
    J1,
    J2,
}

impl Operator {
    pub fn order(&self) -> usize {
        match self {
            Operator::Hamiltonian => 2,
            Operator::Momentum | Operator::J2 => 1,
            Operator::Jspin(_) | Operator::NaiveJspin(_) | Operator::J1 => 3,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Operator::Hamiltonian => "H".into(),
            Operator::Momentum => "P".into(),
            Operator::Jspin(a) => format!("J_spin({a})"),
            Operator::NaiveJspin(a) => format!("J_naive({a})"),
            Operator::J1 => "J1".into(),
            Operator::J2 => "J2".into(),
        }
    }

    pub fn apply(&self, psi: &SpinField<Jet>, ctx: &CouplingContext) -> Result<Applied> {
        let needed = self.order();
        let available = psi.degree();
        if available < needed {
            return Err(Error::InsufficientDegree { needed, available });
        }
        check_pairs(psi.base(), &ctx.lat)?;
        let mut acc = Accumulator::new(psi.base(), available - needed);
        match *self {
            Operator::Hamiltonian => hamiltonian(psi, ctx, &mut acc)?,
            Operator::Momentum => {
                for l in 0..3 {
                    acc.add(&psi.partial(l, 1)?, c(1.0));
                }
            }
            Operator::Jspin(alpha) => {
                two_body_third_order(psi, ctx, Some(alpha), &mut acc)?;
                lax_exchange(psi, ctx, alpha, &mut acc)?;
            }
            Operator::NaiveJspin(alpha) => two_body_third_order(psi, ctx, Some(alpha), &mut acc)?,
            Operator::J1 => {
                two_body_third_order(psi, ctx, None, &mut acc)?;
                phi_exchange(psi, ctx, &mut acc)?;
            }
            Operator::J2 => j2(psi, ctx, &mut acc)?,
        }
        Ok(acc.finish())
    }
}

/// An operator image together with the largest single-term magnitude that
/// entered it, used to normalize cancellations.
#[derive(Debug, Clone)]
pub struct Applied {
    pub field: SpinField<Jet>,
    pub scale: f64,
}

struct Accumulator {
    out: SpinField<Jet>,
    degree: usize,
    scale: f64,
}

impl Accumulator {
    fn new(base: Coords, degree: usize) -> Self {
        Self {
            out: SpinField::zero_jets(base, degree),
            degree,
            scale: 0.0,
        }
    }

    fn add(&mut self, term: &SpinField<Jet>, factor: Complex64) {
        let term = term.truncate(self.degree);
        self.scale = self.scale.max(term.max_abs() * factor.norm());
        self.out.add_scaled(&term, factor);
    }

    fn finish(self) -> Applied {
        Applied {
            field: self.out,
            scale: self.scale,
        }
    }
}

fn lift(kind: PairKind, pair: (usize, usize), ctx: &CouplingContext, base: Coords, degree: usize) -> Result<Jet> {
    lift_pair_function(kind, pair, c(0.0), &ctx.lat, base, degree)
}

fn hamiltonian(psi: &SpinField<Jet>, ctx: &CouplingContext, acc: &mut Accumulator) -> Result<()> {
    let (base, d) = (psi.base(), acc.degree);
    for j in 0..3 {
        acc.add(&psi.partial(j, 2)?, c(-0.5));
    }
    let a = ctx.a;
    let low = psi.truncate(d);
    for (j, k, _) in PAIRS {
        let wp = lift(PairKind::Wp, (j, k), ctx, base, d)?;
        let t = low.mul_scalar(&wp);
        acc.add(&t, c(a * a));
        acc.add(&sjk(j, k).apply(&t), c(a));
    }
    Ok(())
}

/// `∂₁∂₂∂₃ + ½Σ a(a + S_jk)(℘(x_jk) − ℘(α))∂_l`, with the `℘(α)` part
/// omitted when `alpha` is `None`.
fn two_body_third_order(
    psi: &SpinField<Jet>,
    ctx: &CouplingContext,
    alpha: Option<Complex64>,
    acc: &mut Accumulator,
) -> Result<()> {
    let (base, d) = (psi.base(), acc.degree);
    acc.add(&psi.partial(0, 1)?.partial(1, 1)?.partial(2, 1)?, c(1.0));
    let wp_alpha = match alpha {
        Some(al) => ctx.lat.wp(al)?,
        None => c(0.0),
    };
    let a = ctx.a;
    for (j, k, l) in ORDERED_TRIPLES {
        let mut coef = lift(PairKind::Wp, (j, k), ctx, base, d)?;
        coef.add_scaled(&Jet::constant(base, d, wp_alpha), c(-1.0));
        let t = psi.partial(l, 1)?.truncate(d).mul_scalar(&coef);
        acc.add(&t, c(0.5 * a * a));
        acc.add(&sjk(j, k).apply(&t), c(0.5 * a));
    }
    Ok(())
}

fn exchange(psi: &SpinField<Jet>, j: usize, k: usize, l: usize) -> SpinField<Jet> {
    sjk(j, k).apply(&sjk(k, l).apply(psi))
}

fn lax_exchange(psi: &SpinField<Jet>, ctx: &CouplingContext, alpha: Complex64, acc: &mut Accumulator) -> Result<()> {
    let (base, d) = (psi.base(), acc.degree);
    let low = psi.truncate(d);
    for (j, k, l) in ORDERED_TRIPLES {
        let mut phi = lift(PairKind::Lax(alpha), (j, k), ctx, base, d)?;
        phi = &phi * &lift(PairKind::Lax(alpha), (k, l), ctx, base, d)?;
        phi = &phi * &lift(PairKind::Lax(alpha), (l, j), ctx, base, d)?;
        acc.add(&exchange(&low, j, k, l).mul_scalar(&phi), c(ctx.lambda_coeff));
    }
    Ok(())
}

/// Jets of `ψ_jkl` and `φ_jkl` about `base`.
fn psi_phi_jets(triple: (usize, usize, usize), ctx: &CouplingContext, base: Coords, d: usize) -> Result<(Jet, Jet)> {
    let (j, k, l) = triple;
    let mut psi = Jet::zero(base, d);
    let mut dp = Jet::zero(base, d);
    for pair in [(j, k), (k, l), (l, j)] {
        psi.add_scaled(&lift(PairKind::Zeta, pair, ctx, base, d)?, c(1.0));
        dp.add_scaled(&lift(PairKind::WpPrime, pair, ctx, base, d)?, c(1.0));
    }
    let cube = &(&psi * &psi) * &psi;
    let mut phi = dp;
    phi.add_scaled(&cube, c(2.0));
    Ok((psi, phi.scale(c(-1.0 / 6.0))))
}

fn phi_exchange(psi: &SpinField<Jet>, ctx: &CouplingContext, acc: &mut Accumulator) -> Result<()> {
    let (base, d) = (psi.base(), acc.degree);
    let low = psi.truncate(d);
    for triple in ORDERED_TRIPLES {
        let (_, phi) = psi_phi_jets(triple, ctx, base, d)?;
        let (j, k, l) = triple;
        acc.add(&exchange(&low, j, k, l).mul_scalar(&phi), c(ctx.lambda_coeff));
    }
    Ok(())
}

fn j2(psi: &SpinField<Jet>, ctx: &CouplingContext, acc: &mut Accumulator) -> Result<()> {
    let (base, d) = (psi.base(), acc.degree);
    let low = psi.truncate(d);
    for (j, k, l) in ORDERED_TRIPLES {
        acc.add(&sjk(j, k).apply(&psi.partial(l, 1)?), c(0.5));
        let (psi_jkl, _) = psi_phi_jets((j, k, l), ctx, base, d)?;
        acc.add(&exchange(&low, j, k, l).mul_scalar(&psi_jkl), c(-ctx.a / 3.0));
    }
    Ok(())
}

pub fn apply_h(psi: &SpinField<Jet>, ctx: &CouplingContext) -> Result<SpinField<Jet>> {
    Ok(Operator::Hamiltonian.apply(psi, ctx)?.field)
}

pub fn apply_jspin(psi: &SpinField<Jet>, alpha: Complex64, ctx: &CouplingContext) -> Result<SpinField<Jet>> {
    Ok(Operator::Jspin(alpha).apply(psi, ctx)?.field)
}

pub fn apply_j1(psi: &SpinField<Jet>, ctx: &CouplingContext) -> Result<SpinField<Jet>> {
    Ok(Operator::J1.apply(psi, ctx)?.field)
}

pub fn apply_j2(psi: &SpinField<Jet>, ctx: &CouplingContext) -> Result<SpinField<Jet>> {
    Ok(Operator::J2.apply(psi, ctx)?.field)
}

/// `[A, B]ψ` with its normalized residual.
#[derive(Debug, Clone)]
pub struct Commutator {
    pub field: SpinField<Jet>,
    /// Largest single-term magnitude in either composition.
    pub scale: f64,
    /// `max |[A, B]ψ| / scale`.
    pub residual: f64,
}

pub fn commutator(a: Operator, b: Operator, psi: &SpinField<Jet>, ctx: &CouplingContext) -> Result<Commutator> {
    let needed = a.order() + b.order();
    if psi.degree() < needed {
        return Err(Error::InsufficientDegree {
            needed,
            available: psi.degree(),
        });
    }
    let ab = a.apply(&b.apply(psi, ctx)?.field, ctx)?;
    let ba = b.apply(&a.apply(psi, ctx)?.field, ctx)?;
    let field = ab.field.sub(&ba.field);
    let scale = ab.scale.max(ba.scale);
    let residual = if scale > 0.0 { field.max_abs() / scale } else { 0.0 };
    Ok(Commutator { field, scale, residual })
}

/// Relative residual `max|Oψ − λψ| / max(|Oψ|, |λψ|)` of an eigen-equation on
/// jets, compared at the degree of `Oψ`.
pub fn eigen_residual(applied: &SpinField<Jet>, psi: &SpinField<Jet>, eigenvalue: Complex64) -> f64 {
    let target = psi.truncate(applied.degree()).scale(eigenvalue);
    let diff = applied.sub(&target);
    let scale = applied.max_abs().max(target.max_abs());
    if scale == 0.0 {
        0.0
    } else {
        diff.max_abs() / scale
    }
}

fn random_complex<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius))
}

/// A generic smooth spin field for operator identities: every component is
/// `c · Π_{j<k} σ(x_jk + c_jk) · exp(Σ a_j x_j)` with independent random
/// complex parameters, so the jets are exact.
pub fn random_test_state<R: Rng>(rng: &mut R, base: Coords, degree: usize, lat: &Lattice) -> Result<SpinField<Jet>> {
    let mut out = Vec::with_capacity(8);
    for _ in 0..8 {
        let k = [random_complex(rng, 0.6), random_complex(rng, 0.6), random_complex(rng, 0.6)];
        let mut jet = Jet::exp_linear(base, degree, k).scale(random_complex(rng, 1.0) + 1.0);
        for (j, kk, _) in PAIRS {
            let shift = random_complex(rng, 0.4) + c(0.3);
            let s = lift_pair_function(PairKind::Sigma, (j, kk), shift, lat, base, degree)?;
            jet = &jet * &s;
        }
        out.push(jet);
    }
    Ok(SpinField {
        components: out.try_into().unwrap_or_else(|_| unreachable!("eight components")),
    })
}

/// A random point with pairwise separations well away from the lattice.
pub fn random_point<R: Rng>(rng: &mut R, lat: &Lattice) -> Coords {
    loop {
        let w = lat.omega1().norm();
        let x = [
            random_complex(rng, 0.6 * w),
            random_complex(rng, 0.6 * w),
            random_complex(rng, 0.6 * w),
        ];
        if PAIRS.iter().all(|&(j, k, _)| !lat.is_near_lattice(x[j] - x[k], 0.1)) {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::UP_UP_DOWN;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lattice() -> Lattice {
        Lattice::new(c(1.0), Complex64::new(0.3, 1.1)).unwrap()
    }

    fn x0() -> Coords {
        [Complex64::new(0.13, 0.05), Complex64::new(-0.41, 0.12), Complex64::new(0.37, -0.2)]
    }

    #[test]
    fn free_constant_state_is_annihilated() {
        let ctx = CouplingContext::new(0.0, lattice()).unwrap();
        let psi = SpinField::from_fn(|b| Jet::constant(x0(), 4, c(b as f64 + 1.0)));
        let h = apply_h(&psi, &ctx).unwrap();
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn plane_wave_on_aligned_spins() {
        let lat = lattice();
        let a = 1.3;
        let ctx = CouplingContext::new(a, lat.clone()).unwrap();
        let k = [Complex64::new(0.2, 0.1), Complex64::new(-0.5, 0.0), Complex64::new(0.1, 0.3)];
        let wave = Jet::exp_linear(x0(), 4, k);
        let mut psi = SpinField::zero_jets(x0(), 4);
        psi.components[0] = wave.clone();
        let h = apply_h(&psi, &ctx).unwrap();
        let x = x0();
        let mut factor = -0.5 * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        for (j, kk, _) in PAIRS {
            factor += a * (a + 1.0) * lat.wp(x[j] - x[kk]).unwrap();
        }
        assert!((h.components[0].value() - factor * wave.value()).norm() < 1e-12);
        assert!(h.components[1..].iter().all(|j| j.value() == c(0.0)));
    }

    #[test]
    fn phi_decomposition_matches_product() {
        let lat = lattice();
        for triple in ORDERED_TRIPLES {
            let dec = phi_decompose(x0(), triple, &lat).unwrap();
            for alpha in [Complex64::new(0.23, 0.11), Complex64::new(-0.6, 0.4)] {
                let direct = phi_product(x0(), triple, alpha, &lat).unwrap();
                let rebuilt = dec.reconstruct(alpha, &lat).unwrap();
                assert!((direct - rebuilt).norm() < 1e-10 * direct.norm().max(1.0));
            }
        }
    }

    #[test]
    fn psi_is_odd_under_transposition() {
        let lat = lattice();
        let a = phi_decompose(x0(), (0, 1, 2), &lat).unwrap();
        let b = phi_decompose(x0(), (1, 0, 2), &lat).unwrap();
        assert!((a.psi + b.psi).norm() < 1e-12);
    }

    #[test]
    fn coincident_coordinates_rejected() {
        let ctx = CouplingContext::new(1.0, lattice()).unwrap();
        let x = [c(0.2), c(0.2), c(-0.3)];
        let psi = SpinField::from_fn(|_| Jet::constant(x, 3, c(1.0)));
        assert!(matches!(
            apply_h(&psi, &ctx),
            Err(Error::CoincidentCoordinates { pair: (0, 1) })
        ));
    }

    #[test]
    fn degree_requirements() {
        let ctx = CouplingContext::new(1.0, lattice()).unwrap();
        let psi = SpinField::from_fn(|_| Jet::constant(x0(), 4, c(1.0)));
        assert!(matches!(
            commutator(Operator::Hamiltonian, Operator::J1, &psi, &ctx),
            Err(Error::InsufficientDegree { needed: 5, available: 4 })
        ));
        assert!(matches!(
            apply_j1(&SpinField::from_fn(|_| Jet::constant(x0(), 2, c(1.0))), &ctx),
            Err(Error::InsufficientDegree { needed: 3, available: 2 })
        ));
    }

    #[test]
    fn hamiltonian_commutes_with_itself() {
        let lat = lattice();
        let ctx = CouplingContext::new(1.7, lat.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = random_test_state(&mut rng, x0(), 4, &lat).unwrap();
        let r = commutator(Operator::Hamiltonian, Operator::Hamiltonian, &psi, &ctx).unwrap();
        assert_eq!(r.field.max_abs(), 0.0);
    }

    #[test]
    fn zero_coupling_jspin_is_mixed_derivative() {
        let lat = lattice();
        let ctx = CouplingContext::new(0.0, lat.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi = random_test_state(&mut rng, x0(), 4, &lat).unwrap();
        let j = apply_jspin(&psi, Complex64::new(0.23, 0.11), &ctx).unwrap();
        let d = psi.partial(0, 1).unwrap().partial(1, 1).unwrap().partial(2, 1).unwrap();
        assert!(j.sub(&d).max_abs() < 1e-14 * d.max_abs());
    }

    #[test]
    fn j2_is_total_momentum_on_aligned_spins() {
        let lat = lattice();
        let ctx = CouplingContext::new(1.4, lat.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let field = random_test_state(&mut rng, x0(), 3, &lat).unwrap();
        let mut psi = SpinField::zero_jets(x0(), 3);
        psi.components[0] = field.components[0].clone();
        let j = apply_j2(&psi, &ctx).unwrap();
        let p = Operator::Momentum.apply(&psi, &ctx).unwrap().field;
        assert!(j.sub(&p).max_abs() < 1e-12 * p.max_abs());
        assert_eq!(j.components[UP_UP_DOWN].max_abs(), 0.0);
    }
}
