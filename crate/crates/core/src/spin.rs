//! Three spin-1/2 particles: the 8-dimensional spin space, the spin exchange
//! operators `S_jk`, and full particle permutations acting on coordinates and
//! spins together.
//!
//! Basis labels count in binary over `(s₁ s₂ s₃)` with `↑ = 0`, `↓ = 1`, so
//! label 1 is `|↑↑↓⟩`, label 2 is `|↑↓↑⟩` and label 4 is `|↓↑↑⟩`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jets::{Coords, Jet};

pub const DIM: usize = 8;

pub const UP_UP_DOWN: usize = 1;
pub const UP_DOWN_UP: usize = 2;
pub const DOWN_UP_UP: usize = 4;

/// Tolerance on `A + B + C` when embedding a sector state.
pub const SECTOR_TOL: f64 = 1e-10;

/// Spin of particle `i` (0-based) in basis label `label`: 0 for ↑, 1 for ↓.
pub fn spin_of(label: usize, particle: usize) -> usize {
    (label >> (2 - particle)) & 1
}

pub fn label_of(spins: [usize; 3]) -> usize {
    (spins[0] << 2) | (spins[1] << 1) | spins[2]
}

/// Number of down spins; `S_z = 3/2 − downs`.
pub fn down_count(label: usize) -> usize {
    label.count_ones() as usize
}

pub fn label_name(label: usize) -> String {
    (0..3)
        .map(|i| if spin_of(label, i) == 0 { '↑' } else { '↓' })
        .collect()
}

/// A wavefunction component per spin basis label.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinField<T> {
    pub components: [T; DIM],
}

impl<T> SpinField<T> {
    pub fn from_fn(f: impl FnMut(usize) -> T) -> Self {
        Self {
            components: std::array::from_fn(f),
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SpinField<U> {
        SpinField {
            components: self.components.each_ref().map(f),
        }
    }

    pub fn try_map<U>(&self, mut f: impl FnMut(&T) -> Result<U>) -> Result<SpinField<U>> {
        let mut out = Vec::with_capacity(DIM);
        for c in &self.components {
            out.push(f(c)?);
        }
        Ok(SpinField {
            components: out.try_into().ok().expect("length is DIM"),
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.components.iter()
    }
}

impl<T: Clone> SpinField<T> {
    /// Relabels components: the output at `b` is the input at `source(b)`.
    fn relabel(&self, source: impl Fn(usize) -> usize) -> Self {
        Self::from_fn(|b| self.components[source(b)].clone())
    }
}

impl SpinField<Complex64> {
    pub fn zero() -> Self {
        Self::from_fn(|_| Complex64::new(0.0, 0.0))
    }

    /// A single basis state.
    pub fn basis(label: usize) -> Self {
        Self::from_fn(|b| Complex64::new(if b == label { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(|b| self.components[b] + other.components[b])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(|b| self.components[b] - other.components[b])
    }

    pub fn scale(&self, f: Complex64) -> Self {
        self.map(|c| c * f)
    }
}

impl SpinField<Jet> {
    pub fn zero_jets(base: Coords, degree: usize) -> Self {
        Self::from_fn(|_| Jet::zero(base, degree))
    }

    pub fn degree(&self) -> usize {
        self.components.iter().map(Jet::degree).min().unwrap_or(0)
    }

    pub fn base(&self) -> Coords {
        self.components[0].base()
    }

    pub fn values(&self) -> SpinField<Complex64> {
        self.map(Jet::value)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(Jet::max_abs).fold(0.0, f64::max)
    }

    pub fn partial(&self, dir: usize, times: usize) -> Result<Self> {
        self.try_map(|j| j.partial(dir, times))
    }

    pub fn truncate(&self, degree: usize) -> Self {
        self.map(|j| j.truncate(degree))
    }

    /// Multiplies every component by the same scalar field.
    pub fn mul_scalar(&self, f: &Jet) -> Self {
        self.map(|j| j * f)
    }

    pub fn scale(&self, f: Complex64) -> Self {
        self.map(|j| j.scale(f))
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, other: &Self, factor: Complex64) {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.add_scaled(b, factor);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(|b| &self.components[b] - &other.components[b])
    }
}

/// The exchange operator `S_jk` swapping the spins of particles `j` and `k`
/// (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PermOp {
    j: usize,
    k: usize,
}

impl PermOp {
    pub fn new(j: usize, k: usize) -> Result<Self> {
        if j == k || j > 2 || k > 2 {
            return Err(Error::InvalidInput(format!("invalid spin pair ({j}, {k})")));
        }
        Ok(Self {
            j: j.min(k),
            k: j.max(k),
        })
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.j, self.k)
    }

    /// Image of a basis label.
    pub fn target(&self, label: usize) -> usize {
        let mut s = [spin_of(label, 0), spin_of(label, 1), spin_of(label, 2)];
        s.swap(self.j, self.k);
        label_of(s)
    }

    /// The 8×8 permutation matrix, `m[row][col]`.
    pub fn matrix(&self) -> [[u8; DIM]; DIM] {
        let mut m = [[0; DIM]; DIM];
        for col in 0..DIM {
            m[self.target(col)][col] = 1;
        }
        m
    }

    pub fn apply<T: Clone>(&self, psi: &SpinField<T>) -> SpinField<T> {
        psi.relabel(|b| self.target(b))
    }
}

/// `S_jk` for a 0-based pair; panics on an invalid pair.
pub fn sjk(j: usize, k: usize) -> PermOp {
    PermOp::new(j, k).expect("valid spin pair")
}

/// Embeds sector amplitudes as `A|↑↑↓⟩ + B|↑↓↑⟩ + C|↓↑↑⟩`, requiring
/// `A + B + C = 0`.
pub fn sector_embed(a: Complex64, b: Complex64, c: Complex64) -> Result<SpinField<Complex64>> {
    let scale = a.norm().max(b.norm()).max(c.norm());
    let residual = (a + b + c).norm();
    if residual > SECTOR_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::SectorConstraint { residual });
    }
    let mut f = SpinField::zero();
    f.components[UP_UP_DOWN] = a;
    f.components[UP_DOWN_UP] = b;
    f.components[DOWN_UP_UP] = c;
    Ok(f)
}

/// Jet version of [`sector_embed`]; the constraint is checked coefficient-wise.
pub fn sector_embed_jets(a: Jet, b: Jet, c: Jet) -> Result<SpinField<Jet>> {
    let sum = a.try_add(&b)?.try_add(&c)?;
    let scale = a.max_abs().max(b.max_abs()).max(c.max_abs());
    let residual = sum.max_abs();
    if residual > SECTOR_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::SectorConstraint { residual });
    }
    let (base, degree) = (a.base(), a.degree().min(b.degree()).min(c.degree()));
    let mut f = SpinField::zero_jets(base, degree);
    f.components[UP_UP_DOWN] = a;
    f.components[UP_DOWN_UP] = b;
    f.components[DOWN_UP_UP] = c;
    Ok(f)
}

/// A permutation `π` of the three particles, stored as `map[i] = π(i)`.
///
/// It acts on wavefunctions by `(Π_π ψ)(x, s) = ψ(x∘π, s∘π)` with
/// `(x∘π)_i = x_{π(i)}`, so that `Π_σ Π_τ = Π_{σ∘τ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParticlePerm {
    map: [usize; 3],
}

impl ParticlePerm {
    pub fn new(map: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &m in &map {
            if m > 2 || seen[m] {
                return Err(Error::InvalidInput(format!("{map:?} is not a permutation")));
            }
            seen[m] = true;
        }
        Ok(Self { map })
    }

    pub const fn identity() -> Self {
        Self { map: [0, 1, 2] }
    }

    /// `Π_ij` for 0-based `i ≠ j`.
    pub fn transposition(i: usize, j: usize) -> Self {
        let mut map = [0, 1, 2];
        map.swap(i, j);
        Self { map }
    }

    /// All six permutations, identity first.
    pub fn all() -> [Self; 6] {
        [
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ]
        .map(|map| Self { map })
    }

    pub fn map(&self) -> [usize; 3] {
        self.map
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            map: other.map.map(|i| self.map[i]),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut map = [0; 3];
        for i in 0..3 {
            map[self.map[i]] = i;
        }
        Self { map }
    }

    pub fn order(&self) -> usize {
        let mut p = *self;
        let mut n = 1;
        while p != Self::identity() {
            p = p.compose(self);
            n += 1;
        }
        n
    }

    pub fn is_odd(&self) -> bool {
        let m = self.map;
        let inversions = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i] > m[j])
            .count();
        inversions % 2 == 1
    }

    /// `x∘π`.
    pub fn permute_coords(&self, x: Coords) -> Coords {
        self.map.map(|i| x[i])
    }

    fn spin_source(&self, label: usize) -> usize {
        label_of(self.map.map(|i| spin_of(label, i)))
    }

    /// Acts on the spin labels only.
    pub fn apply_spins<T: Clone>(&self, psi: &SpinField<T>) -> SpinField<T> {
        psi.relabel(|b| self.spin_source(b))
    }

    /// `(Π_π ψ)(x)` for a wavefunction given as a pointwise evaluator.
    pub fn apply_at<F>(&self, psi: F, x: Coords) -> Result<SpinField<Complex64>>
    where
        F: Fn(Coords) -> Result<SpinField<Complex64>>,
    {
        Ok(self.apply_spins(&psi(self.permute_coords(x))?))
    }

    /// Jet version of [`ParticlePerm::apply_at`]: `psi` returns the jet field
    /// about its argument.
    pub fn apply_jets<F>(&self, psi: F, x: Coords) -> Result<SpinField<Jet>>
    where
        F: Fn(Coords) -> Result<SpinField<Jet>>,
    {
        let inner = psi(self.permute_coords(x))?;
        let moved = inner.map(|j| j.compose_permutation(self.map));
        Ok(self.apply_spins(&moved))
    }
}

/// Coordinate-and-spin permutation applied to a pointwise evaluator.
pub fn coordinate_permutation<F>(pi: ParticlePerm, psi: F, x: Coords) -> Result<SpinField<Complex64>>
where
    F: Fn(Coords) -> Result<SpinField<Complex64>>,
{
    pi.apply_at(psi, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn field_from(v: [f64; 8]) -> SpinField<Complex64> {
        SpinField::from_fn(|b| c(v[b]))
    }

    #[test]
    fn exchange_on_basis_states() {
        let s12 = sjk(0, 1);
        let s23 = sjk(1, 2);
        assert_eq!(s12.apply(&SpinField::basis(UP_UP_DOWN)), SpinField::basis(UP_UP_DOWN));
        assert_eq!(s23.apply(&SpinField::basis(UP_UP_DOWN)), SpinField::basis(UP_DOWN_UP));
        assert_eq!(label_name(UP_DOWN_UP), "↑↓↑");
    }

    #[test]
    fn singlet_pair_has_eigenvalue_minus_one() {
        // (↑↓ − ↓↑) ⊗ ↑
        let psi = SpinField::basis(label_of([0, 1, 0])).sub(&SpinField::basis(label_of([1, 0, 0])));
        let s = sjk(0, 1).apply(&psi);
        assert_eq!(s, psi.scale(c(-1.0)));
    }

    #[test]
    fn coupling_eigenvalues_on_pair_states() {
        for a in [0.3, 1.0, 2.7] {
            let sym = SpinField::basis(label_of([0, 1, 1])).add(&SpinField::basis(label_of([1, 0, 1])));
            let anti = SpinField::basis(label_of([0, 1, 1])).sub(&SpinField::basis(label_of([1, 0, 1])));
            let aligned = SpinField::basis(label_of([0, 0, 1]));
            let coupling = |psi: &SpinField<Complex64>| psi.scale(c(a * a)).add(&sjk(0, 1).apply(psi).scale(c(a)));
            assert_eq!(coupling(&sym), sym.scale(c(a * (a + 1.0))));
            assert_eq!(coupling(&aligned), aligned.scale(c(a * (a + 1.0))));
            assert_eq!(coupling(&anti), anti.scale(c(a * (a - 1.0))));
        }
    }

    #[test]
    fn symmetric_group_relations() {
        let s12 = sjk(0, 1);
        let s23 = sjk(1, 2);
        let psi = field_from([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        for s in [s12, s23, sjk(0, 2)] {
            assert_eq!(s.apply(&s.apply(&psi)), psi);
            let m = s.matrix();
            for row in m {
                assert_eq!(row.iter().map(|&x| x as u32).sum::<u32>(), 1);
            }
        }
        let lhs = s12.apply(&s23.apply(&s12.apply(&psi)));
        let rhs = s23.apply(&s12.apply(&s23.apply(&psi)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exchange_preserves_sz_grading() {
        for s in [sjk(0, 1), sjk(1, 2), sjk(0, 2)] {
            for b in 0..DIM {
                assert_eq!(down_count(s.target(b)), down_count(b));
            }
        }
    }

    #[test]
    fn sector_embedding_checks_constraint() {
        assert!(sector_embed(c(1.0), c(-1.0), c(0.0)).is_ok());
        assert!(matches!(
            sector_embed(c(1.0), c(1.0), c(1.0)),
            Err(Error::SectorConstraint { .. })
        ));
    }

    #[test]
    fn particle_permutations() {
        let p12 = ParticlePerm::transposition(0, 1);
        let p23 = ParticlePerm::transposition(1, 2);
        assert_eq!(p12.compose(&p12), ParticlePerm::identity());
        assert_eq!(p12.compose(&p23).order(), 3);
        assert!(p12.is_odd());
        assert!(!p12.compose(&p23).is_odd());
        assert_eq!(p12.compose(&p23).inverse().compose(&p12.compose(&p23)), ParticlePerm::identity());
    }

    #[test]
    fn particle_swap_on_sector_state() {
        // ψ(x) = A(x)|↑↑↓⟩ + B(x)|↑↓↑⟩ + C(x)|↓↑↑⟩ with A = x1, B = x2, C = −x1 − x2
        let psi = |x: Coords| sector_embed(x[0], x[1], -x[0] - x[1]);
        let x = [c(0.3), c(-0.2), c(0.9)];
        let out = coordinate_permutation(ParticlePerm::transposition(0, 1), psi, x).unwrap();
        // Π₁₂ swaps |↑↓↑⟩ ↔ |↓↑↑⟩ and evaluates at (x2, x1, x3)
        assert_eq!(out.components[UP_UP_DOWN], x[1]);
        assert_eq!(out.components[UP_DOWN_UP], -x[1] - x[0]);
        assert_eq!(out.components[DOWN_UP_UP], x[0]);
    }

    #[test]
    fn particle_action_is_a_homomorphism() {
        let psi = |x: Coords| -> Result<SpinField<Complex64>> {
            Ok(SpinField::from_fn(|b| (x[0] * (b as f64 + 1.0) + x[1] * x[1] * 0.5 - x[2] * (b as f64)).exp()))
        };
        let x = [c(0.1), c(0.4), c(-0.3)];
        let s = ParticlePerm::transposition(0, 1);
        let t = ParticlePerm::transposition(1, 2);
        let inner = |y: Coords| t.apply_at(psi, y);
        let nested = s.apply_at(inner, x).unwrap();
        let direct = s.compose(&t).apply_at(psi, x).unwrap();
        assert_eq!(nested, direct);
    }
}
