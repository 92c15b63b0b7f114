//! Weierstrass elliptic functions on an arbitrary period lattice.
//!
//! The production path evaluates `σ`, `ζ`, `℘` and `℘′` through the Jacobi
//! theta function `θ₁` and its logarithmic derivatives, expanded in the nome
//! `q = exp(iπω₂/ω₁)`. Arguments are first reduced into the fundamental cell
//! centred at the origin; the exact quasi-periodicity multipliers of `σ` and
//! the additive shifts of `ζ` are reapplied afterwards.
//!
//! Derivative jets are generated from the algebraic differential equation
//! `℘″ = 6℘² − g₂/2`, never from finite differences.
//!
//! An independent row-summed lattice-sum evaluator lives in [`oracle`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hard cap on the number of q-series terms.
pub const SERIES_CAP: usize = 200;
/// Relative size of the last retained series term.
pub const SERIES_EPS: f64 = 1e-16;
/// Pole guard radius, relative to `|ω₁|`.
pub const POLE_GUARD: f64 = 1e-12;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// The period lattice `Λ = 2ω₁ℤ + 2ω₂ℤ` together with its derived constants.
///
/// Construction normalizes the half-periods so that `Im(ω₂/ω₁) > 0`. A
/// `Lattice` is immutable once built.
#[derive(Debug, Clone)]
pub struct Lattice {
    omega1: Complex64,
    omega2: Complex64,
    tau: Complex64,
    q: Complex64,
    eta1: Complex64,
    eta2: Complex64,
    g2: Complex64,
    g3: Complex64,
    /// `q^{2n} / (1 - q^{2n})` for `n = 1, 2, ...`
    lambert: Vec<Complex64>,
    /// `(-1)^n q^{n(n+1)}` for `n = 0, 1, ...` (θ₁ coefficients with `2q^{1/4}` removed).
    theta: Vec<Complex64>,
    theta_prime0: Complex64,
}

/// A function value with its derivatives `d⁰..dᴰ` at the evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticValue {
    pub value: Complex64,
    pub derivatives: Vec<Complex64>,
}

impl EllipticValue {
    fn from_taylor(coeffs: Vec<Complex64>) -> Self {
        let mut factorial = 1.0;
        let derivatives: Vec<Complex64> = coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n > 0 {
                    factorial *= n as f64;
                }
                c * factorial
            })
            .collect();
        Self {
            value: derivatives[0],
            derivatives,
        }
    }

    /// Taylor coefficients `dⁿ/n!`.
    pub fn taylor(&self) -> Vec<Complex64> {
        let mut factorial = 1.0;
        self.derivatives
            .iter()
            .enumerate()
            .map(|(n, d)| {
                if n > 0 {
                    factorial *= n as f64;
                }
                d / factorial
            })
            .collect()
    }

    pub fn order(&self) -> usize {
        self.derivatives.len() - 1
    }
}

/// An argument split as `z = z₀ + 2(mω₁ + nω₂)` with `z₀` in the central cell.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    z0: Complex64,
    m: i64,
    n: i64,
}

/// Logarithmic derivatives of θ₁ at `v`: `θ′/θ`, `-(log θ)″` and its derivative.
struct LogTheta {
    first: Complex64,
    second: Complex64,
    third: Complex64,
}

impl Lattice {
    /// Builds the lattice with half-periods `ω₁`, `ω₂`.
    ///
    /// `ω₂` is negated when needed so that `Im(ω₂/ω₁) > 0`; the lattice itself
    /// is unchanged by this.
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        let degenerate = |reason| Error::DegenerateLattice {
            omega1,
            omega2,
            reason,
        };
        if !(omega1.is_finite() && omega2.is_finite()) {
            return Err(degenerate("non-finite half-period"));
        }
        if omega1.norm() == 0.0 || omega2.norm() == 0.0 {
            return Err(degenerate("zero half-period"));
        }
        let mut tau = omega2 / omega1;
        if tau.im.abs() <= 1e-12 * tau.norm() {
            return Err(degenerate("collinear half-periods"));
        }
        let mut omega2 = omega2;
        if tau.im < 0.0 {
            tau = -tau;
            omega2 = -omega2;
        }
        let q = (I * PI * tau).exp();
        let qa = q.norm();
        if qa >= 1.0 - 1e-9 {
            return Err(degenerate("nome too close to the unit circle"));
        }

        // Each Lambert term is bounded by |q|^n inside the central cell.
        let mut lambert = Vec::new();
        let q2 = q * q;
        let mut q2n = Complex64::new(1.0, 0.0);
        for n in 1..=SERIES_CAP {
            q2n *= q2;
            lambert.push(q2n / (1.0 - q2n));
            if qa.powi(n as i32) * (n * n) as f64 <= 1e-18 {
                break;
            }
        }
        let mut theta = Vec::new();
        for n in 0..SERIES_CAP {
            let e = (n * (n + 1)) as f64;
            let c = (I * PI * tau * e).exp() * if n % 2 == 0 { 1.0 } else { -1.0 };
            theta.push(c);
            let bound = qa.powf(e - (2 * n + 1) as f64 / 2.0);
            if bound <= 1e-18 && n > 0 {
                break;
            }
        }
        let theta_prime0 = theta
            .iter()
            .enumerate()
            .map(|(n, c)| c * (2 * n + 1) as f64)
            .sum();

        let (mut e2, mut e4, mut e6) = (
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        );
        for (i, l) in lambert.iter().enumerate() {
            let n = (i + 1) as f64;
            e2 -= 24.0 * n * l;
            e4 += 240.0 * n.powi(3) * l;
            e6 -= 504.0 * n.powi(5) * l;
        }
        let eta1 = PI * PI * e2 / (12.0 * omega1);
        let two_omega1 = 2.0 * omega1;
        let g2 = 4.0 * PI.powi(4) / 3.0 * e4 / two_omega1.powi(4);
        let g3 = 8.0 * PI.powi(6) / 27.0 * e6 / two_omega1.powi(6);

        let mut lat = Self {
            omega1,
            omega2,
            tau,
            q,
            eta1,
            eta2: Complex64::new(0.0, 0.0),
            g2,
            g3,
            lambert,
            theta,
            theta_prime0,
        };
        // ζ(ω₂) from the series at the edge of the central cell; the Legendre
        // relation is then a genuine consistency check rather than a definition.
        let v = PI * omega2 / two_omega1;
        lat.eta2 = eta1 * omega2 / omega1 + PI / two_omega1 * lat.log_theta(v).first;
        Ok(lat)
    }

    pub fn omega1(&self) -> Complex64 {
        self.omega1
    }
    pub fn omega2(&self) -> Complex64 {
        self.omega2
    }
    /// Period ratio `ω₂/ω₁` with positive imaginary part.
    pub fn tau(&self) -> Complex64 {
        self.tau
    }
    /// Nome `exp(iπτ)`.
    pub fn nome(&self) -> Complex64 {
        self.q
    }
    /// `η₁ = ζ(ω₁)`.
    pub fn eta1(&self) -> Complex64 {
        self.eta1
    }
    /// `η₂ = ζ(ω₂)`.
    pub fn eta2(&self) -> Complex64 {
        self.eta2
    }
    pub fn g2(&self) -> Complex64 {
        self.g2
    }
    pub fn g3(&self) -> Complex64 {
        self.g3
    }

    /// `η₁ω₂ − η₂ω₁ − iπ/2`; zero for a consistent lattice.
    pub fn legendre_defect(&self) -> Complex64 {
        self.eta1 * self.omega2 - self.eta2 * self.omega1 - I * PI / 2.0
    }

    /// The lattice point `2(mω₁ + nω₂)`.
    pub fn point(&self, m: i64, n: i64) -> Complex64 {
        2.0 * (self.omega1 * m as f64 + self.omega2 * n as f64)
    }

    /// Real coordinates `(s, t)` with `z = 2ω₁s + 2ω₂t`.
    pub fn cell_coords(&self, z: Complex64) -> (f64, f64) {
        let w = z / (2.0 * self.omega1);
        let t = w.im / self.tau.im;
        (w.re - t * self.tau.re, t)
    }

    /// Reduces `z` into the central cell `s, t ∈ [-1/2, 1/2)`.
    pub fn reduce(&self, z: Complex64) -> Complex64 {
        self.split(z).z0
    }

    /// Distance from `z` to the nearest lattice point, with that point.
    pub fn nearest_point(&self, z: Complex64) -> (f64, Complex64) {
        let (s, t) = self.cell_coords(z);
        let (m0, n0) = (s.round() as i64, t.round() as i64);
        let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
        for dm in -1..=1 {
            for dn in -1..=1 {
                let p = self.point(m0 + dm, n0 + dn);
                let d = (z - p).norm();
                if d < best.0 {
                    best = (d, p);
                }
            }
        }
        best
    }

    /// True if `z` is within `tol·|ω₁|` of a lattice point.
    pub fn is_near_lattice(&self, z: Complex64, tol: f64) -> bool {
        self.nearest_point(z).0 < tol * self.omega1.norm()
    }

    fn split(&self, z: Complex64) -> Reduced {
        let (s, t) = self.cell_coords(z);
        let m = s.round() as i64;
        let n = t.round() as i64;
        Reduced {
            z0: z - self.point(m, n),
            m,
            n,
        }
    }

    fn pole_check(&self, z: Complex64) -> Result<Reduced> {
        let r = self.split(z);
        if r.z0.norm() < POLE_GUARD * self.omega1.norm() {
            return Err(Error::Pole {
                z,
                lattice_point: self.point(r.m, r.n),
            });
        }
        Ok(r)
    }

    fn log_theta(&self, v: Complex64) -> LogTheta {
        let (s, c) = (v.sin(), v.cos());
        let cot = c / s;
        let csc2 = 1.0 / (s * s);
        let mut first = cot;
        let mut second = csc2;
        let mut third = -2.0 * cot * csc2;
        let growth = (2.0 * v.im.abs()).exp();
        let mut g = 1.0;
        for (i, l) in self.lambert.iter().enumerate() {
            let n = (i + 1) as f64;
            g *= growth;
            let arg = 2.0 * n * v;
            let (sn, cs) = (arg.sin(), arg.cos());
            first += 4.0 * l * sn;
            second -= 8.0 * n * l * cs;
            third += 16.0 * n * n * l * sn;
            let bound = l.norm() * g * n * n;
            if bound < SERIES_EPS * first.norm().min(second.norm()).min(third.norm()) {
                break;
            }
        }
        LogTheta {
            first,
            second,
            third,
        }
    }

    /// `θ₁(v)/θ₁′(0)` from the nome series.
    fn theta_ratio(&self, v: Complex64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (n, c) in self.theta.iter().enumerate() {
            let k = (2 * n + 1) as f64;
            sum += c * (k * v).sin();
            let bound = c.norm() * (k * v.im.abs()).exp();
            if n > 0 && bound < SERIES_EPS * sum.norm() {
                break;
            }
        }
        sum / self.theta_prime0
    }

    /// Weierstrass `℘(z)`.
    pub fn wp(&self, z: Complex64) -> Result<Complex64> {
        let r = self.pole_check(z)?;
        let k = PI / (2.0 * self.omega1);
        Ok(-self.eta1 / self.omega1 + k * k * self.log_theta(k * r.z0).second)
    }

    /// `℘′(z)`.
    pub fn wp_prime(&self, z: Complex64) -> Result<Complex64> {
        let r = self.pole_check(z)?;
        let k = PI / (2.0 * self.omega1);
        Ok(k * k * k * self.log_theta(k * r.z0).third)
    }

    /// `℘(z)` and `℘′(z)` from a single series pass.
    pub fn wp_pair(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let r = self.pole_check(z)?;
        let k = PI / (2.0 * self.omega1);
        let lt = self.log_theta(k * r.z0);
        Ok((-self.eta1 / self.omega1 + k * k * lt.second, k * k * k * lt.third))
    }

    /// Weierstrass `ζ(z)`.
    pub fn zeta(&self, z: Complex64) -> Result<Complex64> {
        let r = self.pole_check(z)?;
        let k = PI / (2.0 * self.omega1);
        let z0 = self.eta1 * r.z0 / self.omega1 + k * self.log_theta(k * r.z0).first;
        Ok(z0 + 2.0 * (self.eta1 * r.m as f64 + self.eta2 * r.n as f64))
    }

    /// Weierstrass `σ(z)`; entire.
    pub fn sigma(&self, z: Complex64) -> Complex64 {
        let r = self.split(z);
        if r.z0.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let two_omega1 = 2.0 * self.omega1;
        let v = PI * r.z0 / two_omega1;
        let base = two_omega1 / PI
            * (self.eta1 * r.z0 * r.z0 / two_omega1).exp()
            * self.theta_ratio(v);
        if r.m == 0 && r.n == 0 {
            return base;
        }
        let (m, n) = (r.m, r.n);
        let half = self.omega1 * m as f64 + self.omega2 * n as f64;
        let eta = self.eta1 * m as f64 + self.eta2 * n as f64;
        let sign = if (m + n + m * n).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        sign * (2.0 * eta * (r.z0 + half)).exp() * base
    }

    /// Taylor coefficients of `℘` at `z` up to `order`.
    fn wp_taylor(&self, z: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let (p, dp) = self.wp_pair(z)?;
        let mut c = vec![Complex64::new(0.0, 0.0); order + 1];
        c[0] = p;
        if order >= 1 {
            c[1] = dp;
        }
        for n in 0..order.saturating_sub(1) {
            let mut conv: Complex64 = (0..=n).map(|k| c[k] * c[n - k]).sum();
            conv *= 6.0;
            if n == 0 {
                conv -= self.g2 / 2.0;
            }
            c[n + 2] = conv / ((n + 2) * (n + 1)) as f64;
        }
        Ok(c)
    }

    /// Derivatives `℘, ℘′, …, ℘⁽ᵒʳᵈᵉʳ⁾` at `z`.
    pub fn wp_jet(&self, z: Complex64, order: usize) -> Result<EllipticValue> {
        Ok(EllipticValue::from_taylor(self.wp_taylor(z, order)?))
    }

    /// Derivatives of `ζ` at `z`, using `ζ′ = −℘`.
    pub fn zeta_jet(&self, z: Complex64, order: usize) -> Result<EllipticValue> {
        Ok(EllipticValue::from_taylor(self.zeta_taylor(z, order)?))
    }

    pub(crate) fn zeta_taylor(&self, z: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let mut d = Vec::with_capacity(order + 1);
        d.push(self.zeta(z)?);
        if order > 0 {
            let c = self.wp_taylor(z, order - 1)?;
            d.extend(c.iter().enumerate().map(|(n, cn)| -cn / (n + 1) as f64));
        }
        Ok(d)
    }

    /// Derivatives of `σ` at an off-lattice `z`, using `σ′ = ζσ`.
    pub fn sigma_jet(&self, z: Complex64, order: usize) -> Result<EllipticValue> {
        Ok(EllipticValue::from_taylor(self.sigma_taylor(z, order)?))
    }

    pub(crate) fn sigma_taylor(&self, z: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let d = self.zeta_taylor(z, order)?;
        Ok(exp_integral_taylor(self.sigma(z), &d))
    }

    /// Taylor coefficients of `σ(u + shift)/σ(u)` at `u = z`.
    pub(crate) fn sigma_ratio_taylor(
        &self,
        z: Complex64,
        shift: Complex64,
        order: usize,
    ) -> Result<Vec<Complex64>> {
        let num = self.zeta_taylor(z + shift, order)?;
        let den = self.zeta_taylor(z, order)?;
        let log_deriv: Vec<Complex64> = num.iter().zip(&den).map(|(a, b)| a - b).collect();
        let value = self.sigma(z + shift) / self.sigma(z);
        Ok(exp_integral_taylor(value, &log_deriv))
    }

    /// Residual `ζ(x)+ζ(y)+ζ(z)−ζ(x+y+z) − σ(x+y)σ(y+z)σ(z+x)/[σ(x)σ(y)σ(z)σ(x+y+z)]`.
    ///
    /// When a pairwise sum hits the lattice the right-hand side is the exact
    /// zero of `σ` and the left-hand side cancels identically.
    pub fn zeta_addition_check(
        &self,
        x: Complex64,
        y: Complex64,
        z: Complex64,
    ) -> Result<Complex64> {
        let s = x + y + z;
        let lhs = self.zeta(x)? + self.zeta(y)? + self.zeta(z)? - self.zeta(s)?;
        let guard = POLE_GUARD;
        if [x + y, y + z, z + x]
            .iter()
            .any(|w| self.is_near_lattice(*w, guard))
        {
            return Ok(lhs);
        }
        let rhs = self.sigma(x + y) * self.sigma(y + z) * self.sigma(z + x)
            / (self.sigma(x) * self.sigma(y) * self.sigma(z) * self.sigma(s));
        Ok(lhs - rhs)
    }
}

/// Taylor coefficients of `F` with `F′ = g·F` and `F(0) = value`, where `g` is
/// given by its Taylor coefficients `d` (the length of `d` sets the order).
fn exp_integral_taylor(value: Complex64, d: &[Complex64]) -> Vec<Complex64> {
    let order = d.len() - 1;
    let mut s = vec![Complex64::new(0.0, 0.0); order + 1];
    s[0] = value;
    for n in 0..order {
        let acc: Complex64 = (0..=n).map(|k| d[k] * s[n - k]).sum();
        s[n + 1] = acc / (n + 1) as f64;
    }
    s
}

/// Lattice-sum reference evaluators.
///
/// These sum the defining lattice series row by row: each row `ω = 2ω₁(m + nτ)`
/// with fixed `n` is summed over all `m` in closed form (the partial-fraction
/// expansions of `π cot`, `π² csc²` and the product for `sin`), and the rows
/// are added for `|n| ≤ rows` until the row contribution drops below `1e-18` of
/// the running sum. This shares no code with the theta-series path above.
pub mod oracle {
    use super::{Complex64, Lattice, I, PI};

    /// Default number of rows on either side of the real axis.
    pub const DEFAULT_ROWS: usize = 80;

    /// `cot w`, stable for large `|Im w|`.
    fn cot(w: Complex64) -> Complex64 {
        if w.im >= 0.0 {
            let e = (2.0 * I * w).exp();
            I * (e + 1.0) / (e - 1.0)
        } else {
            let e = (-2.0 * I * w).exp();
            I * (1.0 + e) / (1.0 - e)
        }
    }

    fn csc2(w: Complex64) -> Complex64 {
        let c = cot(w);
        1.0 + c * c
    }

    /// `sin(π(c − u))/sin(πc)`, stable for large `|Im c|`.
    fn sin_ratio(c: Complex64, u: Complex64) -> Complex64 {
        if c.im >= 0.0 {
            (I * PI * u).exp() * (1.0 - (2.0 * I * PI * (c - u)).exp())
                / (1.0 - (2.0 * I * PI * c).exp())
        } else {
            (-I * PI * u).exp() * (1.0 - (-2.0 * I * PI * (c - u)).exp())
                / (1.0 - (-2.0 * I * PI * c).exp())
        }
    }

    /// Coefficients of `P_k` in `Σ_m (u+m)^{-k} = π^k P_k(cot πu)`.
    fn cot_power_poly(k: usize) -> Vec<f64> {
        // P_2 = 1 + c², P_{k+1} = (1 + c²) P_k′ / k
        let mut p = vec![1.0, 0.0, 1.0];
        for j in 2..k {
            let dp: Vec<f64> = (1..p.len()).map(|i| i as f64 * p[i]).collect();
            let mut next = vec![0.0; dp.len() + 2];
            for (i, c) in dp.iter().enumerate() {
                next[i] += c / j as f64;
                next[i + 2] += c / j as f64;
            }
            p = next;
        }
        p
    }

    fn row_power_sum(k: usize, c: Complex64) -> Complex64 {
        let poly = cot_power_poly(k);
        let x = cot(PI * c);
        let mut acc = Complex64::new(0.0, 0.0);
        for coef in poly.iter().rev() {
            acc = acc * x + coef;
        }
        acc * PI.powi(k as i32)
    }

    fn sum_rows(rows: usize, mut row: impl FnMut(f64) -> Complex64, mut total: Complex64) -> Complex64 {
        for n in 1..=rows {
            let r = row(n as f64) + row(-(n as f64));
            total += r;
            if n > 2 && r.norm() < 1e-18 * total.norm() {
                break;
            }
        }
        total
    }

    /// `G_k = Σ′ ω^{-k}` over `Λ`, for even `k ≥ 4`.
    pub fn eisenstein(lat: &Lattice, k: usize, rows: usize) -> Complex64 {
        let tau = lat.tau();
        let zeta_k = match k {
            4 => PI.powi(4) / 90.0,
            6 => PI.powi(6) / 945.0,
            8 => PI.powi(8) / 9450.0,
            _ => panic!("eisenstein oracle supports k = 4, 6, 8"),
        };
        let g = sum_rows(rows, |n| row_power_sum(k, n * tau), Complex64::new(2.0 * zeta_k, 0.0));
        g / (2.0 * lat.omega1()).powi(k as i32)
    }

    pub fn g2(lat: &Lattice, rows: usize) -> Complex64 {
        60.0 * eisenstein(lat, 4, rows)
    }

    pub fn g3(lat: &Lattice, rows: usize) -> Complex64 {
        140.0 * eisenstein(lat, 6, rows)
    }

    /// `℘(z) = z⁻² + Σ′[(z−ω)⁻² − ω⁻²]`.
    pub fn wp(lat: &Lattice, z: Complex64, rows: usize) -> Complex64 {
        let tau = lat.tau();
        let u = z / (2.0 * lat.omega1());
        let row0 = PI * PI * (csc2(PI * u) - 1.0 / 3.0);
        let total = sum_rows(
            rows,
            |n| PI * PI * (csc2(PI * (u - n * tau)) - csc2(PI * n * tau)),
            row0,
        );
        total / (2.0 * lat.omega1()).powi(2)
    }

    /// `℘′(z) = −2 Σ (z−ω)⁻³`.
    pub fn wp_prime(lat: &Lattice, z: Complex64, rows: usize) -> Complex64 {
        let tau = lat.tau();
        let u = z / (2.0 * lat.omega1());
        let row = |v: Complex64| PI.powi(3) * csc2(PI * v) * cot(PI * v);
        let total = sum_rows(rows, |n| row(u - n * tau), row(u));
        -2.0 * total / (2.0 * lat.omega1()).powi(3)
    }

    /// `ζ(z) = z⁻¹ + Σ′[(z−ω)⁻¹ + ω⁻¹ + zω⁻²]`.
    pub fn zeta(lat: &Lattice, z: Complex64, rows: usize) -> Complex64 {
        let tau = lat.tau();
        let u = z / (2.0 * lat.omega1());
        let row0 = PI * cot(PI * u) + u * PI * PI / 3.0;
        let total = sum_rows(
            rows,
            |n| {
                let c = n * tau;
                PI * cot(PI * (u - c)) + PI * cot(PI * c) + u * PI * PI * csc2(PI * c)
            },
            row0,
        );
        total / (2.0 * lat.omega1())
    }

    /// `σ(z) = z Π′ (1 − z/ω) exp(z/ω + z²/2ω²)`.
    pub fn sigma(lat: &Lattice, z: Complex64, rows: usize) -> Complex64 {
        let tau = lat.tau();
        let u = z / (2.0 * lat.omega1());
        let mut prod = (PI * u).sin() / PI * (PI * PI * u * u / 6.0).exp();
        for n in 1..=rows {
            let mut factor = Complex64::new(1.0, 0.0);
            for c in [n as f64 * tau, -(n as f64) * tau] {
                factor *= sin_ratio(c, u)
                    * (u * PI * cot(PI * c) + 0.5 * u * u * PI * PI * csc2(PI * c)).exp();
            }
            prod *= factor;
            if n > 2 && (factor - 1.0).norm() < 1e-18 {
                break;
            }
        }
        2.0 * lat.omega1() * prod
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn square_lattice_is_lemniscatic() {
        let lat = Lattice::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert!(lat.g3().norm() < 1e-12 * lat.g2().norm());
        assert!(lat.g2().im.abs() < 1e-12);
    }

    #[test]
    fn orientation_is_normalized() {
        let a = Lattice::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        let b = Lattice::new(c(1.0, 0.0), c(0.0, -1.0)).unwrap();
        assert_eq!(b.omega2(), c(0.0, 1.0));
        assert!(rel(a.g2(), b.g2()) < 1e-15);
        assert!(b.tau().im > 0.0);
        let z = c(0.3, 0.2);
        assert!(rel(a.wp(z).unwrap(), b.wp(z).unwrap()) < 1e-15);
    }

    #[test]
    fn degenerate_periods_rejected() {
        assert!(Lattice::new(c(0.0, 0.0), c(0.0, 1.0)).is_err());
        assert!(Lattice::new(c(1.0, 0.0), c(2.0, 0.0)).is_err());
        assert!(Lattice::new(c(1.0, 1.0), c(-2.0, -2.0)).is_err());
        assert!(Lattice::new(c(1.0, 0.0), c(f64::NAN, 1.0)).is_err());
    }

    #[test]
    fn legendre_relation() {
        for (w1, w2) in [
            (c(1.0, 0.0), c(0.0, 1.0)),
            (c(1.0, 0.0), c(0.3, 1.1)),
            (c(0.7, 0.4), c(-0.2, 1.3)),
        ] {
            let lat = Lattice::new(w1, w2).unwrap();
            assert!(lat.legendre_defect().norm() < 1e-12, "{:?}", lat.legendre_defect());
        }
    }

    #[test]
    fn sigma_is_z_near_origin() {
        let lat = Lattice::new(c(1.0, 0.0), c(0.3, 1.1)).unwrap();
        let z = c(1e-4, 0.0);
        assert!((lat.sigma(z) / z - 1.0).norm() < 1e-7);
        assert_eq!(lat.sigma(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn pole_guard_reports_lattice_point() {
        let lat = Lattice::new(c(1.0, 0.0), c(0.3, 1.1)).unwrap();
        let p = lat.point(1, -1);
        match lat.wp(p + c(1e-14, 0.0)) {
            Err(Error::Pole { lattice_point, .. }) => assert!((lattice_point - p).norm() < 1e-12),
            other => panic!("expected pole error, got {other:?}"),
        }
        assert!(lat.zeta(c(0.0, 0.0)).is_err());
        assert!(lat.wp_prime(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn quasi_periodicity() {
        let lat = Lattice::new(c(1.0, 0.0), c(0.3, 1.1)).unwrap();
        let z = c(0.21, -0.13);
        let (w1, w2) = (lat.omega1(), lat.omega2());
        let s = lat.sigma(z);
        let s1 = lat.sigma(z + 2.0 * w1);
        assert!(rel(s1, -s * (2.0 * lat.eta1() * (z + w1)).exp()) < 1e-10);
        let s2 = lat.sigma(z + 2.0 * w2);
        assert!(rel(s2, -s * (2.0 * lat.eta2() * (z + w2)).exp()) < 1e-10);
        let zt = lat.zeta(z).unwrap();
        assert!(rel(lat.zeta(z + 2.0 * w1).unwrap(), zt + 2.0 * lat.eta1()) < 1e-10);
        assert!(rel(lat.zeta(z + 2.0 * w2).unwrap(), zt + 2.0 * lat.eta2()) < 1e-10);
        assert!(rel(lat.wp(z + 2.0 * w2 - 4.0 * w1).unwrap(), lat.wp(z).unwrap()) < 1e-10);
    }

    #[test]
    fn wp_jet_matches_direct_and_ode() {
        let lat = Lattice::new(c(1.0, 0.0), c(0.3, 1.1)).unwrap();
        let z = c(0.37, 0.21);
        let jet = lat.wp_jet(z, 4).unwrap();
        let (p, dp) = lat.wp_pair(z).unwrap();
        assert!(rel(jet.derivatives[0], p) < 1e-12);
        assert!(rel(jet.derivatives[1], dp) < 1e-12);
        assert!(rel(jet.derivatives[2], 6.0 * p * p - lat.g2() / 2.0) < 1e-12);
        let h = 1e-5;
        let fd = (lat.wp(z + h).unwrap() - 2.0 * p + lat.wp(z - h).unwrap()) / (h * h);
        assert!(rel(jet.derivatives[2], fd) < 1e-6);
        let neg = lat.wp_jet(-z, 4).unwrap();
        for (k, (a, b)) in jet.derivatives.iter().zip(&neg.derivatives).enumerate() {
            let expected = if k % 2 == 0 { *a } else { -a };
            assert!(rel(*b, expected) < 1e-10, "order {k}");
        }
    }

    #[test]
    fn zeta_addition_degenerate_case_is_exact() {
        let lat = Lattice::new(c(1.0, 0.0), c(0.3, 1.1)).unwrap();
        let x = c(0.31, 0.17);
        let r = lat.zeta_addition_check(x, -x, c(0.22, -0.4)).unwrap();
        assert!(r.norm() < 1e-14);
    }

    #[test]
    fn oracle_g2_g3() {
        let lat = Lattice::new(c(1.0, 0.0), c(0.3, 1.1)).unwrap();
        assert!(rel(lat.g2(), oracle::g2(&lat, 60)) < 1e-10);
        assert!(rel(lat.g3(), oracle::g3(&lat, 60)) < 1e-10);
    }
}
