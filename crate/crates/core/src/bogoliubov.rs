//! Closed-form Bogoliubov quantities in mean-field units (`ρλ = 1`).
//!
//! Results for a general density and coupling follow by passing a potential
//! rescaled by `ρλ`.

use crate::error::{Error, Result};
use crate::model::{LatticeSpec, Momentum, Potential};
use crate::quadrature::{self, Integral, QuadratureSpec};
use crate::sum::NeumaierSum;

/// Default absolute tolerance on the omitted tail of `E_Bog`. It satisfies
/// `1e-10 · max(1, |E_Bog|)` for every potential.
pub const DEFAULT_ENERGY_TAIL_TOL: f64 = 1e-10;

/// Coefficients of the Bogoliubov rotation diagonalizing the pair `{p, -p}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoCoefficients {
    /// `|p|² + v̂(p)`
    pub a: f64,
    /// `v̂(p)`
    pub b: f64,
    /// `tanh(2β)`
    pub alpha: f64,
    pub beta: f64,
    /// `cosh(2β)`
    pub c: f64,
    /// `sinh(2β)`
    pub s: f64,
    /// Quasiparticle energy `√(A² - B²)`.
    pub e: f64,
}

impl BogoCoefficients {
    /// Coefficients for `|p|² = p_sq > 0` and `v̂(p) = vhat >= 0`.
    pub fn from_parts(p_sq: f64, vhat: f64) -> Self {
        let p = p_sq.sqrt();
        let root = (p_sq + 2.0 * vhat).sqrt();
        let e = p * root;
        // Rationalized: (A - √(A²-B²))/B without the cancellation.
        let alpha = vhat / (p_sq + vhat + p * root);
        let beta = alpha.atanh() / 2.0;
        let c = 1.0 / ((1.0 - alpha) * (1.0 + alpha)).sqrt();
        Self {
            a: p_sq + vhat,
            b: vhat,
            alpha,
            beta,
            c,
            s: alpha * c,
            e,
        }
    }

    /// `|c² - s² - 1|`.
    pub fn hyperbolic_residual(&self) -> f64 {
        ((self.c - self.s) * (self.c + self.s) - 1.0).abs()
    }
}

fn nonzero(k: &Momentum) -> Result<()> {
    if k.is_zero() {
        return Err(Error::ZeroMomentum(*k));
    }
    Ok(())
}

/// `e_p = |p| √(|p|² + 2 v̂(p))`.
pub fn dispersion(lattice: &LatticeSpec, pot: &Potential, k: &Momentum) -> Result<f64> {
    nonzero(k)?;
    let p_sq = lattice.norm_sq(k);
    let v = pot.fourier_sq(p_sq)?;
    Ok(p_sq.sqrt() * (p_sq + 2.0 * v).sqrt())
}

pub fn coefficients(lattice: &LatticeSpec, pot: &Potential, k: &Momentum) -> Result<BogoCoefficients> {
    nonzero(k)?;
    let p_sq = lattice.norm_sq(k);
    Ok(BogoCoefficients::from_parts(p_sq, pot.fourier_sq(p_sq)?))
}

/// Residuals of the three closed forms for `(c-s)²`, `s(c-s)` and
/// `2sc(c-s)²` at `|p|² = p_sq`.
pub fn identity_residuals_at(p_sq: f64, vhat: f64) -> [f64; 3] {
    let co = BogoCoefficients::from_parts(p_sq, vhat);
    let p = p_sq.sqrt();
    let root = (p_sq + 2.0 * vhat).sqrt();
    let cms = co.c - co.s;
    [
        (cms * cms - p / root).abs(),
        (co.s * cms - vhat / (p_sq + 2.0 * vhat + p * root)).abs(),
        (2.0 * co.s * co.c * cms * cms - vhat / (p_sq + 2.0 * vhat)).abs(),
    ]
}

pub fn identity_residuals(lattice: &LatticeSpec, pot: &Potential, k: &Momentum) -> Result<[f64; 3]> {
    nonzero(k)?;
    let p_sq = lattice.norm_sq(k);
    Ok(identity_residuals_at(p_sq, pot.fourier_sq(p_sq)?))
}

/// `A - √(A² - B²)` as displayed, with `√(A²-B²)` written as `|p|√(|p|²+2v̂)`.
fn summand_direct(p_sq: f64, v: f64) -> f64 {
    p_sq + v - p_sq.sqrt() * (p_sq + 2.0 * v).sqrt()
}

/// The same quantity as `B² / (A + √(A² - B²))`.
fn summand_rationalized(p_sq: f64, v: f64) -> f64 {
    v * v / (p_sq + v + p_sq.sqrt() * (p_sq + 2.0 * v).sqrt())
}

/// `(|p|² + v̂ - |p|√(|p|² + 2v̂))` as a function of `r = |p|`, cancellation-free.
pub(crate) fn energy_integrand(pot: &Potential, r: f64) -> Result<f64> {
    let p_sq = r * r;
    Ok(summand_rationalized(p_sq, pot.fourier_sq(p_sq)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySummary {
    /// `-½ Σ (A_p - √(A_p² - B_p²))`.
    pub e_bog: f64,
    /// `-½ Σ B_p² / (A_p + √(A_p² - B_p²))`.
    pub e_bog_alt: f64,
    pub n_terms: usize,
    /// Summation radius actually used.
    pub radius: f64,
    /// `½v̂(0) - (2(2π)^d)^{-1} ∫ (|p|² + v̂ - |p|√(|p|²+2v̂)) dp`.
    pub density_limit: f64,
    pub density_error: f64,
}

fn energy_over(lattice: &LatticeSpec, pot: &Potential, modes: &[Momentum]) -> Result<(f64, f64)> {
    let mut direct = NeumaierSum::new();
    let mut alt = NeumaierSum::new();
    for k in modes.iter().filter(|k| !k.is_zero()) {
        let p_sq = lattice.norm_sq(k);
        let v = pot.fourier_sq(p_sq)?;
        direct.add(summand_direct(p_sq, v));
        alt.add(summand_rationalized(p_sq, v));
    }
    Ok((-0.5 * direct.value(), -0.5 * alt.value()))
}

/// `E_Bog` summed by shells until the omitted tail is below `tail_tol`.
///
/// Each summand is at most `v̂(p)²/|p|²`, so the tail beyond radius `R` is
/// bounded by `(2R²)^{-1} Σ_{|p|>R} v̂(p)²`.
pub fn bogoliubov_energy(lattice: &LatticeSpec, pot: &Potential, tail_tol: f64) -> Result<EnergySummary> {
    if !(tail_tol > 0.0) {
        return Err(Error::param("tail_tol", "must be > 0"));
    }
    check_dims(lattice, pot)?;
    let radius = pot.summation_radius(lattice, tail_tol, 2, |r| 0.5 / (r * r))?;
    let modes = lattice.points_by_shell(radius, false);
    let (e_bog, e_bog_alt) = energy_over(lattice, pot, &modes)?;
    let density = energy_density_limit(pot, &QuadratureSpec::default())?;
    Ok(EnergySummary {
        e_bog,
        e_bog_alt,
        n_terms: modes.len(),
        radius,
        density_limit: density.value,
        density_error: density.error_estimate,
    })
}

/// `E_Bog` restricted to a finite mode set (the zero mode is skipped).
/// Summation follows the shell order of the modes.
pub fn bogoliubov_energy_on_modes(lattice: &LatticeSpec, pot: &Potential, modes: &[Momentum]) -> Result<f64> {
    let mut ordered = modes.to_vec();
    ordered.sort_by_key(|k| (k.norm_sq(), *k));
    Ok(energy_over(lattice, pot, &ordered)?.1)
}

fn check_dims(lattice: &LatticeSpec, pot: &Potential) -> Result<()> {
    if lattice.dim() != pot.dim() {
        return Err(Error::Mismatch(format!(
            "{}-dimensional potential on a {}-dimensional lattice",
            pot.dim(),
            lattice.dim()
        )));
    }
    Ok(())
}

/// Infinite-volume limit of `(½v̂(0)(N-1) + E_Bog)/L^d` at unit density,
/// `½v̂(0) - (2(2π)^d)^{-1} ∫ (|p|² + v̂(p) - |p|√(|p|² + 2v̂(p))) dp`,
/// evaluated as a radial integral.
pub fn energy_density_limit(pot: &Potential, spec: &QuadratureSpec) -> Result<Integral> {
    let d = pot.dim();
    let (cutoff, tail) = quadrature::squared_tail_cutoff(pot, spec.tol * 1e-2)?;
    let sphere = match d {
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI,
        _ => return Err(Error::param("dimension", "quadrature supports d <= 3")),
    };
    let prefactor = sphere / (2.0 * (2.0 * std::f64::consts::PI).powi(d as i32));
    // Validate the integrand range once so the closure can unwrap.
    energy_integrand(pot, cutoff)?;
    let radial = quadrature::integrate(
        |r| energy_integrand(pot, r).expect("checked range") * r.powi(d as i32 - 1),
        cutoff,
        tail,
        spec,
    )?;
    let v0 = pot.fourier_sq(0.0)?;
    Ok(Integral {
        value: 0.5 * v0 - prefactor * radial.value,
        error_estimate: prefactor * radial.error_estimate,
        ..radial
    })
}
