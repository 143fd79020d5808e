//! Radial quadrature for the infinite-volume energy density.

use crate::error::{Error, Result};
use crate::model::{Potential, PotentialFamily};

/// Resolution of the composite Simpson rule used by
/// [`crate::bogoliubov::energy_density_limit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub initial_intervals: usize,
    /// Target for the step-halving error estimate.
    pub tol: f64,
    pub max_halvings: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            initial_intervals: 64,
            tol: 1e-13,
            max_halvings: 22,
        }
    }
}

/// Result of a radial integration `∫_0^∞ g(r) dr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Change under the last step halving plus the bound on the omitted tail.
    pub error_estimate: f64,
    pub cutoff: f64,
    pub intervals: usize,
}

pub(crate) fn simpson(g: &impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut acc = crate::sum::NeumaierSum::new();
    acc.add(g(a));
    acc.add(g(b));
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(w * g(a + h * i as f64));
    }
    acc.value() * h / 3.0
}

/// Integrates `g` over `[0, cutoff]` by step halving until two successive
/// Simpson estimates differ by less than `spec.tol`.
pub(crate) fn integrate(
    g: impl Fn(f64) -> f64,
    cutoff: f64,
    tail: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    if spec.initial_intervals < 2 || !(spec.tol > 0.0) {
        return Err(Error::param("quadrature", "need >= 2 intervals and tol > 0"));
    }
    if cutoff == 0.0 {
        return Ok(Integral {
            value: 0.0,
            error_estimate: tail,
            cutoff,
            intervals: 0,
        });
    }
    let mut n = spec.initial_intervals + spec.initial_intervals % 2;
    let mut prev = simpson(&g, 0.0, cutoff, n);
    for _ in 0..spec.max_halvings {
        n *= 2;
        let next = simpson(&g, 0.0, cutoff, n);
        let delta = (next - prev).abs();
        if delta < spec.tol {
            return Ok(Integral {
                value: next,
                error_estimate: delta + tail,
                cutoff,
                intervals: n,
            });
        }
        prev = next;
    }
    Err(Error::TooLarge(format!(
        "quadrature did not reach tol {} within {} halvings",
        spec.tol, spec.max_halvings
    )))
}

/// Radius beyond which `∫ v̂(r)² r^{d-3} dr` is below `tol`, with the bound on
/// the omitted part.
pub(crate) fn squared_tail_cutoff(pot: &Potential, tol: f64) -> Result<(f64, f64)> {
    if let Some(support) = pot.support_radius() {
        return Ok((support, 0.0));
    }
    match pot.family() {
        PotentialFamily::Gaussian { amplitude, width } => {
            let d = pot.dim() as i32;
            // r^{d-3} <= P^{d-3} for d <= 3 and ∫_P^∞ e^{-2r²/w} <= w/(4P) e^{-2P²/w}.
            let bound = |p: f64| amplitude * amplitude * p.powi(d - 4) * width / 4.0 * (-2.0 * p * p / width).exp();
            let mut p = width.sqrt();
            while bound(p) > tol {
                p *= 1.1;
            }
            Ok((p, bound(p)))
        }
        _ => Err(Error::UnboundedTail(
            "tabulated potential does not vanish at the end of its table".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_exact_on_cubics() {
        let v = simpson(&|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 4);
        assert!((v - 0.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_integral() {
        let r = integrate(|x: f64| (-x * x).exp(), 8.0, 0.0, &QuadratureSpec::default()).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }
}
