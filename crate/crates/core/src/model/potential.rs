use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::lattice::{LatticeSpec, Momentum};
use crate::error::{Error, Result};
use crate::sum::NeumaierSum;

/// Default absolute tail tolerance for lattice sums, in units of the
/// potential's amplitude.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// How `v̂` is specified. All families are radial, so `v̂(p) = v̂(-p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PotentialFamily {
    /// `v̂(p) = amplitude · exp(-|p|²/width)`.
    Gaussian { amplitude: f64, width: f64 },
    /// Samples `(|p|, v̂)` with linear interpolation. A table whose last
    /// sample is exactly zero is taken to vanish beyond its range; any other
    /// table refuses queries outside `[p_first, p_last]`.
    Table { samples: Vec<(f64, f64)> },
    /// `v̂(0) = amplitude`, `v̂(p) = 0` for `p ≠ 0`. On the torus this is the
    /// constant pair interaction `amplitude / L^d`.
    ZeroMode { amplitude: f64 },
}

impl fmt::Display for PotentialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gaussian { amplitude, .. } if *amplitude == 0.0 => write!(f, "free"),
            Self::Gaussian { amplitude, width } => write!(f, "gaussian:{amplitude}:{width}"),
            Self::ZeroMode { amplitude } => write!(f, "zero:{amplitude}"),
            Self::Table { samples } => write!(f, "table:{}", samples.len()),
        }
    }
}

/// Parses `gaussian:A:W`, `zero:A` or `free`. Tables have no inline form.
impl FromStr for PotentialFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |name: &'static str, t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::param(name, format!("not a number: {t:?}")))
        };
        match parts.as_slice() {
            ["free"] => Ok(Self::Gaussian { amplitude: 0.0, width: 1.0 }),
            ["gaussian", a, w] => Ok(Self::Gaussian {
                amplitude: num("amplitude", a)?,
                width: num("width", w)?,
            }),
            ["zero", a] => Ok(Self::ZeroMode { amplitude: num("amplitude", a)? }),
            _ => Err(Error::param(
                "vhat",
                format!("expected gaussian:A:W, zero:A or free, got {s:?}"),
            )),
        }
    }
}

/// A pair potential given through its Fourier transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    family: PotentialFamily,
    dim: usize,
}

impl Potential {
    pub fn gaussian(amplitude: f64, width: f64, dim: usize) -> Result<Self> {
        Self::with_family(PotentialFamily::Gaussian { amplitude, width }, dim)
    }

    /// `v̂ ≡ 0`.
    pub fn free(dim: usize) -> Self {
        Self::gaussian(0.0, 1.0, dim).expect("valid free potential")
    }

    pub fn zero_mode(amplitude: f64, dim: usize) -> Result<Self> {
        Self::with_family(PotentialFamily::ZeroMode { amplitude }, dim)
    }

    pub fn table(samples: Vec<(f64, f64)>, dim: usize) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::param("samples", "need at least two samples"));
        }
        if samples.iter().any(|(p, v)| !p.is_finite() || !v.is_finite() || *p < 0.0) {
            return Err(Error::param("samples", "momenta must be finite and >= 0, values finite"));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::param("samples", "momenta must be strictly increasing"));
        }
        Self::with_family(PotentialFamily::Table { samples }, dim)
    }

    pub fn with_family(family: PotentialFamily, dim: usize) -> Result<Self> {
        if !(1..=super::MAX_DIM).contains(&dim) {
            return Err(Error::param("dimension", format!("must be in 1..=3, got {dim}")));
        }
        let check_amplitude = |a: f64| {
            if a.is_finite() && a >= 0.0 {
                Ok(())
            } else {
                Err(Error::param("amplitude", format!("must be finite and >= 0, got {a}")))
            }
        };
        match &family {
            PotentialFamily::Gaussian { amplitude, width } => {
                check_amplitude(*amplitude)?;
                if !(width.is_finite() && *width > 0.0) {
                    return Err(Error::param("width", format!("must be finite and > 0, got {width}")));
                }
            }
            PotentialFamily::ZeroMode { amplitude } => check_amplitude(*amplitude)?,
            PotentialFamily::Table { samples } => {
                if samples.len() < 2 || samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::param("samples", "need >= 2 strictly increasing momenta"));
                }
            }
        }
        Ok(Self { family, dim })
    }

    pub fn family(&self) -> &PotentialFamily {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `v̂` as a function of `|p|²`.
    pub fn fourier_sq(&self, p_sq: f64) -> Result<f64> {
        match &self.family {
            PotentialFamily::Gaussian { amplitude, width } => Ok(amplitude * (-p_sq / width).exp()),
            PotentialFamily::ZeroMode { amplitude } => Ok(if p_sq == 0.0 { *amplitude } else { 0.0 }),
            PotentialFamily::Table { samples } => interpolate(samples, p_sq.sqrt()),
        }
    }

    /// `v̂(p)` for a real momentum vector.
    pub fn fourier(&self, p: &[f64]) -> Result<f64> {
        self.fourier_sq(p.iter().map(|x| x * x).sum())
    }

    /// `v̂(p)` at a lattice momentum.
    pub fn fourier_at(&self, lattice: &LatticeSpec, k: &Momentum) -> Result<f64> {
        if k.is_zero() {
            return self.fourier_sq(0.0);
        }
        self.fourier_sq(lattice.norm_sq(k))
    }

    /// An upper bound on `v̂` over all momenta.
    pub fn sup(&self) -> f64 {
        match &self.family {
            PotentialFamily::Gaussian { amplitude, .. } | PotentialFamily::ZeroMode { amplitude } => *amplitude,
            PotentialFamily::Table { samples } => samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max),
        }
    }

    /// Radius beyond which `v̂` vanishes identically, when there is one.
    pub fn support_radius(&self) -> Option<f64> {
        match &self.family {
            PotentialFamily::Gaussian { amplitude, .. } if *amplitude == 0.0 => Some(0.0),
            PotentialFamily::Gaussian { .. } => None,
            PotentialFamily::ZeroMode { .. } => Some(0.0),
            PotentialFamily::Table { samples } => {
                let last = samples.last().expect("non-empty table");
                (last.1 == 0.0).then_some(last.0)
            }
        }
    }

    /// True for tables that neither vanish beyond their range nor decay in a
    /// way the tail machinery can bound.
    pub fn has_unbounded_tail(&self) -> bool {
        matches!(self.family, PotentialFamily::Table { .. }) && self.support_radius().is_none()
    }

    /// Upper bound on `Σ_{|p| > radius} v̂(p)^power` over the lattice.
    pub fn lattice_tail_bound(&self, lattice: &LatticeSpec, radius: f64, power: i32) -> Result<f64> {
        if let Some(support) = self.support_radius() {
            return Ok(if radius >= support { 0.0 } else { f64::INFINITY });
        }
        match &self.family {
            PotentialFamily::Gaussian { amplitude, width } => {
                let h = lattice.spacing();
                let decay = power as f64 * h * h / width;
                Ok(amplitude.powi(power) * gaussian_lattice_tail(lattice.dim(), decay, radius / h))
            }
            _ => Err(Error::UnboundedTail(
                "tabulated potential does not vanish at the end of its table".into(),
            )),
        }
    }

    /// Smallest radius (on a doubling grid) at which
    /// `weight(radius) · Σ_{|p| > radius} v̂^power <= tol`.
    pub(crate) fn summation_radius(
        &self,
        lattice: &LatticeSpec,
        tol: f64,
        power: i32,
        weight: impl Fn(f64) -> f64,
    ) -> Result<f64> {
        if let Some(support) = self.support_radius() {
            return Ok(support);
        }
        let mut radius = lattice.spacing();
        for _ in 0..200 {
            if weight(radius) * self.lattice_tail_bound(lattice, radius, power)? <= tol {
                return Ok(radius);
            }
            radius *= 1.25;
        }
        Err(Error::UnboundedTail(format!("tail above {tol} at every tried radius")))
    }

    /// The periodized real-space potential
    /// `v^L(x) = L^{-d} Σ_p v̂(p) e^{ipx}`, summed shell by shell until the
    /// omitted tail is below `tail_tol`.
    pub fn periodized_value(&self, lattice: &LatticeSpec, x: &[f64], tail_tol: f64) -> Result<f64> {
        if !(tail_tol > 0.0) {
            return Err(Error::param("tail_tol", "must be > 0"));
        }
        if x.len() != lattice.dim() {
            return Err(Error::Mismatch(format!(
                "position has {} coordinates on a {}-dimensional torus",
                x.len(),
                lattice.dim()
            )));
        }
        let volume = lattice.volume();
        let radius = self.summation_radius(lattice, tail_tol, 1, |_| 1.0 / volume)?;
        let mut re = NeumaierSum::new();
        let mut im = NeumaierSum::new();
        for k in lattice.points_by_shell(radius, true) {
            let v = self.fourier_at(lattice, &k)?;
            if v == 0.0 {
                continue;
            }
            let p = lattice.physical(&k);
            let phase: f64 = p.iter().zip(x).map(|(a, b)| a * b).sum();
            re.add(v * phase.cos());
            im.add(v * phase.sin());
        }
        let (re, im) = (re.value() / volume, im.value() / volume);
        if im.abs() >= tail_tol.max(1e-14 * re.abs()) {
            return Err(Error::Invariant(format!(
                "periodized potential has imaginary part {im:e} at x = {x:?}"
            )));
        }
        Ok(re)
    }

    /// `v^L(0)`, the maximum of the periodized potential, at the default
    /// tolerance.
    pub fn periodized_at_origin(&self, lattice: &LatticeSpec) -> Result<f64> {
        let tol = DEFAULT_TAIL_TOL * self.sup().max(f64::MIN_POSITIVE);
        self.periodized_value(lattice, &vec![0.0; lattice.dim()], tol)
    }
}

fn interpolate(samples: &[(f64, f64)], p: f64) -> Result<f64> {
    let first = samples[0];
    let last = *samples.last().expect("non-empty table");
    if p > last.0 && last.1 == 0.0 {
        return Ok(0.0);
    }
    if p < first.0 || p > last.0 {
        return Err(Error::OutOfRange { p, max: last.0 });
    }
    let idx = samples.partition_point(|s| s.0 <= p);
    if idx == samples.len() {
        return Ok(last.1);
    }
    let (p0, v0) = samples[idx - 1];
    let (p1, v1) = samples[idx];
    Ok(v0 + (v1 - v0) * (p - p0) / (p1 - p0))
}

/// Bound on `Σ_{n ∈ Z^d, |n| > radius_n} exp(-decay·|n|²)`.
///
/// The region `|n| > R` is covered by the slabs `|n_i| > R/√d`; each slab
/// factorizes into a one-dimensional tail times full one-dimensional sums,
/// and `Σ_{m >= m1} e^{-c m²} <= e^{-c m1²} / (1 - e^{-2 c m1})`.
fn gaussian_lattice_tail(dim: usize, decay: f64, radius_n: f64) -> f64 {
    let geometric = |m1: f64| (-decay * m1 * m1).exp() / -(-2.0 * decay * m1).exp_m1();
    let full_line = 1.0 + 2.0 * geometric(1.0);
    let m1 = (radius_n / (dim as f64).sqrt()).floor() + 1.0;
    dim as f64 * 2.0 * geometric(m1) * full_line.powi(dim as i32 - 1)
}

/// One failed positivity check.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NegativeFourier { momentum: Momentum, value: f64 },
    FourierUnavailable { momentum: Momentum, reason: String },
    NegativeRealSpace { value: f64 },
}

#[derive(Debug, Clone, Default)]
pub struct Validation {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Checks `v̂ >= 0` on every lattice point with `|p| <= radius` (in
/// lexicographic order) and `v^L(0) >= 0`.
pub fn validate_potential(pot: &Potential, lattice: &LatticeSpec, radius: f64) -> Result<Validation> {
    if radius < 0.0 || radius.is_nan() {
        return Err(Error::param("radius", "must be >= 0"));
    }
    let mut out = Validation::default();
    if pot.dim() != lattice.dim() {
        return Err(Error::Mismatch(format!(
            "{}-dimensional potential on a {}-dimensional lattice",
            pot.dim(),
            lattice.dim()
        )));
    }
    if pot.has_unbounded_tail() {
        out.warnings
            .push("tabulated potential does not vanish at its last sample; lattice tails cannot be bounded".into());
    }
    if radius == 0.0 {
        out.warnings.push("radius is 0: nothing to check".into());
        return Ok(out);
    }
    for k in lattice.lattice_points(radius, true) {
        match pot.fourier_at(lattice, &k) {
            Ok(v) if v < 0.0 => out.violations.push(Violation::NegativeFourier { momentum: k, value: v }),
            Ok(_) => {}
            Err(e) => out.violations.push(Violation::FourierUnavailable {
                momentum: k,
                reason: e.to_string(),
            }),
        }
    }
    if !pot.has_unbounded_tail() {
        let v0 = pot.periodized_at_origin(lattice)?;
        if v0 < 0.0 {
            out.violations.push(Violation::NegativeRealSpace { value: v0 });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn v1() -> Potential {
        Potential::gaussian(0.1, 5.0, 1).unwrap()
    }

    #[test]
    fn gaussian_at_origin() {
        assert_eq!(v1().fourier_sq(0.0).unwrap(), 0.1);
        let v2 = Potential::gaussian(7.5, 2.0, 1).unwrap();
        assert_eq!(v2.fourier_sq(0.0).unwrap(), 7.5);
    }

    #[test]
    fn table_out_of_range() {
        let t = Potential::table(vec![(0.0, 1.0), (1.0, 0.5)], 1).unwrap();
        assert!((t.fourier(&[0.5]).unwrap() - 0.75).abs() < 1e-15);
        assert!(matches!(t.fourier(&[1.5]), Err(Error::OutOfRange { .. })));
        let compact = Potential::table(vec![(0.0, 1.0), (1.0, 0.0)], 1).unwrap();
        assert_eq!(compact.fourier(&[3.0]).unwrap(), 0.0);
    }

    #[test]
    fn validation_reports_negative_sample() {
        let lat = LatticeSpec::new(2.0 * PI, 1).unwrap();
        let t = Potential::table(vec![(0.0, 1.0), (1.0, -0.5), (2.0, 0.2), (3.0, 0.0)], 1).unwrap();
        let report = validate_potential(&t, &lat, 2.5).unwrap();
        assert_eq!(
            report.first_violation(),
            Some(&Violation::NegativeFourier {
                momentum: Momentum::new(&[-1]),
                value: -0.5
            })
        );
        assert!(validate_potential(&v1(), &lat, 10.0).unwrap().is_ok());
    }

    #[test]
    fn zero_radius_is_vacuous() {
        let lat = LatticeSpec::new(2.0 * PI, 1).unwrap();
        let report = validate_potential(&v1(), &lat, 0.0).unwrap();
        assert!(report.is_ok());
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn periodized_zero_potential() {
        let lat = LatticeSpec::new(7.0, 2).unwrap();
        let v = Potential::free(2).periodized_value(&lat, &[0.3, -1.2], 1e-12).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn periodized_matches_continuum_integral() {
        // On a fine lattice the periodized value at 0 equals (1/2π)∫v̂ = 0.1·√(5π)/(2π)
        // up to exponentially small aliasing.
        let lat = LatticeSpec::new(40.0 * PI / 3.0, 1).unwrap();
        let v = v1().periodized_value(&lat, &[0.0], 1e-12).unwrap();
        let exact = 0.1 * (5.0 * PI).sqrt() / (2.0 * PI);
        assert!((v - exact).abs() < 1e-11, "{v} vs {exact}");
        assert!((v - 0.063078).abs() < 5e-7);
    }

    #[test]
    fn tail_bound_dominates_actual_tail() {
        for dim in 1..=3 {
            let lat = LatticeSpec::new(3.0, dim).unwrap();
            let pot = Potential::gaussian(1.0, 2.0, dim).unwrap();
            for radius in [1.0, 3.0, 6.0] {
                let bound = pot.lattice_tail_bound(&lat, radius, 1).unwrap();
                let inner: f64 = lat
                    .lattice_points(radius, true)
                    .iter()
                    .map(|k| pot.fourier_at(&lat, k).unwrap())
                    .sum();
                let all: f64 = lat
                    .lattice_points(40.0, true)
                    .iter()
                    .map(|k| pot.fourier_at(&lat, k).unwrap())
                    .sum();
                assert!(all - inner <= bound * (1.0 + 1e-12) + 1e-15, "dim {dim} r {radius}");
            }
        }
    }

    #[test]
    fn refinement_converges() {
        let lat = LatticeSpec::new(2.0 * PI, 1).unwrap();
        let mut prev_tol = 1e-4;
        let mut prev = v1().periodized_value(&lat, &[0.0], prev_tol).unwrap();
        for tol in [1e-6, 1e-8, 1e-10, 1e-12] {
            let next = v1().periodized_value(&lat, &[0.0], tol).unwrap();
            assert!((next - prev).abs() < prev_tol);
            (prev, prev_tol) = (next, tol);
        }
    }

    #[test]
    fn family_spelling_roundtrip() {
        for s in ["gaussian:0.1:5", "zero:0.3", "free"] {
            let f: PotentialFamily = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("gaussian:0.1".parse::<PotentialFamily>().is_err());
        assert!("zero:x".parse::<PotentialFamily>().is_err());
    }

    proptest! {
        #[test]
        fn fourier_is_even(p in -20.0f64..20.0, q in -20.0f64..20.0) {
            let pot = Potential::gaussian(7.5, 2.0, 2).unwrap();
            prop_assert_eq!(pot.fourier(&[p, q]).unwrap(), pot.fourier(&[-p, -q]).unwrap());
        }

        #[test]
        fn periodized_is_periodic(x in -10.0f64..10.0, l in 1.0f64..12.0) {
            let lat = LatticeSpec::new(l, 1).unwrap();
            let a = v1().periodized_value(&lat, &[x], 1e-12).unwrap();
            let b = v1().periodized_value(&lat, &[x + l], 1e-12).unwrap();
            prop_assert!((a - b).abs() < 1e-11);
        }
    }
}
