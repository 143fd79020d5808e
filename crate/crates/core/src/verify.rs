//! Numerical checks of the exact inequalities satisfied by the truncated
//! many-body problem, and convergence-rate fits against the Bogoliubov
//! prediction.
//!
//! Every check is stored as `lhs <= rhs` with `margin = rhs - lhs`; it
//! passes iff `margin >= -tolerance`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::bogoliubov::bogoliubov_energy_on_modes;
use crate::error::{Error, Result};
use crate::excitations::Enumeration;
use crate::fock_ed::{
    assemble_estimating, assemble_excited_number, assemble_hamiltonian, assemble_kinetic, lowest_eigenvalues,
    min_eigenvalue_dense, Bound, EdConfig, EigenOptions,
};
use crate::model::{LatticeSpec, Momentum, Potential};

/// Relative tolerance for matrix inequalities, in units of `max |entry|`.
pub const MATRIX_TOL: f64 = 1e-9;

/// Default upper bound on the fitted log-log slope of the ground-energy
/// error.
pub const DEFAULT_SLOPE_BOUND: f64 = -0.4;

pub const DEFAULT_EPS: [f64; 3] = [0.25, 0.5, 1.0];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    /// Short identifier of the inequality family.
    pub check: String,
    /// Instance label (configuration, sector, parameter).
    pub name: String,
    /// Statement being tested, in words.
    pub anchor: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(check: &str, name: impl Into<String>, anchor: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            check: check.into(),
            name: name.into(),
            anchor: anchor.into(),
            lhs,
            rhs,
            margin,
            tolerance,
            pass: margin >= -tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FitOutcome {
    Fitted { slope: f64, intercept: f64 },
    /// Some error is exactly zero, so there is no rate to fit.
    Exact,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingFit {
    pub name: String,
    /// `(ln N, ln error)`.
    pub points: Vec<(f64, f64)>,
    pub outcome: FitOutcome,
    pub slope_bound: f64,
    pub pass: bool,
}

impl ScalingFit {
    pub fn slope(&self) -> Option<f64> {
        match self.outcome {
            FitOutcome::Fitted { slope, .. } => Some(slope),
            FitOutcome::Exact => None,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub fits: Vec<ScalingFit>,
    pub comparisons: Vec<ComparisonTable>,
    /// Resolved configuration, as ordered key/value pairs.
    pub provenance: Vec<(String, String)>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.fits.iter().all(|f| f.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Flat CSV `check,name,lhs,rhs,margin,pass`. Fits appear as
    /// `scaling_fit` rows with `lhs` the slope and `rhs` the bound.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check", "name", "lhs", "rhs", "margin", "pass"])?;
        for c in &self.checks {
            w.write_record([
                c.check.clone(),
                c.name.clone(),
                fmt_num(c.lhs),
                fmt_num(c.rhs),
                fmt_num(c.margin),
                c.pass.to_string(),
            ])?;
        }
        for f in &self.fits {
            let (lhs, margin) = match f.outcome {
                FitOutcome::Fitted { slope, .. } => (fmt_num(slope), fmt_num(f.slope_bound - slope)),
                FitOutcome::Exact => ("exact".into(), "exact".into()),
            };
            w.write_record([
                "scaling_fit".into(),
                f.name.clone(),
                lhs,
                fmt_num(f.slope_bound),
                margin,
                f.pass.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.provenance {
            let _ = writeln!(s, "# {k} = {v}");
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{} {:<16} {:<48} margin {:+.3e} (tol {:.1e})",
                if c.pass { "PASS" } else { "FAIL" },
                c.check,
                c.name,
                c.margin,
                c.tolerance
            );
        }
        for t in &self.comparisons {
            let _ = writeln!(s, "ground-energy error, {}:", t.name);
            for r in &t.rows {
                let _ = writeln!(s, "  N = {:>4}  |E_N - E_Bog| = {:.6e}", r.n_particles, r.ground_error);
                for e in &r.excitations {
                    let _ = writeln!(
                        s,
                        "           K({}, {}) ED {:.6} Bog {:.6} |diff| {:.3e}",
                        e.sector, e.j, e.ed, e.bogoliubov, e.error
                    );
                }
            }
        }
        for f in &self.fits {
            let detail = match f.outcome {
                FitOutcome::Fitted { slope, .. } => format!("slope {slope:.4} (bound {:.2})", f.slope_bound),
                FitOutcome::Exact => "exact".into(),
            };
            let _ = writeln!(s, "{} scaling_fit      {:<48} {detail}", if f.pass { "PASS" } else { "FAIL" }, f.name);
        }
        let total = self.checks.len() + self.fits.len();
        let passed = self.checks.iter().filter(|c| c.pass).count() + self.fits.iter().filter(|f| f.pass).count();
        let _ = writeln!(s, "{passed}/{total} checks passed");
        if !self.passed() {
            let _ = writeln!(
                s,
                "these inequalities hold exactly for the truncated problem; a failure indicates an implementation bug"
            );
        }
        s
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x:.12e}")
}

/// Short description of an ED configuration.
pub fn describe(cfg: &EdConfig) -> String {
    format!(
        "N={} L={} d={} modes<={} max_excited={} vhat={}",
        cfg.n_particles,
        cfg.lattice.length(),
        cfg.lattice.dim(),
        cfg.mode_radius,
        cfg.max_excited(),
        cfg.pot.family()
    )
}

/// `E - ½(N-1)v̂(0) <= 0` and `E - ½(N-1)v̂(0) >= ½(v̂(0) - L^d v(0))`,
/// where `v(0)` is the periodized potential at the origin.
pub fn check_ground_bounds(ground_energy: f64, n_particles: usize, pot: &Potential, lattice: &LatticeSpec) -> Result<[Check; 2]> {
    let v0 = pot.fourier_sq(0.0)?;
    let v_origin = pot.periodized_at_origin(lattice)?;
    let shifted = ground_energy - 0.5 * (n_particles as f64 - 1.0) * v0;
    let lower = 0.5 * (v0 - lattice.volume() * v_origin);
    let tol = MATRIX_TOL * (0.5 * n_particles as f64 * v0).max(1.0);
    let label = format!("N={n_particles}");
    Ok([
        Check::new(
            "ground_upper",
            label.clone(),
            "ground energy below the condensate energy",
            shifted,
            0.0,
            tol,
        ),
        Check::new(
            "ground_lower",
            label,
            "ground energy above the periodized-potential bound",
            lower,
            shifted,
            tol,
        ),
    ])
}

/// `H_{N,-ε} <= H_N <= H_{N,+ε}` on the sector for each `ε` in `(0, 1]`,
/// tested as the smallest eigenvalue of each dense difference.
pub fn check_sandwich(cfg: &EdConfig, sector: &Momentum, eps_list: &[f64]) -> Result<Vec<Check>> {
    if eps_list.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::param("eps", "values must lie in (0, 1]"));
    }
    let h = assemble_hamiltonian(cfg, sector)?;
    let label = describe(cfg);
    let mut out = Vec::with_capacity(2 * eps_list.len());
    let dense_h = (h.dim() > 0).then(|| h.matrix.to_dense());
    for &eps in eps_list {
        for bound in [Bound::Upper, Bound::Lower] {
            let est = assemble_estimating(cfg, sector, eps, bound)?;
            let (min, scale) = match &dense_h {
                None => (0.0, 1.0),
                Some(hd) => {
                    let ed = est.matrix.to_dense();
                    let diff = match bound {
                        Bound::Upper => &ed - hd,
                        Bound::Lower => hd - &ed,
                    };
                    let scale = h.matrix.max_abs_entry().max(est.matrix.max_abs_entry()).max(f64::MIN_POSITIVE);
                    (min_eigenvalue_dense(&diff)?, scale)
                }
            };
            let (check, anchor) = match bound {
                Bound::Upper => ("sandwich_upper", "H_N below the upper estimating Hamiltonian"),
                Bound::Lower => ("sandwich_lower", "H_N above the lower estimating Hamiltonian"),
            };
            out.push(Check::new(
                check,
                format!("{label} p={sector} eps={eps}"),
                anchor,
                0.0,
                min,
                MATRIX_TOL * scale,
            ));
        }
    }
    Ok(out)
}

/// `N^> <= L²/(2π)² T` on every basis state of the sector.
pub fn check_kinetic_bound(cfg: &EdConfig, sector: &Momentum) -> Result<Check> {
    let t = assemble_kinetic(cfg, sector)?;
    let n = assemble_excited_number(cfg, sector)?;
    let factor = (cfg.lattice.length() / (2.0 * PI)).powi(2);
    let min = t
        .matrix
        .diagonal()
        .iter()
        .zip(n.matrix.diagonal())
        .map(|(t, n)| factor * t - n)
        .fold(f64::INFINITY, f64::min);
    let min = if min.is_finite() { min } else { 0.0 };
    let scale = (factor * t.matrix.max_abs_entry()).max(1.0);
    Ok(Check::new(
        "kinetic_bound",
        format!("{} p={sector}", describe(cfg)),
        "excited number bounded by kinetic energy",
        0.0,
        min,
        MATRIX_TOL * scale,
    ))
}

/// Ordered eigenvalues of the larger truncation must not exceed those of the
/// smaller one. The smaller configuration's basis must be contained in the
/// larger one's.
pub fn check_rayleigh_ritz(
    small: &EdConfig,
    large: &EdConfig,
    sector: &Momentum,
    count: usize,
    opts: &EigenOptions,
) -> Result<Check> {
    if small.n_particles != large.n_particles || small.lattice != large.lattice || small.pot != large.pot {
        return Err(Error::Mismatch("Rayleigh-Ritz pair must share N, lattice and potential".into()));
    }
    if small.mode_radius > large.mode_radius || small.max_excited() > large.max_excited() {
        return Err(Error::Mismatch("first configuration must be the smaller truncation".into()));
    }
    let hs = assemble_hamiltonian(small, sector)?;
    let hl = assemble_hamiltonian(large, sector)?;
    let es = lowest_eigenvalues(&hs.matrix, count, opts)?;
    let el = lowest_eigenvalues(&hl.matrix, count, opts)?;
    // The worst-violating level decides the check.
    let (mut lhs, mut rhs) = (0.0, 0.0);
    let mut worst = f64::INFINITY;
    for (s, l) in es.values.iter().zip(&el.values) {
        if s - l < worst {
            worst = s - l;
            (lhs, rhs) = (*l, *s);
        }
    }
    let scale = hs.matrix.norm_estimate().max(hl.matrix.norm_estimate()).max(1.0);
    let tol = (MATRIX_TOL * scale).max(10.0 * opts.tol * scale);
    Ok(Check::new(
        "rayleigh_ritz",
        format!("{} -> {} p={sector}", describe(small), describe(large)),
        "eigenvalues decrease as the basis grows",
        lhs,
        rhs,
        tol,
    ))
}

/// The lowest level over `sectors` lies in the zero sector.
pub fn check_ground_sector(cfg: &EdConfig, sectors: &[Momentum], opts: &EigenOptions) -> Result<Check> {
    let zero = Momentum::zero(cfg.lattice.dim());
    let mut all = sectors.to_vec();
    all.push(zero);
    all.sort();
    all.dedup();
    let lows: Vec<(Momentum, Option<f64>, f64)> = all
        .par_iter()
        .map(|p| {
            let h = assemble_hamiltonian(cfg, p)?;
            let e = lowest_eigenvalues(&h.matrix, 1, opts)?;
            Ok((*p, e.values.first().copied(), h.matrix.norm_estimate()))
        })
        .collect::<Result<_>>()?;
    let ground = lows
        .iter()
        .find(|l| l.0.is_zero())
        .and_then(|l| l.1)
        .ok_or_else(|| Error::Invariant("zero sector is empty".into()))?;
    let other = lows
        .iter()
        .filter(|l| !l.0.is_zero())
        .filter_map(|l| l.1)
        .fold(f64::INFINITY, f64::min);
    let scale = lows.iter().map(|l| l.2).fold(1.0, f64::max);
    let tol = (MATRIX_TOL * scale).max(10.0 * opts.tol * scale);
    Ok(Check::new(
        "ground_sector",
        format!("{} over {} sectors", describe(cfg), all.len()),
        "ground state has zero total momentum",
        ground,
        if other.is_finite() { other } else { ground },
        tol,
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcitationError {
    pub sector: Momentum,
    pub j: usize,
    pub ed: f64,
    pub bogoliubov: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub n_particles: usize,
    pub ground_energy: f64,
    /// `|E_N - ½v̂(0)(N-1) - E_Bog|` with `E_Bog` on the ED mode set.
    pub ground_error: f64,
    pub excitations: Vec<ExcitationError>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonTable {
    pub name: String,
    pub e_bog: f64,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn ground_errors(&self) -> Vec<(usize, f64)> {
        self.rows.iter().map(|r| (r.n_particles, r.ground_error)).collect()
    }
}

/// The `j_max` lowest Bogoliubov excitation energies in sector `p`, with
/// constituents restricted to `modes`.
pub fn bogoliubov_levels(
    lattice: &LatticeSpec,
    pot: &Potential,
    modes: &[Momentum],
    p: &Momentum,
    j_max: usize,
) -> Result<Vec<f64>> {
    if j_max == 0 {
        return Ok(Vec::new());
    }
    let nonzero: Vec<Momentum> = modes.iter().filter(|k| !k.is_zero()).copied().collect();
    if nonzero.is_empty() {
        return Ok(Vec::new());
    }
    let emax = nonzero
        .iter()
        .map(|k| crate::bogoliubov::dispersion(lattice, pot, k))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let radius = lattice.norm(p) * (1.0 + 1e-9);
    let mut kappa = emax.max(1e-3);
    loop {
        let table = Enumeration::new(lattice, pot, kappa)
            .window(radius)
            .restrict_to(&nonzero)
            .run()?;
        let energies = table.energies(p)?;
        if energies.len() >= j_max {
            return Ok(energies[..j_max].to_vec());
        }
        kappa *= 1.5;
    }
}

/// ED versus Bogoliubov for a series of particle numbers on a common mode
/// set.
pub fn compare_spectra(cfgs: &[EdConfig], sectors: &[Momentum], j_max: usize, opts: &EigenOptions) -> Result<ComparisonTable> {
    let first = cfgs.first().ok_or_else(|| Error::param("cfg_series", "empty"))?;
    let modes = first.modes();
    for c in cfgs {
        if c.lattice != first.lattice || c.pot != first.pot || c.modes() != modes {
            return Err(Error::Mismatch("series must share lattice, potential and mode set".into()));
        }
    }
    let lattice = first.lattice;
    let pot = &first.pot;
    let e_bog = bogoliubov_energy_on_modes(&lattice, pot, &modes)?;
    let v0 = pot.fourier_sq(0.0)?;
    let mut bog: BTreeMap<Momentum, Vec<f64>> = BTreeMap::new();
    for p in sectors {
        bog.insert(*p, bogoliubov_levels(&lattice, pot, &modes, p, j_max)?);
    }
    let mut rows = Vec::with_capacity(cfgs.len());
    for cfg in cfgs {
        let spec = crate::fock_ed::many_body_excitations(cfg, sectors, j_max, opts)?;
        let n = cfg.n_particles as f64;
        let ground_error = (spec.ground_energy - 0.5 * v0 * (n - 1.0) - e_bog).abs();
        let mut excitations = Vec::new();
        for p in sectors {
            let levels = &spec.sectors[p].excitations;
            for (j, (ed, b)) in levels.iter().zip(&bog[p]).enumerate() {
                excitations.push(ExcitationError {
                    sector: *p,
                    j: j + 1,
                    ed: *ed,
                    bogoliubov: *b,
                    error: (ed - b).abs(),
                });
            }
        }
        rows.push(ComparisonRow {
            n_particles: cfg.n_particles,
            ground_energy: spec.ground_energy,
            ground_error,
            excitations,
        });
    }
    Ok(ComparisonTable {
        name: format!(
            "L={} d={} modes<={} vhat={}",
            lattice.length(),
            lattice.dim(),
            first.mode_radius,
            pot.family()
        ),
        e_bog,
        rows,
    })
}

/// Least-squares slope of `ln error` against `ln N`.
pub fn scaling_fit(name: &str, series: &[(usize, f64)], slope_bound: f64) -> Result<ScalingFit> {
    if series.len() < 3 {
        return Err(Error::param("error_series", "need at least three points"));
    }
    if series.iter().any(|&(n, e)| n == 0 || !(e >= 0.0) || !e.is_finite()) {
        return Err(Error::param("error_series", "need N > 0 and finite errors >= 0"));
    }
    if series.iter().any(|&(_, e)| e == 0.0) {
        return Ok(ScalingFit {
            name: name.into(),
            points: Vec::new(),
            outcome: FitOutcome::Exact,
            slope_bound,
            pass: true,
        });
    }
    let points: Vec<(f64, f64)> = series.iter().map(|&(n, e)| ((n as f64).ln(), e.ln())).collect();
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::param("error_series", "need at least two distinct N"));
    }
    let slope = sxy / sxx;
    Ok(ScalingFit {
        name: name.into(),
        points,
        outcome: FitOutcome::Fitted {
            slope,
            intercept: my - slope * mx,
        },
        slope_bound,
        pass: slope <= slope_bound,
    })
}

/// One ED configuration and the sectors to check on it.
#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub cfg: EdConfig,
    pub sectors: Vec<Momentum>,
}

/// A particle-number series for the convergence fit.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub lattice: LatticeSpec,
    pub pot: Potential,
    pub mode_radius: f64,
    pub max_excited: Option<usize>,
    pub n_values: Vec<usize>,
    pub sectors: Vec<Momentum>,
    pub j_max: usize,
}

impl SeriesSpec {
    pub fn configs(&self) -> Result<Vec<EdConfig>> {
        self.n_values
            .iter()
            .map(|&n| {
                let cfg = EdConfig::new(n, self.lattice, self.pot.clone(), self.mode_radius)?;
                Ok(match self.max_excited {
                    Some(m) => cfg.with_max_excited(m),
                    None => cfg,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Suite {
    pub cases: Vec<SuiteCase>,
    pub series: Vec<SeriesSpec>,
    pub eps: Vec<f64>,
    /// Levels per sector used by the Rayleigh-Ritz comparison.
    pub count: usize,
    pub slope_bound: f64,
    pub eigen: EigenOptions,
}

/// The mean-field Gaussian potential `0.1 exp(-p²/5)`.
pub fn weak_gaussian(dim: usize) -> Potential {
    Potential::gaussian(0.1, 5.0, dim).expect("valid parameters")
}

fn unit_lattice() -> LatticeSpec {
    LatticeSpec::new(2.0 * PI, 1).expect("valid lattice")
}

fn line_sectors(radius: i32) -> Vec<Momentum> {
    (-radius..=radius).map(|n| Momentum::new(&[n])).collect()
}

impl Suite {
    /// The reference suite: exact special cases, small interacting cases and
    /// the ground-energy convergence series.
    pub fn reference() -> Self {
        let lat = unit_lattice();
        let case = |n: usize, pot: Potential, radius: f64| SuiteCase {
            cfg: EdConfig::new(n, lat, pot, radius).expect("valid configuration"),
            sectors: line_sectors(radius as i32),
        };
        Self {
            cases: vec![
                case(4, Potential::zero_mode(0.5, 1).expect("valid"), 2.0),
                case(4, Potential::free(1), 2.0),
                case(4, weak_gaussian(1), 1.0),
                case(6, weak_gaussian(1), 2.0),
                case(4, Potential::gaussian(1.0, 2.0, 1).expect("valid"), 2.0),
            ],
            series: vec![SeriesSpec {
                lattice: lat,
                pot: weak_gaussian(1),
                mode_radius: 2.0,
                max_excited: None,
                n_values: vec![4, 8, 16, 32],
                sectors: vec![Momentum::new(&[1])],
                j_max: 1,
            }],
            eps: DEFAULT_EPS.to_vec(),
            count: 3,
            slope_bound: DEFAULT_SLOPE_BOUND,
            eigen: EigenOptions::default(),
        }
    }

    /// A suite with the given cases and no convergence series.
    pub fn from_cases(cases: Vec<SuiteCase>) -> Self {
        Self {
            cases,
            series: Vec::new(),
            ..Self::reference()
        }
    }
}

/// The next-smaller truncation in each direction, if any.
fn shrunk(cfg: &EdConfig) -> Vec<EdConfig> {
    let mut out = Vec::new();
    let m = cfg.max_excited();
    if m > 0 {
        out.push(cfg.clone().with_max_excited(m - 1));
    }
    let shells: Vec<i64> = {
        let mut s: Vec<i64> = cfg.modes().iter().map(Momentum::norm_sq).collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    if shells.len() >= 2 {
        let r = (shells[shells.len() - 2] as f64).sqrt() * cfg.lattice.spacing();
        let mut small = cfg.clone();
        small.mode_radius = r;
        out.push(small);
    }
    out
}

/// All single-configuration checks for one case.
pub fn run_case(case: &SuiteCase, suite: &Suite) -> Result<Vec<Check>> {
    let cfg = &case.cfg;
    let opts = &suite.eigen;
    let zero = Momentum::zero(cfg.lattice.dim());
    let spec = crate::fock_ed::many_body_excitations(cfg, &[zero], 1, opts)?;
    let mut checks = Vec::new();
    checks.extend(check_ground_bounds(spec.ground_energy, cfg.n_particles, &cfg.pot, &cfg.lattice)?);
    for p in &case.sectors {
        checks.extend(check_sandwich(cfg, p, &suite.eps)?);
        checks.push(check_kinetic_bound(cfg, p)?);
        for small in shrunk(cfg) {
            checks.push(check_rayleigh_ritz(&small, cfg, p, suite.count, opts)?);
        }
    }
    checks.push(check_ground_sector(cfg, &case.sectors, opts)?);
    Ok(checks)
}

/// Runs every case and series; cases run in parallel, results keep
/// declaration order.
pub fn run_suite(suite: &Suite) -> Result<VerificationReport> {
    let per_case: Vec<Vec<Check>> = suite
        .cases
        .par_iter()
        .map(|c| run_case(c, suite))
        .collect::<Result<_>>()?;
    let mut report = VerificationReport {
        checks: per_case.into_iter().flatten().collect(),
        ..VerificationReport::default()
    };
    for s in &suite.series {
        let cfgs = s.configs()?;
        let table = compare_spectra(&cfgs, &s.sectors, s.j_max, &suite.eigen)?;
        let errors = table.ground_errors();
        for w in errors.windows(2) {
            report.checks.push(Check::new(
                "error_decreasing",
                format!("{} N={}->{}", table.name, w[0].0, w[1].0),
                "ground-energy error shrinks as N grows",
                w[1].1,
                w[0].1,
                0.0,
            ));
        }
        report.fits.push(scaling_fit(&table.name, &errors, suite.slope_bound)?);
        report.comparisons.push(table);
    }
    report.provenance.push(("eigen_seed".into(), suite.eigen.seed.to_string()));
    report.provenance.push(("eigen_tol".into(), suite.eigen.tol.to_string()));
    report.provenance.push(("eps".into(), format!("{:?}", suite.eps)));
    for (i, c) in suite.cases.iter().enumerate() {
        let sectors: Vec<String> = c.sectors.iter().map(|p| p.to_string()).collect();
        report
            .provenance
            .push((format!("case{i}"), format!("{} sectors=[{}]", describe(&c.cfg), sectors.join(" "))));
    }
    for (i, s) in suite.series.iter().enumerate() {
        report.provenance.push((
            format!("series{i}"),
            format!(
                "L={} d={} modes<={} vhat={} N={:?} max_excited={}",
                s.lattice.length(),
                s.lattice.dim(),
                s.mode_radius,
                s.pot.family(),
                s.n_values,
                s.max_excited.map_or("N".into(), |m| m.to_string())
            ),
        ));
    }
    Ok(report)
}
