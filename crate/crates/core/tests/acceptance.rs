//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runtime budgets are part of each criterion.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use bogospec::bogoliubov::{bogoliubov_energy, identity_residuals, BogoCoefficients, DEFAULT_ENERGY_TAIL_TOL};
use bogospec::excitations::{
    classify_for_figure, damping_scan, enumerate_below, oracle_enumerate, unresolved_sectors, DampingStatus,
    QuasiClass,
};
use bogospec::fock_ed::{
    assemble_bogoliubov_quadratic, assemble_hamiltonian, lowest_eigenvalues, many_body_excitations, EigenOptions,
};
use bogospec::verify::{compare_spectra, run_suite, scaling_fit, SeriesSpec, Suite};
use bogospec::{EdConfig, LatticeSpec, Momentum, Potential};

struct Outcome {
    pass: bool,
    detail: String,
}

fn v1(dim: usize) -> Potential {
    Potential::gaussian(0.1, 5.0, dim).unwrap()
}

fn v2(dim: usize) -> Potential {
    Potential::gaussian(7.5, 2.0, dim).unwrap()
}

fn line() -> LatticeSpec {
    LatticeSpec::new(2.0 * PI, 1).unwrap()
}

fn m1(n: i32) -> Momentum {
    Momentum::new(&[n])
}

fn criterion_1() -> Outcome {
    let lat = LatticeSpec::with_spacing(0.15, 1).unwrap();
    let points: Vec<Momentum> = (1..=5000).flat_map(|n| [m1(n), m1(-n)]).collect();
    let mut worst: f64 = 0.0;
    for pot in [v1(1), v2(1), Potential::free(1)] {
        for k in &points {
            let r = identity_residuals(&lat, &pot, k).unwrap();
            let p_sq = lat.norm_sq(k);
            let h = BogoCoefficients::from_parts(p_sq, pot.fourier_sq(p_sq).unwrap()).hyperbolic_residual();
            worst = r.into_iter().chain([h]).fold(worst, f64::max);
        }
    }
    Outcome {
        pass: worst < 1e-12,
        detail: format!("max residual {worst:.2e} over 3 x {} points (< 1e-12)", points.len()),
    }
}

fn criterion_2() -> Outcome {
    let pot = v1(1);
    let v0 = pot.fourier_sq(0.0).unwrap();
    let mut pass = true;
    let mut gaps = Vec::new();
    let mut rel = 0.0f64;
    for l in [2.0 * PI, 40.0 * PI / 3.0, 200.0] {
        let lat = LatticeSpec::new(l, 1).unwrap();
        let s = bogoliubov_energy(&lat, &pot, DEFAULT_ENERGY_TAIL_TOL).unwrap();
        rel = rel.max(((s.e_bog - s.e_bog_alt) / s.e_bog).abs());
        pass &= s.e_bog <= 0.0;
        gaps.push((0.5 * v0 + s.e_bog / l - s.density_limit).abs());
    }
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    let last = *gaps.last().unwrap();
    pass &= rel <= 1e-10 && decreasing && last < 1e-6;
    Outcome {
        pass,
        detail: format!(
            "direct/rationalized rel diff {rel:.1e} (<= 1e-10), gaps {:?} decreasing={decreasing}, final gap {last:.3e} (< 1e-6)",
            gaps.iter().map(|g| format!("{g:.3e}")).collect::<Vec<_>>()
        ),
    }
}

fn oracle_agrees(lat: &LatticeSpec, pot: &Potential, kappa: f64, window: f64) -> Result<usize, String> {
    let table = enumerate_below(lat, pot, kappa, window).map_err(|e| e.to_string())?;
    let mut compared = 0;
    for (p, records) in &table.sectors {
        let oracle = oracle_enumerate(lat, pot, kappa, p).map_err(|e| e.to_string())?;
        if oracle.len() != records.len() {
            return Err(format!("sector {p}: {} records vs oracle {}", records.len(), oracle.len()));
        }
        for (r, (e, ks)) in records.iter().zip(&oracle) {
            if &r.constituents != ks || (r.energy - e).abs() > 1e-12 {
                return Err(format!("sector {p}: {:?} vs {:?}", r.constituents, ks));
            }
        }
        compared += records.len();
    }
    Ok(compared)
}

fn criterion_3() -> Outcome {
    let lat2 = LatticeSpec::new(2.0 * PI, 2).unwrap();
    let cases = [
        ("free d=1 kappa=7.5", line(), Potential::free(1), 7.5, 3.0),
        ("v1 d=1 kappa=3", line(), v1(1), 3.0, 3.0),
        ("free d=2 kappa=4.5", lat2, Potential::free(2), 4.5, 2.0),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, lat, pot, kappa, window) in cases {
        match oracle_agrees(&lat, &pot, kappa, window) {
            Ok(n) => notes.push(format!("{name}: {n} records equal")),
            Err(e) => {
                pass = false;
                notes.push(format!("{name}: {e}"));
            }
        }
    }
    let table = enumerate_below(&line(), &Potential::free(1), 7.5, 1.0).unwrap();
    let prefix = table.energies(&m1(1)).unwrap();
    let expected = [1.0, 3.0, 5.0, 5.0, 7.0, 7.0, 7.0];
    let prefix_ok = prefix.len() >= expected.len() && prefix[..expected.len()] == expected;
    pass &= prefix_ok;
    notes.push(format!("free sector 1 prefix {:?}", &prefix[..prefix.len().min(7)]));
    Outcome {
        pass,
        detail: notes.join("; "),
    }
}

fn criterion_4a() -> Outcome {
    let lat = LatticeSpec::with_spacing(0.15, 1).unwrap();
    let pot = v1(1);
    let table = enumerate_below(&lat, &pot, 0.45, 0.6).unwrap();
    let unresolved = unresolved_sectors(&table).unwrap();
    let rows = classify_for_figure(&table);
    let mut below = Vec::new();
    for (p, _) in table.sectors.iter().filter(|(p, _)| !p.is_zero()) {
        let one = rows.iter().find(|r| r.momentum == *p && r.class == QuasiClass::One).map(|r| r.energy);
        let two = rows
            .iter()
            .filter(|r| r.momentum == *p && r.class == QuasiClass::Two)
            .map(|r| r.energy)
            .fold(f64::INFINITY, f64::min);
        if let Some(one) = one {
            if two < one {
                below.push(p.components()[0]);
            }
        }
    }
    let damped = damping_scan(&table)
        .unwrap()
        .iter()
        .filter(|r| r.status == DampingStatus::Unstable)
        .count();
    Outcome {
        pass: unresolved.is_empty() && !below.is_empty(),
        detail: format!(
            "spacing 0.15, |p| <= 0.6: 2qp below 1qp in sectors n = {below:?}; {damped} unstable sectors"
        ),
    }
}

fn criterion_4b() -> Outcome {
    let lat = LatticeSpec::with_spacing(0.15, 1).unwrap();
    let pot = v2(1);
    let n_max = (6.0 / lat.spacing() + 1e-9).floor() as i32;
    let e: Vec<f64> = (1..=n_max)
        .map(|n| bogospec::bogoliubov::dispersion(&lat, &pot, &m1(n)).unwrap())
        .collect();
    let maxima: Vec<usize> = (1..e.len() - 1).filter(|&i| e[i] > e[i - 1] && e[i] > e[i + 1]).collect();
    let minima: Vec<usize> = (1..e.len() - 1).filter(|&i| e[i] < e[i - 1] && e[i] < e[i + 1]).collect();
    let pass = maxima.iter().any(|&i| minima.iter().any(|&j| j > i));
    Outcome {
        pass,
        detail: format!(
            "v2 = 7.5 exp(-p^2/2), {} points: local maxima at n {:?}, local minima at n {:?}",
            e.len(),
            maxima.iter().map(|i| i + 1).collect::<Vec<_>>(),
            minima.iter().map(|i| i + 1).collect::<Vec<_>>()
        ),
    }
}

/// Kinetic energies `Σ n_k |k|²` of all truncated basis states of sector
/// `p`, ascending, computed straight from occupation numbers.
fn free_levels(n: usize, radius: i32, p: i32) -> Vec<f64> {
    let modes: Vec<i32> = (-radius..=radius).filter(|&k| k != 0).collect();
    let mut out = Vec::new();
    fn rec(i: usize, left: usize, mom: i32, kin: i64, modes: &[i32], p: i32, out: &mut Vec<f64>) {
        if i == modes.len() {
            if mom == p {
                out.push(kin as f64);
            }
            return;
        }
        for c in 0..=left {
            let c32 = c as i32;
            rec(i + 1, left - c, mom + c32 * modes[i], kin + (c as i64) * (modes[i] as i64).pow(2), modes, p, out);
        }
    }
    rec(0, n, 0, 0, &modes, p, &mut out);
    out.sort_by(f64::total_cmp);
    out
}

fn criterion_5() -> Outcome {
    let a = 0.5;
    let count = 4;
    let sectors: Vec<Momentum> = (-2..=2).map(m1).collect();
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for n in [2usize, 4, 6] {
        let cfg = EdConfig::new(n, line(), Potential::zero_mode(a, 1).unwrap(), 2.0).unwrap();
        let spec = many_body_excitations(&cfg, &sectors, count, &EigenOptions::default()).unwrap();
        worst = worst.max((spec.ground_energy - 0.5 * a * (n as f64 - 1.0)).abs());
        for p in &sectors {
            let mut expect = free_levels(n, 2, p.components()[0]);
            if p.is_zero() {
                expect.remove(0);
            }
            let got = &spec.sectors[p].excitations;
            pass &= got.len() == expect.len().min(count);
            for (g, e) in got.iter().zip(&expect) {
                worst = worst.max((g - e).abs());
            }
        }
        let free = EdConfig::new(n, line(), Potential::free(1), 2.0).unwrap();
        let e0 = many_body_excitations(&free, &[], 1, &EigenOptions::default()).unwrap().ground_energy;
        worst = worst.max(e0.abs());
    }
    Outcome {
        pass: pass && worst < 1e-10,
        detail: format!("N in {{2,4,6}}, modes |n| <= 2: max deviation {worst:.2e} (< 1e-10)"),
    }
}

fn criterion_6() -> Outcome {
    let cfg = EdConfig::new(2, line(), v1(1), 1.0).unwrap();
    let h = assemble_hamiltonian(&cfg, &m1(0)).unwrap();
    let v = |k: f64| 0.1 * (-k * k / 5.0).exp();
    let r2 = 2f64.sqrt();
    let expected = [[v(0.0) / 2.0, v(1.0) / r2], [v(1.0) / r2, 2.0 + (v(0.0) + v(2.0)) / 2.0]];
    let mut worst: f64 = 0.0;
    for (i, row) in expected.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            worst = worst.max((h.matrix.get(i, j) - x).abs());
        }
    }
    Outcome {
        pass: h.dim() == 2 && worst <= 1e-13,
        detail: format!("dim {}, max entry deviation {worst:.2e} (<= 1e-13)", h.dim()),
    }
}

fn criterion_7() -> Outcome {
    let mut suite = Suite::reference();
    suite.series.clear();
    let report = run_suite(&suite).unwrap();
    let mut by_kind: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for c in &report.checks {
        let e = by_kind.entry(c.check.as_str()).or_default();
        e.0 += 1;
        e.1 += usize::from(c.pass);
    }
    let worst = report
        .checks
        .iter()
        .map(|c| c.margin / c.tolerance.max(f64::MIN_POSITIVE))
        .fold(f64::INFINITY, f64::min);
    let summary: Vec<String> = by_kind.iter().map(|(k, (n, ok))| format!("{k} {ok}/{n}")).collect();
    let kinds = ["ground_upper", "ground_lower", "sandwich_upper", "sandwich_lower", "kinetic_bound", "rayleigh_ritz", "ground_sector"];
    Outcome {
        pass: report.passed() && kinds.iter().all(|k| by_kind.contains_key(k)),
        detail: format!(
            "{} configurations: {}; worst margin/tolerance {worst:.2e}",
            suite.cases.len(),
            summary.join(", ")
        ),
    }
}

fn criterion_8() -> Outcome {
    // v̂ ≡ 1 on the sampled range, so v̂(1) = 1 exactly.
    let pot = Potential::table(vec![(0.0, 1.0), (2.0, 1.0)], 1).unwrap();
    let (a, b) = (2.0f64, 1.0f64);
    let e = (a * a - b * b).sqrt();
    let exact = -(a - e);
    let modes = [m1(-1), m1(1)];
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    for occ in [40, 60] {
        let h = assemble_bogoliubov_quadratic(&line(), &pot, &modes, occ, &m1(0)).unwrap();
        let levels = lowest_eigenvalues(&h.matrix, 3, &EigenOptions::default()).unwrap().values;
        worst = worst.max((levels[0] - exact).abs());
        // Zero total momentum forces n+ = n-, so levels are exact + 2ne.
        let excited: f64 = levels
            .iter()
            .enumerate()
            .map(|(n, l)| (l - (exact + 2.0 * n as f64 * e)).abs())
            .fold(0.0, f64::max);
        notes.push(format!("max_occupation {occ}: ground {:.9}, excited dev {excited:.1e}", levels[0]));
    }
    Outcome {
        pass: worst < 1e-6,
        detail: format!("target {exact:.9}; {}; max ground dev {worst:.2e} (< 1e-6)", notes.join("; ")),
    }
}

fn criterion_9() -> Outcome {
    let spec = SeriesSpec {
        lattice: line(),
        pot: v1(1),
        mode_radius: 2.0,
        max_excited: None,
        n_values: vec![4, 8, 16, 32],
        sectors: vec![m1(1)],
        j_max: 1,
    };
    let table = compare_spectra(&spec.configs().unwrap(), &spec.sectors, spec.j_max, &EigenOptions::default()).unwrap();
    let errors = table.ground_errors();
    let decreasing = errors.windows(2).all(|w| w[1].1 < w[0].1);
    let fit = scaling_fit("ground", &errors, -0.4).unwrap();
    Outcome {
        pass: decreasing && fit.pass,
        detail: format!(
            "errors {:?}, strictly decreasing={decreasing}, slope {:.3} (<= -0.4)",
            errors.iter().map(|(n, e)| format!("N={n}: {e:.3e}")).collect::<Vec<_>>(),
            fit.slope().unwrap_or(f64::NAN)
        ),
    }
}

type Criterion = (&'static str, &'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1", "Bogoliubov identities", criterion_1, Duration::from_secs(1)),
        ("2", "E_Bog consistency and volume limit", criterion_2, Duration::from_secs(5)),
        ("3", "enumeration matches brute-force oracle", criterion_3, Duration::from_secs(10)),
        ("4a", "2qp below 1qp at low momentum (v1)", criterion_4a, Duration::from_secs(30)),
        ("4b", "maxon then roton in the 1qp curve (v2)", criterion_4b, Duration::from_secs(30)),
        ("5", "exact ED special cases", criterion_5, Duration::from_secs(10)),
        ("6", "hand-derived two-particle sector", criterion_6, Duration::from_secs(1)),
        ("7", "exact inequalities on the reference suite", criterion_7, Duration::from_secs(120)),
        ("8", "single-pair quadratic Hamiltonian", criterion_8, Duration::from_secs(5)),
        ("9", "ground-energy convergence rate", criterion_9, Duration::from_secs(600)),
    ];
    let mut failed = Vec::new();
    for (id, name, f, budget) in criteria {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= budget;
        println!(
            "criterion {id:<3} {} {name}: {} [{:.2}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: {} failed: {}", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
}
