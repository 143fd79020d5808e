mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bogospec::bogoliubov::{bogoliubov_energy, coefficients, DEFAULT_ENERGY_TAIL_TOL};
use bogospec::excitations::{
    classify_for_figure, damping_scan, unresolved_sectors, write_figure_csv, DampingStatus, Enumeration,
};
use bogospec::fock_ed::many_body_excitations;
use bogospec::output::write_header;
use bogospec::verify::{run_suite, SeriesSpec, Suite, SuiteCase, DEFAULT_EPS};
use bogospec::SpectrumTable;
use clap::{Parser, Subcommand};

use crate::config::{Flags, Format, Merged};

#[derive(Parser)]
#[command(name = "bogospec", version, about = "Bogoliubov excitation spectra and truncated exact diagonalization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Quasiparticle dispersion and Bogoliubov coefficients over the window.
    Dispersion,
    /// Bogoliubov ground-state energy and its infinite-volume density.
    Energy,
    /// All multi-quasiparticle energies up to `--kappa` in the window.
    Enumerate,
    /// Figure data: energies classified by quasiparticle count.
    Figure {
        /// Emit the damping scan instead of the classified energies.
        #[arg(long)]
        damping: bool,
    },
    /// Exact diagonalization of the many-body Hamiltonian.
    Ed,
    /// Checks the exact inequalities and the convergence rate.
    Verify {
        /// Particle numbers for a convergence series on the given
        /// configuration, e.g. `4,8,16,32`.
        #[arg(long, value_delimiter = ',')]
        series: Option<Vec<usize>>,
        #[arg(long, hide = true)]
        corrupt_pairing_sign: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("BOGOSPEC_THREADS") {
        let n: usize = v.parse().with_context(|| format!("BOGOSPEC_THREADS={v:?} is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn sink(m: &Merged) -> Result<Box<dyn Write>> {
    Ok(match &m.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn lattice_entries(m: &Merged) -> Result<Vec<(String, String)>> {
    let lat = m.lattice()?;
    Ok(vec![
        kv("vhat", m.potential()?.family()),
        kv("L", lat.length()),
        kv("dimension", lat.dim()),
        kv("spacing", lat.spacing()),
    ])
}

fn run(cli: Cli) -> Result<bool> {
    let m = Merged::resolve(&cli.flags)?;
    match cli.command {
        Command::Dispersion => dispersion(&m).map(|_| true),
        Command::Energy => energy(&m).map(|_| true),
        Command::Enumerate => enumerate(&m).map(|_| true),
        Command::Figure { damping } => figure(&m, damping).map(|_| true),
        Command::Ed => ed(&m).map(|_| true),
        Command::Verify {
            series,
            corrupt_pairing_sign,
        } => verify(&m, series, corrupt_pairing_sign),
    }
}

fn dispersion(m: &Merged) -> Result<()> {
    let lat = m.lattice()?;
    let pot = m.potential()?;
    let window = m.window.unwrap_or(3.0);
    let mut entries = lattice_entries(m)?;
    entries.push(kv("window", window));
    let mut out = sink(m)?;
    write_header(&mut out, "dispersion", &entries)?;
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=lat.dim()).map(|i| format!("n{i}")).collect();
    header.extend(["p", "e", "alpha", "c", "s"].map(String::from));
    w.write_record(&header)?;
    for k in lat.points_by_shell(window, false) {
        let co = coefficients(&lat, &pot, &k)?;
        let p = if lat.dim() == 1 { lat.physical(&k)[0] } else { lat.norm(&k) };
        let mut row: Vec<String> = k.components().iter().map(i32::to_string).collect();
        row.extend([p, co.e, co.alpha, co.c, co.s].map(|x| x.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn energy(m: &Merged) -> Result<()> {
    let lat = m.lattice()?;
    let pot = m.potential()?;
    let tol = m.tol.unwrap_or(DEFAULT_ENERGY_TAIL_TOL);
    let s = bogoliubov_energy(&lat, &pot, tol)?;
    let v0 = pot.fourier_sq(0.0)?;
    let rows = [
        kv("e_bog", s.e_bog),
        kv("e_bog_rationalized", s.e_bog_alt),
        kv("n_terms", s.n_terms),
        kv("cutoff_radius", s.radius),
        kv("energy_density", 0.5 * v0 + s.e_bog / lat.volume()),
        kv("density_limit", s.density_limit),
        kv("density_limit_error", s.density_error),
    ];
    let mut entries = lattice_entries(m)?;
    entries.push(kv("tail_tol", tol));
    let mut out = sink(m)?;
    write_header(&mut out, "energy", &entries)?;
    match m.format.unwrap_or_default() {
        Format::Text => {
            for (k, v) in rows {
                writeln!(out, "{k} = {v}")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["quantity", "value"])?;
            for (k, v) in rows {
                w.write_record([k, v])?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}

fn table(m: &Merged) -> Result<(SpectrumTable, Vec<(String, String)>)> {
    let lat = m.lattice()?;
    let pot = m.potential()?;
    let kappa = Merged::require(m.kappa, "kappa")?;
    let window = m.window.unwrap_or(3.0);
    let t = Enumeration::new(&lat, &pot, kappa).window(window).run()?;
    let mut entries = lattice_entries(m)?;
    entries.push(kv("window", window));
    entries.push(kv("kappa", kappa));
    Ok((t, entries))
}

fn enumerate(m: &Merged) -> Result<()> {
    let (t, entries) = table(m)?;
    let mut out = sink(m)?;
    write_header(&mut out, "enumerate", &entries)?;
    t.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

fn figure(m: &Merged, damping: bool) -> Result<()> {
    let (t, mut entries) = table(m)?;
    if t.kappa > 0.0 {
        let missing = unresolved_sectors(&t)?;
        if !missing.is_empty() {
            let list: Vec<String> = missing.iter().map(|p| p.to_string()).collect();
            bail!(
                "kappa = {} is below the single-quasiparticle energy in sectors [{}]; raise --kappa or shrink --window",
                t.kappa,
                list.join(" ")
            );
        }
    }
    entries.push(kv("data", if damping { "damping" } else { "classified" }));
    let mut out = sink(m)?;
    write_header(&mut out, "figure", &entries)?;
    if damping {
        let mut w = csv::Writer::from_writer(&mut out);
        let mut header: Vec<String> = (1..=t.lattice.dim()).map(|i| format!("n{i}")).collect();
        header.extend(["e_p", "min_multi", "status"].map(String::from));
        w.write_record(&header)?;
        if t.kappa > 0.0 {
            for r in damping_scan(&t)? {
                let mut row: Vec<String> = r.momentum.components().iter().map(i32::to_string).collect();
                row.push(r.e_p.to_string());
                row.push(r.min_multi.map_or(String::new(), |x| x.to_string()));
                row.push(
                    match r.status {
                        DampingStatus::Stable => "stable",
                        DampingStatus::Unstable => "unstable",
                        DampingStatus::Undetermined => "undetermined",
                    }
                    .into(),
                );
                w.write_record(&row)?;
            }
        }
        w.flush()?;
    } else {
        write_figure_csv(&classify_for_figure(&t), t.lattice.dim(), &mut out)?;
    }
    out.flush()?;
    Ok(())
}

fn ed_entries(m: &Merged, cfg: &bogospec::EdConfig, sectors: &[bogospec::Momentum], count: usize) -> Vec<(String, String)> {
    let eig = m.eigen();
    let list: Vec<String> = sectors.iter().map(|p| p.to_string()).collect();
    vec![
        kv("vhat", cfg.pot.family()),
        kv("N", cfg.n_particles),
        kv("L", cfg.lattice.length()),
        kv("dimension", cfg.lattice.dim()),
        kv("mode_radius", cfg.mode_radius),
        kv("max_excited", cfg.max_excited()),
        kv("sectors", list.join(" ")),
        kv("count", count),
        kv("tol", eig.tol),
        kv("seed", eig.seed),
    ]
}

fn ed(m: &Merged) -> Result<()> {
    let cfg = m.ed_config()?;
    let sectors = m.sectors_or_modes(&cfg);
    let count = m.count.unwrap_or(3);
    let spec = many_body_excitations(&cfg, &sectors, count, &m.eigen())?;
    let mut out = sink(m)?;
    write_header(&mut out, "ed", &ed_entries(m, &cfg, &sectors, count))?;
    spec.write_csv(cfg.lattice.dim(), &mut out)?;
    out.flush()?;
    Ok(())
}

fn verify(m: &Merged, series: Option<Vec<usize>>, corrupt: bool) -> Result<bool> {
    let mut suite = match m.n_particles {
        None => {
            if series.is_some() {
                bail!("--series needs a configuration (--N, --mode-radius, --vhat)");
            }
            Suite::reference()
        }
        Some(_) => {
            let cfg = m.ed_config()?;
            let sectors = m.sectors_or_modes(&cfg);
            let mut suite = Suite::from_cases(vec![SuiteCase {
                cfg: cfg.clone(),
                sectors: sectors.clone(),
            }]);
            if let Some(ns) = series {
                suite.series.push(SeriesSpec {
                    lattice: cfg.lattice,
                    pot: cfg.pot.clone(),
                    mode_radius: cfg.mode_radius,
                    max_excited: m.max_excited,
                    n_values: ns,
                    sectors: vec![],
                    j_max: 0,
                });
            }
            suite
        }
    };
    suite.eigen = m.eigen();
    suite.eps = DEFAULT_EPS.to_vec();
    if let Some(c) = m.count {
        suite.count = c;
    }
    for case in &mut suite.cases {
        case.cfg.fault.flip_pairing_sign = corrupt;
    }
    let mut report = run_suite(&suite)?;
    if corrupt {
        report.provenance.push(kv("fault", "pairing sign flipped in the estimating Hamiltonians"));
    }
    let format = m.format.unwrap_or(Format::Text);
    match (&m.out, format) {
        (Some(_), _) | (None, Format::Csv) => {
            let mut out = sink(m)?;
            write_header(&mut out, "verify", &report.provenance)?;
            report.write_csv(&mut out)?;
            out.flush()?;
            if m.out.is_some() {
                print!("{}", report.summary());
            }
        }
        (None, Format::Text) => print!("{}", report.summary()),
    }
    Ok(report.passed())
}
