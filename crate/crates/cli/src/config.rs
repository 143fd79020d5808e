use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use bogospec::config::PotentialConfig;
use bogospec::fock_ed::{default_max_excited, EigenOptions};
use bogospec::model::PotentialFamily;
use bogospec::{EdConfig, LatticeSpec, Momentum, Potential};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Text,
}

/// Keys accepted in a `--config` TOML file. Command-line flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct FileConfig {
    pub potential: Option<PotentialConfig>,
    pub L: Option<f64>,
    pub dimension: Option<usize>,
    pub window: Option<f64>,
    pub kappa: Option<f64>,
    pub N: Option<usize>,
    pub mode_radius: Option<f64>,
    pub max_excited: Option<usize>,
    pub sectors: Option<Vec<Vec<i32>>>,
    pub count: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Potential as `gaussian:A:W`, `zero:A` or `free`.
    #[arg(long, global = true)]
    pub vhat: Option<String>,
    /// Torus side length.
    #[arg(long = "L", global = true)]
    pub length: Option<f64>,
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Radius of the total-momentum window.
    #[arg(long, global = true)]
    pub window: Option<f64>,
    /// Energy cutoff for the excitation enumeration.
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// Particle number.
    #[arg(long = "N", global = true)]
    pub n_particles: Option<usize>,
    /// Modes are the lattice momenta with `|p| <= mode-radius`.
    #[arg(long, global = true)]
    pub mode_radius: Option<f64>,
    #[arg(long, global = true)]
    pub max_excited: Option<usize>,
    /// Semicolon-separated integer vectors, e.g. `0;1;-1` or `0,0;1,0`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sectors: Option<String>,
    #[arg(long, global = true)]
    pub count: Option<usize>,
    /// Eigensolver residual tolerance relative to the matrix norm.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with the same keys; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Flags merged over the config file, with nothing defaulted yet.
#[derive(Debug, Clone, Default)]
pub struct Merged {
    pub potential: Option<Potential>,
    pub length: Option<f64>,
    pub dim: Option<usize>,
    pub window: Option<f64>,
    pub kappa: Option<f64>,
    pub n_particles: Option<usize>,
    pub mode_radius: Option<f64>,
    pub max_excited: Option<usize>,
    pub sectors: Option<Vec<Momentum>>,
    pub count: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

pub fn parse_sectors(s: &str, dim: usize) -> Result<Vec<Momentum>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let n: Vec<i32> = t
                .split(',')
                .map(|c| c.trim().parse::<i32>().map_err(|_| anyhow!("invalid sector component {c:?}")))
                .collect::<Result<_>>()?;
            if n.len() != dim {
                bail!("sector {t:?} has {} components, expected {dim}", n.len());
            }
            Ok(Momentum::try_new(&n)?)
        })
        .collect()
}

impl Merged {
    pub fn resolve(flags: &Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let dim = flags
            .dim
            .or(file.dimension)
            .or(file.potential.as_ref().and_then(|p| p.dimension));
        let dim_or_1 = dim.unwrap_or(1);
        let potential = match (&flags.vhat, &file.potential) {
            (Some(s), _) => {
                let family: PotentialFamily = s.parse()?;
                Some(Potential::with_family(family, dim_or_1)?)
            }
            (None, Some(p)) => Some(p.build(dim_or_1)?),
            (None, None) => None,
        };
        let sectors = match (&flags.sectors, &file.sectors) {
            (Some(s), _) => Some(parse_sectors(s, dim_or_1)?),
            (None, Some(v)) => Some(v.iter().map(|n| Momentum::try_new(n)).collect::<bogospec::Result<_>>()?),
            (None, None) => None,
        };
        Ok(Self {
            potential,
            length: flags.length.or(file.L),
            dim,
            window: flags.window.or(file.window),
            kappa: flags.kappa.or(file.kappa),
            n_particles: flags.n_particles.or(file.N),
            mode_radius: flags.mode_radius.or(file.mode_radius),
            max_excited: flags.max_excited.or(file.max_excited),
            sectors,
            count: flags.count.or(file.count),
            tol: flags.tol.or(file.tol),
            seed: flags.seed.or(file.seed),
            format: flags.format.or(file.format),
            out: flags.out.clone().or(file.out),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim.unwrap_or(1)
    }

    pub fn lattice(&self) -> Result<LatticeSpec> {
        Ok(LatticeSpec::new(self.length.unwrap_or(2.0 * PI), self.dim())?)
    }

    pub fn potential(&self) -> Result<Potential> {
        self.potential
            .clone()
            .ok_or_else(|| anyhow!("missing potential: pass --vhat or a [potential] table in --config"))
    }

    pub fn require<T: Copy>(value: Option<T>, key: &str) -> Result<T> {
        value.ok_or_else(|| anyhow!("missing required key {key}"))
    }

    pub fn eigen(&self) -> EigenOptions {
        let d = EigenOptions::default();
        EigenOptions {
            tol: self.tol.unwrap_or(d.tol),
            seed: self.seed.unwrap_or(d.seed),
            ..d
        }
    }

    pub fn ed_config(&self) -> Result<EdConfig> {
        let n = Self::require(self.n_particles, "N")?;
        let radius = Self::require(self.mode_radius, "mode_radius")?;
        let cfg = EdConfig::new(n, self.lattice()?, self.potential()?, radius)?;
        Ok(cfg.with_max_excited(self.max_excited.unwrap_or(default_max_excited(n))))
    }

    /// Requested sectors, or every lattice point inside the mode radius.
    pub fn sectors_or_modes(&self, cfg: &EdConfig) -> Vec<Momentum> {
        self.sectors.clone().unwrap_or_else(|| cfg.modes())
    }
}
