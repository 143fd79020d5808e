use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::EdConfig;
use crate::error::{Error, Result};
use crate::model::Momentum;

/// Occupation numbers over an ordered mode list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState(pub Vec<u16>);

impl FockState {
    pub fn occupations(&self) -> &[u16] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    /// Total momentum `Σ n_k k`.
    pub fn momentum(&self, modes: &[Momentum]) -> Momentum {
        let mut p = Momentum::zero(modes[0].dim());
        for (k, &n) in modes.iter().zip(&self.0) {
            for _ in 0..n {
                p = p + *k;
            }
        }
        p
    }
}

impl fmt::Debug for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

/// Basis states of one momentum sector, in lexicographic order of their
/// occupation vectors.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    pub sector: Momentum,
    pub modes: Vec<Momentum>,
    pub states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl SectorBasis {
    pub(crate) fn new(sector: Momentum, modes: Vec<Momentum>, mut states: Vec<FockState>) -> Self {
        states.sort();
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self {
            sector,
            modes,
            states,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &FockState) -> Option<usize> {
        self.index.get(s).copied()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of ways to put at most `m` particles into `e` modes.
fn capped_count(e: usize, m: usize) -> f64 {
    binomial(m + e, e)
}

/// Generates every occupation vector of the configuration, keeping those
/// accepted by `keep` (called with the total momentum).
fn generate(cfg: &EdConfig, modes: &[Momentum], keep: impl Fn(&Momentum) -> bool) -> Result<BTreeMap<Momentum, Vec<FockState>>> {
    let zero = modes
        .iter()
        .position(Momentum::is_zero)
        .expect("mode set contains zero");
    let excited: Vec<usize> = (0..modes.len()).filter(|&i| i != zero).collect();
    let n = cfg.n_particles;
    let cap_exc = cfg.max_excited();

    let total = capped_count(excited.len(), cap_exc);
    if total > 20.0 * cfg.basis_cap as f64 {
        return Err(Error::BasisTooLarge {
            sector: Momentum::zero(cfg.lattice.dim()),
            size: total.min(usize::MAX as f64) as usize,
            cap: cfg.basis_cap,
            suggested: suggest(excited.len(), cfg.basis_cap),
        });
    }

    let mut out: BTreeMap<Momentum, Vec<FockState>> = BTreeMap::new();
    let mut occ = vec![0u16; modes.len()];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        pos: usize,
        left: usize,
        total: Momentum,
        excited: &[usize],
        modes: &[Momentum],
        zero: usize,
        n: usize,
        cap: usize,
        occ: &mut Vec<u16>,
        keep: &dyn Fn(&Momentum) -> bool,
        out: &mut BTreeMap<Momentum, Vec<FockState>>,
    ) {
        if pos == excited.len() {
            if keep(&total) {
                let used = cap - left;
                occ[zero] = (n - used) as u16;
                out.entry(total).or_default().push(FockState(occ.clone()));
                occ[zero] = 0;
            }
            return;
        }
        let mode = excited[pos];
        let mut t = total;
        for c in 0..=left {
            occ[mode] = c as u16;
            rec(pos + 1, left - c, t, excited, modes, zero, n, cap, occ, keep, out);
            t = t + modes[mode];
        }
        occ[mode] = 0;
    }
    rec(
        0,
        cap_exc,
        Momentum::zero(cfg.lattice.dim()),
        &excited,
        modes,
        zero,
        n,
        cap_exc,
        &mut occ,
        &keep,
        &mut out,
    );
    for (sector, states) in &out {
        if states.len() > cfg.basis_cap {
            return Err(Error::BasisTooLarge {
                sector: *sector,
                size: states.len(),
                cap: cfg.basis_cap,
                suggested: suggest(excited.len(), cfg.basis_cap),
            });
        }
    }
    Ok(out)
}

/// Largest `max_excited` whose whole truncated space fits under `cap`.
fn suggest(excited_modes: usize, cap: usize) -> usize {
    let mut m = 0;
    while capped_count(excited_modes, m + 1) <= cap as f64 {
        m += 1;
    }
    m
}

/// All basis states of the configuration grouped by total momentum.
pub fn build_basis(cfg: &EdConfig) -> Result<BTreeMap<Momentum, SectorBasis>> {
    let modes = cfg.modes();
    let raw = generate(cfg, &modes, |_| true)?;
    Ok(raw
        .into_iter()
        .map(|(p, states)| (p, SectorBasis::new(p, modes.clone(), states)))
        .collect())
}

/// Basis of a single sector; empty if no state has that momentum.
pub fn build_sector_basis(cfg: &EdConfig, sector: &Momentum) -> Result<SectorBasis> {
    cfg.lattice.check_momentum(sector)?;
    let modes = cfg.modes();
    let mut raw = generate(cfg, &modes, |p| p == sector)?;
    let states = raw.remove(sector).unwrap_or_default();
    Ok(SectorBasis::new(*sector, modes, states))
}

/// Basis for the quadratic Bogoliubov Hamiltonian: nonzero modes closed
/// under negation, each occupied at most `max_occupation` times, with total
/// momentum `sector`.
pub fn bogoliubov_basis(modes: &[Momentum], max_occupation: usize, sector: &Momentum) -> Result<SectorBasis> {
    if modes.is_empty() || modes.iter().any(Momentum::is_zero) || modes.iter().any(|k| !modes.contains(&-*k)) {
        return Err(Error::param("modes", "need nonzero modes in ± pairs"));
    }
    let mut modes = modes.to_vec();
    modes.sort();
    modes.dedup();
    let mut states = Vec::new();
    let mut occ = vec![0u16; modes.len()];
    fn rec(pos: usize, total: Momentum, modes: &[Momentum], max: usize, sector: &Momentum, occ: &mut Vec<u16>, out: &mut Vec<FockState>) {
        if pos == modes.len() {
            if total == *sector {
                out.push(FockState(occ.clone()));
            }
            return;
        }
        let mut t = total;
        for c in 0..=max {
            occ[pos] = c as u16;
            rec(pos + 1, t, modes, max, sector, occ, out);
            t = t + modes[pos];
        }
        occ[pos] = 0;
    }
    rec(0, Momentum::zero(modes[0].dim()), &modes, max_occupation, sector, &mut occ, &mut states);
    Ok(SectorBasis::new(*sector, modes, states))
}
