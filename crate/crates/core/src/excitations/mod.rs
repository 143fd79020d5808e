//! The excitation spectrum in the Bogoliubov approximation: all finite sums
//! `e_{k_1} + … + e_{k_j}` of quasiparticle energies over nonzero lattice
//! momenta, binned by total momentum and ranked within each sector.

mod figure;
mod oracle;

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};
use std::io::Write;

pub use figure::{
    classify_for_figure, damping_scan, unresolved_sectors, write_figure_csv, DampingRow, DampingStatus, FigureRow,
    QuasiClass,
};
pub use oracle::{oracle_enumerate, ORACLE_MAX_CONSTITUENTS, ORACLE_MAX_SHELL};

use crate::bogoliubov::dispersion;
use crate::error::{Error, Result};
use crate::model::{LatticeSpec, Momentum, Potential};

/// Energies closer than this are one degenerate level; inside a level the
/// order is by number of quasiparticles, then by constituent encoding.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Default cap on the number of multisets visited by one search.
pub const DEFAULT_MAX_STATES: usize = 5_000_000;

/// One multi-quasiparticle excitation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationRecord {
    pub total_momentum: Momentum,
    pub energy: f64,
    /// Constituent momenta in lexicographically nondecreasing order.
    pub constituents: Vec<Momentum>,
    /// 1-based rank inside the sector, counting multiplicity.
    pub rank: usize,
}

impl ExcitationRecord {
    pub fn n_quasi(&self) -> usize {
        self.constituents.len()
    }
}

/// All excitations with energy `<= kappa` whose total momentum lies in the
/// window `|p| <= window`. Every in-window sector is present, possibly empty.
#[derive(Debug, Clone)]
pub struct SpectrumTable {
    pub lattice: LatticeSpec,
    pub pot: Potential,
    pub kappa: f64,
    pub window: f64,
    pub sectors: BTreeMap<Momentum, Vec<ExcitationRecord>>,
}

impl SpectrumTable {
    pub fn sector(&self, p: &Momentum) -> Result<&[ExcitationRecord]> {
        self.sectors
            .get(p)
            .map(Vec::as_slice)
            .ok_or(Error::OutOfWindow(*p))
    }

    pub fn energies(&self, p: &Momentum) -> Result<Vec<f64>> {
        Ok(self.sector(p)?.iter().map(|r| r.energy).collect())
    }

    pub fn len(&self) -> usize {
        self.sectors.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes `n1[,n2,n3],j,energy,n_quasi,constituents`, one row per record,
    /// sectors in lexicographic order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let d = self.lattice.dim();
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=d).map(|i| format!("n{i}")).collect();
        header.extend(["j", "energy", "n_quasi", "constituents"].map(String::from));
        w.write_record(&header)?;
        for (p, records) in &self.sectors {
            for r in records {
                let mut row: Vec<String> = p.components().iter().map(i32::to_string).collect();
                row.push(r.rank.to_string());
                row.push(r.energy.to_string());
                row.push(r.n_quasi().to_string());
                row.push(join_momenta(&r.constituents));
                w.write_record(&row)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn join_momenta(ks: &[Momentum]) -> String {
    ks.iter().map(Momentum::to_string).collect::<Vec<_>>().join(";")
}

/// The `j`-th excitation energy (1-based) of sector `p`.
///
/// `Ok(None)` means the level is not resolved below the cutoff, not that it
/// does not exist.
pub fn kth_excitation(table: &SpectrumTable, p: &Momentum, j: usize) -> Result<Option<f64>> {
    if j == 0 {
        return Err(Error::param("j", "ranks start at 1"));
    }
    Ok(table.sector(p)?.get(j - 1).map(|r| r.energy))
}

/// Search configuration for [`Enumeration::run`].
#[derive(Debug, Clone)]
pub struct Enumeration<'a> {
    lattice: &'a LatticeSpec,
    pot: &'a Potential,
    kappa: f64,
    window: f64,
    modes: Option<Vec<Momentum>>,
    max_states: usize,
}

impl<'a> Enumeration<'a> {
    pub fn new(lattice: &'a LatticeSpec, pot: &'a Potential, kappa: f64) -> Self {
        Self {
            lattice,
            pot,
            kappa,
            window: 0.0,
            modes: None,
            max_states: DEFAULT_MAX_STATES,
        }
    }

    /// Radius of the total-momentum window.
    pub fn window(mut self, radius: f64) -> Self {
        self.window = radius;
        self
    }

    /// Restricts constituents to the given modes (zero is ignored).
    pub fn restrict_to(mut self, modes: &[Momentum]) -> Self {
        self.modes = Some(modes.iter().filter(|k| !k.is_zero()).copied().collect());
        self
    }

    pub fn max_states(mut self, cap: usize) -> Self {
        self.max_states = cap;
        self
    }

    /// Candidate constituents: nonzero `k` with `e_k <= kappa`, lexicographic.
    /// Since `e_k >= |k|²`, only `|k| <= √kappa` needs scanning.
    fn candidates(&self) -> Result<Vec<(Momentum, f64)>> {
        let mut ks = self.lattice.lattice_points(self.kappa.sqrt(), false);
        if let Some(modes) = &self.modes {
            ks.retain(|k| modes.contains(k));
        }
        let mut out = Vec::with_capacity(ks.len());
        for k in ks {
            let e = dispersion(self.lattice, self.pot, &k)?;
            if e <= self.kappa {
                out.push((k, e));
            }
        }
        Ok(out)
    }

    pub fn run(self) -> Result<SpectrumTable> {
        if !(self.kappa >= 0.0) {
            return Err(Error::param("kappa", format!("must be >= 0, got {}", self.kappa)));
        }
        if !(self.window >= 0.0) {
            return Err(Error::param("window", "must be >= 0"));
        }
        if self.lattice.dim() != self.pot.dim() {
            return Err(Error::Mismatch("potential and lattice dimensions differ".into()));
        }
        let candidates = self.candidates()?;
        let mut sectors: BTreeMap<Momentum, Vec<ExcitationRecord>> = self
            .lattice
            .lattice_points(self.window, true)
            .into_iter()
            .map(|p| (p, Vec::new()))
            .collect();

        let mut frontier = BinaryHeap::new();
        for (i, &(k, e)) in candidates.iter().enumerate() {
            frontier.push(Reverse(State {
                energy: e,
                seq: vec![i as u32],
                total: k,
            }));
        }
        let mut visited = 0usize;
        while let Some(Reverse(state)) = frontier.pop() {
            visited += 1;
            if visited > self.max_states {
                return Err(Error::TooLarge(format!(
                    "more than {} multisets below kappa = {}",
                    self.max_states, self.kappa
                )));
            }
            let last = *state.seq.last().expect("non-empty sequence") as usize;
            for (j, &(k, e)) in candidates.iter().enumerate().skip(last) {
                let energy = state.energy + e;
                if energy <= self.kappa {
                    let mut seq = state.seq.clone();
                    seq.push(j as u32);
                    frontier.push(Reverse(State {
                        energy,
                        seq,
                        total: state.total + k,
                    }));
                }
            }
            if let Some(bin) = sectors.get_mut(&state.total) {
                bin.push(ExcitationRecord {
                    total_momentum: state.total,
                    energy: state.energy,
                    constituents: state.seq.iter().map(|&i| candidates[i as usize].0).collect(),
                    rank: 0,
                });
            }
        }
        for records in sectors.values_mut() {
            rank_sector(records);
        }
        Ok(SpectrumTable {
            lattice: *self.lattice,
            pot: self.pot.clone(),
            kappa: self.kappa,
            window: self.window,
            sectors,
        })
    }
}

/// Complete enumeration of excitations with energy `<= kappa` and total
/// momentum within `window`.
pub fn enumerate_below(lattice: &LatticeSpec, pot: &Potential, kappa: f64, window: f64) -> Result<SpectrumTable> {
    Enumeration::new(lattice, pot, kappa).window(window).run()
}

/// Sorts a sector by energy, groups levels closer than [`DEGENERACY_TOL`],
/// orders each group by `(n_quasi, constituents)` and assigns ranks.
pub(crate) fn rank_sector(records: &mut [ExcitationRecord]) {
    records.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let mut start = 0;
    while start < records.len() {
        let base = records[start].energy;
        let mut end = start + 1;
        while end < records.len() && records[end].energy - base <= DEGENERACY_TOL {
            end += 1;
        }
        records[start..end].sort_by(|a, b| {
            a.n_quasi()
                .cmp(&b.n_quasi())
                .then_with(|| a.constituents.cmp(&b.constituents))
        });
        start = end;
    }
    for (i, r) in records.iter_mut().enumerate() {
        r.rank = i + 1;
    }
}

/// Frontier entry ordered by `(energy, canonical sequence)`.
#[derive(Debug)]
struct State {
    energy: f64,
    seq: Vec<u32>,
    total: Momentum,
}

impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for State {}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        self.energy
            .total_cmp(&other.energy)
            .then_with(|| self.seq.cmp(&other.seq))
    }
}
