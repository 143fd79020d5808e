use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::assemble::assemble_hamiltonian;
use super::eigen::{lowest_eigenvalues, EigenOptions};
use super::EdConfig;
use crate::error::{Error, Result};
use crate::model::Momentum;

#[derive(Debug, Clone, Serialize)]
pub struct SectorLevels {
    /// Lowest eigenvalues of `H_N` in the sector, ascending.
    pub eigenvalues: Vec<f64>,
    /// `K_N^j(p)` for `j = 1, 2, ...`; in the zero sector the ground state
    /// is skipped.
    pub excitations: Vec<f64>,
    pub residuals: Vec<f64>,
    pub dim: usize,
    /// `‖H‖_∞` of the sector matrix.
    pub scale: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ManyBodySpectrum {
    pub ground_energy: f64,
    pub sectors: BTreeMap<Momentum, SectorLevels>,
    pub seed: u64,
}

impl ManyBodySpectrum {
    pub fn sector(&self, p: &Momentum) -> Option<&SectorLevels> {
        self.sectors.get(p)
    }

    /// `K_N^j(p)` with `j >= 1`, if computed.
    pub fn excitation(&self, p: &Momentum, j: usize) -> Option<f64> {
        j.checked_sub(1)
            .and_then(|i| self.sectors.get(p)?.excitations.get(i).copied())
    }

    /// Rows `sector_n..., j, eigenvalue, K_N, residual`. The zero sector
    /// starts with the ground state as `j = 0`.
    pub fn write_csv<W: Write>(&self, dim: usize, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=dim).map(|i| format!("sector_n{i}")).collect();
        header.extend(["j", "eigenvalue", "K_N", "residual"].map(String::from));
        w.write_record(&header)?;
        for (p, levels) in &self.sectors {
            let offset = usize::from(p.is_zero());
            for (i, (&e, &r)) in levels.eigenvalues.iter().zip(&levels.residuals).enumerate() {
                let j = i + 1 - offset;
                let mut row: Vec<String> = p.components().iter().map(i32::to_string).collect();
                row.push(j.to_string());
                row.push(format!("{e:.15e}"));
                row.push(format!("{:.15e}", e - self.ground_energy));
                row.push(format!("{r:.3e}"));
                w.write_record(&row)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Sector, eigenvalues, residuals, dimension, matrix scale.
type Solved = (Momentum, Vec<f64>, Vec<f64>, usize, f64);

/// Lowest `count` excitation energies `K_N^j(p)` in each requested sector.
///
/// The zero sector is always diagonalized (with one extra level) because it
/// hosts the ground state. A lower level in another sector is reported as
/// an invariant violation: it means the truncation has broken the physics.
pub fn many_body_excitations(
    cfg: &EdConfig,
    sectors: &[Momentum],
    count: usize,
    opts: &EigenOptions,
) -> Result<ManyBodySpectrum> {
    let zero = Momentum::zero(cfg.lattice.dim());
    let mut wanted: Vec<Momentum> = sectors.to_vec();
    wanted.push(zero);
    wanted.sort();
    wanted.dedup();
    for p in &wanted {
        cfg.lattice.check_momentum(p)?;
    }

    let solved: Vec<Solved> = wanted
        .par_iter()
        .map(|p| {
            let h = assemble_hamiltonian(cfg, p)?;
            let n = if p.is_zero() { count + 1 } else { count };
            let res = lowest_eigenvalues(&h.matrix, n, opts)?;
            Ok((*p, res.values, res.residuals, h.dim(), h.matrix.norm_estimate()))
        })
        .collect::<Result<_>>()?;

    let ground = solved
        .iter()
        .find(|s| s.0.is_zero())
        .and_then(|s| s.1.first().copied())
        .ok_or_else(|| Error::Invariant("zero sector is empty".into()))?;
    let scale = solved.iter().map(|s| s.4).fold(0.0, f64::max).max(1.0);
    let slack = 10.0 * opts.tol * scale;
    for (p, values, ..) in &solved {
        if let Some(&low) = values.first() {
            if low < ground - slack {
                return Err(Error::Invariant(format!(
                    "sector {p} has energy {low} below the zero-sector ground state {ground}"
                )));
            }
        }
    }

    let sectors = solved
        .into_iter()
        .map(|(p, eigenvalues, residuals, dim, scale)| {
            let skip = usize::from(p.is_zero());
            let excitations = eigenvalues.iter().skip(skip).map(|e| e - ground).collect();
            (
                p,
                SectorLevels {
                    eigenvalues,
                    excitations,
                    residuals,
                    dim,
                    scale,
                },
            )
        })
        .collect();
    Ok(ManyBodySpectrum {
        ground_energy: ground,
        sectors,
        seed: opts.seed,
    })
}
