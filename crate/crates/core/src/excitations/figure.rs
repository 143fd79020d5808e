use std::io::Write;

use super::SpectrumTable;
use crate::bogoliubov::dispersion;
use crate::error::Result;
use crate::model::Momentum;

/// Marker class of a point in the spectrum plot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum QuasiClass {
    One,
    Two,
    ThreeOrMore,
}

impl QuasiClass {
    pub fn from_count(n: usize) -> Self {
        match n {
            0 | 1 => QuasiClass::One,
            2 => QuasiClass::Two,
            _ => QuasiClass::ThreeOrMore,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            QuasiClass::One => "1qp",
            QuasiClass::Two => "2qp",
            QuasiClass::ThreeOrMore => ">=3qp",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureRow {
    pub momentum: Momentum,
    /// Signed momentum in one dimension, `|p|` otherwise.
    pub p: f64,
    pub energy: f64,
    pub class: QuasiClass,
}

/// One row per record: sector, energy and quasiparticle-count class.
pub fn classify_for_figure(table: &SpectrumTable) -> Vec<FigureRow> {
    let lat = &table.lattice;
    table
        .sectors
        .iter()
        .flat_map(|(p, records)| {
            let coord = if lat.dim() == 1 {
                lat.spacing() * p.components()[0] as f64
            } else {
                lat.norm(p)
            };
            records.iter().map(move |r| FigureRow {
                momentum: *p,
                p: coord,
                energy: r.energy,
                class: QuasiClass::from_count(r.n_quasi()),
            })
        })
        .collect()
}

/// Writes `n1[,n2,n3],p,energy,class`.
pub fn write_figure_csv<W: Write>(rows: &[FigureRow], dim: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=dim).map(|i| format!("n{i}")).collect();
    header.extend(["p", "energy", "class"].map(String::from));
    w.write_record(&header)?;
    for r in rows {
        let mut row: Vec<String> = r.momentum.components().iter().map(i32::to_string).collect();
        row.push(r.p.to_string());
        row.push(r.energy.to_string());
        row.push(r.class.label().to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DampingStatus {
    Stable,
    /// Some multi-quasiparticle state of the same momentum lies lower.
    Unstable,
    /// The cutoff is below `e_p`, so lower multi-quasiparticle states may
    /// have been missed.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DampingRow {
    pub momentum: Momentum,
    pub e_p: f64,
    pub min_multi: Option<f64>,
    pub status: DampingStatus,
}

/// For every nonzero in-window sector, compares the single quasiparticle
/// with the cheapest multi-quasiparticle state of the same momentum.
pub fn damping_scan(table: &SpectrumTable) -> Result<Vec<DampingRow>> {
    let mut rows = Vec::new();
    for (p, records) in table.sectors.iter().filter(|(p, _)| !p.is_zero()) {
        let e_p = dispersion(&table.lattice, &table.pot, p)?;
        let min_multi = records
            .iter()
            .filter(|r| r.n_quasi() >= 2)
            .map(|r| r.energy)
            .min_by(f64::total_cmp);
        let status = match min_multi {
            Some(m) if m < e_p => DampingStatus::Unstable,
            _ if table.kappa >= e_p => DampingStatus::Stable,
            _ => DampingStatus::Undetermined,
        };
        rows.push(DampingRow {
            momentum: *p,
            e_p,
            min_multi,
            status,
        });
    }
    Ok(rows)
}

/// Nonzero in-window sectors whose single-quasiparticle energy lies above
/// the cutoff, so their lowest levels are not certified.
pub fn unresolved_sectors(table: &SpectrumTable) -> Result<Vec<Momentum>> {
    let mut out = Vec::new();
    for p in table.sectors.keys().filter(|p| !p.is_zero()) {
        if dispersion(&table.lattice, &table.pot, p)? > table.kappa {
            out.push(*p);
        }
    }
    Ok(out)
}
