use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::basis::{bogoliubov_basis, build_sector_basis, FockState, SectorBasis};
use super::sparse::SymmetricSparse;
use super::EdConfig;
use crate::error::{Error, Result};
use crate::model::{LatticeSpec, Momentum, Potential};

/// Which side of the operator sandwich an estimating Hamiltonian bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// `H_{N,+ε} >= H_N`.
    Upper,
    /// `H_{N,-ε} <= H_N`, valid for `0 < ε <= 1`.
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    Hamiltonian,
    Estimating { eps: f64, bound: Bound },
    Bogoliubov,
    Kinetic,
    ExcitedNumber,
}

/// An operator compressed to one momentum sector of a truncated basis.
/// Rows and columns follow `basis.states`.
#[derive(Debug, Clone)]
pub struct SectorMatrix {
    pub sector: Momentum,
    pub basis: SectorBasis,
    pub matrix: SymmetricSparse,
    pub kind: OperatorKind,
}

impl SectorMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `max |M_ij - M_ji| / max |M_ij|`, zero for the empty matrix.
    pub fn relative_asymmetry(&self) -> f64 {
        let scale = self.matrix.max_abs_entry();
        if scale == 0.0 {
            0.0
        } else {
            self.matrix.asymmetry() / scale
        }
    }
}

/// Shared lookup tables for one truncated mode set.
struct ModeTables {
    modes: Vec<Momentum>,
    index: HashMap<Momentum, usize>,
    zero: Option<usize>,
    kinetic: Vec<f64>,
    /// `v̂` keyed by the integer `|n|²` of the argument.
    vhat: HashMap<i64, f64>,
}

impl ModeTables {
    fn new(lattice: &LatticeSpec, pot: &Potential, modes: &[Momentum]) -> Result<Self> {
        let index = modes.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let kinetic = modes.iter().map(|k| lattice.norm_sq(k)).collect();
        // Transfers are differences of two modes, or a mode itself.
        let mut vhat = HashMap::new();
        let origin = Momentum::zero(lattice.dim());
        for a in modes {
            for b in modes.iter().chain([&origin]) {
                let q = (*a - *b).norm_sq();
                if let std::collections::hash_map::Entry::Vacant(e) = vhat.entry(q) {
                    let h = lattice.spacing();
                    e.insert(pot.fourier_sq(h * h * q as f64)?);
                }
            }
        }
        Ok(Self {
            modes: modes.to_vec(),
            index,
            zero: modes.iter().position(Momentum::is_zero),
            kinetic,
            vhat,
        })
    }

    fn vhat(&self, k: Momentum) -> f64 {
        self.vhat[&k.norm_sq()]
    }

    fn vhat0(&self) -> f64 {
        self.vhat[&0]
    }
}

/// Removes one particle from mode `i`, returning `√n_i`.
#[inline]
fn annihilate(occ: &mut [u16], i: usize) -> Option<f64> {
    if occ[i] == 0 {
        return None;
    }
    let amp = (occ[i] as f64).sqrt();
    occ[i] -= 1;
    Some(amp)
}

/// Adds one particle to mode `i`, returning `√(n_i + 1)`.
#[inline]
fn create(occ: &mut [u16], i: usize) -> f64 {
    occ[i] += 1;
    (occ[i] as f64).sqrt()
}

/// Applies an operator to every basis state and collects
/// `⟨target|O|source⟩`. Contributions are gathered per source state in
/// parallel and summed in basis order.
fn build<F>(basis: &SectorBasis, apply: F) -> SymmetricSparse
where
    F: Fn(&FockState, &mut dyn FnMut(FockState, f64)) + Sync,
{
    let per_source: Vec<Vec<(usize, f64)>> = basis
        .states
        .par_iter()
        .map(|s| {
            let mut out = Vec::new();
            apply(s, &mut |t: FockState, amp: f64| {
                if let Some(j) = basis.index_of(&t) {
                    out.push((j, amp));
                }
            });
            out
        })
        .collect();
    let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); basis.len()];
    for (source, contributions) in per_source.into_iter().enumerate() {
        for (target, amp) in contributions {
            *rows[target].entry(source).or_insert(0.0) += amp;
        }
    }
    SymmetricSparse::from_rows(rows)
}

fn diagonal(basis: &SectorBasis, f: impl Fn(&[u16]) -> f64 + Sync) -> SymmetricSparse {
    let diag: Vec<f64> = basis.states.par_iter().map(|s| f(s.occupations())).collect();
    SymmetricSparse::from_diagonal(&diag)
}

fn excited_number(occ: &[u16], zero: Option<usize>) -> f64 {
    occ.iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != zero)
        .map(|(_, &n)| n as f64)
        .sum()
}

fn kinetic_energy(occ: &[u16], tables: &ModeTables) -> f64 {
    occ.iter().zip(&tables.kinetic).map(|(&n, &e)| n as f64 * e).sum()
}

/// `H_N = Σ |p|² a_p† a_p + (2N)^{-1} Σ_{p,q,k} v̂(k) a_{p+k}† a_{q-k}† a_q a_p`
/// compressed to one sector.
pub fn assemble_hamiltonian(cfg: &EdConfig, sector: &Momentum) -> Result<SectorMatrix> {
    let basis = build_sector_basis(cfg, sector)?;
    assemble_hamiltonian_on(cfg, basis)
}

pub(crate) fn assemble_hamiltonian_on(cfg: &EdConfig, basis: SectorBasis) -> Result<SectorMatrix> {
    let tables = ModeTables::new(&cfg.lattice, &cfg.pot, &basis.modes)?;
    let coupling = 1.0 / (2.0 * cfg.n_particles as f64);
    let m = tables.modes.len();
    let matrix = build(&basis, |state, emit| {
        emit(state.clone(), kinetic_energy(state.occupations(), &tables));
        let mut occ = state.0.clone();
        for p in 0..m {
            let Some(a1) = annihilate(&mut occ, p) else { continue };
            for q in 0..m {
                let Some(a2) = annihilate(&mut occ, q) else { continue };
                let total = tables.modes[p] + tables.modes[q];
                for r in 0..m {
                    let Some(&s) = tables.index.get(&(total - tables.modes[r])) else { continue };
                    let v = tables.vhat(tables.modes[r] - tables.modes[p]);
                    if v == 0.0 {
                        continue;
                    }
                    let a3 = create(&mut occ, r);
                    let a4 = create(&mut occ, s);
                    emit(FockState(occ.clone()), coupling * v * a1 * a2 * a3 * a4);
                    occ[s] -= 1;
                    occ[r] -= 1;
                }
                occ[q] += 1;
            }
            occ[p] += 1;
        }
    });
    Ok(SectorMatrix {
        sector: basis.sector,
        basis,
        matrix,
        kind: OperatorKind::Hamiltonian,
    })
}

/// The estimating Hamiltonian `H_{N,±ε}`: with `σε` the signed parameter,
///
/// ```text
/// ½v̂(0)(N-1) + Σ_{p≠0} (|p|² + v̂(p)) n_p
///   + (2N)^{-1} Σ_{p≠0} v̂(p) (a_0†a_0† a_p a_{-p} + h.c.)
///   - N^{-1} Σ_{p≠0} (v̂(p) + v̂(0)/2) n_p N^> + v̂(0) N^>/(2N)
///   + σε N^{-1} Σ_{p≠0} (v̂(p) + v̂(0)) n_p N_0
///   + (1 + (σε)^{-1}) (2N)^{-1} v(0) L^d N^>(N^> - 1)
/// ```
///
/// where `v(0)` is the periodized potential at the origin.
pub fn assemble_estimating(cfg: &EdConfig, sector: &Momentum, eps: f64, bound: Bound) -> Result<SectorMatrix> {
    let basis = build_sector_basis(cfg, sector)?;
    assemble_estimating_on(cfg, basis, eps, bound)
}

pub(crate) fn assemble_estimating_on(cfg: &EdConfig, basis: SectorBasis, eps: f64, bound: Bound) -> Result<SectorMatrix> {
    let valid = match bound {
        Bound::Upper => eps > 0.0 && eps.is_finite(),
        Bound::Lower => eps > 0.0 && eps <= 1.0,
    };
    if !valid {
        return Err(Error::param("eps", format!("{eps} out of range for {bound:?} bound")));
    }
    let signed = match bound {
        Bound::Upper => eps,
        Bound::Lower => -eps,
    };
    let tables = ModeTables::new(&cfg.lattice, &cfg.pot, &basis.modes)?;
    let zero = tables.zero.expect("mode set contains zero");
    let n = cfg.n_particles as f64;
    let v0 = tables.vhat0();
    let v_origin = cfg.pot.periodized_at_origin(&cfg.lattice)?;
    let volume = cfg.lattice.volume();
    let pairing_sign = if cfg.fault.flip_pairing_sign { -1.0 } else { 1.0 };
    let m = tables.modes.len();
    let neg: Vec<usize> = tables.modes.iter().map(|k| tables.index[&-*k]).collect();
    let vp: Vec<f64> = tables.modes.iter().map(|k| tables.vhat(*k)).collect();

    let matrix = build(&basis, |state, emit| {
        let occ0 = state.occupations();
        let n_exc = excited_number(occ0, Some(zero));
        let n_cond = occ0[zero] as f64;
        let mut diag = 0.5 * v0 * (n - 1.0);
        for p in (0..m).filter(|&p| p != zero) {
            let np = occ0[p] as f64;
            diag += (tables.kinetic[p] + vp[p]) * np;
            diag -= (vp[p] + 0.5 * v0) * np * n_exc / n;
            diag += signed * (vp[p] + v0) * np * n_cond / n;
        }
        diag += v0 * n_exc / (2.0 * n);
        diag += (1.0 + 1.0 / signed) * v_origin * volume * n_exc * (n_exc - 1.0) / (2.0 * n);
        emit(state.clone(), diag);

        let mut occ = state.0.clone();
        for p in (0..m).filter(|&p| p != zero) {
            let coef = pairing_sign * vp[p] / (2.0 * n);
            if coef == 0.0 {
                continue;
            }
            let mp = neg[p];
            // a_0† a_0† a_p a_{-p}
            if let Some(a1) = annihilate(&mut occ, mp) {
                if let Some(a2) = annihilate(&mut occ, p) {
                    let a3 = create(&mut occ, zero);
                    let a4 = create(&mut occ, zero);
                    emit(FockState(occ.clone()), coef * a1 * a2 * a3 * a4);
                    occ[zero] -= 2;
                    occ[p] += 1;
                }
                occ[mp] += 1;
            }
            // a_p† a_{-p}† a_0 a_0
            if let Some(a1) = annihilate(&mut occ, zero) {
                if let Some(a2) = annihilate(&mut occ, zero) {
                    let a3 = create(&mut occ, mp);
                    let a4 = create(&mut occ, p);
                    emit(FockState(occ.clone()), coef * a1 * a2 * a3 * a4);
                    occ[p] -= 1;
                    occ[mp] -= 1;
                    occ[zero] += 1;
                }
                occ[zero] += 1;
            }
        }
    });
    Ok(SectorMatrix {
        sector: basis.sector,
        basis,
        matrix,
        kind: OperatorKind::Estimating { eps, bound },
    })
}

/// Kinetic energy `T = Σ |p|² n_p`.
pub fn assemble_kinetic(cfg: &EdConfig, sector: &Momentum) -> Result<SectorMatrix> {
    let basis = build_sector_basis(cfg, sector)?;
    let tables = ModeTables::new(&cfg.lattice, &cfg.pot, &basis.modes)?;
    let matrix = diagonal(&basis, |occ| kinetic_energy(occ, &tables));
    Ok(SectorMatrix {
        sector: basis.sector,
        basis,
        matrix,
        kind: OperatorKind::Kinetic,
    })
}

/// `N^> = Σ_{p≠0} n_p`.
pub fn assemble_excited_number(cfg: &EdConfig, sector: &Momentum) -> Result<SectorMatrix> {
    let basis = build_sector_basis(cfg, sector)?;
    let zero = basis.modes.iter().position(Momentum::is_zero);
    let matrix = diagonal(&basis, |occ| excited_number(occ, zero));
    Ok(SectorMatrix {
        sector: basis.sector,
        basis,
        matrix,
        kind: OperatorKind::ExcitedNumber,
    })
}

/// The quadratic Bogoliubov Hamiltonian
/// `Σ (|p|² + v̂(p)) a_p† a_p + ½ Σ v̂(p) (a_p a_{-p} + a_p† a_{-p}†)`
/// on nonzero modes in ± pairs, each occupied at most `max_occupation`
/// times, restricted to total momentum `sector`.
pub fn assemble_bogoliubov_quadratic(
    lattice: &LatticeSpec,
    pot: &Potential,
    modes: &[Momentum],
    max_occupation: usize,
    sector: &Momentum,
) -> Result<SectorMatrix> {
    let basis = bogoliubov_basis(modes, max_occupation, sector)?;
    let tables = ModeTables::new(lattice, pot, &basis.modes)?;
    let m = tables.modes.len();
    let neg: Vec<usize> = tables.modes.iter().map(|k| tables.index[&-*k]).collect();
    let vp: Vec<f64> = tables.modes.iter().map(|k| tables.vhat(*k)).collect();
    let matrix = build(&basis, |state, emit| {
        let occ0 = state.occupations();
        let diag: f64 = (0..m).map(|p| (tables.kinetic[p] + vp[p]) * occ0[p] as f64).sum();
        emit(state.clone(), diag);
        let mut occ = state.0.clone();
        for p in 0..m {
            let coef = 0.5 * vp[p];
            if coef == 0.0 {
                continue;
            }
            let mp = neg[p];
            if let Some(a1) = annihilate(&mut occ, mp) {
                if let Some(a2) = annihilate(&mut occ, p) {
                    emit(FockState(occ.clone()), coef * a1 * a2);
                    occ[p] += 1;
                }
                occ[mp] += 1;
            }
            let a1 = create(&mut occ, mp);
            let a2 = create(&mut occ, p);
            emit(FockState(occ.clone()), coef * a1 * a2);
            occ[p] -= 1;
            occ[mp] -= 1;
        }
    });
    Ok(SectorMatrix {
        sector: *sector,
        basis,
        matrix,
        kind: OperatorKind::Bogoliubov,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_ed::FockState;
    use std::f64::consts::PI;

    fn line() -> LatticeSpec {
        LatticeSpec::new(2.0 * PI, 1).unwrap()
    }

    fn zero() -> Momentum {
        Momentum::new(&[0])
    }

    #[test]
    fn two_particle_sector_by_hand() {
        let pot = Potential::gaussian(0.1, 5.0, 1).unwrap();
        let cfg = EdConfig::new(2, line(), pot.clone(), 1.0).unwrap();
        let h = assemble_hamiltonian(&cfg, &zero()).unwrap();
        assert_eq!(h.basis.states, vec![FockState(vec![0, 2, 0]), FockState(vec![1, 0, 1])]);
        let v = |n: f64| 0.1 * (-n * n / 5.0).exp();
        let expected = [
            [v(0.0) / 2.0, v(1.0) / 2f64.sqrt()],
            [v(1.0) / 2f64.sqrt(), 2.0 + (v(0.0) + v(2.0)) / 2.0],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert!((h.matrix.get(i, j) - x).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn free_gas_is_diagonal_kinetic() {
        let cfg = EdConfig::new(4, line(), Potential::free(1), 2.0).unwrap();
        for p in [-2, 0, 1, 3] {
            let h = assemble_hamiltonian(&cfg, &Momentum::new(&[p])).unwrap();
            let t = assemble_kinetic(&cfg, &Momentum::new(&[p])).unwrap();
            assert_eq!(h.matrix, t.matrix);
        }
    }

    #[test]
    fn zero_mode_potential_is_constant() {
        let a = 0.7;
        let cfg = EdConfig::new(5, line(), Potential::zero_mode(a, 1).unwrap(), 2.0).unwrap();
        let h = assemble_hamiltonian(&cfg, &Momentum::new(&[1])).unwrap();
        let t = assemble_kinetic(&cfg, &Momentum::new(&[1])).unwrap();
        let shift = a * 4.0 / 2.0;
        assert_eq!(h.matrix.nnz(), h.dim());
        for (i, (x, y)) in h.matrix.diagonal().iter().zip(t.matrix.diagonal()).enumerate() {
            assert!((x - y - shift).abs() < 1e-13, "state {i}");
        }
    }

    #[test]
    fn condensate_only_estimating_is_scalar() {
        let pot = Potential::gaussian(0.1, 5.0, 1).unwrap();
        let cfg = EdConfig::new(6, line(), pot, 2.0).unwrap().with_max_excited(0);
        for bound in [Bound::Upper, Bound::Lower] {
            let h = assemble_estimating(&cfg, &zero(), 0.5, bound).unwrap();
            assert_eq!(h.dim(), 1);
            assert!((h.matrix.get(0, 0) - 0.5 * 0.1 * 5.0).abs() < 1e-15);
        }
    }

    #[test]
    fn free_estimating_is_kinetic() {
        let cfg = EdConfig::new(4, line(), Potential::free(1), 2.0).unwrap();
        let p = Momentum::new(&[2]);
        let h = assemble_estimating(&cfg, &p, 0.3, Bound::Lower).unwrap();
        assert_eq!(h.matrix, assemble_kinetic(&cfg, &p).unwrap().matrix);
    }

    #[test]
    fn eps_range() {
        let cfg = EdConfig::new(2, line(), Potential::free(1), 1.0).unwrap();
        assert!(assemble_estimating(&cfg, &zero(), 1.5, Bound::Lower).is_err());
        assert!(assemble_estimating(&cfg, &zero(), 0.0, Bound::Upper).is_err());
        assert!(assemble_estimating(&cfg, &zero(), 1.5, Bound::Upper).is_ok());
    }

    #[test]
    fn quadratic_pair_is_tridiagonal() {
        let lat = line();
        let pot = Potential::gaussian(0.5, 1.0, 1).unwrap();
        let modes = [Momentum::new(&[-1]), Momentum::new(&[1])];
        let h = assemble_bogoliubov_quadratic(&lat, &pot, &modes, 5, &zero()).unwrap();
        assert_eq!(h.dim(), 6);
        let b = 0.5 * (-1.0f64).exp();
        assert!((h.matrix.get(1, 0) - b).abs() < 1e-15);
        assert!((h.matrix.get(2, 1) - 2.0 * b).abs() < 1e-15);
        assert_eq!(h.relative_asymmetry(), 0.0);
    }
}
