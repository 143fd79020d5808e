use crate::bogoliubov::dispersion;
use crate::error::{Error, Result};
use crate::model::{LatticeSpec, Momentum, Potential};

/// Largest number of constituents the oracle accepts.
pub const ORACLE_MAX_CONSTITUENTS: usize = 8;
/// Largest `|n_i|` of a constituent the oracle accepts.
pub const ORACLE_MAX_SHELL: i32 = 5;

/// Brute-force reference for one sector: recursively generates every
/// nondecreasing constituent sequence from a box scan of the lattice and
/// keeps those with total `p` and energy `<= kappa`.
///
/// Returns `(energy, constituents)` sorted like a ranked sector. Intended
/// for cross-checking [`super::enumerate_below`] on small instances.
pub fn oracle_enumerate(
    lattice: &LatticeSpec,
    pot: &Potential,
    kappa: f64,
    p: &Momentum,
) -> Result<Vec<(f64, Vec<Momentum>)>> {
    if !(kappa >= 0.0) {
        return Err(Error::param("kappa", "must be >= 0"));
    }
    let d = lattice.dim();
    let half = (kappa.sqrt() / lattice.spacing()).floor() as i32;
    if half > ORACLE_MAX_SHELL {
        return Err(Error::TooLarge(format!(
            "oracle box |n_i| <= {half} exceeds {ORACLE_MAX_SHELL}"
        )));
    }
    let mut cands = Vec::new();
    let mut idx = vec![-half; d];
    loop {
        let k = Momentum::new(&idx);
        if !k.is_zero() {
            let e = dispersion(lattice, pot, &k)?;
            if e <= kappa {
                cands.push((k, e));
            }
        }
        let mut axis = d;
        loop {
            if axis == 0 {
                break;
            }
            axis -= 1;
            if idx[axis] < half {
                idx[axis] += 1;
                break;
            }
            idx[axis] = -half;
        }
        if idx.iter().all(|&c| c == -half) {
            break;
        }
    }
    cands.sort_by_key(|c| c.0);
    if let Some(min_e) = cands.iter().map(|c| c.1).min_by(f64::total_cmp) {
        let max_count = (kappa / min_e).floor() as usize;
        if max_count > ORACLE_MAX_CONSTITUENTS {
            return Err(Error::TooLarge(format!(
                "up to {max_count} constituents, oracle limit is {ORACLE_MAX_CONSTITUENTS}"
            )));
        }
    }

    let mut out = Vec::new();
    let mut stack = Vec::new();
    extend(&cands, 0, 0.0, Momentum::zero(d), kappa, p, &mut stack, &mut out);

    let mut records: Vec<super::ExcitationRecord> = out
        .into_iter()
        .map(|(energy, constituents)| super::ExcitationRecord {
            total_momentum: *p,
            energy,
            constituents,
            rank: 0,
        })
        .collect();
    super::rank_sector(&mut records);
    Ok(records.into_iter().map(|r| (r.energy, r.constituents)).collect())
}

#[allow(clippy::too_many_arguments)]
fn extend(
    cands: &[(Momentum, f64)],
    from: usize,
    energy: f64,
    total: Momentum,
    kappa: f64,
    target: &Momentum,
    stack: &mut Vec<Momentum>,
    out: &mut Vec<(f64, Vec<Momentum>)>,
) {
    for (i, &(k, e)) in cands.iter().enumerate().skip(from) {
        let next = energy + e;
        if next > kappa {
            continue;
        }
        stack.push(k);
        let sum = total + k;
        if sum == *target {
            out.push((next, stack.clone()));
        }
        extend(cands, i, next, sum, kappa, target, stack, out);
        stack.pop();
    }
}
