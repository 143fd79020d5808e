//! Exact diagonalization of the mean-field Hamiltonian in a truncated Fock
//! space, one total-momentum sector at a time.
//!
//! Modes are the lattice momenta with `|p| <= mode_radius`; states carry `N`
//! particles of which at most `max_excited` sit outside the zero mode. Every
//! matrix is the compression of the corresponding operator to this subspace,
//! so its ordered eigenvalues bound those of the full operator from above.

mod assemble;
mod basis;
mod eigen;
mod sparse;
mod spectrum;

pub use assemble::{
    assemble_bogoliubov_quadratic, assemble_estimating, assemble_excited_number, assemble_hamiltonian,
    assemble_kinetic, Bound, OperatorKind, SectorMatrix,
};
pub use basis::{bogoliubov_basis, build_basis, build_sector_basis, FockState, SectorBasis};
pub use eigen::{lowest_eigenvalues, min_eigenvalue_dense, EigenMethod, EigenOptions, EigenResult, DENSE_THRESHOLD};
pub use sparse::SymmetricSparse;
pub use spectrum::{many_body_excitations, ManyBodySpectrum, SectorLevels};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{LatticeSpec, Momentum, Potential};

/// Default cap on the number of basis states in one sector.
pub const DEFAULT_BASIS_CAP: usize = 2_000_000;

/// Default cap on excitations out of the condensate, `min(N, 8)`.
pub fn default_max_excited(n_particles: usize) -> usize {
    n_particles.min(8)
}

/// Deliberate corruptions used to check that the verification suite can
/// fail. Not for production use.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct FaultInjection {
    /// Flip the sign of the condensate pairing term of the estimating
    /// Hamiltonians.
    pub flip_pairing_sign: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdConfig {
    pub n_particles: usize,
    pub lattice: LatticeSpec,
    pub pot: Potential,
    pub mode_radius: f64,
    /// Cap on `N^>`; `None` means no cap beyond `N`.
    pub max_excited: Option<usize>,
    pub basis_cap: usize,
    #[doc(hidden)]
    pub fault: FaultInjection,
}

impl EdConfig {
    pub fn new(n_particles: usize, lattice: LatticeSpec, pot: Potential, mode_radius: f64) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::param("N", "need at least one particle"));
        }
        if !(mode_radius >= 0.0) {
            return Err(Error::param("mode_radius", "must be >= 0"));
        }
        if pot.dim() != lattice.dim() {
            return Err(Error::Mismatch("potential and lattice dimensions differ".into()));
        }
        Ok(Self {
            n_particles,
            lattice,
            pot,
            mode_radius,
            max_excited: None,
            basis_cap: DEFAULT_BASIS_CAP,
            fault: FaultInjection::default(),
        })
    }

    pub fn with_max_excited(mut self, cap: usize) -> Self {
        self.max_excited = Some(cap);
        self
    }

    /// Effective cap on `N^>`.
    pub fn max_excited(&self) -> usize {
        self.max_excited.unwrap_or(self.n_particles).min(self.n_particles)
    }

    /// Mode set, lexicographic; always contains zero and is symmetric under
    /// `p -> -p`.
    pub fn modes(&self) -> Vec<Momentum> {
        self.lattice.lattice_points(self.mode_radius, true)
    }

    /// `ρ = N / L^d`.
    pub fn density(&self) -> f64 {
        self.n_particles as f64 / self.lattice.volume()
    }

    /// `λ = L^d / N`.
    pub fn coupling(&self) -> f64 {
        self.lattice.volume() / self.n_particles as f64
    }
}
