//! Bogoliubov approximation of the excitation spectrum of a homogeneous Bose
//! gas on the torus `]-L/2, L/2]^d`, in mean-field units (`ρλ = 1`).
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: potentials given through their Fourier transform and the
//!   momentum lattice `(2π/L)Z^d`.
//! * [`bogoliubov`]: closed-form quasiparticle dispersion, transformation
//!   coefficients, Bogoliubov ground-state energy and its volume limit.
//! * [`excitations`]: complete enumeration of multi-quasiparticle energies
//!   below a cutoff, sector by sector.
//! * [`fock_ed`]: momentum-block exact diagonalization of the many-body
//!   Hamiltonian and its estimating Hamiltonians in a truncated Fock space.
//! * [`verify`]: numerical checks of the operator inequalities and of the
//!   convergence rate towards the Bogoliubov prediction.

pub mod bogoliubov;
pub mod config;
pub mod error;
pub mod excitations;
pub mod fock_ed;
pub mod model;
pub mod output;
pub mod quadrature;
pub mod sum;
pub mod verify;

pub use bogoliubov::{BogoCoefficients, EnergySummary};
pub use error::{Error, Result};

pub use excitations::{ExcitationRecord, SpectrumTable};
pub use fock_ed::{EdConfig, FockState, OperatorKind, SectorMatrix};
pub use verify::VerificationReport;

pub use model::{LatticeSpec, Momentum, Potential};


/// Version string embedded in every output header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
