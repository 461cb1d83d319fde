//! Qubit-hologram numerics.
//!
//! One spatial coordinate of an eigenvalue problem is traded for the time axis of a small
//! non-Hermitian system: the spatial solution is read off the evolving spinor. The crate
//! covers the 2×2 effective Hamiltonian and its PT phases, neutron partial-wave scattering
//! from complex optical potentials, a shooting solver for the zero mode of a mass domain
//! wall, and the 4×4 Dirac hologram with its operator identities.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod constants;
pub mod dirac;
mod error;
pub mod numerics;
pub mod potential;
pub mod pt;
pub mod scattering;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use bound::{EnergyScan, MassProfile};
pub use constants::Constants;
pub use dirac::DiracParams;
pub use error::{Error, Result};
pub use numerics::{CMatrix, CVector, Complex, HamiltonianEvaluator, Trajectory};
pub use potential::{HalfInteger, OpticalModelSpec, PotentialConfig, PotentialSpec, WoodsSaxonTerm};
pub use pt::{EffectiveParams, PtClassification, PtPhase};
pub use scattering::{
    AngularDistribution, PhaseShiftTable, RadialSolution, ScatteringChannel, ScatteringSetup,
    SolverParams,
};
