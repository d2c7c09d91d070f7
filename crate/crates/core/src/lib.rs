//! Simulation and statistics engine for comparing two singlet verification
//! schemes: the Braunstein-Caves (chained CHSH) test and the random
//! θ-separated measurement test.
//!
//! The crate is organised bottom-up:
//!
//! * [`qstate`] builds and validates two-qubit density matrices.
//! * [`correlations`] computes and samples the test statistics `Ĉ` and `Ô`.
//! * [`adversary`] constructs the attack scenarios, including local hidden
//!   variable models.
//! * [`hypotest`] holds the binomial test machinery, gap functions and
//!   calibration-error bounds.
//! * [`simlab`] runs seeded Monte Carlo power studies.
//! * [`checks`] bundles the oracle cross-checks used by `singlet verify`.

pub mod adversary;
pub mod checks;
pub mod correlations;
mod error;
pub mod hypotest;
pub mod qstate;
pub mod simlab;

pub use error::{Error, Result};

pub use adversary::{BellHemisphereModel, LhvModel, RandomCellModel};
pub use correlations::{BcMeasurementSet, PlanarBasis, RmPair};
pub use hypotest::{Quantile, Scheme, SchemeConfig, TestOutcome};
pub use qstate::{BellLabel, QubitPure, TwoQubitState};
pub use simlab::{PowerRecord, Scenario};

/// A single measurement outcome or product of outcomes, always `+1` or `-1`.
pub type Outcome = i8;
