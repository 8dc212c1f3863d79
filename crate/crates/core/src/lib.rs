//! Pseudo-spectral laboratory for the mollified incompressible Navier-Stokes
//! system on the periodic torus `[0, 2pi)^d`, `d = 2, 3`.
//!
//! The crate integrates the regularized system where the advecting velocity
//! is smoothed by a spectral low-pass mollifier `J_m`, records the scalar
//! energy ledger (`|v|_2^2`, `|grad v|_2^2`, `|P Lap v|_2^2`, `|v_t|_2^2`,
//! Lq norms, ...), and evaluates the energy-defect diagnostics built from it:
//! weighted energy identities, the H and F defect integrands with their
//! m- and alpha-limits, a-priori estimate ratios, mu-norm tables, localized
//! energy balances, and backward-uniqueness (log-convexity) checks.
//!
//! All numerics are generic over the scalar type via [`real::Real`]
//! (`f32`/`f64`); the concrete `f64` aliases below are what the CLI and the
//! test suites use.

pub mod bump;
pub mod diagnostics;
pub mod error;
pub mod fft;
pub mod field;
pub mod fit;
pub mod grid;
pub mod init;
pub mod ledger;
pub mod mollifier;
pub mod ops;
pub mod oracle;
pub mod real;
pub mod solver;
pub mod sweep;
pub mod validate;

pub use error::{Error, Result};
pub use grid::GridSpec;
pub use real::Real;

/// Default-precision aliases.
pub type Field64 = field::SpectralField<f64>;
pub type Mollifier64 = mollifier::MollifierSpec<f64>;
pub type SimConfig64 = solver::SimConfig<f64>;
pub type Ledger64 = ledger::TimeSeriesLedger<f64>;
pub type DiagnosticsConfig64 = diagnostics::DiagnosticsConfig<f64>;
pub type SweepPlan64 = sweep::SweepPlan<f64>;
pub type SweepReport64 = sweep::SweepReport<f64>;
