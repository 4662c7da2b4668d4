//! Violation volumes of Bell inequalities for two-qubit states.
//!
//! For a quantum state and a fixed Bell inequality, the *volume of
//! violation* is the measure of the measurement-setting configurations that
//! break the classical bound; the *relative* volume divides by the measure
//! of all configurations. This crate computes both:
//!
//! - analytically, for the spin singlet under the original three-direction
//!   inequality, where the relative volume is exactly 1/3 (`16π²/3` of
//!   `16π²`) — reproduced here as a closed form, a de-singularized
//!   quadrature, and a gamma-ratio series that can be truncated anywhere;
//! - by Monte Carlo, for any two-qubit state and for CHSH, with reproducible
//!   counter-based substreams and Wilson confidence intervals. Four
//!   independently drawn directions violate CHSH for the singlet in roughly
//!   7% of configurations.
//!
//! # Quick start
//!
//! ```
//! use bellvol::analytic;
//! use bellvol::inequalities::BellFunctional;
//! use bellvol::montecarlo::{estimate_volume, SamplingPlan};
//! use bellvol::quantum::TwoQubitState;
//!
//! let exact = analytic::exact_volume();
//! assert_eq!(exact.relative, 1.0 / 3.0);
//!
//! let estimate = estimate_volume(
//!     &TwoQubitState::singlet(),
//!     &BellFunctional::bell1964(),
//!     &SamplingPlan::new(100_000, 42),
//! )
//! .unwrap();
//! assert!((estimate.fraction - 1.0 / 3.0).abs() < 5.0 * estimate.stderr);
//! ```
//!
//! # Runnable examples
//!
//! One example per capability, under `examples/`:
//!
//! ```text
//! cargo run --example exact_volume          # closed form vs quadrature vs series
//! cargo run --example quadrature_refinement # panel-doubling convergence table
//! cargo run --example series_partial_sums   # gamma-ratio series convergence
//! cargo run --example area_function         # A(z): closed form, series, dispatch
//! cargo run --example boundary_family       # y_z(x) curves of the violation region
//! cargo run --example mc_bell_singlet       # Monte Carlo of the 1/3 fraction
//! cargo run --example mc_chsh               # CHSH fraction, both sign conventions
//! cargo run --example werner_sweep          # violation threshold across the family
//! cargo run --example state_from_file       # custom states from JSON files
//! cargo run --example reproducible_parallel # same seed, any worker count
//! ```
//!
//! The `bellvol` binary wraps the same pipelines for scripting; see the
//! README for the subcommand reference.

pub mod analytic;
pub mod cli;
pub mod inequalities;
pub mod montecarlo;
pub mod quantum;
pub mod report;
pub mod stats;

pub use analytic::{exact_volume, volume_quadrature, volume_series_partial, VolumeResult};
pub use inequalities::{BellFunctional, ChshMode, FunctionalId, Margin};
pub use montecarlo::{estimate_volume, sweep, SamplingPlan, ViolationEstimate};
pub use quantum::{AngleSettings, Direction, TwoQubitState};
