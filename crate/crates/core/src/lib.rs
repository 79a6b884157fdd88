//! Fidelity-difference witness of non-Markovian dynamics for four exactly
//! solvable open quantum systems given in Kraus form.
//!
//! ```
//! use kraus_witness::{scan_g, uniform_grid, ModelSpec, DEFAULT_WITNESS_TOL};
//!
//! let grid = uniform_grid(0.0, 10.0, 0.02)?;
//! let scan = scan_g(&ModelSpec::ye_markov(), &grid, 1.0, DEFAULT_WITNESS_TOL)?;
//! assert!(!scan.witness_triggered);
//! # Ok::<(), kraus_witness::Error>(())
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
mod error;
pub mod figures;
pub mod linalg;
pub mod models;
pub mod probe;
pub mod state;
pub mod witness;

pub use channel::{apply, compose, lgks_rhs, validate_cptp, CptpReport, KrausChannel, LindbladSet};
pub use error::{Error, Result};
pub use linalg::{hermitian_eig, psd_sqrt, ComplexMatrix, Spectrum};
pub use models::{ModelKind, ModelSpec};
pub use probe::{lgks_residual, small_time_exponents, ExponentClass, ExponentReport};
pub use state::{fidelity, trace_distance, validate_density, DensityMatrix};
pub use witness::{
    blp_measure, fidelity_difference, markovianity_verdict, memory_fidelity, scan_g, uniform_grid,
    BlpEstimate, Outcome, PairSampling, ScanResult, Verdict, DEFAULT_WITNESS_TOL,
};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/intro.md")]
mod book_intro {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/fidelity.md")]
mod book_fidelity {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/channels.md")]
mod book_channels {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/models.md")]
mod book_models {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/witnesses.md")]
mod book_witnesses {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
