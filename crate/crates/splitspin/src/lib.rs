//! Collective-spin toolkit for ensembles of N spin-1/2 particles split into
//! two sub-ensembles.
//!
//! The crate builds symmetric-subspace reference states (Dicke, coherent,
//! GHZ, one-axis-twisted), splits them exactly or with binomial partition
//! noise, evaluates first/second moments, inference variances and optimal
//! gains, and reports a catalog of EPR-steering and bipartite-entanglement
//! criteria. A brute-force 2^N oracle verifies the symmetric-subspace path at
//! small N, and a measurement-shot pipeline mimics the experimental protocol
//! (joint J_z or random-in-plane J_α measurements, per-shot normalization,
//! bootstrap intervals).
//!
//! The runnable programs under `examples/` cover each capability; the
//! `splitspin` binary exposes the same operations as subcommands.
//!
//! ```
//! use splitspin::criteria::CriteriaEngine;
//! use splitspin::split::split_binomial;
//! use splitspin::states::SymmetricState;
//!
//! let dicke = SymmetricState::dicke(100)?;
//! let mix = split_binomial(&dicke, 1e-12)?;
//! let report = CriteriaEngine::new(&mix).steering_normalized()?;
//! assert!(report.violated && report.ratio.unwrap() < 0.1);
//! # splitspin::Result::Ok(())
//! ```

pub mod criteria;
pub mod error;
pub mod linalg;
pub mod moments;
pub mod oracle;
pub mod shots;
pub mod spectral;
pub mod spin;
pub mod split;
pub mod states;
pub mod sweep;

pub use error::{Error, Result};
pub use moments::{GainVector, MomentSet};
pub use spin::{Axis, OperatorSpec, Side, SpinSector};
pub use split::{SectorMixture, SplitMode};
pub use states::{SectorState, SymmetricState};
