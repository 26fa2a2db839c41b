//! Robust non-parametric classification.
//!
//! Weight-function classifiers (k-NN, kernel, recursive histogram), exact
//! adversarial pruning via bipartite matching, exact minimal-perturbation
//! attacks in the ℓ∞ norm, and Monte-Carlo probes of the convergence
//! conditions that make a weight function robust in the large-sample limit.
//!
//! The modules follow the experiment pipeline:
//!
//! * [`data`]: points, labels, datasets, metrics, seeded random streams and
//!   the synthetic scenarios (half-moons and three toy distributions).
//! * [`classifiers`]: the three weight-function families.
//! * [`pruning`]: largest r-separated subset and the prune-then-train pipeline.
//! * [`attacks`]: exact histogram and 1-NN attacks plus a grid-search oracle.
//! * [`evaluation`]: accuracy, empirical astuteness, sweeps and probes.
//! * [`cli`]: the `astute-np` command-line front end.

pub mod attacks;
pub mod classifiers;
pub mod cli;
pub mod data;
pub mod error;
pub mod evaluation;
pub mod pruning;

pub use error::{Error, Result};
