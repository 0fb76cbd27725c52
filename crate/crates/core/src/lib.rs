//! Exact and Monte Carlo laboratory for the transposition character ratio
//! of random partitions under Plancherel and Jack_α measures.
//!
//! * [`partition`]: Young diagram combinatorics.
//! * [`measures`]: Plancherel/Jack probabilities and the statistic T.
//! * [`growth`]: the growth process, its exact kernel and a sampler.
//! * [`symfun`]: Jack polynomials by Gram–Schmidt, used as a Pieri oracle.
//! * [`verify`]: exhaustive exact checks of the moment identities.
//! * [`limit`]: Kolmogorov distances to the normal law and rate fits.

pub mod error;
pub mod growth;
pub mod limit;
pub mod measures;
pub mod partition;
pub mod rational;
pub mod symfun;
pub mod verify;

pub use error::{Error, Result};
pub use partition::{enumerate_partitions, BoxRef, Partition};
pub use rational::{AlphaParam, Rational};
