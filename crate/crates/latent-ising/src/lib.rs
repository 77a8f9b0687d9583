//! Structure and potential learning for ferromagnetic Ising models with
//! latent variables, verified against exact brute-force oracles.
//!
//! The observed marginal of an Ising model with hidden nodes (in particular a
//! Restricted Boltzmann Machine) is a Markov random field whose potential is a
//! low-degree multilinear polynomial. This crate learns that MRF from samples
//! of the observed variables and converts between the RBM and MRF views:
//!
//! * [`model`]: domain types: [`model::IsingModel`], [`model::Rbm`],
//!   [`model::MrfPotential`], nondegeneracy validation, the ghost-vertex
//!   transform, and the text file formats (`ising-v1`, `rbm-v1`, `mrf-v1`).
//! * [`exact`]: brute-force enumeration oracle: exact joints, marginals,
//!   conditional influences, and Walsh–Hadamard log-mass transforms. Every
//!   learner in the crate is tested against this module.
//! * [`sampler`]: exact (alias-method) and Gibbs sampling of observed
//!   configurations, plus a histogram representation for very large draws.
//! * [`influence`]: empirical conditional-mean influence estimation with
//!   bit-packed columns, sample-complexity bookkeeping, and an exhaustive
//!   submodularity certifier.
//! * [`structure`]: the two neighborhood learners: a greedy influence
//!   maximizer and an exhaustive subset search, both generic over an
//!   influence source (samples, histograms, or the exact oracle).
//! * [`regression`]: tanh-link iterative regression over the monomial basis
//!   of each learned neighborhood, and assembly of local fits into a global
//!   potential.
//! * [`convert`]: the MRF/RBM compiler: exact hidden-unit marginalization
//!   one way, parity building blocks the other, and the sparse-parity-with-
//!   noise instance generator.
//! * [`partition`]: log-partition-function approximation by Taylor
//!   expansion of the fugacity polynomial, with numerical zero-location
//!   checks.
//! * [`generator`], [`experiment`], [`verify`]: the seeded experiment
//!   harness behind the `latent-ising` binary.
//!
//! Randomness is always explicit: every sampling entry point takes a 64-bit
//! seed and uses the counter-based ChaCha12 stream cipher generator, so
//! outputs are reproducible across runs and platforms.

// Parameter guards are written `!(x > 0.0)` so NaN is rejected along with
// the out-of-range values; the lint's suggested rewrite loses that.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convert;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod generator;
pub mod influence;
pub mod model;
pub mod partition;
pub mod regression;
pub mod sampler;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
