//! Certified numerics for tuples of invertible linear maps: singular value
//! functions, subadditive topological pressure, affinity dimension, joint
//! spectral radius, and desk-scale self-affine set experiments.
//!
//! The central objects are a [`LinearTuple`] `(A_1, ..., A_m)` of invertible
//! `d x d` matrices and the partition sums
//! `S_n = log sum over words i of length n of phi^s(A_{i_n} ... A_{i_1})`,
//! where `phi^s` is the singular value function. By submultiplicativity,
//! `S_n / n` decreases to the pressure `P(A, s) = inf_n S_n / n`, so every
//! finite level yields a rigorous upper bound. For `d = 2`, invariant cone
//! pairs provide a constructive supermultiplicativity constant and hence
//! certified *lower* bounds; Bernoulli measures give non-certified variational
//! lower bounds in any dimension.
//!
//! Quick tour:
//!
//! - [`linalg`]: exact small-matrix primitives (closed-form 2x2 SVD, Jacobi
//!   for larger `d`, singular value function, exterior norms).
//! - [`pressure`]: deterministic partition sums and upper pressure bounds.
//! - [`cones`]: projective-interval cone search and certified lower bounds.
//! - [`measures`]: Bernoulli entropy, Monte Carlo Lyapunov exponents, and the
//!   variational lower bound.
//! - [`dimension`]: similarity dimension, affinity dimension bounds, joint
//!   spectral radius bounds.
//! - [`selfaffine`]: chaos game, ellipsoid covers, box counting, and the
//!   randomized-translation experiment.
//! - [`cli`]: the command-line front end wrapped by the `affinity` binary.
//!
//! Each major capability has a runnable example under `examples/`; start with
//! `cargo run --release --example pressure_bounds`.

pub mod cli;
pub mod cones;
pub mod dimension;
pub mod linalg;
pub mod measures;
pub mod pressure;
pub mod selfaffine;

mod error;

pub use error::{Error, Result};

/// 17-significant-digit decimal formatting; round-trips f64 bit-exactly and
/// is locale-independent. All CSV and JSON emission goes through this.
pub(crate) fn g17(x: f64) -> String {
    format!("{x:.16e}")
}
pub use linalg::{Matrix, SingularValues};
pub use pressure::{LinearTuple, Potential, PressureBounds};
