//! Computational harmonic analysis on bounded Vilenkin groups.
//!
//! The crate works at a finite depth `N`: every function is a step function on
//! the `M_N` cylinder cells of depth `N`, so integrals, norms, transforms and
//! kernel identities are evaluated exactly up to floating-point rounding.
//!
//! - [`group`]: generator sequences, digit expansions, group points and cylinders.
//! - [`funcspace`]: step functions with exact `L_p` and weak-`L_p` quasi-norms.
//! - [`vilenkin`]: characters, the fast transform, Dirichlet/Fejér kernels and means.
//! - [`identities`]: executable checks of kernel decompositions and lower bounds.
//! - [`hardy`]: martingales, maximal functions, atoms, the divergence construction
//!   and strong-convergence sums.
//! - [`cli`]: configuration and the commands behind the `vilenkin` binary.

pub mod cli;
pub mod error;
pub mod funcspace;
pub mod group;
pub mod hardy;
pub mod identities;
pub mod numeric;
pub mod vilenkin;

pub use error::{Error, Result};
pub use funcspace::GridFunction;
pub use group::{Cylinder, DigitBlock, DigitExpansion, GeneratorSequence, GroupPoint};
pub use num_complex::Complex64;
pub use vilenkin::{SpectralVector, VilenkinSystem};
