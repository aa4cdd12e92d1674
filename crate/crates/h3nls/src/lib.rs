//! Radial spectral laboratory for the defocusing quintic Schrödinger equation
//! on hyperbolic 3-space.
//!
//! The library works in the hyperboloid model of ℍ³ and restricts to radial
//! (SO(3)-invariant) fields, where the Laplace–Beltrami operator reduces to a
//! one-dimensional operator under the substitution `h(r) = sinh(r) · u(r)`:
//!
//! ```text
//!     Δ_g u = (h″ − h) / sinh r
//! ```
//!
//! so a discrete sine transform of `h` diagonalizes the flow exactly.  On top
//! of that reduction the crate provides
//!
//! * exact hyperboloid geometry (Minkowski form, Lorentz isometries, charts),
//! * the radial Fourier calculus (forward/inverse transform, Plancherel,
//!   spectral multipliers, heat-semigroup frequency projections),
//! * field norms, energies and rescaling/transplant operators between the
//!   Euclidean and hyperbolic radial sectors,
//! * an exact linear propagator plus a Strang split-step solver for the
//!   defocusing quintic equation in both geometries,
//! * numerical verification of dispersive decay, Morawetz identities and
//!   inequalities, refined Sobolev and local-smoothing bounds,
//! * scaling-limit comparisons against rescaled Euclidean solutions, and
//! * a finitary profile-decomposition pipeline for sequences of radial
//!   fields.
//!
//! Corpus-level checks and parameter sweeps run data-parallel through the
//! [`par`] helpers when the `parallel` feature (default) is enabled; the same
//! code paths degrade to sequential iteration when it is disabled.

pub mod corpus;
pub mod diagnostics;
pub mod error;
pub mod euclidean;
pub mod field;
pub mod geometry;
pub mod grid;
pub mod par;
pub mod profiles;
pub mod propagator;
pub mod report;
pub mod transform;
pub mod util;

pub use error::Error;
pub use field::{EnergyReport, Geometry, RadialField};
pub use grid::RadialGrid;
pub use propagator::{SolverConfig, Trajectory};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
