//! Numerical toolkit for Strichartz-type estimates of the free Schrödinger
//! propagator in Wiener amalgam spaces.
//!
//! The crate is organized bottom-up:
//!
//! - [`grid`]: periodic lattices, discrete Fourier transforms, Lebesgue norms.
//! - [`wiener`]: amalgam norms, weak Lorentz sequence norms, the Hölder-type
//!   pairing and exponent interpolation.
//! - [`propagator`]: `e^{itΔ}|∇|^{-σ}`, its adjoint time integral, and the
//!   oscillatory kernel `K_t` with its pointwise bound.
//! - [`exponents`]: exact rational admissibility predicates and region scans.
//! - [`verify`]: experiments tying computed quantities to predicted decay
//!   rates and identities.
//! - [`io`]: binary field container, CSV/JSON emitters and run manifests.

pub mod error;
pub mod exponents;
pub mod grid;
pub mod io;
pub mod norm;
mod par;
pub mod propagator;
pub mod quad;
pub mod special;
pub mod verify;
pub mod wiener;

pub use error::{Error, Result};
pub use exponents::{ConditionSet, Exponent, ExponentTuple, RegionReport, Verdict};
pub use grid::{make_grid, Direction, GridSpec, SampledField, SpaceTimeField};
pub use norm::NormResult;
pub use wiener::{TimeWindow, WindowKind, WindowSpec};
