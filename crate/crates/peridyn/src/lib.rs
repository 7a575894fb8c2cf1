//! 1-D nonlocal solid dynamics: nonlinear bond-based peridynamics, its
//! linearization, and the limiting local elastic wave equation, together
//! with the consistency, stability, and convergence studies built on them.
//!
//! The crate is organized as a library; every major capability has a
//! runnable example under `examples/` and the `peridyn` binary drives the
//! same experiment code from flat config files.
//!
//! - [`material`]: influence function, bond potential, derived constants.
//! - [`grid`]: meshes with a nonlocal boundary layer, Lagrange bases,
//!   nodal fields.
//! - [`force`]: nonlinear/linearized nonlocal forces by horizon quadrature,
//!   the local elastic reference, and force-consistency gaps.
//! - [`assembly`]: the banded linearized stiffness operator, Stieltjes
//!   checks, spectral bounds, stable timesteps.
//! - [`integrator`]: central-difference dynamics for all three models.
//! - [`analysis`]: norms, nested-grid restriction, rate estimators.
//! - [`experiment`]: declarative experiment drivers with CSV output.

pub mod analysis;
pub mod assembly;
pub mod error;
pub mod experiment;
pub mod force;
pub mod grid;
pub mod integrator;
pub mod material;
pub mod quadrature;

pub use error::{Error, Result};
pub use grid::{Grid1D, NodalField};
pub use material::MaterialModel;
