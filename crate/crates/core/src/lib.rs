//! Fully discrete third-order Active Flux (AF) schemes for the two-dimensional
//! linear acoustic system
//!
//! ```text
//! p_t + c div(u) = 0,    u_t + c grad(p) = 0
//! ```
//!
//! on uniform Cartesian grids.
//!
//! Each cell carries a cell average per variable; point values live at cell
//! corners and edge midpoints and are shared between neighbouring cells. A time
//! step reconstructs a biquadratic polynomial per cell (either the globally
//! continuous AF interpolant or a CWENO reconstruction from cell averages),
//! evolves the point values to the half and full time level with one of the
//! truly multidimensional evolution operators in [`evolution`], and updates the
//! averages conservatively with space-time Simpson fluxes.
//!
//! The [`stability`] module assembles the one-step update matrix on a periodic
//! grid and searches for the largest CFL number that keeps its spectral radius
//! at or below one.

pub mod bc;
pub mod error;
pub mod evolution;
pub mod grid;
pub mod io;
pub mod norms;
pub mod problems;
pub mod recon;
pub mod scheme;
pub mod stability;
pub mod state;

pub use error::{Error, Result};
pub use evolution::{AuxRadius, EvolutionConfig, OperatorKind};
pub use grid::{BcMode, Grid};
pub use problems::{Problem, ProblemId};
pub use recon::ReconKind;
pub use scheme::SchemeConfig;
pub use state::AfState;

/// Index of the pressure component in `[p, u, v]` triples.
pub const P: usize = 0;
/// Index of the x-velocity component.
pub const U: usize = 1;
/// Index of the y-velocity component.
pub const V: usize = 2;

/// Values of `(p, u, v)` at one point.
pub type Vars = [f64; 3];

/// Version of this library, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
