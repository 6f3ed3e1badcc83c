//! Uniform Cartesian grids.

use crate::error::{Error, Result};

/// How ghost cells and ghost point values are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BcMode {
    DoublyPeriodic,
    /// Zero-order extrapolation along the grid diagonals, following the
    /// discontinuity lines of the diagonal Riemann problem.
    DiagonalExtrapolation,
}

/// Uniform rectangular mesh. Cell `(i, j)` with `0 <= i < nx`, `0 <= j < ny`
/// covers `[x_min + i dx, x_min + (i+1) dx] x [y_min + j dy, y_min + (j+1) dy]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub dx: f64,
    pub dy: f64,
    pub bc: BcMode,
}

/// Smallest supported number of cells per direction.
pub const MIN_CELLS: usize = 4;

impl Grid {
    /// `extents` is `[x_min, x_max, y_min, y_max]`.
    pub fn new(nx: usize, ny: usize, extents: [f64; 4], bc: BcMode) -> Result<Self> {
        let [x_min, x_max, y_min, y_max] = extents;
        if nx < MIN_CELLS || ny < MIN_CELLS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_CELLS} cells per direction, got {nx} x {ny}"
            )));
        }
        if !extents.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite domain extents".into()));
        }
        if x_max <= x_min || y_max <= y_min {
            return Err(Error::InvalidGrid(format!(
                "inverted extents [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Self {
            nx,
            ny,
            x_min,
            x_max,
            y_min,
            y_max,
            dx: (x_max - x_min) / nx as f64,
            dy: (y_max - y_min) / ny as f64,
            bc,
        })
    }

    /// x-coordinate of the vertical grid line with index `i` (`x_{i-1/2}` in
    /// half-index notation for cell `i`).
    #[inline]
    pub fn x_face(&self, i: isize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    #[inline]
    pub fn y_face(&self, j: isize) -> f64 {
        self.y_min + j as f64 * self.dy
    }

    #[inline]
    pub fn x_center(&self, i: isize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn y_center(&self, j: isize) -> f64 {
        self.y_min + (j as f64 + 0.5) * self.dy
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    pub fn domain_area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }

    pub fn extents(&self) -> [f64; 4] {
        [self.x_min, self.x_max, self.y_min, self.y_max]
    }

    pub fn is_periodic(&self) -> bool {
        self.bc == BcMode::DoublyPeriodic
    }

    /// Time step for a given CFL number, `CFL = c dt / min(dx, dy)`.
    pub fn time_step(&self, cfl: f64, c: f64) -> f64 {
        cfl * self.dx.min(self.dy) / c
    }
}

pub fn build_grid(nx: usize, ny: usize, extents: [f64; 4], bc: BcMode) -> Result<Grid> {
    Grid::new(nx, ny, extents, bc)
}
