//! Point access to a piecewise polynomial reconstruction.

use crate::bc::PaddedState;
use crate::grid::Grid;
use crate::recon::{eval_mono, reconstruct_mono, CwenoParams, Mono, ReconKind};
use crate::{Error, Result, Vars};

/// Relative distance (in cell widths) under which a point counts as lying on a
/// grid line.
pub const FACE_TOL: f64 = 1e-9;

/// Uniform cell lattice: cell `(i, j)` is
/// `[x0 + i dx, x0 + (i+1) dx] x [y0 + j dy, y0 + (j+1) dy]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Lattice {
    pub fn of(grid: &Grid) -> Self {
        Self { x0: grid.x_min, y0: grid.y_min, dx: grid.dx, dy: grid.dy }
    }

    #[inline]
    pub fn to_ref(&self, i: isize, j: isize, x: f64, y: f64) -> (f64, f64) {
        let xi = 2.0 * ((x - self.x0) / self.dx - i as f64) - 1.0;
        let eta = 2.0 * ((y - self.y0) / self.dy - j as f64) - 1.0;
        (xi, eta)
    }

    #[inline]
    pub fn x_line(&self, k: isize) -> f64 {
        self.x0 + k as f64 * self.dx
    }

    #[inline]
    pub fn y_line(&self, k: isize) -> f64 {
        self.y0 + k as f64 * self.dy
    }
}

/// Read access to the reconstruction of `(p, u, v)` cell by cell.
pub trait FieldView {
    fn lattice(&self) -> Lattice;

    /// Monomial coefficients of `(p, u, v)` in cell `(i, j)`, or `None` outside
    /// the reconstructed region.
    fn cell(&self, i: isize, j: isize) -> Option<[Mono; 3]>;

    /// Values inside cell `(i, j)`.
    fn eval_in_cell(&self, i: isize, j: isize, x: f64, y: f64) -> Result<Vars> {
        let lat = self.lattice();
        let m = self.cell(i, j).ok_or(Error::OutsideDomain { x, y, radius: 0.0 })?;
        let (xi, eta) = lat.to_ref(i, j, x, y);
        Ok([eval_mono(&m[0], xi, eta), eval_mono(&m[1], xi, eta), eval_mono(&m[2], xi, eta)])
    }

    /// Values at an arbitrary point. On a grid line the adjacent cells'
    /// polynomials are averaged, which keeps the rule symmetric under
    /// reflections of the grid.
    fn eval(&self, x: f64, y: f64) -> Result<Vars> {
        let lat = self.lattice();
        let ci = candidates((x - lat.x0) / lat.dx);
        let cj = candidates((y - lat.y0) / lat.dy);
        let mut out = [0.0; 3];
        let mut count = 0.0;
        for &i in ci.iter().flatten() {
            for &j in cj.iter().flatten() {
                let v = self.eval_in_cell(i, j, x, y)?;
                for k in 0..3 {
                    out[k] += v[k];
                }
                count += 1.0;
            }
        }
        Ok(out.map(|v| v / count))
    }
}

/// Cell index (or the two indices sharing a grid line) for a coordinate in
/// cell units.
#[inline]
fn candidates(t: f64) -> [Option<isize>; 2] {
    let k = t.round();
    if (t - k).abs() <= FACE_TOL {
        [Some(k as isize - 1), Some(k as isize)]
    } else {
        [Some(t.floor() as isize), None]
    }
}

/// The reconstruction of a padded state over cells `-1..=n` in both
/// directions.
#[derive(Debug, Clone)]
pub struct ReconField {
    lattice: Lattice,
    lo: isize,
    ni: usize,
    nj: usize,
    cells: Vec<[Mono; 3]>,
}

impl ReconField {
    /// Ghost cells reconstructed on each side.
    pub const MARGIN: isize = 1;

    pub fn build(state: &PaddedState, kind: ReconKind, params: CwenoParams) -> Self {
        let grid = state.grid();
        let lo = -Self::MARGIN;
        let ni = grid.nx + 2 * Self::MARGIN as usize;
        let nj = grid.ny + 2 * Self::MARGIN as usize;
        let mut cells = Vec::with_capacity(ni * nj);
        for j in 0..nj as isize {
            for i in 0..ni as isize {
                let (ci, cj) = (i + lo, j + lo);
                cells.push([0, 1, 2].map(|v| reconstruct_mono(state, kind, params, v, ci, cj)));
            }
        }
        Self { lattice: Lattice::of(grid), lo, ni, nj, cells }
    }

    /// Cell coefficients as a flat slice, row-major from cell `(-1, -1)`.
    pub fn cells(&self) -> &[[Mono; 3]] {
        &self.cells
    }

    pub fn extent(&self) -> (isize, usize, usize) {
        (self.lo, self.ni, self.nj)
    }

    #[inline]
    pub fn get(&self, i: isize, j: isize) -> &[Mono; 3] {
        let (a, b) = ((i - self.lo) as usize, (j - self.lo) as usize);
        &self.cells[b * self.ni + a]
    }
}

impl FieldView for ReconField {
    fn lattice(&self) -> Lattice {
        self.lattice
    }

    fn cell(&self, i: isize, j: isize) -> Option<[Mono; 3]> {
        let (a, b) = (i - self.lo, j - self.lo);
        if a < 0 || b < 0 || a as usize >= self.ni || b as usize >= self.nj {
            return None;
        }
        Some(self.cells[b as usize * self.ni + a as usize])
    }
}

/// A field that is zero except for one monomial of one variable in one cell.
/// Evolving it yields one stencil weight.
#[derive(Debug, Clone, Copy)]
pub struct UnitField {
    pub lattice: Lattice,
    pub cell: (isize, isize),
    pub var: usize,
    pub monomial: usize,
}

impl FieldView for UnitField {
    fn lattice(&self) -> Lattice {
        self.lattice
    }

    fn cell(&self, i: isize, j: isize) -> Option<[Mono; 3]> {
        let mut m = [[0.0; 9]; 3];
        if (i, j) == self.cell {
            m[self.var][self.monomial] = 1.0;
        }
        Some(m)
    }
}

/// A field given by closed-form functions, cell structure ignored. Used to
/// test the operators on globally smooth data.
pub struct FnField<F: Fn(f64, f64) -> Vars> {
    pub lattice: Lattice,
    pub f: F,
}

impl<F: Fn(f64, f64) -> Vars> FieldView for FnField<F> {
    fn lattice(&self) -> Lattice {
        self.lattice
    }

    fn cell(&self, _i: isize, _j: isize) -> Option<[Mono; 3]> {
        None
    }

    fn eval_in_cell(&self, _i: isize, _j: isize, x: f64, y: f64) -> Result<Vars> {
        Ok((self.f)(x, y))
    }

    fn eval(&self, x: f64, y: f64) -> Result<Vars> {
        Ok((self.f)(x, y))
    }
}
