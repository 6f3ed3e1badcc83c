//! Ghost layers and boundary conditions.

use crate::grid::{BcMode, Grid};
use crate::state::{AfState, NodeClass};

/// Ghost width in cells. Two layers cover evolution circles up to one cell
/// radius plus the CWENO stencil of the first ghost cell.
pub const GHOST: usize = 2;

/// A [`crate::state::Layer`] extended by `GHOST` entries on every side.
#[derive(Debug, Clone, PartialEq)]
pub struct PaddedLayer {
    ni: usize,
    nj: usize,
    stride: usize,
    data: Vec<f64>,
}

impl PaddedLayer {
    fn zeros(ni: usize, nj: usize) -> Self {
        let stride = ni + 2 * GHOST;
        Self { ni, nj, stride, data: vec![0.0; stride * (nj + 2 * GHOST)] }
    }

    #[inline]
    fn offset(&self, i: isize, j: isize) -> usize {
        let g = GHOST as isize;
        debug_assert!(i >= -g && i < self.ni as isize + g);
        debug_assert!(j >= -g && j < self.nj as isize + g);
        (j + g) as usize * self.stride + (i + g) as usize
    }

    #[inline]
    pub fn at(&self, i: isize, j: isize) -> f64 {
        self.data[self.offset(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, v: f64) {
        let k = self.offset(i, j);
        self.data[k] = v;
    }

    pub fn interior_shape(&self) -> (usize, usize) {
        (self.ni, self.nj)
    }
}

/// A state with filled ghost layers, ready for reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct PaddedState {
    pub time: f64,
    grid: Grid,
    layers: [[PaddedLayer; 4]; 3],
}

impl PaddedState {
    #[inline]
    pub fn at(&self, var: usize, class: NodeClass, i: isize, j: isize) -> f64 {
        self.layers[var][class.index()].at(i, j)
    }

    pub fn layer(&self, var: usize, class: NodeClass) -> &PaddedLayer {
        &self.layers[var][class.index()]
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Refills every ghost entry from the interior.
    pub fn fill_ghosts(&mut self) {
        let g = GHOST as isize;
        for class in NodeClass::ALL {
            let (ni, nj) = class.shape(&self.grid);
            for j in -g..nj as isize + g {
                for i in -g..ni as isize + g {
                    let inside = i >= 0 && j >= 0 && i < ni as isize && j < nj as isize;
                    if inside {
                        continue;
                    }
                    let (si, sj) = ghost_source(&self.grid, class, i, j);
                    for var in &mut self.layers {
                        let layer = &mut var[class.index()];
                        let v = layer.at(si as isize, sj as isize);
                        layer.set(i, j, v);
                    }
                }
            }
        }
    }
}

/// Copies `state` into padded storage and fills the ghost layers according to
/// `grid.bc`.
pub fn apply_bc(state: &AfState, grid: &Grid) -> PaddedState {
    let layers = [0, 1, 2].map(|var| {
        NodeClass::ALL.map(|class| {
            let src = state.layer(var, class);
            let (ni, nj) = src.shape();
            let mut p = PaddedLayer::zeros(ni, nj);
            for j in 0..nj {
                for i in 0..ni {
                    p.set(i as isize, j as isize, src.get(i, j));
                }
            }
            p
        })
    });
    let mut padded = PaddedState { time: state.time, grid: grid.clone(), layers };
    padded.fill_ghosts();
    padded
}

/// Interior entry that supplies the ghost entry `(i, j)` of `class`.
///
/// Periodic: wrap-around. Diagonal extrapolation: an entry `k` positions
/// outside the left boundary copies the first interior column shifted `k`
/// rows towards the horizontal midline (down in the upper half, up in the
/// lower half); the other boundaries are the mirror images. Near corners the
/// rules are applied in turn until the index lands inside.
pub fn ghost_source(grid: &Grid, class: NodeClass, i: isize, j: isize) -> (usize, usize) {
    let (ni, nj) = class.shape(grid);
    match grid.bc {
        BcMode::DoublyPeriodic => (
            i.rem_euclid(grid.nx as isize) as usize,
            j.rem_euclid(grid.ny as isize) as usize,
        ),
        BcMode::DiagonalExtrapolation => {
            let last_i = ni as isize - 1;
            let last_j = nj as isize - 1;
            let x_mid = 0.5 * (grid.x_min + grid.x_max);
            let y_mid = 0.5 * (grid.y_min + grid.y_max);
            let (mut i, mut j) = (i, j);
            for _ in 0..16 {
                let (x, y) = class.position(grid, i, j);
                if i < 0 || i > last_i {
                    let (k, edge) = if i < 0 { (-i, 0) } else { (i - last_i, last_i) };
                    j += if y >= y_mid { -k } else { k };
                    i = edge;
                } else if j < 0 || j > last_j {
                    let (k, edge) = if j < 0 { (-j, 0) } else { (j - last_j, last_j) };
                    i += if x >= x_mid { -k } else { k };
                    j = edge;
                } else {
                    return (i as usize, j as usize);
                }
            }
            // Only reachable on grids far smaller than the ghost width allows.
            (i.clamp(0, last_i) as usize, j.clamp(0, last_j) as usize)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic4() -> Grid {
        Grid::new(4, 4, [0.0, 1.0, 0.0, 1.0], BcMode::DoublyPeriodic).unwrap()
    }

    #[test]
    fn periodic_wrap_of_averages() {
        let g = periodic4();
        let mut s = AfState::zeros(&g);
        // 1-based cell (1,1) is 0-based (0,0); its wrap image is ghost (4,0).
        s.layer_mut(0, NodeClass::Average).set(0, 0, 7.0);
        let p = apply_bc(&s, &g);
        assert_eq!(p.at(0, NodeClass::Average, 4, 0), 7.0);
        assert_eq!(p.at(0, NodeClass::Average, 4, 4), 7.0);
        assert_eq!(p.at(0, NodeClass::Average, -4 + 4, -1 + 1), 7.0);
        assert_eq!(p.at(0, NodeClass::Average, -1, 0), 0.0);
    }

    #[test]
    fn periodic_ghosts_of_constant_state_are_constant() {
        let g = periodic4();
        let s = AfState::constant(&g, [1.5, -2.0, 3.0]);
        let p = apply_bc(&s, &g);
        let gh = GHOST as isize;
        for class in NodeClass::ALL {
            let (ni, nj) = class.shape(&g);
            for j in -gh..nj as isize + gh {
                for i in -gh..ni as isize + gh {
                    assert_eq!(p.at(1, class, i, j), -2.0);
                }
            }
        }
    }

    #[test]
    fn periodic_point_ghosts_wrap_over_unique_entries() {
        let g = periodic4();
        let mut s = AfState::zeros(&g);
        s.layer_mut(2, NodeClass::Corner).set(1, 3, 5.0);
        s.sync_periodic();
        let p = apply_bc(&s, &g);
        assert_eq!(p.at(2, NodeClass::Corner, 5, 3), 5.0);
        assert_eq!(p.at(2, NodeClass::Corner, 1, -1), 5.0);
    }

    #[test]
    fn filling_twice_equals_filling_once() {
        for bc in [BcMode::DoublyPeriodic, BcMode::DiagonalExtrapolation] {
            let g = Grid::new(6, 8, [-1.0, 1.0, -1.0, 1.0], bc).unwrap();
            let s = AfState::from_fns(
                &g,
                |i, j| [i as f64, j as f64, (i * j) as f64],
                |x, y| [x, y, x * y],
            );
            let once = apply_bc(&s, &g);
            let mut twice = once.clone();
            twice.fill_ghosts();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn diagonal_ghosts_shift_along_diagonals() {
        let g = Grid::new(8, 8, [-1.0, 1.0, -1.0, 1.0], BcMode::DiagonalExtrapolation).unwrap();
        let a = NodeClass::Average;
        // Left boundary, upper half: row j copies interior row j-1.
        assert_eq!(ghost_source(&g, a, -1, 6), (0, 5));
        assert_eq!(ghost_source(&g, a, -2, 6), (0, 4));
        // Left boundary, lower half: row j copies interior row j+1.
        assert_eq!(ghost_source(&g, a, -1, 1), (0, 2));
        // Right boundary mirrors the left one.
        assert_eq!(ghost_source(&g, a, 8, 6), (7, 5));
        assert_eq!(ghost_source(&g, a, 9, 1), (7, 3));
        // Bottom boundary: right half shifts left, left half shifts right.
        assert_eq!(ghost_source(&g, a, 6, -1), (5, 0));
        assert_eq!(ghost_source(&g, a, 1, -2), (3, 0));
        // Top boundary.
        assert_eq!(ghost_source(&g, a, 6, 8), (5, 7));
        // Corner ghost: bottom-left goes up the main diagonal.
        assert_eq!(ghost_source(&g, a, -1, -1), (0, 0));
        // Point classes use the same shifts, relative to their own last index.
        assert_eq!(ghost_source(&g, NodeClass::XEdge, -1, 6), (0, 5));
        assert_eq!(ghost_source(&g, NodeClass::XEdge, 9, 6), (8, 5));
        assert_eq!(ghost_source(&g, NodeClass::Corner, -2, 1), (0, 3));
    }
}
