//! Active Flux degrees of freedom.
//!
//! Per variable there are four node classes: cell averages, x-edge midpoints
//! `(x_{i-1/2}, y_j)`, y-edge midpoints `(x_i, y_{j-1/2})` and corners
//! `(x_{i-1/2}, y_{j-1/2})`. Storage is one array per variable and class.
//! Point classes include the last grid line, so under periodic boundaries
//! index `nx` (resp. `ny`) duplicates index 0; [`AfState::sync_periodic`]
//! restores that.

use crate::grid::Grid;
use crate::Vars;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeClass {
    Average,
    XEdge,
    YEdge,
    Corner,
}

impl NodeClass {
    pub const ALL: [NodeClass; 4] = [Self::Average, Self::XEdge, Self::YEdge, Self::Corner];
    pub const POINTS: [NodeClass; 3] = [Self::XEdge, Self::YEdge, Self::Corner];

    /// Whether the class sits on vertical grid lines (as opposed to cell
    /// centres in x).
    pub fn on_x_face(self) -> bool {
        matches!(self, Self::XEdge | Self::Corner)
    }

    pub fn on_y_face(self) -> bool {
        matches!(self, Self::YEdge | Self::Corner)
    }

    pub fn shape(self, grid: &Grid) -> (usize, usize) {
        (
            grid.nx + self.on_x_face() as usize,
            grid.ny + self.on_y_face() as usize,
        )
    }

    /// Physical location of entry `(i, j)`; for averages the cell centre.
    pub fn position(self, grid: &Grid, i: isize, j: isize) -> (f64, f64) {
        let x = if self.on_x_face() { grid.x_face(i) } else { grid.x_center(i) };
        let y = if self.on_y_face() { grid.y_face(j) } else { grid.y_center(j) };
        (x, y)
    }

    pub fn index(self) -> usize {
        match self {
            Self::Average => 0,
            Self::XEdge => 1,
            Self::YEdge => 2,
            Self::Corner => 3,
        }
    }
}

/// Dense 2D array, `i` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    ni: usize,
    nj: usize,
    data: Vec<f64>,
}

impl Layer {
    pub fn zeros(ni: usize, nj: usize) -> Self {
        Self { ni, nj, data: vec![0.0; ni * nj] }
    }

    pub fn from_fn(ni: usize, nj: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(ni * nj);
        for j in 0..nj {
            for i in 0..ni {
                data.push(f(i, j));
            }
        }
        Self { ni, nj, data }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.ni, self.nj)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.ni && j < self.nj);
        self.data[j * self.ni + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.ni && j < self.nj);
        self.data[j * self.ni + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

impl std::ops::Index<(usize, usize)> for Layer {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[j * self.ni + i]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Layer {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[j * self.ni + i]
    }
}

/// All degrees of freedom at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct AfState {
    pub time: f64,
    /// `layers[var][class.index()]`
    layers: [[Layer; 4]; 3],
}

impl AfState {
    pub fn zeros(grid: &Grid) -> Self {
        let var = || NodeClass::ALL.map(|c| {
            let (ni, nj) = c.shape(grid);
            Layer::zeros(ni, nj)
        });
        Self { time: 0.0, layers: [var(), var(), var()] }
    }

    /// Builds a state from separate rules for cell averages and point values.
    pub fn from_fns(
        grid: &Grid,
        mut average: impl FnMut(usize, usize) -> Vars,
        mut point: impl FnMut(f64, f64) -> Vars,
    ) -> Self {
        let mut s = Self::zeros(grid);
        for class in NodeClass::ALL {
            let (ni, nj) = class.shape(grid);
            for j in 0..nj {
                for i in 0..ni {
                    let q = if class == NodeClass::Average {
                        average(i, j)
                    } else {
                        let (x, y) = class.position(grid, i as isize, j as isize);
                        point(x, y)
                    };
                    for (var, value) in q.into_iter().enumerate() {
                        s.layers[var][class.index()].set(i, j, value);
                    }
                }
            }
        }
        if grid.is_periodic() {
            s.sync_periodic();
        }
        s
    }

    /// State whose every DOF equals `q`.
    pub fn constant(grid: &Grid, q: Vars) -> Self {
        Self::from_fns(grid, |_, _| q, |_, _| q)
    }

    #[inline]
    pub fn layer(&self, var: usize, class: NodeClass) -> &Layer {
        &self.layers[var][class.index()]
    }

    #[inline]
    pub fn layer_mut(&mut self, var: usize, class: NodeClass) -> &mut Layer {
        &mut self.layers[var][class.index()]
    }

    pub fn averages(&self, var: usize) -> &Layer {
        self.layer(var, NodeClass::Average)
    }

    /// The three variables of one entry.
    pub fn get(&self, class: NodeClass, i: usize, j: usize) -> Vars {
        [0, 1, 2].map(|v| self.layer(v, class).get(i, j))
    }

    pub fn set(&mut self, class: NodeClass, i: usize, j: usize, q: Vars) {
        for (v, value) in q.into_iter().enumerate() {
            self.layer_mut(v, class).set(i, j, value);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.layers
            .iter()
            .flatten()
            .all(|l| l.as_slice().iter().all(|v| v.is_finite()))
    }

    /// Copies the index-0 point values onto the duplicated last grid line.
    pub fn sync_periodic(&mut self) {
        for var in &mut self.layers {
            for class in NodeClass::POINTS {
                let layer = &mut var[class.index()];
                let (ni, nj) = layer.shape();
                if class.on_x_face() {
                    for j in 0..nj {
                        let v = layer.get(0, j);
                        layer.set(ni - 1, j, v);
                    }
                }
                if class.on_y_face() {
                    for i in 0..ni {
                        let v = layer.get(i, 0);
                        layer.set(i, nj - 1, v);
                    }
                }
            }
        }
    }

    /// Sum of cell averages times cell area, per variable.
    pub fn integral(&self, grid: &Grid) -> Vars {
        [0, 1, 2].map(|v| self.averages(v).as_slice().iter().sum::<f64>() * grid.cell_area())
    }

    /// `self + alpha * other`, entrywise (time is kept).
    pub fn axpy(&self, alpha: f64, other: &AfState) -> AfState {
        let mut out = self.clone();
        for (lo, li) in out.layers.iter_mut().flatten().zip(other.layers.iter().flatten()) {
            for (a, b) in lo.as_mut_slice().iter_mut().zip(li.as_slice()) {
                *a += alpha * b;
            }
        }
        out
    }

    pub fn scaled(&self, alpha: f64) -> AfState {
        let mut out = self.clone();
        for l in out.layers.iter_mut().flatten() {
            l.as_mut_slice().iter_mut().for_each(|a| *a *= alpha);
        }
        out
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &AfState) -> f64 {
        self.layers
            .iter()
            .flatten()
            .zip(other.layers.iter().flatten())
            .flat_map(|(a, b)| a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.layers
            .iter()
            .flatten()
            .flat_map(|l| l.as_slice().iter().map(|v| v.abs()))
            .fold(0.0, f64::max)
    }

    /// Number of independent DOFs on a doubly periodic grid.
    pub fn periodic_len(grid: &Grid) -> usize {
        12 * grid.nx * grid.ny
    }

    /// Flattens the independent DOFs of a periodic state. Ordering: variable,
    /// then node class (average, x-edge, y-edge, corner), then `j * nx + i`.
    pub fn to_periodic_vector(&self, grid: &Grid) -> Vec<f64> {
        let mut out = Vec::with_capacity(Self::periodic_len(grid));
        for var in 0..3 {
            for class in NodeClass::ALL {
                let layer = self.layer(var, class);
                for j in 0..grid.ny {
                    for i in 0..grid.nx {
                        out.push(layer.get(i, j));
                    }
                }
            }
        }
        out
    }

    pub fn from_periodic_vector(grid: &Grid, values: &[f64]) -> AfState {
        assert_eq!(values.len(), Self::periodic_len(grid));
        let mut s = Self::zeros(grid);
        let mut it = values.iter();
        for var in 0..3 {
            for class in NodeClass::ALL {
                let layer = s.layer_mut(var, class);
                for j in 0..grid.ny {
                    for i in 0..grid.nx {
                        layer.set(i, j, *it.next().unwrap());
                    }
                }
            }
        }
        s.sync_periodic();
        s
    }

    /// Position of the periodic DOF `k` in [`Self::to_periodic_vector`] order.
    pub fn periodic_dof(grid: &Grid, k: usize) -> (usize, NodeClass, usize, usize) {
        let per_class = grid.nx * grid.ny;
        let var = k / (4 * per_class);
        let class = NodeClass::ALL[(k / per_class) % 4];
        let cell = k % per_class;
        (var, class, cell % grid.nx, cell / grid.nx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{BcMode, Grid};

    fn grid() -> Grid {
        Grid::new(4, 5, [0.0, 1.0, 0.0, 1.0], BcMode::DoublyPeriodic).unwrap()
    }

    #[test]
    fn shapes_follow_node_classes() {
        let g = grid();
        let s = AfState::zeros(&g);
        assert_eq!(s.layer(0, NodeClass::Average).shape(), (4, 5));
        assert_eq!(s.layer(1, NodeClass::XEdge).shape(), (5, 5));
        assert_eq!(s.layer(2, NodeClass::YEdge).shape(), (4, 6));
        assert_eq!(s.layer(0, NodeClass::Corner).shape(), (5, 6));
    }

    #[test]
    fn periodic_vector_roundtrip_restores_duplicates() {
        let g = grid();
        let n = AfState::periodic_len(&g);
        let v: Vec<f64> = (0..n).map(|k| k as f64).collect();
        let s = AfState::from_periodic_vector(&g, &v);
        assert_eq!(s.to_periodic_vector(&g), v);
        let c = s.layer(1, NodeClass::Corner);
        assert_eq!(c.get(4, 2), c.get(0, 2));
        assert_eq!(c.get(3, 5), c.get(3, 0));
        let (var, class, i, j) = AfState::periodic_dof(&g, 2 * 80 + 3 * 20 + 7);
        assert_eq!((var, class, i, j), (2, NodeClass::Corner, 3, 1));
    }

    #[test]
    fn positions() {
        let g = grid();
        assert_eq!(NodeClass::XEdge.position(&g, 1, 0), (0.25, 0.1));
        assert_eq!(NodeClass::Corner.position(&g, 4, 5), (1.0, 1.0));
    }
}
