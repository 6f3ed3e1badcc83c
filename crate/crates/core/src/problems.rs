//! The four test problems.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::grid::{BcMode, Grid};
use crate::norms::{l1_error, ErrorReport};
use crate::scheme::{run, SchemeConfig};
use crate::state::{AfState, NodeClass};
use crate::{Error, Result, Vars};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    /// Example 1: irrotational time-periodic standing wave.
    SmoothIrrotational,
    /// Example 2: time-periodic wave with a stationary rotational part.
    SmoothRotational,
    /// Example 3: stationary vortex.
    StationaryVortex,
    /// Example 4: Riemann problem with discontinuities along the diagonals.
    DiagonalRiemann,
}

impl ProblemId {
    pub const ALL: [ProblemId; 4] = [
        ProblemId::SmoothIrrotational,
        ProblemId::SmoothRotational,
        ProblemId::StationaryVortex,
        ProblemId::DiagonalRiemann,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::SmoothIrrotational => "example1",
            ProblemId::SmoothRotational => "example2",
            ProblemId::StationaryVortex => "example3",
            ProblemId::DiagonalRiemann => "example4",
        }
    }
}

impl std::fmt::Display for ProblemId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ProblemId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "example1" | "ex1" | "1" | "smooth-irrotational" => Ok(ProblemId::SmoothIrrotational),
            "example2" | "ex2" | "2" | "smooth-rotational" => Ok(ProblemId::SmoothRotational),
            "example3" | "ex3" | "3" | "vortex" => Ok(ProblemId::StationaryVortex),
            "example4" | "ex4" | "4" | "riemann" => Ok(ProblemId::DiagonalRiemann),
            other => Err(format!("unknown problem `{other}` (expected example1..example4)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Problem {
    pub id: ProblemId,
    pub c: f64,
    pub extents: [f64; 4],
    pub bc: BcMode,
}

/// Gauss points per direction for cell averages without closed form.
const AVG_GAUSS: usize = 8;

impl Problem {
    pub fn new(id: ProblemId) -> Self {
        let bc = match id {
            ProblemId::DiagonalRiemann => BcMode::DiagonalExtrapolation,
            _ => BcMode::DoublyPeriodic,
        };
        Self { id, c: 1.0, extents: [-1.0, 1.0, -1.0, 1.0], bc }
    }

    pub fn with_c(self, c: f64) -> Self {
        Self { c, ..self }
    }

    pub fn grid(&self, nx: usize, ny: usize) -> Result<Grid> {
        Grid::new(nx, ny, self.extents, self.bc)
    }

    pub fn has_exact(&self) -> bool {
        matches!(self.id, ProblemId::SmoothIrrotational | ProblemId::SmoothRotational)
    }

    pub fn exact(&self, x: f64, y: f64, t: f64) -> Result<Vars> {
        let c = self.c;
        let (sx, cx) = (TAU * x).sin_cos();
        let (sy, cy) = (TAU * y).sin_cos();
        let (st, ct) = (TAU * c * t).sin_cos();
        match self.id {
            ProblemId::SmoothIrrotational => Ok([-ct * (sx + sy) / c, st * cx / c, st * cy / c]),
            ProblemId::SmoothRotational => Ok([(cx - cy) * st / c, -(sx * ct + sy) / c, (sx + sy * ct) / c]),
            id => Err(Error::NoExactSolution(id.name())),
        }
    }

    /// Exact average over cell `(i, j)` at time `t`, from closed-form
    /// antiderivatives.
    pub fn exact_average(&self, grid: &Grid, i: usize, j: usize, t: f64) -> Result<Vars> {
        let (xa, xb) = (grid.x_face(i as isize), grid.x_face(i as isize + 1));
        let (ya, yb) = (grid.y_face(j as isize), grid.y_face(j as isize + 1));
        let (sx, cx) = (mean_sin(xa, xb), mean_cos(xa, xb));
        let (sy, cy) = (mean_sin(ya, yb), mean_cos(ya, yb));
        let c = self.c;
        let (st, ct) = (TAU * c * t).sin_cos();
        match self.id {
            ProblemId::SmoothIrrotational => Ok([-ct * (sx + sy) / c, st * cx / c, st * cy / c]),
            ProblemId::SmoothRotational => Ok([(cx - cy) * st / c, -(sx * ct + sy) / c, (sx + sy * ct) / c]),
            id => Err(Error::NoExactSolution(id.name())),
        }
    }

    pub fn initial_data(&self, x: f64, y: f64) -> Vars {
        match self.id {
            ProblemId::SmoothIrrotational | ProblemId::SmoothRotational => {
                self.exact(x, y, 0.0).expect("smooth problems have exact solutions")
            }
            ProblemId::StationaryVortex => {
                let r = x.hypot(y);
                if r == 0.0 {
                    return [0.0; 3];
                }
                let speed = vortex_speed(r);
                [0.0, -y / r * speed, x / r * speed]
            }
            ProblemId::DiagonalRiemann => {
                let w = if y.abs() < x.abs() { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
                [1.0, w, w]
            }
        }
    }

    pub fn initial_average(&self, grid: &Grid, i: usize, j: usize) -> Vars {
        match self.id {
            ProblemId::SmoothIrrotational | ProblemId::SmoothRotational => {
                self.exact_average(grid, i, j, 0.0).expect("smooth problems have exact averages")
            }
            ProblemId::StationaryVortex => gauss_average(grid, i, j, AVG_GAUSS, |x, y| self.initial_data(x, y)),
            ProblemId::DiagonalRiemann => {
                let rect = cell_polygon(grid, i, j);
                let f = (wedge_area(&rect, 1.0) + wedge_area(&rect, -1.0)) / grid.cell_area();
                let w = (2.0 * f - 1.0) * FRAC_1_SQRT_2;
                [1.0, w, w]
            }
        }
    }

    pub fn initial_state(&self, grid: &Grid) -> AfState {
        AfState::from_fns(grid, |i, j| self.initial_average(grid, i, j), |x, y| self.initial_data(x, y))
    }

    /// L1 errors of the cell averages of `state` at `state.time`.
    pub fn l1_error(&self, state: &AfState, grid: &Grid) -> Result<Vars> {
        if !self.has_exact() {
            return Err(Error::NoExactSolution(self.id.name()));
        }
        let t = state.time;
        l1_error(state, grid, |i, j| self.exact_average(grid, i, j, t).expect("checked above"))
    }

    /// Runs `cfg` to `t_end` on each `n x n` grid and collects the L1 errors.
    pub fn convergence_study(&self, cfg: &SchemeConfig, resolutions: &[usize], t_end: f64) -> Result<ErrorReport> {
        if !self.has_exact() {
            return Err(Error::NoExactSolution(self.id.name()));
        }
        let mut errors = Vec::with_capacity(resolutions.len());
        for &n in resolutions {
            let grid = self.grid(n, n)?;
            let out = run(self.initial_state(&grid), &grid, cfg, t_end, None)?;
            errors.push(self.l1_error(&out.state, &grid)?);
        }
        Ok(ErrorReport::new(resolutions.iter().map(|&n| (n, n)).collect(), errors))
    }
}

/// Tangential speed of the vortex at radius `r`.
pub fn vortex_speed(r: f64) -> f64 {
    if r <= 0.2 {
        5.0 * r
    } else if r <= 0.4 {
        2.0 - 5.0 * r
    } else {
        0.0
    }
}

/// Mean of `sin(2 pi x)` over `[a, b]`.
fn mean_sin(a: f64, b: f64) -> f64 {
    ((TAU * a).cos() - (TAU * b).cos()) / (TAU * (b - a))
}

/// Mean of `cos(2 pi x)` over `[a, b]`.
fn mean_cos(a: f64, b: f64) -> f64 {
    ((TAU * b).sin() - (TAU * a).sin()) / (TAU * (b - a))
}

/// Tensor Gauss average of `f` over cell `(i, j)` with `n` points per
/// direction.
pub fn gauss_average(grid: &Grid, i: usize, j: usize, n: usize, f: impl Fn(f64, f64) -> Vars) -> Vars {
    let (nodes, weights) = crate::evolution::quadrature::gauss_legendre(n);
    let (xc, yc) = (grid.x_center(i as isize), grid.y_center(j as isize));
    let mut out = [0.0; 3];
    for (a, wa) in nodes.iter().zip(&weights) {
        for (b, wb) in nodes.iter().zip(&weights) {
            let q = f(xc + 0.5 * grid.dx * a, yc + 0.5 * grid.dy * b);
            for k in 0..3 {
                out[k] += 0.25 * wa * wb * q[k];
            }
        }
    }
    out
}

fn cell_polygon(grid: &Grid, i: usize, j: usize) -> Vec<(f64, f64)> {
    let (xa, xb) = (grid.x_face(i as isize), grid.x_face(i as isize + 1));
    let (ya, yb) = (grid.y_face(j as isize), grid.y_face(j as isize + 1));
    vec![(xa, ya), (xb, ya), (xb, yb), (xa, yb)]
}

/// Area of `poly` inside the wedge `s x > |y|` (right wedge for `s = 1`, left
/// for `s = -1`).
fn wedge_area(poly: &[(f64, f64)], s: f64) -> f64 {
    let a = clip(poly, |x, y| s * x - y);
    let b = clip(&a, |x, y| s * x + y);
    shoelace(&b)
}

/// Sutherland-Hodgman clip of a convex polygon to `{h >= 0}` for affine `h`.
fn clip(poly: &[(f64, f64)], h: impl Fn(f64, f64) -> f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(poly.len() + 2);
    for k in 0..poly.len() {
        let p = poly[k];
        let q = poly[(k + 1) % poly.len()];
        let (hp, hq) = (h(p.0, p.1), h(q.0, q.1));
        if hp >= 0.0 {
            out.push(p);
        }
        if (hp >= 0.0) != (hq >= 0.0) {
            let t = hp / (hp - hq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

fn shoelace(poly: &[(f64, f64)]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for k in 0..poly.len() {
        let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
        s += a.0 * b.1 - b.0 * a.1;
    }
    0.5 * s.abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VortexDiagnostics {
    pub max_speed: f64,
    /// `(radius, mean tangential speed)` per bin of width `dx`.
    pub radial_profile: Vec<(f64, f64)>,
}

/// Speed statistics of the cell averages around the origin.
pub fn vortex_diagnostics(state: &AfState, grid: &Grid) -> VortexDiagnostics {
    let nbins = (grid.x_max.max(-grid.x_min).hypot(grid.y_max.max(-grid.y_min)) / grid.dx).ceil() as usize + 1;
    let mut sums = vec![(0.0, 0usize); nbins];
    let mut max_speed: f64 = 0.0;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let q = state.get(NodeClass::Average, i, j);
            max_speed = max_speed.max(q[1].hypot(q[2]));
            let (x, y) = (grid.x_center(i as isize), grid.y_center(j as isize));
            let r = x.hypot(y);
            if r > 0.0 {
                let bin = ((r / grid.dx) as usize).min(nbins - 1);
                sums[bin].0 += (-y * q[1] + x * q[2]) / r;
                sums[bin].1 += 1;
            }
        }
    }
    let radial_profile = sums
        .iter()
        .enumerate()
        .filter(|(_, (_, n))| *n > 0)
        .map(|(k, (s, n))| ((k as f64 + 0.5) * grid.dx, s / *n as f64))
        .collect();
    VortexDiagnostics { max_speed, radial_profile }
}

/// A point sample along a cross-section: arc length and values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionPoint {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub q: Vars,
}

/// Point values on the line `y = 0` (y-edge midpoints of the middle row).
/// Needs an even `ny` on a domain symmetric about `y = 0`.
pub fn section_horizontal(state: &AfState, grid: &Grid) -> Option<Vec<SectionPoint>> {
    if !grid.ny.is_multiple_of(2) || grid.y_face(grid.ny as isize / 2).abs() > 1e-12 {
        return None;
    }
    let j = grid.ny / 2;
    Some(
        (0..grid.nx)
            .map(|i| {
                let (x, y) = NodeClass::YEdge.position(grid, i as isize, j as isize);
                SectionPoint { s: x - grid.x_min, x, y, q: state.get(NodeClass::YEdge, i, j) }
            })
            .collect(),
    )
}

/// Corner values on the diagonal `y = x`. Needs a square grid on a square
/// domain with matching corners.
pub fn section_diagonal(state: &AfState, grid: &Grid) -> Option<Vec<SectionPoint>> {
    if grid.nx != grid.ny || (grid.x_min - grid.y_min).abs() > 1e-12 || (grid.x_max - grid.y_max).abs() > 1e-12 {
        return None;
    }
    Some(
        (0..=grid.nx)
            .map(|k| {
                let (x, y) = NodeClass::Corner.position(grid, k as isize, k as isize);
                let s = (x - grid.x_min) * std::f64::consts::SQRT_2;
                SectionPoint { s, x, y, q: state.get(NodeClass::Corner, k, k) }
            })
            .collect(),
    )
}
