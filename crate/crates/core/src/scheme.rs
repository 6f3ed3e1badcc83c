//! One time step of the AF and AFCW methods and the driver loop.

use std::path::{Path, PathBuf};

use crate::bc::apply_bc;
use crate::evolution::{EvolutionConfig, FieldView, ReconField, StencilSet};
use crate::grid::Grid;
use crate::recon::{CwenoParams, ReconKind};
use crate::state::{AfState, NodeClass};
use crate::{Error, Result, Vars, P, U, V};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub recon: ReconKind,
    pub evolution: EvolutionConfig,
    pub cfl: f64,
    pub cweno: CwenoParams,
}

impl SchemeConfig {
    pub fn new(recon: ReconKind, evolution: EvolutionConfig, cfl: f64) -> Self {
        Self { recon, evolution, cfl, cweno: CwenoParams::default() }
    }

    pub fn af(evolution: EvolutionConfig, cfl: f64) -> Self {
        Self::new(ReconKind::Af, evolution, cfl)
    }

    pub fn afcw(evolution: EvolutionConfig, cfl: f64) -> Self {
        Self::new(ReconKind::Cweno, evolution, cfl)
    }

    pub fn c(&self) -> f64 {
        self.evolution.c
    }

    pub fn with_cfl(self, cfl: f64) -> Self {
        Self { cfl, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        self.evolution.validate()?;
        if !(self.cfl.is_finite() && self.cfl > 0.0) {
            return Err(Error::InvalidParameter { name: "cfl", reason: format!("must be positive, got {}", self.cfl) });
        }
        Ok(())
    }

    pub fn dt(&self, grid: &Grid) -> f64 {
        grid.time_step(self.cfl, self.c())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    X,
    Y,
}

/// Physical flux of the acoustic system: `f = c (u, p, 0)`, `g = c (v, 0, p)`.
#[inline]
pub fn flux_function(q: Vars, dir: Direction, c: f64) -> Vars {
    match dir {
        Direction::X => [c * q[U], c * q[P], 0.0],
        Direction::Y => [c * q[V], 0.0, c * q[P]],
    }
}

pub const SIMPSON: [f64; 3] = [1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0];

/// Space-time Simpson flux. `nodes[s][t]`: space node `s` (start, midpoint,
/// end of the edge) at time node `t` (`t_n`, half step, full step).
pub fn simpson_flux(nodes: &[[Vars; 3]; 3], dir: Direction, c: f64) -> Vars {
    let mut out = [0.0; 3];
    for s in 0..3 {
        for t in 0..3 {
            let f = flux_function(nodes[s][t], dir, c);
            let w = SIMPSON[s] * SIMPSON[t];
            for k in 0..3 {
                out[k] += w * f[k];
            }
        }
    }
    out
}

/// Advances states on one grid, reusing compiled stencils between steps of
/// equal size.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Grid,
    cfg: SchemeConfig,
    cache: Vec<(StencilSet, StencilSet)>,
}

impl Stepper {
    pub fn new(grid: &Grid, cfg: &SchemeConfig) -> Result<Self> {
        cfg.evolution.validate()?;
        Ok(Self { grid: grid.clone(), cfg: *cfg, cache: Vec::new() })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    /// Half- and full-step stencils for `dt`.
    pub fn stencils(&mut self, dt: f64) -> Result<&(StencilSet, StencilSet)> {
        let (dx, dy) = (self.grid.dx, self.grid.dy);
        let ev = self.cfg.evolution;
        let pos = self.cache.iter().position(|(_, full)| full.matches(&ev, dx, dy, dt, dt));
        let idx = match pos {
            Some(i) => i,
            None => {
                // Circles from boundary nodes may reach one ghost cell, not two.
                if ev.c * dt > dx.min(dy) * (1.0 + 1e-12) {
                    return Err(Error::InvalidParameter {
                        name: "cfl",
                        reason: format!("time step {dt} reaches beyond the ghost layer (CFL above 1)"),
                    });
                }
                let half = StencilSet::compile(&ev, dx, dy, 0.5 * dt, dt)?;
                let full = StencilSet::compile(&ev, dx, dy, dt, dt)?;
                if self.cache.len() >= 4 {
                    self.cache.remove(0);
                }
                self.cache.push((half, full));
                self.cache.len() - 1
            }
        };
        Ok(&self.cache[idx])
    }

    /// One step of size `dt`.
    pub fn step(&mut self, state: &AfState, dt: f64) -> Result<AfState> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter { name: "dt", reason: format!("must be positive, got {dt}") });
        }
        let grid = self.grid.clone();
        let cfg = self.cfg;
        let (half_st, full_st) = self.stencils(dt)?.clone();
        let padded = apply_bc(state, &grid);
        let field = ReconField::build(&padded, cfg.recon, cfg.cweno);

        let mut half = AfState::zeros(&grid);
        let mut next = AfState::zeros(&grid);
        let periodic = grid.is_periodic();
        for class in NodeClass::POINTS {
            let (mut ni, mut nj) = class.shape(&grid);
            if periodic {
                ni = ni.min(grid.nx);
                nj = nj.min(grid.ny);
            }
            let (hs, fs) = (half_st.node(class), full_st.node(class));
            for j in 0..nj {
                for i in 0..ni {
                    let (ii, jj) = (i as isize, j as isize);
                    // The CWENO polynomials do not interpolate the stored point values;
                    // the apex value is taken from the reconstruction there.
                    let center = match cfg.recon {
                        ReconKind::Af => state.get(class, i, j),
                        ReconKind::Cweno => {
                            let (x, y) = class.position(&grid, ii, jj);
                            field.eval(x, y)?
                        }
                    };
                    half.set(class, i, j, hs.apply(&field, ii, jj, &center));
                    next.set(class, i, j, fs.apply(&field, ii, jj, &center));
                }
            }
        }
        if periodic {
            half.sync_periodic();
            next.sync_periodic();
        }

        let c = cfg.c();
        let levels = [state, &half, &next];
        let edge_nodes = |a: (NodeClass, usize, usize), m: (NodeClass, usize, usize), b: (NodeClass, usize, usize)| {
            let mut nodes = [[[0.0; 3]; 3]; 3];
            for (s, &(cl, i, j)) in [a, m, b].iter().enumerate() {
                for (t, lvl) in levels.iter().enumerate() {
                    nodes[s][t] = lvl.get(cl, i, j);
                }
            }
            nodes
        };
        let (nx, ny) = (grid.nx, grid.ny);
        let mut fx = vec![[0.0; 3]; (nx + 1) * ny];
        for j in 0..ny {
            for i in 0..=nx {
                let nodes = edge_nodes((NodeClass::Corner, i, j), (NodeClass::XEdge, i, j), (NodeClass::Corner, i, j + 1));
                fx[j * (nx + 1) + i] = simpson_flux(&nodes, Direction::X, c);
            }
        }
        let mut gy = vec![[0.0; 3]; nx * (ny + 1)];
        for j in 0..=ny {
            for i in 0..nx {
                let nodes = edge_nodes((NodeClass::Corner, i, j), (NodeClass::YEdge, i, j), (NodeClass::Corner, i + 1, j));
                gy[j * nx + i] = simpson_flux(&nodes, Direction::Y, c);
            }
        }
        let (lx, ly) = (dt / grid.dx, dt / grid.dy);
        for j in 0..ny {
            for i in 0..nx {
                let (fl, fr) = (fx[j * (nx + 1) + i], fx[j * (nx + 1) + i + 1]);
                let (gb, gt) = (gy[j * nx + i], gy[(j + 1) * nx + i]);
                let q = state.get(NodeClass::Average, i, j);
                let new = [0, 1, 2].map(|k| q[k] - lx * (fr[k] - fl[k]) - ly * (gt[k] - gb[k]));
                next.set(NodeClass::Average, i, j, new);
            }
        }
        next.time = state.time + dt;
        if !next.is_finite() {
            return Err(Error::BlowUp { step: 0, time: next.time });
        }
        Ok(next)
    }
}

/// One step of size `dt` without stencil reuse.
pub fn step(state: &AfState, grid: &Grid, cfg: &SchemeConfig, dt: f64) -> Result<AfState> {
    Stepper::new(grid, cfg)?.step(state, dt)
}

/// Where and how often [`run`] writes snapshot CSVs.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSpec {
    pub dir: PathBuf,
    pub name: String,
    /// Number of evenly spaced snapshots up to and including `t_end`.
    pub count: usize,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub state: AfState,
    pub steps: usize,
    pub snapshots: Vec<PathBuf>,
}

/// Snapshot file name for `name` at time `t`.
pub fn snapshot_path(dir: &Path, name: &str, t: f64) -> PathBuf {
    dir.join(format!("{name}_t{t}.csv"))
}

/// Steps `initial` to `t_end` with `dt = cfl min(dx, dy) / c`, shortening the
/// last step (and the steps that land on snapshot times) so those times are
/// hit exactly.
pub fn run(
    initial: AfState,
    grid: &Grid,
    cfg: &SchemeConfig,
    t_end: f64,
    snapshots: Option<&SnapshotSpec>,
) -> Result<RunOutcome> {
    cfg.validate()?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter { name: "tend", reason: format!("must be non-negative, got {t_end}") });
    }
    let t0 = initial.time;
    let mut targets: Vec<f64> = match snapshots {
        Some(s) if s.count > 0 => (1..=s.count).map(|k| t0 + (t_end - t0) * k as f64 / s.count as f64).collect(),
        _ => vec![t_end],
    };
    targets.retain(|&t| t > t0);
    let dt = cfg.dt(grid);
    let mut stepper = Stepper::new(grid, cfg)?;
    let mut state = initial;
    let mut steps = 0;
    let mut written = Vec::new();
    for target in targets {
        let start = state.time;
        let span = target - start;
        let n = ((span / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        for k in 0..n {
            let h = if k + 1 < n { dt } else { span - (n - 1) as f64 * dt };
            state = stepper.step(&state, h).map_err(|e| match e {
                Error::BlowUp { time, .. } => Error::BlowUp { step: steps + 1, time },
                e => e,
            })?;
            steps += 1;
        }
        state.time = target;
        if let Some(spec) = snapshots {
            let path = snapshot_path(&spec.dir, &spec.name, target);
            crate::io::csv::write_snapshot(&path, grid, &state)?;
            written.push(path);
        }
    }
    if t_end <= t0 {
        if let Some(spec) = snapshots {
            let path = snapshot_path(&spec.dir, &spec.name, state.time);
            crate::io::csv::write_snapshot(&path, grid, &state)?;
            written.push(path);
        }
    }
    Ok(RunOutcome { state, steps, snapshots: written })
}
