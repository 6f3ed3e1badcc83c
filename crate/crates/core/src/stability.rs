//! Linear stability of the one-step map on a doubly periodic grid.
//!
//! On an `m x m` periodic grid one step is a real linear map `B` on the
//! `12 m^2` unique DOFs. `B` commutes with grid translations, so all of its
//! columns are translates of twelve impulse responses (one per variable and
//! node class). The dense matrix is assembled from those; the same responses
//! also give the `12 x 12` block symbols whose eigenvalues over all `m^2`
//! wave vectors are exactly the eigenvalues of `B`, which is far cheaper than
//! a dense eigensolve and is what the CFL search uses.

use faer::{c64, Mat};

use crate::grid::{BcMode, Grid};
use crate::scheme::{SchemeConfig, Stepper};
use crate::state::{AfState, NodeClass};
use crate::{Error, Result};

/// Spectral radius allowed above one before a configuration counts as
/// unstable; covers round-off on the neutral modes.
pub const STABILITY_TOL: f64 = 1e-9;

/// Smallest grid on which the evolution circles cannot wrap onto themselves.
pub const MIN_M: usize = 6;

/// Eigenvalues as `(re, im)` pairs.
pub type Eigs = Vec<(f64, f64)>;

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub m: usize,
    pub cfl: f64,
    pub eigenvalues: Eigs,
    pub spectral_radius: f64,
    pub stable: bool,
    pub tolerance: f64,
}

impl StabilityReport {
    fn new(m: usize, cfl: f64, eigenvalues: Eigs) -> Self {
        let spectral_radius = spectral_radius(&eigenvalues);
        let stable = spectral_radius <= 1.0 + STABILITY_TOL;
        Self { m, cfl, eigenvalues, spectral_radius, stable, tolerance: STABILITY_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Eigenvalues of the assembled `12 m^2` square matrix.
    Dense,
    /// Eigenvalues of the `m^2` block symbols.
    Fourier,
}

/// The unit square with `m x m` periodic cells.
pub fn stability_grid(m: usize) -> Result<Grid> {
    if m < MIN_M {
        return Err(Error::InvalidParameter { name: "m", reason: format!("need m >= {MIN_M}, got {m}") });
    }
    Grid::new(m, m, [0.0, 1.0, 0.0, 1.0], BcMode::DoublyPeriodic)
}

/// Step responses to the unit impulses at node `(0, 0)` of each variable and
/// class, as periodic vectors. Index `4 var + class`.
#[derive(Debug, Clone)]
pub struct ImpulseResponses {
    pub m: usize,
    pub dt: f64,
    pub columns: Vec<Vec<f64>>,
}

/// Position in the periodic vector of `(var, class, i, j)` on an `m x m` grid.
#[inline]
pub fn dof_index(m: usize, var: usize, class: NodeClass, i: usize, j: usize) -> usize {
    (4 * var + class.index()) * m * m + j * m + i
}

pub fn impulse_responses(cfg: &SchemeConfig, m: usize) -> Result<ImpulseResponses> {
    let grid = stability_grid(m)?;
    let dt = cfg.dt(&grid);
    impulse_responses_dt(cfg, &grid, dt)
}

fn impulse_responses_dt(cfg: &SchemeConfig, grid: &Grid, dt: f64) -> Result<ImpulseResponses> {
    let m = grid.nx;
    let n = AfState::periodic_len(grid);
    let mut stepper = Stepper::new(grid, cfg)?;
    let mut columns = Vec::with_capacity(12);
    for var in 0..3 {
        for class in NodeClass::ALL {
            let mut e = vec![0.0; n];
            e[dof_index(m, var, class, 0, 0)] = 1.0;
            let s = AfState::from_periodic_vector(grid, &e);
            let out = stepper.step(&s, dt)?;
            columns.push(out.to_periodic_vector(grid));
        }
    }
    Ok(ImpulseResponses { m, dt, columns })
}

/// Dense `B` built from translated impulse responses.
pub fn assemble_b(cfg: &SchemeConfig, m: usize) -> Result<Mat<f64>> {
    let resp = impulse_responses(cfg, m)?;
    Ok(assemble_from_responses(&resp))
}

pub fn assemble_from_responses(resp: &ImpulseResponses) -> Mat<f64> {
    let m = resp.m;
    let mm = m * m;
    let n = 12 * mm;
    let mut b = Mat::<f64>::zeros(n, n);
    for (src, col) in resp.columns.iter().enumerate() {
        for j0 in 0..m {
            for i0 in 0..m {
                let c = src * mm + j0 * m + i0;
                for (r, &v) in col.iter().enumerate() {
                    if v == 0.0 {
                        continue;
                    }
                    let block = r / mm;
                    let (i, j) = (r % m, (r % mm) / m);
                    let row = block * mm + ((j + j0) % m) * m + (i + i0) % m;
                    b[(row, c)] = v;
                }
            }
        }
    }
    b
}

/// Dense `B` with column `k` equal to the step of the `k`-th unit vector.
/// Quadratic cost; meant for cross-checks on small grids.
pub fn assemble_b_direct(cfg: &SchemeConfig, m: usize) -> Result<Mat<f64>> {
    let grid = stability_grid(m)?;
    let dt = cfg.dt(&grid);
    let n = AfState::periodic_len(&grid);
    let mut stepper = Stepper::new(&grid, cfg)?;
    let mut b = Mat::<f64>::zeros(n, n);
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        let out = stepper.step(&AfState::from_periodic_vector(&grid, &e), dt)?;
        for (r, v) in out.to_periodic_vector(&grid).into_iter().enumerate() {
            b[(r, k)] = v;
        }
    }
    Ok(b)
}

/// All eigenvalues of a real square matrix.
pub fn eigenvalues(b: &Mat<f64>) -> Result<Eigs> {
    if b.nrows() != b.ncols() {
        return Err(Error::Eigen(format!("matrix is {}x{}, not square", b.nrows(), b.ncols())));
    }
    if (0..b.ncols()).any(|c| b.col(c).iter().any(|v| !v.is_finite())) {
        return Err(Error::Eigen("matrix has non-finite entries".into()));
    }
    let ev = b.eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    Ok(ev.into_iter().map(|z| (z.re, z.im)).collect())
}

pub fn spectral_radius(eigs: &[(f64, f64)]) -> f64 {
    eigs.iter().map(|&(re, im)| re.hypot(im)).fold(0.0, f64::max)
}

/// Eigenvalues of `B` from the block symbols
/// `S(k) = sum_d K(d) exp(-2 pi i k.d / m)`.
pub fn symbol_eigenvalues(resp: &ImpulseResponses) -> Result<Eigs> {
    let m = resp.m;
    let mm = m * m;
    let mut out = Vec::with_capacity(12 * mm);
    let tau = std::f64::consts::TAU / m as f64;
    // Only the nonzero offsets of each response block matter.
    let mut taps: Vec<(usize, usize, usize, usize, f64)> = Vec::new();
    for (src, col) in resp.columns.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            if v != 0.0 {
                taps.push((r / mm, src, r % m, (r % mm) / m, v));
            }
        }
    }
    for ky in 0..m {
        for kx in 0..m {
            let mut s = Mat::<c64>::zeros(12, 12);
            for &(row, col, i, j, v) in &taps {
                let phase = -tau * ((kx * i + ky * j) % m) as f64;
                let (sn, cs) = phase.sin_cos();
                s[(row, col)] += c64::new(v * cs, v * sn);
            }
            let ev = s.eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))?;
            out.extend(ev.into_iter().map(|z| (z.re, z.im)));
        }
    }
    Ok(out)
}

/// Eigenvalues and verdict for one configuration.
pub fn analyze(cfg: &SchemeConfig, m: usize, method: Method) -> Result<StabilityReport> {
    let resp = impulse_responses(cfg, m)?;
    let eigs = match method {
        Method::Dense => eigenvalues(&assemble_from_responses(&resp))?,
        Method::Fourier => symbol_eigenvalues(&resp)?,
    };
    Ok(StabilityReport::new(m, cfg.cfl, eigs))
}

/// Spectral radius at `cfg.cfl`, via the block symbols.
pub fn spectral_radius_at(cfg: &SchemeConfig, m: usize) -> Result<f64> {
    Ok(analyze(cfg, m, Method::Fourier)?.spectral_radius)
}

/// Largest CFL number with spectral radius at most `1 + STABILITY_TOL`, by
/// bisection to width `tol`. If `cfl_lo` is unstable it is halved (at most
/// eight times); if `cfl_hi` is stable it is raised towards 1, the largest
/// time step the ghost layer supports.
pub fn max_cfl(cfg: &SchemeConfig, m: usize, cfl_lo: f64, cfl_hi: f64, tol: f64) -> Result<f64> {
    if !(cfl_lo > 0.0 && cfl_hi > cfl_lo && tol > 0.0) {
        return Err(Error::Bracket { lo: cfl_lo, hi: cfl_hi, reason: "need 0 < lo < hi and tol > 0".into() });
    }
    let stable = |cfl: f64| -> Result<bool> { Ok(spectral_radius_at(&cfg.with_cfl(cfl), m)? <= 1.0 + STABILITY_TOL) };
    let (mut lo, mut hi) = (cfl_lo, cfl_hi.min(1.0));
    let mut tries = 0;
    while !stable(lo)? {
        tries += 1;
        if tries > 8 {
            return Err(Error::Bracket { lo, hi: cfl_hi, reason: "no stable CFL found".into() });
        }
        hi = lo;
        lo *= 0.5;
    }
    while stable(hi)? {
        if hi >= 1.0 {
            return Err(Error::Bracket { lo: cfl_lo, hi, reason: "stable up to CFL 1, the largest supported".into() });
        }
        lo = hi;
        hi = (hi + 0.1).min(1.0);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if stable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
