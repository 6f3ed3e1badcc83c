//! Per-cell biquadratic reconstructions in reference coordinates
//! `(xi, eta) in [-1, 1]^2`.
//!
//! Everything downstream works with monomial coefficients `m[a + 3b]` of
//! `xi^a eta^b`; CWENO's modal coefficients are converted on construction.

use std::sync::OnceLock;

use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;

use crate::bc::PaddedState;
use crate::state::NodeClass;

/// Monomial coefficients, index `a + 3b` for `xi^a eta^b`.
pub type Mono = [f64; 9];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReconKind {
    /// Globally continuous interpolant of the nine AF degrees of freedom.
    Af,
    /// CWENO from the 3x3 block of cell averages.
    Cweno,
}

impl ReconKind {
    pub fn name(self) -> &'static str {
        match self {
            ReconKind::Af => "af",
            ReconKind::Cweno => "cweno",
        }
    }
}

impl std::str::FromStr for ReconKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "af" => Ok(ReconKind::Af),
            "cweno" | "afcw" => Ok(ReconKind::Cweno),
            other => Err(format!("unknown reconstruction `{other}` (expected af or cweno)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// `coeffs` are the nine monomial coefficients.
    AfBiquadratic,
    /// `coeffs[..6]` are the modal CWENO coefficients C_0..C_5.
    CwenoModal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellPoly {
    pub basis: BasisKind,
    pub coeffs: [f64; 9],
    pub cell: (isize, isize),
}

impl CellPoly {
    pub fn monomial(&self) -> Mono {
        match self.basis {
            BasisKind::AfBiquadratic => self.coeffs,
            BasisKind::CwenoModal => {
                let mut c = [0.0; 6];
                c.copy_from_slice(&self.coeffs[..6]);
                cweno_to_monomial(&c)
            }
        }
    }

    pub fn eval(&self, xi: f64, eta: f64) -> f64 {
        eval_mono(&self.monomial(), xi, eta)
    }

    /// Physical gradient `(d/dx, d/dy)` for a cell of size `dx` by `dy`.
    pub fn grad(&self, xi: f64, eta: f64, dx: f64, dy: f64) -> (f64, f64) {
        let (gx, gy) = grad_mono(&self.monomial(), xi, eta);
        (gx * 2.0 / dx, gy * 2.0 / dy)
    }
}

/// Round-off slack for points that land marginally outside a cell.
pub const EVAL_SLACK: f64 = 1e-12;

#[inline]
fn powers(t: f64) -> [f64; 3] {
    [1.0, t, t * t]
}

#[inline]
fn clamp_ref(t: f64) -> f64 {
    debug_assert!(t.abs() <= 1.0 + 1e-9, "reference coordinate {t} far outside the cell");
    t.clamp(-1.0, 1.0)
}

/// Evaluates a monomial polynomial. Coordinates are clamped to `[-1, 1]`.
#[inline]
pub fn eval_mono(m: &Mono, xi: f64, eta: f64) -> f64 {
    let (xi, eta) = (clamp_ref(xi), clamp_ref(eta));
    let x = powers(xi);
    let y = powers(eta);
    let mut s = 0.0;
    for b in 0..3 {
        s += y[b] * (m[3 * b] + m[1 + 3 * b] * x[1] + m[2 + 3 * b] * x[2]);
    }
    s
}

/// Gradient with respect to `(xi, eta)`.
pub fn grad_mono(m: &Mono, xi: f64, eta: f64) -> (f64, f64) {
    let (xi, eta) = (clamp_ref(xi), clamp_ref(eta));
    let x = powers(xi);
    let y = powers(eta);
    let dx = [0.0, 1.0, 2.0 * xi];
    let dy = [0.0, 1.0, 2.0 * eta];
    let (mut gx, mut gy) = (0.0, 0.0);
    for b in 0..3 {
        for a in 0..3 {
            let c = m[a + 3 * b];
            gx += c * dx[a] * y[b];
            gy += c * x[a] * dy[b];
        }
    }
    (gx, gy)
}

// ---------------------------------------------------------------------------
// AF interpolation

/// Point conditions of the AF reconstruction, in the order the DOFs are passed
/// to [`af_coeffs`] after the cell average: the four corners, then the left,
/// right, bottom and top edge midpoints.
pub const AF_POINTS: [(f64, f64); 8] = [
    (-1.0, -1.0),
    (1.0, -1.0),
    (-1.0, 1.0),
    (1.0, 1.0),
    (-1.0, 0.0),
    (1.0, 0.0),
    (0.0, -1.0),
    (0.0, 1.0),
];

/// Row 0 is the cell mean, rows 1..9 the point values of [`AF_POINTS`];
/// column `a + 3b` is the monomial `xi^a eta^b`.
pub fn af_condition_matrix() -> [[f64; 9]; 9] {
    let mean = [1.0, 0.0, 1.0 / 3.0];
    let mut m = [[0.0; 9]; 9];
    for b in 0..3 {
        for a in 0..3 {
            m[0][a + 3 * b] = mean[a] * mean[b];
            for (r, &(xi, eta)) in AF_POINTS.iter().enumerate() {
                m[r + 1][a + 3 * b] = powers(xi)[a] * powers(eta)[b];
            }
        }
    }
    m
}

/// Inverse of [`af_condition_matrix`], computed once.
pub fn af_inverse() -> &'static [[f64; 9]; 9] {
    static INV: OnceLock<[[f64; 9]; 9]> = OnceLock::new();
    INV.get_or_init(|| {
        let m = af_condition_matrix();
        let a = Mat::<f64>::from_fn(9, 9, |r, c| m[r][c]);
        let inv = a.partial_piv_lu().inverse();
        let mut out = [[0.0; 9]; 9];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = inv[(r, c)];
            }
        }
        out
    })
}

/// Monomial coefficients from `[average, 4 corners, 4 edge midpoints]` ordered
/// as in [`AF_POINTS`].
pub fn af_coeffs(dofs: &[f64; 9]) -> Mono {
    let inv = af_inverse();
    let mut m = [0.0; 9];
    for (r, row) in inv.iter().enumerate() {
        m[r] = row.iter().zip(dofs).map(|(a, b)| a * b).sum();
    }
    m
}

/// The nine DOFs of cell `(i, j)` for one variable, ordered for [`af_coeffs`].
pub fn af_cell_dofs(state: &PaddedState, var: usize, i: isize, j: isize) -> [f64; 9] {
    use NodeClass::*;
    [
        state.at(var, Average, i, j),
        state.at(var, Corner, i, j),
        state.at(var, Corner, i + 1, j),
        state.at(var, Corner, i, j + 1),
        state.at(var, Corner, i + 1, j + 1),
        state.at(var, XEdge, i, j),
        state.at(var, XEdge, i + 1, j),
        state.at(var, YEdge, i, j),
        state.at(var, YEdge, i, j + 1),
    ]
}

pub fn af_reconstruct(state: &PaddedState, i: isize, j: isize) -> [CellPoly; 3] {
    [0, 1, 2].map(|var| CellPoly {
        basis: BasisKind::AfBiquadratic,
        coeffs: af_coeffs(&af_cell_dofs(state, var, i, j)),
        cell: (i, j),
    })
}

// ---------------------------------------------------------------------------
// CWENO

/// How the five CWENO polynomials are blended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CwenoWeights {
    /// `gamma_m / (epsilon + beta_m)^r`, normalized.
    Nonlinear,
    /// The linear weights `gamma_m`. The default: with the nonlinear
    /// weights the reconstruction drops to second order at critical points
    /// and the published AFCW errors are not reproduced.
    Linear,
}

impl std::str::FromStr for CwenoWeights {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nonlinear" => Ok(Self::Nonlinear),
            "linear" => Ok(Self::Linear),
            other => Err(format!("unknown CWENO weights `{other}` (expected linear or nonlinear)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CwenoParams {
    pub weights: CwenoWeights,
    pub epsilon: f64,
    pub r: i32,
}

impl CwenoParams {
    pub const fn nonlinear() -> Self {
        Self { weights: CwenoWeights::Nonlinear, epsilon: 1e-12, r: 2 }
    }
}

impl Default for CwenoParams {
    fn default() -> Self {
        Self { weights: CwenoWeights::Linear, ..Self::nonlinear() }
    }
}

/// Linear weights of the central and the four directional polynomials.
pub const CWENO_GAMMA: [f64; 5] = [0.5, 0.125, 0.125, 0.125, 0.125];

/// Intermediate quantities of one CWENO reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CwenoWorkspace {
    /// `c[0]` is the cell average, `c[1..6]` the central coefficients.
    pub c: [f64; 6],
    pub a: [f64; 4],
    pub b: [f64; 4],
    pub s_a: f64,
    pub s_b: f64,
    pub beta: [f64; 5],
    pub omega: [f64; 5],
}

/// `q[a][b]` holds the average of cell `(i + a - 1, j + b - 1)`.
pub type Stencil3 = [[f64; 3]; 3];

pub fn cweno_workspace(q: &Stencil3, params: CwenoParams) -> CwenoWorkspace {
    let q0 = q[1][1];
    let (qe, qw, qn, qs) = (q[2][1], q[0][1], q[1][2], q[1][0]);
    let c = [
        q0,
        0.5 * (qe - qw),
        0.5 * (qn - qs),
        0.5 * (qe + qw) - q0,
        0.5 * (qn + qs) - q0,
        0.25 * (q[2][2] - q[2][0] - q[0][2] + q[0][0]),
    ];
    let a = [qe - q0, q0 - qw, q0 - qw, qe - q0];
    let b = [qn - q0, qn - q0, q0 - qs, q0 - qs];
    let s_a = a.iter().sum::<f64>() / 8.0;
    let s_b = b.iter().sum::<f64>() / 8.0;
    let mut beta = [0.0; 5];
    beta[0] = 4.0 * (c[1] - s_a).powi(2)
        + 4.0 * (c[2] - s_b).powi(2)
        + 5.0 / 3.0 * (c[3] * c[3] + c[4] * c[4])
        + 4.0 / 3.0 * c[5] * c[5];
    for m in 0..4 {
        beta[m + 1] = a[m] * a[m] + b[m] * b[m];
    }
    let mut omega = CWENO_GAMMA;
    if params.weights == CwenoWeights::Nonlinear {
        for m in 0..5 {
            omega[m] = CWENO_GAMMA[m] / (params.epsilon + beta[m]).powi(params.r);
        }
        let total: f64 = omega.iter().sum();
        for w in &mut omega {
            *w /= total;
        }
    }
    CwenoWorkspace { c, a, b, s_a, s_b, beta, omega }
}

/// Modal coefficients C_0..C_5.
pub fn cweno_coeffs(q: &Stencil3, params: CwenoParams) -> [f64; 6] {
    let w = cweno_workspace(q, params);
    let o = &w.omega;
    let mut c1 = 2.0 * o[0] * (w.c[1] - w.s_a);
    let mut c2 = 2.0 * o[0] * (w.c[2] - w.s_b);
    for m in 0..4 {
        c1 += o[m + 1] * w.a[m];
        c2 += o[m + 1] * w.b[m];
    }
    [
        w.c[0],
        c1,
        c2,
        2.0 * o[0] * w.c[3],
        2.0 * o[0] * w.c[4],
        2.0 * o[0] * w.c[5],
    ]
}

/// Value of the modal basis function `N_k` at `(xi, eta)`.
pub fn cweno_basis(k: usize, xi: f64, eta: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => xi / 2.0,
        2 => eta / 2.0,
        3 => xi * xi / 4.0 - 1.0 / 12.0,
        4 => eta * eta / 4.0 - 1.0 / 12.0,
        5 => xi * eta / 4.0,
        _ => panic!("CWENO basis index {k} out of range"),
    }
}

pub fn cweno_to_monomial(c: &[f64; 6]) -> Mono {
    let mut m = [0.0; 9];
    m[0] = c[0] - (c[3] + c[4]) / 12.0;
    m[1] = c[1] / 2.0;
    m[3] = c[2] / 2.0;
    m[2] = c[3] / 4.0;
    m[6] = c[4] / 4.0;
    m[4] = c[5] / 4.0;
    m
}

pub fn cweno_reconstruct(q: &Stencil3, params: CwenoParams, cell: (isize, isize)) -> CellPoly {
    let c = cweno_coeffs(q, params);
    let mut coeffs = [0.0; 9];
    coeffs[..6].copy_from_slice(&c);
    CellPoly { basis: BasisKind::CwenoModal, coeffs, cell }
}

pub fn cweno_stencil(state: &PaddedState, var: usize, i: isize, j: isize) -> Stencil3 {
    let mut q = [[0.0; 3]; 3];
    for (a, col) in q.iter_mut().enumerate() {
        for (b, v) in col.iter_mut().enumerate() {
            *v = state.at(var, NodeClass::Average, i + a as isize - 1, j + b as isize - 1);
        }
    }
    q
}

/// Monomial coefficients of cell `(i, j)` for one variable.
pub fn reconstruct_mono(
    state: &PaddedState,
    kind: ReconKind,
    params: CwenoParams,
    var: usize,
    i: isize,
    j: isize,
) -> Mono {
    match kind {
        ReconKind::Af => af_coeffs(&af_cell_dofs(state, var, i, j)),
        ReconKind::Cweno => cweno_to_monomial(&cweno_coeffs(&cweno_stencil(state, var, i, j), params)),
    }
}
