//! Checks shared by the property tests and the acceptance runner. Each
//! returns the measured worst deviation so callers can print it.

#![allow(dead_code)]

use std::f64::consts::TAU;

use af_core::bc::apply_bc;
use af_core::evolution::circle::{center_approx, quad_circle_sum, Integration};
use af_core::evolution::field::{FieldView, FnField, Lattice, ReconField};
use af_core::evolution::evolve_point;
use af_core::recon::CwenoParams;
use af_core::scheme::Stepper;
use af_core::stability::{assemble_b, assemble_b_direct};
use af_core::state::NodeClass;
use af_core::{AfState, BcMode, EvolutionConfig, Grid, ReconKind, SchemeConfig};

pub const LAT: Lattice = Lattice { x0: -4.0, y0: -4.0, dx: 0.125, dy: 0.125 };

pub fn all_operators() -> Vec<EvolutionConfig> {
    vec![
        EvolutionConfig::eg2(),
        EvolutionConfig::eg_quad(),
        EvolutionConfig::eg2_delta(0.7),
        EvolutionConfig::eg2_delta_nu(0.8, 0.2),
        EvolutionConfig::hat_delta(1.0),
        EvolutionConfig::hat_delta_nu(1.0, 0.2),
    ]
}

pub fn periodic_grid(n: usize) -> Grid {
    Grid::new(n, n, [0.0, 1.0, 0.0, 1.0], BcMode::DoublyPeriodic).unwrap()
}

/// Deterministic pseudo-random state with every DOF set independently.
pub fn scrambled_state(grid: &Grid, seed: u64) -> AfState {
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let values: Vec<f64> = (0..AfState::periodic_len(grid))
        .map(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect();
    AfState::from_periodic_vector(grid, &values)
}

/// A smooth periodic state with non-zero means, averages from a 4x4 Gauss rule.
pub fn smooth_state(grid: &Grid) -> AfState {
    let f = |x: f64, y: f64| {
        [
            1.0 + (TAU * x).sin() * (TAU * y).cos(),
            0.5 + 0.3 * (TAU * (x + y)).cos(),
            -0.25 + 0.2 * (TAU * x).cos(),
        ]
    };
    AfState::from_fns(grid, |i, j| af_core::problems::gauss_average(grid, i, j, 4, f), f)
}

/// Largest deviation of any operator from a constant state, pointwise and
/// after one scheme step (AF and AFCW).
pub fn constants_deviation() -> f64 {
    let q = [1.5, -0.5, 2.0];
    let f = FnField { lattice: LAT, f: move |_, _| q };
    let mut worst: f64 = 0.0;
    for cfg in all_operators() {
        for &(x, y, dt) in &[(0.1, 0.2, 0.05), (0.0, 0.0, 0.1), (-0.3, 0.7, 0.01)] {
            let v = evolve_point(&f, x, y, dt, &cfg).unwrap();
            for k in 0..3 {
                worst = worst.max((v[k] - q[k]).abs());
            }
        }
        let grid = periodic_grid(8);
        let state = AfState::constant(&grid, q);
        for recon in [ReconKind::Af, ReconKind::Cweno] {
            let scheme = SchemeConfig::new(recon, cfg, 0.25);
            let next = Stepper::new(&grid, &scheme).unwrap().step(&state, scheme.dt(&grid)).unwrap();
            worst = worst.max(next.max_abs_diff(&state));
        }
    }
    worst
}

/// One step of EG2 and EG^quad on p = u = x^2 (and the y analogue) against
/// the exact simple-wave solution (x - c t)^2.
pub fn quadratic_plane_wave_deviation() -> f64 {
    let mut worst: f64 = 0.0;
    for cfg in [EvolutionConfig::eg2(), EvolutionConfig::eg_quad()] {
        for &(x, dt) in &[(1.0, 0.1), (0.3, 0.05), (-0.5, 0.2)] {
            let exact = (x - dt) * (x - dt);
            let fx = FnField { lattice: LAT, f: |x, _| [x * x, x * x, 0.0] };
            let v = evolve_point(&fx, x, 0.25, dt, &cfg).unwrap();
            worst = worst.max((v[0] - exact).abs()).max((v[1] - exact).abs()).max(v[2].abs());
            let fy = FnField { lattice: LAT, f: |_, y| [y * y, 0.0, y * y] };
            let v = evolve_point(&fy, -0.25, x, dt, &cfg).unwrap();
            worst = worst.max((v[0] - exact).abs()).max(v[1].abs()).max((v[2] - exact).abs());
        }
    }
    worst
}

/// The two-circle centre approximation on a quadratic.
pub fn two_circle_quadratic_deviation(c: [f64; 6], x0: f64, y0: f64, r: f64) -> f64 {
    let q = move |x: f64, y: f64| c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y;
    let f = FnField { lattice: LAT, f: move |x, y| [q(x, y), 2.0 * q(x, y), -q(x, y)] };
    let v = center_approx(&f, x0, y0, r, Integration::Exact).unwrap();
    let want = q(x0, y0);
    (v[0] - want).abs().max((v[1] - 2.0 * want).abs()).max((v[2] + want).abs())
}

/// Observed orders of the centre approximation error on a smooth
/// non-polynomial field for radii 0.2, 0.1, 0.05, 0.025.
pub fn two_circle_orders() -> Vec<f64> {
    let g = |x: f64, y: f64| (1.3 * x).sin() * (0.7 * y).exp() + (x * y).cos();
    let f = FnField { lattice: LAT, f: move |x, y| [g(x, y), 0.0, 0.0] };
    let (x0, y0) = (0.3, -0.2);
    let errs: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|&r| (center_approx(&f, x0, y0, r, Integration::Exact).unwrap()[0] - g(x0, y0)).abs())
        .collect();
    errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Reference circle integral by the trapezoidal rule with 512 points, exact
/// for trigonometric polynomials of degree below 512.
fn circle_reference(f: impl Fn(f64, f64) -> f64, x0: f64, y0: f64, r: f64) -> f64 {
    let n = 512;
    (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            f(x0 + r * t.cos(), y0 + r * t.sin())
        })
        .sum::<f64>()
        * TAU
        / n as f64
}

/// Largest error of the eight-point circle sum over the monomials
/// `(x - x0)^a (y - y0)^b` with `a + b <= degree`, relative to `r^(a+b)`.
pub fn t8_deviation(degree: u32) -> f64 {
    let (x0, y0, r) = (0.37, -0.21, 0.3);
    let mut worst: f64 = 0.0;
    for a in 0..=degree {
        for b in 0..=degree - a {
            let m = move |x: f64, y: f64| (x - x0).powi(a as i32) * (y - y0).powi(b as i32);
            let f = FnField { lattice: LAT, f: move |x, y| [m(x, y), 0.0, 0.0] };
            let got = quad_circle_sum(&f, 0, x0, y0, r, 8).unwrap();
            let want = circle_reference(m, x0, y0, r);
            worst = worst.max((got - want).abs() / r.powi((a + b) as i32));
        }
    }
    worst
}

/// Relative drift of the domain integrals over `steps` periodic steps.
pub fn conservation_drift(scheme: &SchemeConfig, steps: usize) -> f64 {
    let grid = periodic_grid(16);
    let mut state = smooth_state(&grid);
    let start = state.integral(&grid);
    let mut stepper = Stepper::new(&grid, scheme).unwrap();
    let dt = scheme.dt(&grid);
    for _ in 0..steps {
        state = stepper.step(&state, dt).unwrap();
    }
    let end = state.integral(&grid);
    (0..3).map(|k| (end[k] - start[k]).abs() / start[k].abs()).fold(0.0, f64::max)
}

/// `|step(a s + b t) - a step(s) - b step(t)|` relative to the largest value.
pub fn linearity_defect(scheme: &SchemeConfig, s: &AfState, t: &AfState, a: f64, b: f64) -> f64 {
    let grid = periodic_grid(8);
    let mut stepper = Stepper::new(&grid, scheme).unwrap();
    let dt = scheme.dt(&grid);
    let combined = stepper.step(&s.scaled(a).axpy(b, t), dt).unwrap();
    let separate = stepper.step(s, dt).unwrap().scaled(a).axpy(b, &stepper.step(t, dt).unwrap());
    combined.max_abs_diff(&separate) / separate.max_abs().max(1.0)
}

/// `B` assembled from impulse responses against direct column-by-column
/// assembly, and `B v` against one step of the state `v`.
pub fn b_assembly_defect(scheme: &SchemeConfig) -> f64 {
    let m = 6;
    let b = assemble_b(scheme, m).unwrap();
    let direct = assemble_b_direct(scheme, m).unwrap();
    let mut worst: f64 = 0.0;
    for j in 0..b.ncols() {
        for i in 0..b.nrows() {
            worst = worst.max((b[(i, j)] - direct[(i, j)]).abs());
        }
    }
    let grid = af_core::stability::stability_grid(m).unwrap();
    let state = scrambled_state(&grid, 7);
    let v = state.to_periodic_vector(&grid);
    let stepped = Stepper::new(&grid, scheme).unwrap().step(&state, scheme.dt(&grid)).unwrap().to_periodic_vector(&grid);
    for i in 0..b.nrows() {
        let bv: f64 = (0..b.ncols()).map(|j| b[(i, j)] * v[j]).sum();
        worst = worst.max((bv - stepped[i]).abs());
    }
    worst
}

/// Largest jump of the AF reconstruction across interior cell edges.
pub fn af_continuity_defect(state: &AfState, grid: &Grid) -> f64 {
    let field = ReconField::build(&apply_bc(state, grid), ReconKind::Af, CwenoParams::default());
    let mut worst: f64 = 0.0;
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            for s in [0.0, 0.13, 0.5, 0.91, 1.0] {
                // Right edge of (i, j) seen from both sides.
                let x = grid.x_face(i + 1);
                let y = grid.y_face(j) + s * grid.dy;
                let a = field.eval_in_cell(i, j, x, y).unwrap();
                let b = field.eval_in_cell(i + 1, j, x, y).unwrap();
                // Top edge.
                let x2 = grid.x_face(i) + s * grid.dx;
                let y2 = grid.y_face(j + 1);
                let c = field.eval_in_cell(i, j, x2, y2).unwrap();
                let d = field.eval_in_cell(i, j + 1, x2, y2).unwrap();
                for k in 0..3 {
                    worst = worst.max((a[k] - b[k]).abs()).max((c[k] - d[k]).abs());
                }
            }
        }
    }
    worst
}

/// The AF reconstruction interpolates the stored point values.
pub fn af_interpolation_defect(state: &AfState, grid: &Grid) -> f64 {
    let field = ReconField::build(&apply_bc(state, grid), ReconKind::Af, CwenoParams::default());
    let mut worst: f64 = 0.0;
    for class in [NodeClass::Corner, NodeClass::XEdge, NodeClass::YEdge] {
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let (x, y) = class.position(grid, i as isize, j as isize);
                let v = field.eval_in_cell(i as isize, j as isize, x, y).unwrap();
                let q = state.get(class, i, j);
                for k in 0..3 {
                    worst = worst.max((v[k] - q[k]).abs());
                }
            }
        }
    }
    worst
}
