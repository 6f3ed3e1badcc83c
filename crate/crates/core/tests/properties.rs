mod common;

use std::f64::consts::TAU;

use af_core::bc::apply_bc;
use af_core::evolution::field::{FieldView, ReconField};
use af_core::problems::gauss_average;
use af_core::recon::{cweno_workspace, CwenoParams};
use af_core::{AfState, EvolutionConfig, ReconKind, SchemeConfig};
use common::*;
use proptest::prelude::*;

#[test]
fn constants_are_fixed_points() {
    let d = constants_deviation();
    assert!(d < 1e-13, "{d:e}");
}

#[test]
fn eg2_and_egquad_exact_on_quadratic_plane_waves() {
    let d = quadratic_plane_wave_deviation();
    assert!(d < 1e-12, "{d:e}");
}

#[test]
fn two_circle_error_is_third_order() {
    for o in two_circle_orders() {
        assert!(o > 2.8, "order {o}");
    }
}

#[test]
fn eight_point_sum_exact_to_degree_seven() {
    let d = t8_deviation(7);
    assert!(d < 1e-13, "{d:e}");
    // and no further: (x - x0)^8 is not integrated exactly
    assert!(t8_deviation(8) > 1e-6);
}

#[test]
fn conservation_over_100_steps() {
    for recon in [ReconKind::Af, ReconKind::Cweno] {
        for ev in [EvolutionConfig::eg2(), EvolutionConfig::eg_quad(), EvolutionConfig::eg2_delta_nu(0.8, 0.2)] {
            let d = conservation_drift(&SchemeConfig::new(recon, ev, 0.25), 100);
            assert!(d < 1e-11, "{recon:?} {ev:?}: {d:e}");
        }
    }
}

#[test]
fn b_matches_direct_assembly_and_step() {
    for cfg in [
        SchemeConfig::af(EvolutionConfig::eg2_delta_nu(0.8, 0.2), 0.4),
        SchemeConfig::af(EvolutionConfig::hat_delta(1.0), 0.39),
        SchemeConfig::afcw(EvolutionConfig::eg_quad(), 0.7),
    ] {
        let d = b_assembly_defect(&cfg);
        assert!(d < 1e-12, "{cfg:?}: {d:e}");
    }
}

#[test]
fn cweno_centre_values_converge_at_third_order() {
    let f = |x: f64, y: f64| {
        let v = (TAU * x).sin() * (TAU * y).cos() + 0.3 * (TAU * y).sin();
        [v, v, v]
    };
    let mut errs = Vec::new();
    for n in [16, 32, 64] {
        let grid = periodic_grid(n);
        let state = AfState::from_fns(&grid, |i, j| gauss_average(&grid, i, j, 6, f), f);
        let field = ReconField::build(&apply_bc(&state, &grid), ReconKind::Cweno, CwenoParams::default());
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let (x, y) = (grid.x_center(i as isize), grid.y_center(j as isize));
                worst = worst.max((field.eval(x, y).unwrap()[0] - f(x, y)[0]).abs());
            }
        }
        errs.push(worst);
    }
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 2.7, "{errs:?}");
    }
}

fn schemes() -> impl Strategy<Value = SchemeConfig> {
    let ops = prop_oneof![
        Just(EvolutionConfig::eg2()),
        Just(EvolutionConfig::eg_quad()),
        (0.0..=1.0f64).prop_map(EvolutionConfig::eg2_delta),
        (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(d, n)| EvolutionConfig::eg2_delta_nu(d, n)),
        Just(EvolutionConfig::hat_delta_nu(1.0, 0.2)),
    ];
    (ops, prop::bool::ANY, 0.05..0.45f64).prop_map(|(ev, cw, cfl)| {
        SchemeConfig::new(if cw { ReconKind::Cweno } else { ReconKind::Af }, ev, cfl)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn step_is_linear(scheme in schemes(), s1 in any::<u64>(), s2 in any::<u64>(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let grid = periodic_grid(8);
        let d = linearity_defect(&scheme, &scrambled_state(&grid, s1), &scrambled_state(&grid, s2), a, b);
        prop_assert!(d < 1e-11, "{d:e}");
    }

    #[test]
    fn step_conserves_integrals(scheme in schemes(), seed in any::<u64>()) {
        let grid = periodic_grid(8);
        let state = scrambled_state(&grid, seed);
        let next = af_core::scheme::step(&state, &grid, &scheme, scheme.dt(&grid)).unwrap();
        let (a, b) = (state.integral(&grid), next.integral(&grid));
        for k in 0..3 {
            prop_assert!((a[k] - b[k]).abs() < 1e-13, "{a:?} {b:?}");
        }
    }

    #[test]
    fn af_reconstruction_is_continuous_and_interpolates(seed in any::<u64>(), n in 6usize..12) {
        let grid = periodic_grid(n);
        let state = scrambled_state(&grid, seed);
        let c = af_continuity_defect(&state, &grid);
        let i = af_interpolation_defect(&state, &grid);
        prop_assert!(c < 1e-12 && i < 1e-12, "jump {c:e}, interpolation {i:e}");
    }

    #[test]
    fn two_circle_exact_on_quadratics(c in prop::array::uniform6(-2.0..2.0f64), x0 in -1.0..1.0f64, y0 in -1.0..1.0f64, r in 0.01..0.5f64) {
        let d = two_circle_quadratic_deviation(c, x0, y0, r);
        prop_assert!(d < 1e-12, "{d:e}");
    }

    #[test]
    fn cweno_weights_form_a_partition_of_unity(q in prop::array::uniform3(prop::array::uniform3(-1e3..1e3f64))) {
        for params in [CwenoParams::default(), CwenoParams::nonlinear()] {
            let w = cweno_workspace(&q, params);
            let sum: f64 = w.omega.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-14, "{:?}", w.omega);
            prop_assert!(w.omega.iter().all(|&o| o >= 0.0));
        }
    }
}
