//! Integrals over circles of a piecewise polynomial field.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use super::field::FieldView;
use super::quadrature::arc_rule;
use crate::{Error, Result};

/// Angular weight functions multiplying the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    One,
    Cos,
    Sin,
    Cos2,
    Sin2,
    SinCos,
}

impl Weight {
    pub const ALL: [Weight; 6] = [Weight::One, Weight::Cos, Weight::Sin, Weight::Cos2, Weight::Sin2, Weight::SinCos];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn at(self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        match self {
            Weight::One => 1.0,
            Weight::Cos => c,
            Weight::Sin => s,
            Weight::Cos2 => c * c,
            Weight::Sin2 => s * s,
            Weight::SinCos => s * c,
        }
    }
}

#[inline]
fn weights_at(theta: f64) -> [f64; 6] {
    let (s, c) = theta.sin_cos();
    [1.0, c, s, c * c, s * s, s * c]
}

/// How angular integrals are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integration {
    /// Split the circle at grid lines and integrate each arc with Gauss.
    Exact,
    /// `T_n = (2 pi / n) sum_k f(Q(2 pi k / n))`.
    Points(usize),
}

/// All moments `m[var][weight] = int_0^{2 pi} f_var(Q(theta)) w(theta) dtheta`
/// on the circle of radius `r` around `(x0, y0)`.
pub fn circle_moments<F: FieldView + ?Sized>(
    field: &F,
    x0: f64,
    y0: f64,
    r: f64,
    integration: Integration,
) -> Result<[[f64; 6]; 3]> {
    let mut m = [[0.0; 6]; 3];
    if r == 0.0 {
        let v = field.eval(x0, y0)?;
        for k in 0..3 {
            m[k][0] = TAU * v[k];
        }
        return Ok(m);
    }
    let outside = |e: Error| match e {
        Error::OutsideDomain { x, y, .. } => Error::OutsideDomain { x, y, radius: r },
        e => e,
    };
    match integration {
        Integration::Points(n) => {
            let h = TAU / n as f64;
            for k in 0..n {
                let th = h * k as f64;
                let (x, y) = on_circle(x0, y0, r, th);
                let v = field.eval(x, y).map_err(outside)?;
                accumulate(&mut m, &v, &weights_at(th), h);
            }
        }
        Integration::Exact => {
            let (nodes, wts) = arc_rule();
            let lat = field.lattice();
            let cuts = arc_breaks(x0, y0, r, lat.x0, lat.dx, lat.y0, lat.dy);
            for pair in cuts.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                if b - a < 1e-15 {
                    continue;
                }
                let (xm, ym) = on_circle(x0, y0, r, 0.5 * (a + b));
                let ci = ((xm - lat.x0) / lat.dx).floor() as isize;
                let cj = ((ym - lat.y0) / lat.dy).floor() as isize;
                let half = 0.5 * (b - a);
                let mid = 0.5 * (a + b);
                for (t, w) in nodes.iter().zip(wts) {
                    let th = mid + half * t;
                    let (x, y) = on_circle(x0, y0, r, th);
                    let v = field.eval_in_cell(ci, cj, x, y).map_err(outside)?;
                    accumulate(&mut m, &v, &weights_at(th), half * w);
                }
            }
        }
    }
    Ok(m)
}

#[inline]
fn accumulate(m: &mut [[f64; 6]; 3], v: &[f64; 3], w: &[f64; 6], scale: f64) {
    for k in 0..3 {
        let s = v[k] * scale;
        for (mk, wk) in m[k].iter_mut().zip(w) {
            *mk += s * wk;
        }
    }
}

#[inline]
pub fn on_circle(x0: f64, y0: f64, r: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (x0 + r * c, y0 + r * s)
}

/// Sorted angles in `[0, 2 pi]` at which the circle crosses a grid line, plus
/// the multiples of `pi / 4` so that no arc is longer than a quarter of `pi`.
fn arc_breaks(x0: f64, y0: f64, r: f64, ox: f64, dx: f64, oy: f64, dy: f64) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..=8).map(|k| k as f64 * FRAC_PI_4).collect();
    let wrap = |t: f64| t.rem_euclid(TAU);
    let k_lo = ((x0 - r - ox) / dx).floor() as isize;
    let k_hi = ((x0 + r - ox) / dx).ceil() as isize;
    for k in k_lo..=k_hi {
        let c = (ox + k as f64 * dx - x0) / r;
        if c.abs() <= 1.0 {
            let a = c.acos();
            cuts.push(a);
            cuts.push(wrap(-a));
        }
    }
    let k_lo = ((y0 - r - oy) / dy).floor() as isize;
    let k_hi = ((y0 + r - oy) / dy).ceil() as isize;
    for k in k_lo..=k_hi {
        let s = (oy + k as f64 * dy - y0) / r;
        if s.abs() <= 1.0 {
            let a = s.asin();
            cuts.push(wrap(a));
            cuts.push(wrap(PI - a));
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts
}

/// A single weighted integral of one variable.
pub fn circle_integral<F: FieldView + ?Sized>(
    field: &F,
    var: usize,
    x0: f64,
    y0: f64,
    r: f64,
    weight: Weight,
    integration: Integration,
) -> Result<f64> {
    Ok(circle_moments(field, x0, y0, r, integration)?[var][weight.index()])
}

/// `T_n` for one variable.
pub fn quad_circle_sum<F: FieldView + ?Sized>(field: &F, var: usize, x0: f64, y0: f64, r: f64, n: usize) -> Result<f64> {
    circle_integral(field, var, x0, y0, r, Weight::One, Integration::Points(n))
}

/// Third-order approximation of the centre value from the means over the
/// circles of radius `r / 2` and `r`: `(4 mean_{r/2} - mean_r) / 3`, for all
/// three variables. At `r = 0` this is the field value at the centre.
pub fn center_approx<F: FieldView + ?Sized>(
    field: &F,
    x0: f64,
    y0: f64,
    r: f64,
    integration: Integration,
) -> Result<[f64; 3]> {
    if r == 0.0 {
        return field.eval(x0, y0);
    }
    let half = circle_moments(field, x0, y0, 0.5 * r, integration)?;
    let full = circle_moments(field, x0, y0, r, integration)?;
    Ok([0, 1, 2].map(|k| (4.0 * half[k][0] - full[k][0]) / (3.0 * TAU)))
}

#[cfg(test)]
mod tests {
    use super::super::field::{FnField, Lattice, UnitField};
    use super::*;

    const LAT: Lattice = Lattice { x0: 0.0, y0: 0.0, dx: 0.1, dy: 0.1 };

    fn poly_field<F: Fn(f64, f64) -> f64>(f: F) -> FnField<impl Fn(f64, f64) -> [f64; 3]> {
        FnField { lattice: LAT, f: move |x, y| [f(x, y), 0.0, 0.0] }
    }

    #[test]
    fn constant_moments() {
        let f = poly_field(|_, _| 1.0);
        let m = circle_moments(&f, 0.03, 0.05, 0.07, Integration::Exact).unwrap();
        assert!((m[0][0] - TAU).abs() < 1e-14);
        assert!(m[0][1].abs() < 1e-14 && m[0][2].abs() < 1e-14 && m[0][5].abs() < 1e-14);
        assert!((m[0][3] - PI).abs() < 1e-14 && (m[0][4] - PI).abs() < 1e-14);
    }

    #[test]
    fn x_squared_moments() {
        let (x0, r) = (0.37, 0.08);
        let f = poly_field(|x, _| x * x);
        let one = circle_integral(&f, 0, x0, 0.0, r, Weight::One, Integration::Exact).unwrap();
        let cos = circle_integral(&f, 0, x0, 0.0, r, Weight::Cos, Integration::Exact).unwrap();
        assert!((one - (TAU * x0 * x0 + PI * r * r)).abs() < 1e-14);
        assert!((cos - TAU * x0 * r).abs() < 1e-14);
    }

    #[test]
    fn zero_radius() {
        let f = poly_field(|x, y| 3.0 + x - y);
        let m = circle_moments(&f, 0.2, 0.1, 0.0, Integration::Exact).unwrap();
        assert!((m[0][0] - TAU * 3.1).abs() < 1e-14);
        assert_eq!(&m[0][1..], &[0.0; 5]);
    }

    #[test]
    fn eight_point_sum_of_x_squared() {
        let f = poly_field(|x, _| x * x);
        let t = quad_circle_sum(&f, 0, 0.0, 0.0, 1.0, 8).unwrap();
        assert!((t - PI).abs() < 1e-14);
        let affine = poly_field(|x, y| 2.0 + 3.0 * x - y);
        let t4 = quad_circle_sum(&affine, 0, 0.4, -0.2, 0.3, 4).unwrap();
        assert!((t4 - TAU * (2.0 + 1.2 + 0.2)).abs() < 1e-13);
    }

    #[test]
    fn center_approx_exact_on_quadratics() {
        let f = poly_field(|x, y| 1.0 + 2.0 * x - y + 3.0 * x * x - x * y + 0.5 * y * y);
        let got = center_approx(&f, 0.3, -0.4, 0.09, Integration::Exact).unwrap()[0];
        let want = 1.0 + 0.6 + 0.4 + 0.27 + 0.12 + 0.08;
        assert!((got - want).abs() < 1e-13);
        let odd = poly_field(|x, _| x * x * x);
        assert!(center_approx(&odd, 0.0, 0.0, 0.05, Integration::Exact).unwrap()[0].abs() < 1e-16);
        let c = poly_field(|_, _| 7.0);
        assert!((center_approx(&c, 0.0, 0.0, 0.05, Integration::Exact).unwrap()[0] - 7.0).abs() < 1e-14);
    }

    #[test]
    fn piecewise_field_integrates_each_cell_exactly() {
        // Unit constant on cell (0, 0) only: the integral is the angle the
        // circle spends inside that cell.
        let f = UnitField { lattice: LAT, cell: (0, 0), var: 1, monomial: 0 };
        let m = circle_moments(&f, 0.0, 0.0, 0.05, Integration::Exact).unwrap();
        assert!((m[1][0] - PI / 2.0).abs() < 1e-14);
        assert!((m[1][1] - 1.0).abs() < 1e-14);
        assert!((m[1][2] - 1.0).abs() < 1e-14);
    }
}
