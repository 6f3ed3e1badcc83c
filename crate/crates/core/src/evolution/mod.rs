//! Approximate evolution operators for point values.
//!
//! Each operator maps the reconstruction at time `t` to the values of
//! `(p, u, v)` at a point at time `t + dt`, using integrals over the circle of
//! radius `c dt` (the base of the bicharacteristic cone) around that point.

pub mod circle;
pub mod field;
pub mod quadrature;
pub mod stencil;

use std::f64::consts::PI;

pub use circle::{center_approx, circle_integral, circle_moments, quad_circle_sum, Integration, Weight};
pub use field::{FieldView, FnField, Lattice, ReconField, UnitField};
pub use stencil::{NodeStencil, StencilSet};

use crate::{Error, Result, Vars, P, U, V};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Eg2,
    EgQuad,
    Eg2Delta,
    Eg2DeltaNu,
    HatEg2Delta,
    HatEg2DeltaNu,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 6] = [
        OperatorKind::Eg2,
        OperatorKind::EgQuad,
        OperatorKind::Eg2Delta,
        OperatorKind::Eg2DeltaNu,
        OperatorKind::HatEg2Delta,
        OperatorKind::HatEg2DeltaNu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Eg2 => "eg2",
            OperatorKind::EgQuad => "eg2quad",
            OperatorKind::Eg2Delta => "eg2delta",
            OperatorKind::Eg2DeltaNu => "eg2deltanu",
            OperatorKind::HatEg2Delta => "hat-eg2delta",
            OperatorKind::HatEg2DeltaNu => "hat-eg2deltanu",
        }
    }

    pub fn is_hat(self) -> bool {
        matches!(self, OperatorKind::HatEg2Delta | OperatorKind::HatEg2DeltaNu)
    }

    pub fn uses_delta(self) -> bool {
        !matches!(self, OperatorKind::Eg2 | OperatorKind::EgQuad)
    }

    pub fn uses_nu(self) -> bool {
        matches!(self, OperatorKind::Eg2DeltaNu | OperatorKind::HatEg2DeltaNu)
    }
}

impl std::fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OperatorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.to_ascii_lowercase();
        let alias = match s.as_str() {
            "egquad" => "eg2quad",
            other => other,
        };
        OperatorKind::ALL.into_iter().find(|k| k.name() == alias).ok_or_else(|| {
            let names: Vec<_> = OperatorKind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown operator `{s}` (valid kinds: {})", names.join(", "))
        })
    }
}

/// Which time increment sets the radii `delta c dt` and `nu c dt` of the
/// auxiliary circles when point values are evolved to the half step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuxRadius {
    /// The full time step, also for the half-step evolution. Reproduces the
    /// published stability limits of the delta/nu operators but not their
    /// published errors.
    FullStep,
    /// The increment actually evolved over (`dt / 2` at the half step).
    Increment,
}

impl std::str::FromStr for AuxRadius {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "full" | "full-step" => Ok(AuxRadius::FullStep),
            "increment" => Ok(AuxRadius::Increment),
            other => Err(format!("unknown auxiliary radius rule `{other}` (expected full-step or increment)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    pub kind: OperatorKind,
    pub delta: f64,
    pub nu: f64,
    /// Points of the circle sums used by the hatted operators.
    pub n_quad: usize,
    /// Sound speed.
    pub c: f64,
    pub aux_radius: AuxRadius,
}

impl EvolutionConfig {
    pub fn new(kind: OperatorKind) -> Self {
        Self { kind, delta: 0.0, nu: 0.0, n_quad: 8, c: 1.0, aux_radius: AuxRadius::Increment }
    }

    pub fn eg2() -> Self {
        Self::new(OperatorKind::Eg2)
    }

    pub fn eg_quad() -> Self {
        Self::new(OperatorKind::EgQuad)
    }

    pub fn eg2_delta(delta: f64) -> Self {
        Self { delta, ..Self::new(OperatorKind::Eg2Delta) }
    }

    pub fn eg2_delta_nu(delta: f64, nu: f64) -> Self {
        Self { delta, nu, ..Self::new(OperatorKind::Eg2DeltaNu) }
    }

    pub fn hat_delta(delta: f64) -> Self {
        Self { delta, ..Self::new(OperatorKind::HatEg2Delta) }
    }

    pub fn hat_delta_nu(delta: f64, nu: f64) -> Self {
        Self { delta, nu, ..Self::new(OperatorKind::HatEg2DeltaNu) }
    }

    pub fn with_c(self, c: f64) -> Self {
        Self { c, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| Err(Error::InvalidParameter { name, reason: reason.to_string() });
        if !(self.c.is_finite() && self.c > 0.0) {
            return bad("c", "sound speed must be positive");
        }
        if self.kind.uses_delta() && !(0.0..=1.0).contains(&self.delta) {
            return bad("delta", "must lie in [0, 1]");
        }
        if self.kind.uses_nu() && !(0.0..=1.0).contains(&self.nu) {
            return bad("nu", "must lie in [0, 1]");
        }
        if self.kind.is_hat() && self.n_quad < 3 {
            return bad("nquad", "need at least 3 circle points");
        }
        Ok(())
    }

    /// Short label such as `eg2delta(0.8,0.2)`.
    pub fn label(&self) -> String {
        match (self.kind.uses_delta(), self.kind.uses_nu()) {
            (false, _) => self.kind.name().to_string(),
            (true, false) => format!("{}({})", self.kind.name(), self.delta),
            (true, true) => format!("{}({},{})", self.kind.name(), self.delta, self.nu),
        }
    }

    /// Time increment that sizes the auxiliary circles when evolving by `dt`
    /// within a step of size `step_dt`.
    pub fn aux_dt(&self, dt: f64, step_dt: f64) -> f64 {
        match self.aux_radius {
            AuxRadius::FullStep => step_dt,
            AuxRadius::Increment => dt,
        }
    }

    fn integration(&self) -> Integration {
        if self.kind.is_hat() {
            Integration::Points(self.n_quad)
        } else {
            Integration::Exact
        }
    }
}

/// Evolves the point `(x, y)` by `dt`, taking the time-`t` value at the point
/// from the reconstruction.
pub fn evolve_point<F: FieldView + ?Sized>(field: &F, x: f64, y: f64, dt: f64, cfg: &EvolutionConfig) -> Result<Vars> {
    let center = field.eval(x, y)?;
    evolve_point_with_center(field, x, y, dt, dt, cfg, center)
}

/// Evolves the point `(x, y)` by `dt` as part of a time step of size
/// `step_dt` (equal to `dt`, or twice it for the half-step values). `center`
/// holds the stored point values at time `t`, the apex terms of the
/// operators.
pub fn evolve_point_with_center<F: FieldView + ?Sized>(
    field: &F,
    x: f64,
    y: f64,
    dt: f64,
    step_dt: f64,
    cfg: &EvolutionConfig,
    center: Vars,
) -> Result<Vars> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter { name: "dt", reason: format!("must be positive, got {dt}") });
    }
    let r = cfg.c * dt;
    let r_aux = cfg.c * cfg.aux_dt(dt, step_dt);
    let integ = cfg.integration();
    let m = circle_moments(field, x, y, r, integ)?;
    let one = Weight::One.index();
    let (cos, sin) = (Weight::Cos.index(), Weight::Sin.index());
    let (cos2, sin2, sc) = (Weight::Cos2.index(), Weight::Sin2.index(), Weight::SinCos.index());

    let u_rest = (2.0 * m[U][cos2] - 0.5 * m[U][one] + 2.0 * m[V][sc]) / PI;
    let v_rest = (2.0 * m[U][sc] + 2.0 * m[V][sin2] - 0.5 * m[V][one]) / PI;

    if cfg.kind == OperatorKind::EgQuad {
        let e = field.eval(x + r, y)?;
        let w = field.eval(x - r, y)?;
        let n = field.eval(x, y + r)?;
        let s = field.eval(x, y - r)?;
        let p = m[P][one] / PI - 0.5 * (e[U] - w[U]) - 0.5 * (n[V] - s[V]) - center[P];
        let u = -0.5 * (e[P] - w[P]) + u_rest;
        let v = -0.5 * (n[P] - s[P]) + v_rest;
        return Ok([p, u, v]);
    }

    let p_int = (m[P][one] - m[U][cos] - m[V][sin]) / PI;
    let mut u = -m[P][cos] / PI + u_rest;
    let mut v = -m[P][sin] / PI + v_rest;

    let apex_p = if cfg.kind.uses_delta() && cfg.delta > 0.0 {
        center_approx(field, x, y, cfg.delta * r_aux, integ)?[P]
    } else {
        center[P]
    };
    if cfg.kind.uses_nu() && cfg.nu > 0.0 {
        let approx = center_approx(field, x, y, cfg.nu * r_aux, integ)?;
        u -= center[U] - approx[U];
        v -= center[V] - approx[V];
    }
    Ok([p_int - apex_p, u, v])
}
