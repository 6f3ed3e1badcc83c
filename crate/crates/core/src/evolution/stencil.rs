//! Precompiled evolution stencils.
//!
//! On a uniform lattice with a fixed `dt`, the evolved value at a node is a
//! fixed linear combination of the monomial coefficients of the surrounding
//! cells and of the node's stored values. The weights are obtained once by
//! running [`evolve_point_with_center`] on unit fields and then reused for
//! every node of the same class.

use super::field::{Lattice, ReconField, UnitField};
use super::{evolve_point_with_center, EvolutionConfig};
use crate::state::NodeClass;
use crate::{Result, Vars};

/// Contribution of one neighbouring cell: `w[out][27 * 0 + 9 * var + k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilTerm {
    pub di: isize,
    pub dj: isize,
    pub w: [[f64; 27]; 3],
}

/// Weights for one node class. Cell offsets are relative to the cell whose
/// lower-left corner, left edge or bottom edge the node is.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeStencil {
    pub class: NodeClass,
    pub terms: Vec<StencilTerm>,
    /// `center[out][in]`: weight of the node's own stored value.
    pub center: [[f64; 3]; 3],
}

impl NodeStencil {
    /// Evolved `(p, u, v)` at node `(i, j)` of this class.
    #[inline]
    pub fn apply(&self, field: &ReconField, i: isize, j: isize, center: &Vars) -> Vars {
        let mut out = [0.0; 3];
        for (o, val) in out.iter_mut().enumerate() {
            *val = self.center[o][0] * center[0] + self.center[o][1] * center[1] + self.center[o][2] * center[2];
        }
        for t in &self.terms {
            let cell = field.get(i + t.di, j + t.dj);
            let flat = cell.as_flattened();
            for (o, val) in out.iter_mut().enumerate() {
                let w = &t.w[o];
                let mut s = 0.0;
                for k in 0..27 {
                    s += w[k] * flat[k];
                }
                *val += s;
            }
        }
        out
    }

    /// Largest cell offset in any direction.
    pub fn reach(&self) -> isize {
        self.terms.iter().map(|t| t.di.abs().max(t.dj.abs())).max().unwrap_or(0)
    }
}

/// Stencils of the three point classes for one `(cfg, dx, dy, dt)`, evolving
/// by `dt` within a time step of size `step_dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilSet {
    pub cfg: EvolutionConfig,
    pub dx: f64,
    pub dy: f64,
    pub dt: f64,
    pub step_dt: f64,
    /// Indexed like [`NodeClass::POINTS`].
    pub nodes: [NodeStencil; 3],
}

impl StencilSet {
    pub fn compile(cfg: &EvolutionConfig, dx: f64, dy: f64, dt: f64, step_dt: f64) -> Result<Self> {
        cfg.validate()?;
        let lattice = Lattice { x0: 0.0, y0: 0.0, dx, dy };
        let mut nodes = Vec::with_capacity(3);
        for class in NodeClass::POINTS {
            nodes.push(compile_node(cfg, lattice, class, dt, step_dt)?);
        }
        let nodes: [NodeStencil; 3] = nodes.try_into().expect("three point classes");
        Ok(Self { cfg: *cfg, dx, dy, dt, step_dt, nodes })
    }

    pub fn matches(&self, cfg: &EvolutionConfig, dx: f64, dy: f64, dt: f64, step_dt: f64) -> bool {
        self.cfg == *cfg && self.dx == dx && self.dy == dy && self.dt == dt && self.step_dt == step_dt
    }

    pub fn node(&self, class: NodeClass) -> &NodeStencil {
        match class {
            NodeClass::XEdge => &self.nodes[0],
            NodeClass::YEdge => &self.nodes[1],
            NodeClass::Corner => &self.nodes[2],
            NodeClass::Average => panic!("averages are not evolved pointwise"),
        }
    }

    pub fn reach(&self) -> isize {
        self.nodes.iter().map(NodeStencil::reach).max().unwrap_or(0)
    }
}

/// Position of node `(0, 0)` of `class` on a lattice anchored at the origin.
pub fn canonical_position(class: NodeClass, lattice: &Lattice) -> (f64, f64) {
    match class {
        NodeClass::Corner => (0.0, 0.0),
        NodeClass::XEdge => (0.0, 0.5 * lattice.dy),
        NodeClass::YEdge => (0.5 * lattice.dx, 0.0),
        NodeClass::Average => (0.5 * lattice.dx, 0.5 * lattice.dy),
    }
}

fn compile_node(cfg: &EvolutionConfig, lattice: Lattice, class: NodeClass, dt: f64, step_dt: f64) -> Result<NodeStencil> {
    let (x, y) = canonical_position(class, &lattice);
    // The auxiliary circles may be larger than the main one at the half step.
    let r = cfg.c * dt.max(cfg.aux_dt(dt, step_dt));
    let i_lo = ((x - r) / lattice.dx).floor() as isize - 1;
    let i_hi = ((x + r) / lattice.dx).floor() as isize + 1;
    let j_lo = ((y - r) / lattice.dy).floor() as isize - 1;
    let j_hi = ((y + r) / lattice.dy).floor() as isize + 1;

    let mut terms = Vec::new();
    for dj in j_lo..=j_hi {
        for di in i_lo..=i_hi {
            let mut w = [[0.0; 27]; 3];
            let mut any = false;
            for var in 0..3 {
                for k in 0..9 {
                    let f = UnitField { lattice, cell: (di, dj), var, monomial: k };
                    let q = evolve_point_with_center(&f, x, y, dt, step_dt, cfg, [0.0; 3])?;
                    for o in 0..3 {
                        w[o][9 * var + k] = q[o];
                        any |= q[o] != 0.0;
                    }
                }
            }
            if any {
                terms.push(StencilTerm { di, dj, w });
            }
        }
    }

    let empty = UnitField { lattice, cell: (isize::MIN, isize::MIN), var: 0, monomial: 0 };
    let mut center = [[0.0; 3]; 3];
    for var in 0..3 {
        let mut e = [0.0; 3];
        e[var] = 1.0;
        let q = evolve_point_with_center(&empty, x, y, dt, step_dt, cfg, e)?;
        for o in 0..3 {
            center[o][var] = q[o];
        }
    }
    Ok(NodeStencil { class, terms, center })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bc::apply_bc;
    use crate::evolution::{evolve_point, FieldView};
    use crate::grid::{BcMode, Grid};
    use crate::recon::{CwenoParams, ReconKind};
    use crate::state::AfState;

    #[test]
    fn compiled_stencils_match_direct_evaluation() {
        let g = Grid::new(8, 8, [-1.0, 1.0, -1.0, 1.0], BcMode::DoublyPeriodic).unwrap();
        let s = AfState::from_fns(
            &g,
            |i, j| [(i * 3 + j) as f64 * 0.1, (i as f64).sin(), (j as f64 * 0.7).cos()],
            |x, y| [x * y, (2.0 * x).sin() + y, x - y * y],
        );
        let padded = apply_bc(&s, &g);
        for recon in [ReconKind::Af, ReconKind::Cweno] {
            let field = ReconField::build(&padded, recon, CwenoParams::default());
            let configs = [
                EvolutionConfig::eg2(),
                EvolutionConfig::eg_quad(),
                EvolutionConfig::eg2_delta_nu(0.8, 0.2),
                EvolutionConfig::hat_delta_nu(1.0, 0.2),
            ];
            for cfg in configs {
                let dt = 0.2 * g.dx;
                let set = StencilSet::compile(&cfg, g.dx, g.dy, dt, 2.0 * dt).unwrap();
                for class in NodeClass::POINTS {
                    for &(i, j) in &[(0usize, 0usize), (3, 5), (7, 2)] {
                        let (x, y) = class.position(&g, i as isize, j as isize);
                        let center = s.get(class, i, j);
                        let direct = crate::evolution::evolve_point_with_center(&field, x, y, dt, 2.0 * dt, &cfg, center).unwrap();
                        let fast = set.node(class).apply(&field, i as isize, j as isize, &center);
                        for k in 0..3 {
                            assert!((direct[k] - fast[k]).abs() < 1e-12, "{recon:?} {cfg:?} {class:?}");
                        }
                    }
                }
                // Direct evaluation on a continuous field gives the same
                // result whether the apex value is passed in or looked up.
                if recon == ReconKind::Af {
                    let (x, y) = NodeClass::Corner.position(&g, 2, 2);
                    let a = evolve_point(&field, x, y, dt, &cfg).unwrap();
                    let own = StencilSet::compile(&cfg, g.dx, g.dy, dt, dt).unwrap();
                    let b = own.node(NodeClass::Corner).apply(&field, 2, 2, &field.eval(x, y).unwrap());
                    for k in 0..3 {
                        assert!((a[k] - b[k]).abs() < 1e-12);
                    }
                }
            }
        }
    }
}
