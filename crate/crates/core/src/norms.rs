//! Error norms and convergence orders.

use crate::grid::Grid;
use crate::state::{AfState, NodeClass};
use crate::{Error, Result, Vars};

/// `sum_ij |Q_ij - exact_ij| dx dy / |domain|` per variable, over cell
/// averages: the mean absolute error of the averages.
pub fn l1_error(state: &AfState, grid: &Grid, mut exact_average: impl FnMut(usize, usize) -> Vars) -> Result<Vars> {
    let mut err = [0.0; 3];
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let q = state.get(NodeClass::Average, i, j);
            let e = exact_average(i, j);
            for k in 0..3 {
                err[k] += (q[k] - e[k]).abs();
            }
        }
    }
    let err = err.map(|e| e * grid.cell_area() / grid.domain_area());
    if err.iter().any(|e| !e.is_finite()) {
        return Err(Error::BlowUp { step: 0, time: state.time });
    }
    Ok(err)
}

/// `log2(E_h / E_{h/2})` for each consecutive pair of a doubling sequence.
pub fn eoc(errors: &[f64]) -> Result<Vec<f64>> {
    if errors.len() < 2 {
        return Err(Error::InvalidParameter { name: "errors", reason: "need at least two resolutions".into() });
    }
    if let Some(e) = errors.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidParameter { name: "errors", reason: format!("errors must be positive, got {e}") });
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

/// Errors of a convergence study with orders between consecutive rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub resolutions: Vec<(usize, usize)>,
    pub errors: Vec<Vars>,
    /// `eoc[k]` compares rows `k` and `k + 1`; `None` where the resolutions
    /// do not double or an error is zero.
    pub eoc: Vec<[Option<f64>; 3]>,
}

impl ErrorReport {
    pub fn new(resolutions: Vec<(usize, usize)>, errors: Vec<Vars>) -> Self {
        assert_eq!(resolutions.len(), errors.len());
        let eoc = (1..errors.len())
            .map(|k| {
                let (a, b) = (resolutions[k - 1], resolutions[k]);
                let doubled = b.0 == 2 * a.0 && b.1 == 2 * a.1;
                [0, 1, 2].map(|v| {
                    let pair = [errors[k - 1][v], errors[k][v]];
                    if doubled {
                        eoc(&pair).ok().map(|o| o[0])
                    } else {
                        None
                    }
                })
            })
            .collect();
        Self { resolutions, errors, eoc }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BcMode;

    #[test]
    fn eoc_examples() {
        assert!((eoc(&[8e-5, 1e-5]).unwrap()[0] - 3.0).abs() < 1e-14);
        let o = eoc(&[1.6042545843454e-5, 2.0386219828e-6]).unwrap()[0];
        assert!((o - 2.976).abs() < 5e-4, "{o}");
        assert!(eoc(&[1e-5]).is_err());
        assert!(eoc(&[1e-5, 0.0]).is_err());
    }

    #[test]
    fn error_of_state_against_itself_is_zero() {
        let g = Grid::new(5, 4, [0.0, 1.0, 0.0, 2.0], BcMode::DoublyPeriodic).unwrap();
        let s = AfState::from_fns(&g, |i, j| [i as f64, j as f64, 1.0], |_, _| [0.0; 3]);
        let e = l1_error(&s, &g, |i, j| s.get(NodeClass::Average, i, j)).unwrap();
        assert_eq!(e, [0.0; 3]);
        let e = l1_error(&s, &g, |i, j| [i as f64 + 1.0, j as f64, 0.0]).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn report_marks_non_doubling_pairs() {
        let r = ErrorReport::new(vec![(8, 8), (16, 16), (24, 24)], vec![[8.0; 3], [1.0; 3], [0.5; 3]]);
        assert_eq!(r.eoc[0][0], Some(3.0));
        assert_eq!(r.eoc[1][0], None);
    }
}
