//! Dense revised simplex for `min cᵀx, Ax = b, x ≥ 0` from a feasible basis.

use crate::error::{Error, Result};

/// Entering-variable rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    /// Most negative reduced cost, falling back to Bland after a run of
    /// degenerate pivots.
    Dantzig,
    /// Smallest index with negative reduced cost (never cycles).
    Bland,
}

/// Degenerate pivots tolerated before the Dantzig rule hands over to Bland.
const DEGENERATE_STREAK: usize = 30;
/// Pivots between refactorizations of the basis inverse.
const REFACTOR_EVERY: usize = 50;

#[derive(Clone, Debug)]
pub struct SimplexSolution {
    pub basis: Vec<usize>,
    pub x_basic: Vec<f64>,
    /// Simplex multipliers `y` with `Bᵀy = c_B`.
    pub y: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

/// Inverse of the square matrix whose columns are `cols`, by Gauss–Jordan
/// with partial pivoting. `None` if singular.
pub fn invert_columns(cols: &[&[f64]]) -> Option<Vec<Vec<f64>>> {
    let n = cols.len();
    // a[i][j] = cols[j][i], augmented with the identity
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|j| cols[j][i]).collect();
            row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    let scale = a.iter().flat_map(|r| r[..n].iter()).fold(0.0f64, |m, x| m.max(x.abs()));
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if !(a[p][k].abs() > 1e-14 * scale) {
            return None;
        }
        a.swap(k, p);
        let piv = a[k][k];
        for x in &mut a[k] {
            *x /= piv;
        }
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != k && row[k] != 0.0 {
                let f = row[k];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

struct State<'a> {
    cols: &'a [Vec<f64>],
    cost: &'a [f64],
    b: &'a [f64],
    basis: Vec<usize>,
    binv: Vec<Vec<f64>>,
    x: Vec<f64>,
}

impl<'a> State<'a> {
    fn refactor(&mut self) -> Result<()> {
        let bc: Vec<&[f64]> = self.basis.iter().map(|&j| self.cols[j].as_slice()).collect();
        self.binv = invert_columns(&bc)
            .ok_or_else(|| Error::UnboundedLp("basis matrix became singular".into()))?;
        self.x = mat_vec(&self.binv, self.b);
        for v in &mut self.x {
            if *v < 0.0 && *v > -1e-12 {
                *v = 0.0;
            }
        }
        Ok(())
    }

    fn multipliers(&self) -> Vec<f64> {
        let n = self.basis.len();
        (0..n)
            .map(|i| (0..n).map(|k| self.cost[self.basis[k]] * self.binv[k][i]).sum())
            .collect()
    }
}

/// Runs the simplex method from `basis`, which must be primal feasible.
pub fn solve(
    cols: &[Vec<f64>],
    cost: &[f64],
    b: &[f64],
    basis: Vec<usize>,
    rule: PivotRule,
) -> Result<SimplexSolution> {
    let n = b.len();
    assert_eq!(basis.len(), n);
    let mut st = State {
        cols,
        cost,
        b,
        basis,
        binv: Vec::new(),
        x: Vec::new(),
    };
    st.refactor()?;
    if st.x.iter().any(|&v| v < -1e-9) {
        return Err(Error::InvalidParameter("initial simplex basis is infeasible".into()));
    }
    let max_pivots = 50 * (n + cols.len());
    let mut pivots = 0;
    let mut since_refactor = 0;
    let mut streak = 0;
    let mut in_basis = vec![false; cols.len()];
    for &j in &st.basis {
        in_basis[j] = true;
    }
    loop {
        let y = st.multipliers();
        let bland = rule == PivotRule::Bland || streak >= DEGENERATE_STREAK;
        let mut entering: Option<(usize, f64)> = None;
        for j in 0..cols.len() {
            if in_basis[j] {
                continue;
            }
            let r = cost[j] - cols[j].iter().zip(&y).map(|(a, b)| a * b).sum::<f64>();
            if r < -1e-11 * cost[j].abs().max(1.0) {
                if bland {
                    entering = Some((j, r));
                    break;
                }
                if entering.is_none_or(|(_, best)| r < best) {
                    entering = Some((j, r));
                }
            }
        }
        let Some((e, _)) = entering else {
            if since_refactor > 0 {
                st.refactor()?;
                since_refactor = 0;
                continue;
            }
            let y = st.multipliers();
            let objective = st.basis.iter().zip(&st.x).map(|(&j, v)| cost[j] * v).sum();
            return Ok(SimplexSolution {
                basis: st.basis,
                x_basic: st.x,
                y,
                objective,
                pivots,
            });
        };

        let d = mat_vec(&st.binv, &cols[e]);
        let dmax = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut leave: Option<(usize, f64)> = None;
        for k in 0..n {
            if d[k] > 1e-11 * dmax {
                let t = st.x[k].max(0.0) / d[k];
                let better = match leave {
                    None => true,
                    Some((l, tl)) => {
                        if t < tl - 1e-14 * tl.abs().max(1e-300) {
                            true
                        } else if t <= tl + 1e-14 * tl.abs().max(1e-300) {
                            if bland {
                                st.basis[k] < st.basis[l]
                            } else {
                                d[k] > d[l]
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((k, t));
                }
            }
        }
        let Some((r, t)) = leave else {
            return Err(Error::UnboundedLp(format!("column {e} has no blocking row")));
        };

        for k in 0..n {
            st.x[k] -= t * d[k];
        }
        st.x[r] = t;
        let piv = d[r];
        let prow: Vec<f64> = st.binv[r].iter().map(|v| v / piv).collect();
        for k in 0..n {
            if k == r {
                st.binv[k] = prow.clone();
            } else if d[k] != 0.0 {
                let f = d[k];
                for (a, p) in st.binv[k].iter_mut().zip(&prow) {
                    *a -= f * p;
                }
            }
        }
        in_basis[st.basis[r]] = false;
        in_basis[e] = true;
        st.basis[r] = e;

        pivots += 1;
        since_refactor += 1;
        streak = if t <= 1e-14 { streak + 1 } else { 0 };
        if since_refactor >= REFACTOR_EVERY {
            st.refactor()?;
            since_refactor = 0;
        }
        if pivots > max_pivots {
            return Err(Error::SimplexStalled(pivots));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_transport_like_problem() {
        // min x1 + 2 x2 + 3 x3, x1 + x2 + x3 = 1, x1 - x3 = 0 (slack-free)
        let cols = vec![vec![1.0, 1.0], vec![1.0, 0.0], vec![1.0, -1.0]];
        let cost = [1.0, 2.0, 3.0];
        let b = [1.0, 0.0];
        // feasible start: x2 = 1, x1 = 0 basic
        for rule in [PivotRule::Dantzig, PivotRule::Bland] {
            let s = solve(&cols, &cost, &b, vec![1, 0], rule).unwrap();
            // x1 = x3 = 1/2 costs 2, x2 = 1 costs 2; optimum 2
            assert!((s.objective - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn detects_unboundedness() {
        // min -x2 s.t. x1 - x2 = 1
        let cols = vec![vec![1.0], vec![-1.0]];
        let r = solve(&cols, &[0.0, -1.0], &[1.0], vec![0], PivotRule::Bland);
        assert!(matches!(r, Err(Error::UnboundedLp(_))));
    }

    #[test]
    fn inverse_of_columns() {
        let c0 = [2.0, 0.0];
        let c1 = [1.0, 4.0];
        let inv = invert_columns(&[&c0, &c1]).unwrap();
        // [[2,1],[0,4]]^{-1} = [[1/2, -1/8],[0, 1/4]]
        assert!((inv[0][0] - 0.5).abs() < 1e-15);
        assert!((inv[0][1] + 0.125).abs() < 1e-15);
        assert!((inv[1][1] - 0.25).abs() < 1e-15);
        assert!(invert_columns(&[&c0, &c0]).is_none());
    }
}
