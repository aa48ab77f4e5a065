//! Incomplete-polynomial extremal values on a real interval by linear programming.
//!
//! `Φ(z) = sup { |p(z)| : p ∈ span{x^m : ⌈Nθ⌉ ≤ m ≤ N}, |w^N p| ≤ 1 on the mesh }`.
//! The problem is solved as the dual
//! `min Σ W_i (u_i + v_i)` subject to `Σ (u_i − v_i) φ(x_i) = φ(z)`, where
//! `W_i = w(x_i)^{−N}`. The primal coefficients are the simplex multipliers.

use crate::error::{Error, Result};
use crate::extremal::simplex::{invert_columns, solve, PivotRule};
use crate::geometry::weight::WeightSpec;
use crate::geometry::{chebyshev_lobatto, Domain};
use crate::index::Theta;
use crate::poly::{MultiPolynomial, Point, C64};

/// Relative change in Φ tolerated between the mesh and its refinement.
pub const REFINE_TOL: f64 = 1e-3;

/// The basis `φ_j(x) = (x/s)^{m0} T_j((x − c)/h)` for `j = 0..=N − m0`.
#[derive(Clone, Debug)]
struct BandBasis {
    m0: u32,
    len: usize,
    c: f64,
    h: f64,
    s: f64,
}

impl BandBasis {
    fn new(n: u64, theta: Theta, a: f64, b: f64) -> Self {
        let m0 = theta.ceil_mul(n) as u32;
        BandBasis {
            m0,
            len: (n - m0 as u64 + 1) as usize,
            c: 0.5 * (a + b),
            h: 0.5 * (b - a),
            s: a.abs().max(b.abs()),
        }
    }

    fn eval(&self, x: f64) -> Vec<f64> {
        let t = (x - self.c) / self.h;
        let lead = (x / self.s).powi(self.m0 as i32);
        let mut out = Vec::with_capacity(self.len);
        let (mut t0, mut t1) = (1.0, t);
        for j in 0..self.len {
            let v = match j {
                0 => 1.0,
                1 => t,
                _ => {
                    let t2 = 2.0 * t * t1 - t0;
                    t0 = t1;
                    t1 = t2;
                    t2
                }
            };
            out.push(lead * v);
        }
        out
    }
}

/// Solution of one extremal LP.
#[derive(Clone, Debug)]
pub struct LpSolution {
    /// `Φ(z)`.
    pub value: f64,
    pub n: u64,
    pub theta: Theta,
    pub pivots: usize,
    basis: BandBasis,
    coeffs: Vec<f64>,
}

impl LpSolution {
    /// The extremal polynomial `P*` at a real point.
    pub fn eval(&self, x: f64) -> f64 {
        self.basis.eval(x).iter().zip(&self.coeffs).map(|(a, b)| a * b).sum()
    }

    /// `(1/N) ln Φ(z)`.
    pub fn v_value(&self) -> f64 {
        self.value.ln() / self.n.max(1) as f64
    }

    /// `P*` in the monomial basis.
    pub fn to_polynomial(&self) -> MultiPolynomial {
        let b = &self.basis;
        // coefficient vectors in x of T_j((x − c)/h)
        let lin = [-b.c / b.h, 1.0 / b.h];
        let mut acc = vec![0.0; b.len + 1];
        let mut prev: Vec<f64> = vec![1.0];
        let mut cur: Vec<f64> = lin.to_vec();
        for (j, &cj) in self.coeffs.iter().enumerate() {
            let tj: &[f64] = match j {
                0 => &prev,
                1 => &cur,
                _ => {
                    let mut next = vec![0.0; cur.len() + 1];
                    for (k, &v) in cur.iter().enumerate() {
                        next[k] += 2.0 * lin[0] * v;
                        next[k + 1] += 2.0 * lin[1] * v;
                    }
                    for (k, &v) in prev.iter().enumerate() {
                        next[k] -= v;
                    }
                    prev = std::mem::replace(&mut cur, next);
                    &cur
                }
            };
            for (k, &v) in tj.iter().enumerate() {
                acc[k] += cj * v;
            }
        }
        let lead = b.s.powi(-(b.m0 as i32));
        let mut coeffs = vec![C64::new(0.0, 0.0); b.m0 as usize];
        coeffs.extend(acc.iter().map(|&v| C64::new(v * lead, 0.0)));
        MultiPolynomial::univariate(&coeffs)
    }
}

fn real_coord(p: &Point) -> Result<f64> {
    if p.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: p.dim() });
    }
    let z = p.coords[0];
    if z.im != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "the LP route needs real points, got {z}"
        )));
    }
    Ok(z.re)
}

/// Solves for `Φ(z)` on the given real mesh, optionally weighted by `w^N`.
pub fn phi_lp(
    mesh: &[Point],
    theta: Theta,
    n: u64,
    z: &Point,
    weight: Option<&WeightSpec>,
) -> Result<LpSolution> {
    if mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let zx = real_coord(z)?;
    let mut xs = Vec::with_capacity(mesh.len());
    let mut logw = Vec::with_capacity(mesh.len());
    for p in mesh {
        let x = real_coord(p)?;
        let lw = match weight {
            Some(w) => n as f64 * w.log_w(p)?,
            None => 0.0,
        };
        if lw > f64::NEG_INFINITY {
            xs.push(x);
            logw.push(lw);
        }
    }
    let (a, b) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if !(b > a) {
        return Err(Error::InvalidParameter("mesh must span an interval".into()));
    }
    let basis = BandBasis::new(n, theta, a, b);
    let nb = basis.len;
    if xs.len() < nb {
        return Err(Error::ResolutionTooSmall { got: xs.len(), min: nb });
    }

    let g_raw = basis.eval(zx);
    let gmax = g_raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if gmax == 0.0 {
        // every admissible p vanishes at z (z = 0 with m0 > 0)
        return Ok(LpSolution {
            value: 0.0,
            n,
            theta,
            pivots: 0,
            basis,
            coeffs: vec![0.0; nb],
        });
    }
    let g: Vec<f64> = g_raw.iter().map(|v| v / gmax).collect();
    let lw_max = logw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w_cost: Vec<f64> = logw.iter().map(|l| (lw_max - l).exp()).collect();

    let m = xs.len();
    let rows: Vec<Vec<f64>> = xs.iter().map(|&x| basis.eval(x)).collect();
    let mut cols = rows.clone();
    cols.extend(rows.iter().map(|r| r.iter().map(|v| -v).collect::<Vec<f64>>()));
    let mut cost = w_cost.clone();
    cost.extend_from_slice(&w_cost);

    // initial basis: interpolation at points chosen by pivoted elimination
    let chosen = select_points(&rows, &w_cost, nb)?;
    let sel: Vec<&[f64]> = chosen.iter().map(|&i| rows[i].as_slice()).collect();
    let inv = invert_columns(&sel)
        .ok_or_else(|| Error::UnboundedLp("interpolation matrix is singular".into()))?;
    let lambda: Vec<f64> = inv.iter().map(|r| r.iter().zip(&g).map(|(a, b)| a * b).sum()).collect();
    let start: Vec<usize> = chosen
        .iter()
        .zip(&lambda)
        .map(|(&i, &l)| if l >= 0.0 { i } else { m + i })
        .collect();

    let sol = solve(&cols, &cost, &g, start, PivotRule::Dantzig)?;
    let w_min = (-lw_max).exp();
    Ok(LpSolution {
        value: sol.objective * gmax * w_min,
        n,
        theta,
        pivots: sol.pivots,
        basis,
        coeffs: sol.y.iter().map(|v| v * w_min).collect(),
    })
}

/// Greedy row selection by Gaussian elimination with complete row pivoting
/// on the cost-scaled matrix.
fn select_points(rows: &[Vec<f64>], cost: &[f64], k: usize) -> Result<Vec<usize>> {
    let mut a: Vec<Vec<f64>> = rows
        .iter()
        .zip(cost)
        .map(|(r, c)| r.iter().map(|v| v / c).collect())
        .collect();
    let mut free: Vec<usize> = (0..rows.len()).collect();
    let mut chosen = Vec::with_capacity(k);
    for j in 0..k {
        let (pos, &p) = free
            .iter()
            .enumerate()
            .max_by(|(_, &x), (_, &y)| a[x][j].abs().total_cmp(&a[y][j].abs()))
            .ok_or(Error::EmptyMesh)?;
        if a[p][j] == 0.0 {
            return Err(Error::UnboundedLp("mesh does not determine the polynomial space".into()));
        }
        free.swap_remove(pos);
        chosen.push(p);
        let prow = a[p].clone();
        for &i in &free {
            let f = a[i][j] / prow[j];
            if f != 0.0 {
                for (x, y) in a[i][j..].iter_mut().zip(&prow[j..]) {
                    *x -= f * y;
                }
            }
        }
    }
    Ok(chosen)
}

/// Default Lobatto mesh size for degree `n`.
pub fn default_mesh_size(n: u64) -> usize {
    if n <= 6 {
        61
    } else {
        401.max(5 * n as usize + 1)
    }
}

/// A solution together with its mesh-refinement check.
#[derive(Clone, Debug)]
pub struct RefinedLp {
    pub coarse: LpSolution,
    pub fine: LpSolution,
    pub rel_change: f64,
}

/// Solves on `m` and `2m − 1` Lobatto points of an interval and fails with
/// `MeshNotConverged` if Φ moves by more than [`REFINE_TOL`].
pub fn phi_lp_refined(
    domain: &Domain,
    m: usize,
    theta: Theta,
    n: u64,
    z: &Point,
    weight: Option<&WeightSpec>,
) -> Result<RefinedLp> {
    let Domain::Interval { a, b } = *domain else {
        return Err(Error::InvalidParameter(format!(
            "the LP route needs an interval, got {domain}"
        )));
    };
    domain.validate()?;
    let mesh = |k: usize| -> Vec<Point> {
        chebyshev_lobatto(a, b, k).into_iter().map(Point::real).collect()
    };
    let coarse = phi_lp(&mesh(m), theta, n, z, weight)?;
    let fine = phi_lp(&mesh(2 * m - 1), theta, n, z, weight)?;
    let rel_change = if fine.value == 0.0 {
        coarse.value.abs()
    } else {
        ((coarse.value - fine.value) / fine.value).abs()
    };
    if rel_change > REFINE_TOL {
        return Err(Error::MeshNotConverged { rel_change, limit: REFINE_TOL });
    }
    Ok(RefinedLp { coarse, fine, rel_change })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lobatto(m: usize) -> Vec<Point> {
        chebyshev_lobatto(-1.0, 1.0, m).into_iter().map(Point::real).collect()
    }

    fn cheb_t(n: u64, x: f64) -> f64 {
        // independent: closed form for |x| ≥ 1
        let s = (x * x - 1.0).sqrt();
        0.5 * ((x + s).powi(n as i32) + (x - s).powi(n as i32))
    }

    #[test]
    fn complete_case_is_chebyshev() {
        let mesh = lobatto(61);
        for n in 1..=6u64 {
            let s = phi_lp(&mesh, Theta::ZERO, n, &Point::real(2.0), None).unwrap();
            let t = cheb_t(n, 2.0);
            assert!((s.value - t).abs() < 1e-9 * t, "n={n}: {} vs {t}", s.value);
            // P* = ±T_N
            for x in [-1.0f64, -0.3, 0.2, 0.9] {
                let e = x.acos() * n as f64;
                assert!((s.eval(x).abs() - e.cos().abs()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn half_band_degree_two() {
        let s = phi_lp(&lobatto(61), Theta::new(1, 2).unwrap(), 2, &Point::real(2.0), None).unwrap();
        assert!((s.value - 4.0).abs() < 1e-10);
    }

    #[test]
    fn polynomial_export_matches_evaluation() {
        let s = phi_lp(&lobatto(61), Theta::new(1, 3).unwrap(), 6, &Point::real(1.5), None).unwrap();
        let p = s.to_polynomial();
        assert_eq!(p.valuation(), Some(2));
        for x in [-0.7, 0.1, 0.55, 1.5] {
            let v = p.evaluate(&Point::real(x)).unwrap();
            assert!((v.re - s.eval(x)).abs() < 1e-9 * s.value.max(1.0));
        }
        assert!((s.eval(1.5).abs() - s.value).abs() < 1e-9 * s.value);
    }

    #[test]
    fn value_at_origin_vanishes_for_positive_theta() {
        let s = phi_lp(&lobatto(61), Theta::new(1, 2).unwrap(), 4, &Point::real(0.0), None).unwrap();
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn refinement_study_passes_for_moderate_degree() {
        let d = Domain::Interval { a: -1.0, b: 1.0 };
        let r = phi_lp_refined(&d, 401, Theta::new(1, 2).unwrap(), 20, &Point::real(2.0), None).unwrap();
        assert!(r.rel_change < REFINE_TOL);
    }

    #[test]
    fn complex_point_is_rejected() {
        let z = Point::c1(C64::new(0.0, 1.0));
        assert!(phi_lp(&lobatto(11), Theta::ZERO, 2, &z, None).is_err());
    }
}
