//! Diagnostics comparing extremal-function approximations with oracles.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::lp::{default_mesh_size, phi_lp_refined};
use crate::extremal::mass::density_limit;
use crate::extremal::ExtremalGrid;
use crate::geometry::quadrature::composite_gauss_legendre;
use crate::geometry::weight::WeightSpec;
use crate::geometry::{build_mesh, Domain};
use crate::index::Theta;
use crate::ortho::{bm_constant, compact_basis, gaussian_exact_basis};
use crate::poly::{MultiPolynomial, Point};

/// Default slack for pointwise θ-ordering checks.
pub const DEFAULT_MONOTONE_SLACK: f64 = 0.02;
/// Oracle values at or below this count as touching the hull.
pub const HULL_MARGIN: f64 = 0.1;
/// Allowed growth factor between consecutive convergence errors.
pub const CONVERGENCE_SLACK: f64 = 1.1;
/// Relative mesh slack in the sup-norm equivalence.
pub const SUPNORM_SLACK: f64 = 1e-2;

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityViolation {
    pub theta_high: String,
    pub theta_low: String,
    pub point_index: usize,
    pub excess: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub slack: f64,
    pub pairs_checked: usize,
    pub comparisons: usize,
    pub violations: Vec<MonotonicityViolation>,
    /// Largest `V_{θ₁} − V_{θ₂} − slack` seen, violation or not.
    pub worst_excess: f64,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `V_{θ₁} ≤ V_{θ₂} + slack` pointwise whenever `θ₁ > θ₂`.
pub fn monotonicity_report(grids: &[ExtremalGrid], slack: f64) -> Result<MonotonicityReport> {
    if let Some(first) = grids.first() {
        for g in grids {
            if g.points.len() != first.points.len() || g.values.len() != g.points.len() {
                return Err(Error::DimensionMismatch {
                    expected: first.points.len(),
                    got: g.points.len(),
                });
            }
            if g.points != first.points {
                return Err(Error::InvalidParameter("grids must share their points".into()));
            }
        }
    }
    let mut report = MonotonicityReport {
        slack,
        pairs_checked: 0,
        comparisons: 0,
        violations: Vec::new(),
        worst_excess: f64::NEG_INFINITY,
    };
    for hi in grids {
        for lo in grids {
            if hi.theta <= lo.theta {
                continue;
            }
            report.pairs_checked += 1;
            for (i, (a, b)) in hi.values.iter().zip(&lo.values).enumerate() {
                report.comparisons += 1;
                if *a == f64::NEG_INFINITY {
                    continue;
                }
                let excess = if a.is_nan() || b.is_nan() {
                    f64::INFINITY
                } else {
                    a - b - slack
                };
                report.worst_excess = report.worst_excess.max(excess);
                if excess > 0.0 {
                    report.violations.push(MonotonicityViolation {
                        theta_high: hi.theta.to_string(),
                        theta_low: lo.theta.to_string(),
                        point_index: i,
                        excess,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Band for `(1/N) ln Φ` implied by `Φ²/d ≤ K ≤ d M² Φ²`.
pub fn sandwich_band(log_k: f64, d: usize, m_n: f64, n: u64) -> (f64, f64) {
    let two_n = 2.0 * n.max(1) as f64;
    let ld = (d as f64).ln();
    ((log_k - ld - 2.0 * m_n.ln()) / two_n, (log_k + ld) / two_n)
}

#[derive(Clone, Debug)]
pub struct ConvergenceOptions {
    pub weight: WeightSpec,
    /// Lobatto points for the interval LP, or quadrature resolution otherwise.
    pub resolution: Option<usize>,
    /// Mesh resolution for the Bernstein–Markov constant.
    pub bm_resolution: Option<usize>,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        ConvergenceOptions {
            weight: WeightSpec::unit(),
            resolution: None,
            bm_resolution: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub n: u64,
    /// `sup_E |V − approximation|`.
    pub error: f64,
    pub worst_index: usize,
    pub method: String,
    /// Sandwich band for `(1/N) ln Φ` at the worst point (Bergman route).
    pub band: Option<(f64, f64)>,
    pub bm_constant: Option<f64>,
    /// LP mesh-refinement change (LP route).
    pub refine_change: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub theta: String,
    pub rows: Vec<ConvergenceRow>,
    pub strictly_decreasing: bool,
    /// `e_{i+1} ≤ 1.1 e_i` for every consecutive pair.
    pub non_increasing_with_slack: bool,
}

/// Uniform error of `(1/N) ln Φ_N` against an oracle on a set `E` off the hull.
///
/// Intervals go through the LP; other compact sets use `(1/2N) ln K_N`.
pub fn uniform_convergence_report(
    domain: &Domain,
    theta: Theta,
    e_points: &[Point],
    n_list: &[u64],
    oracle: &(dyn Fn(&Point) -> f64 + Sync),
    opts: &ConvergenceOptions,
) -> Result<ConvergenceReport> {
    if e_points.is_empty() {
        return Err(Error::EmptyMesh);
    }
    if !domain.is_bounded() {
        return Err(Error::UnboundedDomain(domain.to_string()));
    }
    let v: Vec<f64> = e_points.iter().map(oracle).collect();
    if let Some((i, x)) = v.iter().enumerate().find(|(_, x)| !(**x > HULL_MARGIN)) {
        return Err(Error::HullIntersection(format!(
            "point {i} has V = {x:.4} <= {HULL_MARGIN}"
        )));
    }
    let weight = if opts.weight.is_unit() { None } else { Some(&opts.weight) };
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be positive".into()));
        }
        let nf = n as f64;
        let row = if let Domain::Interval { .. } = domain {
            let m = opts.resolution.unwrap_or_else(|| default_mesh_size(n));
            let sols = e_points
                .par_iter()
                .map(|z| phi_lp_refined(domain, m, theta, n, z, weight))
                .collect::<Result<Vec<_>>>()?;
            let (worst, error, change) = sols
                .iter()
                .enumerate()
                .map(|(i, s)| (i, (v[i] - s.fine.value.ln() / nf).abs(), s.rel_change))
                .fold((0, f64::NEG_INFINITY, 0.0f64), |acc, (i, e, c)| {
                    let ch = acc.2.max(c);
                    if e > acc.1 { (i, e, ch) } else { (acc.0, acc.1, ch) }
                });
            ConvergenceRow {
                n,
                error,
                worst_index: worst,
                method: "lp".into(),
                band: None,
                bm_constant: None,
                refine_change: Some(change),
            }
        } else {
            let basis = compact_basis(domain, &opts.weight, n, theta, opts.resolution)?;
            let bm_m = opts.bm_resolution.unwrap_or(4 * n as usize + 4);
            let mesh = build_mesh(domain, bm_m)?;
            let m_n = bm_constant(&mesh.points, &basis, &opts.weight, n)?;
            let logs = e_points
                .par_iter()
                .map(|z| basis.log_bergman(z))
                .collect::<Result<Vec<f64>>>()?;
            let (worst, error) = logs
                .iter()
                .enumerate()
                .map(|(i, l)| (i, (v[i] - l / (2.0 * nf)).abs()))
                .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
            ConvergenceRow {
                n,
                error,
                worst_index: worst,
                method: "bergman".into(),
                band: Some(sandwich_band(logs[worst], basis.dim(), m_n, n)),
                bm_constant: Some(m_n),
                refine_change: None,
            }
        };
        rows.push(row);
    }
    let strictly_decreasing = rows.windows(2).all(|w| w[1].error < w[0].error);
    let non_increasing_with_slack = rows
        .windows(2)
        .all(|w| w[1].error <= CONVERGENCE_SLACK * w[0].error);
    Ok(ConvergenceReport {
        theta: theta.to_string(),
        rows,
        strictly_decreasing,
        non_increasing_with_slack,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    /// `sup w^N |P|` over the contact-set mesh.
    pub contact_sup: f64,
    pub global_sup: f64,
    /// `global_sup / contact_sup`.
    pub ratio: f64,
    pub holds: bool,
}

/// Compares the weighted sup norm of `p` over the contact set with the one
/// over the whole (truncated) space.
pub fn weighted_supnorm_equivalence(
    p: &MultiPolynomial,
    weight: &WeightSpec,
    n: u64,
    contact_mesh: &[Point],
    global_mesh: &[Point],
) -> Result<EquivalenceReport> {
    let contact_sup = p.sup_norm_on_mesh(contact_mesh, Some((weight, n)))?.value;
    let global_sup = p.sup_norm_on_mesh(global_mesh, Some((weight, n)))?.value;
    let ratio = global_sup / contact_sup;
    Ok(EquivalenceReport {
        contact_sup,
        global_sup,
        ratio,
        holds: ratio <= 1.0 + SUPNORM_SLACK,
    })
}

/// Polar mesh of the Gaussian contact annulus `√(θ/2) ≤ |z| ≤ 1/√2`.
pub fn gaussian_contact_mesh(theta: Theta, radial: usize, angles: usize) -> Vec<Point> {
    let lo = (theta.as_f64() / 2.0).sqrt();
    let hi = std::f64::consts::FRAC_1_SQRT_2;
    polar_mesh(lo, hi, radial, angles)
}

/// Polar mesh of the annulus `lo ≤ |z| ≤ hi` with both radii included.
pub fn polar_mesh(lo: f64, hi: f64, radial: usize, angles: usize) -> Vec<Point> {
    let radial = radial.max(2);
    let mut pts = Vec::with_capacity(radial * angles);
    for i in 0..radial {
        let r = lo + (hi - lo) * i as f64 / (radial - 1) as f64;
        for k in 0..angles {
            pts.push(Point::polar(r, 2.0 * PI * k as f64 / angles as f64));
        }
    }
    pts
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityRow {
    pub n: u64,
    pub dim: usize,
    /// `∫ |K_N/d − limit| dA` over `|z| ≤ R`.
    pub l1: f64,
    /// `∫ K_N/d dA` over `|z| ≤ R`.
    pub normalization: f64,
    /// `max K_N/d` over `|z| ≤ 2`.
    pub local_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub theta: String,
    pub radius: f64,
    pub rows: Vec<DensityRow>,
    pub strictly_decreasing: bool,
}

/// Radius of the truncated plane for the density integrals.
pub const DENSITY_RADIUS: f64 = 4.0;

/// L¹ distance between `K_N/d` for the Gaussian weight (exact moments) and
/// its limiting density, plus the normalization and a local sup.
pub fn l1_density_report(theta: Theta, n_list: &[u64]) -> Result<DensityReport> {
    if theta.is_one() {
        return Err(Error::InvalidParameter("theta = 1 has no limiting density".into()));
    }
    let t = theta.as_f64();
    let mut breaks = vec![0.0];
    if t > 0.0 {
        breaks.push((t / 2.0).sqrt());
    }
    breaks.push(std::f64::consts::FRAC_1_SQRT_2);
    breaks.push(DENSITY_RADIUS);
    let (rs, ws) = composite_gauss_legendre(&breaks, 0.01, 12);
    let gaussian = WeightSpec::gaussian();
    let pts: Vec<Point> = rs.iter().map(|&r| Point::real(r)).collect();
    let limit = density_limit(&gaussian, theta, &pts)?;
    let local: Vec<Point> = (0..=2000).map(|i| Point::real(2.0 * i as f64 / 2000.0)).collect();

    let rows = n_list
        .par_iter()
        .map(|&n| -> Result<DensityRow> {
            let basis = gaussian_exact_basis(n, theta);
            let ld = (basis.dim() as f64).ln();
            let f = |z: &Point| basis.log_bergman(z).map(|l| (l - ld).exp());
            let mut l1 = 0.0;
            let mut norm = 0.0;
            for ((p, w), lim) in pts.iter().zip(&ws).zip(&limit) {
                let v = f(p)?;
                let dm = 2.0 * PI * p.coords[0].re * w;
                l1 += (v - lim).abs() * dm;
                norm += v * dm;
            }
            let local_max = local
                .iter()
                .map(f)
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok(DensityRow {
                n,
                dim: basis.dim(),
                l1,
                normalization: norm,
                local_max,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let strictly_decreasing = rows.windows(2).all(|w| w[1].l1 < w[0].l1);
    Ok(DensityReport {
        theta: theta.to_string(),
        radius: DENSITY_RADIUS,
        rows,
        strictly_decreasing,
    })
}
