//! Weights `w = e^{−Q}` and their admissibility diagnostics.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::expr::{parse_radial_expression, Expr};
use crate::geometry::{build_mesh, Domain};
use crate::poly::Point;

/// Default growth exponent ε in `φ ≥ (1+ε) log r`.
pub const DEFAULT_GROWTH_EPS: f64 = 0.01;

#[derive(Clone, Debug, PartialEq)]
pub enum WeightKind {
    Unit,
    /// φ(z) = |z|².
    GaussianSquareModulus,
    RadialExpression { text: String, expr: Expr },
    /// Piecewise-linear `Q` through `(r, Q)` samples, linearly extrapolated.
    Tabulated { r: Vec<f64>, q: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    pub kind: WeightKind,
    pub growth_eps: f64,
}

impl WeightSpec {
    pub fn unit() -> Self {
        WeightSpec {
            kind: WeightKind::Unit,
            growth_eps: DEFAULT_GROWTH_EPS,
        }
    }

    pub fn gaussian() -> Self {
        WeightSpec {
            kind: WeightKind::GaussianSquareModulus,
            growth_eps: DEFAULT_GROWTH_EPS,
        }
    }

    pub fn radial(text: &str) -> Result<Self> {
        let expr = parse_radial_expression(text)?;
        Ok(WeightSpec {
            kind: WeightKind::RadialExpression {
                text: text.trim().to_string(),
                expr,
            },
            growth_eps: DEFAULT_GROWTH_EPS,
        })
    }

    pub fn tabulated(r: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if r.len() < 2 || r.len() != q.len() {
            return Err(Error::InvalidParameter(
                "tabulated weight needs at least two (r, Q) samples".into(),
            ));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) || r[0] < 0.0 {
            return Err(Error::InvalidParameter(
                "tabulated radii must be non-negative and strictly increasing".into(),
            ));
        }
        Ok(WeightSpec {
            kind: WeightKind::Tabulated { r, q },
            growth_eps: DEFAULT_GROWTH_EPS,
        })
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.kind, WeightKind::Unit)
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.kind, WeightKind::GaussianSquareModulus)
    }

    /// Short identifier recorded in outputs.
    pub fn id(&self) -> String {
        match &self.kind {
            WeightKind::Unit => "unit".into(),
            WeightKind::GaussianSquareModulus => "gaussian".into(),
            WeightKind::RadialExpression { text, .. } => format!("radial: {text}"),
            WeightKind::Tabulated { r, .. } => format!("tabulated({} samples)", r.len()),
        }
    }

    /// `Q(r)`; may be `+∞` where the weight vanishes.
    pub fn q_radial(&self, r: f64) -> Result<f64> {
        Ok(match &self.kind {
            WeightKind::Unit => 0.0,
            WeightKind::GaussianSquareModulus => r * r,
            WeightKind::RadialExpression { expr, .. } => expr.eval(r)?,
            WeightKind::Tabulated { r: rs, q } => {
                let n = rs.len();
                let k = match rs.iter().position(|&x| x > r) {
                    Some(0) => 0,
                    Some(k) => k - 1,
                    None => n - 2,
                };
                let t = (r - rs[k]) / (rs[k + 1] - rs[k]);
                q[k] + t * (q[k + 1] - q[k])
            }
        })
    }

    pub fn q(&self, z: &Point) -> Result<f64> {
        self.q_radial(z.norm())
    }

    /// `log w(z) = −Q(|z|)`.
    pub fn log_w(&self, z: &Point) -> Result<f64> {
        Ok(-self.q(z)?)
    }

    pub fn w(&self, z: &Point) -> Result<f64> {
        Ok((-self.q(z)?).exp())
    }

    /// Radial Laplacian `Q'' + Q'/r` by central differences.
    pub fn laplacian_radial(&self, r: f64) -> Result<f64> {
        if let WeightKind::GaussianSquareModulus = self.kind {
            return Ok(4.0);
        }
        let h = 1e-4 * r.max(1e-2);
        let (qm, q0, qp) = (self.q_radial(r - h)?, self.q_radial(r)?, self.q_radial(r + h)?);
        Ok((qp - 2.0 * q0 + qm) / (h * h) + (qp - qm) / (2.0 * h * r))
    }

    /// Membership in the region P where `dd^c φ` exists and is positive.
    pub fn in_positivity_region(&self, r: f64) -> bool {
        match self.kind {
            WeightKind::GaussianSquareModulus => true,
            WeightKind::Unit => false,
            _ => r > 0.0 && self.laplacian_radial(r).map(|v| v > 1e-8).unwrap_or(false),
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// `w` not finite or negative at a sample.
    NonFinite,
    /// `{w > 0}` fails the positive-capacity proxy.
    PluripolarSupport,
    /// `|z| w(z)` does not decay on the radius ladder.
    NoDecay,
    /// `φ ≥ (1+ε) log r` fails at large radius.
    Growth,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub is_admissible: bool,
    pub violations: Vec<Violation>,
}

impl AdmissibilityReport {
    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Radii where the unbounded-domain decay and growth checks sample.
fn ladder() -> impl Iterator<Item = f64> {
    (0..=40).map(|k| 2f64.powi(k))
}

fn finite_w(weight: &WeightSpec, r: f64) -> std::result::Result<f64, String> {
    match weight.q_radial(r) {
        Ok(q) if q.is_nan() || q == f64::NEG_INFINITY => Err(format!("w({r}) is not finite (Q = {q})")),
        Ok(q) => Ok((-q).exp()),
        Err(e) => Err(format!("Q({r}) cannot be evaluated: {e}")),
    }
}

/// Numerical proxy for the admissibility conditions on `(K, w)`.
///
/// Checks, in order: finiteness of `w` on the mesh of `K`; `w > 0` on at
/// least one full mesh circle or segment; and for `Domain::Plane`,
/// `r·w(r) < 1e−6` at `r = 2^40` plus the growth bound for `r ≥ 16`.
pub fn admissibility_check(weight: &WeightSpec, domain: &Domain) -> AdmissibilityReport {
    let mut violations = Vec::new();
    let mut push = |kind, message: String| violations.push(Violation { kind, message });

    // Sample curves: each is a set of radii/points that must all carry w > 0.
    let curves: Vec<Vec<Point>> = match domain {
        Domain::PointCloud(_) => {
            push(
                ViolationKind::PluripolarSupport,
                "a finite point set is pluripolar".into(),
            );
            Vec::new()
        }
        Domain::Plane { .. } => [0.25, 0.5, 1.0, 2.0]
            .iter()
            .map(|&r| vec![Point::real(r)])
            .collect(),
        Domain::Interval { .. } | Domain::Circle { .. } => match build_mesh(domain, 64) {
            Ok(m) => vec![m.points],
            Err(_) => Vec::new(),
        },
        _ => match build_mesh(domain, 16) {
            // group polar grids by radius so that each ring is one curve
            Ok(m) => {
                let mut rings: Vec<(f64, Vec<Point>)> = Vec::new();
                for p in m.points {
                    let r = (p.norm() * 1e9).round() / 1e9;
                    match rings.iter_mut().find(|(rr, _)| *rr == r) {
                        Some((_, v)) => v.push(p),
                        None => rings.push((r, vec![p])),
                    }
                }
                rings.into_iter().map(|(_, v)| v).collect()
            }
            Err(_) => Vec::new(),
        },
    };

    let mut probe: Vec<f64> = curves.iter().flatten().map(|p| p.norm()).collect();
    if matches!(domain, Domain::Plane { .. }) {
        probe.push(0.0);
        probe.extend(ladder());
    }
    let mut finite = true;
    for &r in &probe {
        if let Err(msg) = finite_w(weight, r) {
            push(ViolationKind::NonFinite, msg);
            finite = false;
            break;
        }
    }

    if finite && !curves.is_empty() {
        let positive_curve = curves.iter().any(|c| {
            c.iter()
                .all(|p| weight.q_radial(p.norm()).map(|q| q < f64::INFINITY).unwrap_or(false))
        });
        if !positive_curve {
            push(
                ViolationKind::PluripolarSupport,
                "w vanishes somewhere on every sampled circle/segment".into(),
            );
        }
    }

    if finite {
        if let Domain::Plane { .. } = domain {
            let r = 2f64.powi(40);
            let decay = finite_w(weight, r).map(|w| r * w).unwrap_or(f64::INFINITY);
            if !(decay < 1e-6) {
                push(
                    ViolationKind::NoDecay,
                    format!("r*w(r) = {decay:.3e} at r = 2^40 (need < 1e-6)"),
                );
            }
            for r in ladder().skip(4) {
                let phi = weight.q_radial(r).unwrap_or(f64::NAN);
                if !(phi >= (1.0 + weight.growth_eps) * r.ln()) {
                    push(
                        ViolationKind::Growth,
                        format!("phi({r}) = {phi:.6e} below (1+eps) log r"),
                    );
                    break;
                }
            }
        }
    }

    AdmissibilityReport {
        is_admissible: violations.is_empty(),
        violations,
    }
}

/// Radii scanned by [`truncation_radius`]: `0.1k` for `k ≤ 100`, then `10·2^j`.
pub fn truncation_scan_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (1..=100).map(|k| k as f64 / 10.0).collect();
    let mut r = 20.0;
    while r <= 2f64.powi(41) {
        g.push(r);
        r *= 2.0;
    }
    g
}

/// Smallest scanned ρ with `Q(r) − log r ≥ C + 1` for every scanned `r ≥ ρ`.
pub fn truncation_radius(weight: &WeightSpec, c: f64) -> Result<f64> {
    let report = admissibility_check(weight, &Domain::Plane { d: 1 });
    if let Some(v) = report.first_violation() {
        return Err(Error::NotAdmissible(v.message.clone()));
    }
    let grid = truncation_scan_grid();
    let mut rho = None;
    for &r in grid.iter().rev() {
        let q = weight.q_radial(r)?;
        if q - r.ln() >= c + 1.0 {
            rho = Some(r);
        } else {
            break;
        }
    }
    rho.ok_or_else(|| {
        Error::TruncationFailed(format!(
            "Q(r) - log r < {} at r = {:e}",
            c + 1.0,
            grid.last().unwrap()
        ))
    })
}
