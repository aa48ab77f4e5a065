//! Weighted θ-incomplete extremal functions: closed forms, Bergman and
//! basis approximations, the interval LP, and the comparison reports.

pub mod lp;
pub mod mass;
pub mod reports;
pub mod simplex;

use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index::Theta;
use crate::ortho::{OrthoBasis, Variant};
use crate::poly::{Point, C64};

pub use lp::{phi_lp, phi_lp_refined, LpSolution, RefinedLp};
pub use mass::{density_limit, radial_ma_mass, MassReport};
pub use reports::{
    l1_density_report, monotonicity_report, uniform_convergence_report,
    weighted_supnorm_equivalence, ConvergenceOptions, ConvergenceReport, DensityReport,
    EquivalenceReport, MonotonicityReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Bergman,
    SupBasis,
    Lp,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::Bergman => "bergman",
            Method::SupBasis => "sup-basis",
            Method::Lp => "lp",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "closed-form" | "closed" => Ok(Method::ClosedForm),
            "bergman" => Ok(Method::Bergman),
            "sup-basis" | "sup" => Ok(Method::SupBasis),
            "lp" => Ok(Method::Lp),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

/// Values of an extremal function (or an approximation) on a point set.
#[derive(Clone, Debug)]
pub struct ExtremalGrid {
    pub points: Vec<Point>,
    pub values: Vec<f64>,
    pub method: Method,
    pub n: u64,
    pub theta: Theta,
    pub weight_id: String,
}

impl ExtremalGrid {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        let d = self.points.first().map_or(1, Point::dim);
        let mut header: Vec<String> = (1..=d)
            .flat_map(|k| [format!("x{k}_re"), format!("x{k}_im")])
            .collect();
        header.extend(["value", "method", "N", "theta"].map(String::from));
        writeln!(out, "{}", header.join(","))?;
        for (p, v) in self.points.iter().zip(&self.values) {
            for c in &p.coords {
                write!(out, "{:.16e},{:.16e},", c.re, c.im)?;
            }
            writeln!(out, "{:.16e},{},{},{}", v, self.method, self.n, self.theta)?;
        }
        Ok(())
    }
}

/// `V_θ` for the Gaussian weight `|z|²` on C¹, as a function of `r = |z|`.
pub fn closed_form_v_gaussian_r(theta: Theta, r: f64) -> f64 {
    let t = theta.as_f64();
    let inner = (t / 2.0).sqrt();
    let outer = std::f64::consts::FRAC_1_SQRT_2;
    if r >= outer {
        r.ln() + 0.5 + 0.5 * std::f64::consts::LN_2
    } else if r >= inner {
        r * r
    } else if t == 0.0 {
        0.0
    } else {
        t * r.ln() + t / 2.0 - (t / 2.0) * (t / 2.0).ln()
    }
}

/// `V_θ` for the Gaussian weight at a point of C¹.
pub fn closed_form_v_gaussian(theta: Theta, z: &Point) -> Result<f64> {
    if z.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: z.dim() });
    }
    Ok(closed_form_v_gaussian_r(theta, z.norm()))
}

/// `V_θ` for the unit circle with trivial weight: `max(θ ln|z|, ln|z|)`.
pub fn closed_form_v_circle(theta: Theta, z: C64) -> f64 {
    let r = z.norm();
    if r == 0.0 {
        return if theta.is_zero() { 0.0 } else { f64::NEG_INFINITY };
    }
    let l = r.ln();
    (theta.as_f64() * l).max(l)
}

/// `(1/2N) ln Σ_k |B_k(z)|²` at each point (no weight factor, also for
/// global bases).
pub fn approx_v_bergman(basis: &OrthoBasis, points: &[Point]) -> Result<ExtremalGrid> {
    let two_n = 2.0 * basis.n.max(1) as f64;
    let values = points
        .par_iter()
        .map(|z| {
            let l = basis.log_bergman(z)?;
            if basis.variant == Variant::Global && l > f64::NEG_INFINITY {
                Ok(l / two_n - basis.n as f64 * basis.weight.log_w(z)? / basis.n.max(1) as f64)
            } else {
                Ok(l / two_n)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ExtremalGrid {
        points: points.to_vec(),
        values,
        method: Method::Bergman,
        n: basis.n,
        theta: basis.theta,
        weight_id: basis.weight_id(),
    })
}

/// `max_k (1/N) ln |B_k(z)|` at each point.
pub fn approx_v_sup_basis(basis: &OrthoBasis, points: &[Point]) -> Result<ExtremalGrid> {
    let nf = basis.n.max(1) as f64;
    let values = points
        .par_iter()
        .map(|z| {
            basis
                .log_abs_values(z)
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max)
                / nf
        })
        .collect();
    Ok(ExtremalGrid {
        points: points.to_vec(),
        values,
        method: Method::SupBasis,
        n: basis.n,
        theta: basis.theta,
        weight_id: basis.weight_id(),
    })
}

/// Closed-form values on a point set, for the weights that have one.
pub fn closed_form_grid(
    theta: Theta,
    points: &[Point],
    weight: &crate::geometry::weight::WeightSpec,
    domain: &crate::geometry::Domain,
) -> Result<ExtremalGrid> {
    use crate::geometry::Domain;
    let values: Vec<f64> = if weight.is_gaussian() && matches!(domain, Domain::Plane { d: 1 }) {
        points
            .iter()
            .map(|z| closed_form_v_gaussian(theta, z))
            .collect::<Result<_>>()?
    } else if weight.is_unit() && *domain == (Domain::Circle { radius: 1.0 }) {
        points
            .iter()
            .map(|z| match z.coords.as_slice() {
                [c] => Ok(closed_form_v_circle(theta, *c)),
                _ => Err(Error::DimensionMismatch { expected: 1, got: z.dim() }),
            })
            .collect::<Result<_>>()?
    } else {
        return Err(Error::UnsupportedWeight(format!(
            "no closed form for weight {} on {domain}",
            weight.id()
        )));
    };
    Ok(ExtremalGrid {
        points: points.to_vec(),
        values,
        method: Method::ClosedForm,
        n: 0,
        theta,
        weight_id: weight.id(),
    })
}

/// Hull membership test: `V ≤ tol` means the point lies in the θ-hull.
pub fn hull_membership(v: f64, tol: f64) -> bool {
    v <= tol
}
