//! Model domains, evaluation meshes, quadrature rules and weights.

pub mod expr;
pub mod quadrature;
pub mod weight;

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::{Point, C64};

#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Interval { a: f64, b: f64 },
    Circle { radius: f64 },
    Disk { radius: f64 },
    Annulus { r_in: f64, r_out: f64 },
    ProductOfDisks { radii: [f64; 2] },
    PointCloud(Vec<Point>),
    /// All of C^d; only meaningful together with a global weight.
    Plane { d: usize },
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::ProductOfDisks { .. } => 2,
            Domain::PointCloud(p) => p.first().map(Point::dim).unwrap_or(1),
            Domain::Plane { d } => *d,
            _ => 1,
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, Domain::Plane { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(format!("{self}: {m}")));
        match self {
            Domain::Interval { a, b } if !(a < b) || !a.is_finite() || !b.is_finite() => bad("need a < b"),
            Domain::Circle { radius } | Domain::Disk { radius } if !(*radius > 0.0 && radius.is_finite()) => {
                bad("radius must be positive")
            }
            Domain::Annulus { r_in, r_out } if !(*r_in > 0.0 && r_in < r_out && r_out.is_finite()) => {
                bad("need 0 < r_in < r_out")
            }
            Domain::ProductOfDisks { radii } if radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) => {
                bad("radii must be positive")
            }
            Domain::PointCloud(p) if p.is_empty() => bad("point cloud is empty"),
            Domain::PointCloud(p) if p.iter().any(|x| x.dim() != p[0].dim() || !x.is_finite()) => {
                bad("points must be finite and share one dimension")
            }
            Domain::Plane { d } if *d == 0 => bad("dimension must be positive"),
            _ => Ok(()),
        }
    }

    /// Lebesgue measure (length or area) where it is finite.
    pub fn measure(&self) -> Option<f64> {
        match self {
            Domain::Interval { a, b } => Some(b - a),
            Domain::Circle { radius } => Some(2.0 * PI * radius),
            Domain::Disk { radius } => Some(PI * radius * radius),
            Domain::Annulus { r_in, r_out } => Some(PI * (r_out * r_out - r_in * r_in)),
            Domain::ProductOfDisks { radii } => Some(PI * PI * radii[0].powi(2) * radii[1].powi(2)),
            _ => None,
        }
    }

    pub fn contains(&self, z: &Point, tol: f64) -> bool {
        match self {
            Domain::Interval { a, b } => {
                let x = z.coords[0];
                x.im.abs() <= tol && x.re >= a - tol && x.re <= b + tol
            }
            Domain::Circle { radius } => (z.coords[0].norm() - radius).abs() <= tol,
            Domain::Disk { radius } => z.coords[0].norm() <= radius + tol,
            Domain::Annulus { r_in, r_out } => {
                let r = z.coords[0].norm();
                r >= r_in - tol && r <= r_out + tol
            }
            Domain::ProductOfDisks { radii } => {
                z.coords[0].norm() <= radii[0] + tol && z.coords[1].norm() <= radii[1] + tol
            }
            Domain::PointCloud(p) => p.iter().any(|q| {
                q.coords.iter().zip(&z.coords).all(|(a, b)| (a - b).norm() <= tol)
            }),
            Domain::Plane { .. } => true,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Interval { a, b } => write!(f, "interval {a} {b}"),
            Domain::Circle { radius } => write!(f, "circle {radius}"),
            Domain::Disk { radius } => write!(f, "disk {radius}"),
            Domain::Annulus { r_in, r_out } => write!(f, "annulus {r_in} {r_out}"),
            Domain::ProductOfDisks { radii } => write!(f, "polydisk {} {}", radii[0], radii[1]),
            Domain::PointCloud(p) => {
                write!(f, "points")?;
                for (i, x) in p.iter().enumerate() {
                    write!(f, "{}", if i == 0 { " " } else { "; " })?;
                    for (j, c) in x.coords.iter().enumerate() {
                        if j > 0 {
                            write!(f, " ")?;
                        }
                        write!(f, "{} {}", c.re, c.im)?;
                    }
                }
                Ok(())
            }
            Domain::Plane { d } => write!(f, "plane {d}"),
        }
    }
}

impl FromStr for Domain {
    type Err = Error;

    /// `interval a b`, `circle r`, `disk r`, `annulus r_in r_out`,
    /// `polydisk r1 r2`, `plane [d]`, or `points re im; re im; …`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let bad = |m: &str| Error::Config(format!("domain {s:?}: {m}"));
        let nums = |t: &str| -> Result<Vec<f64>> {
            t.split_whitespace()
                .map(|x| x.parse::<f64>().map_err(|_| bad(&format!("bad number {x:?}"))))
                .collect()
        };
        let want = |v: Vec<f64>, n: usize| -> Result<Vec<f64>> {
            if v.len() == n {
                Ok(v)
            } else {
                Err(bad(&format!("expected {n} numbers")))
            }
        };
        let dom = match head.to_ascii_lowercase().as_str() {
            "interval" => {
                let v = want(nums(rest)?, 2)?;
                Domain::Interval { a: v[0], b: v[1] }
            }
            "circle" => Domain::Circle {
                radius: want(nums(rest)?, 1)?[0],
            },
            "disk" => Domain::Disk {
                radius: want(nums(rest)?, 1)?[0],
            },
            "annulus" => {
                let v = want(nums(rest)?, 2)?;
                Domain::Annulus { r_in: v[0], r_out: v[1] }
            }
            "polydisk" => {
                let v = want(nums(rest)?, 2)?;
                Domain::ProductOfDisks { radii: [v[0], v[1]] }
            }
            "plane" => {
                let v = nums(rest)?;
                match v.as_slice() {
                    [] => Domain::Plane { d: 1 },
                    [d] if *d >= 1.0 && d.fract() == 0.0 => Domain::Plane { d: *d as usize },
                    _ => return Err(bad("expected an integer dimension")),
                }
            }
            "points" => {
                let mut pts = Vec::new();
                for chunk in rest.split(';') {
                    let v = nums(chunk)?;
                    if v.is_empty() || v.len() % 2 != 0 {
                        return Err(bad("each point needs re/im pairs"));
                    }
                    pts.push(Point::new(v.chunks(2).map(|c| C64::new(c[0], c[1])).collect()));
                }
                Domain::PointCloud(pts)
            }
            other => return Err(bad(&format!("unknown domain kind {other:?}"))),
        };
        dom.validate().map_err(|e| bad(&e.to_string()))?;
        Ok(dom)
    }
}

/// Discretization of a domain used for sup-norms.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub domain_id: String,
    pub resolution: usize,
    pub points: Vec<Point>,
}

/// `M` Chebyshev–Lobatto points on `[a, b]`, ascending, endpoints included.
///
/// Written with `sin` so the grid is exactly symmetric and nested under
/// `M → 2M − 1`.
pub fn chebyshev_lobatto(a: f64, b: f64, m: usize) -> Vec<f64> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let n = (m - 1) as f64;
    (0..m)
        .map(|j| {
            let x = (PI * (2.0 * j as f64 - n) / (2.0 * n)).sin();
            if j == 0 {
                a
            } else if j == m - 1 {
                b
            } else {
                c + h * x
            }
        })
        .collect()
}

fn polar_grid(radii: &[f64], angles: usize) -> Vec<Point> {
    let mut pts = Vec::with_capacity(radii.len() * angles);
    for &r in radii {
        for k in 0..angles {
            pts.push(Point::polar(r, 2.0 * PI * k as f64 / angles as f64));
        }
    }
    pts
}

pub fn build_mesh(domain: &Domain, m: usize) -> Result<Mesh> {
    if m < 2 {
        return Err(Error::ResolutionTooSmall { got: m, min: 2 });
    }
    domain.validate()?;
    let points = match domain {
        Domain::Interval { a, b } => chebyshev_lobatto(*a, *b, m).into_iter().map(Point::real).collect(),
        Domain::Circle { radius } => polar_grid(&[*radius], m),
        Domain::Disk { radius } => {
            let radii: Vec<f64> = (1..=m).map(|j| radius * j as f64 / m as f64).collect();
            polar_grid(&radii, 2 * m)
        }
        Domain::Annulus { r_in, r_out } => {
            let radii: Vec<f64> = (0..m)
                .map(|j| r_in + (r_out - r_in) * j as f64 / (m - 1) as f64)
                .collect();
            polar_grid(&radii, 2 * m)
        }
        Domain::ProductOfDisks { radii } => {
            // per factor: k radii x 2k angles, at most M^2 points
            let k = ((m as f64 / 2f64.sqrt()).floor() as usize).max(1);
            let factor = |rad: f64| {
                let rs: Vec<f64> = (1..=k).map(|j| rad * j as f64 / k as f64).collect();
                polar_grid(&rs, 2 * k)
            };
            let (f1, f2) = (factor(radii[0]), factor(radii[1]));
            let mut pts = Vec::with_capacity(f1.len() * f2.len());
            for p in &f1 {
                for q in &f2 {
                    pts.push(Point::new(vec![p.coords[0], q.coords[0]]));
                }
            }
            pts
        }
        Domain::PointCloud(p) => p.clone(),
        Domain::Plane { .. } => return Err(Error::UnboundedDomain(domain.to_string())),
    };
    Ok(Mesh {
        domain_id: domain.to_string(),
        resolution: m,
        points,
    })
}

/// Drops points within `radius` of the origin.
pub fn exclude_origin(points: Vec<Point>, radius: f64) -> Vec<Point> {
    points.into_iter().filter(|p| p.norm() > radius).collect()
}

/// Radius of the ball removed from evaluation meshes when θ > 0.
pub const ORIGIN_EXCLUSION: f64 = 1e-6;

/// CSV with `x{k}_re, x{k}_im` per coordinate and an optional weight column.
pub fn write_points_csv<W: Write>(out: &mut W, points: &[Point], weights: Option<&[f64]>) -> Result<()> {
    let d = points.first().map(Point::dim).unwrap_or(1);
    let mut header: Vec<String> = (1..=d).flat_map(|k| [format!("x{k}_re"), format!("x{k}_im")]).collect();
    if weights.is_some() {
        header.push("weight".into());
    }
    writeln!(out, "{}", header.join(","))?;
    for (i, p) in points.iter().enumerate() {
        let mut row: Vec<String> = p
            .coords
            .iter()
            .flat_map(|c| [format!("{:.16e}", c.re), format!("{:.16e}", c.im)])
            .collect();
        if let Some(w) = weights {
            row.push(format!("{:.16e}", w[i]));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
