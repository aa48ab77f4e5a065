//! Quadrature rules: trapezoid on circles, Gauss–Legendre on segments and in
//! radius, and a truncated composite rule on the plane for global weights.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::weight::{truncation_radius, WeightSpec};
use crate::geometry::Domain;
use crate::index::{ceil_mul, Theta};
use crate::poly::Point;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    // Legendre P_n and its derivative at z via the three-term recurrence
    let legendre = |z: f64| {
        let (mut p1, mut p2) = (1.0, 0.0);
        for j in 1..=n {
            let p3 = p2;
            p2 = p1;
            p1 = ((2 * j - 1) as f64 * z * p2 - (j - 1) as f64 * p3) / j as f64;
        }
        (p1, n as f64 * (z * p1 - p2) / (z * z - 1.0))
    };
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() <= 1e-16 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, dp) = legendre(z);
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Gauss–Legendre mapped to `[a, b]`.
pub fn gauss_legendre_on(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    (x.iter().map(|t| c + h * t).collect(), w.iter().map(|v| h * v).collect())
}

/// Composite Gauss–Legendre over consecutive `breaks`, panels no wider than `panel_width`.
pub fn composite_gauss_legendre(breaks: &[f64], panel_width: f64, nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for seg in breaks.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        if b <= a {
            continue;
        }
        let panels = ((b - a) / panel_width).ceil().max(1.0) as usize;
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + h * p as f64;
            let hi = if p + 1 == panels { b } else { lo + h };
            let (x, w) = gauss_legendre_on(lo, hi, nodes);
            xs.extend(x);
            ws.extend(w);
        }
    }
    (xs, ws)
}

/// What a rule integrates exactly; checked before Vandermonde assembly.
#[derive(Clone, Debug, PartialEq)]
pub enum RuleKind {
    /// Equispaced trapezoid on a circle: exact for `z^j z̄^k`, `|j − k| < nodes`.
    Circle { nodes: usize },
    /// Gauss–Legendre on a segment: exact to polynomial degree `2·nodes − 1`.
    Interval { nodes: usize },
    /// Gauss–Legendre in radius × trapezoid in angle (disk, annulus).
    Polar { radial: usize, angles: usize },
    /// Tensor product of two polar factor rules.
    Product { radial: usize, angles: usize },
    /// Equal point masses.
    Discrete,
    /// Composite radial rule truncated at `radius` for a global weight.
    Global { radius: f64, angles: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
    pub measure: String,
}

impl QuadratureRule {
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same nodes, weights rescaled to total mass 1.
    pub fn normalized(mut self) -> Self {
        let t = self.total_mass();
        for w in &mut self.weights {
            *w /= t;
        }
        self.measure = format!("{} (normalized)", self.measure);
        self
    }

    pub fn integrate<F: Fn(&Point) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

fn polar_rule(r_in: f64, r_out: f64, m: usize) -> (Vec<Point>, Vec<f64>) {
    let (rs, rw) = gauss_legendre_on(r_in, r_out, m);
    let angles = 2 * m;
    let dt = 2.0 * PI / angles as f64;
    let mut nodes = Vec::with_capacity(m * angles);
    let mut weights = Vec::with_capacity(m * angles);
    for (r, w) in rs.iter().zip(&rw) {
        for k in 0..angles {
            nodes.push(Point::polar(*r, dt * k as f64));
            weights.push(w * r * dt);
        }
    }
    (nodes, weights)
}

pub fn build_quadrature(domain: &Domain, m: usize) -> Result<QuadratureRule> {
    if m < 2 {
        return Err(Error::ResolutionTooSmall { got: m, min: 2 });
    }
    domain.validate()?;
    Ok(match domain {
        Domain::Circle { radius } => QuadratureRule {
            nodes: (0..m)
                .map(|k| Point::polar(*radius, 2.0 * PI * k as f64 / m as f64))
                .collect(),
            weights: vec![1.0 / m as f64; m],
            kind: RuleKind::Circle { nodes: m },
            measure: "normalized arclength".into(),
        },
        Domain::Interval { a, b } => {
            let (x, w) = gauss_legendre_on(*a, *b, m);
            QuadratureRule {
                nodes: x.into_iter().map(Point::real).collect(),
                weights: w,
                kind: RuleKind::Interval { nodes: m },
                measure: "Lebesgue length".into(),
            }
        }
        Domain::Disk { radius } => {
            let (nodes, weights) = polar_rule(0.0, *radius, m);
            QuadratureRule {
                nodes,
                weights,
                kind: RuleKind::Polar { radial: m, angles: 2 * m },
                measure: "area".into(),
            }
        }
        Domain::Annulus { r_in, r_out } => {
            let (nodes, weights) = polar_rule(*r_in, *r_out, m);
            QuadratureRule {
                nodes,
                weights,
                kind: RuleKind::Polar { radial: m, angles: 2 * m },
                measure: "area".into(),
            }
        }
        Domain::ProductOfDisks { radii } => {
            let (n1, w1) = polar_rule(0.0, radii[0], m);
            let (n2, w2) = polar_rule(0.0, radii[1], m);
            let mut nodes = Vec::with_capacity(n1.len() * n2.len());
            let mut weights = Vec::with_capacity(n1.len() * n2.len());
            for (p, wp) in n1.iter().zip(&w1) {
                for (q, wq) in n2.iter().zip(&w2) {
                    nodes.push(Point::new(vec![p.coords[0], q.coords[0]]));
                    weights.push(wp * wq);
                }
            }
            QuadratureRule {
                nodes,
                weights,
                kind: RuleKind::Product { radial: m, angles: 2 * m },
                measure: "product area".into(),
            }
        }
        Domain::PointCloud(p) => QuadratureRule {
            nodes: p.clone(),
            weights: vec![1.0 / p.len() as f64; p.len()],
            kind: RuleKind::Discrete,
            measure: "uniform point masses".into(),
        },
        Domain::Plane { .. } => return Err(Error::UnboundedDomain(domain.to_string())),
    })
}

/// Nodes per radial panel of the global rule.
pub const GLOBAL_PANEL_NODES: usize = 12;
/// Required relative accuracy of the Gaussian moments on the global rule.
pub const MOMENT_TOL: f64 = 1e-8;

/// `log ∫_C |z|^{2k} e^{−2N|z|²} dA = log(π k! / (2N)^{k+1})`.
pub fn log_gaussian_moment(k: u64, n: u64) -> f64 {
    PI.ln() + ln_factorial(k) - (k + 1) as f64 * (2.0 * n as f64).ln()
}

pub fn ln_factorial(k: u64) -> f64 {
    (1..=k).map(|j| (j as f64).ln()).sum()
}

/// Area rule on C¹ for the global weight `w`, truncated at twice the
/// truncation radius. For the Gaussian weight the truncation radius is
/// doubled until every band moment is within [`MOMENT_TOL`].
pub fn build_global_quadrature(weight: &WeightSpec, n: u64, theta: Theta) -> Result<QuadratureRule> {
    let rho = truncation_radius(weight, 1.0)?;
    let mut radius = 2.0 * rho;
    let width = (1.0 / (n.max(1) as f64).sqrt()).min(0.1);
    let angles = n as usize + 2;
    for _ in 0..6 {
        let (rs, rw) = composite_gauss_legendre(&[0.0, radius], width, GLOBAL_PANEL_NODES);
        if weight.is_gaussian() {
            let worst = worst_moment_error(&rs, &rw, n, theta);
            if worst > MOMENT_TOL {
                radius *= 2.0;
                continue;
            }
        }
        let dt = 2.0 * PI / angles as f64;
        let mut nodes = Vec::with_capacity(rs.len() * angles);
        let mut weights = Vec::with_capacity(rs.len() * angles);
        for (r, w) in rs.iter().zip(&rw) {
            for k in 0..angles {
                nodes.push(Point::polar(*r, dt * k as f64));
                weights.push(w * r * dt);
            }
        }
        return Ok(QuadratureRule {
            nodes,
            weights,
            kind: RuleKind::Global { radius, angles },
            measure: format!("area on |z| <= {radius}"),
        });
    }
    Err(Error::ResolutionTooLow(format!(
        "Gaussian moments not reproduced to {MOMENT_TOL:e} up to radius {radius}"
    )))
}

/// Largest relative error of the radial rule on the band moments.
pub fn worst_moment_error(rs: &[f64], rw: &[f64], n: u64, theta: Theta) -> f64 {
    let lo = ceil_mul(n, theta);
    let nf = n.max(1) as f64;
    let mut worst: f64 = 0.0;
    for k in lo..=n {
        // log of each term 2π r w r^{2k} e^{-2N r^2}, summed stably
        let logs: Vec<f64> = rs
            .iter()
            .zip(rw)
            .filter(|(r, _)| **r > 0.0)
            .map(|(r, w)| (2.0 * PI * w * r).ln() + 2.0 * k as f64 * r.ln() - 2.0 * nf * r * r)
            .collect();
        let approx = log_sum_exp(&logs);
        let exact = log_gaussian_moment(k, n.max(1));
        worst = worst.max(((approx - exact).exp() - 1.0).abs());
    }
    worst
}

pub fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::C64;
    use proptest::prelude::*;

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(8);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((s - 2.0 / 3.0).abs() < 1e-14);
        for n in 1..30 {
            let (x, w) = gauss_legendre(n);
            for p in 0..2 * n {
                let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p as i32)).sum();
                let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
                assert!((s - exact).abs() < 1e-13, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn interval_rule_integrates_x_squared() {
        let q = build_quadrature(&Domain::Interval { a: -1.0, b: 1.0 }, 8).unwrap();
        assert!((q.integrate(|p| p.coords[0].re.powi(2)) - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn circle_rule_example() {
        let q = build_quadrature(&Domain::Circle { radius: 1.0 }, 16).unwrap();
        let z = |p: &Point| p.coords[0];
        let v: C64 = q
            .nodes
            .iter()
            .zip(&q.weights)
            .map(|(p, w)| z(p).powu(3) * z(p).conj().powu(3) * w)
            .sum();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn masses_match_domain_measure() {
        for dom in [
            Domain::Interval { a: -1.0, b: 2.0 },
            Domain::Disk { radius: 1.0 },
            Domain::Annulus { r_in: 0.5, r_out: 2.0 },
            Domain::ProductOfDisks { radii: [1.0, 0.5] },
        ] {
            let q = build_quadrature(&dom, 12).unwrap();
            let exact = dom.measure().unwrap();
            assert!(((q.total_mass() - exact) / exact).abs() < 1e-10, "{dom}");
            assert!(q.weights.iter().all(|&w| w > 0.0));
        }
        let q = build_quadrature(&Domain::Disk { radius: 1.0 }, 12).unwrap();
        assert!((q.total_mass() - PI).abs() < 1e-10);
        let c = build_quadrature(&Domain::Circle { radius: 2.0 }, 5).unwrap();
        assert!((c.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_moments_on_global_rule() {
        assert!((log_gaussian_moment(0, 1).exp() - PI / 2.0).abs() < 1e-15);
        assert!((log_gaussian_moment(1, 1).exp() - PI / 4.0).abs() < 1e-15);
        assert!((log_gaussian_moment(0, 10).exp() - PI / 20.0).abs() < 1e-15);
        for n in [1u64, 2, 10, 100] {
            let q = build_global_quadrature(&WeightSpec::gaussian(), n, Theta::ZERO).unwrap();
            let RuleKind::Global { angles, radius } = q.kind else { panic!() };
            assert!(angles >= n as usize + 2);
            let rs: Vec<f64> = q.nodes.iter().step_by(angles).map(|p| p.norm()).collect();
            let rw: Vec<f64> = q.weights.iter().step_by(angles).zip(&rs).map(|(w, r)| w * angles as f64 / (2.0 * PI * r)).collect();
            assert!(worst_moment_error(&rs, &rw, n, Theta::ZERO) < MOMENT_TOL, "n={n} R={radius}");
        }
    }

    proptest! {
        #[test]
        fn circle_trapezoid_exactness(j in 0u32..40, k in 0u32..40, extra in 1usize..10) {
            let m = (j as i64 - k as i64).unsigned_abs() as usize + extra;
            let q = build_quadrature(&Domain::Circle { radius: 1.0 }, m.max(2)).unwrap();
            let v: C64 = q.nodes.iter().zip(&q.weights)
                .map(|(p, w)| p.coords[0].powu(j) * p.coords[0].conj().powu(k) * w)
                .sum();
            let exact = if j == k { 1.0 } else { 0.0 };
            prop_assert!((v - C64::new(exact, 0.0)).norm() < 1e-13);
        }
    }
}
