//! Radial Monge–Ampère mass in C¹ and the limiting Bergman density.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::weight::WeightSpec;
use crate::index::Theta;
use crate::poly::Point;

/// Minimum number of grid points on each smooth branch.
pub const MIN_BRANCH_POINTS: usize = 8;

#[derive(Clone, Debug)]
pub struct MassReport {
    pub radii: Vec<f64>,
    /// `μ(B_r)` at each radius.
    pub cumulative: Vec<f64>,
    /// Point mass at the origin, from the slope of `u` in `ln r` over the
    /// innermost decade.
    pub origin_mass: f64,
    pub annulus_mass: f64,
    pub total: f64,
    pub monotone: bool,
}

/// Three-point derivative of `f` at `s[i]` using nodes `i0, i0+1, i0+2`.
fn three_point(s: &[f64], f: &[f64], i0: usize, i: usize) -> f64 {
    let (x0, x1, x2) = (s[i0], s[i0 + 1], s[i0 + 2]);
    let x = s[i];
    // derivative of the Lagrange interpolant
    f[i0] * ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2))
        + f[i0 + 1] * ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2))
        + f[i0 + 2] * ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1))
}

/// Radial Monge–Ampère mass `μ(B_r) = 2π du/d(ln r)` for a radial
/// subharmonic `u` sampled on increasing radii.
///
/// Differences never straddle an entry of `kinks`; each branch between
/// kinks that meets the grid needs [`MIN_BRANCH_POINTS`] samples.
pub fn radial_ma_mass(radii: &[f64], u: &[f64], kinks: &[f64]) -> Result<MassReport> {
    if radii.len() != u.len() {
        return Err(Error::DimensionMismatch { expected: radii.len(), got: u.len() });
    }
    if radii.len() < MIN_BRANCH_POINTS {
        return Err(Error::GridTooCoarse(format!("{} radii", radii.len())));
    }
    if !(radii[0] > 0.0) || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("radii must be positive and increasing".into()));
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("u must be finite on the grid".into()));
    }
    let s: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let mut cuts: Vec<f64> = kinks
        .iter()
        .copied()
        .filter(|k| *k > radii[0] && *k <= radii[radii.len() - 1])
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    // branch boundaries as index ranges
    let mut ranges = Vec::new();
    let mut start = 0;
    for k in &cuts {
        let end = radii.partition_point(|r| r < k);
        ranges.push(start..end);
        start = end;
    }
    ranges.push(start..radii.len());
    for r in &ranges {
        if r.len() < MIN_BRANCH_POINTS {
            return Err(Error::GridTooCoarse(format!(
                "branch [{:.4}, {:.4}] has {} points",
                radii[r.start.min(radii.len() - 1)],
                radii[(r.end.max(1) - 1).min(radii.len() - 1)],
                r.len()
            )));
        }
    }

    let mut cumulative = vec![0.0; radii.len()];
    for r in &ranges {
        let (lo, hi) = (r.start, r.end);
        for i in lo..hi {
            let i0 = if i == lo {
                lo
            } else if i + 1 == hi {
                hi - 3
            } else {
                i - 1
            };
            cumulative[i] = 2.0 * PI * three_point(&s, u, i0, i);
        }
    }

    // least-squares slope over the innermost decade
    let inner = radii.partition_point(|r| *r <= 10.0 * radii[0]).max(2);
    let inner = inner.min(ranges[0].end);
    let (sx, sy) = (&s[..inner], &u[..inner]);
    let mx = sx.iter().sum::<f64>() / inner as f64;
    let my = sy.iter().sum::<f64>() / inner as f64;
    let sxy: f64 = sx.iter().zip(sy).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = sx.iter().map(|x| (x - mx).powi(2)).sum();
    let origin_mass = 2.0 * PI * sxy / sxx;

    let total = *cumulative.last().unwrap();
    let scale = total.abs().max(1.0);
    let monotone = cumulative.windows(2).all(|w| w[1] >= w[0] - 1e-8 * scale);
    Ok(MassReport {
        radii: radii.to_vec(),
        cumulative,
        origin_mass,
        annulus_mass: total - origin_mass,
        total,
        monotone,
    })
}

/// Limiting density of `K_N / d(N,θ)` for the Gaussian weight on C¹:
/// `(2/π)/(1 − θ)` on `√(θ/2) ≤ |z| ≤ 1/√2`, zero elsewhere.
pub fn density_limit(weight: &WeightSpec, theta: Theta, points: &[Point]) -> Result<Vec<f64>> {
    if !weight.is_gaussian() {
        return Err(Error::UnsupportedWeight(format!(
            "density limit is known only for |z|^2, got {}",
            weight.id()
        )));
    }
    if theta.is_one() {
        return Err(Error::InvalidParameter(
            "theta = 1 has a degenerate support".into(),
        ));
    }
    let t = theta.as_f64();
    let (lo, hi) = ((t / 2.0).sqrt(), std::f64::consts::FRAC_1_SQRT_2);
    let level = 2.0 / (PI * (1.0 - t));
    points
        .iter()
        .map(|z| {
            if z.dim() != 1 {
                return Err(Error::DimensionMismatch { expected: 1, got: z.dim() });
            }
            let r = z.norm();
            Ok(if r >= lo && r <= hi { level } else { 0.0 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::closed_form_v_gaussian_r;

    fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (a.ln() + (b.ln() - a.ln()) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    #[test]
    fn gaussian_masses() {
        let radii = log_grid(1e-6, 10.0, 4000);
        for (p, q) in [(0, 1), (1, 4), (1, 2), (3, 4)] {
            let t = Theta::new(p, q).unwrap();
            let u: Vec<f64> = radii.iter().map(|&r| closed_form_v_gaussian_r(t, r)).collect();
            let kinks = [(t.as_f64() / 2.0).sqrt(), 0.5f64.sqrt()];
            let m = radial_ma_mass(&radii, &u, &kinks).unwrap();
            assert!((m.total - 2.0 * PI).abs() < 1e-6 * 2.0 * PI);
            assert!((m.origin_mass - 2.0 * PI * t.as_f64()).abs() < 1e-6);
            assert!((m.annulus_mass - 2.0 * PI * (1.0 - t.as_f64())).abs() < 1e-6);
            assert!(m.monotone);
        }
    }

    #[test]
    fn coarse_branch_is_rejected() {
        let radii = log_grid(1e-3, 10.0, 30);
        let t = Theta::new(1, 2).unwrap();
        let u: Vec<f64> = radii.iter().map(|&r| closed_form_v_gaussian_r(t, r)).collect();
        let r = radial_ma_mass(&radii, &u, &[0.5, 0.5f64.sqrt()]);
        assert!(matches!(r, Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn density_limit_values() {
        let t = Theta::new(1, 2).unwrap();
        let v = density_limit(&WeightSpec::gaussian(), t, &[Point::real(0.6), Point::real(0.2), Point::real(0.9)])
            .unwrap();
        assert!((v[0] - 4.0 / PI).abs() < 1e-15);
        assert_eq!(v[1], 0.0);
        assert_eq!(v[2], 0.0);
        assert!(density_limit(&WeightSpec::gaussian(), Theta::ONE, &[]).is_err());
        assert!(density_limit(&WeightSpec::unit(), t, &[]).is_err());
    }
}
