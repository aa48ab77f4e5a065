//! TOML run configuration and the string formats it uses.
//!
//! ```toml
//! domain = "interval -1 1"
//! weight = "unit"            # "gaussian", "radial: 0.5*r^2", "tabulated: 0 0; 1 1"
//! theta = "1/2"
//! N = 20                     # or N_list = [10, 20, 40]
//! grid = "points 2 0"        # "polar 0.5 2 angles 8", "line -2 2 41", "logradial 1e-3 4 200"
//!
//! [tolerances]
//! slack = 0.02
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::weight::WeightSpec;
use crate::geometry::Domain;
use crate::index::Theta;
use crate::poly::{Point, C64};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Slack for θ-ordering checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    /// `V ≤ hull` counts as hull membership.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hull: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(rename = "N_list", skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thetas: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

fn field_err(field: &str, e: impl std::fmt::Display) -> Error {
    Error::Config(format!("field `{field}`: {e}"))
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn theta(&self) -> Result<Theta> {
        self.theta
            .as_deref()
            .unwrap_or("0")
            .parse()
            .map_err(|e| field_err("theta", e))
    }

    pub fn thetas(&self) -> Result<Vec<Theta>> {
        match &self.thetas {
            Some(ts) => ts
                .iter()
                .map(|t| t.parse().map_err(|e| field_err("thetas", e)))
                .collect(),
            None => Ok(vec![self.theta()?]),
        }
    }

    pub fn domain(&self) -> Result<Domain> {
        let s = self
            .domain
            .as_deref()
            .ok_or_else(|| field_err("domain", "missing"))?;
        let d: Domain = s.parse().map_err(|e| field_err("domain", e))?;
        d.validate().map_err(|e| field_err("domain", e))?;
        Ok(d)
    }

    pub fn weight(&self) -> Result<WeightSpec> {
        parse_weight(self.weight.as_deref().unwrap_or("unit")).map_err(|e| field_err("weight", e))
    }

    /// The single degree, or the first entry of `N_list`.
    pub fn n(&self) -> Result<u64> {
        self.n
            .or_else(|| self.n_list.as_ref().and_then(|l| l.first().copied()))
            .ok_or_else(|| field_err("N", "missing"))
    }

    /// `N_list`, or `[N]`.
    pub fn n_list(&self) -> Result<Vec<u64>> {
        match (&self.n_list, self.n) {
            (Some(l), _) if !l.is_empty() => Ok(l.clone()),
            (Some(_), _) => Err(field_err("N_list", "empty")),
            (None, Some(n)) => Ok(vec![n]),
            (None, None) => Err(field_err("N", "missing")),
        }
    }

    pub fn d(&self) -> usize {
        self.d.unwrap_or(1)
    }

    pub fn grid(&self, d: usize) -> Result<Vec<Point>> {
        let s = self.grid.as_deref().ok_or_else(|| field_err("grid", "missing"))?;
        parse_grid(s, d).map_err(|e| field_err("grid", e))
    }

    pub fn slack(&self) -> f64 {
        self.tolerances.as_ref().and_then(|t| t.slack).unwrap_or(0.02)
    }

    pub fn hull_tol(&self) -> f64 {
        self.tolerances.as_ref().and_then(|t| t.hull).unwrap_or(0.0)
    }
}

/// `unit`, `gaussian`, `radial: <expr in r>`, `tabulated: r q; r q; …`.
pub fn parse_weight(s: &str) -> Result<WeightSpec> {
    let s = s.trim();
    let (head, rest) = match s.split_once(':') {
        Some((h, r)) => (h.trim(), r.trim()),
        None => (s, ""),
    };
    match head {
        "unit" | "1" if rest.is_empty() => Ok(WeightSpec::unit()),
        "gaussian" | "|z|^2" if rest.is_empty() => Ok(WeightSpec::gaussian()),
        "radial" => WeightSpec::radial(rest),
        "tabulated" => {
            let mut r = Vec::new();
            let mut q = Vec::new();
            for pair in rest.split(';').filter(|p| !p.trim().is_empty()) {
                let v = parse_numbers(pair)?;
                let [a, b] = v[..] else {
                    return Err(Error::InvalidParameter(format!("expected `r q`, got {pair:?}")));
                };
                r.push(a);
                q.push(b);
            }
            WeightSpec::tabulated(r, q)
        }
        _ => Err(Error::InvalidParameter(format!("unknown weight {s:?}"))),
    }
}

fn parse_numbers(s: &str) -> Result<Vec<f64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("not a number: {t:?}")))
        })
        .collect()
}

fn parse_count(t: Option<&f64>, what: &str) -> Result<usize> {
    match t {
        Some(&v) if v >= 1.0 && v.fract() == 0.0 => Ok(v as usize),
        _ => Err(Error::InvalidParameter(format!("{what} must be a positive integer"))),
    }
}

/// Evaluation points.
///
/// * `points re im [re im …]; …`: explicit points, `2d` numbers each
/// * `polar r1 r2 … angles k`: `k` equally spaced angles on each circle (C¹)
/// * `line a b n`: `n` equally spaced real points
/// * `logradial a b n`: `n` geometrically spaced positive reals
pub fn parse_grid(s: &str, d: usize) -> Result<Vec<Point>> {
    let s = s.trim();
    let (kw, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    let bad = |m: &str| Error::InvalidParameter(format!("{kw}: {m}"));
    let one_dim = || {
        if d == 1 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("grid `{kw}` is for d = 1 only")))
        }
    };
    match kw {
        "points" => rest
            .split(';')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                let v = parse_numbers(p)?;
                if v.len() != 2 * d {
                    return Err(Error::DimensionMismatch { expected: 2 * d, got: v.len() });
                }
                Ok(Point::new(v.chunks(2).map(|c| C64::new(c[0], c[1])).collect()))
            })
            .collect(),
        "polar" => {
            one_dim()?;
            let (radii, angles) = match rest.split_once("angles") {
                Some((r, a)) => (parse_numbers(r)?, parse_count(parse_numbers(a)?.first(), "angles")?),
                None => (parse_numbers(rest)?, 1),
            };
            if radii.is_empty() {
                return Err(bad("no radii"));
            }
            Ok(radii
                .iter()
                .flat_map(|&r| {
                    (0..angles).map(move |k| {
                        Point::polar(r, 2.0 * std::f64::consts::PI * k as f64 / angles as f64)
                    })
                })
                .collect())
        }
        "line" | "logradial" => {
            one_dim()?;
            let v = parse_numbers(rest)?;
            if v.len() != 3 {
                return Err(bad("expected `a b n`"));
            }
            let n = parse_count(v.get(2), "n")?;
            let (a, b) = (v[0], v[1]);
            if kw == "logradial" && !(a > 0.0 && b > 0.0) {
                return Err(bad("endpoints must be positive"));
            }
            let t = |i: usize| if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
            Ok((0..n)
                .map(|i| {
                    Point::real(if kw == "line" {
                        a + (b - a) * t(i)
                    } else {
                        (a.ln() + (b.ln() - a.ln()) * t(i)).exp()
                    })
                })
                .collect())
        }
        _ => Err(Error::InvalidParameter(format!("unknown grid kind {kw:?}"))),
    }
}
