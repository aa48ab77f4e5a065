//! Sparse multivariate polynomials with complex coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::weight::WeightSpec;
use crate::index::{ceil_mul, MultiIndex, Theta};

pub type C64 = Complex64;

/// Coefficients smaller than this in modulus are not stored.
pub const COEFF_DROP: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub coords: Vec<C64>,
}

impl Point {
    pub fn new(coords: Vec<C64>) -> Self {
        Point { coords }
    }

    pub fn c1(z: C64) -> Self {
        Point { coords: vec![z] }
    }

    pub fn real(x: f64) -> Self {
        Point::c1(C64::new(x, 0.0))
    }

    pub fn polar(r: f64, angle: f64) -> Self {
        Point::c1(C64::from_polar(r, angle))
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Euclidean norm |z|.
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.coords.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Per-coordinate power tables `z_i^0 ..= z_i^max`.
fn power_tables(coords: &[C64], max_deg: usize) -> Vec<Vec<C64>> {
    coords
        .iter()
        .map(|&z| {
            let mut t = Vec::with_capacity(max_deg + 1);
            let mut acc = C64::new(1.0, 0.0);
            for _ in 0..=max_deg {
                t.push(acc);
                acc *= z;
            }
            t
        })
        .collect()
}

/// Polynomial `Σ c_α z^α`, canonical (no stored zeros).
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPolynomial {
    d: usize,
    coeffs: BTreeMap<MultiIndex, C64>,
}

impl MultiPolynomial {
    pub fn zero(d: usize) -> Self {
        MultiPolynomial {
            d,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(alpha: MultiIndex, c: C64) -> Self {
        let mut p = MultiPolynomial::zero(alpha.dim());
        p.add_term(alpha, c);
        p
    }

    /// Univariate polynomial from coefficients of `1, z, z², …`.
    pub fn univariate(coeffs: &[C64]) -> Self {
        let mut p = MultiPolynomial::zero(1);
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(MultiIndex::new(vec![k as u32]), c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, C64)>>(d: usize, terms: I) -> Result<Self> {
        let mut p = MultiPolynomial::zero(d);
        for (a, c) in terms {
            if a.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: a.dim(),
                });
            }
            p.add_term(a, c);
        }
        Ok(p)
    }

    /// Adds `c·z^α`, removing the entry if it cancels.
    pub fn add_term(&mut self, alpha: MultiIndex, c: C64) {
        assert_eq!(alpha.dim(), self.d, "multi-index dimension");
        let e = self.coeffs.entry(alpha.clone()).or_default();
        *e += c;
        if e.norm() < COEFF_DROP {
            self.coeffs.remove(&alpha);
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> C64 {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn degree(&self) -> Option<u64> {
        self.coeffs.keys().map(|a| a.degree()).max()
    }

    pub fn valuation(&self) -> Option<u64> {
        self.coeffs.keys().map(|a| a.degree()).min()
    }

    fn check_dim(&self, z: &Point) -> Result<()> {
        if z.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: z.dim(),
            });
        }
        Ok(())
    }

    fn max_exponent(&self) -> usize {
        self.coeffs
            .keys()
            .flat_map(|a| a.components().iter().copied())
            .max()
            .unwrap_or(0) as usize
    }

    pub fn evaluate(&self, z: &Point) -> Result<C64> {
        self.check_dim(z)?;
        let tables = power_tables(&z.coords, self.max_exponent());
        Ok(self.eval_with_tables(&tables))
    }

    fn eval_with_tables(&self, tables: &[Vec<C64>]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (a, c) in &self.coeffs {
            let mut m = *c;
            for (i, &e) in a.components().iter().enumerate() {
                m *= tables[i][e as usize];
            }
            acc += m;
        }
        acc
    }

    /// `log|P(z)|` through monomials in `z/s`, `s = max(1, |z|∞)`.
    ///
    /// Each term is carried as `c_α (z/s)^α s^{|α|−deg P}` so nothing
    /// exceeds the coefficient scale; `deg P · log s` is added back at the end.
    pub fn log_abs(&self, z: &Point) -> Result<f64> {
        self.check_dim(z)?;
        let Some(deg) = self.degree() else {
            return Ok(f64::NEG_INFINITY);
        };
        let s = z.norm_inf().max(1.0);
        let scaled: Vec<C64> = z.coords.iter().map(|c| c / s).collect();
        let tables = power_tables(&scaled, self.max_exponent());
        let inv_s = 1.0 / s;
        let mut down = vec![1.0; deg as usize + 1];
        for k in 1..down.len() {
            down[k] = down[k - 1] * inv_s;
        }
        let mut acc = C64::new(0.0, 0.0);
        for (a, c) in &self.coeffs {
            let mut m = *c * down[(deg - a.degree()) as usize];
            for (i, &e) in a.components().iter().enumerate() {
                m *= tables[i][e as usize];
            }
            acc += m;
        }
        Ok(acc.norm().ln() + deg as f64 * s.ln())
    }

    pub fn multiply(&self, other: &MultiPolynomial) -> Result<MultiPolynomial> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: other.d,
            });
        }
        let mut out: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                *out.entry(a.add(b)).or_default() += ca * cb;
            }
        }
        out.retain(|_, c| c.norm() >= COEFF_DROP);
        Ok(MultiPolynomial {
            d: self.d,
            coeffs: out,
        })
    }

    pub fn add(&self, other: &MultiPolynomial) -> Result<MultiPolynomial> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: other.d,
            });
        }
        let mut out = self.coeffs.clone();
        for (b, cb) in &other.coeffs {
            *out.entry(b.clone()).or_default() += cb;
        }
        out.retain(|_, c| c.norm() >= COEFF_DROP);
        Ok(MultiPolynomial {
            d: self.d,
            coeffs: out,
        })
    }

    pub fn scale(&self, s: C64) -> MultiPolynomial {
        let mut coeffs: BTreeMap<MultiIndex, C64> =
            self.coeffs.iter().map(|(a, c)| (a.clone(), c * s)).collect();
        coeffs.retain(|_, c| c.norm() >= COEFF_DROP);
        MultiPolynomial { d: self.d, coeffs }
    }

    /// Membership in π_{N,θ}. The zero polynomial belongs to every space.
    pub fn is_incomplete(&self, n: u64, theta: Theta) -> bool {
        let lo = ceil_mul(n, theta);
        self.coeffs.keys().all(|a| {
            let m = a.degree();
            m >= lo && m <= n
        })
    }

    /// Splits off the terms with `|α| ≤ ⌊Nθ⌋`; the remainder lies in π_{N,θ}.
    pub fn split_incomplete(&self, n: u64, theta: Theta) -> (MultiPolynomial, MultiPolynomial) {
        let cut = theta.floor_mul(n);
        let mut low = MultiPolynomial::zero(self.d);
        let mut tail = MultiPolynomial::zero(self.d);
        for (a, c) in &self.coeffs {
            if a.degree() <= cut {
                low.coeffs.insert(a.clone(), *c);
            } else {
                tail.coeffs.insert(a.clone(), *c);
            }
        }
        (low, tail)
    }

    /// `max |P|` or `max w^N |P|` over the mesh, with the maximizing index.
    pub fn sup_norm_on_mesh(
        &self,
        mesh: &[Point],
        weight: Option<(&WeightSpec, u64)>,
    ) -> Result<SupNorm> {
        if mesh.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let values = mesh
            .par_iter()
            .map(|z| -> Result<f64> {
                Ok(match weight {
                    None => self.evaluate(z)?.norm(),
                    Some((w, n)) => {
                        let lw = w.log_w(z)?;
                        if lw == f64::NEG_INFINITY {
                            0.0
                        } else {
                            (n as f64 * lw + self.log_abs(z)?).exp()
                        }
                    }
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        let mut best = SupNorm {
            value: f64::NEG_INFINITY,
            argmax: 0,
        };
        for (i, v) in values.into_iter().enumerate() {
            if v > best.value {
                best = SupNorm { value: v, argmax: i };
            }
        }
        Ok(best)
    }

    /// Text form: header `d N theta`, then `re im a1 … ad` per term.
    pub fn to_text(&self, n: u64, theta: Theta) -> String {
        let mut s = format!("{} {} {}\n", self.d, n, theta);
        for (a, c) in &self.coeffs {
            write!(s, "{:.16e} {:.16e}", c.re, c.im).unwrap();
            for e in a.components() {
                write!(s, " {e}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<(MultiPolynomial, u64, Theta)> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Format("missing header".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(Error::Format(format!("bad header {header:?}")));
        }
        let d: usize = h[0].parse().map_err(|_| Error::Format(format!("bad d {:?}", h[0])))?;
        let n: u64 = h[1].parse().map_err(|_| Error::Format(format!("bad N {:?}", h[1])))?;
        let theta: Theta = h[2].parse()?;
        let mut p = MultiPolynomial::zero(d);
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != d + 2 {
                return Err(Error::Format(format!("expected {} fields in {line:?}", d + 2)));
            }
            let bad = || Error::Format(format!("bad term {line:?}"));
            let re: f64 = f[0].parse().map_err(|_| bad())?;
            let im: f64 = f[1].parse().map_err(|_| bad())?;
            let a: Vec<u32> = f[2..]
                .iter()
                .map(|x| x.parse().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            p.add_term(MultiIndex::new(a), C64::new(re, im));
        }
        Ok((p, n, theta))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupNorm {
    pub value: f64,
    pub argmax: usize,
}
