//! Weighted Vandermonde assembly and orthonormal bases of π_{N,θ}.
//!
//! Two routes produce the same basis (positive leading coefficients):
//! [`orthonormalize`] builds it column by column as `z_i · q_β` followed by
//! two Gram–Schmidt passes and stores the recurrence; it never forms the
//! monomial Vandermonde, whose conditioning is hopeless for N of a few dozen
//! on real segments. [`orthonormalize_householder`] runs Householder QR on the
//! explicit matrix and is kept for cross-checks at small N.

pub mod bergman;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::quadrature::{build_quadrature, log_gaussian_moment, log_sum_exp, QuadratureRule, RuleKind, MOMENT_TOL};
use crate::geometry::weight::WeightSpec;
use crate::geometry::Domain;
use crate::index::{enumerate_index_set, IncompleteIndexSet, MultiIndex, Theta};
use crate::poly::{MultiPolynomial, Point, C64};

pub use bergman::{
    bergman_diag, bm_constant, gaussian_exact_basis, gaussian_moment_oracle, scaled_density, write_basis,
    BergmanDiagonal,
};

/// Relative column norm below which a quadrature row is dropped.
pub const ROW_PRUNE: f64 = 1e-20;
/// Relative norm loss that counts as linear dependence.
pub const RANK_TOL: f64 = 1e-13;
/// Condition estimate above which the Householder route re-orthogonalizes.
pub const REORTH_KAPPA: f64 = 1e6;

/// Whether the Bergman diagonal carries the factor `e^{−2Nφ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Compact,
    Global,
}

/// Rows `sqrt(q_i) w(x_i)^N (x_i/s)^{α_j}`, stored implicitly.
#[derive(Clone, Debug)]
pub struct WeightedVandermonde {
    pub nodes: Vec<Point>,
    pub row_weight: Vec<f64>,
    pub index: IncompleteIndexSet,
    pub n: u64,
    pub scale: f64,
    pub weight: WeightSpec,
    pub variant: Variant,
    pub measure_id: String,
}

impl WeightedVandermonde {
    pub fn rows(&self) -> usize {
        self.nodes.len()
    }

    pub fn cols(&self) -> usize {
        self.index.len()
    }

    fn scaled(&self, i: usize) -> Vec<C64> {
        self.nodes[i].coords.iter().map(|c| c / self.scale).collect()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        let t = self.scaled(i);
        let mut v = C64::new(self.row_weight[i], 0.0);
        for (k, &e) in self.index.indices()[j].components().iter().enumerate() {
            v *= t[k].powu(e);
        }
        v
    }

    /// Dense columns.
    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| self.entry(i, j)).collect())
            .collect()
    }

    /// `V* V`, the Gram matrix of the scaled monomials.
    pub fn gram(&self) -> Vec<Vec<C64>> {
        let a = self.to_dense();
        let n = a.len();
        let mut g = vec![vec![C64::new(0.0, 0.0); n]; n];
        for j in 0..n {
            for k in 0..n {
                g[j][k] = dot(&a[j], &a[k]);
            }
        }
        g
    }
}

/// `Σ conj(a_i) b_i`.
fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm2(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn resolution_check(quad: &QuadratureRule, n: u64) -> Result<()> {
    let n = n as usize;
    let fail = |m: String| Err(Error::ResolutionTooLow(m));
    match quad.kind {
        RuleKind::Circle { nodes } if nodes < 2 * n + 2 => {
            fail(format!("circle rule has {nodes} nodes, need >= {}", 2 * n + 2))
        }
        RuleKind::Interval { nodes } if nodes < n + 2 => {
            fail(format!("Gauss-Legendre rule has {nodes} nodes, need >= {}", n + 2))
        }
        RuleKind::Polar { radial, angles } | RuleKind::Product { radial, angles }
            if radial < n + 2 || angles < n + 1 =>
        {
            fail(format!(
                "polar rule {radial}x{angles} too coarse, need >= {}x{}",
                n + 2,
                n + 1
            ))
        }
        RuleKind::Global { angles, .. } if angles < n + 2 => {
            fail(format!("global rule has {angles} angles, need >= {}", n + 2))
        }
        _ => Ok(()),
    }
}

/// Checks `Σ q_i |x_i|^{2k} e^{−2N|x_i|²}` against the closed-form moments.
fn gaussian_moment_check(quad: &QuadratureRule, idx: &IncompleteIndexSet, n: u64) -> Result<()> {
    let nf = n.max(1) as f64;
    let lr: Vec<(f64, f64)> = quad
        .nodes
        .iter()
        .zip(&quad.weights)
        .filter_map(|(p, w)| {
            let r = p.norm();
            (r > 0.0).then(|| (w.ln() - 2.0 * nf * r * r, r.ln()))
        })
        .collect();
    let lo = idx.min_degree();
    for k in lo..=n {
        let logs: Vec<f64> = lr.iter().map(|(a, lnr)| a + 2.0 * k as f64 * lnr).collect();
        let rel = ((log_sum_exp(&logs) - log_gaussian_moment(k, n.max(1))).exp() - 1.0).abs();
        if rel > MOMENT_TOL {
            return Err(Error::ResolutionTooLow(format!(
                "moment k={k} off by {rel:.2e} relative (limit {MOMENT_TOL:e})"
            )));
        }
    }
    Ok(())
}

pub fn assemble_vandermonde(
    quad: &QuadratureRule,
    idx: &IncompleteIndexSet,
    weight: &WeightSpec,
    n: u64,
) -> Result<WeightedVandermonde> {
    if quad.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let d = idx.dim_space();
    if let Some(p) = quad.nodes.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: p.dim(),
        });
    }
    if idx.degree_bound() != n {
        return Err(Error::InvalidParameter(format!(
            "index set has degree bound {}, expected {n}",
            idx.degree_bound()
        )));
    }
    resolution_check(quad, n)?;
    let variant = if matches!(quad.kind, RuleKind::Global { .. }) {
        Variant::Global
    } else {
        Variant::Compact
    };
    if variant == Variant::Global && weight.is_gaussian() && d == 1 {
        gaussian_moment_check(quad, idx, n)?;
    }

    let scale = quad.nodes.iter().map(Point::norm_inf).fold(1.0, f64::max);
    let nf = n as f64;
    let mut log_row = Vec::with_capacity(quad.len());
    for (p, w) in quad.nodes.iter().zip(&quad.weights) {
        let lw = weight.log_w(p)?;
        if lw.is_nan() || lw == f64::INFINITY {
            return Err(Error::NotAdmissible(format!("weight not finite at {:?}", p.coords)));
        }
        log_row.push(0.5 * w.ln() + nf * lw);
    }

    // log |entry(i, j)| without forming the entry
    let log_t: Vec<Vec<f64>> = quad
        .nodes
        .iter()
        .map(|p| p.coords.iter().map(|c| (c / scale).norm().ln()).collect())
        .collect();
    let log_entry = |i: usize, a: &MultiIndex| -> f64 {
        let mut s = log_row[i];
        for (k, &e) in a.components().iter().enumerate() {
            if e > 0 {
                s += e as f64 * log_t[i][k];
            }
        }
        s
    };
    let col_log_norm: Vec<f64> = idx
        .indices()
        .par_iter()
        .map(|a| {
            let v: Vec<f64> = (0..quad.len()).map(|i| 2.0 * log_entry(i, a)).collect();
            0.5 * log_sum_exp(&v)
        })
        .collect();
    let cut = ROW_PRUNE.ln();
    let keep: Vec<bool> = (0..quad.len())
        .into_par_iter()
        .map(|i| {
            idx.indices()
                .iter()
                .zip(&col_log_norm)
                .any(|(a, c)| log_entry(i, a) - c > cut)
        })
        .collect();

    let mut nodes = Vec::new();
    let mut row_weight = Vec::new();
    for (i, p) in quad.nodes.iter().enumerate() {
        if keep[i] {
            nodes.push(p.clone());
            row_weight.push(log_row[i].exp());
        }
    }
    if nodes.is_empty() {
        return Err(Error::EmptyMesh);
    }
    Ok(WeightedVandermonde {
        nodes,
        row_weight,
        index: idx.clone(),
        n,
        scale,
        weight: weight.clone(),
        variant,
        measure_id: quad.measure.clone(),
    })
}

/// Origin of a column in the Arnoldi recurrence.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    /// Scaled monomial `t^α` (no predecessor in the set).
    Seed,
    /// `t_var · B_parent`.
    Shift { parent: usize, var: usize },
}

/// `B_k = (source − Σ_{j<k} h_j B_j) / norm`.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub source: Source,
    pub h: Vec<C64>,
    pub norm: f64,
}

#[derive(Clone, Debug)]
enum Repr {
    Recurrence(Vec<Step>),
    /// Column k holds the coefficients of `B_k` on the scaled monomials.
    Coefficients { c: Vec<Vec<C64>>, top: Vec<u64> },
}

/// Orthonormal basis `B_0 … B_{d−1}` of π_{N,θ} for a discrete weighted measure.
#[derive(Clone, Debug)]
pub struct OrthoBasis {
    pub index: IncompleteIndexSet,
    pub n: u64,
    pub theta: Theta,
    pub weight: WeightSpec,
    pub measure_id: String,
    pub variant: Variant,
    /// Monomials are taken in `t = z / scale`.
    pub scale: f64,
    /// Natural log of the condition estimate of the scaled monomial basis.
    pub log_kappa: f64,
    repr: Repr,
}

impl OrthoBasis {
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn kappa(&self) -> f64 {
        self.log_kappa.exp()
    }

    pub fn weight_id(&self) -> String {
        self.weight.id()
    }

    /// Builds a basis from explicit coefficient columns on `(z/scale)^α`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_coefficients(
        index: IncompleteIndexSet,
        n: u64,
        weight: WeightSpec,
        measure_id: String,
        variant: Variant,
        scale: f64,
        log_kappa: f64,
        columns: Vec<Vec<C64>>,
    ) -> Self {
        let degs: Vec<u64> = index.indices().iter().map(MultiIndex::degree).collect();
        let top = columns
            .iter()
            .map(|col| {
                col.iter()
                    .zip(&degs)
                    .filter(|(c, _)| c.norm() > 0.0)
                    .map(|(_, &g)| g)
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        OrthoBasis {
            theta: index.theta(),
            index,
            n,
            weight,
            measure_id,
            variant,
            scale,
            log_kappa,
            repr: Repr::Coefficients { c: columns, top },
        }
    }

    /// Mantissas `m_k` and `ln σ` with `B_k(z) = m_k σ^{e_k}`, where `e_k`
    /// is [`Self::exponent`]; stays finite far outside the unit scale.
    pub fn mantissas(&self, z: &Point) -> (Vec<C64>, f64) {
        let t: Vec<C64> = z.coords.iter().map(|c| c / self.scale).collect();
        let sigma = t.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let u: Vec<C64> = t.iter().map(|c| c / sigma).collect();
        let idx = self.index.indices();
        let maxdeg = self.n as usize;
        let mut down = vec![1.0; maxdeg + 2];
        for e in 1..down.len() {
            down[e] = down[e - 1] / sigma;
        }
        let powers: Vec<Vec<C64>> = u
            .iter()
            .map(|&x| {
                let mut v = vec![C64::new(1.0, 0.0); maxdeg + 1];
                for e in 1..=maxdeg {
                    v[e] = v[e - 1] * x;
                }
                v
            })
            .collect();
        let mono = |a: &MultiIndex| -> C64 {
            a.components()
                .iter()
                .enumerate()
                .fold(C64::new(1.0, 0.0), |acc, (i, &e)| acc * powers[i][e as usize])
        };
        let degs: Vec<u64> = idx.iter().map(MultiIndex::degree).collect();
        let m = match &self.repr {
            Repr::Recurrence(steps) => {
                let mut m: Vec<C64> = Vec::with_capacity(steps.len());
                for (k, st) in steps.iter().enumerate() {
                    let mut v = match st.source {
                        Source::Seed => mono(&idx[k]),
                        Source::Shift { parent, var } => u[var] * m[parent],
                    };
                    for (j, h) in st.h.iter().enumerate() {
                        v -= h * m[j] * down[(degs[k] - degs[j]) as usize];
                    }
                    m.push(v / st.norm);
                }
                m
            }
            Repr::Coefficients { c, top } => {
                let mvals: Vec<C64> = idx.iter().map(mono).collect();
                c.iter()
                    .zip(top)
                    .map(|(col, &tk)| {
                        col.iter()
                            .zip(&mvals)
                            .zip(&degs)
                            .filter(|((cj, _), _)| cj.norm() > 0.0)
                            .map(|((cj, mj), &g)| cj * mj * down[(tk - g.min(tk)) as usize])
                            .sum()
                    })
                    .collect()
            }
        };
        (m, sigma.ln())
    }

    /// Exponent of σ in [`Self::mantissas`] for column k.
    pub fn exponent(&self, k: usize) -> u64 {
        match &self.repr {
            Repr::Recurrence(_) => self.index.indices()[k].degree(),
            Repr::Coefficients { top, .. } => top[k],
        }
    }

    /// `ln |B_k(z)|` for all k.
    pub fn log_abs_values(&self, z: &Point) -> Vec<f64> {
        let (m, ls) = self.mantissas(z);
        m.iter()
            .enumerate()
            .map(|(k, v)| v.norm().ln() + self.exponent(k) as f64 * ls)
            .collect()
    }

    /// `B_k(z)` directly; may overflow far from the support.
    pub fn values(&self, z: &Point) -> Vec<C64> {
        let (m, ls) = self.mantissas(z);
        m.iter()
            .enumerate()
            .map(|(k, v)| v * (self.exponent(k) as f64 * ls).exp())
            .collect()
    }

    /// `ln Σ_k |B_k(z)|²`, including `−2Nφ(z)` for the global variant.
    pub fn log_bergman(&self, z: &Point) -> Result<f64> {
        let logs: Vec<f64> = self.log_abs_values(z).iter().map(|l| 2.0 * l).collect();
        let mut v = log_sum_exp(&logs);
        if self.variant == Variant::Global && v > f64::NEG_INFINITY {
            v += 2.0 * self.n as f64 * self.weight.log_w(z)?;
        }
        Ok(v)
    }

    /// Coefficient columns on the scaled monomials `(z/scale)^α`.
    pub fn coefficients(&self) -> Vec<Vec<C64>> {
        match &self.repr {
            Repr::Coefficients { c, .. } => c.clone(),
            Repr::Recurrence(steps) => {
                let idx = &self.index;
                let n = idx.len();
                let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
                for (k, st) in steps.iter().enumerate() {
                    let mut v = vec![C64::new(0.0, 0.0); n];
                    match st.source {
                        Source::Seed => v[k] = C64::new(1.0, 0.0),
                        Source::Shift { parent, var } => {
                            for (j, c) in cols[parent].iter().enumerate() {
                                if c.norm() > 0.0 {
                                    let pos = idx
                                        .position(&idx.indices()[j].raised(var))
                                        .expect("shifted index stays in the band");
                                    v[pos] += c;
                                }
                            }
                        }
                    }
                    for (j, h) in st.h.iter().enumerate() {
                        for (i, c) in cols[j].iter().enumerate() {
                            v[i] -= h * c;
                        }
                    }
                    for x in &mut v {
                        *x /= st.norm;
                    }
                    cols.push(v);
                }
                cols
            }
        }
    }

    /// The basis as polynomials in `z`.
    pub fn polynomials(&self) -> Vec<MultiPolynomial> {
        let idx = self.index.indices();
        let d = self.index.dim_space();
        self.coefficients()
            .into_iter()
            .map(|col| {
                let mut p = MultiPolynomial::zero(d);
                for (j, c) in col.into_iter().enumerate() {
                    let s = self.scale.powi(idx[j].degree() as i32);
                    p.add_term(idx[j].clone(), c / s);
                }
                p
            })
            .collect()
    }

    /// Discrete Gram matrix of the basis on the rows of `v`.
    pub fn gram(&self, v: &WeightedVandermonde) -> Vec<Vec<C64>> {
        let cols: Vec<Vec<C64>> = v
            .nodes
            .par_iter()
            .zip(&v.row_weight)
            .map(|(p, w)| self.values(p).into_iter().map(|b| b * w).collect())
            .collect();
        let n = self.dim();
        let mut g = vec![vec![C64::new(0.0, 0.0); n]; n];
        for row in &cols {
            for j in 0..n {
                for k in 0..n {
                    g[j][k] += row[j].conj() * row[k];
                }
            }
        }
        g
    }
}

fn parent_of(idx: &IncompleteIndexSet, k: usize) -> Option<(usize, usize)> {
    let a = &idx.indices()[k];
    (0..a.dim()).find_map(|i| {
        let b = a.lowered(i)?;
        idx.position(&b).map(|p| (p, i))
    })
}

/// Removes the components along `q[..k]` from `v` twice; returns the
/// accumulated coefficients.
fn cgs2(q: &[Vec<C64>], v: &mut [C64]) -> Vec<C64> {
    let mut h = vec![C64::new(0.0, 0.0); q.len()];
    for _ in 0..2 {
        let c: Vec<C64> = if v.len() * q.len() > 1 << 16 {
            q.par_iter().map(|qj| dot(qj, v)).collect()
        } else {
            q.iter().map(|qj| dot(qj, v)).collect()
        };
        for (j, cj) in c.iter().enumerate() {
            for (x, y) in v.iter_mut().zip(&q[j]) {
                *x -= cj * y;
            }
            h[j] += cj;
        }
    }
    h
}

/// Orthonormal basis by the Arnoldi-type recurrence (default route).
/// Smallest quadrature resolution accepted for degree `n` on `domain`.
pub fn default_resolution(domain: &Domain, n: u64) -> usize {
    let n = n as usize;
    match domain {
        Domain::Circle { .. } => 2 * n + 2,
        _ => n + 2,
    }
}

/// Orthonormal basis of π_{N,θ} in `L²(w^{2N} μ)` for a compact domain,
/// with `μ` the normalized default quadrature of resolution `m`.
pub fn compact_basis(
    domain: &Domain,
    weight: &WeightSpec,
    n: u64,
    theta: Theta,
    m: Option<usize>,
) -> Result<OrthoBasis> {
    let m = m.unwrap_or_else(|| default_resolution(domain, n)).max(2);
    let quad = build_quadrature(domain, m)?.normalized();
    let idx = enumerate_index_set(n, theta, domain.dim());
    orthonormalize(&assemble_vandermonde(&quad, &idx, weight, n)?)
}

pub fn orthonormalize(v: &WeightedVandermonde) -> Result<OrthoBasis> {
    let idx = &v.index;
    let rows = v.rows();
    let t: Vec<Vec<C64>> = (0..rows).map(|i| v.scaled(i)).collect();
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(idx.len());
    let mut steps = Vec::with_capacity(idx.len());
    let mut log_r: Vec<f64> = Vec::with_capacity(idx.len());
    for k in 0..idx.len() {
        let (mut col, source) = match parent_of(idx, k) {
            Some((p, var)) => (
                (0..rows).map(|i| t[i][var] * q[p][i]).collect::<Vec<_>>(),
                Source::Shift { parent: p, var },
            ),
            None => ((0..rows).map(|i| v.entry(i, k)).collect(), Source::Seed),
        };
        let before = norm2(&col);
        let h = cgs2(&q, &mut col);
        let after = norm2(&col);
        if !(after > RANK_TOL * before) || after == 0.0 {
            return Err(Error::RankDeficient {
                position: k,
                index: idx.indices()[k].clone(),
            });
        }
        for x in &mut col {
            *x /= after;
        }
        log_r.push(match source {
            Source::Seed => after.ln(),
            Source::Shift { parent, .. } => after.ln() + log_r[parent],
        });
        q.push(col);
        steps.push(Step { source, h, norm: after });
    }
    let hi = log_r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = log_r.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(OrthoBasis {
        index: idx.clone(),
        n: v.n,
        theta: idx.theta(),
        weight: v.weight.clone(),
        measure_id: v.measure_id.clone(),
        variant: v.variant,
        scale: v.scale,
        log_kappa: hi - lo,
        repr: Repr::Recurrence(steps),
    })
}

/// Householder QR of the dense columns; returns R (n×n, row-major).
fn householder_r(mut a: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    let n = a.len();
    let m = a.first().map(Vec::len).unwrap_or(0);
    for k in 0..n.min(m) {
        let x = &a[k][k..];
        let alpha_norm = norm2(x);
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let mut v: Vec<C64> = x.to_vec();
        v[0] += phase * alpha_norm;
        let vn2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        for col in a.iter_mut().skip(k) {
            let s: C64 = v.iter().zip(&col[k..]).map(|(vi, ci)| vi.conj() * ci).sum();
            let f = s * 2.0 / vn2;
            for (ci, vi) in col[k..].iter_mut().zip(&v) {
                *ci -= f * vi;
            }
        }
    }
    let mut r = vec![vec![C64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for i in 0..=j.min(m.saturating_sub(1)) {
            r[i][j] = a[j][i];
        }
    }
    r
}

/// `R^{-1}` for upper-triangular R.
fn upper_inverse(r: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = r.len();
    let mut inv = vec![vec![C64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        inv[j][j] = 1.0 / r[j][j];
        for i in (0..j).rev() {
            let s: C64 = (i + 1..=j).map(|l| r[i][l] * inv[l][j]).sum();
            inv[i][j] = -s / r[i][i];
        }
    }
    inv
}

fn matmul(a: &[Vec<C64>], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = a.len();
    let p = b[0].len();
    let mut c = vec![vec![C64::new(0.0, 0.0); p]; n];
    for i in 0..n {
        for l in 0..b.len() {
            let ail = a[i][l];
            if ail.norm() == 0.0 {
                continue;
            }
            for j in 0..p {
                c[i][j] += ail * b[l][j];
            }
        }
    }
    c
}

fn diag_check(r: &[Vec<C64>], idx: &IncompleteIndexSet) -> Result<f64> {
    let d: Vec<f64> = (0..r.len()).map(|k| r[k][k].norm()).collect();
    let mut running: f64 = 0.0;
    for (k, &x) in d.iter().enumerate() {
        running = running.max(x);
        if !(x > RANK_TOL * running) {
            return Err(Error::RankDeficient {
                position: k,
                index: idx.indices()[k].clone(),
            });
        }
    }
    let hi = d.iter().copied().fold(0.0, f64::max);
    let lo = d.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(hi / lo)
}

/// Orthonormal basis by Householder QR of the explicit Vandermonde, with
/// one re-orthogonalization pass when the condition estimate exceeds 1e6.
pub fn orthonormalize_householder(v: &WeightedVandermonde) -> Result<OrthoBasis> {
    let a = v.to_dense();
    let r = householder_r(a.clone());
    let kappa = diag_check(&r, &v.index)?;
    // column-major C = R^{-1}: C[j][k] is coefficient j of B_k
    let mut c_rows = upper_inverse(&r);
    if kappa > REORTH_KAPPA {
        // Q1 = A R^{-1}, then Q1 = Q2 R2 and C = R^{-1} R2^{-1}
        let n = a.len();
        let m = v.rows();
        let q1: Vec<Vec<C64>> = (0..n)
            .map(|k| {
                (0..m)
                    .map(|i| (0..=k).map(|j| a[j][i] * c_rows[j][k]).sum())
                    .collect()
            })
            .collect();
        let r2 = householder_r(q1);
        diag_check(&r2, &v.index)?;
        c_rows = matmul(&c_rows, &upper_inverse(&r2));
    }
    let n = v.cols();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|k| (0..n).map(|j| c_rows[j][k]).collect()).collect();
    // positive leading coefficients, matching the recurrence route
    for (k, col) in cols.iter_mut().enumerate() {
        let lead = col[k];
        if lead.norm() > 0.0 {
            let ph = lead.conj() / lead.norm();
            for x in col.iter_mut() {
                *x *= ph;
            }
        }
    }
    Ok(OrthoBasis::from_coefficients(
        v.index.clone(),
        v.n,
        v.weight.clone(),
        v.measure_id.clone(),
        v.variant,
        v.scale,
        kappa.ln(),
        cols,
    ))
}
