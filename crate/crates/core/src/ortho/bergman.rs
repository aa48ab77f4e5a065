//! Bergman diagonals, Bernstein–Markov constants and the exact-moment
//! Gaussian basis.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::quadrature::log_gaussian_moment;
use crate::geometry::weight::WeightSpec;
use crate::index::{enumerate_index_set, Theta};
use crate::ortho::{OrthoBasis, Variant};
use crate::poly::{Point, C64};

#[derive(Clone, Debug)]
pub struct BergmanDiagonal {
    pub points: Vec<Point>,
    /// `ln K_N(z, z)`; authoritative where `values` overflow.
    pub log_values: Vec<f64>,
    pub values: Vec<f64>,
    pub variant: Variant,
}

/// `K_N(z,z)` at each point, computed in parallel, in input order.
pub fn bergman_diag(basis: &OrthoBasis, points: &[Point]) -> Result<BergmanDiagonal> {
    let log_values = points
        .par_iter()
        .map(|z| basis.log_bergman(z))
        .collect::<Result<Vec<f64>>>()?;
    Ok(BergmanDiagonal {
        points: points.to_vec(),
        values: log_values.iter().map(|l| l.exp()).collect(),
        log_values,
        variant: basis.variant,
    })
}

/// `∫_C |z|^{2k} e^{−2N|z|²} dA = π k! / (2N)^{k+1}`.
pub fn gaussian_moment_oracle(k: u64, n: u64) -> f64 {
    log_gaussian_moment(k, n).exp()
}

/// Orthonormal basis `z^k / sqrt(moment_k)` for `e^{−2N|z|²} dA` on C¹.
pub fn gaussian_exact_basis(n: u64, theta: Theta) -> OrthoBasis {
    let idx = enumerate_index_set(n, theta, 1);
    let m = idx.len();
    let columns: Vec<Vec<C64>> = idx
        .indices()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let mut col = vec![C64::new(0.0, 0.0); m];
            col[k] = C64::new((-0.5 * log_gaussian_moment(a.degree(), n.max(1))).exp(), 0.0);
            col
        })
        .collect();
    OrthoBasis::from_coefficients(
        idx,
        n,
        WeightSpec::gaussian(),
        "exact Gaussian moments".into(),
        Variant::Global,
        1.0,
        0.0,
        columns,
    )
}

/// `M_N = max_x w(x)^N sqrt(K_N(x,x))` over the mesh.
///
/// For a global basis the diagonal already carries `w^{2N}`.
pub fn bm_constant(mesh: &[Point], basis: &OrthoBasis, weight: &WeightSpec, n: u64) -> Result<f64> {
    if mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let logs = mesh
        .par_iter()
        .map(|x| -> Result<f64> {
            let lk = basis.log_bergman(x)?;
            let lw = if basis.variant == Variant::Global {
                0.0
            } else {
                n as f64 * weight.log_w(x)?
            };
            Ok(lw + 0.5 * lk)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(logs.into_iter().fold(f64::NEG_INFINITY, f64::max).exp())
}

/// `K_N / d(N,θ)` for a global-weight basis.
pub fn scaled_density(basis: &OrthoBasis, points: &[Point]) -> Result<Vec<f64>> {
    if basis.variant != Variant::Global {
        return Err(Error::InvalidParameter(
            "scaled density needs a basis for a global weight".into(),
        ));
    }
    let d = basis.dim() as f64;
    let diag = bergman_diag(basis, points)?;
    Ok(diag.log_values.iter().map(|l| (l - d.ln()).exp()).collect())
}

/// Coefficient export: a comment header, then one polynomial block per basis element.
pub fn write_basis<W: Write>(out: &mut W, basis: &OrthoBasis) -> Result<()> {
    writeln!(
        out,
        "# kappa {:.16e} N {} theta {} weight {} measure {}",
        basis.kappa(),
        basis.n,
        basis.theta,
        basis.weight_id(),
        basis.measure_id
    )?;
    for (k, p) in basis.polynomials().iter().enumerate() {
        writeln!(out, "# B_{k}")?;
        out.write_all(p.to_text(basis.n, basis.theta).as_bytes())?;
    }
    Ok(())
}
