//! Subcommand dispatch behind the `ppot` binary.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::extremal::lp::default_mesh_size;
use crate::extremal::reports::ConvergenceOptions;
use crate::extremal::{
    approx_v_bergman, approx_v_sup_basis, closed_form_grid, closed_form_v_gaussian_r,
    hull_membership, l1_density_report, monotonicity_report, phi_lp_refined, radial_ma_mass,
    uniform_convergence_report, ExtremalGrid, Method,
};
use crate::geometry::quadrature::build_global_quadrature;
use crate::geometry::weight::WeightSpec;
use crate::geometry::{build_mesh, chebyshev_lobatto, Domain};
use crate::index::{dim, enumerate_index_set, Theta};
use crate::ortho::{
    assemble_vandermonde, bm_constant, compact_basis, orthonormalize, write_basis, OrthoBasis,
};
use crate::poly::{Point, C64};
use crate::report::{fmt_f64, write_csv_file, JsonReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Dim,
    Basis,
    Phi,
    Vapprox,
    Hull,
    Bm,
    Mamass,
    Density,
    ReportConverge,
    ReportMonotone,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use clap::ValueEnum;
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub theta: Option<String>,
    pub n: Option<u64>,
    pub m: Option<usize>,
    pub method: Option<String>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(t) = &self.theta {
            cfg.theta = Some(t.clone());
        }
        if let Some(n) = self.n {
            cfg.n = Some(n);
            cfg.n_list = None;
        }
        if let Some(m) = self.m {
            cfg.m = Some(m);
        }
        if let Some(m) = &self.method {
            cfg.method = Some(m.clone());
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.display().to_string());
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    /// One-line summary for stdout.
    pub summary: String,
    pub files: Vec<PathBuf>,
}

/// Short human-readable number: up to 12 significant digits, trailing zeros trimmed.
pub fn fmt_short(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{:.*}", 12usize.saturating_sub(x.abs().log10().max(0.0) as usize), x);
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" { "0".into() } else { s }
}

struct Ctx {
    out: PathBuf,
    files: Vec<PathBuf>,
}

impl Ctx {
    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.out.join(name);
        self.files.push(p.clone());
        p
    }
}

/// Runs one subcommand, writing outputs and the effective config into the
/// output directory (`out` in the config, default `out`).
pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Outcome> {
    let mut eff = cfg.clone();
    eff.weight.get_or_insert_with(|| "unit".into());
    eff.theta.get_or_insert_with(|| "0".into());
    eff.d.get_or_insert(1);
    let out = PathBuf::from(eff.out.get_or_insert_with(|| "out".into()).clone());
    // validate shared fields before any work
    eff.theta()?;
    eff.weight()?;
    if let Some(ts) = &eff.thetas {
        if ts.is_empty() {
            return Err(Error::Config("field `thetas`: empty".into()));
        }
        eff.thetas()?;
    }
    if let Some(m) = &eff.method {
        m.parse::<Method>().map_err(|e| Error::Config(format!("field `method`: {e}")))?;
    }

    fs::create_dir_all(&out)?;
    let mut ctx = Ctx { out, files: Vec::new() };
    let summary = match cmd {
        Command::Dim => cmd_dim(&eff, &mut ctx)?,
        Command::Basis => cmd_basis(&eff, &mut ctx)?,
        Command::Phi => cmd_phi(&eff, &mut ctx)?,
        Command::Vapprox => cmd_vapprox(&mut eff, &mut ctx)?,
        Command::Hull => cmd_hull(&mut eff, &mut ctx)?,
        Command::Bm => cmd_bm(&eff, &mut ctx)?,
        Command::Mamass => cmd_mamass(&eff, &mut ctx)?,
        Command::Density => cmd_density(&eff, &mut ctx)?,
        Command::ReportConverge => cmd_converge(&eff, &mut ctx)?,
        Command::ReportMonotone => cmd_monotone(&mut eff, &mut ctx)?,
    };
    let echo = ctx.path("config.effective.toml");
    fs::write(echo, eff.to_toml())?;
    Ok(Outcome { summary, files: ctx.files })
}

fn params(cfg: &RunConfig) -> serde_json::Value {
    serde_json::to_value(cfg).unwrap_or_default()
}

fn coord_header(d: usize) -> Vec<String> {
    (1..=d).flat_map(|k| [format!("x{k}_re"), format!("x{k}_im")]).collect()
}

fn coord_cells(p: &Point) -> Vec<String> {
    p.coords.iter().flat_map(|c| [fmt_f64(c.re), fmt_f64(c.im)]).collect()
}

fn point_json(p: &Point) -> serde_json::Value {
    json!(p.coords.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>())
}

fn grid_csv(path: &Path, g: &ExtremalGrid) -> Result<()> {
    let mut buf = Vec::new();
    g.write_csv(&mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

/// Orthonormal basis for the configured domain: a normalized default
/// quadrature for compact sets, the truncated global rule for the plane.
pub fn build_basis(domain: &Domain, weight: &WeightSpec, n: u64, theta: Theta, m: Option<usize>) -> Result<OrthoBasis> {
    match domain {
        Domain::Plane { d: 1 } => {
            let q = build_global_quadrature(weight, n, theta)?;
            let idx = enumerate_index_set(n, theta, 1);
            orthonormalize(&assemble_vandermonde(&q, &idx, weight, n)?)
        }
        Domain::Plane { .. } => Err(Error::UnsupportedWeight(
            "global quadrature is implemented for d = 1".into(),
        )),
        _ => compact_basis(domain, weight, n, theta, m),
    }
}

/// Known values of V for the configured problem, where one exists.
pub fn oracle(domain: &Domain, weight: &WeightSpec, theta: Theta) -> Option<Box<dyn Fn(&Point) -> f64 + Sync>> {
    match domain {
        Domain::Plane { d: 1 } if weight.is_gaussian() => {
            Some(Box::new(move |z: &Point| closed_form_v_gaussian_r(theta, z.norm())))
        }
        Domain::Circle { radius } if weight.is_unit() && *radius == 1.0 => {
            Some(Box::new(move |z: &Point| crate::extremal::closed_form_v_circle(theta, z.coords[0])))
        }
        Domain::Interval { a, b } if weight.is_unit() && theta.is_zero() => {
            let (a, b) = (*a, *b);
            Some(Box::new(move |z: &Point| interval_green(a, b, z.coords[0])))
        }
        _ => None,
    }
}

/// Green function of `C \ [a, b]` with pole at infinity.
pub fn interval_green(a: f64, b: f64, z: C64) -> f64 {
    let w = (2.0 * z - a - b) / (b - a);
    let s = (w - 1.0).sqrt() * (w + 1.0).sqrt();
    (w + s).norm().ln().max(0.0)
}

fn cmd_dim(cfg: &RunConfig, ctx: &mut Ctx) -> Result<String> {
    let (n, theta, d) = (cfg.n()?, cfg.theta()?, cfg.d());
    if d == 0 {
        return Err(Error::Config("field `d`: must be positive".into()));
    }
    let v = dim(n, theta, d);
    let mut r = JsonReport::new("dim", params(cfg));
    r.rows.push(json!({"N": n, "theta": theta.to_string(), "d": d, "value": v}));
    r.verdict = json!("ok");
    r.write(&ctx.path("dim.json"))?;
    Ok(v.to_string())
}

fn cmd_basis(cfg: &RunConfig, ctx: &mut Ctx) -> Result<String> {
    let (domain, weight, n, theta) = (cfg.domain()?, cfg.weight()?, cfg.n()?, cfg.theta()?);
    let basis = build_basis(&domain, &weight, n, theta, cfg.m)?;
    let mut buf = Vec::new();
    write_basis(&mut buf, &basis)?;
    fs::write(ctx.path("basis.txt"), buf)?;
    if cfg.grid.is_some() {
        let pts = cfg.grid(domain.dim())?;
        let mut header = coord_header(domain.dim());
        header.extend(["log_K".into(), "K".into()]);
        let rows = pts
            .iter()
            .map(|p| -> Result<Vec<String>> {
                let l = basis.log_bergman(p)?;
                let mut row = coord_cells(p);
                row.extend([fmt_f64(l), fmt_f64(l.exp())]);
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        let h: Vec<&str> = header.iter().map(String::as_str).collect();
        write_csv_file(&ctx.path("bergman.csv"), &h, &rows)?;
    }
    Ok(format!("basis: {} polynomials, kappa {:.3e}", basis.dim(), basis.kappa()))
}

fn cmd_phi(cfg: &RunConfig, ctx: &mut Ctx) -> Result<String> {
    let (domain, weight, n, theta) = (cfg.domain()?, cfg.weight()?, cfg.n()?, cfg.theta()?);
    let pts = cfg.grid(1)?;
    let m = cfg.m.unwrap_or_else(|| default_mesh_size(n));
    let w = if weight.is_unit() { None } else { Some(&weight) };
    let sols = pts
        .iter()
        .map(|z| phi_lp_refined(&domain, m, theta, n, z, w))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<String>> = pts
        .iter()
        .zip(&sols)
        .map(|(p, s)| {
            let mut row = coord_cells(p);
            row.extend([
                fmt_f64(s.coarse.value),
                fmt_f64(s.coarse.v_value()),
                fmt_f64(s.rel_change),
            ]);
            row
        })
        .collect();
    write_csv_file(&ctx.path("phi.csv"), &["x1_re", "x1_im", "phi", "v", "refine_change"], &rows)?;
    if let Some(s) = sols.first() {
        fs::write(ctx.path("phi_poly.txt"), s.coarse.to_polynomial().to_text(n, theta))?;
    }
    let vals: Vec<String> = sols.iter().map(|s| fmt_short(s.coarse.value)).collect();
    Ok(vals.join(" "))
}

fn cmd_vapprox(cfg: &mut RunConfig, ctx: &mut Ctx) -> Result<String> {
    let method: Method = cfg.method.get_or_insert_with(|| "bergman".into()).parse()?;
    let (domain, weight, theta) = (cfg.domain()?, cfg.weight()?, cfg.theta()?);
    let pts = cfg.grid(domain.dim())?;
    let grid = compute_v(method, cfg, &domain, &weight, theta, &pts)?;
    grid_csv(&ctx.path("vapprox.csv"), &grid)?;

    let or = oracle(&domain, &weight, theta);
    let mut r = JsonReport::new("vapprox", params(cfg));
    let mut worst: f64 = 0.0;
    for (p, v) in pts.iter().zip(&grid.values) {
        let o = or.as_ref().map(|f| f(p));
        if let Some(o) = o {
            worst = worst.max((v - o).abs());
        }
        r.push_compared(json!({"z": point_json(p)}), *v, o);
    }
    r.verdict = match or {
        Some(_) => json!({"max_abs_error": worst}),
        None => json!("no oracle"),
    };
    r.write(&ctx.path("vapprox.json"))?;
    Ok(match r.verdict.get("max_abs_error") {
        Some(_) => format!("vapprox {method}: {} points, max |error| {worst:.3e}", pts.len()),
        None => format!("vapprox {method}: {} points", pts.len()),
    })
}

fn compute_v(
    method: Method,
    cfg: &RunConfig,
    domain: &Domain,
    weight: &WeightSpec,
    theta: Theta,
    pts: &[Point],
) -> Result<ExtremalGrid> {
    match method {
        Method::ClosedForm => closed_form_grid(theta, pts, weight, domain),
        Method::Bergman | Method::SupBasis => {
            let basis = build_basis(domain, weight, cfg.n()?, theta, cfg.m)?;
            if method == Method::Bergman {
                approx_v_bergman(&basis, pts)
            } else {
                approx_v_sup_basis(&basis, pts)
            }
        }
        Method::Lp => {
            let n = cfg.n()?;
            let m = cfg.m.unwrap_or_else(|| default_mesh_size(n));
            let w = if weight.is_unit() { None } else { Some(weight) };
            let values = pts
                .iter()
                .map(|z| phi_lp_refined(domain, m, theta, n, z, w).map(|s| s.coarse.v_value()))
                .collect::<Result<Vec<f64>>>()?;
            Ok(ExtremalGrid {
                points: pts.to_vec(),
                values,
                method,
                n,
                theta,
                weight_id: weight.id(),
            })
        }
    }
}

fn default_method(domain: &Domain, weight: &WeightSpec, theta: Theta) -> &'static str {
    if oracle(domain, weight, theta).is_some() && !matches!(domain, Domain::Interval { .. }) {
        "closed-form"
    } else {
        "bergman"
    }
}

fn cmd_hull(cfg: &mut RunConfig, ctx: &mut Ctx) -> Result<String> {
    let (domain, weight, theta) = (cfg.domain()?, cfg.weight()?, cfg.theta()?);
    let method: Method = cfg
        .method
        .get_or_insert_with(|| default_method(&domain, &weight, theta).into())
        .parse()?;
    let pts = cfg.grid(domain.dim())?;
    let grid = compute_v(method, cfg, &domain, &weight, theta, &pts)?;
    let tol = cfg.hull_tol();
    let mut header = coord_header(domain.dim());
    header.extend(["V".into(), "member".into()]);
    let mut inside = 0;
    let rows: Vec<Vec<String>> = pts
        .iter()
        .zip(&grid.values)
        .map(|(p, v)| {
            let m = hull_membership(*v, tol);
            inside += m as usize;
            let mut row = coord_cells(p);
            row.extend([fmt_f64(*v), m.to_string()]);
            row
        })
        .collect();
    let h: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv_file(&ctx.path("hull.csv"), &h, &rows)?;
    Ok(format!("hull: {inside} of {} points inside (tol {tol})", pts.len()))
}

fn bm_mesh(domain: &Domain, m: usize) -> Result<Vec<Point>> {
    Ok(match domain {
        Domain::Interval { a, b } => chebyshev_lobatto(*a, *b, m).into_iter().map(Point::real).collect(),
        _ => build_mesh(domain, m)?.points,
    })
}

fn cmd_bm(cfg: &RunConfig, ctx: &mut Ctx) -> Result<String> {
    let (domain, weight, theta) = (cfg.domain()?, cfg.weight()?, cfg.theta()?);
    if !domain.is_bounded() {
        return Err(Error::UnboundedDomain(domain.to_string()));
    }
    let mut r = JsonReport::new("bm", params(cfg));
    let mut rows = Vec::new();
    let mut last = String::new();
    for n in cfg.n_list()? {
        let basis = build_basis(&domain, &weight, n, theta, None)?;
        let mesh = bm_mesh(&domain, cfg.m.unwrap_or(4 * n as usize + 4))?;
        let m_n = bm_constant(&mesh, &basis, &weight, n)?;
        let root = m_n.powf(1.0 / n.max(1) as f64);
        let sd = (basis.dim() as f64).sqrt();
        r.rows.push(json!({"N": n, "dim": basis.dim(), "M_N": m_n, "M_N_root": root, "sqrt_dim": sd}));
        rows.push(vec![n.to_string(), basis.dim().to_string(), fmt_f64(m_n), fmt_f64(root), fmt_f64(sd)]);
        last = format!("bm N={n}: M_N {} (M_N^(1/N) {})", fmt_short(m_n), fmt_short(root));
    }
    r.verdict = json!("ok");
    r.write(&ctx.path("bm.json"))?;
    write_csv_file(&ctx.path("bm.csv"), &["N", "dim", "M_N", "M_N_root", "sqrt_dim"], &rows)?;
    Ok(last)
}

fn cmd_mamass(cfg: &RunConfig, ctx: &mut Ctx) -> Result<String> {
    let weight = cfg.weight()?;
    if !weight.is_gaussian() {
        return Err(Error::UnsupportedWeight(format!(
            "mass profiles need a closed form; got {}",
            weight.id()
        )));
    }
    let radii: Vec<f64> = match &cfg.grid {
        Some(_) => cfg.grid(1)?.iter().map(Point::norm).collect(),
        None => {
            let m = cfg.m.unwrap_or(4000).max(2);
            (0..m)
                .map(|i| (1e-6f64.ln() + (10f64.ln() - 1e-6f64.ln()) * i as f64 / (m - 1) as f64).exp())
                .collect()
        }
    };
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = JsonReport::new("mamass", params(cfg));
    let mut rows = Vec::new();
    let mut ok = true;
    for theta in cfg.thetas()? {
        let t = theta.as_f64();
        let u: Vec<f64> = radii.iter().map(|&x| closed_form_v_gaussian_r(theta, x)).collect();
        let rep = radial_ma_mass(&radii, &u, &[(t / 2.0).sqrt(), 0.5f64.sqrt()])?;
        for (x, c) in rep.radii.iter().zip(&rep.cumulative) {
            rows.push(vec![theta.to_string(), fmt_f64(*x), fmt_f64(*c)]);
        }
        for (name, v, o) in [
            ("origin", rep.origin_mass, two_pi * t),
            ("annulus", rep.annulus_mass, two_pi * (1.0 - t)),
            ("total", rep.total, two_pi),
        ] {
            r.push_compared(json!({"theta": theta.to_string(), "quantity": name}), v, Some(o));
        }
        ok &= rep.monotone;
    }
    r.verdict = json!({"monotone": ok});
    r.write(&ctx.path("mamass.json"))?;
    write_csv_file(&ctx.path("mamass.csv"), &["theta", "r", "mass"], &rows)?;
    Ok(format!("mamass: {} profiles, monotone {ok}", cfg.thetas()?.len()))
}

fn cmd_density(cfg: &RunConfig, ctx: &mut Ctx) -> Result<String> {
    let theta = cfg.theta()?;
    let rep = l1_density_report(theta, &cfg.n_list()?)?;
    let mut r = JsonReport::new("density", params(cfg));
    let mut rows = Vec::new();
    for row in &rep.rows {
        r.push_row(row)?;
        rows.push(vec![
            row.n.to_string(),
            row.dim.to_string(),
            fmt_f64(row.l1),
            fmt_f64(row.normalization),
            fmt_f64(row.local_max),
        ]);
    }
    r.verdict = json!({"strictly_decreasing": rep.strictly_decreasing});
    r.write(&ctx.path("density.json"))?;
    write_csv_file(&ctx.path("density.csv"), &["N", "dim", "l1", "normalization", "local_max"], &rows)?;
    let last = rep.rows.last().map_or(0.0, |r| r.l1);
    Ok(format!("density: L1 {} at N={}, decreasing {}", fmt_short(last), rep.rows.last().map_or(0, |r| r.n), rep.strictly_decreasing))
}

fn cmd_converge(cfg: &RunConfig, ctx: &mut Ctx) -> Result<String> {
    let (domain, weight, theta) = (cfg.domain()?, cfg.weight()?, cfg.theta()?);
    let pts = cfg.grid(domain.dim())?;
    let f = oracle(&domain, &weight, theta).ok_or_else(|| {
        Error::UnsupportedWeight(format!("no oracle for weight {} on {domain} at theta {theta}", weight.id()))
    })?;
    let opts = ConvergenceOptions {
        weight,
        resolution: cfg.m,
        bm_resolution: None,
    };
    let rep = uniform_convergence_report(&domain, theta, &pts, &cfg.n_list()?, &*f, &opts)?;
    let mut r = JsonReport::new("report-converge", params(cfg));
    let mut rows = Vec::new();
    for row in &rep.rows {
        r.push_row(row)?;
        rows.push(vec![row.n.to_string(), fmt_f64(row.error), row.method.clone()]);
    }
    r.verdict = json!({
        "strictly_decreasing": rep.strictly_decreasing,
        "non_increasing_with_slack": rep.non_increasing_with_slack,
    });
    r.write(&ctx.path("converge.json"))?;
    write_csv_file(&ctx.path("converge.csv"), &["N", "error", "method"], &rows)?;
    Ok(format!(
        "report-converge: {} degrees, non-increasing {}",
        rep.rows.len(),
        rep.non_increasing_with_slack
    ))
}

fn cmd_monotone(cfg: &mut RunConfig, ctx: &mut Ctx) -> Result<String> {
    let (domain, weight) = (cfg.domain()?, cfg.weight()?);
    let thetas = cfg.thetas()?;
    let method: Method = cfg
        .method
        .get_or_insert_with(|| default_method(&domain, &weight, thetas[0]).into())
        .parse()?;
    let pts = cfg.grid(domain.dim())?;
    let grids = thetas
        .iter()
        .map(|&t| compute_v(method, cfg, &domain, &weight, t, &pts))
        .collect::<Result<Vec<_>>>()?;
    let slack = cfg.slack();
    let rep = monotonicity_report(&grids, slack)?;

    let mut header = vec!["theta".to_string()];
    header.extend(coord_header(domain.dim()));
    header.push("value".into());
    let rows: Vec<Vec<String>> = grids
        .iter()
        .flat_map(|g| {
            g.points.iter().zip(&g.values).map(move |(p, v)| {
                let mut row = vec![g.theta.to_string()];
                row.extend(coord_cells(p));
                row.push(fmt_f64(*v));
                row
            })
        })
        .collect();
    let h: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv_file(&ctx.path("monotone.csv"), &h, &rows)?;
    let mut r = JsonReport::new("report-monotone", params(cfg));
    for v in &rep.violations {
        r.push_row(v)?;
    }
    r.verdict = json!({
        "violations": rep.violations.len(),
        "worst_excess": rep.worst_excess,
        "comparisons": rep.comparisons,
    });
    r.write(&ctx.path("monotone.json"))?;
    Ok(format!(
        "report-monotone: {} violations in {} comparisons (slack {slack})",
        rep.violations.len(),
        rep.comparisons
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_numbers() {
        assert_eq!(fmt_short(7.000000000000002), "7");
        assert_eq!(fmt_short(0.25), "0.25");
        assert_eq!(fmt_short(1351.0), "1351");
        assert_eq!(fmt_short(-1e-15), "0");
    }

    #[test]
    fn green_function_of_segment() {
        let g = interval_green(-1.0, 1.0, C64::new(2.0, 0.0));
        assert!((g - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-15);
        assert!(interval_green(-1.0, 1.0, C64::new(0.3, 0.0)) < 1e-12);
        // invariant under z -> -z
        let a = interval_green(-1.0, 1.0, C64::new(0.4, 1.5));
        let b = interval_green(-1.0, 1.0, C64::new(-0.4, -1.5));
        assert!((a - b).abs() < 1e-14);
    }
}
