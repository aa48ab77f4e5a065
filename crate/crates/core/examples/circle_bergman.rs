//! Bergman functions on the unit circle against the closed-form extremal function.

use ppot::extremal::{approx_v_bergman, closed_form_v_circle};
use ppot::geometry::weight::WeightSpec;
use ppot::geometry::{build_mesh, Domain};
use ppot::ortho::{bm_constant, compact_basis};
use ppot::{Point, Theta};

fn main() {
    let circle = Domain::Circle { radius: 1.0 };
    let theta = Theta::new(1, 2).unwrap();
    let radii = [0.25, 0.5, 2.0, 4.0];
    println!("    N   {}", radii.map(|r| format!("err(r={r})")).join("  "));
    for n in [10, 25, 50, 100, 200] {
        let basis = compact_basis(&circle, &WeightSpec::unit(), n, theta, None).unwrap();
        let pts: Vec<Point> = radii.iter().map(|&r| Point::real(r)).collect();
        let v = approx_v_bergman(&basis, &pts).unwrap();
        let errs: Vec<String> = pts
            .iter()
            .zip(&v.values)
            .map(|(p, v)| format!("{:10.2e}", (v - closed_form_v_circle(theta, p.coords[0])).abs()))
            .collect();
        println!("{n:5}   {}", errs.join("  "));
    }

    let n = 30;
    let basis = compact_basis(&circle, &WeightSpec::unit(), n, theta, None).unwrap();
    let mesh = build_mesh(&circle, 128).unwrap().points;
    let m = bm_constant(&mesh, &basis, &WeightSpec::unit(), n).unwrap();
    println!("\nM_{n} = {m:.12}, sqrt(d) = {:.12}", (basis.dim() as f64).sqrt());
}
