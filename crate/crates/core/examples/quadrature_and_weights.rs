//! Weights, admissibility, truncation radii and quadrature rules.

use ppot::geometry::quadrature::{build_global_quadrature, build_quadrature};
use ppot::geometry::weight::{admissibility_check, truncation_radius, WeightSpec};
use ppot::geometry::Domain;
use ppot::Theta;

fn main() {
    let plane = Domain::Plane { d: 1 };
    for w in [
        WeightSpec::gaussian(),
        WeightSpec::radial("0.5*r^2 + log(1 + r^2)").unwrap(),
        WeightSpec::radial("log(1 + r)").unwrap(),
    ] {
        let rep = admissibility_check(&w, &plane);
        print!("{:<28} admissible on C: {}", w.id(), rep.is_admissible);
        match truncation_radius(&w, 1.0) {
            Ok(r) => println!(", truncation radius {r}"),
            Err(e) => println!(" ({e})"),
        }
    }

    let disk = Domain::Disk { radius: 1.0 };
    let q = build_quadrature(&disk, 8).unwrap();
    println!("\ndisk rule: {} nodes, mass {:.15} (pi = {:.15})", q.len(), q.total_mass(), std::f64::consts::PI);
    let r4 = q.integrate(|z| z.norm().powi(4));
    println!("integral of |z|^4: {r4:.15} (exact pi/3 = {:.15})", std::f64::consts::PI / 3.0);

    let g = build_global_quadrature(&WeightSpec::gaussian(), 40, Theta::new(1, 2).unwrap()).unwrap();
    println!("global Gaussian rule for N = 40: {} nodes, {:?}", g.len(), g.kind);
}
