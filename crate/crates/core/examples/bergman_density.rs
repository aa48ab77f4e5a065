//! Scaled Bergman density K_N/d for the Gaussian weight and its limit.

use ppot::extremal::density_limit;
use ppot::extremal::reports::l1_density_report;
use ppot::geometry::weight::WeightSpec;
use ppot::ortho::{gaussian_exact_basis, scaled_density};
use ppot::{Point, Theta};

fn main() {
    let theta = Theta::new(1, 2).unwrap();
    let rs: Vec<f64> = (0..=16).map(|i| i as f64 * 0.0625).collect();
    let pts: Vec<Point> = rs.iter().map(|&r| Point::real(r)).collect();
    let limit = density_limit(&WeightSpec::gaussian(), theta, &pts).unwrap();
    let dens = scaled_density(&gaussian_exact_basis(80, theta), &pts).unwrap();
    println!("     r   K_80/d    limit");
    for i in 0..rs.len() {
        println!("{:6.3} {:8.4} {:8.4}", rs[i], dens[i], limit[i]);
    }

    let rep = l1_density_report(theta, &[10, 20, 40, 80, 160]).unwrap();
    println!("\n   N     L1     mass    max on |z|<=2");
    for r in &rep.rows {
        println!("{:4} {:7.4} {:9.7} {:8.4}", r.n, r.l1, r.normalization, r.local_max);
    }
}
