//! Monge–Ampère mass of the Gaussian extremal functions: a point mass at the
//! origin and the rest spread over the contact annulus.

use std::f64::consts::PI;

use ppot::extremal::{closed_form_v_gaussian_r, radial_ma_mass};
use ppot::Theta;

fn main() {
    let m = 3000;
    let radii: Vec<f64> = (0..m)
        .map(|i| (1e-6f64.ln() + (10f64.ln() - 1e-6f64.ln()) * i as f64 / (m - 1) as f64).exp())
        .collect();
    println!("theta   origin/2pi  annulus/2pi  total/2pi");
    for theta in ["0", "1/4", "1/2", "3/4"] {
        let t: Theta = theta.parse().unwrap();
        let u: Vec<f64> = radii.iter().map(|&r| closed_form_v_gaussian_r(t, r)).collect();
        let kinks = [(t.as_f64() / 2.0).sqrt(), 0.5f64.sqrt()];
        let rep = radial_ma_mass(&radii, &u, &kinks).unwrap();
        println!(
            "{theta:>5} {:11.6} {:12.6} {:10.6}",
            rep.origin_mass / (2.0 * PI),
            rep.annulus_mass / (2.0 * PI),
            rep.total / (2.0 * PI)
        );
    }
}
