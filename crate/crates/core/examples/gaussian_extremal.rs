//! The weighted extremal function for |z|^2 on C: closed form against the
//! orthonormal basis built on the truncated global quadrature.

use ppot::extremal::{approx_v_bergman, approx_v_sup_basis, closed_form_v_gaussian_r};
use ppot::geometry::quadrature::build_global_quadrature;
use ppot::geometry::weight::WeightSpec;
use ppot::ortho::{assemble_vandermonde, orthonormalize};
use ppot::{enumerate_index_set, Point, Theta};

fn main() {
    let g = WeightSpec::gaussian();
    let n = 100;
    for theta in [Theta::ZERO, Theta::new(1, 2).unwrap()] {
        let q = build_global_quadrature(&g, n, theta).unwrap();
        let idx = enumerate_index_set(n, theta, 1);
        let basis = orthonormalize(&assemble_vandermonde(&q, &idx, &g, n).unwrap()).unwrap();
        let rs = [0.1, 0.3, 0.5, 0.6, 0.8, 1.0, 2.0];
        let pts: Vec<Point> = rs.iter().map(|&r| Point::real(r)).collect();
        let sup = approx_v_sup_basis(&basis, &pts).unwrap();
        let berg = approx_v_bergman(&basis, &pts).unwrap();
        println!("theta = {theta}, N = {n}, kappa = {:.2e}", basis.kappa());
        println!("     r   closed   sup-basis   bergman");
        for (i, r) in rs.iter().enumerate() {
            println!(
                "{r:6.2} {:8.4} {:10.4} {:9.4}",
                closed_form_v_gaussian_r(theta, *r),
                sup.values[i],
                berg.values[i]
            );
        }
        println!();
    }
}
