//! Extremal values on [-1, 1] from the linear program: Chebyshev polynomials
//! for θ = 0 and their incomplete counterparts.

use ppot::extremal::lp::{phi_lp, phi_lp_refined};
use ppot::geometry::{chebyshev_lobatto, Domain};
use ppot::{Point, Theta};

fn main() {
    // 841 Lobatto points contain the extremal points of T_N for every N dividing 840
    let mesh: Vec<Point> = chebyshev_lobatto(-1.0, 1.0, 841).into_iter().map(Point::real).collect();
    let z = Point::real(2.0);
    println!(" N  theta=0 (T_N(2))  theta=1/3  theta=1/2");
    for n in 1..=8 {
        let v: Vec<f64> = ["0", "1/3", "1/2"]
            .iter()
            .map(|t| phi_lp(&mesh, t.parse().unwrap(), n, &z, None).unwrap().value)
            .collect();
        println!("{n:2}  {:16.6}  {:9.4}  {:9.4}", v[0], v[1], v[2]);
    }

    let sol = phi_lp(&mesh, Theta::new(1, 3).unwrap(), 6, &z, None).unwrap();
    println!("\nextremal polynomial, N = 6, theta = 1/3:");
    print!("{}", sol.to_polynomial().to_text(6, Theta::new(1, 3).unwrap()));

    let seg = Domain::Interval { a: -1.0, b: 1.0 };
    let refined = phi_lp_refined(&seg, 401, Theta::ZERO, 40, &z, None).unwrap();
    println!(
        "\nN = 40: (1/N) ln Phi = {:.6}, log(2+sqrt 3) = {:.6}, mesh refinement change {:.1e}",
        refined.fine.v_value(),
        (2.0 + 3f64.sqrt()).ln(),
        refined.rel_change
    );
}
