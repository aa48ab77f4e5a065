//! Index sets of θ-incomplete polynomials and their dimensions.

use ppot::{dim, enumerate_index_set, Theta};

fn main() {
    let theta: Theta = "1/2".parse().unwrap();
    let set = enumerate_index_set(4, theta, 2);
    println!("N = 4, theta = {theta}, d = 2: {} indices", set.len());
    for a in set.indices() {
        print!("{a} ");
    }
    println!();

    println!("\n   N  d(N,1/4)  d(N,0)  ratio  1-theta");
    let quarter = Theta::new(1, 4).unwrap();
    for n in [10, 50, 100, 200] {
        let (a, b) = (dim(n, quarter, 1), dim(n, Theta::ZERO, 1));
        println!("{n:4} {a:9} {b:7}  {:.3}  {:.3}", a as f64 / b as f64, 0.75);
    }
}
