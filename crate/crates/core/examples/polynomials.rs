//! Sparse polynomials: evaluation, products, band splitting and the text format.

use ppot::{MultiIndex, MultiPolynomial, Point, Theta, C64};

fn main() {
    let one = C64::new(1.0, 0.0);
    let p = MultiPolynomial::from_terms(
        2,
        [
            (MultiIndex::new(vec![2, 0]), one),
            (MultiIndex::new(vec![1, 1]), C64::new(0.0, -2.0)),
            (MultiIndex::new(vec![0, 3]), C64::new(0.5, 0.0)),
        ],
    )
    .unwrap();
    let z = Point::new(vec![C64::new(1.0, 1.0), C64::new(0.5, 0.0)]);
    println!("p(z) = {}", p.evaluate(&z).unwrap());

    let sq = p.multiply(&p).unwrap();
    println!("p^2 has {} terms, degree {:?}", sq.num_terms(), sq.degree());

    let theta = Theta::new(3, 4).unwrap();
    let (low, band) = sq.split_incomplete(6, theta);
    println!("below the band: {} terms, in the band: {} terms", low.num_terms(), band.num_terms());

    // log|p| stays finite far beyond the range of f64 values
    let far = Point::new(vec![C64::new(1e200, 0.0), C64::new(1e200, 0.0)]);
    println!("ln|p^2| at 1e200: {:.3}", sq.log_abs(&far).unwrap());

    let text = p.to_text(3, Theta::ZERO);
    print!("{text}");
    let (back, _, _) = MultiPolynomial::from_text(&text).unwrap();
    assert_eq!(back, p);
}
