//! Weighted sup norms over the contact annulus and over the whole plane agree.

use ppot::extremal::reports::{gaussian_contact_mesh, polar_mesh};
use ppot::extremal::weighted_supnorm_equivalence;
use ppot::geometry::weight::WeightSpec;
use ppot::{MultiPolynomial, Theta, C64};
use rand::{Rng, SeedableRng};

fn main() {
    let n = 20u64;
    let theta = Theta::new(1, 3).unwrap();
    let lo = theta.ceil_mul(n);
    let g = WeightSpec::gaussian();
    let contact = gaussian_contact_mesh(theta, 81, 512);
    let global = polar_mesh(0.0, 3.2, 321, 512);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for trial in 0..5 {
        let coeffs: Vec<C64> = (0..=n)
            .map(|k| if k < lo { C64::new(0.0, 0.0) } else { C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) })
            .collect();
        let p = MultiPolynomial::univariate(&coeffs);
        let r = weighted_supnorm_equivalence(&p, &g, n, &contact, &global).unwrap();
        println!(
            "trial {trial}: contact sup {:.6e}, global sup {:.6e}, ratio {:.6}",
            r.contact_sup, r.global_sup, r.ratio
        );
    }
}
