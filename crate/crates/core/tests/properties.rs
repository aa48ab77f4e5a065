use proptest::prelude::*;

use ppot::extremal::lp::phi_lp;
use ppot::extremal::{
    approx_v_bergman, closed_form_v_circle, closed_form_v_gaussian_r, hull_membership,
};
use ppot::geometry::quadrature::build_quadrature;
use ppot::geometry::weight::WeightSpec;
use ppot::geometry::{chebyshev_lobatto, Domain};
use ppot::ortho::{
    assemble_vandermonde, bm_constant, compact_basis, orthonormalize, orthonormalize_householder,
};
use ppot::{enumerate_index_set, Point, Theta, C64};

fn lobatto(a: f64, b: f64, m: usize) -> Vec<Point> {
    chebyshev_lobatto(a, b, m).into_iter().map(Point::real).collect()
}

fn theta_strategy() -> impl Strategy<Value = Theta> {
    (0u64..=6, 1u64..=6).prop_filter_map("theta in [0,1]", |(p, q)| Theta::new(p.min(q), q).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sandwich_holds_off_the_segment(
        n in 1u64..=8,
        third in any::<bool>(),
        x in 1.05f64..4.0,
        neg in any::<bool>(),
    ) {
        let theta = if third { Theta::new(1, 3).unwrap() } else { Theta::ZERO };
        let seg = Domain::Interval { a: -1.0, b: 1.0 };
        let mesh = lobatto(-1.0, 1.0, 61);
        let b = compact_basis(&seg, &WeightSpec::unit(), n, theta, None).unwrap();
        let m = bm_constant(&mesh, &b, &WeightSpec::unit(), n).unwrap();
        let z = Point::real(if neg { -x } else { x });
        let phi = phi_lp(&mesh, theta, n, &z, None).unwrap().value;
        let k = b.log_bergman(&z).unwrap().exp();
        let d = b.dim() as f64;
        prop_assert!(phi * phi / d <= k * (1.0 + 1e-9));
        prop_assert!(k <= d * m * m * phi * phi * (1.0 + 1e-9));
    }

    #[test]
    fn larger_theta_never_increases_phi(
        n in 1u64..=10,
        t1 in theta_strategy(),
        t2 in theta_strategy(),
        x in 1.1f64..3.5,
    ) {
        let (hi, lo) = if t1 >= t2 { (t1, t2) } else { (t2, t1) };
        let mesh = lobatto(-1.0, 1.0, 61);
        let z = Point::real(x);
        let a = phi_lp(&mesh, hi, n, &z, None).unwrap().value;
        let b = phi_lp(&mesh, lo, n, &z, None).unwrap().value;
        prop_assert!(a <= b * (1.0 + 1e-9), "{} {}: {} > {}", hi, lo, a, b);
    }

    #[test]
    fn lp_optimizer_stays_below_the_weight(
        n in 1u64..=8,
        theta in theta_strategy(),
        x in 1.6f64..3.0,
        c in 0.1f64..1.0,
    ) {
        let w = WeightSpec::radial(&format!("{c}*r^2")).unwrap();
        let mesh = lobatto(0.2, 1.5, 61);
        let s = phi_lp(&mesh, theta, n, &Point::real(x), Some(&w)).unwrap();
        for p in &mesh {
            let xr = p.coords[0].re;
            let q = w.q(p).unwrap();
            let lhs = s.eval(xr).abs().ln() / n as f64 - q;
            prop_assert!(lhs <= 1e-9, "x={}: {}", xr, lhs);
        }
    }

    #[test]
    fn bergman_diagonal_is_invariant_under_unitary_remix(
        n in 1u64..=10,
        theta in theta_strategy(),
        r in 0.1f64..3.0,
        t in 0.0f64..6.3,
        angles in prop::collection::vec((0.0f64..6.3, 0.0f64..6.3), 1..8),
    ) {
        let b = compact_basis(&Domain::Disk { radius: 1.0 }, &WeightSpec::unit(), n, theta, None).unwrap();
        let z = Point::polar(r, t);
        let mut v = b.values(&z);
        // chain of Givens rotations between neighbouring basis elements
        for (k, (phi, psi)) in angles.iter().enumerate() {
            if v.len() < 2 { break; }
            let i = k % (v.len() - 1);
            let (c, s) = (phi.cos(), phi.sin());
            let e = C64::from_polar(1.0, *psi);
            let (a, bb) = (v[i], v[i + 1]);
            v[i] = a * c - bb * s * e.conj();
            v[i + 1] = a * s * e + bb * c;
        }
        let remixed: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        let k = b.log_bergman(&z).unwrap().exp();
        prop_assert!((remixed - k).abs() <= 1e-10 * k.max(1e-300));
    }

    #[test]
    fn orthonormalization_routes_give_the_same_diagonal(
        n in 1u64..=6,
        theta in theta_strategy(),
        r_in in 0.2f64..0.9,
        x in -2.0f64..2.0,
        y in -2.0f64..2.0,
    ) {
        let dom = Domain::Annulus { r_in, r_out: 1.0 };
        let q = build_quadrature(&dom, n as usize + 2).unwrap().normalized();
        let idx = enumerate_index_set(n, theta, 1);
        let v = assemble_vandermonde(&q, &idx, &WeightSpec::unit(), n).unwrap();
        let a = orthonormalize(&v).unwrap();
        let h = orthonormalize_householder(&v).unwrap();
        let z = Point::c1(C64::new(x, y));
        let (ka, kh) = (a.log_bergman(&z).unwrap(), h.log_bergman(&z).unwrap());
        prop_assert!((ka - kh).abs() < 1e-8, "{} vs {}", ka, kh);
    }

    #[test]
    fn gaussian_closed_forms_are_ordered_in_theta(
        t1 in theta_strategy(),
        t2 in theta_strategy(),
        r in 1e-4f64..5.0,
    ) {
        let (hi, lo) = if t1 >= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(closed_form_v_gaussian_r(hi, r) <= closed_form_v_gaussian_r(lo, r) + 1e-15);
        // and never exceed the weight on the plane
        prop_assert!(closed_form_v_gaussian_r(hi, r) <= r * r + 1e-15);
    }
}

#[test]
fn origin_lies_in_every_hull_for_positive_theta() {
    let theta = Theta::new(1, 3).unwrap();
    let origin = Point::real(0.0);
    assert!(hull_membership(closed_form_v_circle(theta, C64::new(0.0, 0.0)), 0.0));
    assert!(hull_membership(closed_form_v_gaussian_r(theta, 0.0), 0.0));
    let mesh = lobatto(-1.0, 1.0, 61);
    let s = phi_lp(&mesh, theta, 6, &origin, None).unwrap();
    assert!(hull_membership(s.v_value(), 0.0));
    for dom in [Domain::Circle { radius: 1.0 }, Domain::Disk { radius: 2.0 }, Domain::Interval { a: 1.0, b: 2.0 }] {
        let b = compact_basis(&dom, &WeightSpec::unit(), 6, theta, None).unwrap();
        let v = approx_v_bergman(&b, std::slice::from_ref(&origin)).unwrap().values[0];
        assert!(hull_membership(v, 0.0), "{dom}: {v}");
    }
}

#[test]
fn circle_bergman_error_decays_like_one_over_n() {
    // geometric-series oracle: the error is (1/2N) ln(1/(1 - r^{∓2})) plus
    // nothing else for even N, so N·error stays below ln(4/3)/2 ≈ 0.144.
    const C: f64 = 0.2;
    let theta = Theta::new(1, 2).unwrap();
    for n in [20u64, 50, 100, 200] {
        let b = compact_basis(&Domain::Circle { radius: 1.0 }, &WeightSpec::unit(), n, theta, None).unwrap();
        for r in [0.25, 0.5, 2.0, 4.0] {
            let z = Point::polar(r, 1.1);
            let v = approx_v_bergman(&b, std::slice::from_ref(&z)).unwrap().values[0];
            let e = (v - closed_form_v_circle(theta, z.coords[0])).abs();
            assert!(e * n as f64 <= C, "N={n} r={r}: N*error {}", e * n as f64);
        }
    }
}
