use f1_mirror::geometry::{
    affine_from_moment_k1, affine_from_moment_numeric, moment_from_affine, moment_from_log,
    polytope, AffinePoint, Divisor, Location,
};
use f1_mirror::{rat, MomentPoint, Point, Rational, SurfaceParams};
use num_traits::Signed;
use proptest::prelude::*;

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=400, 1i64..=60).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #[test]
    fn exact_round_trip_and_containment(s in positive_rational(), t in positive_rational()) {
        let params = SurfaceParams::<Rational>::f1();
        let a = AffinePoint::new(s, t);
        let x = moment_from_affine(&params, &a);
        let poly = polytope(&params);
        prop_assert!(poly.slacks(&x).iter().all(Signed::is_positive));
        prop_assert_eq!(affine_from_moment_k1(&x).unwrap(), a);
    }

    #[test]
    fn image_of_log_chart_stays_inside(k in 1u32..=3, z1 in -6.0f64..6.0, z2 in -6.0f64..6.0) {
        let params = SurfaceParams::<f64>::hirzebruch(k);
        let image = moment_from_log(&params, z1, z2);
        prop_assert!(!image.boundary_limit);
        let poly = polytope(&params);
        prop_assert!(poly.slacks(&image.point).iter().all(|s| *s > 0.0));
        // f64 locations treat slacks below 1e-9 as boundary
        if k == 1 && z1.abs() <= 3.0 && z2.abs() <= 3.0 {
            prop_assert_eq!(poly.locate(&image.point), Location::Interior);
        }
    }

    #[test]
    fn numeric_inverse_inverts_for_any_k(k in 1u32..=3, z1 in -3.0f64..3.0, z2 in -3.0f64..3.0) {
        let params = SurfaceParams::<f64>::hirzebruch(k);
        let x = moment_from_log(&params, z1, z2).point;
        // points inside the f64 boundary band are rejected by design
        prop_assume!(polytope(&params).locate(&x) == Location::Interior);
        let (w1, w2) = affine_from_moment_numeric(&params, &x).unwrap().log_coords();
        let y = moment_from_log(&params, w1, w2).point;
        prop_assert!((y.x1 - x.x1).abs() <= 1e-12 && (y.x2 - x.x2).abs() <= 1e-12);
        prop_assert!((w1 - z1).abs() < 1e-6 && (w2 - z2).abs() < 1e-6, "{w1} {w2} vs {z1} {z2}");
    }
}

#[test]
fn moment_map_is_monotone_in_each_variable() {
    for k in 1..=2u32 {
        let params = SurfaceParams::<Rational>::hirzebruch(k);
        let h = rat(1, 100);
        for i in 1..=20 {
            for j in 1..=20 {
                let (s, t) = (rat(i, 5), rat(j, 5));
                let x = moment_from_affine(&params, &AffinePoint::new(s.clone(), t.clone()));
                let xs = moment_from_affine(
                    &params,
                    &AffinePoint::new(s.clone() + h.clone(), t.clone()),
                );
                let xt = moment_from_affine(&params, &AffinePoint::new(s, t + h.clone()));
                assert!(xs.x1 > x.x1, "k={k} s={i}/5 t={j}/5");
                assert!(xt.x2 > x.x2, "k={k} s={i}/5 t={j}/5");
            }
        }
    }
}

#[test]
fn numeric_inverse_matches_closed_form() {
    let params = SurfaceParams::<f64>::f1();
    let mut worst = 0.0f64;
    for i in 0..50 {
        for j in 0..50 {
            let x2 = 0.05 + 1.9 * j as f64 / 49.0;
            let x1 = (0.02 + 0.96 * i as f64 / 49.0) * (4.0 - x2);
            let x = Point::new(x1, x2);
            let (a1, a2) = affine_from_moment_k1(&x).unwrap().log_coords();
            let (b1, b2) = affine_from_moment_numeric(&params, &x)
                .unwrap()
                .log_coords();
            worst = worst.max((a1 - b1).abs().max((a2 - b2).abs()));
        }
    }
    // the log chart has bounded condition number away from the boundary
    assert!(worst <= 1e-9, "{worst:e}");
}

#[test]
fn single_precision_agrees_with_double() {
    let p32 = SurfaceParams::<f32>::f1();
    let p64 = SurfaceParams::<f64>::f1();
    for (s, t) in [(0.5, 0.5), (1.0, 1.0), (3.0, 0.25), (0.1, 7.0)] {
        let x32 = moment_from_affine(&p32, &AffinePoint::new(s as f32, t as f32));
        let x64 = moment_from_affine(&p64, &AffinePoint::new(s, t));
        assert!((x32.x1 as f64 - x64.x1).abs() < 1e-5);
        assert!((x32.x2 as f64 - x64.x2).abs() < 1e-5);
    }
}

#[test]
fn facets_match_divisors() {
    for k in 1..=3u32 {
        let poly = polytope(&SurfaceParams::<Rational>::hirzebruch(k));
        let divisors: Vec<Divisor> = poly.facets().iter().map(|f| f.divisor).collect();
        assert_eq!(divisors.len(), 4);
        for d in Divisor::ALL {
            assert_eq!(divisors.iter().filter(|&&e| e == d).count(), 1);
            assert_eq!(poly.facet(d).normal, d.ray(k));
        }
    }
}

#[test]
fn unit_square_corner_is_a_vertex() {
    let poly = polytope(&SurfaceParams::<Rational>::f1());
    let vertices = poly.vertices();
    assert_eq!(
        vertices,
        vec![
            MomentPoint::new(rat(0, 1), rat(0, 1)),
            MomentPoint::new(rat(4, 1), rat(0, 1)),
            MomentPoint::new(rat(2, 1), rat(2, 1)),
            MomentPoint::new(rat(0, 1), rat(2, 1)),
        ]
    );
}
