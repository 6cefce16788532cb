use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use orbitsieve_core::lorentz::hyperbolic::{boost, lorentz_inverse, rotation};
use orbitsieve_core::lorentz::*;

/// Random element of SO°(n,1) as rotation · boost · rotation · boost.
fn isometry(m: usize) -> impl Strategy<Value = DMatrix<f64>> {
    (
        prop::collection::vec(-3.2f64..3.2, 2 * (m - 1)),
        0.0f64..4.0,
        0.0f64..2.0,
    )
        .prop_map(move |(angles, t1, t2)| {
            let mut g = DMatrix::identity(m, m);
            let n = m - 1;
            for (k, a) in angles.iter().enumerate() {
                let i = k % n;
                let j = (k + 1) % n;
                if i != j {
                    g = rotation(m, i.min(j), i.max(j), *a) * g;
                }
                if k == n - 1 {
                    g = boost(m, t1) * g;
                }
            }
            boost(m, t2) * g
        })
}

fn point(m: usize) -> impl Strategy<Value = HyperboloidPoint> {
    isometry(m).prop_map(move |g| HyperboloidPoint::base(m).transform(&g))
}

fn boundary(m: usize) -> impl Strategy<Value = BoundaryPoint> {
    prop::collection::vec(-1.0f64..1.0, m - 1)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| BoundaryPoint::from_direction(&v).unwrap())
}

fn dims() -> impl Strategy<Value = usize> {
    3usize..=5
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cartan_round_trip((m, g) in dims().prop_flat_map(|m| (Just(m), isometry(m)))) {
        let c = cartan_decompose(&g);
        let err = (c.reconstruct() - &g).amax();
        prop_assert!(err <= 1e-9 * g.amax().max(1.0), "err {err}");
        let ci = cartan_decompose(&lorentz_inverse(&g));
        prop_assert!((c.t - ci.t).abs() <= 1e-9);
        let o = HyperboloidPoint::base(m);
        let d = hyperbolic_distance(&o, &o.transform(&g)).unwrap();
        prop_assert!((c.t - d).abs() <= 1e-7);
    }

    #[test]
    fn busemann_bounded_by_distance(
        (x, y, xi) in dims().prop_flat_map(|m| (point(m), point(m), boundary(m)))
    ) {
        let b = busemann(&xi, &y, &x).unwrap();
        let d = hyperbolic_distance(&x, &y).unwrap();
        prop_assert!(b <= d + 1e-9);
    }

    #[test]
    fn busemann_cocycle(
        (x, y, z, xi) in dims().prop_flat_map(|m| (point(m), point(m), point(m), boundary(m)))
    ) {
        let lhs = busemann(&xi, &x, &z).unwrap();
        let rhs = busemann(&xi, &x, &y).unwrap() + busemann(&xi, &y, &z).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9);
    }

    #[test]
    fn visual_points_are_equivariant(
        (g, h) in dims().prop_flat_map(|m| (isometry(m), isometry(m))),
        plus in any::<bool>()
    ) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let lhs = visual_point(&(&g * &h), sign);
        let moved: DVector<f64> = &g * visual_point(&h, sign).coords();
        let rhs = BoundaryPoint::new(moved).unwrap();
        let diff = (lhs.coords() - rhs.coords()).amax();
        prop_assert!(diff <= 1e-9 * (1.0 + g.amax()), "{diff}");
    }

    #[test]
    fn distance_is_symmetric((x, y) in dims().prop_flat_map(|m| (point(m), point(m)))) {
        let a = hyperbolic_distance(&x, &y).unwrap();
        let b = hyperbolic_distance(&y, &x).unwrap();
        prop_assert!(a >= 0.0 && rel_close(a, b, 1e-9));
    }

    #[test]
    fn spin_cover_is_a_homomorphism(
        a in prop::collection::vec(-6i64..=6, 3),
        b in prop::collection::vec(-6i64..=6, 3),
        pa in 1i64..5, pb in 1i64..5
    ) {
        // Upper-triangular-times-lower rational matrices of determinant 1.
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let make = |v: &[i64], p: i64| {
            let u = [[r(p, 1), r(v[0], 1)], [r(0, 1), r(1, p)]];
            let l = [[r(1, 1), r(0, 1)], [r(v[1], v[2].abs() + 1), r(1, 1)]];
            [
                [&u[0][0] * &l[0][0] + &u[0][1] * &l[1][0], &u[0][0] * &l[0][1] + &u[0][1] * &l[1][1]],
                [&u[1][0] * &l[0][0] + &u[1][1] * &l[1][0], &u[1][0] * &l[0][1] + &u[1][1] * &l[1][1]],
            ]
        };
        let h1 = make(&a, pa);
        let h2 = make(&b, pb);
        let prod = [
            [&h1[0][0] * &h2[0][0] + &h1[0][1] * &h2[1][0], &h1[0][0] * &h2[0][1] + &h1[0][1] * &h2[1][1]],
            [&h1[1][0] * &h2[0][0] + &h1[1][1] * &h2[1][0], &h1[1][0] * &h2[0][1] + &h1[1][1] * &h2[1][1]],
        ];
        let lhs = spin_to_so21(&prod);
        let rhs = spin_to_so21(&h1).mul(&spin_to_so21(&h2));
        prop_assert_eq!(&lhs, &rhs);
        let q = discriminant_form();
        prop_assert!(is_isometry(&lhs, &q));
        prop_assert!(spin_element(&h1).is_ok());
    }
}
