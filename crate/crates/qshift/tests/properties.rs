//! Randomized exact checks of the arithmetic layers.

use num_rational::BigRational;
use proptest::prelude::*;
use qshift::laurent::LaurentPoly;
use qshift::scalars::{qint, Gauss, Scalar};

/// A random element of `Q(i)(v)` built from small Laurent pieces.
fn scalar() -> impl Strategy<Value = Scalar> {
    let piece = (-3i64..=3, -3i64..=3, -6i32..=6).prop_map(|(re, im, e)| {
        Scalar::from_gauss(Gauss::from_int(re).add(&Gauss::i().mul(&Gauss::from_int(im)))).mul_vpow(e)
    });
    (prop::collection::vec(piece.clone(), 1..4), prop::collection::vec(piece, 1..3)).prop_map(|(n, d)| {
        let sum = |xs: Vec<Scalar>| xs.iter().fold(Scalar::zero(), |a, x| a.add(x));
        let den = sum(d);
        let den = if den.is_zero() { Scalar::one() } else { den };
        sum(n).div(&den).unwrap()
    })
}

fn v0() -> impl Strategy<Value = BigRational> {
    (2i64..9, 1i64..5).prop_map(|(a, b)| BigRational::new(a.into(), b.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.add(&y).mul(&z), x.mul(&z).add(&y.mul(&z)));
        prop_assert_eq!(x.add(&y), y.add(&x));
        if !x.is_zero() {
            prop_assert!(x.mul(&x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(x in scalar(), y in scalar(), v in v0()) {
        if let (Some(ex), Some(ey)) = (x.eval(&v), y.eval(&v)) {
            prop_assert_eq!(x.add(&y).eval(&v).unwrap(), ex.add(&ey));
            prop_assert_eq!(x.mul(&y).eval(&v).unwrap(), ex.mul(&ey));
        }
    }

    #[test]
    fn parse_render_round_trip(x in scalar()) {
        prop_assert_eq!(Scalar::parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn quantum_integers(m in -20i64..=20, k in 1i32..4) {
        let q = Scalar::v_pow(4 * k);
        let lhs = qint(m, &q).unwrap().mul(&q.sub(&q.inv().unwrap()));
        let rhs = q.pow(m as i32).unwrap().sub(&q.pow(-m as i32).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn laurent_units_invert(e in prop::collection::vec(-4i32..=4, 4), x in scalar()) {
        prop_assume!(!x.is_zero());
        let u = LaurentPoly::monomial(2, e, x);
        prop_assert_eq!(u.mul(&u.inv().unwrap()), LaurentPoly::one(2));
    }

    #[test]
    fn laurent_ring_laws(a in prop::collection::vec((-2i32..=2, -2i32..=2, -3i64..=3), 1..4),
                         b in prop::collection::vec((-2i32..=2, -2i32..=2, -3i64..=3), 1..4)) {
        let poly = |ts: &[(i32, i32, i64)]| ts.iter().fold(LaurentPoly::zero(1), |acc, &(x, bz, c)| {
            acc.add(&LaurentPoly::monomial(1, vec![x, bz, 0], Scalar::from_int(c)))
        });
        let (p, r) = (poly(&a), poly(&b));
        prop_assert_eq!(p.mul(&r), r.mul(&p));
        if !r.is_zero() {
            prop_assert_eq!(p.mul(&r).div_exact(&r).unwrap(), p);
        }
    }
}
