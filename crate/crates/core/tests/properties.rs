use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

use lensreeb::arith::{ext_gcd, mod_inverse};
use lensreeb::toric::model_for_space;
use lensreeb::{HomotopyClass, LensSpace, Rational, ToricModel};

fn lens() -> impl Strategy<Value = LensSpace> {
    (1u64..80, 1usize..5).prop_flat_map(|(p, n)| {
        prop::collection::vec(-500i64..500, n + 1).prop_filter_map("weights coprime to p", move |w| {
            LensSpace::new(p, w).ok()
        })
    })
}

proptest! {
    #[test]
    fn k_and_m_are_coprime(space in lens()) {
        let m = ToricModel::build(&space.normalize().0).unwrap();
        prop_assert!(m.k().gcd(m.m()).is_one());
        prop_assert!((BigInt::from(space.p()) % m.m()) == BigInt::from(0));
    }

    #[test]
    fn bezout_pairs_complete_the_basis(space in lens(), count in 1usize..8) {
        let m = ToricModel::build(&space.normalize().0).unwrap();
        for (c, d) in m.bezout_pairs(count) {
            prop_assert!((m.k() * &d - m.m() * &c).is_one());
            let other = m.with_bezout(c, d).unwrap();
            let det = other.verify_determinant().unwrap();
            prop_assert_eq!(det.magnitude(), &num_bigint::BigUint::from(space.p()));
            for nn in 1..50 {
                prop_assert_eq!(other.cz_index(nn), m.cz_index(nn));
            }
        }
    }

    #[test]
    fn ext_gcd_is_bezout(x in -10i64.pow(12)..10i64.pow(12), y in -10i64.pow(12)..10i64.pow(12)) {
        prop_assume!(x != 0 || y != 0);
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        let (g, u, v) = ext_gcd(&x, &y).unwrap();
        prop_assert_eq!(&g, &x.gcd(&y));
        prop_assert_eq!(&u * &x + &v * &y, g);
    }

    #[test]
    fn mod_inverse_inverts(x in -10_000i64..10_000, p in 2i64..5_000) {
        let (x, p) = (BigInt::from(x), BigInt::from(p));
        match mod_inverse(&x, &p) {
            Ok(inv) => prop_assert!((&inv * &x).mod_floor(&p).is_one()),
            Err(_) => prop_assert!(!x.gcd(&p).is_one()),
        }
    }

    #[test]
    fn index_sandwich(space in lens(), nn in 1u64..100_000) {
        let (model, _) = model_for_space(&space, HomotopyClass::reduced(0, space.p())).unwrap();
        let n = Rational::from(space.n() as u64);
        let gap = model.cz_index(nn) - Rational::from(nn) * model.mean_index();
        prop_assert!(gap > -n.clone() && gap <= n);
    }

    #[test]
    fn rational_roundtrips_through_strings(a in any::<i64>(), b in 1i64..i64::MAX) {
        let r = Rational::new(a, b);
        let s = r.to_string();
        prop_assert_eq!(s.parse::<Rational>().unwrap(), r.clone());
        let json = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), r);
    }
}
