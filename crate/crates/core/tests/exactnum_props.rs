use proptest::prelude::*;
use reflectia::exactnum::{euler_phi, rat, rat_int};
use reflectia::{Cyclotomic, Rational};

const ORDERS: &[u32] = &[1, 3, 4, 5, 7, 8, 9, 12, 15];

fn cyc() -> impl Strategy<Value = Cyclotomic> {
    prop::sample::select(ORDERS).prop_flat_map(|m| {
        prop::collection::vec((-6i64..=6, 1i64..=4), euler_phi(m))
            .prop_map(move |v| Cyclotomic::from_coeffs(m, v.into_iter().map(|(a, b)| rat(a, b)).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn associativity(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn distributivity(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn inverse(a in cyc()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert!((&a * &inv).is_one());
    }

    #[test]
    fn conj_fixes_real_part(a in cyc()) {
        let re = &a + &a.conj();
        prop_assert_eq!(re.conj(), re.clone());
        prop_assert_eq!(a.conj().conj(), a.clone());
        let (_, im) = re.to_complex();
        prop_assert!(im.abs() < 1e-9);
    }

    #[test]
    fn rational_iff_tail_vanishes(a in cyc()) {
        let tail_zero = a.coeffs().iter().skip(1).all(|c| *c == Rational::from_integer(0.into()));
        prop_assert_eq!(a.is_rational(), tail_zero);
    }
}

#[test]
fn roots_of_unity_close_up() {
    for m in [1u32, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 20, 24, 30, 60] {
        assert_eq!(Cyclotomic::root(m, m as i64), Cyclotomic::root(m, 0));
        assert!(Cyclotomic::root(m, 1).pow(m).is_one());
        for k in 1..m {
            if m % k == 0 {
                assert!(!Cyclotomic::root(m, 1).pow(k).is_one(), "ζ_{m}^{k} must not be 1");
            }
        }
    }
}

#[test]
fn embedding_coherence() {
    assert_eq!(Cyclotomic::root(2, 1).embed(6), Cyclotomic::root(6, 3));
    assert_eq!(Cyclotomic::root(3, 1).embed(12), Cyclotomic::root(12, 4));
    assert_eq!(Cyclotomic::root(2, 1), Cyclotomic::from_int(1, -1));
    // mixed fields lift to the lcm
    let s = &Cyclotomic::root(3, 1) + &Cyclotomic::root(4, 1);
    assert_eq!(s.order(), 12);
    assert_eq!(s, &Cyclotomic::root(12, 4) + &Cyclotomic::root(12, 3));
}

#[test]
fn sum_of_primitive_roots_is_mobius() {
    // Σ_{gcd(k,m)=1} ζ_m^k = μ(m)
    for (m, mu) in [(1u32, 1i64), (2, -1), (3, -1), (4, 0), (5, -1), (6, 1), (8, 0), (10, 1), (12, 0), (15, 1), (30, -1)] {
        let mut acc = Cyclotomic::zero(m);
        for k in 0..m {
            if num_integer::gcd(k, m) == 1 {
                acc = &acc + &Cyclotomic::root(m, k as i64);
            }
        }
        assert_eq!(acc.as_rational(), Some(rat_int(mu)), "m = {m}");
    }
}
