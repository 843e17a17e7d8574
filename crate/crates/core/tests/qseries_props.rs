use proptest::prelude::*;
use reflectia::exactnum::{rat, rat_int};
use reflectia::qseries::{qbinomial, sigma_elem, Mono};
use reflectia::{QTSLaurent, RationalForm};

fn series() -> impl Strategy<Value = QTSLaurent> {
    prop::collection::vec((-3i64..8, 0i32..3, 0i32..3, -5i64..=5, 1i64..=3), 0..10).prop_map(|terms| {
        let mut p = QTSLaurent::zero();
        for (q, t, s, a, b) in terms {
            p.add_term(q, t, s, &rat(a, b));
        }
        p
    })
}

/// 1 + (terms of positive q-degree), so it is a unit in the power series ring.
fn unit() -> impl Strategy<Value = QTSLaurent> {
    prop::collection::vec((1i64..6, 0i32..2, 0i32..2, -4i64..=4), 0..6).prop_map(|terms| {
        let mut p = QTSLaurent::one();
        for (q, t, s, a) in terms {
            p.add_term(q, t, s, &rat_int(a));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn unit_inverse(u in unit(), cap in 4i64..20) {
        let inv = QTSLaurent::one().div_to_cap(&u, cap).unwrap();
        let prod = u.mul(&inv).with_cap(cap);
        prop_assert_eq!(prod, QTSLaurent::one().with_cap(cap));
    }

    #[test]
    fn expand_is_cap_monotone(num in series(), den in prop::collection::vec(1i64..5, 0..4), lo in 0i64..10, extra in 0i64..10) {
        let f = RationalForm::new(num, den);
        let hi = lo + extra;
        let mut cut = f.expand(hi);
        cut.set_cap(Some(lo));
        prop_assert_eq!(cut, f.expand(lo));
    }

    #[test]
    fn sigma_generating_identity(exps in prop::collection::vec(0i64..12, 0..=6)) {
        let mut lhs = QTSLaurent::zero();
        for r in 0..=exps.len() {
            lhs = lhs.add(&sigma_elem(&exps, r).mul_mono(&Mono::new(rat_int(1), 0, 0, r as i32)));
        }
        let mut rhs = QTSLaurent::one();
        for &e in &exps {
            rhs = rhs.mul(&reflectia::qseries::one_plus(1, e, 0, 1));
        }
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn qbinomial_symmetry_and_pascal() {
    for b in 1..=3 {
        for n in 0..=8 {
            for r in 0..=n {
                assert_eq!(qbinomial(n, r, b), qbinomial(n, n - r, b), "[{n} {r}]_q^{b}");
                if n >= 1 && r >= 1 && r < n {
                    let rhs = qbinomial(n - 1, r, b).add(&qbinomial(n - 1, r - 1, b).shift_q(b * (n - r)));
                    assert_eq!(qbinomial(n, r, b), rhs, "Pascal at n={n}, r={r}, b={b}");
                }
            }
        }
    }
}

#[test]
fn qbinomial_at_one_is_binomial() {
    let mut row = vec![1i64];
    for n in 0..=10i64 {
        for r in 0..=n {
            let v = qbinomial(n, r, 1).at_q1().coeff(0, 0);
            assert_eq!(v, rat_int(row[r as usize]));
        }
        let mut next = vec![1i64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
}
