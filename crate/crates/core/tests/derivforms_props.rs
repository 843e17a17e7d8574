use proptest::prelude::*;
use reflectia::derivforms::{
    apply_theta_tilde, arrangement_q, euler_identity_holds, hyperplane_forms, positivity_kernel, relative_invariance, MixedForm,
    MultiPoly,
};
use reflectia::exactnum::rat;
use reflectia::groups::{generate, resolve_group, DEFAULT_CAP};
use reflectia::molien::molien;
use reflectia::Cyclotomic;

/// Homogeneous polynomial of degree `d` in `n` variables over Q(ζ_m).
fn homogeneous(n: usize, m: u32, d: u32) -> impl Strategy<Value = MultiPoly> {
    let phi = reflectia::exactnum::euler_phi(m);
    prop::collection::vec((prop::collection::vec(0..n, d as usize), prop::collection::vec(-3i64..=3, phi)), 1..5).prop_map(
        move |terms| {
            let mut f = MultiPoly::zero(n, m);
            for (vars, cs) in terms {
                let mut exp = vec![0u32; n];
                for v in vars {
                    exp[v] += 1;
                }
                let c = Cyclotomic::from_coeffs(m, cs.into_iter().map(|x| rat(x, 1)).collect()).unwrap();
                f.add_term(exp, &c);
            }
            f
        },
    )
}

fn any_homogeneous() -> impl Strategy<Value = MultiPoly> {
    (2usize..=3, prop::sample::select(vec![1u32, 3, 4]), 1u32..=4).prop_flat_map(|(n, m, d)| homogeneous(n, m, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn euler_identity(f in any_homogeneous()) {
        prop_assert!(euler_identity_holds(&f).unwrap());
    }

    #[test]
    fn positivity(h in any_homogeneous()) {
        prop_assume!(!h.is_zero());
        let (re, im) = positivity_kernel(&h).unwrap();
        prop_assert!(re > 0.0);
        prop_assert!(im.abs() < 1e-9 * re.max(1.0));
    }

    #[test]
    fn theta_tilde_is_equivariant(case in equivariance_case()) {
        let (group, theta, omega) = case;
        let spec = resolve_group(group).unwrap();
        for g in &spec.generators {
            let lhs = apply_theta_tilde(&theta, &omega).unwrap().act(g).unwrap();
            let rhs = apply_theta_tilde(&theta.act(g).unwrap(), &omega.act(g).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

/// A unitary rank-2 group with a random derivation θ and form ω over its field.
fn equivariance_case() -> impl Strategy<Value = (&'static str, MixedForm, MixedForm)> {
    prop::sample::select(vec!["G4", "G5", "G(3,1,2)", "G(4,4,2)"]).prop_flat_map(|group| {
        let m = resolve_group(group).unwrap().m;
        (1u32..=2, 1u32..=3, 0usize..2, 0usize..2).prop_flat_map(move |(d1, d2, k, r)| {
            (homogeneous(2, m, d1), homogeneous(2, m, d1), homogeneous(2, m, d2)).prop_map(move |(h1, h2, f)| {
                (group, MixedForm::derivation(&[h1, h2]), MixedForm::term(&f, &[k], &[r]))
            })
        })
    })
}

#[test]
fn arrangement_degree_and_relative_invariance() {
    for name in ["G4", "G5", "G6", "G8", "G12", "G(3,1,2)", "G(4,2,2)", "G(3,3,3)", "G(3,1,3)", "G25"] {
        let spec = resolve_group(name).unwrap();
        let group = generate(&spec, DEFAULT_CAP).unwrap();
        let q = arrangement_q(&group).unwrap();
        let p = molien(&group).unwrap().profile;
        assert_eq!(q.degree().map(i64::from), Some(p.big_n_star), "{name}: deg Q = N*");
        assert!(q.is_homogeneous());
        let forms = hyperplane_forms(&group).unwrap();
        assert!(relative_invariance(&spec, &forms).unwrap(), "{name}");
    }
}

#[test]
fn non_unitary_specs_are_refused() {
    let spec = resolve_group("H3").unwrap();
    let group = generate(&spec, DEFAULT_CAP).unwrap();
    assert!(arrangement_q(&group).is_err());
}
