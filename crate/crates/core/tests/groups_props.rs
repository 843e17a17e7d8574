use reflectia::groups::{catalog, generate, generate_checked, resolve_group, DEFAULT_CAP};
use reflectia::molien::molien;

fn small_names() -> Vec<String> {
    let mut names: Vec<String> = ["A1", "A3", "B3", "D4", "H3", "F4", "I2(7)", "G(3,1,3)", "G(4,2,2)", "G(3,3,3)"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for e in catalog().unwrap().groups {
        if e.expected_order <= 20_000 {
            names.push(e.name);
        }
    }
    names
}

#[test]
fn orders_and_buckets() {
    for name in small_names() {
        let spec = resolve_group(&name).unwrap();
        let g = generate_checked(&spec, false).unwrap();
        assert_eq!(Some(g.order()), spec.expected_order, "{name}");
        let total: u64 = g.buckets().iter().map(|b| b.count).sum();
        assert_eq!(total, g.order(), "{name}: bucket counts");
        let id = g.buckets().iter().find(|b| b.representative.is_identity()).expect("identity bucket");
        assert_eq!(id.count, 1, "{name}: identity bucket");
    }
}

#[test]
fn unitary_generators() {
    for name in small_names() {
        let spec = resolve_group(&name).unwrap();
        if !spec.unitary {
            continue;
        }
        for g in &spec.generators {
            assert_eq!(g.inverse().unwrap(), g.conj_transpose(), "{name}");
        }
    }
}

#[test]
fn bucket_keys_closed_under_inverse() {
    for name in small_names() {
        let g = generate(&resolve_group(&name).unwrap(), DEFAULT_CAP).unwrap();
        let keys: Vec<_> = g.buckets().iter().map(|b| b.key.clone()).collect();
        for b in g.buckets() {
            let inv = b.representative.inverse().unwrap().char_poly();
            assert!(keys.contains(&inv), "{name}: inverse of a bucket has no bucket");
        }
    }
}

#[test]
fn recovered_numerology_matches_catalog() {
    for name in small_names() {
        let spec = resolve_group(&name).unwrap();
        let res = molien(&generate(&spec, DEFAULT_CAP).unwrap()).unwrap();
        let degs: Vec<u32> = res.profile.degrees.iter().map(|&d| d as u32).collect();
        assert_eq!(Some(degs), spec.expected_degrees, "{name}");
        let brute = res.series.coeff(0, 1, 1);
        if spec.irreducible {
            assert_eq!(brute, reflectia::exactnum::rat_int(1), "{name}: irreducible means one invariant of V⊗V*");
        }
    }
}

#[test]
fn coxeter_coexponents_equal_exponents() {
    for name in ["A2", "A4", "B3", "D4", "H3", "F4", "I2(5)", "I2(8)", "E6"] {
        let res = molien(&generate(&resolve_group(name).unwrap(), DEFAULT_CAP).unwrap()).unwrap();
        assert_eq!(res.profile.coexponents, res.profile.exponents, "{name}");
        assert!(res.profile.is_real_like());
    }
}

/// Degrees (de, 2de, …, (n−1)de, dn); coexponents 1, de+1, …, (n−1)de+1 when d ≥ 2,
/// and 1, de+1, …, (n−2)de+1, (n−1)de−n+1 when d = 1.
fn monomial_oracle(d: i64, e: i64, n: i64) -> (Vec<i64>, Vec<i64>) {
    let de = d * e;
    let mut degs: Vec<i64> = (1..n).map(|i| i * de).collect();
    degs.push(d * n);
    let mut co: Vec<i64> = if d >= 2 {
        (0..n).map(|i| i * de + 1).collect()
    } else {
        let mut v: Vec<i64> = (0..n - 1).map(|i| i * de + 1).collect();
        v.push((n - 1) * de - n + 1);
        v
    };
    degs.sort_unstable();
    co.sort_unstable();
    (degs, co)
}

#[test]
fn monomial_numerology_case_split() {
    for (d, e, n) in [(1, 2, 3), (2, 2, 2), (3, 1, 2), (2, 1, 3), (1, 3, 3), (1, 4, 3), (2, 3, 2), (1, 2, 4)] {
        let name = format!("G({},{},{})", d * e, e, n);
        let res = molien(&generate(&resolve_group(&name).unwrap(), DEFAULT_CAP).unwrap()).unwrap();
        let (degs, co) = monomial_oracle(d, e, n);
        assert_eq!(res.profile.degrees, degs, "{name} degrees");
        assert_eq!(res.profile.coexponents, co, "{name} coexponents");
    }
}

#[test]
fn unknown_names_are_reported() {
    for bad in ["G99", "X3", "G(2,3,2)", "I2(1)", ""] {
        assert!(resolve_group(bad).is_err(), "{bad:?} should not resolve");
    }
}
