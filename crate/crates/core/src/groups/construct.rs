use crate::error::{Error, Result};
use crate::exactnum::{lcm, Cyclotomic};

use super::closure::GroupSpec;
use super::matrix::CycMatrix;

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn permutation_swap(n: usize, m: u32, i: usize) -> CycMatrix {
    CycMatrix::from_fn(n, m, |r, c| {
        let hit = if r == i || r == i + 1 { c == 2 * i + 1 - r } else { r == c };
        Cyclotomic::from_int(m, hit as i64)
    })
}

/// Degrees and coexponents of G(de,e,n).
pub fn monomial_numerology(d: u32, e: u32, n: usize) -> (Vec<u32>, Vec<u32>) {
    let n32 = n as u32;
    let mut degrees: Vec<u32> = (1..n32).map(|i| i * d * e).collect();
    degrees.push(d * n32);
    degrees.sort_unstable();
    let mut coexp: Vec<u32> = if d >= 2 {
        (0..n32).map(|i| 1 + i * d * e).collect()
    } else {
        let mut v: Vec<u32> = (0..n32.saturating_sub(1)).map(|i| 1 + i * e).collect();
        v.push((n32 - 1) * (e - 1));
        v
    };
    coexp.sort_unstable();
    (degrees, coexp)
}

/// The monomial group G(de,e,n).
pub fn build_monomial(d: u32, e: u32, n: usize) -> Result<GroupSpec> {
    if d == 0 || e == 0 || n == 0 {
        return Err(Error::UnknownGroup(format!("G({},{},{n})", d * e, e)));
    }
    let m = (d * e).max(1);
    let mut gens: Vec<CycMatrix> = (0..n.saturating_sub(1)).map(|i| permutation_swap(n, m, i)).collect();
    if d > 1 {
        gens.push(CycMatrix::from_fn(n, m, |r, c| {
            if r != c {
                Cyclotomic::zero(m)
            } else if r == 0 {
                Cyclotomic::root(m, e as i64)
            } else {
                Cyclotomic::one(m)
            }
        }));
    }
    if e > 1 && n >= 2 {
        gens.push(CycMatrix::from_fn(n, m, |r, c| match (r, c) {
            (1, 0) => Cyclotomic::root(m, -1),
            (0, 1) => Cyclotomic::root(m, 1),
            (0, 0) | (1, 1) => Cyclotomic::zero(m),
            _ => Cyclotomic::from_int(m, (r == c) as i64),
        }));
    }
    let order = (m as u64).pow(n as u32) * factorial(n as u64) / e as u64;
    let (degrees, coexp) = monomial_numerology(d, e, n);
    let trivial = order == 1;
    let irreducible = !trivial && !(d == 1 && e == 1 && n >= 2) && !(d == 1 && e == 2 && n == 2);
    Ok(GroupSpec {
        name: format!("G({},{},{n})", d * e, e),
        n,
        m,
        generators: gens,
        expected_order: Some(order),
        expected_degrees: if trivial { None } else { Some(degrees) },
        expected_coexponents: if trivial { None } else { Some(coexp) },
        unitary: true,
        irreducible,
    })
}

/// Geometric representation of the Coxeter group with matrix `cm`.
pub fn build_coxeter(name: &str, cm: &[Vec<u32>]) -> Result<GroupSpec> {
    let n = cm.len();
    for (i, row) in cm.iter().enumerate() {
        if row.len() != n || row[i] != 1 {
            return Err(Error::Malformed(format!("{name}: bad Coxeter matrix")));
        }
        for (j, &v) in row.iter().enumerate() {
            if i != j && (v < 2 || cm[j][i] != v) {
                return Err(Error::Malformed(format!("{name}: bad Coxeter matrix")));
            }
        }
    }
    let mut m = 1;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m = lcm(m, 2 * cm[i][j]);
            }
        }
    }
    let coef = |i: usize, j: usize| {
        let k = cm[i][j];
        let z = Cyclotomic::root(2 * k, 1);
        (&z + &z.conj()).embed(m)
    };
    let gens = (0..n)
        .map(|i| {
            CycMatrix::from_fn(n, m, |r, c| {
                if r == i {
                    if c == i {
                        Cyclotomic::from_int(m, -1)
                    } else {
                        coef(i, c)
                    }
                } else {
                    Cyclotomic::from_int(m, (r == c) as i64)
                }
            })
        })
        .collect();
    Ok(GroupSpec {
        name: name.to_string(),
        n,
        m,
        generators: gens,
        expected_order: None,
        expected_degrees: None,
        expected_coexponents: None,
        unitary: false,
        irreducible: true,
    })
}

fn chain(n: usize, labels: &[(usize, usize, u32)]) -> Vec<Vec<u32>> {
    let mut cm = vec![vec![2u32; n]; n];
    for (i, row) in cm.iter_mut().enumerate() {
        row[i] = 1;
    }
    for &(i, j, v) in labels {
        cm[i][j] = v;
        cm[j][i] = v;
    }
    cm
}

/// Coxeter matrix and degrees of an irreducible finite Coxeter type.
pub fn coxeter_type(family: char, rank: usize, param: Option<u32>) -> Option<(Vec<Vec<u32>>, Vec<u32>)> {
    let path = |n: usize| -> Vec<(usize, usize, u32)> { (0..n.saturating_sub(1)).map(|i| (i, i + 1, 3)).collect() };
    let n = rank;
    Some(match (family, n) {
        ('A', n) if n >= 1 => (chain(n, &path(n)), (2..=n as u32 + 1).collect()),
        ('B', n) if n >= 2 => {
            let mut l = path(n);
            l[0].2 = 4;
            (chain(n, &l), (1..=n as u32).map(|i| 2 * i).collect())
        }
        ('D', n) if n >= 4 => {
            let mut l = path(n - 1);
            l.push((n - 3, n - 1, 3));
            let mut deg: Vec<u32> = (1..n as u32).map(|i| 2 * i).collect();
            deg.push(n as u32);
            deg.sort_unstable();
            (chain(n, &l), deg)
        }
        ('E', 6 | 7 | 8) => {
            // Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4
            let mut l = vec![(0, 2, 3), (1, 3, 3)];
            for i in 2..n - 1 {
                l.push((i, i + 1, 3));
            }
            let deg = match n {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            };
            (chain(n, &l), deg)
        }
        ('F', 4) => (chain(4, &[(0, 1, 3), (1, 2, 4), (2, 3, 3)]), vec![2, 6, 8, 12]),
        ('H', 3) => (chain(3, &[(0, 1, 5), (1, 2, 3)]), vec![2, 6, 10]),
        ('H', 4) => (chain(4, &[(0, 1, 5), (1, 2, 3), (2, 3, 3)]), vec![2, 12, 20, 30]),
        ('I', 2) => {
            let k = param?;
            if k < 3 {
                return None;
            }
            (chain(2, &[(0, 1, k)]), vec![2, k])
        }
        _ => return None,
    })
}

/// Geometric representation of a named irreducible Coxeter type, with expected data.
pub fn build_named_coxeter(name: &str, family: char, rank: usize, param: Option<u32>) -> Result<GroupSpec> {
    let (cm, degrees) = coxeter_type(family, rank, param).ok_or_else(|| Error::UnknownGroup(name.to_string()))?;
    let mut spec = build_coxeter(name, &cm)?;
    spec.expected_order = Some(degrees.iter().map(|&d| d as u64).product());
    spec.expected_coexponents = Some(degrees.iter().map(|d| d - 1).collect());
    spec.expected_degrees = Some(degrees);
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_numerology_cases() {
        assert_eq!(monomial_numerology(3, 1, 2), (vec![3, 6], vec![1, 4]));
        assert_eq!(monomial_numerology(1, 3, 3), (vec![3, 3, 6], vec![1, 4, 4]));
        assert_eq!(monomial_numerology(1, 2, 3), (vec![2, 3, 4], vec![1, 2, 3]));
    }

    #[test]
    fn coxeter_generators_are_involutions() {
        for (f, r, p) in [('A', 3, None), ('B', 3, None), ('H', 3, None), ('I', 2, Some(5)), ('E', 6, None)] {
            let spec = build_named_coxeter("x", f, r, p).unwrap();
            for g in &spec.generators {
                assert!(g.mul(g).is_identity());
            }
        }
    }
}
