use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{lcm, Cyclotomic};

/// Square matrix over Q(ζ_m), row-major. Columns are images of basis vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct CycMatrix {
    n: usize,
    m: u32,
    entries: Vec<Cyclotomic>,
}

/// Polynomial with cyclotomic coefficients, lowest degree first.
pub type CycPoly = Vec<Cyclotomic>;

impl CycMatrix {
    pub fn from_entries(n: usize, m: u32, entries: Vec<Cyclotomic>) -> Self {
        assert_eq!(entries.len(), n * n);
        let entries = entries.into_iter().map(|e| e.embed(m)).collect();
        CycMatrix { n, m, entries }
    }

    pub fn from_fn(n: usize, m: u32, f: impl Fn(usize, usize) -> Cyclotomic) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j).embed(m));
            }
        }
        CycMatrix { n, m, entries }
    }

    pub fn identity(n: usize, m: u32) -> Self {
        Self::from_fn(n, m, |i, j| Cyclotomic::from_int(m, (i == j) as i64))
    }

    pub fn scalar(n: usize, c: &Cyclotomic) -> Self {
        let m = c.order();
        Self::from_fn(n, m, |i, j| if i == j { c.clone() } else { Cyclotomic::zero(m) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.entries
    }

    pub fn embed(&self, m: u32) -> Self {
        CycMatrix { n: self.n, m, entries: self.entries.iter().map(|e| e.embed(m)).collect() }
    }

    pub fn mul(&self, o: &CycMatrix) -> CycMatrix {
        assert_eq!(self.n, o.n);
        if self.m != o.m {
            let t = lcm(self.m, o.m);
            return self.embed(t).mul(&o.embed(t));
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Cyclotomic::zero(self.m);
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = o.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        CycMatrix { n, m: self.m, entries }
    }

    pub fn sub(&self, o: &CycMatrix) -> CycMatrix {
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect();
        CycMatrix { n: self.n, m: self.m, entries }
    }

    pub fn scale(&self, c: &Cyclotomic) -> CycMatrix {
        CycMatrix::from_entries(self.n, lcm(self.m, c.order()), self.entries.iter().map(|e| e * c).collect())
    }

    pub fn transpose(&self) -> CycMatrix {
        Self::from_fn(self.n, self.m, |i, j| self.get(j, i).clone())
    }

    pub fn conj_transpose(&self) -> CycMatrix {
        Self::from_fn(self.n, self.m, |i, j| self.get(j, i).conj())
    }

    pub fn conj(&self) -> CycMatrix {
        Self::from_fn(self.n, self.m, |i, j| self.get(i, j).conj())
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    pub fn apply(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        (0..self.n)
            .map(|i| {
                let mut acc = Cyclotomic::zero(self.m);
                for (j, x) in v.iter().enumerate() {
                    acc = &acc + &(self.get(i, j) * x);
                }
                acc
            })
            .collect()
    }

    /// Exact inverse by Gauss–Jordan elimination over the field.
    pub fn inverse(&self) -> Result<CycMatrix> {
        let n = self.n;
        let m = self.m;
        let mut a: Vec<Vec<Cyclotomic>> = (0..n)
            .map(|i| {
                let mut row: Vec<Cyclotomic> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.extend((0..n).map(|j| Cyclotomic::from_int(m, (i == j) as i64)));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
            a.swap(col, piv);
            let inv = a[col][col].inv()?;
            for x in a[col].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x = &*x - &(&f * p);
                    }
                }
            }
        }
        let entries = a.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
        Ok(CycMatrix { n, m, entries })
    }

    pub fn det(&self) -> Cyclotomic {
        let p: Vec<Vec<CycPoly>> =
            (0..self.n).map(|i| (0..self.n).map(|j| vec![self.get(i, j).clone()]).collect()).collect();
        let d = bareiss_det(p, self.m);
        d.into_iter().next().unwrap_or_else(|| Cyclotomic::zero(self.m))
    }

    /// det(1 + c·x·self) as a polynomial in x.
    pub fn det_one_plus(&self, c: i64) -> CycPoly {
        let n = self.n;
        let m = self.m;
        let p: Vec<Vec<CycPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let lin = self.get(i, j).scale(&crate::exactnum::rat_int(c));
                        vec![Cyclotomic::from_int(m, (i == j) as i64), lin]
                    })
                    .collect()
            })
            .collect();
        let mut d = bareiss_det(p, m);
        d.resize(n + 1, Cyclotomic::zero(m));
        d
    }

    /// Coefficients of det(x·I − self), lowest degree first.
    pub fn char_poly(&self) -> CycPoly {
        // det(xI - w) = x^n det(1 - x^{-1} w): reverse of det(1 - y w)
        let mut d = self.det_one_plus(-1);
        d.reverse();
        d
    }
}

fn poly_trim(p: &mut CycPoly) {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &CycPoly, b: &CycPoly, m: u32) -> CycPoly {
    if a.is_empty() || b.is_empty() {
        return vec![Cyclotomic::zero(m)];
    }
    let mut out = vec![Cyclotomic::zero(m); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_sub(a: &CycPoly, b: &CycPoly, m: u32) -> CycPoly {
    let len = a.len().max(b.len());
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let x = a.get(i).cloned().unwrap_or_else(|| Cyclotomic::zero(m));
        let y = b.get(i).cloned().unwrap_or_else(|| Cyclotomic::zero(m));
        out.push(&x - &y);
    }
    poly_trim(&mut out);
    out
}

fn poly_is_zero(a: &CycPoly) -> bool {
    a.iter().all(|c| c.is_zero())
}

/// Exact quotient a / b; b nonzero and dividing a.
fn poly_div_exact(a: &CycPoly, b: &CycPoly, m: u32) -> CycPoly {
    let mut b = b.clone();
    poly_trim(&mut b);
    let mut rem = a.clone();
    poly_trim(&mut rem);
    if poly_is_zero(&rem) {
        return vec![Cyclotomic::zero(m)];
    }
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("nonzero divisor");
    if rem.len() < b.len() {
        return vec![Cyclotomic::zero(m)];
    }
    let mut q = vec![Cyclotomic::zero(m); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = &rem[i + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                rem[i + j] = &rem[i + j] - &(&c * bj);
            }
        }
        q[i] = c;
    }
    debug_assert!(poly_is_zero(&rem));
    poly_trim(&mut q);
    q
}

/// Fraction-free (Bareiss) determinant over the polynomial ring.
pub fn bareiss_det(mut a: Vec<Vec<CycPoly>>, m: u32) -> CycPoly {
    let n = a.len();
    if n == 0 {
        return vec![Cyclotomic::one(m)];
    }
    let mut sign = 1i64;
    let mut prev: CycPoly = vec![Cyclotomic::one(m)];
    for k in 0..n - 1 {
        if poly_is_zero(&a[k][k]) {
            match (k + 1..n).find(|&r| !poly_is_zero(&a[r][k])) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return vec![Cyclotomic::zero(m)],
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = poly_sub(&poly_mul(&a[i][j], &a[k][k], m), &poly_mul(&a[i][k], &a[k][j], m), m);
                a[i][j] = poly_div_exact(&t, &prev, m);
            }
        }
        prev = a[k][k].clone();
    }
    let mut d = a[n - 1][n - 1].clone();
    if sign < 0 {
        d = d.iter().map(|c| -c).collect();
    }
    d
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// The triple det(1 − qw), det(1 + tw), det(1 + s·w⁻¹).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharTriple {
    pub q: CycPoly,
    pub t: CycPoly,
    pub s: CycPoly,
}

pub fn char_data(w: &CycMatrix) -> Result<CharTriple> {
    let inv = w.inverse()?;
    Ok(CharTriple { q: w.det_one_plus(-1), t: w.det_one_plus(1), s: inv.det_one_plus(1) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: i64) -> Cyclotomic {
        Cyclotomic::from_int(1, k)
    }

    fn ints(v: &[i64]) -> CycPoly {
        v.iter().map(|&k| z(k)).collect()
    }

    #[test]
    fn char_data_examples() {
        let id = CycMatrix::identity(2, 1);
        let c = char_data(&id).unwrap();
        assert_eq!(c.q, ints(&[1, -2, 1]));
        assert_eq!(c.t, ints(&[1, 2, 1]));
        let d = CycMatrix::from_entries(2, 1, vec![z(-1), z(0), z(0), z(1)]);
        let c = char_data(&d).unwrap();
        assert_eq!(c.q, ints(&[1, 0, -1]));
        assert_eq!(c.t, ints(&[1, 0, -1]));
        assert_eq!(c.s, ints(&[1, 0, -1]));
        let swap = CycMatrix::from_entries(2, 1, vec![z(0), z(1), z(1), z(0)]);
        let c = char_data(&swap).unwrap();
        assert_eq!(c.q, ints(&[1, 0, -1]));
        assert_eq!(c.t, ints(&[1, 0, -1]));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = 3;
        let w = Cyclotomic::root(3, 1);
        let a = CycMatrix::from_entries(2, m, vec![w.clone(), Cyclotomic::from_int(m, 2), Cyclotomic::one(m), w.conj()]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let sing = CycMatrix::from_entries(2, 1, vec![z(1), z(2), z(2), z(4)]);
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn char_poly_matches_det() {
        let m = 4;
        let i = Cyclotomic::root(4, 1);
        let a = CycMatrix::from_entries(2, m, vec![i.clone(), Cyclotomic::one(m), Cyclotomic::zero(m), -&i]);
        let cp = a.char_poly();
        // x^2 - tr x + det
        assert_eq!(cp[2], Cyclotomic::one(m));
        assert!(cp[1].is_zero());
        assert_eq!(cp[0], a.det());
    }
}
