//! Exact rationals and cyclotomic fields Q(ζ_m).
//!
//! Elements are stored as residues modulo the m-th cyclotomic polynomial Φ_m
//! in the power basis 1, ζ, …, ζ^{φ(m)−1}, so structural equality is field
//! equality at a fixed m.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use parking_lot::RwLock;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Canonical "num/den" string (den omitted when 1).
pub fn rat_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn euler_phi(m: u32) -> usize {
    let mut n = m;
    let mut out = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out as usize
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

fn phi_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of Φ_m, lowest degree first. Monic of degree φ(m).
pub fn cyclotomic_poly(m: u32) -> Arc<Vec<i64>> {
    assert!(m >= 1);
    if let Some(p) = phi_cache().read().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let den = cyclotomic_poly(d);
            num = exact_div_monic(&num, &den);
        }
    }
    let arc = Arc::new(num);
    phi_cache().write().insert(m, arc.clone());
    arc
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for j in 0..=dn {
                rem[i + j] -= c * den[j];
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

/// An element of Q(ζ_m).
#[derive(Clone)]
pub struct Cyclotomic {
    m: u32,
    coeffs: Vec<Rational>,
}

/// Values are compared in the common field Q(ζ_lcm).
impl PartialEq for Cyclotomic {
    fn eq(&self, o: &Self) -> bool {
        if self.m == o.m {
            return self.coeffs == o.coeffs;
        }
        let l = lcm(self.m, o.m);
        self.embed(l).coeffs == o.embed(l).coeffs
    }
}

impl Eq for Cyclotomic {}

impl Cyclotomic {
    pub fn zero(m: u32) -> Self {
        Cyclotomic { m, coeffs: vec![Rational::zero(); euler_phi(m)] }
    }

    pub fn one(m: u32) -> Self {
        Self::from_rational(m, Rational::one())
    }

    pub fn from_rational(m: u32, r: Rational) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(m: u32, k: i64) -> Self {
        Self::from_rational(m, rat_int(k))
    }

    /// ζ_m^power.
    pub fn root(m: u32, power: i64) -> Self {
        assert!(m >= 1);
        let k = power.rem_euclid(m as i64) as usize;
        let mut raw = vec![Rational::zero(); k + 1];
        raw[k] = Rational::one();
        Self::from_raw(m, raw)
    }

    /// Reduces an arbitrary polynomial in ζ_m (lowest degree first).
    pub fn from_raw(m: u32, mut raw: Vec<Rational>) -> Self {
        let phi = cyclotomic_poly(m);
        let deg = phi.len() - 1;
        if raw.len() > deg {
            for i in (deg..raw.len()).rev() {
                if raw[i].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut raw[i]);
                for j in 0..deg {
                    if phi[j] != 0 {
                        raw[i - deg + j] -= &c * rat_int(phi[j]);
                    }
                }
            }
            raw.truncate(deg);
        }
        raw.resize(deg, Rational::zero());
        Cyclotomic { m, coeffs: raw }
    }

    pub fn from_coeffs(m: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != euler_phi(m) {
            return Err(Error::Malformed(format!(
                "expected {} coefficients for m = {m}, got {}",
                euler_phi(m),
                coeffs.len()
            )));
        }
        Ok(Cyclotomic { m, coeffs })
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    /// Image in Q(ζ_{target}); target must be a multiple of m.
    pub fn embed(&self, target: u32) -> Self {
        if target == self.m {
            return self.clone();
        }
        assert!(target % self.m == 0, "cannot embed Q(ζ_{}) into Q(ζ_{target})", self.m);
        let k = (target / self.m) as usize;
        let mut raw = vec![Rational::zero(); k * self.coeffs.len().max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * k] = c.clone();
        }
        Self::from_raw(target, raw)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.m == b.m {
            return (a.clone(), b.clone());
        }
        let t = lcm(a.m, b.m);
        (a.embed(t), b.embed(t))
    }

    pub fn conj(&self) -> Self {
        let m = self.m as usize;
        let mut raw = vec![Rational::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(m - i) % m] += c;
            }
        }
        Self::from_raw(self.m, raw)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Cyclotomic { m: self.m, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    fn mul_same(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut raw = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Self::from_raw(self.m, raw)
    }

    /// Multiplicative inverse by solving the linear system a·b = 1 over Q.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.m, r.recip()));
        }
        let n = self.coeffs.len();
        // column j = coefficients of a·ζ^j
        let mut mat: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n + 1]; n];
        let mut col = self.clone();
        let zeta = Self::root(self.m, 1);
        for j in 0..n {
            for i in 0..n {
                mat[i][j] = col.coeffs[i].clone();
            }
            col = col.mul_same(&zeta);
        }
        mat[0][n] = Rational::one();
        let sol = solve_rational(mat).ok_or(Error::DivisionByZero)?;
        Ok(Cyclotomic { m: self.m, coeffs: sol })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Numerical value in the embedding ζ_m ↦ e^{2πi/m}.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * i as f64 / self.m as f64;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }

    /// Least common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rat_to_string).collect()
    }

    pub fn from_strings(m: u32, s: &[String]) -> Result<Self> {
        let coeffs = s.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(m, coeffs)
    }
}

fn solve_rational(mut a: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let (pivot_row, row) = if r < col {
                    let (lo, hi) = a.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = a.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: &Cyclotomic) -> Cyclotomic {
        if self.m != o.m {
            let (a, b) = Cyclotomic::common(self, o);
            return &a + &b;
        }
        Cyclotomic { m: self.m, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: &Cyclotomic) -> Cyclotomic {
        if self.m != o.m {
            let (a, b) = Cyclotomic::common(self, o);
            return &a - &b;
        }
        Cyclotomic { m: self.m, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        if self.m != o.m {
            let (a, b) = Cyclotomic::common(self, o);
            return a.mul_same(&b);
        }
        if let Some(r) = self.as_rational() {
            return o.scale(&r);
        }
        if let Some(r) = o.as_rational() {
            return self.scale(&r);
        }
        self.mul_same(o)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, o: Cyclotomic) -> Cyclotomic {
                (&self).$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = rat_to_string(c);
            terms.push(match i {
                0 => cs,
                1 => format!("{cs}*z{}", self.m),
                _ => format!("{cs}*z{}^{i}", self.m),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Element of Z[ζ_m] with machine-integer coefficients, used in hot loops.
/// All operations are overflow-checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntCyc {
    pub coeffs: Vec<i128>,
}

/// Arithmetic context for [`IntCyc`] at a fixed m.
#[derive(Clone, Debug)]
pub struct IntCycRing {
    pub m: u32,
    phi: Vec<i128>,
}

impl IntCycRing {
    pub fn new(m: u32) -> Self {
        IntCycRing { m, phi: cyclotomic_poly(m).iter().map(|&x| x as i128).collect() }
    }

    pub fn dim(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn zero(&self) -> IntCyc {
        IntCyc { coeffs: vec![0; self.dim()] }
    }

    pub fn from_int(&self, k: i128) -> IntCyc {
        let mut z = self.zero();
        z.coeffs[0] = k;
        z
    }

    /// Converts an exact element; fails when a coefficient is not an integer.
    pub fn from_cyc(&self, c: &Cyclotomic) -> Result<IntCyc> {
        let c = c.embed(self.m);
        let mut out = self.zero();
        for (o, r) in out.coeffs.iter_mut().zip(c.coeffs()) {
            if !r.is_integer() {
                return Err(Error::Integrity(format!("non-integral coefficient {r}")));
            }
            *o = r.to_integer().to_i128().ok_or(Error::Overflow("IntCyc conversion"))?;
        }
        Ok(out)
    }

    pub fn to_cyc(&self, a: &IntCyc) -> Cyclotomic {
        let coeffs = a.coeffs.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        Cyclotomic::from_coeffs(self.m, coeffs).expect("dimension matches")
    }

    pub fn add_assign(&self, a: &mut IntCyc, b: &IntCyc) -> Result<()> {
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = x.checked_add(*y).ok_or(Error::Overflow("IntCyc add"))?;
        }
        Ok(())
    }

    pub fn sub_assign(&self, a: &mut IntCyc, b: &IntCyc) -> Result<()> {
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = x.checked_sub(*y).ok_or(Error::Overflow("IntCyc sub"))?;
        }
        Ok(())
    }

    pub fn scale(&self, a: &IntCyc, k: i128) -> Result<IntCyc> {
        let coeffs = a
            .coeffs
            .iter()
            .map(|&x| x.checked_mul(k).ok_or(Error::Overflow("IntCyc scale")))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntCyc { coeffs })
    }

    pub fn mul(&self, a: &IntCyc, b: &IntCyc) -> Result<IntCyc> {
        let n = self.dim();
        let mut raw = vec![0i128; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    let p = x.checked_mul(y).ok_or(Error::Overflow("IntCyc mul"))?;
                    raw[i + j] = raw[i + j].checked_add(p).ok_or(Error::Overflow("IntCyc mul"))?;
                }
            }
        }
        for i in (n..raw.len()).rev() {
            let c = raw[i];
            if c == 0 {
                continue;
            }
            raw[i] = 0;
            for j in 0..n {
                if self.phi[j] != 0 {
                    let p = c.checked_mul(self.phi[j]).ok_or(Error::Overflow("IntCyc reduce"))?;
                    raw[i - n + j] = raw[i - n + j].checked_sub(p).ok_or(Error::Overflow("IntCyc reduce"))?;
                }
            }
        }
        raw.truncate(n);
        Ok(IntCyc { coeffs: raw })
    }

    pub fn is_zero(a: &IntCyc) -> bool {
        a.coeffs.iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_table() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(105).len() - 1, 48);
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn roots() {
        assert!(Cyclotomic::root(1, 0).is_one());
        assert_eq!(Cyclotomic::root(2, 1), Cyclotomic::from_int(2, -1));
        let s = &Cyclotomic::root(3, 1) + &Cyclotomic::root(3, 2);
        assert_eq!(s, Cyclotomic::from_int(3, -1));
        let i = Cyclotomic::root(4, 1);
        assert_eq!(&i * &i, Cyclotomic::from_int(4, -1));
        assert_eq!(Cyclotomic::root(7, 7), Cyclotomic::root(7, 0));
        assert_eq!(Cyclotomic::root(5, -1), Cyclotomic::root(5, 4));
    }

    #[test]
    fn golden_product() {
        let z = |k| Cyclotomic::root(5, k);
        let a = &z(1) + &z(4);
        let b = &z(2) + &z(3);
        assert_eq!(&a * &b, Cyclotomic::from_int(5, -1));
    }

    #[test]
    fn embedding() {
        assert_eq!(Cyclotomic::root(2, 1).embed(6), Cyclotomic::root(6, 3));
        assert_eq!(Cyclotomic::root(3, 1).embed(12), Cyclotomic::root(12, 4));
        let mixed = &Cyclotomic::root(3, 1) * &Cyclotomic::root(4, 1);
        assert_eq!(mixed, Cyclotomic::root(12, 7));
    }

    #[test]
    fn inverse_and_conj() {
        let a = &Cyclotomic::root(8, 1) + &Cyclotomic::from_int(8, 3);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(Cyclotomic::root(3, 1).conj(), Cyclotomic::root(3, 2));
        assert_eq!(a.conj().conj(), a);
        assert_eq!(Cyclotomic::zero(5).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn intcyc_matches_exact() {
        let ring = IntCycRing::new(12);
        let a = &Cyclotomic::root(12, 5) + &Cyclotomic::from_int(12, 2);
        let b = &Cyclotomic::root(12, 7) - &Cyclotomic::root(12, 1);
        let ia = ring.from_cyc(&a).unwrap();
        let ib = ring.from_cyc(&b).unwrap();
        assert_eq!(ring.to_cyc(&ring.mul(&ia, &ib).unwrap()), &a * &b);
    }

    #[test]
    fn complex_value() {
        let (re, im) = Cyclotomic::root(4, 1).to_complex();
        assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
    }
}
