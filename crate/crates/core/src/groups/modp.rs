//! Reduction of Q(ζ_m) modulo a prime p ≡ 1 (mod m) that splits completely.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{Cyclotomic, Rational};

use super::matrix::CycMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModField {
    pub p: u64,
    pub m: u32,
    /// Image of ζ_m, an element of exact order m.
    pub root: u64,
}

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl ModField {
    /// Largest prime p < 2^61 with p ≡ 1 (mod m) not dividing `avoid`.
    pub fn new(m: u32, avoid: &BigInt) -> Self {
        let m64 = m as u64;
        let mut k = ((1u64 << 61) - 1) / m64;
        loop {
            let p = k * m64 + 1;
            if is_prime(p) && !(avoid % BigInt::from(p)).is_zero() {
                let e = (p - 1) / m64;
                let factors = prime_factors(m64);
                for g in 2u64.. {
                    let r = powmod(g, e, p);
                    if factors.iter().all(|&l| powmod(r, m64 / l, p) != 1) {
                        return ModField { p, m, root: r };
                    }
                }
            }
            k -= 1;
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mulmod(a, b, self.p)
    }

    pub fn inv(&self, a: u64) -> u64 {
        powmod(a, self.p - 2, self.p)
    }

    fn big(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced below p")
    }

    pub fn rational(&self, r: &Rational) -> Result<u64> {
        let d = self.big(r.denom());
        if d == 0 {
            return Err(Error::Integrity(format!("denominator divisible by the prime {}", self.p)));
        }
        Ok(self.mul(self.big(r.numer()), self.inv(d)))
    }

    pub fn cyc(&self, c: &Cyclotomic) -> Result<u64> {
        let c = c.embed(self.m);
        let mut acc = 0u64;
        let mut pw = 1u64;
        for r in c.coeffs() {
            if !r.is_zero() {
                acc = self.add(acc, self.mul(self.rational(r)?, pw));
            }
            pw = self.mul(pw, self.root);
        }
        Ok(acc)
    }

    pub fn matrix(&self, a: &CycMatrix) -> Result<Vec<u64>> {
        a.entries().iter().map(|c| self.cyc(c)).collect()
    }

    /// Product of two n×n matrices, one reduction per entry.
    pub fn mat_mul(&self, a: &[u64], b: &[u64], n: usize, out: &mut [u64]) {
        let p = self.p as u128;
        for i in 0..n {
            for j in 0..n {
                let mut acc: u128 = 0;
                for k in 0..n {
                    acc += a[i * n + k] as u128 * b[k * n + j] as u128;
                }
                out[i * n + j] = (acc % p) as u64;
            }
        }
    }

    /// Coefficients of det(xI − a), lowest degree first, via Hessenberg reduction.
    pub fn char_poly(&self, a: &[u64], n: usize) -> Vec<u64> {
        let mut h = a.to_vec();
        let at = |i: usize, j: usize| i * n + j;
        for mcol in 1..n.saturating_sub(1) {
            let Some(piv) = (mcol..n).find(|&i| h[at(i, mcol - 1)] != 0) else {
                continue;
            };
            if piv != mcol {
                for j in 0..n {
                    h.swap(at(piv, j), at(mcol, j));
                }
                for i in 0..n {
                    h.swap(at(i, piv), at(i, mcol));
                }
            }
            let inv = self.inv(h[at(mcol, mcol - 1)]);
            for i in mcol + 1..n {
                let u = self.mul(h[at(i, mcol - 1)], inv);
                if u == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = self.mul(u, h[at(mcol, j)]);
                    h[at(i, j)] = self.sub(h[at(i, j)], v);
                }
                for r in 0..n {
                    let v = self.mul(u, h[at(r, i)]);
                    h[at(r, mcol)] = self.add(h[at(r, mcol)], v);
                }
            }
        }
        // p_k = (x − h_kk) p_{k−1} − Σ_{i=1}^{k−1} h_{k−i,k} ∏_{j=k−i+1}^{k} h_{j,j−1} p_{k−i−1}, 1-indexed
        let hh = |i: usize, j: usize| h[at(i - 1, j - 1)];
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for k in 1..=n {
            let prev = &polys[k - 1];
            let mut cur = vec![0u64; k + 1];
            for (d, &c) in prev.iter().enumerate() {
                cur[d + 1] = self.add(cur[d + 1], c);
                cur[d] = self.sub(cur[d], self.mul(hh(k, k), c));
            }
            let mut prod = 1u64;
            for i in 1..k {
                prod = self.mul(prod, hh(k - i + 1, k - i));
                let f = self.mul(hh(k - i, k), prod);
                if f == 0 {
                    continue;
                }
                for (d, &c) in polys[k - i - 1].iter().enumerate() {
                    cur[d] = self.sub(cur[d], self.mul(f, c));
                }
            }
            polys.push(cur);
        }
        polys.pop().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_root_has_order_m() {
        for m in [1u32, 2, 3, 5, 12, 60] {
            let f = ModField::new(m, &BigInt::from(1));
            assert_eq!((f.p - 1) % m as u64, 0);
            assert_eq!(powmod(f.root, m as u64, f.p), 1);
            let phi = crate::exactnum::cyclotomic_poly(m);
            let mut acc = 0u64;
            for (i, &c) in phi.iter().enumerate() {
                let c = if c >= 0 { c as u64 } else { f.p - (-c) as u64 };
                acc = f.add(acc, f.mul(c, powmod(f.root, i as u64, f.p)));
            }
            assert_eq!(acc, 0, "root is primitive for m = {m}");
        }
    }

    #[test]
    fn hessenberg_matches_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = ModField::new(1, &BigInt::from(1));
        for n in 1..=6 {
            for _ in 0..5 {
                let ints: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-3..=3)).collect();
                let exact = CycMatrix::from_entries(n, 1, ints.iter().map(|&k| Cyclotomic::from_int(1, k)).collect());
                let want: Vec<u64> = exact.char_poly().iter().map(|c| f.cyc(c).unwrap()).collect();
                let got = f.char_poly(&f.matrix(&exact).unwrap(), n);
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn primality() {
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime(561));
        assert!(is_prime(97));
    }
}
