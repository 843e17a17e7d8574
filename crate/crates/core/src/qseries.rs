//! Laurent series in q with coefficients in Q[t^±1, s^±1], and the
//! q-combinatorics built on them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{parse_rat, rat_int, rat_to_string, Rational};

/// Finitely supported map (t-exponent, s-exponent) → rational.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct TSPoly {
    terms: BTreeMap<(i32, i32), Rational>,
}

impl TSPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, t: i32, s: i32) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert((t, s), c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, t: i32, s: i32) -> Rational {
        self.terms.get(&(t, s)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, t: i32, s: i32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((t, s)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(t, s));
        }
    }

    pub fn add_assign(&mut self, o: &TSPoly) {
        for (&(t, s), c) in &o.terms {
            self.add_term(t, s, c);
        }
    }

    pub fn add_scaled(&mut self, o: &TSPoly, k: &Rational) {
        for (&(t, s), c) in &o.terms {
            self.add_term(t, s, &(c * k));
        }
    }

    pub fn mul(&self, o: &TSPoly) -> TSPoly {
        let mut out = TSPoly::zero();
        for (&(t1, s1), c1) in &self.terms {
            for (&(t2, s2), c2) in &o.terms {
                out.add_term(t1 + t2, s1 + s2, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> TSPoly {
        if k.is_zero() {
            return TSPoly::zero();
        }
        TSPoly { terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect() }
    }

    pub fn neg(&self) -> TSPoly {
        self.scale(&rat_int(-1))
    }

    /// The single term when this is a monomial.
    pub fn as_monomial(&self) -> Option<(i32, i32, Rational)> {
        if self.terms.len() == 1 {
            let (&(t, s), c) = self.terms.iter().next().unwrap();
            Some((t, s, c.clone()))
        } else {
            None
        }
    }
}

impl fmt::Debug for TSPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(t, s), c)| format!("{}·t^{t}s^{s}", rat_to_string(c)))
            .collect();
        write!(f, "({})", parts.join(" + "))
    }
}

/// A monomial c·q^q·t^t·s^s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mono {
    pub coeff: Rational,
    pub q: i64,
    pub t: i32,
    pub s: i32,
}

impl Mono {
    pub fn new(coeff: Rational, q: i64, t: i32, s: i32) -> Self {
        Mono { coeff, q, t, s }
    }

    pub fn q(k: i64) -> Self {
        Mono::new(Rational::one(), k, 0, 0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono::new(&self.coeff * &o.coeff, self.q + o.q, self.t + o.t, self.s + o.s)
    }

    pub fn to_series(&self) -> QTSLaurent {
        QTSLaurent::monomial(self.coeff.clone(), self.q, self.t, self.s)
    }
}

/// Laurent series in q over TSPoly coefficients, optionally truncated above `cap`.
#[derive(Clone, Default)]
pub struct QTSLaurent {
    terms: BTreeMap<i64, TSPoly>,
    cap: Option<i64>,
    truncated: bool,
}

impl PartialEq for QTSLaurent {
    /// Equality up to the smaller cap.
    fn eq(&self, o: &Self) -> bool {
        let cap = min_cap(self.cap, o.cap);
        let keys: std::collections::BTreeSet<i64> =
            self.terms.keys().chain(o.terms.keys()).copied().filter(|&k| cap.map_or(true, |c| k <= c)).collect();
        keys.into_iter().all(|k| self.terms.get(&k) == o.terms.get(&k))
    }
}

fn min_cap(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl QTSLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0, 0, 0)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0, 0)
    }

    pub fn monomial(c: Rational, q: i64, t: i32, s: i32) -> Self {
        let mut out = Self::zero();
        out.add_term(q, t, s, &c);
        out
    }

    /// q^k with unit coefficient.
    pub fn qpow(k: i64) -> Self {
        Self::monomial(Rational::one(), k, 0, 0)
    }

    /// Univariate polynomial Σ coeffs[i] q^(offset + i).
    pub fn from_q_coeffs(offset: i64, coeffs: &[i64]) -> Self {
        let mut out = Self::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            out.add_term(offset + i as i64, 0, 0, &rat_int(c));
        }
        out
    }

    pub fn with_cap(mut self, cap: i64) -> Self {
        self.set_cap(Some(cap));
        self
    }

    pub fn set_cap(&mut self, cap: Option<i64>) {
        let cap = min_cap(self.cap, cap);
        self.cap = cap;
        if let Some(c) = cap {
            let dropped = self.terms.split_off(&(c + 1));
            if !dropped.is_empty() {
                self.truncated = true;
            }
        }
    }

    /// Removes the cap (only meaningful when the value is known to be exact).
    pub fn uncapped(mut self) -> Self {
        self.cap = None;
        self.truncated = false;
        self
    }

    pub fn cap(&self) -> Option<i64> {
        self.cap
    }

    pub fn was_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &TSPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.values().map(|p| p.len()).sum()
    }

    pub fn q_slice(&self, k: i64) -> TSPoly {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn min_q(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_q(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, q: i64, t: i32, s: i32) -> Rational {
        self.terms.get(&q).map(|p| p.coeff(t, s)).unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, q: i64, t: i32, s: i32, c: &Rational) {
        if c.is_zero() || self.cap.map_or(false, |cap| q > cap) {
            return;
        }
        let e = self.terms.entry(q).or_default();
        e.add_term(t, s, c);
        if e.is_zero() {
            self.terms.remove(&q);
        }
    }

    pub fn add_tspoly(&mut self, q: i64, p: &TSPoly) {
        for (&(t, s), c) in p.terms() {
            self.add_term(q, t, s, c);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(o);
        out
    }

    pub fn add_assign(&mut self, o: &Self) {
        self.set_cap(o.cap);
        for (&k, p) in &o.terms {
            if self.cap.map_or(true, |c| k <= c) {
                self.add_tspoly(k, p);
            }
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat_int(-1))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = QTSLaurent { terms: BTreeMap::new(), cap: self.cap, truncated: self.truncated };
        if k.is_zero() {
            return out;
        }
        for (&q, p) in &self.terms {
            out.terms.insert(q, p.scale(k));
        }
        out
    }

    /// Cap of a product, accounting for negative lowest exponents.
    fn product_cap(&self, o: &Self) -> Option<i64> {
        let mut cap = min_cap(self.cap, o.cap);
        if let (Some(ca), Some(lo)) = (self.cap, o.min_q()) {
            cap = min_cap(cap, Some(ca + lo));
        }
        if let (Some(cb), Some(la)) = (o.cap, self.min_q()) {
            cap = min_cap(cap, Some(cb + la));
        }
        cap
    }

    pub fn mul(&self, o: &Self) -> Self {
        let cap = self.product_cap(o);
        let mut out = QTSLaurent { terms: BTreeMap::new(), cap, truncated: self.truncated || o.truncated };
        for (&qa, pa) in &self.terms {
            for (&qb, pb) in &o.terms {
                let k = qa + qb;
                if cap.map_or(false, |c| k > c) {
                    out.truncated = true;
                    continue;
                }
                let prod = pa.mul(pb);
                out.add_tspoly(k, &prod);
            }
        }
        out
    }

    pub fn mul_mono(&self, m: &Mono) -> Self {
        let mut out = QTSLaurent {
            terms: BTreeMap::new(),
            cap: self.cap.map(|c| c + m.q),
            truncated: self.truncated,
        };
        for (&q, p) in &self.terms {
            for (&(t, s), c) in p.terms() {
                out.add_term(q + m.q, t + m.t, s + m.s, &(c * &m.coeff));
            }
        }
        out
    }

    pub fn shift_q(&self, k: i64) -> Self {
        self.mul_mono(&Mono::q(k))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = QTSLaurent::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Multiplicative inverse truncated at `cap`. The lowest q-term must be a
    /// unit monomial c·t^i·s^j.
    pub fn invert_unit(&self, cap: i64) -> Result<Self> {
        let low = self.min_q().ok_or_else(|| Error::NotAUnit("zero series".into()))?;
        let lead = self.terms[&low].clone();
        let (lt, ls, lc) = lead
            .as_monomial()
            .ok_or_else(|| Error::NotAUnit(format!("lowest q-term {lead:?} is not a monomial")))?;
        let u_inv = Mono::new(lc.recip(), 0, -lt, -ls);
        // a = q^low · lead · (1 + r), r = Σ_{k≥1} r_k q^k
        let mut cap = cap;
        if let Some(c) = self.cap {
            cap = cap.min(c - 2 * low);
        }
        let n = cap + low; // need b_k for k ≤ cap + low
        let mut r: Vec<TSPoly> = Vec::new();
        if n >= 1 {
            r = vec![TSPoly::zero(); n as usize + 1];
            for (&q, p) in self.terms.range(low + 1..=low + n) {
                let mut scaled = TSPoly::zero();
                for (&(t, s), c) in p.terms() {
                    scaled.add_term(t - lt, s - ls, &(c / &lc));
                }
                r[(q - low) as usize] = scaled;
            }
        }
        // b = 1/(1+r): b_0 = 1, b_k = -Σ_{i=1..k} r_i b_{k-i}
        let mut b: Vec<TSPoly> = vec![TSPoly::constant(Rational::one())];
        for k in 1..=n.max(0) as usize {
            let mut acc = TSPoly::zero();
            for i in 1..=k {
                if !r[i].is_zero() && !b[k - i].is_zero() {
                    acc.add_assign(&r[i].mul(&b[k - i]));
                }
            }
            b.push(acc.neg());
        }
        let mut out = QTSLaurent { terms: BTreeMap::new(), cap: Some(cap), truncated: true };
        for (k, p) in b.into_iter().enumerate() {
            let q = k as i64 - low;
            if q > cap {
                break;
            }
            for (&(t, s), c) in p.terms() {
                out.add_term(q, t + u_inv.t, s + u_inv.s, &(c * &u_inv.coeff));
            }
        }
        Ok(out)
    }

    /// self / den, with den a unit-lowest-term series, exact to `cap`.
    pub fn div_to_cap(&self, den: &QTSLaurent, cap: i64) -> Result<Self> {
        let low = self.min_q().unwrap_or(0);
        let inv = den.invert_unit(cap - low)?;
        let mut out = self.mul(&inv);
        out.set_cap(Some(cap));
        Ok(out)
    }

    /// Divides by (1 − q^d) in place of the series, truncated at the cap.
    pub fn div_one_minus_qd(&self, d: i64, cap: i64) -> Self {
        assert!(d > 0);
        let mut base = self.clone();
        base.set_cap(Some(cap));
        let mut out = QTSLaurent { terms: BTreeMap::new(), cap: base.cap, truncated: true };
        let cap = base.cap.unwrap();
        let Some(lo) = base.min_q() else { return out };
        let mut k = lo;
        while k <= cap {
            let mut p = base.q_slice(k);
            if let Some(prev) = out.terms.get(&(k - d)) {
                p.add_assign(prev);
            }
            if !p.is_zero() {
                out.terms.insert(k, p);
            }
            k += 1;
        }
        out
    }

    /// Restriction to the coefficient of s^r (as a series in q, t).
    pub fn s_slice(&self, r: i32) -> Self {
        let mut out = QTSLaurent { terms: BTreeMap::new(), cap: self.cap, truncated: self.truncated };
        for (&q, p) in &self.terms {
            for (&(t, s), c) in p.terms() {
                if s == r {
                    out.add_term(q, t, 0, c);
                }
            }
        }
        out
    }

    /// Restriction to the coefficient of t^k.
    pub fn t_slice(&self, k: i32) -> Self {
        let mut out = QTSLaurent { terms: BTreeMap::new(), cap: self.cap, truncated: self.truncated };
        for (&q, p) in &self.terms {
            for (&(t, s), c) in p.terms() {
                if t == k {
                    out.add_term(q, 0, s, c);
                }
            }
        }
        out
    }

    /// Multiplies every t^k s^j coefficient into s^(j+r).
    pub fn times_s(&self, r: i32) -> Self {
        self.mul_mono(&Mono::new(Rational::one(), 0, 0, r))
    }

    /// Replaces t by −q^p.
    pub fn substitute_t(&self, p: i64) -> Self {
        let mut out = QTSLaurent { terms: BTreeMap::new(), cap: None, truncated: self.truncated };
        let mut lowest_shift = i64::MAX;
        for (&q, poly) in &self.terms {
            for (&(t, s), c) in poly.terms() {
                let sign = if t.rem_euclid(2) == 0 { c.clone() } else { -c };
                out.add_term(q + p * t as i64, 0, s, &sign);
                lowest_shift = lowest_shift.min(p * t as i64);
            }
        }
        if let Some(c) = self.cap {
            // terms above the old cap may land anywhere above c + min shift
            let shift = if lowest_shift == i64::MAX { 0 } else { lowest_shift.min(0) };
            out.set_cap(Some(c + shift));
        }
        out
    }

    /// Evaluates at q = 1 (polynomials only).
    pub fn at_q1(&self) -> TSPoly {
        let mut out = TSPoly::zero();
        for p in self.terms.values() {
            out.add_assign(p);
        }
        out
    }

    /// Largest |t| or |s| exponent present.
    pub fn ts_degree(&self) -> (i32, i32) {
        let mut dt = 0;
        let mut ds = 0;
        for p in self.terms.values() {
            for (&(t, s), _) in p.terms() {
                dt = dt.max(t.abs());
                ds = ds.max(s.abs());
            }
        }
        (dt, ds)
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.iter().any(|(&q, p)| q < 0 || p.terms().any(|(&(t, s), _)| t < 0 || s < 0))
    }

    pub fn all_nonneg_integers(&self) -> bool {
        self.terms.values().all(|p| p.terms().all(|(_, c)| c.is_integer() && !c.is_negative()))
    }

    pub fn to_records(&self) -> Vec<Record> {
        let mut out = Vec::new();
        for (&q, p) in &self.terms {
            for (&(t, s), c) in p.terms() {
                out.push(Record { q, t, s, coeff: rat_to_string(c) });
            }
        }
        out
    }

    pub fn from_records(records: &[Record]) -> Result<Self> {
        let mut out = QTSLaurent::zero();
        for r in records {
            out.add_term(r.q, r.t, r.s, &parse_rat(&r.coeff)?);
        }
        Ok(out)
    }

    /// Human-readable rendering, lowest q first.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (&q, p) in &self.terms {
            for (&(t, s), c) in p.terms() {
                let mut vars = String::new();
                for (name, e) in [("q", q as i32), ("t", t), ("s", s)] {
                    match e {
                        0 => {}
                        1 => vars.push_str(name),
                        _ => vars.push_str(&format!("{name}^{e}")),
                    }
                }
                let cs = rat_to_string(c);
                parts.push(if vars.is_empty() {
                    cs
                } else if c.is_one() {
                    vars
                } else if cs == "-1" {
                    format!("-{vars}")
                } else {
                    format!("{cs}*{vars}")
                });
            }
        }
        let mut s = if parts.is_empty() { "0".to_string() } else { parts.join(" + ").replace("+ -", "- ") };
        if let Some(c) = self.cap {
            if self.truncated {
                s.push_str(&format!(" + O(q^{})", c + 1));
            }
        }
        s
    }
}

impl fmt::Debug for QTSLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Canonical serialized coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub q: i64,
    pub t: i32,
    pub s: i32,
    pub coeff: String,
}

/// Supported operations for [`series_arith`].
#[derive(Clone, Copy, Debug)]
pub enum SeriesOp {
    Add,
    Mul,
    InvertUnit,
}

pub fn series_arith(a: &QTSLaurent, b: Option<&QTSLaurent>, op: SeriesOp) -> Result<QTSLaurent> {
    match op {
        SeriesOp::Add => Ok(a.add(b.expect("add needs two operands"))),
        SeriesOp::Mul => Ok(a.mul(b.expect("mul needs two operands"))),
        SeriesOp::InvertUnit => {
            let cap = a.cap().ok_or_else(|| Error::NotAUnit("invert_unit requires a cap".into()))?;
            a.invert_unit(cap)
        }
    }
}

/// (z; q^b)_k = ∏_{i<k} (1 − z·q^{ib}).
pub fn qpochhammer(z: &Mono, b: i64, k: usize) -> QTSLaurent {
    let mut out = QTSLaurent::one();
    for i in 0..k {
        let mut f = QTSLaurent::one();
        f.add_term(z.q + i as i64 * b, z.t, z.s, &-z.coeff.clone());
        out = out.mul(&f);
    }
    out
}

/// [n choose r] at base q^b.
pub fn qbinomial(n: i64, r: i64, b: i64) -> QTSLaurent {
    if r < 0 || r > n || n < 0 {
        return QTSLaurent::zero();
    }
    let coeffs = gaussian_coeffs(n as usize, r as usize);
    let mut out = QTSLaurent::zero();
    for (i, c) in coeffs.into_iter().enumerate() {
        out.add_term(i as i64 * b, 0, 0, &Rational::from_integer(c.into()));
    }
    out
}

/// Coefficients of the Gaussian binomial in q via the q-Pascal rule.
fn gaussian_coeffs(n: usize, r: usize) -> Vec<i128> {
    // row[k] = [n' choose k]_q as coefficient vector
    let mut row: Vec<Vec<i128>> = vec![vec![1]];
    for m in 1..=n {
        let mut next: Vec<Vec<i128>> = Vec::with_capacity(m + 1);
        for k in 0..=m {
            // [m k] = [m-1 k-1] + q^k [m-1 k]
            let mut v: Vec<i128> = vec![0; k * (m - k) + 1];
            if k >= 1 {
                for (i, &c) in row[k - 1].iter().enumerate() {
                    v[i] += c;
                }
            }
            if k < m {
                for (i, &c) in row[k].iter().enumerate() {
                    v[i + k] += c;
                }
            }
            next.push(v);
        }
        row = next;
    }
    row.swap_remove(r)
}

/// [m]_{q^b} = 1 + q^b + … + q^{b(m−1)}.
pub fn qint(m: i64, b: i64) -> QTSLaurent {
    let mut out = QTSLaurent::zero();
    for i in 0..m.max(0) {
        out.add_term(i * b, 0, 0, &Rational::one());
    }
    out
}

/// σ_r(q^{e_1}, …, q^{e_n}).
pub fn sigma_elem(exps: &[i64], r: usize) -> QTSLaurent {
    // dp[k] = σ_k over processed prefix
    let mut dp: Vec<QTSLaurent> = vec![QTSLaurent::one()];
    for &e in exps {
        let mut next = dp.clone();
        next.push(QTSLaurent::zero());
        for k in 0..dp.len() {
            next[k + 1] = next[k + 1].add(&dp[k].shift_q(e));
        }
        dp = next;
    }
    dp.get(r).cloned().unwrap_or_default()
}

/// Truncated basic hypergeometric sum
/// Σ_r z^r ∏(a_i;q^b)_r / ((q^b;q^b)_r ∏(b_j;q^b)_r).
pub fn phi_eval(upper: &[Mono], lower: &[Mono], base: i64, z: &Mono, cap: i64) -> Result<QTSLaurent> {
    if z.coeff.is_zero() {
        return Ok(QTSLaurent::one().with_cap(cap));
    }
    for b in lower {
        if b.q == 0 && b.t == 0 && b.s == 0 && b.coeff.is_one() {
            return Err(Error::DivisionByZero);
        }
    }
    // terminating parameter q^{-base·n}
    let terminate = upper.iter().find_map(|a| {
        (a.t == 0 && a.s == 0 && a.coeff.is_one() && base != 0 && a.q <= 0 && a.q % base == 0)
            .then(|| (-a.q / base) as usize)
    });
    let limit = terminate.unwrap_or((4 * (cap.max(0) + 1)) as usize);
    let mut total = QTSLaurent::zero().with_cap(cap);
    let mut num = QTSLaurent::one();
    let mut den = QTSLaurent::one();
    let mut zr = QTSLaurent::one();
    let mut quiet = 0;
    for r in 0..=limit {
        if r > 0 {
            let i = (r - 1) as i64;
            for a in upper {
                num = num.mul(&one_minus(&a.mul(&Mono::q(i * base))));
            }
            den = den.mul(&one_minus(&Mono::q(base * (i + 1))));
            for b in lower {
                let f = one_minus(&b.mul(&Mono::q(i * base)));
                let lead = f.q_slice(f.min_q().unwrap_or(0));
                if f.is_zero() || lead.as_monomial().is_none() {
                    return Err(Error::NotAUnit(format!("lower parameter factor {f:?}")));
                }
                den = den.mul(&f);
            }
            zr = zr.mul_mono(z);
        }
        if num.is_zero() {
            break;
        }
        let term = zr.mul(&num).div_to_cap(&den, cap)?;
        if terminate.is_none() {
            if term.is_zero() {
                quiet += 1;
                if quiet > 8 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        total.add_assign(&term);
    }
    Ok(total)
}

fn one_minus(m: &Mono) -> QTSLaurent {
    let mut f = QTSLaurent::one();
    f.add_term(m.q, m.t, m.s, &-m.coeff.clone());
    f
}

/// A closed form num / ∏(1 − q^d).
#[derive(Clone, Debug, Default)]
pub struct RationalForm {
    pub num: QTSLaurent,
    pub den: Vec<i64>,
}

impl RationalForm {
    pub fn new(num: QTSLaurent, den: Vec<i64>) -> Self {
        let mut den = den;
        den.sort_unstable();
        RationalForm { num, den }
    }

    pub fn poly(num: QTSLaurent) -> Self {
        RationalForm { num, den: Vec::new() }
    }

    pub fn mul(&self, o: &RationalForm) -> RationalForm {
        let mut den = self.den.clone();
        den.extend_from_slice(&o.den);
        RationalForm::new(self.num.mul(&o.num), den)
    }

    pub fn mul_series(&self, p: &QTSLaurent) -> RationalForm {
        RationalForm::new(self.num.mul(p), self.den.clone())
    }

    /// Sum over a common denominator (the multiset union of the factors
    /// missing from each side).
    pub fn add(&self, o: &RationalForm) -> RationalForm {
        let (only_a, only_b, common) = split_multisets(&self.den, &o.den);
        let a = self.num.mul(&prod_one_minus(&only_b));
        let b = o.num.mul(&prod_one_minus(&only_a));
        let mut den = common;
        den.extend(only_a);
        den.extend(only_b);
        RationalForm::new(a.add(&b), den)
    }

    pub fn substitute_t(&self, p: i64) -> RationalForm {
        RationalForm::new(self.num.substitute_t(p), self.den.clone())
    }

    /// Power series expansion truncated at `cap`.
    pub fn expand(&self, cap: i64) -> QTSLaurent {
        let mut out = self.num.clone();
        out.set_cap(Some(cap));
        if self.den.is_empty() {
            return out;
        }
        for &d in &self.den {
            out = out.div_one_minus_qd(d, cap);
        }
        out
    }

    /// Exact polynomial quotient when the denominator divides the numerator.
    pub fn to_polynomial(&self) -> Result<QTSLaurent> {
        let mut cur = self.num.clone().uncapped();
        for &d in &self.den {
            cur = exact_div_one_minus_qd(&cur, d)
                .ok_or_else(|| Error::Integrity(format!("(1 - q^{d}) does not divide the numerator")))?;
        }
        Ok(cur)
    }
}

fn split_multisets(a: &[i64], b: &[i64]) -> (Vec<i64>, Vec<i64>, Vec<i64>) {
    let mut rest_b = b.to_vec();
    let mut only_a = Vec::new();
    let mut common = Vec::new();
    for &x in a {
        if let Some(pos) = rest_b.iter().position(|&y| y == x) {
            rest_b.swap_remove(pos);
            common.push(x);
        } else {
            only_a.push(x);
        }
    }
    (only_a, rest_b, common)
}

/// ∏ (1 − q^d).
pub fn prod_one_minus(ds: &[i64]) -> QTSLaurent {
    let mut out = QTSLaurent::one();
    for &d in ds {
        out = out.mul(&one_minus(&Mono::q(d)));
    }
    out
}

/// Divides a Laurent polynomial by (1 − q^d) exactly, if possible.
pub fn exact_div_one_minus_qd(p: &QTSLaurent, d: i64) -> Option<QTSLaurent> {
    // p = (1 - q^d) g  ⇒  g_k = p_k + g_{k-d}
    let (lo, hi) = match (p.min_q(), p.max_q()) {
        (Some(l), Some(h)) => (l, h),
        _ => return Some(QTSLaurent::zero()),
    };
    let mut g: BTreeMap<i64, TSPoly> = BTreeMap::new();
    for k in lo..=hi - d {
        let mut c = p.q_slice(k);
        if let Some(prev) = g.get(&(k - d)) {
            c.add_assign(prev);
        }
        if !c.is_zero() {
            g.insert(k, c);
        }
    }
    let mut out = QTSLaurent::zero();
    for (k, c) in g {
        out.add_tspoly(k, &c);
    }
    let check = out.mul(&one_minus(&Mono::q(d)));
    (check == *p).then_some(out)
}

/// Convenience: the polynomial 1 + c·t^tp·q^qp.
pub fn one_plus(c: i64, q: i64, t: i32, s: i32) -> QTSLaurent {
    let mut f = QTSLaurent::one();
    f.add_term(q, t, s, &rat_int(c));
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(coeffs: &[i64]) -> QTSLaurent {
        QTSLaurent::from_q_coeffs(0, coeffs)
    }

    #[test]
    fn inverse_geometric() {
        let a = q(&[1, 0, -1]);
        let inv = a.invert_unit(6).unwrap();
        assert_eq!(inv, q(&[1, 0, 1, 0, 1, 0, 1]).with_cap(6));
        let prod = q(&[1, -1]).mul(&q(&[1, -1]).invert_unit(5).unwrap());
        assert_eq!(prod, QTSLaurent::one().with_cap(5));
    }

    #[test]
    fn invert_rejects_nonunit() {
        let mut a = QTSLaurent::one();
        a.add_term(0, 1, 0, &rat_int(1));
        assert!(a.invert_unit(3).is_err());
    }

    #[test]
    fn laurent_product() {
        let a = one_plus(1, 1, 1, 0);
        let b = one_plus(1, -1, 0, 1);
        let mut want = QTSLaurent::one();
        want.add_term(1, 1, 0, &rat_int(1));
        want.add_term(-1, 0, 1, &rat_int(1));
        want.add_term(0, 1, 1, &rat_int(1));
        assert_eq!(a.mul(&b), want);
    }

    #[test]
    fn pochhammer_examples() {
        let z = Mono::q(1);
        assert_eq!(qpochhammer(&z, 1, 0), QTSLaurent::one());
        assert_eq!(qpochhammer(&z, 1, 3), q(&[1, -1]).mul(&q(&[1, 0, -1])).mul(&q(&[1, 0, 0, -1])));
        let z = Mono::new(rat_int(-1), -1, 1, 0);
        let want = one_plus(1, -1, 1, 0).mul(&one_plus(1, -3, 1, 0));
        assert_eq!(qpochhammer(&z, -2, 2), want);
    }

    #[test]
    fn qbinomial_examples() {
        assert_eq!(qbinomial(4, 2, 1), q(&[1, 1, 2, 1, 1]));
        assert_eq!(qbinomial(5, 0, 3), QTSLaurent::one());
        assert!(qbinomial(3, 4, 1).is_zero());
        assert!(qbinomial(3, -1, 1).is_zero());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_elem(&[1, 3], 1), q(&[0, 1, 0, 1]));
        assert_eq!(sigma_elem(&[4, 5], 0), QTSLaurent::one());
    }

    #[test]
    fn expand_examples() {
        let f = RationalForm::new(QTSLaurent::one(), vec![2, 4]);
        assert_eq!(f.expand(4), q(&[1, 0, 1, 0, 2]).with_cap(4));
        let mut num = one_plus(1, 1, 1, 0);
        num.add_term(1, 0, 1, &rat_int(1));
        num.add_term(0, 1, 1, &rat_int(1));
        let f = RationalForm::new(num, vec![2]);
        let e = f.expand(3);
        let mut want = QTSLaurent::zero().with_cap(3);
        for (qq, t, s) in [(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1), (2, 0, 0), (3, 1, 0), (3, 0, 1), (2, 1, 1)] {
            want.add_term(qq, t, s, &rat_int(1));
        }
        assert_eq!(e, want);
    }

    #[test]
    fn substitution() {
        let f = one_plus(1, 1, 1, 0);
        assert_eq!(f.substitute_t(2), q(&[1, 0, 0, -1]));
    }

    #[test]
    fn exact_division() {
        let p = q(&[1, 0, 0, 0, 0, -1]);
        assert_eq!(exact_div_one_minus_qd(&p, 1).unwrap(), q(&[1, 1, 1, 1, 1]));
        assert!(exact_div_one_minus_qd(&q(&[1, 1]), 2).is_none());
    }

    #[test]
    fn records_roundtrip() {
        let mut a = one_plus(3, 2, 1, 1);
        a.add_term(-1, 0, 2, &crate::exactnum::rat(1, 2));
        let back = QTSLaurent::from_records(&a.to_records()).unwrap();
        assert_eq!(a, back);
    }
}
