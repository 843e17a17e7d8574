//! Brute-force triply-graded Hilbert series and the ν_r numerators.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{IntCyc, IntCycRing, Rational};
use crate::groups::{char_data, recover_numerology, CycMatrix, EigenBucket, GroupElements, NumerologyProfile};
use crate::qseries::{one_plus, prod_one_minus, sigma_elem, QTSLaurent};

#[derive(Clone, Debug)]
pub struct MolienResult {
    pub series: QTSLaurent,
    pub profile: NumerologyProfile,
    /// ν_0, …, ν_n as polynomials in q and t.
    pub nu: Vec<QTSLaurent>,
    pub cap: i64,
}

/// Per-element contribution Σ_k q^k c_k · Σ_{a,b} t^a s^b T_a S_b, scaled by `count`.
fn contribution(ring: &IntCycRing, w: &CycMatrix, count: u64, n: usize, cap: i64) -> Result<Vec<IntCyc>> {
    let ch = char_data(w)?;
    let to_int = |v: &[crate::exactnum::Cyclotomic]| v.iter().map(|c| ring.from_cyc(c)).collect::<Result<Vec<_>>>();
    let a = to_int(&ch.q)?;
    let t = to_int(&ch.t)?;
    let s = to_int(&ch.s)?;
    let dim = cap as usize + 1;
    // c = 1 / det(1 − qw): c_0 = 1, c_k = −Σ_{i≥1} a_i c_{k−i}
    let mut c: Vec<IntCyc> = Vec::with_capacity(dim);
    c.push(ring.from_int(1));
    for k in 1..dim {
        let mut acc = ring.zero();
        for i in 1..=n.min(k) {
            if !IntCycRing::is_zero(&a[i]) {
                ring.sub_assign(&mut acc, &ring.mul(&a[i], &c[k - i])?)?;
            }
        }
        c.push(acc);
    }
    let mut ts: Vec<IntCyc> = Vec::with_capacity((n + 1) * (n + 1));
    for ta in &t {
        for sb in &s {
            ts.push(ring.scale(&ring.mul(ta, sb)?, count as i128)?);
        }
    }
    let width = ts.len();
    let mut out = vec![ring.zero(); dim * width];
    for (k, ck) in c.iter().enumerate() {
        if IntCycRing::is_zero(ck) {
            continue;
        }
        for (j, x) in ts.iter().enumerate() {
            if !IntCycRing::is_zero(x) {
                let p = ring.mul(ck, x)?;
                ring.add_assign(&mut out[k * width + j], &p)?;
            }
        }
    }
    Ok(out)
}

fn add_vecs(ring: &IntCycRing, mut a: Vec<IntCyc>, b: Vec<IntCyc>) -> Result<Vec<IntCyc>> {
    for (x, y) in a.iter_mut().zip(&b) {
        ring.add_assign(x, y)?;
    }
    Ok(a)
}

fn finish(ring: &IntCycRing, acc: Vec<IntCyc>, order: u64, n: usize, cap: i64) -> Result<QTSLaurent> {
    let width = (n + 1) * (n + 1);
    let mut out = QTSLaurent::zero().with_cap(cap);
    let ord = BigInt::from(order);
    for (idx, v) in acc.iter().enumerate() {
        if IntCycRing::is_zero(v) {
            continue;
        }
        if v.coeffs[1..].iter().any(|&x| x != 0) {
            return Err(Error::Integrity(format!("non-rational Molien coefficient at index {idx}")));
        }
        let total = BigInt::from(v.coeffs[0]);
        if !(&total % &ord).is_zero() {
            return Err(Error::Integrity(format!("Molien coefficient {total} not divisible by |W| = {order}")));
        }
        let val = total / &ord;
        if val.is_negative() {
            return Err(Error::Integrity(format!("negative Molien coefficient {val}")));
        }
        let k = (idx / width) as i64;
        let ab = idx % width;
        let (ta, sb) = ((ab / (n + 1)) as i32, (ab % (n + 1)) as i32);
        out.add_term(k, ta, sb, &Rational::from_integer(val));
    }
    let _ = ring;
    Ok(out)
}

/// (1/|W|) Σ_w det(1+tw) det(1+sw⁻¹) / det(1−qw), truncated at q^cap.
pub fn brute_hilbert(buckets: &[EigenBucket], order: u64, n: usize, m: u32, cap: i64) -> Result<QTSLaurent> {
    if cap < 0 {
        return Err(Error::CapTooSmall(format!("cap {cap}")));
    }
    let ring = IntCycRing::new(m);
    let zero = || vec![ring.zero(); (cap as usize + 1) * (n + 1) * (n + 1)];
    let acc = buckets
        .par_iter()
        .map(|b| contribution(&ring, &b.representative.embed(m), b.count, n, cap))
        .try_reduce(zero, |a, b| add_vecs(&ring, a, b))?;
    finish(&ring, acc, order, n, cap)
}

/// The same sum taken element by element (no bucketing).
pub fn elementwise_hilbert(elements: &[CycMatrix], n: usize, m: u32, cap: i64) -> Result<QTSLaurent> {
    let ring = IntCycRing::new(m);
    let mut acc = vec![ring.zero(); (cap as usize + 1) * (n + 1) * (n + 1)];
    for w in elements {
        acc = add_vecs(&ring, acc, contribution(&ring, &w.embed(m), 1, n, cap)?)?;
    }
    finish(&ring, acc, elements.len() as u64, n, cap)
}

pub fn group_hilbert(group: &GroupElements, cap: i64) -> Result<QTSLaurent> {
    brute_hilbert(group.buckets(), group.order(), group.n(), group.spec.m, cap)
}

/// s^r slice times ∏(1 − q^{d_i}), checked to vanish in the guard band.
pub fn nu_extract(series: &QTSLaurent, profile: &NumerologyProfile, r: usize) -> Result<QTSLaurent> {
    let cap = series.cap().ok_or_else(|| Error::CapTooSmall("series must be capped".into()))?;
    let top = profile.big_n + profile.big_n_star;
    if cap <= top {
        return Err(Error::CapTooSmall(format!("cap {cap} must exceed N + N* = {top}")));
    }
    let prod = series.s_slice(r as i32).mul(&prod_one_minus(&profile.degrees));
    let mut nu = QTSLaurent::zero();
    for (&q, p) in prod.terms() {
        if q > top {
            return Err(Error::CapTooSmall(format!("ν_{r} has support at q^{q} in the guard band")));
        }
        nu.add_tspoly(q, p);
    }
    Ok(nu)
}

/// Σ_j j·c_j where the t^k part of ν is Σ_j c_j q^j.
pub fn psi_from_nu(nu: &QTSLaurent, k: i32) -> i64 {
    let mut acc = Rational::zero();
    for (&q, p) in nu.terms() {
        acc += p.coeff(k, 0) * Rational::from_integer(q.into());
    }
    acc.to_integer().to_i64().expect("ψ fits in i64")
}

/// Doubles a probe cap until the numerology is recoverable, then reruns at
/// N + N* + max d + 1 and extracts every ν_r.
pub fn molien(group: &GroupElements) -> Result<MolienResult> {
    let n = group.n();
    let mut probe = group
        .spec
        .expected_degrees
        .as_ref()
        .and_then(|d| d.iter().max())
        .map_or(16, |&h| 2 * h as i64);
    let profile = loop {
        let s = group_hilbert(group, probe)?;
        match recover_numerology(&s, n) {
            Ok(p) => break p,
            Err(Error::CapTooSmall(_)) if probe < 4096 => probe *= 2,
            Err(e) => return Err(e),
        }
    };
    let cap = profile.default_cap();
    let series = group_hilbert(group, cap)?;
    let nu = (0..=n).map(|r| nu_extract(&series, &profile, r)).collect::<Result<Vec<_>>>()?;
    Ok(MolienResult { series, profile, nu, cap })
}

/// Named boolean outcomes of the universal slice identities.
pub fn slice_checks(res: &MolienResult) -> Vec<(String, bool)> {
    let p = &res.profile;
    let cap = res.cap;
    let n = p.n;
    let den = prod_one_minus(&p.degrees);
    let times_den = |s: &QTSLaurent| s.mul(&den);
    let mut out = Vec::new();

    let inv = res.series.s_slice(0).t_slice(0);
    out.push(("invariants (t,s)=(0,0)".to_string(), times_den(&inv) == QTSLaurent::one().with_cap(cap)));

    let mut exterior_product = QTSLaurent::one();
    for &e in &p.exponents {
        exterior_product = exterior_product.mul(&one_plus(1, e, 1, 0));
    }
    out.push(("s=0 slice".to_string(), times_den(&res.series.s_slice(0)) == exterior_product.clone().with_cap(cap)));

    let mut lin = QTSLaurent::zero();
    for &e in &p.exponents {
        lin = lin.add(&QTSLaurent::qpow(e));
    }
    let t1 = res.series.s_slice(0).t_slice(1);
    out.push(("t-linear s=0 part".to_string(), times_den(&t1) == lin.with_cap(cap)));

    let mut os = QTSLaurent::zero();
    for r in 0..=n {
        os = os.add(&sigma_elem(&p.coexponents, r).mul(&QTSLaurent::monomial(Rational::from_integer(1.into()), 0, 0, r as i32)));
    }
    out.push(("t=0 slice".to_string(), times_den(&res.series.t_slice(0)) == os.with_cap(cap)));

    let mut top = QTSLaurent::one();
    for &e in &p.coexponents {
        let mut f = QTSLaurent::qpow(e);
        f.add_term(0, 1, 0, &Rational::from_integer(1.into()));
        top = top.mul(&f);
    }
    out.push(("s^n product".to_string(), res.nu[n] == top));
    out.push(("ν_0 product".to_string(), res.nu[0] == exterior_product));

    if p.duality {
        out.push(("duality ν_1".to_string(), res.nu[1] == duality_nu1(p)));
    }
    out
}

/// (Σ q^{e*_i})(1 + tq^{−1}) ∏_{i<n}(1 + tq^{e_i}).
pub fn duality_nu1(p: &NumerologyProfile) -> QTSLaurent {
    let mut s = QTSLaurent::zero();
    for &e in &p.coexponents {
        s = s.add(&QTSLaurent::qpow(e));
    }
    let mut out = s.mul(&one_plus(1, -1, 1, 0));
    for &e in &p.exponents[..p.n - 1] {
        out = out.mul(&one_plus(1, e, 1, 0));
    }
    out
}
