//! Closed forms for the graded multiplicities of ∧^r V, their (q,t)-analogue
//! relatives, and the expression grammar for tabulated ν_r.

use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{rat_int, Rational};
use crate::groups::NumerologyProfile;
use crate::qseries::{one_plus, phi_eval, qbinomial, qint, qpochhammer, sigma_elem, Mono, QTSLaurent, RationalForm};

fn choose2(r: i64) -> i64 {
    r * (r - 1) / 2
}

/// (z t^tp q^qs; q^step)_k with z = ±1.
fn poch(sign: i64, tp: i32, qs: i64, step: i64, k: i64) -> QTSLaurent {
    qpochhammer(&Mono::new(rat_int(sign), qs, tp, 0), step, k.max(0) as usize)
}

/// (q^start; q^step)_k as a denominator list.
fn den_poch(start: i64, step: i64, k: i64) -> Vec<i64> {
    (0..k.max(0)).map(|i| start + i * step).collect()
}

fn mono(c: i64, q: i64, t: i32) -> QTSLaurent {
    QTSLaurent::monomial(rat_int(c), q, t, 0)
}

fn require_coincidental(p: &NumerologyProfile) -> Result<i64> {
    if !p.coincidental {
        return Err(Error::Refused(format!(
            "profile with exponents {:?} and coexponents {:?} is not coincidental",
            p.exponents, p.coexponents
        )));
    }
    Ok(p.gap_or(1))
}

/// σ_r(q^{e*}) ∏_{i≤r}(1 + q^{−e*_i}t) ∏_{i≤n−r}(1 + q^{e_i}t) / ∏(1 − q^{d_i}).
///
/// Defined for any profile; it is the true s^r slice only for coincidental groups.
pub fn sigma_form(p: &NumerologyProfile, r: usize) -> RationalForm {
    let mut num = sigma_elem(&p.coexponents, r);
    for &e in &p.coexponents[..r] {
        num = num.mul(&one_plus(1, -e, 1, 0));
    }
    for &e in &p.exponents[..p.n - r] {
        num = num.mul(&one_plus(1, e, 1, 0));
    }
    RationalForm::new(num, p.degrees.clone())
}

/// q^{r+aC(r,2)} [n r]_{q^a} (−tq^{e₁};q^a)_{n−r} (−tq^{−1};q^{−a})_r / (q^{e₁+1};q^a)_n.
pub fn main_theorem(p: &NumerologyProfile, r: usize) -> Result<RationalForm> {
    let a = require_coincidental(p)?;
    if r > p.n {
        return Err(Error::Malformed(format!("r = {r} exceeds rank {}", p.n)));
    }
    let (n, r) = (p.n as i64, r as i64);
    let num = QTSLaurent::qpow(r + a * choose2(r))
        .mul(&qbinomial(n, r, a))
        .mul(&poch(-1, 1, p.e1, a, n - r))
        .mul(&poch(-1, 1, -1, -a, r));
    Ok(RationalForm::new(num, den_poch(p.e1 + 1, a, n)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    F,
    H,
}

/// f_r is the main theorem; h_r = (−tq^{−ar−1})^{n−r} [n r]_{q^a} (−tq^{−1};q^{−a})_r / (q^{e₁+1};q^a)_r.
pub fn fh_qt(p: &NumerologyProfile, r: usize, which: Which) -> Result<RationalForm> {
    match which {
        Which::F => main_theorem(p, r),
        Which::H => {
            let a = require_coincidental(p)?;
            let (n, r) = (p.n as i64, r as i64);
            let k = n - r;
            let lead = mono(if k % 2 == 0 { 1 } else { -1 }, (-a * r - 1) * k, k as i32);
            let num = lead.mul(&qbinomial(n, r, a)).mul(&poch(-1, 1, -1, -a, r));
            Ok(RationalForm::new(num, den_poch(p.e1 + 1, a, r)))
        }
    }
}

fn s_power(r: i64) -> QTSLaurent {
    QTSLaurent::monomial(Rational::one(), 0, 0, r as i32)
}

/// Σ_r s^r f_r as one rational form.
pub fn f_generating(p: &NumerologyProfile) -> Result<RationalForm> {
    let mut total: Option<RationalForm> = None;
    for r in 0..=p.n {
        let f = main_theorem(p, r)?.mul_series(&s_power(r as i64));
        total = Some(match total {
            None => f,
            Some(t) => t.add(&f),
        });
    }
    Ok(total.expect("rank is at least zero"))
}

/// Σ s^r f_r − Σ (−sq;q^a)_r h_r, expanded to `cap`.
pub fn h_to_f_check(p: &NumerologyProfile, cap: i64) -> Result<QTSLaurent> {
    let a = require_coincidental(p)?;
    let lhs = f_generating(p)?.expand(cap);
    let mut rhs = QTSLaurent::zero().with_cap(cap);
    for r in 0..=p.n {
        let h = fh_qt(p, r, Which::H)?;
        let weight = qpochhammer(&Mono::new(rat_int(-1), 1, 0, 1), a, r);
        rhs = rhs.add(&h.mul_series(&weight).expand(cap));
    }
    Ok(lhs.sub(&rhs))
}

/// Σ s^r f_r against (−tq^{e₁};q^a)_n / (q^{e₁+1};q^a)_n · ₂φ₁[q^{−an}, −qt^{−1}; −q^{a(1−n)−e₁}t^{−1} | q^a; −sq^{a−e₁}].
pub fn phi21_check(p: &NumerologyProfile, cap: i64) -> Result<QTSLaurent> {
    let a = require_coincidental(p)?;
    let (n, e1) = (p.n as i64, p.e1);
    let lhs = f_generating(p)?.expand(cap);
    let upper = [Mono::new(rat_int(1), -a * n, 0, 0), Mono::new(rat_int(-1), 1, -1, 0)];
    let lower = [Mono::new(rat_int(-1), a * (1 - n) - e1, -1, 0)];
    let z = Mono::new(rat_int(-1), a - e1, 0, 1);
    let phi = phi_eval(&upper, &lower, a, &z, cap + a * n + 2 * e1 + 8)?;
    let pref = RationalForm::new(poch(-1, 1, e1, a, n), den_poch(e1 + 1, a, n));
    let rhs = pref.expand(cap + a * n + 2 * e1 + 8).mul(&phi);
    let mut rhs_capped = rhs;
    rhs_capped.set_cap(Some(cap));
    Ok(lhs.sub(&rhs_capped))
}

/// ₂φ₁[q^{−bn}, b; c | q^base, z] − (c/b;q)_n/(c;q)_n ₃φ₂[q^{−bn}, b, bzq^{−bn}/c; bq^{base(1−n)}/c, 0 | q^base, q^base].
pub fn transformation_check(n: i64, base: i64, b: &Mono, c: &Mono, z: &Mono, cap: i64) -> Result<QTSLaurent> {
    let work = cap + 4 * base * (n + 1) + 16;
    let qn = Mono::new(rat_int(1), -base * n, 0, 0);
    let lhs = phi_eval(&[qn.clone(), b.clone()], &[c.clone()], base, z, work)?;
    let binv = inverse_mono(b)?;
    let cinv = inverse_mono(c)?;
    let u3 = b.mul(z).mul(&qn).mul(&cinv);
    let l1 = b.mul(&Mono::q(base * (1 - n))).mul(&cinv);
    let zero = Mono::new(Rational::zero(), 0, 0, 0);
    let phi32 = phi_eval(&[qn, b.clone(), u3], &[l1, zero], base, &Mono::q(base), work)?;
    let num = qpochhammer(&c.mul(&binv), base, n as usize);
    let den = qpochhammer(c, base, n as usize);
    let rhs = num.mul(&phi32).div_to_cap(&den, work)?;
    let mut out = lhs.sub(&rhs);
    out.set_cap(Some(cap));
    Ok(out)
}

fn inverse_mono(m: &Mono) -> Result<Mono> {
    if m.coeff.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Mono::new(m.coeff.recip(), -m.q, -m.t, -m.s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalanKind {
    Catalan,
    Narayana,
    Kirkman,
}

/// Specializes t = −q^p and divides out the denominator exactly.
///
/// With `checked`, p must be ≡ 1 mod h and the result must have
/// nonnegative integer coefficients.
pub fn catalan_family(
    prof: &NumerologyProfile,
    p: i64,
    r: Option<usize>,
    kind: CatalanKind,
    checked: bool,
) -> Result<QTSLaurent> {
    require_coincidental(prof)?;
    if checked && (p < 1 || p.rem_euclid(prof.h) != 1 % prof.h) {
        return Err(Error::Refused(format!("p = {p} is not 1 mod h = {}", prof.h)));
    }
    let form = match kind {
        CatalanKind::Catalan => fh_qt(prof, 0, Which::F)?,
        CatalanKind::Narayana | CatalanKind::Kirkman => {
            let r = r.ok_or_else(|| Error::Malformed("r is required".into()))?;
            if r > prof.n {
                return Err(Error::Malformed(format!("r = {r} exceeds rank {}", prof.n)));
            }
            fh_qt(prof, r, if kind == CatalanKind::Narayana { Which::H } else { Which::F })?
        }
    };
    let poly = form.substitute_t(p).to_polynomial()?;
    if checked && !poly.all_nonneg_integers() {
        return Err(Error::Integrity(format!("{kind:?} at p = {p} has a negative or fractional coefficient")));
    }
    Ok(poly)
}

/// ∏(1 − q^{p+e_i}) / (1 − q^{1+e_i}) by exact division.
pub fn q_catalan(prof: &NumerologyProfile, p: i64) -> Result<QTSLaurent> {
    let mut num = QTSLaurent::one();
    for &e in &prof.exponents {
        num = num.mul(&one_plus(-1, p + e, 0, 0));
    }
    let den: Vec<i64> = prof.exponents.iter().map(|e| e + 1).collect();
    RationalForm::new(num, den).to_polynomial()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterCounts {
    pub r: usize,
    pub f: i64,
    pub h: i64,
    pub cluster_product: i64,
}

fn at_one(poly: &QTSLaurent) -> Result<i64> {
    let v = poly.at_q1();
    if v.len() > 1 || v.terms().any(|(&(t, s), _)| t != 0 || s != 0) {
        return Err(Error::Integrity("specialization still depends on t or s".into()));
    }
    let c = v.coeff(0, 0);
    if !c.is_integer() {
        return Err(Error::Integrity(format!("non-integral count {c}")));
    }
    c.to_integer().to_i64().ok_or(Error::Overflow("cluster count"))
}

/// C(n,r) ∏_{i≤n−r} (h + d_i)/d_i.
pub fn cluster_product(prof: &NumerologyProfile, r: usize) -> Result<i64> {
    let mut acc = Rational::from_integer(binomial(prof.n as i64, r as i64).into());
    for &d in &prof.degrees[..prof.n - r] {
        acc *= Rational::new((prof.h + d).into(), d.into());
    }
    if !acc.is_integer() {
        return Err(Error::Integrity(format!("cluster product formula {acc} is not an integer")));
    }
    acc.to_integer().to_i64().ok_or(Error::Overflow("cluster product formula"))
}

/// f_r and h_r at t = −q^{h+1}, q = 1, with the cluster product formula.
pub fn cluster_fh(prof: &NumerologyProfile, r: usize) -> Result<ClusterCounts> {
    if !prof.is_real_like() {
        return Err(Error::Refused("cluster counts need e*_i = e_i".into()));
    }
    let p = prof.h + 1;
    let f = at_one(&fh_qt(prof, r, Which::F)?.substitute_t(p).to_polynomial()?)?;
    let h = at_one(&fh_qt(prof, r, Which::H)?.substitute_t(p).to_polynomial()?)?;
    Ok(ClusterCounts { r, f, h, cluster_product: cluster_product(prof, r)? })
}

/// Cells of a Ferrers diagram as (content, hooklength), with n(λ).
fn ferrers(lambda: &[u32]) -> (i64, Vec<(i64, i64)>) {
    let mut cells = Vec::new();
    let mut n_lambda = 0i64;
    for (i, &row) in lambda.iter().enumerate() {
        n_lambda += i as i64 * row as i64;
        for j in 0..row as usize {
            let leg = lambda[i + 1..].iter().filter(|&&l| l as usize > j).count() as i64;
            let arm = row as i64 - j as i64 - 1;
            cells.push((j as i64 - i as i64, arm + leg + 1));
        }
    }
    (n_lambda, cells)
}

fn check_partition(lambda: &[u32]) -> Result<()> {
    if lambda.windows(2).any(|w| w[0] < w[1]) || lambda.contains(&0) {
        return Err(Error::Malformed(format!("{lambda:?} is not a partition")));
    }
    Ok(())
}

/// P(λ; q^d, tq^k) = q^{d n(λ)} ∏ (1 + tq^{k + d c(x)}) / (1 − q^{d h(x)}).
pub fn hook_content_at(lambda: &[u32], d: i64, k: i64) -> Result<RationalForm> {
    check_partition(lambda)?;
    let (nl, cells) = ferrers(lambda);
    let mut num = QTSLaurent::qpow(d * nl);
    let mut den = Vec::with_capacity(cells.len());
    for (c, h) in cells {
        num = num.mul(&one_plus(1, k + d * c, 1, 0));
        den.push(d * h);
    }
    Ok(RationalForm::new(num, den))
}

/// q^{n(λ)} ∏_{x∈λ} (1 + tq^{c(x)}) / (1 − q^{h(x)}).
pub fn hook_content(lambda: &[u32]) -> Result<RationalForm> {
    hook_content_at(lambda, 1, 0)
}

/// Number of standard tableaux, n!/∏h(x).
pub fn standard_tableaux(lambda: &[u32]) -> u64 {
    let (_, cells) = ferrers(lambda);
    let n = cells.len() as u64;
    let fact: u128 = (1..=n as u128).product();
    let hooks: u128 = cells.iter().map(|&(_, h)| h as u128).product();
    (fact / hooks) as u64
}

/// All partitions of n, in reverse lexicographic order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multipartition {
    pub parts: Vec<Vec<u32>>,
}

impl Multipartition {
    pub fn new(parts: Vec<Vec<u32>>) -> Result<Self> {
        for p in &parts {
            check_partition(p)?;
        }
        Ok(Multipartition { parts })
    }

    pub fn d(&self) -> usize {
        self.parts.len()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().flatten().sum()
    }

    /// ((n−r), ∅, …, ∅, (1^r)) with `d` components.
    pub fn wedge(d: usize, n: u32, r: u32) -> Self {
        let mut parts = vec![Vec::new(); d];
        if n > r {
            parts[0] = vec![n - r];
        }
        parts[d - 1].extend(std::iter::repeat(1).take(r as usize));
        Multipartition { parts }
    }
}

/// P_{G(d,1,n)}(χ^λ̲) = P(λ⁰; q^d, tq^{d−1}) ∏_{i≥1} q^{n_i(d−i)} P(λ^i; q^d, tq^{−1}).
pub fn koike_wreath(lam: &Multipartition, d: usize) -> Result<RationalForm> {
    if lam.d() != d || d < 2 {
        return Err(Error::Malformed(format!("need {d} ≥ 2 components, got {}", lam.d())));
    }
    let d = d as i64;
    let mut out = hook_content_at(&lam.parts[0], d, d - 1)?;
    for (i, part) in lam.parts.iter().enumerate().skip(1) {
        let ni: u32 = part.iter().sum();
        let shift = QTSLaurent::qpow(ni as i64 * (d - i as i64));
        out = out.mul(&hook_content_at(part, d, -1)?.mul_series(&shift));
    }
    Ok(out)
}

/// Hilbert series for the restriction of χ^λ̲ from G(de,1,n) to G(de,e,n):
/// the sum of the wreath formula over the shifts λ^{(i)} ↦ λ^{(i+dv)}, v < e.
pub fn restricted_wreath(lam: &Multipartition, d: usize, e: usize) -> Result<RationalForm> {
    let de = d * e;
    if lam.d() != de {
        return Err(Error::Malformed(format!("need {de} components, got {}", lam.d())));
    }
    let mut total: Option<RationalForm> = None;
    for v in 0..e {
        let rotated = Multipartition { parts: (0..de).map(|i| lam.parts[(i + d * v) % de].clone()).collect() };
        let term = if de >= 2 {
            koike_wreath(&rotated, de)?
        } else {
            hook_content(&rotated.parts[0])?
        };
        total = Some(match total {
            None => term,
            Some(t) => t.add(&term),
        });
    }
    Ok(total.expect("e ≥ 1"))
}

/// Hilb((S ⊗ ∧V* ⊗ ∧^r V)^W) for W = G(de,e,n), case by case.
pub fn koike_deen_wedge(d: i64, e: i64, n: i64, r: i64) -> Result<RationalForm> {
    if d < 1 || e < 1 || n < 2 || d * e < 2 || r < 0 || r > n {
        return Err(Error::Malformed(format!("G({},{e},{n}) with r = {r} is outside the formula's range", d * e)));
    }
    let de = d * e;
    if r == 0 {
        let num = poch(-1, 1, de - 1, de, n - 1).mul(&one_plus(1, d * n - 1, 1, 0));
        let mut den = den_poch(de, de, n - 1);
        den.push(d * n);
        return Ok(RationalForm::new(num, den));
    }
    if r == n {
        let last = if d >= 2 { de * (n - 1) + 1 } else { (n - 1) * (e - 1) };
        let mut top = QTSLaurent::qpow(last);
        top.add_term(0, 1, 0, &Rational::one());
        let num = QTSLaurent::qpow(de * choose2(n - 1) + n - 1).mul(&poch(-1, 1, -1, -de, n - 1)).mul(&top);
        let mut den = den_poch(de, de, n - 1);
        den.push(d * n);
        return Ok(RationalForm::new(num, den));
    }
    let mut den = den_poch(de, de, r);
    den.extend(den_poch(de, de, n - r));
    den.push(d * n);
    if d >= 2 {
        // 1 − q^{den} + tq^{−1}(q^{de(n−r)}(1 − q^{dn}) + q^{dn} − q^{den})
        let mut bracket = one_plus(-1, de * n, 0, 0);
        for (c, qq) in [(1, de * (n - r) - 1), (-1, de * (n - r) + d * n - 1), (1, d * n - 1), (-1, de * n - 1)] {
            bracket.add_term(qq, 1, 0, &rat_int(c));
        }
        let num = QTSLaurent::qpow(de * choose2(r) + r)
            .mul(&poch(-1, 1, -1, -de, r))
            .mul(&poch(-1, 1, de - 1, de, n - 1 - r))
            .mul(&bracket);
        return Ok(RationalForm::new(num, den));
    }
    let one_minus_qn = one_plus(-1, n, 0, 0);
    let q_plus_t = {
        let mut x = QTSLaurent::qpow(1);
        x.add_term(0, 1, 0, &Rational::one());
        x
    };
    let low = one_plus(1, -(r - 1) * e - 1, 1, 0);
    let term1 = QTSLaurent::qpow(r).mul(&one_plus(1, (n - r) * e - 1, 1, 0)).mul(&low).mul(&one_minus_qn);
    let term2 = QTSLaurent::qpow((n - r) * (e - 1) - 1).mul(&one_plus(1, e - 1, 1, 0)).mul(&one_minus_qn).mul(&q_plus_t);
    let mut diff = QTSLaurent::qpow(n);
    diff.add_term(n * (e - 1), 0, 0, &rat_int(-1));
    let term3 = QTSLaurent::qpow(r - 1).mul(&low).mul(&q_plus_t).mul(&diff);
    let num = QTSLaurent::qpow(e * choose2(r))
        .mul(&poch(-1, 1, -1, -e, r - 1))
        .mul(&poch(-1, 1, e - 1, e, n - 1 - r))
        .mul(&term1.add(&term2).add(&term3));
    let mut den = den_poch(e, e, r);
    den.extend(den_poch(e, e, n - r));
    den.push(n);
    Ok(RationalForm::new(num, den))
}

/// What the main theorem would predict for G(de,e,n) at 1 ≤ r ≤ n−1.
pub fn product_shape_prediction(d: i64, e: i64, n: i64, r: i64) -> Result<RationalForm> {
    if r < 1 || r > n - 1 || d < 1 || e < 1 {
        return Err(Error::Malformed(format!("prediction needs 1 ≤ r ≤ n−1, got r = {r}")));
    }
    let de = d * e;
    if d >= 2 {
        let num = QTSLaurent::qpow(de * choose2(r) + r)
            .mul(&poch(-1, 1, -1, -de, r))
            .mul(&poch(-1, 1, de - 1, de, n - 1 - r))
            .mul(&one_plus(1, d * ((n - r) * e).min(n) - 1, 1, 0));
        let mut den = den_poch(de, de, r);
        den.extend(den_poch(de, de, n - r));
        return Ok(RationalForm::new(num, den));
    }
    let mut bracket = QTSLaurent::one();
    for (c, qq) in [(-1, n * e - r * e), (1, n * e - r * e - n), (-1, n * e - n)] {
        bracket.add_term(qq, 0, 0, &rat_int(c));
    }
    let num = QTSLaurent::qpow(e * choose2(r) + r)
        .mul(&poch(-1, 1, -1, -e, r - 1))
        .mul(&poch(-1, 1, e - 1, e, n - 1 - r))
        .mul(&one_plus(1, ((n - r) * e).min(n) - 1, 1, 0))
        .mul(&one_plus(1, -(1 + (r - 1) * e).min((n - 1) * (e - 1)), 1, 0))
        .mul(&bracket);
    let mut den = den_poch(e, e, r - 1);
    den.extend(den_poch(e, e, n - r));
    den.push(r * e);
    den.push(n);
    Ok(RationalForm::new(num, den))
}

/// Graded multiplicity of ∧^r V for W(A_{n−1}):
/// q^{r+C(r,2)} [n−1 r]_q (−tq;q)_{n−r−1} (−tq^{−1};q^{−1})_r / (q²;q)_{n−1}.
pub fn type_a_wedge(n: i64, r: i64) -> RationalForm {
    let num = QTSLaurent::qpow(r + choose2(r))
        .mul(&qbinomial(n - 1, r, 1))
        .mul(&poch(-1, 1, 1, 1, n - r - 1))
        .mul(&poch(-1, 1, -1, -1, r));
    RationalForm::new(num, den_poch(2, 1, n - 1))
}

/// ψ(U) = C(n−1,k−1)C(n−1,r)N + C(n−1,k)C(n−1,r−1)N*.
pub fn gutkin_opdam(n: i64, k: i64, r: i64, big_n: i64, big_n_star: i64) -> i64 {
    let c = |a: i64, b: i64| if b < 0 || a < 0 || b > a { 0 } else { binomial(a, b) };
    c(n - 1, k - 1) * c(n - 1, r) * big_n + c(n - 1, k) * c(n - 1, r - 1) * big_n_star
}

/// Factor-list expressions for tabulated polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableExpr {
    /// [m]_{q^b}
    QInt(i64, i64),
    /// [n r]_{q^b}
    QBin(i64, i64, i64),
    /// (sign · t^tpow · q^qshift; q^qstep)_count
    Poch { sign: i64, tpow: i32, qshift: i64, qstep: i64, count: i64 },
    /// Σ coeff · q^q t^t
    Poly(Vec<(i64, i32, i64)>),
    Prod(Vec<TableExpr>),
    Sum(Vec<TableExpr>),
    /// Exact quotient of two expressions; the divisor must be free of t.
    Quot(Box<TableExpr>, Box<TableExpr>),
}

pub fn table_expr(expr: &TableExpr) -> Result<QTSLaurent> {
    Ok(match expr {
        TableExpr::QInt(m, b) => qint(*m, *b),
        TableExpr::QBin(n, r, b) => qbinomial(*n, *r, *b),
        TableExpr::Poch { sign, tpow, qshift, qstep, count } => {
            if *sign != 1 && *sign != -1 || *count < 0 {
                return Err(Error::Malformed(format!("Pochhammer with sign {sign} and count {count}")));
            }
            poch(*sign, *tpow, *qshift, *qstep, *count)
        }
        TableExpr::Poly(terms) => {
            let mut out = QTSLaurent::zero();
            for &(q, t, c) in terms {
                out.add_term(q, t, 0, &rat_int(c));
            }
            out
        }
        TableExpr::Prod(items) => {
            let mut out = QTSLaurent::one();
            for it in items {
                out = out.mul(&table_expr(it)?);
            }
            out
        }
        TableExpr::Sum(items) => {
            let mut out = QTSLaurent::zero();
            for it in items {
                out = out.add(&table_expr(it)?);
            }
            out
        }
        TableExpr::Quot(a, b) => divide_exact(&table_expr(a)?, &table_expr(b)?)?,
    })
}

/// Long division by a t-free Laurent polynomial in q.
fn divide_exact(a: &QTSLaurent, b: &QTSLaurent) -> Result<QTSLaurent> {
    let (Some(blo), Some(bhi)) = (b.min_q(), b.max_q()) else {
        return Err(Error::DivisionByZero);
    };
    if b.terms().any(|(_, p)| p.len() != 1 || p.coeff(0, 0).is_zero()) {
        return Err(Error::Malformed("divisor must be a polynomial in q alone".into()));
    }
    let lead = b.coeff(bhi, 0, 0);
    let floor = a.min_q().unwrap_or(0) - blo;
    let mut rem = a.clone();
    let mut quot = QTSLaurent::zero();
    while let Some(top) = rem.max_q() {
        if top - bhi < floor {
            break;
        }
        let c = rem.q_slice(top).scale(&lead.recip());
        let mut step = QTSLaurent::zero();
        step.add_tspoly(top - bhi, &c);
        quot = quot.add(&step);
        rem = rem.sub(&b.mul(&step));
    }
    if !rem.is_zero() {
        return Err(Error::Integrity("quotient in a table expression is not exact".into()));
    }
    Ok(quot)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableEntry {
    pub group: String,
    pub r: usize,
    pub expr: TableExpr,
}

const TABLES: &str = include_str!("../data/tables.json");

pub fn tables() -> Result<Vec<TableEntry>> {
    serde_json::from_str(TABLES).map_err(|e| Error::Catalog(format!("tables: {e}")))
}

pub fn table_entries(group: &str) -> Result<Vec<TableEntry>> {
    Ok(tables()?.into_iter().filter(|t| t.group.eq_ignore_ascii_case(group)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(coeffs: &[i64]) -> QTSLaurent {
        QTSLaurent::from_q_coeffs(0, coeffs)
    }

    fn b2() -> NumerologyProfile {
        NumerologyProfile::coincidental_from(2, 1, 2)
    }

    #[test]
    fn rank_one_top_wedge() {
        let p = NumerologyProfile::coincidental_from(1, 1, 2);
        let f = main_theorem(&p, 1).unwrap();
        let mut num = QTSLaurent::qpow(1);
        num.add_term(0, 1, 0, &Rational::one());
        assert_eq!(f.expand(12), RationalForm::new(num, vec![2]).expand(12));
    }

    #[test]
    fn b2_wedge_one() {
        let f = main_theorem(&b2(), 1).unwrap();
        let num = q(&[0, 1, 0, 1]).mul(&one_plus(1, -1, 1, 0)).mul(&one_plus(1, 1, 1, 0));
        assert_eq!(f.expand(20), RationalForm::new(num, vec![2, 4]).expand(20));
    }

    #[test]
    fn refuses_non_coincidental() {
        let g24 = NumerologyProfile::new(vec![3, 5, 13], vec![1, 9, 11], true);
        assert!(matches!(main_theorem(&g24, 1), Err(Error::Refused(_))));
    }

    #[test]
    fn b2_h_values() {
        let h2 = fh_qt(&b2(), 2, Which::H).unwrap().substitute_t(5).to_polynomial().unwrap();
        assert_eq!(h2, QTSLaurent::one());
        let h0 = fh_qt(&b2(), 0, Which::H).unwrap().substitute_t(5).to_polynomial().unwrap();
        assert_eq!(h0, QTSLaurent::qpow(8));
    }

    #[test]
    fn f0_is_pochhammer_ratio() {
        let p = NumerologyProfile::coincidental_from(3, 2, 3);
        let f0 = main_theorem(&p, 0).unwrap();
        let want = RationalForm::new(poch(-1, 1, 2, 3, 3), vec![3, 6, 9]);
        assert_eq!(f0.expand(30), want.expand(30));
    }

    #[test]
    fn h_to_f_small() {
        assert!(h_to_f_check(&b2(), 25).unwrap().is_zero());
        let g312 = NumerologyProfile::coincidental_from(2, 2, 3);
        assert!(h_to_f_check(&g312, 25).unwrap().is_zero());
    }

    #[test]
    fn catalan_examples() {
        let a2 = NumerologyProfile::coincidental_from(2, 1, 1);
        let cat = catalan_family(&a2, 4, None, CatalanKind::Catalan, true).unwrap();
        assert_eq!(cat, q(&[1, 0, 1, 1, 1, 0, 1]));
        let nar = catalan_family(&b2(), 5, Some(1), CatalanKind::Narayana, true).unwrap();
        assert_eq!(nar, q(&[0, 0, 1, 0, 2, 0, 1]));
        assert!(catalan_family(&b2(), 4, None, CatalanKind::Catalan, true).is_err());
    }

    #[test]
    fn cluster_examples() {
        let a2 = NumerologyProfile::coincidental_from(2, 1, 1);
        let c1 = cluster_fh(&a2, 1).unwrap();
        assert_eq!((c1.f, c1.cluster_product), (5, 5));
        let c2 = cluster_fh(&b2(), 2).unwrap();
        assert_eq!((c2.f, c2.h), (1, 1));
        let c0 = cluster_fh(&a2, 0).unwrap();
        assert_eq!(c0.f, 5);
    }

    #[test]
    fn hook_content_examples() {
        let one = hook_content(&[1]).unwrap();
        assert_eq!(one.expand(10), RationalForm::new(one_plus(1, 0, 1, 0), vec![1]).expand(10));
        let hc = hook_content(&[2, 1]).unwrap();
        let num = QTSLaurent::qpow(1).mul(&one_plus(1, 0, 1, 0)).mul(&one_plus(1, 1, 1, 0)).mul(&one_plus(1, -1, 1, 0));
        assert_eq!(hc.expand(12), RationalForm::new(num, vec![3, 1, 1]).expand(12));
        assert_eq!(hook_content(&[]).unwrap().expand(5), QTSLaurent::one().with_cap(5));
    }

    #[test]
    fn hook_data_of_hooks() {
        // λ = (n−r, 1^r): n(λ) = C(r+1,2), contents 0..n−1−r and −1..−r, hooks 1..n and 1..r
        let (n, r) = (6u32, 2u32);
        let mut lam = vec![n - r];
        lam.extend(std::iter::repeat(1).take(r as usize));
        let (nl, cells) = ferrers(&lam);
        assert_eq!(nl, 3);
        let mut contents: Vec<i64> = cells.iter().map(|c| c.0).collect();
        let mut hooks: Vec<i64> = cells.iter().map(|c| c.1).collect();
        contents.sort_unstable();
        hooks.sort_unstable();
        assert_eq!(contents, vec![-2, -1, 0, 1, 2, 3]);
        assert_eq!(hooks, vec![1, 1, 2, 2, 3, 6]);
    }

    #[test]
    fn wreath_single_row() {
        let (d, n) = (3usize, 3u32);
        let lam = Multipartition::new(vec![vec![n], vec![], vec![]]).unwrap();
        let got = koike_wreath(&lam, d).unwrap();
        let mut num = QTSLaurent::one();
        let mut den = Vec::new();
        for i in 1..=n as i64 {
            num = num.mul(&one_plus(1, d as i64 - 1 + d as i64 * (i - 1), 1, 0));
            den.push(d as i64 * i);
        }
        assert_eq!(got.expand(30), RationalForm::new(num, den).expand(30));
        let empty = Multipartition::new(vec![vec![], vec![]]).unwrap();
        assert_eq!(koike_wreath(&empty, 2).unwrap().expand(5), QTSLaurent::one().with_cap(5));
    }

    #[test]
    fn wreath_matches_main_theorem() {
        for d in 2..=4usize {
            for n in 1..=3u32 {
                let p = NumerologyProfile::coincidental_from(n as usize, d as i64 - 1, d as i64);
                for r in 0..=n {
                    let k = koike_wreath(&Multipartition::wedge(d, n, r), d).unwrap();
                    let m = main_theorem(&p, r as usize).unwrap();
                    assert_eq!(k.expand(40), m.expand(40), "d={d} n={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn wedge_cases_at_e_one() {
        for d in 2..=3 {
            for n in 2..=3 {
                let p = NumerologyProfile::coincidental_from(n as usize, d - 1, d);
                for r in 0..=n {
                    let k = koike_deen_wedge(d, 1, n, r).unwrap();
                    assert_eq!(k.expand(40), main_theorem(&p, r as usize).unwrap().expand(40), "d={d} n={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn wedge_cases_match_orbit_sum() {
        for (d, e, n) in [(1usize, 2usize, 2u32), (2, 2, 2), (1, 3, 3), (1, 2, 3), (2, 2, 3), (1, 4, 2)] {
            for r in 0..=n {
                let lam = Multipartition::wedge(d * e, n, r);
                let want = restricted_wreath(&lam, d, e).unwrap();
                let got = koike_deen_wedge(d as i64, e as i64, n as i64, r as i64).unwrap();
                assert_eq!(got.expand(40), want.expand(40), "G({},{e},{n}) r={r}", d * e);
            }
        }
    }

    #[test]
    fn type_a_wedge_matches_main_theorem() {
        for n in 2..=5i64 {
            let p = NumerologyProfile::coincidental_from(n as usize - 1, 1, 1);
            for r in 0..n {
                assert_eq!(type_a_wedge(n, r).expand(30), main_theorem(&p, r as usize).unwrap().expand(30));
            }
        }
    }

    #[test]
    fn psi_prediction_examples() {
        assert_eq!(gutkin_opdam(2, 0, 0, 4, 4), 0);
        assert_eq!(gutkin_opdam(2, 1, 1, 4, 4), 8);
        assert_eq!(gutkin_opdam(2, 2, 2, 4, 4), 0);
    }

    #[test]
    fn table_grammar() {
        assert_eq!(table_expr(&TableExpr::QInt(3, 2)).unwrap(), q(&[1, 0, 1, 0, 1]));
        let quot = TableExpr::Quot(
            Box::new(TableExpr::Prod(vec![TableExpr::QInt(2, 5), TableExpr::QInt(2, 7)])),
            Box::new(TableExpr::QInt(2, 1)),
        );
        let got = table_expr(&quot).unwrap();
        assert_eq!(got.mul(&q(&[1, 1])), q(&[1, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1]));
        let bad = TableExpr::Quot(Box::new(TableExpr::QInt(2, 1)), Box::new(TableExpr::QInt(2, 2)));
        assert!(table_expr(&bad).is_err());
        for entry in tables().unwrap() {
            table_expr(&entry.expr).unwrap();
        }
    }
}
