//! Polynomial differential forms S ⊗ ∧V* ⊗ ∧V, the θ̃ operator, the
//! arrangement polynomial Q and the rank-2 basis verification.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{rat_int, Cyclotomic, Rational};
use crate::groups::{generate, CycMatrix, GroupElements, GroupSpec, DEFAULT_CAP};

/// Polynomial in x₁, …, x_n over Q(ζ_m).
#[derive(Clone)]
pub struct MultiPoly {
    n: usize,
    m: u32,
    terms: BTreeMap<Vec<u32>, Cyclotomic>,
}

impl MultiPoly {
    pub fn zero(n: usize, m: u32) -> Self {
        MultiPoly { n, m, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: &Cyclotomic) -> Self {
        let m = c.order();
        let mut p = Self::zero(n, m);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn var(n: usize, m: u32, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        let mut p = Self::zero(n, m);
        p.add_term(e, &Cyclotomic::one(m));
        p
    }

    /// Σ_j a_j x_j.
    pub fn linear(coeffs: &[Cyclotomic], m: u32) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, m);
        for (j, a) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[j] = 1;
            p.add_term(e, a);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> Cyclotomic {
        self.terms.get(exp).cloned().unwrap_or_else(|| Cyclotomic::zero(self.m))
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: &Cyclotomic) {
        if c.is_zero() {
            return;
        }
        let c = self.lift(c);
        match self.terms.get_mut(&exp) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    /// Embeds into a common field, widening self if needed.
    fn lift(&mut self, c: &Cyclotomic) -> Cyclotomic {
        if self.m % c.order() != 0 {
            let m = crate::exactnum::lcm(self.m, c.order());
            self.terms = std::mem::take(&mut self.terms).into_iter().map(|(k, v)| (k, v.embed(m))).collect();
            self.m = m;
        }
        c.embed(self.m)
    }

    /// Total degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn add(&self, o: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly { n: self.n, m: self.m, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &Cyclotomic) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n, self.m);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &(c * k));
        }
        out
    }

    pub fn mul(&self, o: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n, self.m);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, &(ca * cb));
            }
        }
        out
    }

    /// ∂/∂x_i.
    pub fn deriv(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n, self.m);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, &c.scale(&rat_int(e[i] as i64)));
            }
        }
        out
    }

    /// Coefficientwise complex conjugation.
    pub fn conj(&self) -> MultiPoly {
        MultiPoly { n: self.n, m: self.m, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect() }
    }

    /// h̄(∂)(f): each monomial c·x^α of h acts as c̄·∂^α.
    pub fn apply_conj_operator(&self, f: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(f.n, f.m);
        for (alpha, c) in &self.terms {
            let mut g = f.clone();
            for (i, &a) in alpha.iter().enumerate() {
                for _ in 0..a {
                    g = g.deriv(i);
                }
            }
            out = out.add(&g.scale(&c.conj()));
        }
        out
    }

    /// f(l₁, …, l_n) for linear forms l_i.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n, self.m);
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|l| vec![MultiPoly::constant(self.n, &Cyclotomic::one(self.m)), l.clone()]).collect();
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(self.n, c);
            for (i, &a) in e.iter().enumerate() {
                while powers[i].len() <= a as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][a as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// (g·f)(x) = f(g⁻¹x).
    pub fn act(&self, g: &CycMatrix) -> Result<MultiPoly> {
        let ginv = g.inverse()?;
        let images: Vec<MultiPoly> = (0..self.n).map(|i| MultiPoly::linear(&row(&ginv, i), g.m())).collect();
        Ok(self.substitute(&images))
    }

    /// Scales so the largest exponent vector has coefficient 1.
    pub fn normalized(&self) -> Result<MultiPoly> {
        match self.terms.iter().next_back() {
            None => Ok(self.clone()),
            Some((_, c)) => Ok(self.scale(&c.inv()?)),
        }
    }

    /// Constant term, if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<Cyclotomic> {
        match self.degree() {
            None => Some(Cyclotomic::zero(self.m)),
            Some(0) => Some(self.coeff(&vec![0; self.n])),
            _ => None,
        }
    }

    /// Value at a point.
    pub fn eval(&self, point: &[Cyclotomic]) -> Cyclotomic {
        let mut powers: Vec<Vec<Cyclotomic>> = point.iter().map(|v| vec![Cyclotomic::one(v.order()), v.clone()]).collect();
        let mut acc = Cyclotomic::zero(self.m);
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &a) in e.iter().enumerate() {
                while powers[i].len() <= a as usize {
                    let next = powers[i].last().unwrap() * &point[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][a as usize];
            }
            acc = &acc + &term;
        }
        acc
    }

    /// FNV-1a of the rendering, for compact report witnesses.
    pub fn digest(&self) -> String {
        fnv(&self.to_string())
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, o: &Self) -> bool {
        if self.n != o.n || self.terms.len() != o.terms.len() {
            return false;
        }
        let m = crate::exactnum::lcm(self.m, o.m);
        self.terms.iter().zip(&o.terms).all(|((ea, ca), (eb, cb))| ea == eb && ca.embed(m) == cb.embed(m))
    }
}

impl Eq for MultiPoly {}

fn row(a: &CycMatrix, i: usize) -> Vec<Cyclotomic> {
    (0..a.n()).map(|j| a.get(i, j).clone()).collect()
}

fn fnv(s: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(i, &a)| if a == 1 { format!("x{}", i + 1) } else { format!("x{}^{a}", i + 1) })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Element of S ⊗ ∧V* ⊗ ∧V; basis x^α ⊗ x_K ⊗ y_R with K, R bitmasks in increasing order.
#[derive(Clone)]
pub struct MixedForm {
    n: usize,
    m: u32,
    parts: BTreeMap<(u32, u32), MultiPoly>,
}

impl PartialEq for MixedForm {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.parts == o.parts
    }
}

impl Eq for MixedForm {}

/// Sign of e_j ∧ e_K relative to e_{K∪j}; zero when j ∈ K.
fn insert_sign(j: usize, mask: u32) -> i64 {
    if mask & (1 << j) != 0 {
        return 0;
    }
    if (mask & ((1u32 << j) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of e_A ∧ e_B relative to e_{A∪B}; zero when they overlap.
fn wedge_sign(a: u32, b: u32) -> i64 {
    if a & b != 0 {
        return 0;
    }
    let mut sign = 1;
    let mut rest = a;
    while rest != 0 {
        let j = rest.trailing_zeros();
        if (b & ((1u32 << j) - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        rest &= rest - 1;
    }
    sign
}

impl MixedForm {
    pub fn zero(n: usize, m: u32) -> Self {
        MixedForm { n, m, parts: BTreeMap::new() }
    }

    /// f ⊗ x_K ⊗ y_R with K, R given as index lists in any order.
    pub fn term(f: &MultiPoly, k: &[usize], r: &[usize]) -> Self {
        let mut out = MixedForm::zero(f.n(), f.m());
        let (km, ks) = mask_of(k);
        let (rm, rs) = mask_of(r);
        if ks != 0 && rs != 0 {
            out.add_part(km, rm, &f.scale(&Cyclotomic::from_int(f.m(), ks * rs)));
        }
        out
    }

    /// Σ_j h_j ⊗ 1 ⊗ y_j.
    pub fn derivation(h: &[MultiPoly]) -> Self {
        let mut out = MixedForm::zero(h[0].n(), h[0].m());
        for (j, hj) in h.iter().enumerate() {
            out.add_part(0, 1 << j, hj);
        }
        out
    }

    /// Σ x_i ⊗ 1 ⊗ y_i.
    pub fn euler(n: usize, m: u32) -> Self {
        let h: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, m, i)).collect();
        Self::derivation(&h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Coefficient polynomial of x_K ⊗ y_R (bitmasks).
    pub fn part(&self, k: u32, r: u32) -> MultiPoly {
        self.parts.get(&(k, r)).cloned().unwrap_or_else(|| MultiPoly::zero(self.n, self.m))
    }

    pub fn parts(&self) -> impl Iterator<Item = (&(u32, u32), &MultiPoly)> {
        self.parts.iter()
    }

    fn add_part(&mut self, k: u32, r: u32, f: &MultiPoly) {
        if f.is_zero() {
            return;
        }
        let cur = self.part(k, r).add(f);
        self.m = self.m.max(cur.m());
        if cur.is_zero() {
            self.parts.remove(&(k, r));
        } else {
            self.parts.insert((k, r), cur);
        }
    }

    pub fn add(&self, o: &MixedForm) -> MixedForm {
        let mut out = self.clone();
        for (&(k, r), f) in &o.parts {
            out.add_part(k, r, f);
        }
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> MixedForm {
        let mut out = MixedForm::zero(self.n, self.m);
        for (&(k, r), f) in &self.parts {
            out.add_part(k, r, &f.scale(c));
        }
        out
    }

    /// Product in the graded-commutative algebra, with (f⊗η⊗η′)(g⊗ζ⊗ζ′) = ±fg⊗η∧ζ⊗η′∧ζ′,
    /// the sign (−1)^{|η′||ζ|} coming from moving ζ past η′.
    pub fn wedge(&self, o: &MixedForm) -> MixedForm {
        let mut out = MixedForm::zero(self.n, self.m);
        for (&(ka, ra), fa) in &self.parts {
            for (&(kb, rb), fb) in &o.parts {
                let s = wedge_sign(ka, kb) * wedge_sign(ra, rb);
                if s == 0 {
                    continue;
                }
                let koszul = if (ra.count_ones() * kb.count_ones()) % 2 == 1 { -1 } else { 1 };
                let c = Cyclotomic::from_int(fa.m().max(fb.m()), s * koszul);
                out.add_part(ka | kb, ra | rb, &fa.mul(fb).scale(&c));
            }
        }
        out
    }

    /// The h_j of a derivation Σ h_j ⊗ 1 ⊗ y_j.
    pub fn derivation_coeffs(&self) -> Result<Vec<MultiPoly>> {
        if self.parts.keys().any(|&(k, r)| k != 0 || r.count_ones() != 1) {
            return Err(Error::Malformed("not a derivation Σ h_j ⊗ 1 ⊗ y_j".into()));
        }
        Ok((0..self.n).map(|j| self.part(0, 1 << j)).collect())
    }

    /// g acting diagonally: polynomials by f ↦ f∘g⁻¹, x_i ↦ Σ_j (g⁻¹)_{ij} x_j, y_i ↦ Σ_j g_{ji} y_j.
    pub fn act(&self, g: &CycMatrix) -> Result<MixedForm> {
        let ginv = g.inverse()?;
        let n = self.n;
        let dual: Vec<Vec<Cyclotomic>> = (0..n).map(|i| row(&ginv, i)).collect();
        let prim: Vec<Vec<Cyclotomic>> = (0..n).map(|i| (0..n).map(|j| g.get(j, i).clone()).collect()).collect();
        let mut out = MixedForm::zero(n, self.m);
        for (&(k, r), f) in &self.parts {
            let gf = f.act(g)?;
            let kx = wedge_image(k, &dual, g.m());
            let ry = wedge_image(r, &prim, g.m());
            for (km, kc) in &kx {
                for (rm, rc) in &ry {
                    out.add_part(*km, *rm, &gf.scale(&(kc * rc)));
                }
            }
        }
        Ok(out)
    }

    /// Tests g·ω = ω without expanding g·ω: every part is compared at the points
    /// (1, k₂, …, k_n), 0 ≤ k_i ≤ D, which determine a homogeneous form of degree D.
    pub fn invariant_under(&self, g: &CycMatrix) -> Result<bool> {
        if self.parts.values().any(|f| !f.is_homogeneous()) {
            return Ok(self.act(g)? == *self);
        }
        let n = self.n;
        let m = crate::exactnum::lcm(self.m, g.m());
        let ginv = g.inverse()?;
        let dual: Vec<Vec<Cyclotomic>> = (0..n).map(|i| row(&ginv, i)).collect();
        let prim: Vec<Vec<Cyclotomic>> = (0..n).map(|i| (0..n).map(|j| g.get(j, i).clone()).collect()).collect();
        let mut images: Vec<((u32, u32), Vec<(u32, u32, Cyclotomic)>)> = Vec::new();
        for &(k, r) in self.parts.keys() {
            let mut lin = Vec::new();
            for (km, kc) in wedge_image(k, &dual, g.m()) {
                for (rm, rc) in wedge_image(r, &prim, g.m()) {
                    lin.push((km, rm, &kc * &rc));
                }
            }
            images.push(((k, r), lin));
        }
        let d = self.parts.values().filter_map(|f| f.degree()).max().unwrap_or(0) as i64;
        let mut idx = vec![0i64; n.saturating_sub(1)];
        loop {
            let mut point = vec![Cyclotomic::one(m)];
            point.extend(idx.iter().map(|&k| Cyclotomic::from_int(m, k)));
            let pulled = ginv.apply(&point);
            let mut lhs: BTreeMap<(u32, u32), Cyclotomic> = BTreeMap::new();
            for (key, lin) in &images {
                let v = self.parts[key].eval(&pulled);
                for (km, rm, c) in lin {
                    let e = lhs.entry((*km, *rm)).or_insert_with(|| Cyclotomic::zero(m));
                    *e = &*e + &(&v * c);
                }
            }
            lhs.retain(|_, c| !c.is_zero());
            let rhs: BTreeMap<(u32, u32), Cyclotomic> =
                self.parts.iter().map(|(k, f)| (*k, f.eval(&point))).filter(|(_, c)| !c.is_zero()).collect();
            if lhs.len() != rhs.len() || lhs.iter().zip(&rhs).any(|((ka, a), (kb, b))| ka != kb || a.embed(m) != b.embed(m)) {
                return Ok(false);
            }
            let mut i = 0;
            while i < idx.len() {
                idx[i] += 1;
                if idx[i] <= d {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == idx.len() {
                return Ok(true);
            }
        }
    }

    /// g ⊗ x_j ⊗ η′ ↦ g·x_j ⊗ 1 ⊗ η′ on the ∧¹V* part.
    pub fn contract_linear(&self) -> MixedForm {
        let mut out = MixedForm::zero(self.n, self.m);
        for (&(k, r), f) in &self.parts {
            if k.count_ones() == 1 {
                let j = k.trailing_zeros() as usize;
                out.add_part(0, r, &f.mul(&MultiPoly::var(self.n, f.m(), j)));
            }
        }
        out
    }
}

impl fmt::Debug for MixedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|(&(k, r), p)| format!("[{p}]⊗x{k:b}⊗y{r:b}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Bitmask and sign of the permutation sorting `idx`; sign 0 on repeats.
fn mask_of(idx: &[usize]) -> (u32, i64) {
    let mut mask = 0u32;
    for &i in idx {
        if mask & (1 << i) != 0 {
            return (mask, 0);
        }
        mask |= 1 << i;
    }
    let inversions = (0..idx.len()).flat_map(|a| (a + 1..idx.len()).map(move |b| (a, b))).filter(|&(a, b)| idx[a] > idx[b]).count();
    (mask, if inversions % 2 == 0 { 1 } else { -1 })
}

/// Expands v_{i₁} ∧ … ∧ v_{i_k} for i in `mask`, where v_i = Σ_j images[i][j] e_j.
fn wedge_image(mask: u32, images: &[Vec<Cyclotomic>], m: u32) -> Vec<(u32, Cyclotomic)> {
    let mut acc: BTreeMap<u32, Cyclotomic> = BTreeMap::new();
    acc.insert(0, Cyclotomic::one(m));
    let mut rest = mask;
    let mut pending = Vec::new();
    while rest != 0 {
        pending.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    // build e_{i₁} ∧ (e_{i₂} ∧ …) by prepending from the largest index down
    for &i in pending.iter().rev() {
        let mut next: BTreeMap<u32, Cyclotomic> = BTreeMap::new();
        for (&mk, c) in &acc {
            for (j, a) in images[i].iter().enumerate() {
                let s = insert_sign(j, mk);
                if s == 0 || a.is_zero() {
                    continue;
                }
                let v = &(c * a) * &Cyclotomic::from_int(m, s);
                let e = next.entry(mk | 1 << j).or_insert_with(|| Cyclotomic::zero(m));
                *e = &*e + &v;
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    acc.into_iter().collect()
}

/// θ̃(f ⊗ η ⊗ η′) = Σ_j h̄_j(∂)(f) ⊗ x_j ∧ η ⊗ η′ for θ = Σ h_j ⊗ 1 ⊗ y_j.
pub fn apply_theta_tilde(theta: &MixedForm, omega: &MixedForm) -> Result<MixedForm> {
    let h = theta.derivation_coeffs()?;
    let mut out = MixedForm::zero(omega.n, omega.m);
    for (&(k, r), f) in &omega.parts {
        for (j, hj) in h.iter().enumerate() {
            let s = insert_sign(j, k);
            if s == 0 || hj.is_zero() {
                continue;
            }
            let g = hj.apply_conj_operator(f);
            out.add_part(k | 1 << j, r, &g.scale(&Cyclotomic::from_int(g.m(), s)));
        }
    }
    Ok(out)
}

/// Linear form vanishing on the reflecting hyperplane of `s`: a nonzero row of s − 1.
fn hyperplane_form(s: &CycMatrix) -> Result<Vec<Cyclotomic>> {
    let d = s.sub(&CycMatrix::identity(s.n(), s.m()));
    let i = (0..s.n())
        .find(|&i| (0..s.n()).any(|j| !d.get(i, j).is_zero()))
        .ok_or_else(|| Error::Integrity("identity passed as a reflection".into()))?;
    let r = row(&d, i);
    let lead = r.iter().find(|c| !c.is_zero()).unwrap().inv()?;
    let form: Vec<Cyclotomic> = r.iter().map(|c| c * &lead).collect();
    for k in 0..s.n() {
        let rk = row(&d, k);
        let pivot = (0..s.n()).find(|&j| !form[j].is_zero()).unwrap();
        let ratio = &rk[pivot];
        if rk.iter().zip(&form).any(|(a, b)| *a != ratio * b) {
            return Err(Error::Integrity("reflection with a fixed space of codimension above 1".into()));
        }
    }
    Ok(form)
}

/// Reflecting hyperplanes as normalized linear forms, deduplicated.
pub fn hyperplane_forms(group: &GroupElements) -> Result<Vec<Vec<Cyclotomic>>> {
    let mut seen: Vec<Vec<Cyclotomic>> = Vec::new();
    for i in group.reflection_indices() {
        let f = hyperplane_form(&group.exact_element(i))?;
        if !seen.contains(&f) {
            seen.push(f);
        }
    }
    Ok(seen)
}

/// Q = ∏_H ℓ_H, normalized so the lexicographically largest monomial has coefficient 1.
pub fn arrangement_q(group: &GroupElements) -> Result<MultiPoly> {
    if !group.spec.unitary {
        return Err(Error::Refused(format!("{} is not given in a unitary basis", group.spec.name)));
    }
    let (n, m) = (group.n(), group.spec.m);
    let mut q = MultiPoly::constant(n, &Cyclotomic::one(m));
    for f in hyperplane_forms(group)? {
        q = q.mul(&MultiPoly::linear(&f, m));
    }
    q.normalized()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank2Report {
    pub group: String,
    pub order: u64,
    pub degree_q: u32,
    pub q: String,
    pub checks: Vec<CheckOutcome>,
    pub pass: bool,
}

fn outcome(name: &str, pass: bool, witness: String) -> CheckOutcome {
    CheckOutcome { name: name.to_string(), pass, witness }
}

/// Runs the four rank-2 basis checks.
pub fn rank2_verify(spec: &GroupSpec) -> Result<Rank2Report> {
    if spec.n != 2 || !spec.unitary {
        return Err(Error::Refused(format!("{} must be a unitary rank-2 group", spec.name)));
    }
    let group = generate(spec, DEFAULT_CAP)?;
    let q = arrangement_q(&group)?;
    let m = q.m();
    let deg = q.degree().unwrap_or(0);
    let top = 0b11u32;

    let qq = q.apply_conj_operator(&q);
    let scalar = qq.as_constant();
    let c1 = outcome("Q̄(∂)(Q) nonzero", scalar.as_ref().map_or(false, |c| !c.is_zero()), qq.digest());

    let (q1, q2) = (q.deriv(0), q.deriv(1));
    let theta1 = MixedForm::euler(2, m);
    let theta2 = MixedForm::derivation(&[q2.neg(), q1.clone()]);
    let big = theta1.wedge(&theta2);
    let deg_c = Cyclotomic::from_int(m, deg as i64);
    let expected_big = MixedForm::term(&q.scale(&deg_c), &[], &[0, 1]);
    let base = MixedForm::term(&q, &[], &[0, 1]);
    let omega1 = apply_theta_tilde(&theta1, &base)?;
    let omega2 = apply_theta_tilde(&theta2, &base)?;
    let shape_ok = big == expected_big
        && omega1.parts().all(|(&(k, r), _)| r == top && k.count_ones() == 1)
        && omega2.parts().all(|(&(k, r), _)| r == top && k.count_ones() == 1);

    // (iii): ω₂ = c·(x₁ ⊗ x₂ − x₂ ⊗ x₁) ⊗ y₁∧y₂
    let (a1, a2) = (omega2.part(0b01, top), omega2.part(0b10, top));
    let x1 = MultiPoly::var(2, m, 0);
    let x2 = MultiPoly::var(2, m, 1);
    let c = a2.coeff(&[1, 0]);
    let proportional = !c.is_zero() && a2 == x1.scale(&c) && a1 == x2.scale(&-&c);
    let c3 = outcome("ω₂ ∝ (x₁⊗x₂ − x₂⊗x₁)⊗y₁∧y₂", proportional, a1.digest() + &a2.digest());

    let det = if proportional {
        let inv = c.inv()?;
        let (b1, b2) = (a1.scale(&inv), a2.scale(&inv));
        omega1.part(0b01, top).mul(&b2).sub(&omega1.part(0b10, top).mul(&b1))
    } else {
        MultiPoly::zero(2, m)
    };
    let c2 = outcome("ω₁, ω₂ determinant = deg(Q)·Q", shape_ok && proportional && det == q.scale(&deg_c), det.digest());

    let mut invariant = true;
    for g in &spec.generators {
        for form in [&big, &omega1, &omega2] {
            if !form.invariant_under(g)? {
                invariant = false;
            }
        }
    }
    let c4 = outcome("generator invariance", invariant, String::new());

    let checks = vec![c1, c2, c3, c4];
    let pass = checks.iter().all(|c| c.pass);
    Ok(Rank2Report { group: spec.name.clone(), order: group.order(), degree_q: deg, q: q.to_string(), checks, pass })
}

/// Σ|c_α|²·α! as a complex number; real and positive for h ≠ 0.
pub fn positivity_kernel(h: &MultiPoly) -> Option<(f64, f64)> {
    h.apply_conj_operator(h).as_constant().map(|c| c.to_complex())
}

/// Euler check: contracting θ̃_E(f) recovers deg(f)·f.
pub fn euler_identity_holds(f: &MultiPoly) -> Result<bool> {
    let d = match f.degree() {
        None => return Ok(true),
        Some(d) => d,
    };
    let e = MixedForm::euler(f.n(), f.m());
    let df = apply_theta_tilde(&e, &MixedForm::term(f, &[], &[]))?;
    let back = df.contract_linear().part(0, 0);
    Ok(back == f.scale(&Cyclotomic::from_rational(f.m(), Rational::from_integer(d.into()))))
}

/// g·Q = det(g)⁻¹·Q for each generator, with Q = c∏ℓ_H: each g·ℓ_H must be
/// λ_H·ℓ_{H′} for a permutation H ↦ H′ of the hyperplanes, and ∏λ_H = det(g)⁻¹.
pub fn relative_invariance(spec: &GroupSpec, forms: &[Vec<Cyclotomic>]) -> Result<bool> {
    for g in &spec.generators {
        let ginv = g.inverse()?;
        let mut hit = vec![false; forms.len()];
        let mut scalar = Cyclotomic::one(spec.m);
        for f in forms {
            // g·ℓ has coefficient vector ℓ·g⁻¹
            let img: Vec<Cyclotomic> = (0..spec.n)
                .map(|j| (0..spec.n).fold(Cyclotomic::zero(spec.m), |acc, i| &acc + &(&f[i] * ginv.get(i, j))))
                .collect();
            let lead = match img.iter().find(|c| !c.is_zero()) {
                Some(c) => c.clone(),
                None => return Ok(false),
            };
            let inv = lead.inv()?;
            let normalized: Vec<Cyclotomic> = img.iter().map(|c| c * &inv).collect();
            match forms.iter().position(|h| *h == normalized) {
                Some(k) if !hit[k] => hit[k] = true,
                _ => return Ok(false),
            }
            scalar = &scalar * &lead;
        }
        if scalar != g.det().inv()?.embed(scalar.order()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_monomial, build_named_coxeter};

    fn group(name: &str) -> GroupElements {
        let spec = crate::groups::resolve_group(name).unwrap();
        generate(&spec, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn q_of_small_groups() {
        let z2 = generate(&build_monomial(2, 1, 1).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(arrangement_q(&z2).unwrap().to_string(), "(1)*x1");
        let swap = generate(&build_monomial(1, 1, 2).unwrap(), DEFAULT_CAP).unwrap();
        let q = arrangement_q(&swap).unwrap();
        assert_eq!(q.degree(), Some(1));
        assert_eq!(q.coeff(&[1, 0]), -&q.coeff(&[0, 1]));
        let b2 = arrangement_q(&group("G(2,1,2)")).unwrap();
        assert_eq!(b2.degree(), Some(4));
        // x₁x₂(x₁² − x₂²)
        assert_eq!(b2.terms().count(), 2);
        assert_eq!(b2.coeff(&[3, 1]), -&b2.coeff(&[1, 3]));
    }

    #[test]
    fn coxeter_refused() {
        let spec = build_named_coxeter("B2", 'B', 2, None).unwrap();
        let g = generate(&spec, DEFAULT_CAP).unwrap();
        assert!(matches!(arrangement_q(&g), Err(Error::Refused(_))));
    }

    #[test]
    fn exterior_derivative() {
        let m = 1;
        let x1 = MultiPoly::var(2, m, 0);
        let x2 = MultiPoly::var(2, m, 1);
        let f = x1.mul(&x1).mul(&x2);
        let df = apply_theta_tilde(&MixedForm::euler(2, m), &MixedForm::term(&f, &[], &[])).unwrap();
        assert_eq!(df.part(0b01, 0), f.deriv(0));
        assert_eq!(df.part(0b10, 0), f.deriv(1));
        assert!(euler_identity_holds(&f).unwrap());
    }

    #[test]
    fn wedge_signs() {
        let one = MultiPoly::constant(2, &Cyclotomic::one(1));
        let y1 = MixedForm::term(&one, &[], &[0]);
        let y2 = MixedForm::term(&one, &[], &[1]);
        assert_eq!(y2.wedge(&y1), MixedForm::term(&one, &[], &[0, 1]).scale(&Cyclotomic::from_int(1, -1)));
        assert_eq!(MixedForm::term(&one, &[1, 0], &[]), MixedForm::term(&one, &[0, 1], &[]).scale(&Cyclotomic::from_int(1, -1)));
        assert!(y1.wedge(&y1).is_zero());
    }

    #[test]
    fn top_form_scalar() {
        let g = group("G(3,1,2)");
        let q = arrangement_q(&g).unwrap();
        let (q1, q2) = (q.deriv(0), q.deriv(1));
        let t1 = MixedForm::euler(2, q.m());
        let t2 = MixedForm::derivation(&[q2.neg(), q1]);
        let w = t1.wedge(&t2);
        let out = apply_theta_tilde(&t1, &apply_theta_tilde(&t2, &w).unwrap()).unwrap();
        let top = out.part(0b11, 0b11);
        assert!(top.as_constant().map_or(false, |c| !c.is_zero()));
    }

    #[test]
    fn rank2_examples() {
        for name in ["G4", "G(3,1,2)", "G(4,4,2)"] {
            let spec = crate::groups::resolve_group(name).unwrap();
            let rep = rank2_verify(&spec).unwrap();
            assert!(rep.pass, "{name}: {:?}", rep.checks);
        }
    }

    #[test]
    fn q_relative_invariant() {
        for name in ["G(3,1,2)", "G4", "G(4,2,2)"] {
            let g = group(name);
            let forms = hyperplane_forms(&g).unwrap();
            assert!(relative_invariance(&g.spec, &forms).unwrap(), "{name}");
            let q = arrangement_q(&g).unwrap();
            for h in &g.spec.generators {
                assert_eq!(q.act(h).unwrap(), q.scale(&h.det().inv().unwrap()), "{name}");
            }
        }
    }
}
