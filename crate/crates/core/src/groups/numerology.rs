use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::{prod_one_minus, QTSLaurent};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumerologyProfile {
    pub n: usize,
    pub degrees: Vec<i64>,
    pub exponents: Vec<i64>,
    pub coexponents: Vec<i64>,
    pub h: i64,
    #[serde(rename = "N")]
    pub big_n: i64,
    #[serde(rename = "N_star")]
    pub big_n_star: i64,
    pub e1: i64,
    pub gap: Option<i64>,
    pub irreducible: bool,
    pub duality: bool,
    pub coincidental: bool,
}

impl NumerologyProfile {
    pub fn new(exponents: Vec<i64>, coexponents: Vec<i64>, irreducible: bool) -> Self {
        let mut exponents = exponents;
        let mut coexponents = coexponents;
        exponents.sort_unstable();
        coexponents.sort_unstable();
        let n = exponents.len();
        let degrees: Vec<i64> = exponents.iter().map(|e| e + 1).collect();
        let h = degrees.last().copied().unwrap_or(0);
        let gap = match n {
            0 | 1 => None,
            _ => {
                let a = exponents[1] - exponents[0];
                exponents.windows(2).all(|w| w[1] - w[0] == a).then_some(a)
            }
        };
        let duality = n > 0 && (0..n).all(|i| exponents[i] + coexponents[n - 1 - i] == h);
        let coincidental = irreducible && duality && (n == 1 || gap.map_or(false, |a| a > 0));
        NumerologyProfile {
            n,
            h,
            big_n: exponents.iter().sum(),
            big_n_star: coexponents.iter().sum(),
            e1: exponents.first().copied().unwrap_or(0),
            degrees,
            exponents,
            coexponents,
            gap,
            irreducible,
            duality,
            coincidental,
        }
    }

    /// Coincidental profile from (n, e₁, a): exponents e₁, e₁+a, …; coexponents by duality.
    pub fn coincidental_from(n: usize, e1: i64, a: i64) -> Self {
        let exps: Vec<i64> = (0..n as i64).map(|i| e1 + i * a).collect();
        let h = exps.last().unwrap() + 1;
        let coexps: Vec<i64> = exps.iter().rev().map(|e| h - e).collect();
        let mut p = Self::new(exps, coexps, true);
        if n == 1 {
            p.gap = Some(a);
        }
        p
    }

    /// Gap used by the coincidental formulas; n = 1 profiles accept any gap.
    pub fn gap_or(&self, fallback: i64) -> i64 {
        self.gap.unwrap_or(fallback)
    }

    /// Default truncation: N + N* + max d + 1.
    pub fn default_cap(&self) -> i64 {
        self.big_n + self.big_n_star + self.h + 1
    }

    pub fn order(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).product()
    }

    pub fn is_real_like(&self) -> bool {
        self.exponents == self.coexponents
    }
}

fn q_coeff_int(s: &QTSLaurent, q: i64, t: i32, sdeg: i32) -> Result<i64> {
    let c = s.coeff(q, t, sdeg);
    if !c.is_integer() {
        return Err(Error::Integrity(format!("non-integral series coefficient {c}")));
    }
    c.to_integer().to_i64().ok_or(Error::Overflow("series coefficient"))
}

/// Reads off q-exponents with multiplicity from a polynomial Σ c_k q^k.
fn exponents_from_poly(p: &QTSLaurent, n: usize, what: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for (&q, poly) in p.terms() {
        let c = poly.coeff(0, 0);
        if c.is_zero() {
            continue;
        }
        let k = c.to_integer().to_i64().filter(|&k| k > 0 && c.is_integer()).ok_or_else(|| {
            Error::Integrity(format!("{what}: coefficient {c} at q^{q} is not a positive integer"))
        })?;
        out.extend(std::iter::repeat(q).take(k as usize));
    }
    if out.len() != n {
        return Err(Error::CapTooSmall(format!("{what}: found {} values, expected {n}", out.len())));
    }
    Ok(out)
}

/// Degrees, exponents and coexponents from a capped triply-graded series.
pub fn recover_numerology(molien: &QTSLaurent, n: usize) -> Result<NumerologyProfile> {
    let cap = molien.cap().ok_or_else(|| Error::CapTooSmall("series must be capped".into()))?;
    let base = molien.s_slice(0).t_slice(0);
    let mut running = base.clone();
    let mut degrees = Vec::new();
    for _ in 0..n {
        let next = (1..=cap).find(|&k| !running.coeff(k, 0, 0).is_zero());
        let Some(d) = next else {
            return Err(Error::CapTooSmall(format!("found only {} degrees below cap {cap}", degrees.len())));
        };
        degrees.push(d);
        running = running.mul(&prod_one_minus(&[d]));
    }
    for k in 0..=cap {
        let want = (k == 0) as i64;
        if q_coeff_int(&running, k, 0, 0)? != want {
            return Err(Error::CapTooSmall(format!("invariant series is not ∏ 1/(1−q^d) with {n} degrees up to cap {cap}")));
        }
    }
    let h = *degrees.iter().max().unwrap_or(&0);
    if cap < 2 * h {
        return Err(Error::CapTooSmall(format!("cap {cap} below twice the largest degree {h}")));
    }
    let den = prod_one_minus(&degrees);
    let exps_series = molien.t_slice(1).s_slice(0).mul(&den);
    let coexps_series = molien.t_slice(0).s_slice(1).mul(&den);
    let exponents = exponents_from_poly(&exps_series, n, "exponents")?;
    let coexponents = exponents_from_poly(&coexps_series, n, "coexponents")?;
    let mut sorted_deg = degrees.clone();
    sorted_deg.sort_unstable();
    let mut from_exps: Vec<i64> = exponents.iter().map(|e| e + 1).collect();
    from_exps.sort_unstable();
    if from_exps != sorted_deg {
        return Err(Error::Integrity(format!("exponents {exponents:?} inconsistent with degrees {sorted_deg:?}")));
    }
    let irreducible = q_coeff_int(molien, 0, 1, 1)? == 1;
    Ok(NumerologyProfile::new(exponents, coexponents, irreducible))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_fields() {
        let b2 = NumerologyProfile::new(vec![1, 3], vec![1, 3], true);
        assert_eq!(b2.degrees, vec![2, 4]);
        assert_eq!((b2.h, b2.big_n, b2.big_n_star, b2.e1, b2.gap), (4, 4, 4, 1, Some(2)));
        assert!(b2.duality && b2.coincidental);
        let g24 = NumerologyProfile::new(vec![3, 5, 13], vec![1, 9, 11], true);
        assert!(g24.duality);
        assert!(!g24.coincidental);
        let c = NumerologyProfile::coincidental_from(3, 2, 3);
        assert_eq!(c.exponents, vec![2, 5, 8]);
        assert_eq!(c.coexponents, vec![1, 4, 7]);
    }
}
