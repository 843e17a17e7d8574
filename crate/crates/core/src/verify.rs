//! Brute force against closed forms and tables, group by group.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{gutkin_opdam, koike_deen_wedge, main_theorem, table_entries, table_expr};
use crate::groups::{
    catalog, declared_profile, generate_checked, DEFAULT_CAP, parse_monomial, resolve_group, GroupElements, GroupSpec, NumerologyProfile,
};
use crate::molien::{molien, psi_from_nu, slice_checks, MolienResult};
use crate::qseries::{prod_one_minus, QTSLaurent, RationalForm};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ROutcome {
    pub r: usize,
    /// "theorem", "table", "wedge" or "boundary".
    pub source: String,
    pub brute: String,
    pub expected: String,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiCheck {
    pub r: usize,
    pub k: usize,
    pub psi: i64,
    pub predicted: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub group: String,
    pub order: u64,
    pub profile: NumerologyProfile,
    pub per_r: Vec<ROutcome>,
    pub slice_checks: Vec<NamedCheck>,
    pub psi_checks: Vec<PsiCheck>,
    pub numerology: NamedCheck,
    /// Wall-clock time; kept out of JSON so reports are reproducible byte for byte.
    #[serde(skip)]
    pub millis: u128,
    pub pass: bool,
}

/// Closed form times ∏(1 − q^{d_i}), divided exactly.
fn nu_of_form(form: &RationalForm, degrees: &[i64]) -> Result<QTSLaurent> {
    RationalForm::new(form.num.mul(&prod_one_minus(degrees)), form.den.clone()).to_polynomial()
}

fn boundary(p: &NumerologyProfile, r: usize) -> Option<QTSLaurent> {
    let mut out = QTSLaurent::one();
    if r == 0 {
        for &e in &p.exponents {
            out = out.mul(&crate::qseries::one_plus(1, e, 1, 0));
        }
        return Some(out);
    }
    if r == p.n {
        for &e in &p.coexponents {
            let mut f = QTSLaurent::qpow(e);
            f.add_term(0, 1, 0, &num_traits::One::one());
            out = out.mul(&f);
        }
        return Some(out);
    }
    None
}

/// Expected ν_r from the first applicable source: the coincidental closed form,
/// a shipped table row, the wedge formula for G(de,e,n), or the ν_0/ν_n products.
pub fn expected_nu(name: &str, p: &NumerologyProfile, r: usize) -> Result<Option<(String, QTSLaurent)>> {
    if p.coincidental {
        return Ok(Some(("theorem".into(), nu_of_form(&main_theorem(p, r)?, &p.degrees)?)));
    }
    if let Some(entry) = table_entries(name)?.into_iter().find(|e| e.r == r) {
        return Ok(Some(("table".into(), table_expr(&entry.expr)?)));
    }
    if let Some((d, e, n)) = parse_monomial(name) {
        if n >= 2 && d * e >= 2 {
            let f = koike_deen_wedge(d as i64, e as i64, n as i64, r as i64)?;
            return Ok(Some(("wedge".into(), nu_of_form(&f, &p.degrees)?)));
        }
    }
    Ok(boundary(p, r).map(|b| ("boundary".into(), b)))
}

/// Closed-form ν_r for a named group using its declared numerology; no group elements are generated.
pub fn closed_form(name: &str, r: usize) -> Result<(String, QTSLaurent)> {
    let spec = resolve_group(name)?;
    let p = declared_profile(&spec).ok_or_else(|| Error::Refused(format!("{} has no declared numerology", spec.name)))?;
    if r > p.n {
        return Err(Error::Malformed(format!("r = {r} exceeds rank {}", p.n)));
    }
    expected_nu(&spec.name, &p, r)?
        .ok_or_else(|| Error::Refused(format!("no closed form for ν_{r} of {}", spec.name)))
}

fn numerology_check(spec: &GroupSpec, p: &NumerologyProfile) -> NamedCheck {
    let degrees: Vec<i64> = p.degrees.clone();
    let deg_ok = spec.expected_degrees.as_ref().map_or(true, |d| d.iter().map(|&x| x as i64).collect::<Vec<_>>() == degrees);
    let co_ok = spec
        .expected_coexponents
        .as_ref()
        .map_or(true, |c| c.iter().map(|&x| x as i64).collect::<Vec<_>>() == p.coexponents);
    let order_ok = spec.expected_order.map_or(true, |o| o == p.order());
    NamedCheck { name: "numerology".into(), pass: deg_ok && co_ok && order_ok }
}

/// Every check for an already generated group.
pub fn verify_elements(name: &str, group: &GroupElements) -> Result<VerifyReport> {
    let start = Instant::now();
    let res: MolienResult = molien(group)?;
    let p = res.profile.clone();
    let mut per_r = Vec::new();
    for r in 0..=p.n {
        if let Some((source, want)) = expected_nu(name, &p, r)? {
            let got = &res.nu[r];
            per_r.push(ROutcome { r, source, brute: got.render(), expected: want.render(), equal: *got == want });
        }
    }
    let slice: Vec<NamedCheck> = slice_checks(&res).into_iter().map(|(name, pass)| NamedCheck { name, pass }).collect();
    let mut psi_checks = Vec::new();
    for r in 0..=p.n {
        for k in 0..=p.n {
            let psi = psi_from_nu(&res.nu[r], k as i32);
            let predicted = gutkin_opdam(p.n as i64, k as i64, r as i64, p.big_n, p.big_n_star);
            psi_checks.push(PsiCheck { r, k, psi, predicted, pass: psi == predicted });
        }
    }
    let numerology = numerology_check(&group.spec, &p);
    let pass = per_r.iter().all(|o| o.equal)
        && slice.iter().all(|c| c.pass)
        && psi_checks.iter().all(|c| c.pass)
        && numerology.pass;
    Ok(VerifyReport {
        group: name.to_string(),
        order: group.order(),
        profile: p,
        per_r,
        slice_checks: slice,
        psi_checks,
        numerology,
        millis: start.elapsed().as_millis(),
        pass,
    })
}

pub fn verify_group(name: &str, allow_large: bool) -> Result<VerifyReport> {
    let spec = resolve_group(name)?;
    let start = Instant::now();
    let group = generate_checked(&spec, allow_large)?;
    let mut rep = verify_elements(&spec.name, &group)?;
    rep.millis = start.elapsed().as_millis();
    Ok(rep)
}

/// The constructed groups in the default suite; catalog groups are added by `suite`.
pub const CONSTRUCTED: &[&str] = &[
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "H3", "H4", "F4", "E6", "E7",
    "I2(5)", "I2(6)", "I2(7)", "I2(8)", "I2(9)", "I2(10)", "I2(11)", "I2(12)",
    "G(2,1,1)", "G(3,1,1)", "G(4,1,1)",
    "G(2,1,2)", "G(3,1,2)", "G(4,1,2)", "G(2,1,3)", "G(3,1,3)", "G(4,1,3)", "G(2,1,4)", "G(3,1,4)", "G(4,1,4)",
    "G(2,2,2)", "G(2,2,3)", "G(2,2,4)", "G(3,3,2)", "G(3,3,3)", "G(4,4,2)", "G(4,2,2)", "G(4,4,3)", "G(6,2,2)", "G(6,3,3)",
];

/// Groups whose brute-force run takes tens of seconds; only in the suite on request.
pub const SLOW: &[&str] = &["E7"];

/// Suite names with known order ≤ `max_order` (unknown orders are kept).
/// Groups beyond the element cap never appear.
pub fn suite(max_order: Option<u64>, include_slow: bool) -> Result<Vec<String>> {
    let mut names: Vec<(String, Option<u64>)> = Vec::new();
    for n in CONSTRUCTED {
        let spec = resolve_group(n)?;
        names.push((spec.name.clone(), spec.expected_order));
    }
    for entry in catalog()?.groups.iter() {
        let spec = entry.to_spec()?;
        names.push((spec.name.clone(), spec.expected_order));
    }
    names.retain(|(n, o)| {
        let fits = match (max_order, o) {
            (Some(cap), Some(o)) => *o <= cap,
            _ => true,
        };
        fits && o.map_or(true, |o| o <= DEFAULT_CAP as u64) && (include_slow || !SLOW.contains(&n.as_str()))
    });
    let mut out: Vec<String> = names.into_iter().map(|(n, _)| n).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Runs `verify_group` in parallel; results come back sorted by name.
/// Groups refused by the size policy are reported as errors, not skipped.
pub fn verify_all(names: &[String], allow_large: bool) -> Vec<(String, Result<VerifyReport>)> {
    let mut out: Vec<(String, Result<VerifyReport>)> =
        names.par_iter().map(|n| (n.clone(), verify_group(n, allow_large))).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

impl VerifyReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        out.extend(self.per_r.iter().filter(|o| !o.equal).map(|o| format!("ν_{} vs {}", o.r, o.source)));
        out.extend(self.slice_checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()));
        out.extend(self.psi_checks.iter().filter(|c| !c.pass).map(|c| format!("ψ(r={}, k={})", c.r, c.k)));
        if !self.numerology.pass {
            out.push("numerology".into());
        }
        out
    }
}

/// Unknown groups map to exit code 2 in the CLI.
pub fn is_unknown_group(e: &Error) -> bool {
    matches!(e, Error::UnknownGroup(_))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogCheck {
    pub name: String,
    pub declared_order: u64,
    /// None when the group is too large to generate.
    pub generated_order: Option<u64>,
    pub numerology: Option<bool>,
    pub error: Option<String>,
    pub pass: bool,
}

/// Parses every catalog entry; entries of order ≤ `max_order` are also generated
/// and their recovered numerology compared with the declared data.
pub fn check_catalog(max_order: u64) -> Result<Vec<CatalogCheck>> {
    let cat = catalog()?;
    let mut out: Vec<CatalogCheck> = cat
        .groups
        .par_iter()
        .map(|entry| {
            let mut c = CatalogCheck {
                name: entry.name.clone(),
                declared_order: entry.expected_order,
                generated_order: None,
                numerology: None,
                error: None,
                pass: false,
            };
            let mut run = || -> Result<()> {
                let spec = entry.to_spec()?;
                if entry.expected_order > max_order {
                    return Ok(());
                }
                let group = generate_checked(&spec, false)?;
                c.generated_order = Some(group.order());
                let res = molien(&group)?;
                c.numerology = Some(numerology_check(&spec, &res.profile).pass);
                Ok(())
            };
            match run() {
                Ok(()) => c.pass = c.generated_order.map_or(true, |o| o == c.declared_order) && c.numerology != Some(false),
                Err(e) => c.error = Some(e.to_string()),
            }
            c
        })
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}
