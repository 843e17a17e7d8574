//! Reflection groups as matrix groups over cyclotomic fields.

mod catalog;
mod closure;
mod construct;
mod matrix;
pub mod modp;
mod numerology;

pub use catalog::{catalog, load_catalog, parse_catalog, Catalog, CatalogEntry, CATALOG_ENV};
pub use closure::{generate, is_reflection_poly, EigenBucket, GroupElements, GroupSpec, DEFAULT_CAP, LARGE_ORDER};
pub use construct::{build_coxeter, build_monomial, build_named_coxeter, coxeter_type, monomial_numerology};
pub use matrix::{bareiss_det, char_data, CharTriple, CycMatrix, CycPoly};
pub use numerology::{recover_numerology, NumerologyProfile};

use crate::error::{Error, Result};

/// Exceptional names that coincide with Coxeter types.
const ALIASES: &[(&str, &str)] = &[("G23", "H3"), ("G28", "F4"), ("G30", "H4"), ("G35", "E6"), ("G36", "E7"), ("G37", "E8")];

/// Parses "G(m,p,n)" into (d, e, n) with m = de, p = e.
pub fn parse_monomial(name: &str) -> Option<(u32, u32, usize)> {
    let inner = name.strip_prefix("G(")?.strip_suffix(')')?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return None;
    }
    let m: u32 = parts[0].parse().ok()?;
    let p: u32 = parts[1].parse().ok()?;
    let n: usize = parts[2].parse().ok()?;
    (m >= 1 && p >= 1 && n >= 1 && m % p == 0).then_some((m / p, p, n))
}

fn parse_coxeter(name: &str) -> Option<(char, usize, Option<u32>)> {
    if let Some(rest) = name.strip_prefix("I2(") {
        let k: u32 = rest.strip_suffix(')')?.parse().ok()?;
        return Some(('I', 2, Some(k)));
    }
    let mut chars = name.chars();
    let f = chars.next()?;
    if !"ABDEFH".contains(f) {
        return None;
    }
    let r: usize = chars.as_str().parse().ok()?;
    Some((f, r, None))
}

/// Resolves constructor syntax ("G(3,1,2)", "B3", "I2(7)") or a catalog name ("G24").
pub fn resolve_group(name: &str) -> Result<GroupSpec> {
    let name = name.trim();
    let name = ALIASES.iter().find(|(a, _)| a.eq_ignore_ascii_case(name)).map_or(name, |(_, b)| b);
    if let Some((d, e, n)) = parse_monomial(name) {
        return build_monomial(d, e, n);
    }
    if let Some((f, r, p)) = parse_coxeter(name) {
        return build_named_coxeter(name, f, r, p);
    }
    load_catalog(name)
}

/// Profile from the declared degrees and coexponents, without generating the group.
pub fn declared_profile(spec: &GroupSpec) -> Option<NumerologyProfile> {
    let exps = spec.expected_degrees.as_ref()?.iter().map(|&d| d as i64 - 1).collect();
    let coexps = spec.expected_coexponents.as_ref()?.iter().map(|&c| c as i64).collect();
    Some(NumerologyProfile::new(exps, coexps, spec.irreducible))
}

/// Closure with the size policy: groups above LARGE_ORDER need `allow_large`,
/// and anything beyond the element cap is refused outright.
pub fn generate_checked(spec: &GroupSpec, allow_large: bool) -> Result<GroupElements> {
    if let Some(o) = spec.expected_order {
        if o > DEFAULT_CAP as u64 {
            return Err(Error::Refused(format!("{} has {o} elements; closed forms only", spec.name)));
        }
        if o > LARGE_ORDER && !allow_large {
            return Err(Error::Refused(format!("{} has {o} elements; pass the large-group flag", spec.name)));
        }
    }
    generate(spec, DEFAULT_CAP)
}
