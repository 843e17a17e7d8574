use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Cyclotomic;

use super::closure::GroupSpec;
use super::matrix::CycMatrix;

const EMBEDDED: &str = include_str!("../../data/catalog.json");

/// Environment variable naming an alternative catalog file.
pub const CATALOG_ENV: &str = "REFLECTIA_CATALOG";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub n: usize,
    pub m: u32,
    pub unitary: bool,
    pub expected_order: u64,
    pub expected_degrees: Vec<u32>,
    #[serde(default)]
    pub expected_coexponents: Option<Vec<u32>>,
    #[serde(default)]
    pub source: String,
    /// generators[g][row][col] = coefficients in the power basis of Q(ζ_m).
    pub generators: Vec<Vec<Vec<Vec<String>>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub groups: Vec<CatalogEntry>,
}

impl CatalogEntry {
    pub fn to_spec(&self) -> Result<GroupSpec> {
        let mut gens = Vec::new();
        for (gi, g) in self.generators.iter().enumerate() {
            if g.len() != self.n || g.iter().any(|row| row.len() != self.n) {
                return Err(Error::Catalog(format!("{}: generator {gi} is not {}x{}", self.name, self.n, self.n)));
            }
            let entries = g
                .iter()
                .flatten()
                .map(|c| Cyclotomic::from_strings(self.m, c))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Catalog(format!("{}: {e}", self.name)))?;
            gens.push(CycMatrix::from_entries(self.n, self.m, entries));
        }
        let spec = GroupSpec {
            name: self.name.clone(),
            n: self.n,
            m: self.m,
            generators: gens,
            expected_order: Some(self.expected_order),
            expected_degrees: Some(self.expected_degrees.clone()),
            expected_coexponents: self.expected_coexponents.clone(),
            unitary: self.unitary,
            irreducible: true,
        };
        spec.self_check()?;
        let deg_order: u64 = self.expected_degrees.iter().map(|&d| d as u64).product();
        if deg_order != self.expected_order {
            return Err(Error::Catalog(format!("{}: degrees do not multiply to the order", self.name)));
        }
        Ok(spec)
    }

    pub fn from_spec(spec: &GroupSpec, source: &str) -> Self {
        CatalogEntry {
            name: spec.name.clone(),
            n: spec.n,
            m: spec.m,
            unitary: spec.unitary,
            expected_order: spec.expected_order.unwrap_or(0),
            expected_degrees: spec.expected_degrees.clone().unwrap_or_default(),
            expected_coexponents: spec.expected_coexponents.clone(),
            source: source.to_string(),
            generators: spec
                .generators
                .iter()
                .map(|g| {
                    let g = g.embed(spec.m);
                    (0..spec.n).map(|i| (0..spec.n).map(|j| g.get(i, j).to_strings()).collect()).collect()
                })
                .collect(),
        }
    }
}

pub fn parse_catalog(text: &str) -> Result<Catalog> {
    serde_json::from_str(text).map_err(|e| Error::Catalog(e.to_string()))
}

/// The active catalog: the file named by REFLECTIA_CATALOG, else the embedded one.
pub fn catalog() -> Result<Catalog> {
    match std::env::var_os(CATALOG_ENV) {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Catalog(format!("{}: {e}", path.to_string_lossy())))?;
            parse_catalog(&text)
        }
        None => parse_catalog(EMBEDDED),
    }
}

pub fn load_catalog(name: &str) -> Result<GroupSpec> {
    let cat = catalog()?;
    let entry = cat
        .groups
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownGroup(name.to_string()))?;
    entry.to_spec()
}
