//! The manifold catalog: a JSON file of [`ManifoldData`] entries, plus
//! name resolution that falls back to the built-ins and to `AxB` /
//! `A_sharp_B` constructions.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genus::{connected_sum, product};
use crate::manifold::{builtin, builtin_by_name, Builtin, GenusKind, ManifoldData};
use crate::partition::Partition;
use crate::ring::{format_rational, int, parse_rational};

pub const SCHEMA_VERSION: u32 = 1;
pub const CATALOG_ENV: &str = "GENUS_FORGE_CATALOG";

/// The catalog shipped with the crate.
pub const SHIPPED_CATALOG: &str = include_str!("../data/catalog.json");

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRepr {
    schema_version: u32,
    entries: Vec<EntryRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRepr {
    name: String,
    real_dim: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    complex_dim: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chern_numbers: Option<BTreeMap<Partition, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pontryagin_numbers: Option<BTreeMap<Partition, i64>>,
    spin: bool,
    string: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    asserted: Option<BTreeMap<String, String>>,
}

impl EntryRepr {
    fn from_data(m: &ManifoldData) -> Self {
        let asserted = (!m.asserted.is_empty()).then(|| {
            m.asserted
                .iter()
                .map(|(k, v)| (k.name().to_string(), format_rational(v)))
                .collect()
        });
        EntryRepr {
            name: m.name.clone(),
            real_dim: m.real_dim,
            complex_dim: m.complex_dim,
            chern_numbers: m.chern_numbers.clone(),
            pontryagin_numbers: m.pontryagin_numbers.clone(),
            spin: m.spin,
            string: m.string,
            asserted,
        }
    }

    fn into_data(self) -> Result<ManifoldData> {
        let mut asserted = BTreeMap::new();
        for (k, v) in self.asserted.unwrap_or_default() {
            let kind: GenusKind = k
                .parse()
                .map_err(|_| Error::InconsistentData(format!("{}: unknown asserted genus \"{k}\"", self.name)))?;
            let value = parse_rational(&v).ok_or_else(|| {
                Error::InconsistentData(format!("{}: asserted {k} value \"{v}\" is not a rational", self.name))
            })?;
            asserted.insert(kind, value);
        }
        let m = ManifoldData {
            name: self.name,
            real_dim: self.real_dim,
            complex_dim: self.complex_dim,
            pontryagin_numbers: self.pontryagin_numbers,
            chern_numbers: self.chern_numbers,
            spin: self.spin,
            string: self.string,
            asserted,
        };
        m.validate()?;
        Ok(m)
    }
}

/// One entry in the catalog file format.
pub fn entry_to_json(m: &ManifoldData) -> serde_json::Value {
    serde_json::to_value(EntryRepr::from_data(m)).expect("entry serializes")
}

/// A validated set of manifolds with unique names.
#[derive(Clone, Debug, PartialEq)]
pub struct Catalog {
    pub schema_version: u32,
    entries: Vec<ManifoldData>,
}

impl Catalog {
    pub fn new(entries: Vec<ManifoldData>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for m in &entries {
            m.validate()?;
            if !seen.insert(m.name.as_str()) {
                return Err(Error::InconsistentData(format!("{}: duplicate name", m.name)));
            }
        }
        Ok(Catalog {
            schema_version: SCHEMA_VERSION,
            entries,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: FileRepr = serde_json::from_str(text).map_err(|e| Error::CatalogParse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if repr.schema_version != SCHEMA_VERSION {
            return Err(Error::InconsistentData(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                repr.schema_version
            )));
        }
        let entries = repr.entries.into_iter().map(EntryRepr::into_data).collect::<Result<_>>()?;
        Catalog::new(entries)
    }

    /// Canonical serialization: fixed field order, sorted keys, two-space
    /// indentation and a trailing newline.
    pub fn to_json(&self) -> String {
        let repr = FileRepr {
            schema_version: self.schema_version,
            entries: self.entries.iter().map(EntryRepr::from_data).collect(),
        };
        let mut s = serde_json::to_string_pretty(&repr).expect("catalog serializes");
        s.push('\n');
        s
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn shipped() -> Self {
        Self::from_json(SHIPPED_CATALOG).expect("shipped catalog is valid")
    }

    /// The catalog named by `GENUS_FORGE_CATALOG`, or the shipped one.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CATALOG_ENV) {
            Some(path) => Self::load(path),
            None => Ok(Self::shipped()),
        }
    }

    pub fn entries(&self) -> &[ManifoldData] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&ManifoldData> {
        self.entries.iter().find(|m| m.name == name)
    }

    /// Looks `name` up in the catalog, then among the built-ins, then as a
    /// construction: `A_sharp_B` (connected sum) binds looser than `AxB`.
    pub fn resolve(&self, name: &str) -> Result<ManifoldData> {
        if let Some(m) = self.get(name) {
            return Ok(m.clone());
        }
        if let Some(b) = Builtin::from_name(name) {
            return builtin(b);
        }
        let mut built = if let Some((a, b)) = name.split_once("_sharp_") {
            connected_sum(&self.resolve(a)?, &self.resolve(b)?)?
        } else if let Some((a, b)) = split_product(name) {
            product(&self.resolve(a)?, &self.resolve(b)?)?
        } else {
            return Err(Error::UnknownManifold(name.to_string()));
        };
        built.name = name.to_string();
        Ok(built)
    }
}

/// Splits at the first `x` whose left side resolves to something nameable.
fn split_product(name: &str) -> Option<(&str, &str)> {
    name.match_indices('x')
        .map(|(i, _)| (&name[..i], &name[i + 1..]))
        .find(|(a, b)| !a.is_empty() && !b.is_empty())
}

/// True when one of the `x`-separated factors is a torus `T<n>`; connected
/// sums never count.
pub fn has_torus_factor(name: &str) -> bool {
    !name.contains("_sharp_")
        && name.split('x').any(|f| {
            f.strip_prefix('T')
                .is_some_and(|n| !n.is_empty() && n.bytes().all(|c| c.is_ascii_digit()))
        })
}

/// Entries of the shipped catalog, built from the genus calculus.
pub fn reference_entries() -> Result<Vec<ManifoldData>> {
    let t2 = builtin_by_name("T2")?;
    let t4 = builtin_by_name("T4")?;
    let s6 = builtin_by_name("S6")?;
    let hp2 = builtin_by_name("HP2")?;
    let k3 = builtin_by_name("K3")?;
    let cp1 = builtin_by_name("CP1")?;
    let cp2 = builtin_by_name("CP2")?;

    let mut b8 = ManifoldData::new("B8", 8);
    b8.spin = true;
    b8.asserted.insert(GenusKind::Ahat, int(1));

    let mut w24 = ManifoldData::new("W24", 24);
    w24.spin = true;
    w24.string = true;
    w24.asserted.insert(GenusKind::Ahat, int(0));

    let t2s6 = product(&t2, &s6)?;
    Ok(vec![
        t2.clone(),
        t4.clone(),
        builtin_by_name("T8")?,
        s6,
        t2s6.clone(),
        b8.clone(),
        w24,
        hp2.clone(),
        k3.clone(),
        cp2.clone(),
        product(&cp1, &cp1)?,
        product(&k3, &k3)?,
        product(&k3, &hp2)?,
        product(&hp2, &hp2)?,
        product(&k3, &t4)?,
        product(&hp2, &t4)?,
        product(&cp2, &cp2)?,
        connected_sum(&t2s6, &b8)?,
        connected_sum(&t2s6, &hp2)?,
    ])
}
