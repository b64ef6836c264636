//! Manifolds as bags of characteristic numbers, plus the built-in examples.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};
use crate::ring::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenusKind {
    Todd,
    Ahat,
    Lhat,
    Signature,
}

impl GenusKind {
    pub const ALL: [GenusKind; 4] = [GenusKind::Todd, GenusKind::Ahat, GenusKind::Lhat, GenusKind::Signature];

    pub fn name(self) -> &'static str {
        match self {
            GenusKind::Todd => "todd",
            GenusKind::Ahat => "ahat",
            GenusKind::Lhat => "lhat",
            GenusKind::Signature => "signature",
        }
    }
}

impl fmt::Display for GenusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "todd" => Ok(GenusKind::Todd),
            "ahat" => Ok(GenusKind::Ahat),
            "lhat" => Ok(GenusKind::Lhat),
            "signature" => Ok(GenusKind::Signature),
            other => Err(Error::InvalidArgument(format!("unknown genus `{other}`"))),
        }
    }
}

/// Characteristic data of a closed manifold.
///
/// `None` for a number map means "not known"; `Some(map)` means known, with
/// absent partitions standing for zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldData {
    pub name: String,
    pub real_dim: u32,
    pub complex_dim: Option<u32>,
    pub pontryagin_numbers: Option<BTreeMap<Partition, i64>>,
    pub chern_numbers: Option<BTreeMap<Partition, i64>>,
    pub spin: bool,
    pub string: bool,
    pub asserted: BTreeMap<GenusKind, Rational>,
}

impl ManifoldData {
    pub fn new(name: impl Into<String>, real_dim: u32) -> Self {
        ManifoldData {
            name: name.into(),
            real_dim,
            complex_dim: None,
            pontryagin_numbers: None,
            chern_numbers: None,
            spin: false,
            string: false,
            asserted: BTreeMap::new(),
        }
    }

    /// `real_dim / 4` when the dimension is a multiple of four.
    pub fn quarter_dim(&self) -> Option<u32> {
        (self.real_dim % 4 == 0).then_some(self.real_dim / 4)
    }

    pub fn is_complex(&self) -> bool {
        self.complex_dim.is_some()
    }

    /// Carries characteristic numbers (as opposed to asserted values only).
    pub fn has_full_data(&self) -> bool {
        self.pontryagin_numbers.is_some() || self.chern_numbers.is_some()
    }

    /// Checks every structural invariant; the error names the violated rule.
    pub fn validate(&self) -> Result<()> {
        let fail = |rule: String| Err(Error::InconsistentData(format!("{}: {rule}", self.name)));
        if self.name.trim().is_empty() {
            return fail("name must be non-empty".into());
        }
        if self.real_dim == 0 || self.real_dim % 2 == 1 {
            return fail(format!("real_dim {} must be positive and even", self.real_dim));
        }
        if let Some(n) = self.complex_dim {
            if 2 * n != self.real_dim {
                return fail(format!("real_dim {} must equal 2 * complex_dim {n}", self.real_dim));
            }
        }
        if self.string && !self.spin {
            return fail("string requires spin".into());
        }
        if let Some(chern) = &self.chern_numbers {
            let Some(n) = self.complex_dim else {
                return fail("chern_numbers require complex_dim".into());
            };
            for p in chern.keys() {
                if p.weight() != n {
                    return fail(format!("chern partition \"{p}\" must sum to complex_dim {n}"));
                }
            }
        }
        if let Some(pont) = &self.pontryagin_numbers {
            match self.quarter_dim() {
                Some(m) => {
                    for p in pont.keys() {
                        if p.weight() != m {
                            return fail(format!("pontryagin partition \"{p}\" must sum to real_dim/4 = {m}"));
                        }
                    }
                }
                None => {
                    if let Some(p) = pont.keys().next() {
                        return fail(format!(
                            "pontryagin partition \"{p}\" given but real_dim {} is not divisible by 4",
                            self.real_dim
                        ));
                    }
                }
            }
        }
        if !self.has_full_data() && self.asserted.is_empty() {
            return fail("needs pontryagin_numbers, chern_numbers or asserted genera".into());
        }
        Ok(())
    }
}

/// Shapes of the built-in manifolds, available without a catalog file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Complex projective space of the given complex dimension.
    Cp(u32),
    /// Sphere of the given (even) real dimension.
    Sphere(u32),
    /// Torus of the given (even) real dimension.
    Torus(u32),
    K3,
    Hp2,
}

impl Builtin {
    /// Parses `CP3`, `S6`, `T4`, `K3`, `HP2` (case-insensitive).
    pub fn from_name(name: &str) -> Option<Builtin> {
        let upper = name.to_ascii_uppercase();
        let num = |prefix: &str| upper.strip_prefix(prefix).and_then(|r| r.parse::<u32>().ok());
        match upper.as_str() {
            "K3" => Some(Builtin::K3),
            "HP2" => Some(Builtin::Hp2),
            _ => {
                if let Some(n) = num("CP") {
                    Some(Builtin::Cp(n))
                } else if let Some(n) = num("S") {
                    Some(Builtin::Sphere(n))
                } else {
                    num("T").map(Builtin::Torus)
                }
            }
        }
    }

    pub fn name(self) -> String {
        match self {
            Builtin::Cp(n) => format!("CP{n}"),
            Builtin::Sphere(n) => format!("S{n}"),
            Builtin::Torus(n) => format!("T{n}"),
            Builtin::K3 => "K3".into(),
            Builtin::Hp2 => "HP2".into(),
        }
    }
}

fn all_zero(weight: Option<u32>) -> BTreeMap<Partition, i64> {
    weight
        .map(|w| partitions_of(w).into_iter().map(|p| (p, 0)).collect())
        .unwrap_or_default()
}

fn binomial(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Fully populated characteristic data for a built-in manifold.
pub fn builtin(which: Builtin) -> Result<ManifoldData> {
    let mut m = match which {
        Builtin::Cp(n) => {
            if n == 0 {
                return Err(Error::DimensionError("CP0 is a point".into()));
            }
            // c = (1+h)^{n+1}, <h^n, [CP^n]> = 1
            let mut m = ManifoldData::new(which.name(), 2 * n);
            m.complex_dim = Some(n);
            m.chern_numbers = Some(
                partitions_of(n)
                    .into_iter()
                    .map(|p| {
                        let v = p.parts().iter().map(|&i| binomial(n + 1, i)).product();
                        (p, v)
                    })
                    .collect(),
            );
            m.spin = n % 2 == 1;
            m.string = n == 1;
            let converted = crate::genus::chern_to_pontryagin(&m)?;
            m.pontryagin_numbers = converted.pontryagin_numbers;
            m
        }
        Builtin::Sphere(n) | Builtin::Torus(n) => {
            if n == 0 || n % 2 == 1 {
                return Err(Error::DimensionError(format!(
                    "{} needs a positive even real dimension",
                    which.name()
                )));
            }
            let mut m = ManifoldData::new(which.name(), n);
            m.pontryagin_numbers = Some(all_zero(m.quarter_dim()));
            if matches!(which, Builtin::Torus(_)) {
                m.complex_dim = Some(n / 2);
                m.chern_numbers = Some(all_zero(Some(n / 2)));
            }
            m.spin = true;
            m.string = true;
            m
        }
        Builtin::K3 => {
            let mut m = ManifoldData::new("K3", 4);
            m.complex_dim = Some(2);
            m.chern_numbers = Some(BTreeMap::from([
                (Partition::new(vec![1, 1]), 0),
                (Partition::new(vec![2]), 24),
            ]));
            m.pontryagin_numbers = crate::genus::chern_to_pontryagin(&m)?.pontryagin_numbers;
            m.spin = true;
            m
        }
        Builtin::Hp2 => {
            let mut m = ManifoldData::new("HP2", 8);
            m.pontryagin_numbers = Some(BTreeMap::from([
                (Partition::new(vec![1, 1]), 4),
                (Partition::new(vec![2]), 7),
            ]));
            m.spin = true;
            m
        }
    };
    m.name = which.name();
    m.validate()?;
    Ok(m)
}

/// Looks a built-in up by name.
pub fn builtin_by_name(name: &str) -> Result<ManifoldData> {
    let which = Builtin::from_name(name).ok_or_else(|| Error::UnknownManifold(name.to_string()))?;
    builtin(which)
}
