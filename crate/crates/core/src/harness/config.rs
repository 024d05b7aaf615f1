use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::asymptotics::Thresholds;
use crate::error::{Error, Result};
use crate::operators::Expr;
use crate::series::SymbolSpec;

/// A grid of step indices, written `a:b:step` (arithmetic, inclusive),
/// `a:b:xk` (geometric with ratio `k`) or as an explicit list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NGrid(pub Vec<usize>);

impl NGrid {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// `lo, 2lo, 4lo, …` up to `hi`.
    pub fn doubling(lo: usize, hi: usize) -> Self {
        NGrid(
            std::iter::successors(Some(lo.max(1)), |n| Some(n * 2))
                .take_while(|n| *n <= hi)
                .collect(),
        )
    }
}

impl FromStr for NGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("cannot parse n-grid `{s}`"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let parts: Vec<&str> = s.split(':').collect();
        let values: Vec<usize> = match parts.as_slice() {
            [a, b, step] => {
                let (a, b) = (num(a)?, num(b)?);
                if let Some(ratio) = step.trim().strip_prefix('x') {
                    let r = num(ratio)?;
                    if r < 2 || a == 0 {
                        return Err(bad());
                    }
                    std::iter::successors(Some(a), |n| n.checked_mul(r))
                        .take_while(|n| *n <= b)
                        .collect()
                } else {
                    let step = num(step)?;
                    if step == 0 {
                        return Err(bad());
                    }
                    (a..=b).step_by(step).collect()
                }
            }
            [a, b] => (num(a)?..=num(b)?).collect(),
            _ => s.split(',').map(num).collect::<Result<_>>()?,
        };
        if values.is_empty() || values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid(format!(
                "n-grid `{s}` must be nonempty and increasing"
            )));
        }
        Ok(NGrid(values))
    }
}

impl fmt::Display for NGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for NGrid {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NGrid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            List(Vec<usize>),
            Spec(String),
        }
        match Raw::deserialize(d)? {
            Raw::List(v) => {
                if v.is_empty() || v.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(serde::de::Error::custom(
                        "n-grid must be nonempty and increasing",
                    ));
                }
                Ok(NGrid(v))
            }
            Raw::Spec(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Everything a run depends on. Equal configs give byte-identical reports.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub expression: Option<Expr>,
    /// Symbols for suites and scenarios; empty means the built-in registry.
    pub symbols: Vec<SymbolSpec>,
    pub n_grid: Option<NGrid>,
    pub cut_grid: Option<Vec<usize>>,
    pub window: Option<usize>,
    pub thresholds: Thresholds,
    /// Tail tolerance for compactness probes.
    pub tol: Option<f64>,
    pub seed: u64,
    /// `Some(true)` forces the rational path (irrational cases are skipped),
    /// `Some(false)` runs floats only, `None` uses rationals where possible.
    pub exact: Option<bool>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The configured symbols, or the registry when none are given.
    pub fn symbols_or_registry(&self) -> Vec<(String, SymbolSpec)> {
        if self.symbols.is_empty() {
            SymbolSpec::registry()
                .into_iter()
                .map(|(n, s)| (n.to_string(), s))
                .collect()
        } else {
            self.symbols
                .iter()
                .map(|s| (s.to_string(), s.clone()))
                .collect()
        }
    }
}
