use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::special::{HarmonicIndex, C64};

/// Magnitude below which a coefficient is treated as absent when deriving parity.
pub const PARITY_THRESHOLD: f64 = 1e-14;

/// Parity content of a coefficient table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "mixed",
        }
    }
}

/// Which orbital numbers a projection keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityFilter {
    Even,
    Odd,
    All,
}

impl ParityFilter {
    pub fn admits(self, l: u32) -> bool {
        match self {
            ParityFilter::Even => l % 2 == 0,
            ParityFilter::Odd => l % 2 == 1,
            ParityFilter::All => true,
        }
    }
}

impl std::str::FromStr for ParityFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Self::Even),
            "odd" => Ok(Self::Odd),
            "all" | "mixed" => Ok(Self::All),
            other => Err(Error::Parse(format!("unknown parity '{other}'"))),
        }
    }
}

/// Dense table of expansion coefficients `a_lm` for `l <= l_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicCoefficients {
    l_max: u32,
    values: Vec<C64>,
}

impl HarmonicCoefficients {
    pub fn zeros(l_max: u32) -> Self {
        let n = (l_max as usize + 1).pow(2);
        Self { l_max, values: vec![C64::new(0.0, 0.0); n] }
    }

    pub fn from_entries<I>(l_max: u32, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (HarmonicIndex, C64)>,
    {
        let mut out = Self::zeros(l_max);
        for (idx, value) in entries {
            out.set(idx, value)?;
        }
        Ok(out)
    }

    /// A table with a single unit coefficient.
    pub fn single(l: u32, m: i32) -> Result<Self> {
        let idx = HarmonicIndex::new(l, m)?;
        Self::from_entries(l, [(idx, C64::new(1.0, 0.0))])
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, idx: HarmonicIndex) -> C64 {
        if idx.l() > self.l_max {
            return C64::new(0.0, 0.0);
        }
        self.values[idx.linear()]
    }

    pub fn set(&mut self, idx: HarmonicIndex, value: C64) -> Result<()> {
        if idx.l() > self.l_max {
            return Err(domain(format!("index l={} exceeds l_max={}", idx.l(), self.l_max)));
        }
        self.values[idx.linear()] = value;
        Ok(())
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.values
    }

    pub(crate) fn from_dense(l_max: u32, values: Vec<C64>) -> Self {
        debug_assert_eq!(values.len(), (l_max as usize + 1).pow(2));
        Self { l_max, values }
    }

    pub fn iter(&self) -> impl Iterator<Item = (HarmonicIndex, C64)> + '_ {
        self.values.iter().enumerate().map(|(k, v)| (HarmonicIndex::from_linear(k), *v))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest coefficient magnitude among orbitals admitted by `filter`.
    pub fn max_abs(&self, filter: ParityFilter) -> f64 {
        self.iter()
            .filter(|(idx, _)| filter.admits(idx.l()))
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// Orbital numbers carrying a coefficient above `threshold`.
    pub fn active_orbitals(&self, threshold: f64) -> BTreeSet<u32> {
        self.iter().filter(|(_, v)| v.norm() > threshold).map(|(idx, _)| idx.l()).collect()
    }

    /// Parity of the orbitals present, with an all-zero table counted as even.
    pub fn parity(&self) -> Parity {
        let ls = self.active_orbitals(PARITY_THRESHOLD);
        let even = ls.iter().any(|l| l % 2 == 0);
        let odd = ls.iter().any(|l| l % 2 == 1);
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    /// Copy keeping only the orbitals admitted by `filter`.
    pub fn filtered(&self, filter: ParityFilter) -> Self {
        let values = self
            .iter()
            .map(|(idx, v)| if filter.admits(idx.l()) { v } else { C64::new(0.0, 0.0) })
            .collect();
        Self { l_max: self.l_max, values }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { l_max: self.l_max, values: self.values.iter().map(|v| v * factor).collect() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CoefficientsWire::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: CoefficientsWire = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        wire.try_into()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryWire {
    l: u32,
    m: i32,
    re: f64,
    im: f64,
}

/// On-disk form: `{"l_max", "entries": [{"l","m","re","im"}], "parity"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientsWire {
    l_max: u32,
    entries: Vec<EntryWire>,
    parity: Parity,
}

impl From<&HarmonicCoefficients> for CoefficientsWire {
    fn from(c: &HarmonicCoefficients) -> Self {
        let entries = c
            .iter()
            .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
            .map(|(idx, v)| EntryWire { l: idx.l(), m: idx.m(), re: v.re, im: v.im })
            .collect();
        Self { l_max: c.l_max, entries, parity: c.parity() }
    }
}

impl TryFrom<CoefficientsWire> for HarmonicCoefficients {
    type Error = Error;

    fn try_from(wire: CoefficientsWire) -> Result<Self> {
        let mut out = HarmonicCoefficients::zeros(wire.l_max);
        let mut seen = BTreeSet::new();
        for (k, e) in wire.entries.iter().enumerate() {
            let idx = HarmonicIndex::new(e.l, e.m)
                .map_err(|err| Error::Parse(format!("entries[{k}]: {err}")))?;
            if e.l > wire.l_max {
                return Err(Error::Parse(format!(
                    "entries[{k}]: l={} exceeds l_max={}",
                    e.l, wire.l_max
                )));
            }
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::Parse(format!("entries[{k}]: non-finite coefficient")));
            }
            if !seen.insert(idx) {
                return Err(Error::Parse(format!("entries[{k}]: duplicate index ({}, {})", e.l, e.m)));
            }
            out.set(idx, C64::new(e.re, e.im))?;
        }
        let actual = out.parity();
        let has_content = !out.active_orbitals(PARITY_THRESHOLD).is_empty();
        if has_content && actual != wire.parity {
            return Err(Error::Parse(format!(
                "parity tag '{}' does not match content '{}'",
                wire.parity.as_str(),
                actual.as_str()
            )));
        }
        Ok(out)
    }
}
