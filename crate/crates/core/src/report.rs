//! Serializable reports for graded computations.

use crate::cohomology::SliceDims;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Order bound and weight window used for a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub max_order: u32,
    pub weights: (i64, i64),
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_order: 3,
            weights: (-1, 8),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub weight: i64,
    pub ker: usize,
    pub im: usize,
    pub dim: usize,
}

impl From<SliceDims> for WeightEntry {
    fn from(s: SliceDims) -> Self {
        WeightEntry {
            weight: s.weight,
            ker: s.ker,
            im: s.im,
            dim: s.dim,
        }
    }
}

/// A reference value, either a total or one dimension per weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expected {
    Total(usize),
    PerWeight(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedReport {
    pub computation: String,
    pub family: String,
    pub r: Option<u32>,
    pub bounds: Bounds,
    pub per_weight: Vec<WeightEntry>,
    pub total: usize,
    pub stabilized: bool,
    pub paper_expected: Option<Expected>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
}

impl GradedReport {
    pub fn new(
        computation: impl Into<String>,
        family: impl Into<String>,
        r: Option<u32>,
        bounds: Bounds,
        per_weight: Vec<SliceDims>,
        stabilized: bool,
    ) -> Self {
        let per_weight: Vec<WeightEntry> = per_weight.into_iter().map(Into::into).collect();
        GradedReport {
            computation: computation.into(),
            family: family.into(),
            r,
            bounds,
            total: per_weight.iter().map(|w| w.dim).sum(),
            per_weight,
            stabilized,
            paper_expected: None,
            matches: None,
        }
    }

    /// Records a reference value and whether the computation agrees with it.
    pub fn with_expected(mut self, expected: Expected) -> Self {
        let ok = match &expected {
            Expected::Total(t) => *t == self.total,
            Expected::PerWeight(v) => v.len() == self.per_weight.len() && v.iter().zip(&self.per_weight).all(|(a, b)| *a == b.dim),
        };
        self.paper_expected = Some(expected);
        self.matches = Some(ok);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))
    }
}

impl fmt::Display for GradedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "computation: {}", self.computation)?;
        writeln!(f, "family: {}", self.family)?;
        match self.r {
            Some(r) => writeln!(f, "r: {r}")?,
            None => writeln!(f, "r: null")?,
        }
        writeln!(
            f,
            "bounds: max_order={} weights={}..{}",
            self.bounds.max_order, self.bounds.weights.0, self.bounds.weights.1
        )?;
        writeln!(f, "per_weight:")?;
        writeln!(f, "  {:>6} {:>8} {:>8} {:>8}", "weight", "ker", "im", "dim")?;
        for w in &self.per_weight {
            writeln!(f, "  {:>6} {:>8} {:>8} {:>8}", w.weight, w.ker, w.im, w.dim)?;
        }
        writeln!(f, "total: {}", self.total)?;
        writeln!(f, "stabilized: {}", self.stabilized)?;
        match &self.paper_expected {
            None => writeln!(f, "paper_expected: null")?,
            Some(Expected::Total(t)) => writeln!(f, "paper_expected: {t}")?,
            Some(Expected::PerWeight(v)) => writeln!(f, "paper_expected: {v:?}")?,
        }
        match self.matches {
            None => write!(f, "match: null"),
            Some(m) => write!(f, "match: {m}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dims = vec![
            SliceDims { weight: -1, ker: 3, im: 0, dim: 3 },
            SliceDims { weight: 0, ker: 9, im: 1, dim: 8 },
        ];
        let rep = GradedReport::new("coker", "wreath(n=3, r=1)", Some(1), Bounds::default(), dims, true)
            .with_expected(Expected::PerWeight(vec![3, 8]));
        assert_eq!(rep.matches, Some(true));
        assert_eq!(rep.total, 11);
        let back = GradedReport::from_json(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn unknown_fields_rejected() {
        let rep = GradedReport::new("x", "y", None, Bounds::default(), vec![], true);
        let mut v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(GradedReport::from_json(&v.to_string()).is_err());
    }
}
