use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REPORT_SCHEMA: &str = "fgcount.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    /// Below the warm-up threshold, or no calibrated tolerance exists.
    NoVerdict,
    /// The request exceeded a guard or budget and was not run.
    Refused,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub points: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub name: String,
    pub value: f64,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub note: String,
}

impl Verdict {
    pub fn check(name: &str, pass: bool, note: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            outcome: if pass { Outcome::Pass } else { Outcome::Fail },
            observed: None,
            target: None,
            tolerance: None,
            note: note.into(),
        }
    }

    /// `|observed - target.value| <= tolerance`.
    pub fn within(name: &str, observed: f64, target: &Target, tolerance: f64) -> Self {
        let gap = (observed - target.value).abs();
        Self {
            name: name.to_string(),
            outcome: if gap <= tolerance { Outcome::Pass } else { Outcome::Fail },
            observed: Some(observed),
            target: Some(target.name.clone()),
            tolerance: Some(tolerance),
            note: format!("|{observed:.6} - {:.6}| = {gap:.2e}", target.value),
        }
    }

    pub fn no_verdict(name: &str, note: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            outcome: Outcome::NoVerdict,
            observed: None,
            target: None,
            tolerance: None,
            note: note.into(),
        }
    }

    pub fn refused(name: &str, err: &Error) -> Self {
        Self {
            name: name.to_string(),
            outcome: Outcome::Refused,
            observed: None,
            target: None,
            tolerance: None,
            note: err.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: String,
    pub experiment: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub series: Vec<Series>,
    pub targets: Vec<Target>,
    pub verdicts: Vec<Verdict>,
}

impl ExperimentReport {
    pub fn new(experiment: &str) -> Self {
        Self {
            schema: REPORT_SCHEMA.to_string(),
            experiment: experiment.to_string(),
            parameters: BTreeMap::new(),
            series: Vec::new(),
            targets: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).expect("parameter serializes"));
        self
    }

    pub fn add_series(&mut self, name: &str, points: Vec<(usize, f64)>) {
        self.series.push(Series {
            name: name.to_string(),
            points,
        });
    }

    pub fn add_target(&mut self, name: &str, value: f64, provenance: &str) -> Target {
        let t = Target {
            name: name.to_string(),
            value,
            provenance: provenance.to_string(),
        };
        self.targets.push(t.clone());
        t
    }

    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    /// Every target has a provenance and every referenced target exists.
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.targets.iter().find(|t| t.provenance.trim().is_empty()) {
            return Err(Error::InvalidArgument(format!("target {:?} has no provenance", t.name)));
        }
        for v in &self.verdicts {
            if let Some(name) = &v.target {
                if !self.targets.iter().any(|t| &t.name == name) {
                    return Err(Error::InvalidArgument(format!(
                        "verdict {:?} refers to unknown target {name:?}",
                        v.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn has_failures(&self) -> bool {
        self.verdicts.iter().any(|v| v.outcome == Outcome::Fail)
    }

    pub fn has_refusals(&self) -> bool {
        self.verdicts.iter().any(|v| v.outcome == Outcome::Refused)
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.outcome == Outcome::Pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Long-format CSV: `series,m,value`.
    pub fn series_csv(&self) -> String {
        let mut out = String::from("series,m,value\n");
        for s in &self.series {
            for (m, v) in &s.points {
                writeln!(out, "{},{m},{v}", s.name).unwrap();
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "experiment: {}", self.experiment).unwrap();
        for (k, v) in &self.parameters {
            writeln!(out, "  {k} = {v}").unwrap();
        }
        if !self.series.is_empty() {
            let mut ms: Vec<usize> = self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).collect();
            ms.sort_unstable();
            ms.dedup();
            write!(out, "\n{:>5}", "m").unwrap();
            let width = self.series.iter().map(|s| s.name.len()).max().unwrap_or(0).max(12);
            for s in &self.series {
                write!(out, "  {:>width$}", s.name).unwrap();
            }
            out.push('\n');
            for m in ms {
                write!(out, "{m:>5}").unwrap();
                for s in &self.series {
                    match s.points.iter().find(|p| p.0 == m) {
                        Some((_, v)) => write!(out, "  {v:>width$.6}").unwrap(),
                        None => write!(out, "  {:>width$}", "").unwrap(),
                    }
                }
                out.push('\n');
            }
        }
        if !self.targets.is_empty() {
            out.push_str("\ntargets:\n");
            for t in &self.targets {
                writeln!(out, "  {:<24} {:>10.6}  ({})", t.name, t.value, t.provenance).unwrap();
            }
        }
        if !self.verdicts.is_empty() {
            out.push_str("\nverdicts:\n");
            for v in &self.verdicts {
                let tag = match v.outcome {
                    Outcome::Pass => "PASS",
                    Outcome::Fail => "FAIL",
                    Outcome::NoVerdict => "----",
                    Outcome::Refused => "REFUSED",
                };
                writeln!(out, "  {tag:<8} {:<28} {}", v.name, v.note).unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_requires_provenance() {
        let mut r = ExperimentReport::new("t");
        let t = r.add_target("limit", 0.5, "exact");
        r.verdicts.push(Verdict::within("v", 0.49, &t, 0.02));
        assert!(r.validate().is_ok());
        assert!(r.all_passed());
        r.add_target("bare", 1.0, " ");
        assert!(r.validate().is_err());
    }

    #[test]
    fn dangling_target_reference() {
        let mut r = ExperimentReport::new("t");
        let t = Target {
            name: "ghost".into(),
            value: 0.0,
            provenance: "x".into(),
        };
        r.verdicts.push(Verdict::within("v", 0.0, &t, 0.1));
        assert!(r.validate().is_err());
    }

    #[test]
    fn text_and_csv() {
        let mut r = ExperimentReport::new("demo");
        r.param("k", 2);
        r.add_series("ratio", vec![(2, 0.5), (3, 0.25)]);
        let t = r.add_target("limit", 0.3, "derived");
        r.verdicts.push(Verdict::within("final", 0.25, &t, 0.01));
        assert!(r.has_failures());
        let text = r.to_text();
        assert!(text.contains("FAIL"));
        assert!(text.contains("0.250000"));
        assert_eq!(r.series_csv(), "series,m,value\nratio,2,0.5\nratio,3,0.25\n");
        let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
