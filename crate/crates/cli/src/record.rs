use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use zetasum_core::estlab::{FitReport, SampleSeries, Verdict};
use zetasum_core::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn of(ok: bool) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Outcome::Pass
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
        }
    }
}

impl From<Verdict> for Outcome {
    fn from(v: Verdict) -> Outcome {
        Outcome::of(v.passed())
    }
}

/// One evaluated point. `param1`/`param2` carry the suite's extra parameters
/// (deltas, etas, ...); anything beyond two goes in `extra`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub sigma: f64,
    pub t: f64,
    pub param1: Option<f64>,
    pub param2: Option<f64>,
    pub value_re: f64,
    pub value_im: f64,
    pub magnitude: f64,
    pub envelope: Option<f64>,
    pub ratio: Option<f64>,
    pub verdict: Outcome,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
}

impl Row {
    pub fn new(sigma: f64, t: f64, value: C64) -> Row {
        Row {
            sigma,
            t,
            param1: None,
            param2: None,
            value_re: value.re,
            value_im: value.im,
            magnitude: value.norm(),
            envelope: None,
            ratio: None,
            verdict: Outcome::Pass,
            extra: BTreeMap::new(),
        }
    }

    pub fn params(mut self, p1: Option<f64>, p2: Option<f64>) -> Row {
        self.param1 = p1;
        self.param2 = p2;
        self
    }

    pub fn magnitude(mut self, m: f64) -> Row {
        self.magnitude = m;
        self
    }

    /// Sets the envelope, the ratio `magnitude / envelope` and the verdict `ok`.
    pub fn against(mut self, envelope: f64, ok: bool) -> Row {
        self.envelope = Some(envelope);
        self.ratio = Some(self.magnitude / envelope);
        self.verdict = Outcome::of(ok);
        self
    }

    pub fn verdict(mut self, ok: bool) -> Row {
        self.verdict = Outcome::of(ok);
        self
    }

    pub fn extra(mut self, key: &str, v: f64) -> Row {
        self.extra.insert(key.to_string(), v);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub ln_power: u32,
}

impl From<&SampleSeries> for SeriesRecord {
    fn from(s: &SampleSeries) -> Self {
        SeriesRecord { label: s.label.clone(), points: s.points.clone(), ln_power: s.ln_power }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub slope: f64,
    pub intercept: f64,
    pub rms: f64,
    pub max_ratio_constant: f64,
    pub claimed_exponent: f64,
    pub tolerance: f64,
    pub dropped: usize,
    pub verdict: Outcome,
}

impl From<&FitReport> for FitRecord {
    fn from(f: &FitReport) -> Self {
        FitRecord {
            slope: f.slope,
            intercept: f.intercept,
            rms: f.rms,
            max_ratio_constant: f.max_ratio_constant,
            claimed_exponent: f.claimed_exponent,
            tolerance: f.tolerance,
            dropped: f.dropped,
            verdict: f.verdict.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoldenStatus {
    /// no golden file existed; this run wrote it
    Frozen,
    /// within the frozen constant
    Within,
    Exceeded,
    /// golden file exists for a different grid or config; not compared
    Incomparable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub key: String,
    pub constant: f64,
    pub frozen: f64,
    pub status: GoldenStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub claim_id: String,
    pub anchor: String,
    /// which check inside the suite
    pub label: String,
    pub rows: Vec<Row>,
    pub samples: Option<SeriesRecord>,
    pub fit: Option<FitRecord>,
    pub golden: Option<GoldenCheck>,
    #[serde(default)]
    pub notes: Vec<String>,
    pub verdict: Outcome,
}

impl ClaimRecord {
    pub fn new(claim_id: &str, anchor: &str, label: impl Into<String>) -> ClaimRecord {
        ClaimRecord {
            claim_id: claim_id.to_string(),
            anchor: anchor.to_string(),
            label: label.into(),
            rows: Vec::new(),
            samples: None,
            fit: None,
            golden: None,
            notes: Vec::new(),
            verdict: Outcome::Pass,
        }
    }

    /// Pass iff every row passes and the fit and golden check (if any) pass.
    pub fn settle(&mut self) {
        let rows = self.rows.iter().all(|r| r.verdict.passed());
        let fit = self.fit.as_ref().is_none_or(|f| f.verdict.passed());
        let gold = self.golden.as_ref().is_none_or(|g| g.status != GoldenStatus::Exceeded);
        self.verdict = Outcome::of(rows && fit && gold);
    }

    pub fn slope(&self) -> Option<f64> {
        self.fit.as_ref().map(|f| f.slope)
    }
}
