use std::fmt;
use std::time::Duration;

use serde::Serialize;

use super::gen::GenConfig;
use crate::tropcore::{TropMatrix, TropScalar};

/// At most this many failing instances are kept in a report; the count is exact.
pub const MAX_RECORDED_FAILURES: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// A conditional property whose hypothesis was never met.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedMatrix {
    pub name: String,
    /// The matrix in the text format.
    pub text: String,
}

impl NamedMatrix {
    pub fn new(name: &str, m: &TropMatrix) -> Self {
        NamedMatrix {
            name: name.to_string(),
            text: m.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureRecord {
    pub trial: u64,
    pub instance: Vec<NamedMatrix>,
    pub expected: String,
    pub actual: String,
}

impl FailureRecord {
    /// The instance as one file in the matrix text format, in instance order.
    pub fn instance_file(&self) -> String {
        self.instance.iter().map(|m| m.text.as_str()).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub property_id: String,
    pub config: GenConfig,
    /// The dominance level used, for suites that take one.
    pub h: Option<TropScalar>,
    pub trials_run: u64,
    /// Trials whose hypothesis held, for conditional properties.
    pub hypothesis_met: Option<u64>,
    pub failure_count: u64,
    pub failures: Vec<FailureRecord>,
    /// Suite-specific measurements, in a fixed order.
    pub details: Vec<(String, String)>,
    pub verdict: Verdict,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn detail(&self, key: &str) -> Option<&str> {
        self.details
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// The report with the elapsed time zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> PropertyReport {
        PropertyReport {
            elapsed: Duration::ZERO,
            ..self.clone()
        }
    }

    pub fn summary_line(&self) -> String {
        let mut line = format!(
            "{}: {} ({} trials, {} failures",
            self.property_id, self.verdict, self.trials_run, self.failure_count
        );
        if let Some(met) = self.hypothesis_met {
            line.push_str(&format!(", hypothesis met {met}"));
        }
        line.push_str(&format!(", {:.2} s)", self.elapsed.as_secs_f64()));
        line
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        writeln!(
            f,
            "  seed={} n={} range={} denom={}{}",
            self.config.seed,
            self.config.n,
            self.config.range,
            self.config.denom,
            self.h.as_ref().map(|h| format!(" H={h}")).unwrap_or_default()
        )?;
        for (k, v) in &self.details {
            writeln!(f, "  {k}: {v}")?;
        }
        for fail in &self.failures {
            writeln!(f, "  counterexample at trial {}", fail.trial)?;
            writeln!(f, "    expected: {}", fail.expected)?;
            writeln!(f, "    actual:   {}", fail.actual)?;
            for m in &fail.instance {
                writeln!(f, "    {}:", m.name)?;
                for line in m.text.lines() {
                    writeln!(f, "      {line}")?;
                }
            }
        }
        Ok(())
    }
}
