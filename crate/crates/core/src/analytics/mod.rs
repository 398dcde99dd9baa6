//! Aggregate tables and derived metrics: severity summaries, resolution rates,
//! remediation SLAs and the cost-effectiveness model, emitted as CSV or JSON.
//!
//! Undefined per-unit costs (zero detected or resolved) are written as the
//! string `undefined`, never as NaN.

mod cost;
mod metrics;
mod money;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::VulnCategory;

pub use cost::{derive_costs, paper_cost_records, CostDerived, CostRecord};
pub use metrics::{
    remediation_sla, resolution_detail, resolution_rate, resolution_rates, severity_by_methodology,
    severity_summary, sla_detail, ResolutionRate, SeveritySummary, SlaFigure,
};
pub use money::Usd;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("no {0} findings in set")]
    NoSuchCategoryInSet(VulnCategory),
    #[error("finding set is empty")]
    EmptySet,
    #[error("invalid cost record: {0}")]
    InvalidCostRecord(String),
}

pub const UNDEFINED: &str = "undefined";

pub(crate) mod undefined_marker {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_f64(*x),
            None => s.serialize_str(super::UNDEFINED),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(Some(x)),
            Repr::Text(s) if s == super::UNDEFINED => Ok(None),
            Repr::Text(s) => Err(serde::de::Error::custom(format!("expected number or \"undefined\", got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

/// Everything the JSON report carries.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalyticsReport {
    pub severity_summaries: Vec<SeveritySummary>,
    pub cost_effectiveness: Vec<CostDerived>,
    pub resolution_rates: Vec<ResolutionRate>,
    pub sla: Vec<SlaFigure>,
}

pub const COST_CSV_HEADER: [&str; 5] = [
    "methodology",
    "total_cost",
    "cost_per_detected",
    "cost_per_resolved",
    "efficiency",
];

fn num(x: f64) -> String {
    format!("{x:.6}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| UNDEFINED.to_string(), num)
}

fn write_csv<R: AsRef<[u8]>>(header: &[&str], rows: impl IntoIterator<Item = Vec<R>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Cost-effectiveness table as CSV (header plus one row per methodology).
pub fn cost_csv(rows: &[CostDerived]) -> Vec<u8> {
    write_csv(
        &COST_CSV_HEADER,
        rows.iter().map(|d| {
            vec![
                d.methodology.clone(),
                num(d.total_cost.as_f64()),
                opt(d.cost_per_detected),
                opt(d.cost_per_resolved),
                num(d.efficiency),
            ]
        }),
    )
}

pub fn severity_csv(rows: &[SeveritySummary]) -> Vec<u8> {
    write_csv(
        &["methodology", "total", "critical", "high", "medium", "low"],
        rows.iter().map(|s| {
            vec![
                s.methodology.clone(),
                s.total.to_string(),
                s.critical.to_string(),
                s.high.to_string(),
                s.medium.to_string(),
                s.low.to_string(),
            ]
        }),
    )
}

pub fn resolution_csv(rows: &[ResolutionRate]) -> Vec<u8> {
    write_csv(
        &["category", "total", "resolved", "rate"],
        rows.iter().map(|r| {
            vec![
                r.category.code().to_string(),
                r.total.to_string(),
                r.resolved.to_string(),
                num(r.rate),
            ]
        }),
    )
}

pub fn sla_csv(rows: &[SlaFigure]) -> Vec<u8> {
    write_csv(
        &["methodology", "window_days", "findings", "within_window", "fraction"],
        rows.iter().map(|s| {
            vec![
                s.methodology.clone(),
                s.window_days.to_string(),
                s.findings.to_string(),
                s.within_window.to_string(),
                num(s.fraction),
            ]
        }),
    )
}

/// Render a report. CSV carries the cost-effectiveness table; the other
/// tables have their own `*_csv` functions. JSON carries everything at full
/// precision.
pub fn emit_report(report: &AnalyticsReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Csv => cost_csv(&report.cost_effectiveness),
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("report serializes");
            out.push(b'\n');
            out
        }
    }
}
