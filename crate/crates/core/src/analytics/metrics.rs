use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::AnalyticsError;
use crate::domain::{FindingSet, Methodology, Severity, VulnCategory};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeveritySummary {
    pub methodology: String,
    pub total: u64,
    pub critical: u64,
    pub high: u64,
    pub medium: u64,
    pub low: u64,
}

impl SeveritySummary {
    fn empty(label: &str) -> Self {
        SeveritySummary {
            methodology: label.to_string(),
            total: 0,
            critical: 0,
            high: 0,
            medium: 0,
            low: 0,
        }
    }

    fn add(&mut self, severity: Severity) {
        self.total += 1;
        match severity {
            Severity::Critical => self.critical += 1,
            Severity::High => self.high += 1,
            Severity::Medium => self.medium += 1,
            Severity::Low => self.low += 1,
        }
    }
}

fn summarize<'a>(
    sets: impl IntoIterator<Item = &'a FindingSet>,
    label: fn(Methodology) -> &'static str,
) -> Vec<SeveritySummary> {
    // Keyed by the first methodology that maps to each label, so rows come out
    // in methodology order.
    let mut rows: BTreeMap<Methodology, SeveritySummary> = BTreeMap::new();
    let mut owner: BTreeMap<&'static str, Methodology> = BTreeMap::new();
    for set in sets {
        for f in set {
            let l = label(f.methodology());
            let key = *owner.entry(l).or_insert(f.methodology());
            rows.entry(key).or_insert_with(|| SeveritySummary::empty(l)).add(f.severity());
        }
    }
    rows.into_values().collect()
}

/// Severity counts grouped by report label, DAST and SAST sharing one row.
pub fn severity_summary<'a>(sets: impl IntoIterator<Item = &'a FindingSet>) -> Vec<SeveritySummary> {
    summarize(sets, Methodology::report_label)
}

/// Severity counts with DAST and SAST kept apart.
pub fn severity_by_methodology<'a>(sets: impl IntoIterator<Item = &'a FindingSet>) -> Vec<SeveritySummary> {
    summarize(sets, Methodology::detail_label)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionRate {
    pub category: VulnCategory,
    pub total: u64,
    pub resolved: u64,
    pub rate: f64,
}

/// Resolved share of one category.
pub fn resolution_rate(set: &FindingSet, category: VulnCategory) -> Result<f64, AnalyticsError> {
    resolution_detail(set, category).map(|r| r.rate)
}

pub fn resolution_detail(set: &FindingSet, category: VulnCategory) -> Result<ResolutionRate, AnalyticsError> {
    let (total, resolved) = set
        .iter()
        .filter(|f| f.category() == category)
        .fold((0u64, 0u64), |(t, r), f| (t + 1, r + u64::from(!f.is_open())));
    if total == 0 {
        return Err(AnalyticsError::NoSuchCategoryInSet(category));
    }
    Ok(ResolutionRate {
        category,
        total,
        resolved,
        rate: resolved as f64 / total as f64,
    })
}

/// Rates for every category present, in category order.
pub fn resolution_rates(set: &FindingSet) -> Vec<ResolutionRate> {
    VulnCategory::ALL
        .into_iter()
        .filter_map(|c| resolution_detail(set, c).ok())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlaFigure {
    pub methodology: String,
    pub window_days: u64,
    pub findings: u64,
    pub within_window: u64,
    pub fraction: f64,
}

/// Share of all findings resolved no more than `window_days` after detection.
pub fn remediation_sla(set: &FindingSet, window_days: u64) -> Result<f64, AnalyticsError> {
    sla_detail(set, window_days, set.provenance()).map(|s| s.fraction)
}

pub fn sla_detail(set: &FindingSet, window_days: u64, label: &str) -> Result<SlaFigure, AnalyticsError> {
    if set.is_empty() {
        return Err(AnalyticsError::EmptySet);
    }
    let within = set
        .iter()
        .filter(|f| f.time_to_resolve().is_some_and(|d| d <= window_days))
        .count() as u64;
    let findings = set.len() as u64;
    Ok(SlaFigure {
        methodology: label.to_string(),
        window_days,
        findings,
        within_window: within,
        fraction: within as f64 / findings as f64,
    })
}
