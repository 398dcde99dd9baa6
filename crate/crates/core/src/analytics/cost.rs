//! Cost-effectiveness model.
//!
//! `total = setup + months * monthly + remediation`, then total per detected,
//! total per resolved, and resolutions per day of average resolution time.

use serde::{Deserialize, Serialize};

use super::money::Usd;
use super::{undefined_marker, AnalyticsError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRecord {
    pub methodology_label: String,
    pub setup_cost: Usd,
    pub monthly_op_cost: Usd,
    pub months: u32,
    pub remediation_cost: Usd,
    pub detected: u64,
    pub resolved: u64,
    pub avg_days_to_resolve: f64,
}

impl CostRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        methodology_label: impl Into<String>,
        setup_dollars: i64,
        monthly_dollars: i64,
        months: u32,
        remediation_dollars: i64,
        detected: u64,
        resolved: u64,
        avg_days_to_resolve: f64,
    ) -> Self {
        CostRecord {
            methodology_label: methodology_label.into(),
            setup_cost: Usd::from_dollars(setup_dollars),
            monthly_op_cost: Usd::from_dollars(monthly_dollars),
            months,
            remediation_cost: Usd::from_dollars(remediation_dollars),
            detected,
            resolved,
            avg_days_to_resolve,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostDerived {
    pub methodology: String,
    pub total_cost: Usd,
    #[serde(with = "undefined_marker")]
    pub cost_per_detected: Option<f64>,
    #[serde(with = "undefined_marker")]
    pub cost_per_resolved: Option<f64>,
    pub efficiency: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub fn derive_costs(record: &CostRecord) -> Result<CostDerived, AnalyticsError> {
    if !(record.avg_days_to_resolve.is_finite() && record.avg_days_to_resolve > 0.0) {
        return Err(AnalyticsError::InvalidCostRecord(format!(
            "{}: average days to resolve must be positive",
            record.methodology_label
        )));
    }
    if record.months == 0 {
        return Err(AnalyticsError::InvalidCostRecord(format!(
            "{}: months must be positive",
            record.methodology_label
        )));
    }
    let total = record.setup_cost + record.monthly_op_cost * record.months + record.remediation_cost;
    let mut warnings = Vec::new();
    if record.resolved > record.detected {
        warnings.push(format!(
            "resolved ({}) exceeds detected ({})",
            record.resolved, record.detected
        ));
    }
    Ok(CostDerived {
        methodology: record.methodology_label.clone(),
        total_cost: total,
        cost_per_detected: total.per(record.detected),
        cost_per_resolved: total.per(record.resolved),
        efficiency: record.resolved as f64 / record.avg_days_to_resolve,
        warnings,
    })
}

/// The five published cost rows, six months each.
pub fn paper_cost_records() -> Vec<CostRecord> {
    vec![
        CostRecord::new("DAST & SAST", 50_000, 10_000, 6, 20_000, 165, 130, 15.0),
        CostRecord::new("IAST", 40_000, 8_000, 6, 15_000, 87, 70, 10.0),
        CostRecord::new("Blockchain Logging", 100_000, 15_000, 6, 25_000, 500, 450, 5.0),
        CostRecord::new("Quantum Cryptography", 75_000, 12_000, 6, 30_000, 260, 220, 20.0),
        CostRecord::new("Red Team AI Simulations", 60_000, 10_000, 6, 18_000, 3, 3, 25.0),
    ]
}
