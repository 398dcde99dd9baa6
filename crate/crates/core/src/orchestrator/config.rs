use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::OrchestratorError;
use crate::analytics::{paper_cost_records, CostRecord};
use crate::domain::{Methodology, VulnCategory};
use crate::pqcrypto::RlweParams;
use crate::redteam::{paper_scenarios, ScenarioConfig};
use crate::scanners::{paper_profile, ScanProfile};

/// Environment variable that overrides `master_seed`.
pub const SEED_ENV: &str = "PQPT_SEED";

/// How the remediation phase picks and dates resolutions.
///
/// Per set and category, the first `round(target * count)` open findings (in
/// insertion order) are resolved, rounding half away from zero. Per set, the
/// first `round(sla_target * set_len)` resolutions land within
/// `sla_window_days` of detection; any further ones land after it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemediationPolicy {
    #[serde(default)]
    pub category_targets: BTreeMap<VulnCategory, f64>,
    #[serde(default = "default_rate")]
    pub default_target: f64,
    #[serde(default = "default_window")]
    pub sla_window_days: u64,
    #[serde(default = "default_rate")]
    pub sla_target: f64,
    /// Resolutions one remediation pass can apply; unlimited when absent.
    #[serde(default)]
    pub max_resolutions_per_pass: Option<u64>,
}

fn default_rate() -> f64 {
    0.70
}

fn default_window() -> u64 {
    14
}

impl Default for RemediationPolicy {
    fn default() -> Self {
        RemediationPolicy {
            category_targets: BTreeMap::new(),
            default_target: default_rate(),
            sla_window_days: default_window(),
            sla_target: default_rate(),
            max_resolutions_per_pass: None,
        }
    }
}

impl RemediationPolicy {
    /// Published per-category resolution rates, 70% within 14 days elsewhere.
    pub fn paper() -> Self {
        use VulnCategory::*;
        RemediationPolicy {
            category_targets: [
                (SqlInjection, 0.80),
                (Xss, 0.80),
                (InsecureDataHandling, 0.80),
                (EncryptionFlaw, 0.8333),
                (AdversarialMl, 0.875),
            ]
            .into_iter()
            .collect(),
            ..Default::default()
        }
    }

    pub fn target(&self, category: VulnCategory) -> f64 {
        self.category_targets.get(&category).copied().unwrap_or(self.default_target)
    }

    pub fn validate(&self) -> Result<(), OrchestratorError> {
        let rates = self
            .category_targets
            .values()
            .chain([&self.default_target, &self.sla_target]);
        for &r in rates {
            if !(0.0..=1.0).contains(&r) {
                return Err(OrchestratorError::ConfigInvalid(format!("rate {r} outside [0, 1]")));
            }
        }
        if self.sla_window_days == 0 {
            return Err(OrchestratorError::ConfigInvalid("sla_window_days must be positive".into()));
        }
        Ok(())
    }
}

/// `round(rate * count)`, halves away from zero.
pub fn quota(rate: f64, count: u64) -> u64 {
    (rate * count as f64).round() as u64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub master_seed: u64,
    #[serde(default)]
    pub scan_profiles: Vec<ScanProfile>,
    #[serde(default)]
    pub scenario_configs: Vec<ScenarioConfig>,
    #[serde(default)]
    pub remediation_policy: RemediationPolicy,
    pub crypto_params_id: RlweParams,
    pub max_cycles: u32,
    #[serde(default)]
    pub encrypt_ledger_payloads: bool,
    /// Inputs for the cost table; the published rows when absent.
    #[serde(default = "paper_cost_records")]
    pub cost_records: Vec<CostRecord>,
}

impl PipelineConfig {
    /// DAST, SAST and IAST profiles, the three red-team scenarios, the
    /// published remediation rates, STD-256 with encrypted payloads, one cycle.
    pub fn paper_default(master_seed: u64) -> Self {
        PipelineConfig {
            master_seed,
            scan_profiles: [Methodology::Dast, Methodology::Sast, Methodology::Iast]
                .into_iter()
                .map(|m| paper_profile(m).expect("scanner methodology"))
                .collect(),
            scenario_configs: paper_scenarios(),
            remediation_policy: RemediationPolicy::paper(),
            crypto_params_id: RlweParams::std256(),
            max_cycles: 1,
            encrypt_ledger_payloads: true,
            cost_records: paper_cost_records(),
        }
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, OrchestratorError> {
        let cfg: PipelineConfig =
            serde_json::from_slice(bytes).map_err(|e| OrchestratorError::ConfigInvalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), OrchestratorError> {
        if self.max_cycles == 0 {
            return Err(OrchestratorError::ConfigInvalid("max_cycles must be at least 1".into()));
        }
        if self.encrypt_ledger_payloads && !(self.crypto_params_id.is_registered() && self.crypto_params_id.is_correct()) {
            return Err(OrchestratorError::ConfigInvalid(format!(
                "{} cannot encrypt ledger payloads",
                self.crypto_params_id
            )));
        }
        self.remediation_policy.validate()
    }

    /// Apply an explicit seed, else `PQPT_SEED` when set.
    pub fn override_seed(&mut self, explicit: Option<u64>, env: Option<&str>) -> Result<(), OrchestratorError> {
        if let Some(seed) = explicit {
            self.master_seed = seed;
        } else if let Some(raw) = env {
            self.master_seed = raw
                .trim()
                .parse()
                .map_err(|_| OrchestratorError::ConfigInvalid(format!("{SEED_ENV}={raw:?} is not a u64")))?;
        }
        Ok(())
    }
}
