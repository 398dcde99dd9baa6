use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use super::config::PipelineConfig;
use super::remediation::{remediation_pass, unmet_targets, UnmetTarget};
use super::workflow::{Phase, WorkflowEvent, WorkflowState};
use super::OrchestratorError;
use crate::analytics::{
    derive_costs, resolution_rates, severity_by_methodology, severity_summary, sla_detail, AnalyticsReport,
    SeveritySummary,
};
use crate::domain::{Day, FindingSet, Methodology};
use crate::ledger::{EventType, Ledger, VerificationOutcome};
use crate::pqcrypto::{encrypt_payload, keygen, RlweKeyPair, RlweParams};
use crate::prng::{derive_stream, Prng};
use crate::redteam::{attack_findings_labelled, run_simulation, SimulationReport};
use crate::scanners::{merge, simulate_scan_from};

/// Remediation/Validation loops allowed per cycle before unmet targets are
/// accepted and reported.
pub const MAX_VALIDATION_RETRIES: u32 = 2;

/// Workflow position plus the artifacts it carries.
#[derive(Debug, Clone)]
pub struct PipelineState {
    workflow: WorkflowState,
    open_findings: FindingSet,
    ledger: Ledger,
    clock: Day,
}

impl Default for PipelineState {
    fn default() -> Self {
        PipelineState {
            workflow: WorkflowState::default(),
            open_findings: FindingSet::new("open"),
            ledger: Ledger::new(),
            clock: 0,
        }
    }
}

impl PipelineState {
    pub fn workflow(&self) -> WorkflowState {
        self.workflow
    }
    pub fn phase(&self) -> Phase {
        self.workflow.phase
    }
    pub fn cycle(&self) -> u64 {
        self.workflow.cycle
    }
    pub fn is_halted(&self) -> bool {
        self.workflow.halted
    }
    pub fn open_findings(&self) -> &FindingSet {
        &self.open_findings
    }
    pub fn ledger(&self) -> &Ledger {
        &self.ledger
    }
    pub fn clock(&self) -> Day {
        self.clock
    }

    pub fn advance(&mut self, event: WorkflowEvent) -> Result<(), OrchestratorError> {
        self.workflow.advance(event)
    }
}

/// Pure transition: the successor state, or `IllegalEvent`.
pub fn advance(state: &PipelineState, event: WorkflowEvent) -> Result<PipelineState, OrchestratorError> {
    let mut next = state.clone();
    next.advance(event)?;
    Ok(next)
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineRunReport {
    pub master_seed: u64,
    pub params: RlweParams,
    pub final_state: WorkflowState,
    pub cycles_completed: u64,
    pub validation_retries: u32,
    pub resolutions_applied: u64,
    pub unmet_targets: Vec<UnmetTarget>,
    pub analytics: AnalyticsReport,
    pub severity_by_methodology: Vec<SeveritySummary>,
    pub simulations: Vec<SimulationReport>,
    pub verification: VerificationOutcome,
    #[serde(skip)]
    pub findings: FindingSet,
    #[serde(skip)]
    pub ledger: Ledger,
    #[serde(skip)]
    pub keypair: RlweKeyPair,
}

impl PipelineRunReport {
    pub fn targets_met(&self) -> bool {
        self.unmet_targets.is_empty()
    }

    /// 0 when every remediation target was met, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.targets_met() {
            0
        } else {
            2
        }
    }

    /// Run summary as pretty JSON with a trailing newline.
    pub fn summary_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("report serializes");
        out.push(b'\n');
        out
    }
}

/// A pipeline that can be driven one phase at a time.
pub struct Pipeline {
    config: PipelineConfig,
    state: PipelineState,
    keypair: Option<RlweKeyPair>,
    ledger_prng: Option<Prng>,
    cycle_sets: Vec<FindingSet>,
    done_sets: Vec<FindingSet>,
    simulations: Vec<SimulationReport>,
    retries_this_cycle: u32,
    retries_total: u32,
    resolutions: u64,
    unmet: Vec<UnmetTarget>,
    wraps: u64,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Result<Self, OrchestratorError> {
        config.validate()?;
        for record in &config.cost_records {
            derive_costs(record).map_err(|e| OrchestratorError::ConfigInvalid(e.to_string()))?;
        }
        Ok(Pipeline {
            config,
            state: PipelineState::default(),
            keypair: None,
            ledger_prng: None,
            cycle_sets: Vec::new(),
            done_sets: Vec::new(),
            simulations: Vec::new(),
            retries_this_cycle: 0,
            retries_total: 0,
            resolutions: 0,
            unmet: Vec::new(),
            wraps: 0,
        })
    }

    pub fn state(&self) -> &PipelineState {
        &self.state
    }

    /// Direct ledger access, for fault injection.
    pub fn ledger_mut(&mut self) -> &mut Ledger {
        &mut self.state.ledger
    }

    /// Execute the current phase and fire the resulting event. Returns the
    /// phase that ran, or `None` once halted.
    pub fn step(&mut self) -> Result<Option<Phase>, OrchestratorError> {
        if self.state.is_halted() {
            return Ok(None);
        }
        let phase = self.state.phase();
        let event = match phase {
            Phase::Setup => self.setup()?,
            Phase::Assessment => self.assess()?,
            Phase::Remediation => self.remediate()?,
            Phase::Validation => self.validate()?,
            Phase::Iteration => self.iterate()?,
        };
        self.state.advance(event)?;
        if phase == Phase::Iteration {
            self.wraps += 1;
            if self.state.cycle() >= u64::from(self.config.max_cycles) {
                self.state.advance(WorkflowEvent::Halt)?;
            }
        }
        self.refresh_open();
        Ok(Some(phase))
    }

    pub fn run(mut self) -> Result<PipelineRunReport, OrchestratorError> {
        while self.step()?.is_some() {}
        Ok(self.into_report())
    }

    fn seed(&self) -> u64 {
        self.config.master_seed
    }

    fn log(&mut self, ts: Day, kind: EventType, payload: Vec<u8>, encrypt: bool) -> Result<(), OrchestratorError> {
        let ts = ts.max(self.state.clock);
        let (payload, encrypted) = match (encrypt && self.config.encrypt_ledger_payloads, &mut self.ledger_prng) {
            (true, Some(prng)) => {
                let kp = self.keypair.as_ref().expect("keys exist after setup");
                (encrypt_payload(&kp.public, &kp.params, &payload, prng)?, true)
            }
            _ => (payload, false),
        };
        self.state.ledger.append(ts, kind, payload, encrypted)?;
        self.state.clock = ts;
        Ok(())
    }

    fn system_change(&mut self, body: serde_json::Value) -> Result<(), OrchestratorError> {
        let ts = self.state.clock;
        self.log(ts, EventType::SystemChange, body.to_string().into_bytes(), false)
    }

    fn setup(&mut self) -> Result<WorkflowEvent, OrchestratorError> {
        let params = self.config.crypto_params_id.clone();
        let kp = keygen(&params, &mut derive_stream(self.seed(), "setup/keygen"))?;
        let fingerprint = Sha256::digest(serde_json::to_vec(&kp.public).expect("key serializes"));
        self.keypair = Some(kp);
        self.system_change(json!({
            "change": "setup",
            "params": params.name(),
            "public_key_sha256": hex::encode(fingerprint),
            "encrypt_payloads": self.config.encrypt_ledger_payloads,
        }))?;
        Ok(WorkflowEvent::PhaseComplete)
    }

    fn assess(&mut self) -> Result<WorkflowEvent, OrchestratorError> {
        let cycle = self.state.cycle();
        let seed = self.seed();
        let start = self.state.clock;
        self.retries_this_cycle = 0;
        self.ledger_prng = Some(derive_stream(seed, format!("cycle/{cycle}/ledger")));

        let mut sets = Vec::new();
        for (i, profile) in self.config.scan_profiles.iter().enumerate() {
            let label = format!("cycle/{cycle}/scan/{i}/{}", profile.methodology().code());
            sets.push(simulate_scan_from(profile, &mut derive_stream(seed, label), start));
        }
        let label = format!("cycle/{cycle}/redteam");
        let report = run_simulation(&self.config.scenario_configs, &derive_stream(seed, &label));
        let attacks = attack_findings_labelled(&report, seed, label.as_bytes(), start);
        self.simulations.push(report);
        if !attacks.is_empty() {
            sets.push(attacks);
        }

        let mut order: Vec<(Day, usize, usize)> = sets
            .iter()
            .enumerate()
            .flat_map(|(s, set)| set.iter().enumerate().map(move |(i, f)| (f.detected_at(), s, i)))
            .collect();
        order.sort_unstable();
        for (day, s, i) in order {
            let payload = serde_json::to_vec(&sets[s].findings()[i]).expect("finding serializes");
            self.log(day, EventType::VulnerabilityDetection, payload, true)?;
        }
        self.cycle_sets = sets;
        Ok(WorkflowEvent::PhaseComplete)
    }

    fn remediate(&mut self) -> Result<WorkflowEvent, OrchestratorError> {
        let cycle = self.state.cycle();
        let pass = self.retries_this_cycle;
        let mut prng = derive_stream(self.seed(), format!("cycle/{cycle}/remediation/{pass}"));
        let mut applied = remediation_pass(&mut self.cycle_sets, &self.config.remediation_policy, &mut prng, pass);
        applied.sort_by_key(|r| r.resolved_at);
        for r in &applied {
            let payload = serde_json::to_vec(r).expect("resolution serializes");
            self.log(r.resolved_at, EventType::RemediationAction, payload, true)?;
        }
        self.resolutions += applied.len() as u64;
        Ok(WorkflowEvent::PhaseComplete)
    }

    fn validate(&mut self) -> Result<WorkflowEvent, OrchestratorError> {
        let outcome = self.state.ledger.verify_chain();
        if !outcome.is_valid() {
            return Err(OrchestratorError::LedgerCorrupt(outcome));
        }
        let cycle = self.state.cycle();
        let unmet = unmet_targets(&self.cycle_sets, &self.config.remediation_policy, cycle);
        if !unmet.is_empty() && self.retries_this_cycle < MAX_VALIDATION_RETRIES {
            self.retries_this_cycle += 1;
            self.retries_total += 1;
            return Ok(WorkflowEvent::ValidationFailed);
        }
        self.system_change(json!({
            "change": "validation",
            "cycle": cycle,
            "retries": self.retries_this_cycle,
            "unmet_targets": unmet.len(),
        }))?;
        self.unmet.extend(unmet);
        Ok(WorkflowEvent::PhaseComplete)
    }

    fn iterate(&mut self) -> Result<WorkflowEvent, OrchestratorError> {
        let cycle = self.state.cycle();
        self.system_change(json!({ "change": "iteration", "cycle": cycle }))?;
        self.done_sets.append(&mut self.cycle_sets);
        Ok(WorkflowEvent::PhaseComplete)
    }

    fn all_sets(&self) -> impl Iterator<Item = &FindingSet> {
        self.done_sets.iter().chain(&self.cycle_sets)
    }

    fn refresh_open(&mut self) {
        let open = self.all_sets().flat_map(|s| s.iter()).filter(|f| f.is_open()).cloned();
        self.state.open_findings = FindingSet::from_findings("open", open).expect("ids are unique");
    }

    fn analytics(&self, merged: &FindingSet) -> AnalyticsReport {
        let window = self.config.remediation_policy.sla_window_days;
        let mut sla = Vec::new();
        for m in Methodology::ALL {
            let subset = merged.iter().filter(|f| f.methodology() == m).cloned();
            let subset = FindingSet::from_findings(m.detail_label(), subset).expect("ids are unique");
            if let Ok(fig) = sla_detail(&subset, window, m.detail_label()) {
                sla.push(fig);
            }
        }
        AnalyticsReport {
            severity_summaries: severity_summary(self.all_sets()),
            cost_effectiveness: self
                .config
                .cost_records
                .iter()
                .map(|r| derive_costs(r).expect("checked in Pipeline::new"))
                .collect(),
            resolution_rates: resolution_rates(merged),
            sla,
        }
    }

    fn into_report(self) -> PipelineRunReport {
        let merged = merge(self.all_sets()).expect("ids are unique");
        let analytics = self.analytics(&merged);
        PipelineRunReport {
            master_seed: self.config.master_seed,
            params: self.config.crypto_params_id.clone(),
            final_state: self.state.workflow,
            cycles_completed: self.wraps,
            validation_retries: self.retries_total,
            resolutions_applied: self.resolutions,
            unmet_targets: self.unmet,
            severity_by_methodology: severity_by_methodology(self.done_sets.iter().chain(&self.cycle_sets)),
            analytics,
            simulations: self.simulations,
            verification: self.state.ledger.verify_chain(),
            findings: merged,
            ledger: self.state.ledger,
            keypair: self.keypair.expect("setup ran"),
        }
    }
}

/// Run every cycle of `config` to completion.
pub fn run_pipeline(config: PipelineConfig) -> Result<PipelineRunReport, OrchestratorError> {
    Pipeline::new(config)?.run()
}
