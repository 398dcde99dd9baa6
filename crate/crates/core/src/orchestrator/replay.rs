use super::config::PipelineConfig;
use super::pipeline::{run_pipeline, PipelineRunReport};
use crate::ledger::{paper_scenario_ledger, Ledger, VerificationOutcome};

pub const PAPER_SEED: u64 = 42;

/// The canned published run. `run` is a one-cycle pipeline over the published
/// profiles, scenarios, remediation rates and cost rows. `audit_ledger` is the
/// separate six-month, 500-entry audit trail; a pipeline run logs one
/// system change at setup plus two per cycle, so it can never contain 150 of
/// them.
#[derive(Debug, Clone)]
pub struct PaperReplay {
    pub run: PipelineRunReport,
    pub audit_ledger: Ledger,
    pub audit_verification: VerificationOutcome,
}

pub fn replay_paper_scenario() -> PaperReplay {
    let run = run_pipeline(PipelineConfig::paper_default(PAPER_SEED)).expect("published configuration is valid");
    let audit_ledger = paper_scenario_ledger();
    let audit_verification = audit_ledger.verify_chain();
    PaperReplay {
        run,
        audit_ledger,
        audit_verification,
    }
}
