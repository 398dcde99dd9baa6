//! The phased protocol that drives a full run: setup, assessment,
//! remediation, validation and iteration, with every artifact logged to the
//! audit ledger.

mod config;
mod pipeline;
mod remediation;
mod replay;
mod workflow;

use thiserror::Error;

use crate::ledger::{LedgerError, VerificationOutcome};
use crate::pqcrypto::CryptoError;

pub use config::{quota, PipelineConfig, RemediationPolicy, SEED_ENV};
pub use pipeline::{advance, run_pipeline, Pipeline, PipelineRunReport, PipelineState, MAX_VALIDATION_RETRIES};
pub use remediation::{remediation_pass, unmet_targets, Resolution, UnmetTarget};
pub use replay::{replay_paper_scenario, PaperReplay, PAPER_SEED};
pub use workflow::{Phase, WorkflowEvent, WorkflowState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrchestratorError {
    #[error("{event:?} is not legal in phase {phase:?}")]
    IllegalEvent { phase: Phase, event: WorkflowEvent },
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("ledger corrupt: {0}")]
    LedgerCorrupt(VerificationOutcome),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Crypto(#[from] CryptoError),
}

impl OrchestratorError {
    /// Process exit code: 1 for usage and configuration problems, 3 for a
    /// corrupt ledger.
    pub fn exit_code(&self) -> i32 {
        match self {
            OrchestratorError::LedgerCorrupt(_) => 3,
            _ => 1,
        }
    }
}
