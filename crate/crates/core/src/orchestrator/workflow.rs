//! The five-phase protocol as a total state machine.
//!
//! ```text
//! Setup -> Assessment -> Remediation -> Validation -> Iteration -+
//!              ^              ^             |                    |
//!              |              +-- failed ---+                    |
//!              +------------------- cycle + 1 -------------------+
//! ```
//!
//! `Halt` is accepted in every phase and freezes the machine.

use serde::{Deserialize, Serialize};

use super::OrchestratorError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Phase {
    Setup,
    Assessment,
    Remediation,
    Validation,
    Iteration,
}

impl Phase {
    pub const ALL: [Phase; 5] = [
        Phase::Setup,
        Phase::Assessment,
        Phase::Remediation,
        Phase::Validation,
        Phase::Iteration,
    ];

    /// Successor on `PhaseComplete`. Iteration wraps to Assessment.
    pub fn successor(self) -> Phase {
        match self {
            Phase::Setup => Phase::Assessment,
            Phase::Assessment => Phase::Remediation,
            Phase::Remediation => Phase::Validation,
            Phase::Validation => Phase::Iteration,
            Phase::Iteration => Phase::Assessment,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WorkflowEvent {
    PhaseComplete,
    ValidationFailed,
    Halt,
}

impl WorkflowEvent {
    pub const ALL: [WorkflowEvent; 3] = [
        WorkflowEvent::PhaseComplete,
        WorkflowEvent::ValidationFailed,
        WorkflowEvent::Halt,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WorkflowState {
    pub phase: Phase,
    pub cycle: u64,
    pub halted: bool,
}

impl Default for WorkflowState {
    fn default() -> Self {
        WorkflowState {
            phase: Phase::Setup,
            cycle: 0,
            halted: false,
        }
    }
}

impl WorkflowState {
    /// The state after `event`, or `IllegalEvent` (leaving `self` untouched).
    pub fn next(&self, event: WorkflowEvent) -> Result<WorkflowState, OrchestratorError> {
        let illegal = || OrchestratorError::IllegalEvent {
            phase: self.phase,
            event,
        };
        if self.halted {
            return Err(illegal());
        }
        let mut next = *self;
        match (self.phase, event) {
            (_, WorkflowEvent::Halt) => next.halted = true,
            (Phase::Iteration, WorkflowEvent::PhaseComplete) => {
                next.phase = Phase::Assessment;
                next.cycle += 1;
            }
            (phase, WorkflowEvent::PhaseComplete) => next.phase = phase.successor(),
            (Phase::Validation, WorkflowEvent::ValidationFailed) => next.phase = Phase::Remediation,
            (_, WorkflowEvent::ValidationFailed) => return Err(illegal()),
        }
        Ok(next)
    }

    pub fn advance(&mut self, event: WorkflowEvent) -> Result<(), OrchestratorError> {
        *self = self.next(event)?;
        Ok(())
    }
}
