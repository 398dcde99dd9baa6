//! Monte Carlo red-team simulation.
//!
//! Each scenario is a Bernoulli(`success_prob`) trial repeated `trials`
//! times; every success draws an exponential detection delay. Trials are cut
//! into fixed-size blocks, each with its own sub-stream, so the parallel and
//! sequential runs are bit-identical.

use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{Day, Finding, FindingId, FindingSet, Methodology, VulnCategory};
use crate::prng::Prng;

/// Trials per sub-stream.
pub const TRIAL_BLOCK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RedTeamError {
    #[error("success probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("scenario needs at least one trial")]
    NoTrials,
    #[error("mean detection delay {0} must be finite and non-negative")]
    BadDelay(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AttackType {
    Phishing,
    AdversarialMl,
    QuantumDecryption,
}

impl AttackType {
    pub fn code(self) -> &'static str {
        match self {
            AttackType::Phishing => "PHISHING",
            AttackType::AdversarialMl => "ADVERSARIAL_ML",
            AttackType::QuantumDecryption => "QUANTUM_DECRYPTION",
        }
    }

    /// Quantum decryption attempts are hypothetical.
    pub fn is_theoretical(self) -> bool {
        self == AttackType::QuantumDecryption
    }

    pub fn finding_category(self) -> VulnCategory {
        match self {
            AttackType::Phishing => VulnCategory::PhishingSusceptibility,
            AttackType::AdversarialMl => VulnCategory::AdversarialMl,
            AttackType::QuantumDecryption => VulnCategory::QuantumDecryptionRisk,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScenario")]
pub struct ScenarioConfig {
    pub attack_type: AttackType,
    pub success_prob: f64,
    pub trials: u64,
    pub mean_detection_delay_days: f64,
}

#[derive(Deserialize)]
struct RawScenario {
    attack_type: AttackType,
    success_prob: f64,
    trials: u64,
    #[serde(default = "default_delay")]
    mean_detection_delay_days: f64,
}

fn default_delay() -> f64 {
    1.0
}

impl TryFrom<RawScenario> for ScenarioConfig {
    type Error = RedTeamError;

    fn try_from(r: RawScenario) -> Result<Self, Self::Error> {
        ScenarioConfig::new(r.attack_type, r.success_prob, r.trials, r.mean_detection_delay_days)
    }
}

impl ScenarioConfig {
    pub fn new(
        attack_type: AttackType,
        success_prob: f64,
        trials: u64,
        mean_detection_delay_days: f64,
    ) -> Result<Self, RedTeamError> {
        if !(0.0..=1.0).contains(&success_prob) {
            return Err(RedTeamError::BadProbability(success_prob));
        }
        if trials == 0 {
            return Err(RedTeamError::NoTrials);
        }
        if !mean_detection_delay_days.is_finite() || mean_detection_delay_days < 0.0 {
            return Err(RedTeamError::BadDelay(mean_detection_delay_days));
        }
        Ok(ScenarioConfig {
            attack_type,
            success_prob,
            trials,
            mean_detection_delay_days,
        })
    }
}

/// The three published scenarios at `trials` each: phishing 65%,
/// adversarial ML 40%, quantum decryption 0%.
pub fn paper_scenarios_with_trials(trials: u64) -> Vec<ScenarioConfig> {
    [
        (AttackType::Phishing, 0.65),
        (AttackType::AdversarialMl, 0.40),
        (AttackType::QuantumDecryption, 0.0),
    ]
    .into_iter()
    .map(|(t, p)| ScenarioConfig::new(t, p, trials, default_delay()).expect("valid constants"))
    .collect()
}

/// [`paper_scenarios_with_trials`] at 10 000 trials.
pub fn paper_scenarios() -> Vec<ScenarioConfig> {
    paper_scenarios_with_trials(10_000)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioOutcome {
    pub attack_type: AttackType,
    pub trials: u64,
    pub successes: u64,
    pub observed_rate: f64,
    /// Mean over successful trials; 0 when there were none.
    pub mean_detection_delay: f64,
    pub theoretical_flag: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub scenarios: Vec<ScenarioOutcome>,
}

impl SimulationReport {
    pub fn get(&self, attack_type: AttackType) -> Option<&ScenarioOutcome> {
        self.scenarios.iter().find(|s| s.attack_type == attack_type)
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct BlockTally {
    successes: u64,
    delay_sum: f64,
}

fn run_block(cfg: &ScenarioConfig, mut prng: Prng, trials: u64) -> BlockTally {
    let exp = (cfg.mean_detection_delay_days > 0.0)
        .then(|| Exp::new(1.0 / cfg.mean_detection_delay_days).expect("positive rate"));
    let mut tally = BlockTally::default();
    for _ in 0..trials {
        if prng.next_unit() < cfg.success_prob {
            tally.successes += 1;
            if let Some(exp) = &exp {
                tally.delay_sum += exp.sample(&mut prng);
            }
        }
    }
    tally
}

fn run_scenario(cfg: &ScenarioConfig, stream: &Prng, parallel: bool) -> ScenarioOutcome {
    let blocks = cfg.trials.div_ceil(TRIAL_BLOCK);
    let block = |b: u64| {
        let n = TRIAL_BLOCK.min(cfg.trials - b * TRIAL_BLOCK);
        run_block(cfg, stream.substream(format!("block/{b}")), n)
    };
    let tallies: Vec<BlockTally> = if parallel {
        (0..blocks).into_par_iter().map(block).collect()
    } else {
        (0..blocks).map(block).collect()
    };
    // Fold in block order so the float sum does not depend on scheduling.
    let (successes, delay_sum) = tallies
        .iter()
        .fold((0u64, 0.0f64), |(s, d), t| (s + t.successes, d + t.delay_sum));
    ScenarioOutcome {
        attack_type: cfg.attack_type,
        trials: cfg.trials,
        successes,
        observed_rate: successes as f64 / cfg.trials as f64,
        mean_detection_delay: if successes == 0 { 0.0 } else { delay_sum / successes as f64 },
        theoretical_flag: cfg.attack_type.is_theoretical(),
    }
}

fn scenario_stream(prng: &Prng, index: usize, cfg: &ScenarioConfig) -> Prng {
    prng.substream(format!("scenario/{index}/{}", cfg.attack_type.code()))
}

/// Run every scenario, parallel across trial blocks.
pub fn run_simulation(configs: &[ScenarioConfig], prng: &Prng) -> SimulationReport {
    SimulationReport {
        scenarios: configs
            .iter()
            .enumerate()
            .map(|(i, c)| run_scenario(c, &scenario_stream(prng, i, c), true))
            .collect(),
    }
}

/// Single-threaded reference for [`run_simulation`]; results are identical.
pub fn run_simulation_sequential(configs: &[ScenarioConfig], prng: &Prng) -> SimulationReport {
    SimulationReport {
        scenarios: configs
            .iter()
            .enumerate()
            .map(|(i, c)| run_scenario(c, &scenario_stream(prng, i, c), false))
            .collect(),
    }
}

/// One finding per non-theoretical attack class that succeeded at least once.
pub fn attack_findings(report: &SimulationReport, master_seed: u64, detected_at: Day) -> FindingSet {
    attack_findings_labelled(report, master_seed, b"redteam", detected_at)
}

pub(crate) fn attack_findings_labelled(
    report: &SimulationReport,
    master_seed: u64,
    label: &[u8],
    detected_at: Day,
) -> FindingSet {
    let mut set = FindingSet::new("simulated:REDTEAM");
    let mut seen = Vec::new();
    for s in &report.scenarios {
        if s.successes == 0 || s.theoretical_flag || seen.contains(&s.attack_type) {
            continue;
        }
        seen.push(s.attack_type);
        let id = FindingId::derive(master_seed, Methodology::RedTeam, label, seen.len() as u64 - 1);
        let target = format!("redteam/{}", s.attack_type.code().to_ascii_lowercase());
        set.push(Finding::open(id, Methodology::RedTeam, s.attack_type.finding_category(), target, detected_at))
            .expect("distinct ids");
    }
    set
}
