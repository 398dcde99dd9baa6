//! Monte Carlo red-team scenarios, parallel and sequential.

use pqpt::derive_stream;
use pqpt::redteam::{attack_findings, paper_scenarios, run_simulation, run_simulation_sequential, AttackType, ScenarioConfig};

fn main() {
    let prng = derive_stream(2024, "redteam");
    let mut configs = paper_scenarios();
    configs.push(ScenarioConfig::new(AttackType::Phishing, 0.15, 50_000, 3.0).unwrap());

    let report = run_simulation(&configs, &prng);
    for s in &report.scenarios {
        println!(
            "{:<20} {:>6}/{:<6} rate {:.4}  mean delay {:.2} d{}",
            s.attack_type.code(),
            s.successes,
            s.trials,
            s.observed_rate,
            s.mean_detection_delay,
            if s.theoretical_flag { "  (theoretical)" } else { "" }
        );
    }
    assert_eq!(report, run_simulation_sequential(&configs, &prng));
    println!("parallel and sequential runs agree");

    for f in &attack_findings(&report, 2024, 0) {
        println!("finding {} {:?} {:?}", f.id(), f.category(), f.severity());
    }
}
