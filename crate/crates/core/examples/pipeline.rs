//! Drive the phased pipeline step by step over two cycles, then print the
//! report summary and a decrypted ledger payload.

use pqpt::orchestrator::{Pipeline, PipelineConfig};
use pqpt::pqcrypto::decrypt_payload;
use pqpt::redteam::paper_scenarios_with_trials;

fn main() {
    let mut config = PipelineConfig::paper_default(11);
    config.max_cycles = 2;
    config.scenario_configs = paper_scenarios_with_trials(2_000);

    let mut pipeline = Pipeline::new(config).unwrap();
    while let Some(phase) = pipeline.step().unwrap() {
        let s = pipeline.state();
        println!(
            "{phase:?} done: cycle {} clock {:>3} ledger {:>3} open {:>3}",
            s.cycle(),
            s.clock(),
            s.ledger().len(),
            s.open_findings().len()
        );
    }
    let report = pipeline.run().unwrap();
    println!("\nverification: {}", report.verification);
    println!("findings {}, resolutions {}", report.findings.len(), report.resolutions_applied);
    for sla in &report.analytics.sla {
        println!("  {:<24} {:>3}/{:<3} within {} days", sla.methodology, sla.within_window, sla.findings, sla.window_days);
    }

    let entry = report.ledger.entries().iter().find(|e| e.payload_encrypted).unwrap();
    let plain = decrypt_payload(&report.keypair.secret, &report.params, &entry.payload).unwrap();
    println!("\nentry {} decrypts to {}", entry.index, String::from_utf8(plain).unwrap());
}
