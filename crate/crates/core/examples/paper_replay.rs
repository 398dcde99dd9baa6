//! Replay the published scenario and print every golden table.

use pqpt::analytics::{emit_report, resolution_csv, severity_csv, sla_csv, ReportFormat};
use pqpt::orchestrator::replay_paper_scenario;

fn main() {
    let replay = replay_paper_scenario();
    let a = &replay.run.analytics;
    for table in [
        severity_csv(&a.severity_summaries),
        emit_report(a, ReportFormat::Csv),
        resolution_csv(&a.resolution_rates),
        sla_csv(&a.sla),
    ] {
        println!("{}", String::from_utf8(table).unwrap());
    }
    for s in &replay.run.simulations[0].scenarios {
        println!("{:<20} rate {:.4}", s.attack_type.code(), s.observed_rate);
    }
    println!("\naudit trail: {} entries, {}", replay.audit_ledger.len(), replay.audit_verification);
    for (kind, count) in replay.audit_ledger.summarize_events() {
        println!("  {kind:?}: {count}");
    }
}
