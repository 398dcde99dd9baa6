//! Cost-effectiveness table for the published rows plus a custom one.

use pqpt::analytics::{derive_costs, emit_report, paper_cost_records, AnalyticsReport, CostRecord, ReportFormat};

fn main() {
    let mut records = paper_cost_records();
    records.push(CostRecord::new("Fuzzing pilot", 12_000, 1_500, 3, 4_000, 0, 0, 7.0));

    let report = AnalyticsReport {
        cost_effectiveness: records.iter().map(|r| derive_costs(r).unwrap()).collect(),
        ..Default::default()
    };
    print!("{}", String::from_utf8(emit_report(&report, ReportFormat::Csv)).unwrap());

    let best = report
        .cost_effectiveness
        .iter()
        .filter_map(|d| d.cost_per_resolved.map(|c| (c, &d.methodology)))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    println!("\ncheapest per resolution: {} at ${:.2}", best.1, best.0);
}
