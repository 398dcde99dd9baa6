//! Simulate the three scanners, merge their findings and print severity
//! tables, then ingest a small external report.

use pqpt::analytics::{severity_by_methodology, severity_summary};
use pqpt::scanners::{ingest_report, merge, paper_profile, simulate_scan};
use pqpt::{derive_stream, Methodology};

fn main() {
    let seed = 1;
    let sets: Vec<_> = [Methodology::Dast, Methodology::Sast, Methodology::Iast]
        .into_iter()
        .map(|m| {
            let profile = paper_profile(m).unwrap();
            simulate_scan(&profile, &mut derive_stream(seed, format!("scan/{}", m.code())))
        })
        .collect();

    println!("{:<28} {:>5} {:>8} {:>5} {:>6} {:>4}", "methodology", "total", "critical", "high", "medium", "low");
    for row in severity_by_methodology(&sets).iter().chain(&severity_summary(&sets)) {
        println!(
            "{:<28} {:>5} {:>8} {:>5} {:>6} {:>4}",
            row.methodology, row.total, row.critical, row.high, row.medium, row.low
        );
    }

    let merged = merge(&sets).unwrap();
    println!("\nmerged {} findings ({})", merged.len(), merged.provenance());

    let report = br#"[{
        "id": "000102030405060708090a0b0c0d0e0f",
        "methodology": "DAST",
        "category": "SQL_INJECTION",
        "severity": "CRITICAL",
        "target": "/login",
        "detected_at": 3,
        "status": "OPEN"
    }]"#;
    let ingested = ingest_report(report).unwrap();
    let f = &ingested.findings()[0];
    println!("ingested {} {:?} at {} ({})", f.id(), f.category(), f.target(), ingested.provenance());
}
