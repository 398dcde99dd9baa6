//! Append to a hash-chained ledger, export it, flip one bit and watch
//! verification point at the damaged entry.

use pqpt::ledger::{EventType, Ledger};

fn main() {
    let mut ledger = Ledger::new();
    ledger.append(0, EventType::SystemChange, b"{\"change\":\"setup\"}".to_vec(), false).unwrap();
    for day in 1..=5u64 {
        let payload = format!("{{\"finding\":{day}}}").into_bytes();
        ledger.append(day, EventType::VulnerabilityDetection, payload, false).unwrap();
    }
    ledger.append(9, EventType::RemediationAction, b"{\"finding\":2}".to_vec(), false).unwrap();

    println!("{} entries, {}", ledger.len(), ledger.verify_chain());
    for (kind, count) in ledger.summarize_events() {
        println!("  {kind:?}: {count}");
    }

    let exported = ledger.export_audit();
    let mut entries = Ledger::import_audit(&exported).unwrap().into_entries();
    entries[3].payload[0] ^= 0x01;
    let tampered = Ledger::from_entries(entries);
    println!("after tampering: {}", tampered.verify_chain());

    if ledger.append(8, EventType::SystemChange, Vec::new(), false).is_err() {
        println!("out-of-order timestamp rejected");
    }
}
