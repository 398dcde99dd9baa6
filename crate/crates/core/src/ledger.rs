//! Append-only, SHA-256 hash-chained audit ledger.
//!
//! Each entry commits to its own fields and to the hash of its predecessor, so
//! editing any stored byte after the fact breaks verification at (or before)
//! the edited entry. The on-disk and export format is JSON lines.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::domain::Day;

pub type Hash32 = [u8; 32];

pub const GENESIS_PREV_HASH: Hash32 = [0u8; 32];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("timestamp {got} precedes last entry timestamp {last}")]
    NonMonotoneTimestamp { last: Day, got: Day },
    #[error("payload of {0} bytes exceeds the 4-byte length field")]
    PayloadTooLarge(usize),
    #[error("audit line {line}: {message}")]
    Import { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventType {
    VulnerabilityDetection,
    RemediationAction,
    SystemChange,
}

impl EventType {
    pub const ALL: [EventType; 3] = [
        EventType::VulnerabilityDetection,
        EventType::RemediationAction,
        EventType::SystemChange,
    ];

    pub fn code(self) -> u8 {
        match self {
            EventType::VulnerabilityDetection => 0,
            EventType::RemediationAction => 1,
            EventType::SystemChange => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerEntry {
    pub index: u64,
    pub timestamp: Day,
    pub event_type: EventType,
    pub payload: Vec<u8>,
    pub payload_encrypted: bool,
    pub prev_hash: Hash32,
    pub entry_hash: Hash32,
}

impl LedgerEntry {
    /// Hash over the canonical byte layout:
    /// `index u64 BE || timestamp u64 BE || event_type u8 || encrypted u8 ||
    /// payload_len u32 BE || payload || prev_hash`.
    pub fn compute_hash(&self) -> Hash32 {
        let mut h = Sha256::new();
        h.update(self.index.to_be_bytes());
        h.update(self.timestamp.to_be_bytes());
        h.update([self.event_type.code(), u8::from(self.payload_encrypted)]);
        h.update((self.payload.len() as u32).to_be_bytes());
        h.update(&self.payload);
        h.update(self.prev_hash);
        h.finalize().into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationKind {
    HashMismatch,
    LinkMismatch,
    IndexGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerificationOutcome {
    Valid,
    Violation { index: u64, kind: ViolationKind },
}

impl VerificationOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, VerificationOutcome::Valid)
    }
}

impl fmt::Display for VerificationOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerificationOutcome::Valid => f.write_str("valid"),
            VerificationOutcome::Violation { index, kind } => {
                write!(f, "violation at entry {index}: {kind:?}")
            }
        }
    }
}

/// Single-writer ledger. Entries can only be added through [`Ledger::append`];
/// [`Ledger::from_entries`] exists for imports and rebuilds nothing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ledger {
    entries: Vec<LedgerEntry>,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Wrap already-stored entries without checking them. Use
    /// [`Ledger::verify_chain`] to find out whether they are intact.
    pub fn from_entries(entries: Vec<LedgerEntry>) -> Self {
        Ledger { entries }
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<LedgerEntry> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last_timestamp(&self) -> Option<Day> {
        self.entries.last().map(|e| e.timestamp)
    }

    pub fn append(
        &mut self,
        timestamp: Day,
        event_type: EventType,
        payload: Vec<u8>,
        payload_encrypted: bool,
    ) -> Result<&LedgerEntry, LedgerError> {
        if let Some(last) = self.last_timestamp() {
            if timestamp < last {
                return Err(LedgerError::NonMonotoneTimestamp { last, got: timestamp });
            }
        }
        if u32::try_from(payload.len()).is_err() {
            return Err(LedgerError::PayloadTooLarge(payload.len()));
        }
        let prev_hash = self.entries.last().map_or(GENESIS_PREV_HASH, |e| e.entry_hash);
        let mut entry = LedgerEntry {
            index: self.entries.len() as u64,
            timestamp,
            event_type,
            payload,
            payload_encrypted,
            prev_hash,
            entry_hash: [0; 32],
        };
        entry.entry_hash = entry.compute_hash();
        self.entries.push(entry);
        Ok(self.entries.last().expect("just pushed"))
    }

    /// Walk the chain front to back and report the first broken entry.
    pub fn verify_chain(&self) -> VerificationOutcome {
        let mut expected_prev = GENESIS_PREV_HASH;
        for (i, e) in self.entries.iter().enumerate() {
            let i = i as u64;
            let violation = if e.index != i {
                Some(ViolationKind::IndexGap)
            } else if e.prev_hash != expected_prev {
                Some(ViolationKind::LinkMismatch)
            } else if e.compute_hash() != e.entry_hash {
                Some(ViolationKind::HashMismatch)
            } else {
                None
            };
            if let Some(kind) = violation {
                return VerificationOutcome::Violation { index: i, kind };
            }
            expected_prev = e.entry_hash;
        }
        VerificationOutcome::Valid
    }

    pub fn summarize_events(&self) -> BTreeMap<EventType, usize> {
        let mut out: BTreeMap<EventType, usize> = EventType::ALL.iter().map(|&t| (t, 0)).collect();
        for e in &self.entries {
            *out.get_mut(&e.event_type).expect("all event types seeded") += 1;
        }
        out
    }

    /// JSON-lines export, one entry per `\n`-terminated line.
    pub fn export_audit(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for e in &self.entries {
            let line = AuditLine {
                index: e.index,
                timestamp: e.timestamp,
                event_type: e.event_type,
                payload_encrypted: e.payload_encrypted,
                payload_hex: hex::encode(&e.payload),
                prev_hash_hex: hex::encode(e.prev_hash),
                entry_hash_hex: hex::encode(e.entry_hash),
            };
            serde_json::to_writer(&mut out, &line).expect("audit line serializes");
            out.push(b'\n');
        }
        out
    }

    /// Inverse of [`Ledger::export_audit`]. Blank lines are skipped. The chain
    /// is not verified here.
    pub fn import_audit(document: &[u8]) -> Result<Ledger, LedgerError> {
        let text = std::str::from_utf8(document).map_err(|e| LedgerError::Import {
            line: 0,
            message: e.to_string(),
        })?;
        let mut entries = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: String| LedgerError::Import { line: n + 1, message };
            let raw: AuditLine = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
            entries.push(LedgerEntry {
                index: raw.index,
                timestamp: raw.timestamp,
                event_type: raw.event_type,
                payload_encrypted: raw.payload_encrypted,
                payload: hex::decode(&raw.payload_hex).map_err(|e| err(format!("payload_hex: {e}")))?,
                prev_hash: decode_hash(&raw.prev_hash_hex).map_err(|m| err(format!("prev_hash_hex: {m}")))?,
                entry_hash: decode_hash(&raw.entry_hash_hex)
                    .map_err(|m| err(format!("entry_hash_hex: {m}")))?,
            });
        }
        Ok(Ledger { entries })
    }
}

fn decode_hash(s: &str) -> Result<Hash32, String> {
    let mut out = [0u8; 32];
    hex::decode_to_slice(s, &mut out).map_err(|e| e.to_string())?;
    Ok(out)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AuditLine {
    index: u64,
    timestamp: Day,
    event_type: EventType,
    payload_encrypted: bool,
    payload_hex: String,
    prev_hash_hex: String,
    entry_hash_hex: String,
}

/// Replays the published six-month logging summary: 200 detections, 150
/// remediation actions and 150 system changes, 500 entries in all.
///
/// The timeline is 50 iterations spread over 180 days. Each iteration logs a
/// phase-start system change, three detection→remediation pairs, one
/// unremediated detection, then a validation and an iteration system change.
pub fn paper_scenario_ledger() -> Ledger {
    const ITERATIONS: u64 = 50;
    const SPAN_DAYS: u64 = 180;
    let mut ledger = Ledger::new();
    let mut detection = 0u64;
    let push = |ledger: &mut Ledger, day: Day, kind: EventType, body: serde_json::Value| {
        let payload = serde_json::to_vec(&body).expect("json payload");
        ledger.append(day, kind, payload, false).expect("monotone replay");
    };
    for it in 0..ITERATIONS {
        let day = it * SPAN_DAYS / ITERATIONS;
        push(
            &mut ledger,
            day,
            EventType::SystemChange,
            serde_json::json!({"change": "assessment_start", "iteration": it}),
        );
        for pair in 0..4 {
            let id = detection;
            detection += 1;
            push(
                &mut ledger,
                day,
                EventType::VulnerabilityDetection,
                serde_json::json!({"detection": id, "iteration": it}),
            );
            if pair < 3 {
                push(
                    &mut ledger,
                    day,
                    EventType::RemediationAction,
                    serde_json::json!({"remediates": id, "iteration": it}),
                );
            }
        }
        push(
            &mut ledger,
            day,
            EventType::SystemChange,
            serde_json::json!({"change": "validation_pass", "iteration": it}),
        );
        push(
            &mut ledger,
            day,
            EventType::SystemChange,
            serde_json::json!({"change": "iteration", "iteration": it}),
        );
    }
    ledger
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Ledger {
        let mut l = Ledger::new();
        l.append(0, EventType::SystemChange, b"setup".to_vec(), false).unwrap();
        l.append(1, EventType::VulnerabilityDetection, b"{\"x\":1}".to_vec(), false).unwrap();
        l.append(1, EventType::RemediationAction, vec![], true).unwrap();
        l
    }

    #[test]
    fn genesis_and_linking() {
        let l = small();
        assert_eq!(l.entries()[0].index, 0);
        assert_eq!(l.entries()[0].prev_hash, [0u8; 32]);
        assert_eq!(l.entries()[1].prev_hash, l.entries()[0].entry_hash);
        assert_eq!(l.entries()[2].prev_hash, l.entries()[1].entry_hash);
        assert!(l.verify_chain().is_valid());
    }

    #[test]
    fn rejects_time_travel() {
        let mut l = small();
        let err = l.append(0, EventType::SystemChange, vec![], false).unwrap_err();
        assert_eq!(err, LedgerError::NonMonotoneTimestamp { last: 1, got: 0 });
        assert_eq!(l.len(), 3);
    }

    #[test]
    fn empty_ledger() {
        let l = Ledger::new();
        assert!(l.verify_chain().is_valid());
        assert!(l.export_audit().is_empty());
        assert!(l.summarize_events().values().all(|&n| n == 0));
        assert_eq!(Ledger::import_audit(b"").unwrap(), l);
    }

    #[test]
    fn three_system_changes() {
        let mut l = Ledger::new();
        for d in 0..3 {
            l.append(d, EventType::SystemChange, vec![], false).unwrap();
        }
        let s = l.summarize_events();
        assert_eq!(s[&EventType::VulnerabilityDetection], 0);
        assert_eq!(s[&EventType::RemediationAction], 0);
        assert_eq!(s[&EventType::SystemChange], 3);
    }

    #[test]
    fn violation_kinds() {
        let base = small().into_entries();

        let mut e = base.clone();
        e[1].payload[0] ^= 1;
        assert_eq!(
            Ledger::from_entries(e).verify_chain(),
            VerificationOutcome::Violation { index: 1, kind: ViolationKind::HashMismatch }
        );

        let mut e = base.clone();
        e[2].prev_hash[5] ^= 0x80;
        assert_eq!(
            Ledger::from_entries(e).verify_chain(),
            VerificationOutcome::Violation { index: 2, kind: ViolationKind::LinkMismatch }
        );

        let mut e = base.clone();
        e.remove(1);
        assert_eq!(
            Ledger::from_entries(e).verify_chain(),
            VerificationOutcome::Violation { index: 1, kind: ViolationKind::IndexGap }
        );

        // Rewriting the hash of entry 0 is caught at entry 0, not at the link.
        let mut e = base;
        e[0].entry_hash[0] ^= 1;
        assert_eq!(
            Ledger::from_entries(e).verify_chain(),
            VerificationOutcome::Violation { index: 0, kind: ViolationKind::HashMismatch }
        );
    }

    #[test]
    fn export_format() {
        let l = small();
        let doc = String::from_utf8(l.export_audit()).unwrap();
        let lines: Vec<&str> = doc.lines().collect();
        assert_eq!(lines.len(), 3);
        let v: serde_json::Value = serde_json::from_str(lines[2]).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = vec![
            "index",
            "timestamp",
            "event_type",
            "payload_encrypted",
            "payload_hex",
            "prev_hash_hex",
            "entry_hash_hex",
        ];
        expected.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, expected);
        assert_eq!(v["event_type"], "REMEDIATION_ACTION");
        assert_eq!(v["payload_hex"], "");
        let h = v["entry_hash_hex"].as_str().unwrap();
        assert_eq!(h, h.to_lowercase());
        assert_eq!(Ledger::import_audit(doc.as_bytes()).unwrap(), l);
    }

    #[test]
    fn import_rejects_garbage() {
        assert!(matches!(
            Ledger::import_audit(b"{\"index\":0}\n"),
            Err(LedgerError::Import { line: 1, .. })
        ));
        let doc = small().export_audit();
        let bad = String::from_utf8(doc).unwrap().replacen("prev_hash_hex\":\"00", "prev_hash_hex\":\"zz", 1);
        assert!(Ledger::import_audit(bad.as_bytes()).is_err());
    }

    #[test]
    fn paper_replay_counts() {
        let l = paper_scenario_ledger();
        assert_eq!(l.len(), 500);
        let s = l.summarize_events();
        assert_eq!(s[&EventType::VulnerabilityDetection], 200);
        assert_eq!(s[&EventType::RemediationAction], 150);
        assert_eq!(s[&EventType::SystemChange], 150);
        assert!(l.verify_chain().is_valid());
        assert!(l.last_timestamp().unwrap() < 180);
    }
}
