//! Deterministic penetration-testing orchestration.
//!
//! The crate bundles simulated DAST/SAST/IAST scanners and report ingestion
//! ([`scanners`]), a SHA-256 hash-chained audit ledger ([`ledger`]), a ring-LWE
//! encryption scheme with an exhaustive key-recovery harness ([`pqcrypto`]),
//! Monte Carlo red-team simulation ([`redteam`]), severity and
//! cost-effectiveness analytics ([`analytics`]) and the phased workflow that
//! drives a full run ([`orchestrator`]).
//!
//! Every random draw comes from a [`prng::Prng`] stream derived from a master
//! seed, so a run is reproducible byte for byte.

pub mod analytics;
pub mod domain;
pub mod ledger;
pub mod orchestrator;
pub mod pqcrypto;
pub mod prng;
pub mod redteam;
pub mod scanners;

pub use domain::{
    severity_for, Day, DomainError, Finding, FindingId, FindingSet, Methodology, Severity, Status,
    VulnCategory,
};
pub use prng::{derive_stream, Prng};
