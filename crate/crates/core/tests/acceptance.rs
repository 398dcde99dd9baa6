//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line
//! and the target exits non-zero if any criterion fails.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use pqpt::analytics::{remediation_sla, resolution_rate, severity_by_methodology, severity_summary};
use pqpt::ledger::{EventType, Ledger, VerificationOutcome};
use pqpt::orchestrator::{advance, remediation_pass, replay_paper_scenario, Pipeline, PipelineConfig, PipelineState, Phase, RemediationPolicy, WorkflowEvent};
use pqpt::pqcrypto::{
    decrypt, decrypt_payload, encrypt, encrypt_payload, keygen, simulate_quantum_attack, AttackOutcome, Poly, Ring,
    RlweParams,
};
use pqpt::redteam::{paper_scenarios, run_simulation, AttackType};
use pqpt::scanners::{paper_profile, simulate_scan, ScanProfile};
use pqpt::{derive_stream, Finding, FindingId, FindingSet, Methodology, VulnCategory};
use rand::Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_pqpt"));
    c.env_remove("PQPT_SEED");
    c
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Printed derived columns: total, per detected, per resolved, efficiency.
const PRINTED_COSTS: [(&str, f64, f64, f64, f64); 5] = [
    ("DAST & SAST", 130000.0, 787.8787878787880, 1000.0, 8.666666666666670),
    ("IAST", 103000.0, 1183.9080459770100, 1471.4285714285700, 7.0),
    ("Blockchain Logging", 215000.0, 430.0, 477.7777777777800, 90.0),
    ("Quantum Cryptography", 177000.0, 680.7692307692310, 804.5454545454550, 11.0),
    ("Red Team AI Simulations", 138000.0, 46000.0, 46000.0, 0.12),
];

fn cost_model() -> Check {
    let out = bin().arg("replay-paper").output().map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "replay-paper exited {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    ensure!(
        lines.next() == Some("methodology,total_cost,cost_per_detected,cost_per_resolved,efficiency"),
        "bad header"
    );
    let mut worst = 0.0f64;
    for expected in PRINTED_COSTS {
        let line = lines.next().ok_or("missing row")?;
        let cols: Vec<&str> = line.split(',').collect();
        ensure!(cols[0] == expected.0, "row {line}");
        for (got, want) in cols[1..].iter().zip([expected.1, expected.2, expected.3, expected.4]) {
            let got: f64 = got.parse().map_err(|_| format!("unparsable {got}"))?;
            worst = worst.max(rel(got, want));
        }
    }
    ensure!(lines.next().is_none(), "extra rows");
    ensure!(worst < 1e-6, "worst relative error {worst:e}");
    Ok(format!("5 rows x 4 columns, worst relative error {worst:.1e}"))
}

fn severity_tables() -> Check {
    let sets: Vec<FindingSet> = [Methodology::Dast, Methodology::Sast, Methodology::Iast]
        .into_iter()
        .map(|m| simulate_scan(&paper_profile(m).unwrap(), &mut derive_stream(42, format!("scan/{}", m.code()))))
        .collect();
    let detail = severity_by_methodology(&sets);
    let merged = severity_summary(&sets);
    let row = |rows: &[pqpt::analytics::SeveritySummary], label: &str| {
        rows.iter()
            .find(|r| r.methodology == label)
            .map(|r| (r.total, r.critical, r.high, r.medium, r.low))
    };
    ensure!(row(&detail, "DAST") == Some((53, 10, 15, 8, 20)), "DAST {:?}", row(&detail, "DAST"));
    ensure!(row(&detail, "SAST") == Some((112, 30, 20, 62, 0)), "SAST {:?}", row(&detail, "SAST"));
    ensure!(row(&merged, "IAST") == Some((87, 25, 18, 44, 0)), "IAST {:?}", row(&merged, "IAST"));
    let total = row(&merged, "DAST & SAST").map(|r| r.0);
    ensure!(total == Some(165), "DAST & SAST total {total:?}");
    Ok("DAST 53, SAST 112, IAST 87, merged 165".into())
}

fn ledger_integrity() -> Check {
    let replay = replay_paper_scenario();
    let ledger = &replay.audit_ledger;
    let s = ledger.summarize_events();
    let counts = (
        s[&EventType::VulnerabilityDetection],
        s[&EventType::RemediationAction],
        s[&EventType::SystemChange],
    );
    ensure!(ledger.len() == 500 && counts == (200, 150, 150), "{} entries, {counts:?}", ledger.len());
    ensure!(replay.audit_verification == VerificationOutcome::Valid, "{}", replay.audit_verification);
    let mut rng = derive_stream(2718, "acceptance/tamper");
    let trials = 250;
    for t in 0..trials {
        let mut entries = ledger.entries().to_vec();
        let i = common::ledger::flip_random_bit(&mut entries, &mut rng);
        let expected = common::ledger::locate(&entries);
        let got = Ledger::from_entries(entries).verify_chain();
        ensure!(
            got == expected && matches!(got, VerificationOutcome::Violation { index, .. } if index == i as u64),
            "trial {t}: flipped entry {i}, verify_chain {got}, oracle {expected}"
        );
    }
    Ok(format!("500 entries 200/150/150 valid; {trials} single-bit tamperings localized"))
}

fn crypto_correctness() -> Check {
    let mut bit_errors = 0usize;
    for params in [RlweParams::std256(), RlweParams::std512()] {
        let n = params.n();
        for i in 0..1000u64 {
            let kp = keygen(&params, &mut derive_stream(i, format!("acc/{}/k", params.name()))).unwrap();
            let mut prng = derive_stream(i, format!("acc/{}/m", params.name()));
            let m: Vec<bool> = (0..n).map(|_| prng.random()).collect();
            let ct = encrypt(&kp.public, &params, &m, &mut prng).unwrap();
            let back = decrypt(&kp.secret, &params, &ct).unwrap();
            bit_errors += m.iter().zip(&back).filter(|(a, b)| a != b).count();
        }
    }
    ensure!(bit_errors == 0, "{bit_errors} bit errors");

    let mut rng = common::stream(4, "acceptance/ntt");
    let mut pairs = 0;
    for params in [RlweParams::std256(), RlweParams::std512()] {
        let ring = Ring::new(&params);
        ensure!(ring.has_ntt(), "{} has no fast multiplier", params.name());
        for _ in 0..1000 {
            let a = Poly::from_signed(common::uniform(&mut rng, params.n(), params.q()), params.q());
            let b = Poly::from_signed(common::uniform(&mut rng, params.n(), params.q()), params.q());
            ensure!(ring.mul_ntt(&a, &b) == a.mul_schoolbook(&b), "multiplier disagreement on {}", params.name());
            pairs += 1;
        }
    }

    let params = RlweParams::std256();
    let kp = keygen(&params, &mut derive_stream(11, "acc/payload/k")).unwrap();
    let mut prng = derive_stream(11, "acc/payload");
    for i in 0..200 {
        let len = if i == 0 { 0 } else if i == 1 { 4096 } else { prng.random_range(0..=4096) };
        let payload: Vec<u8> = (0..len).map(|_| prng.random()).collect();
        let blob = encrypt_payload(&kp.public, &params, &payload, &mut prng).unwrap();
        ensure!(decrypt_payload(&kp.secret, &params, &blob).unwrap() == payload, "payload {i} (len {len})");
    }
    Ok(format!("2000 round trips, 0 bit errors; {pairs} multiplier pairs agree; 200 payloads"))
}

fn attack_sensitivity() -> Check {
    let toy = RlweParams::toy4();
    let kp = keygen(&toy, &mut derive_stream(1, "keygen")).unwrap();
    let m = [true, false, true, false];
    let ct = encrypt(&kp.public, &toy, &m, &mut derive_stream(3, "encrypt")).unwrap();
    let r = simulate_quantum_attack(&toy, &kp.public, &ct, &m, &BigUint::from(1_000u32));
    ensure!(r.keyspace_size == BigUint::from(81u32), "TOY-4 keyspace {}", r.keyspace_size);
    ensure!(r.keys_tried <= BigUint::from(81u32), "tried {}", r.keys_tried);
    ensure!(
        r.outcome == AttackOutcome::Recovered { secret: kp.secret.centered() },
        "TOY-4 outcome {:?}",
        r.outcome
    );
    let toy_tried = r.keys_tried.clone();

    let std = RlweParams::std256();
    let kp = keygen(&std, &mut derive_stream(2, "keygen")).unwrap();
    let mut prng = derive_stream(2, "msg");
    let m: Vec<bool> = (0..256).map(|_| prng.random()).collect();
    let ct = encrypt(&kp.public, &std, &m, &mut prng).unwrap();
    let r = simulate_quantum_attack(&std, &kp.public, &ct, &m, &BigUint::from(1_000_000u32));
    ensure!(r.outcome == AttackOutcome::BudgetExceeded, "STD-256 outcome {:?}", r.outcome);
    ensure!(r.keyspace_size == BigUint::from(5u32).pow(256), "STD-256 keyspace wrong");
    ensure!(r.keys_tried == BigUint::from(1_000_000u32), "tried {}", r.keys_tried);
    Ok(format!("TOY-4 recovered after {toy_tried}/81; STD-256 budget exceeded, keyspace 5^256 exact"))
}

fn redteam_rates() -> Check {
    let report = run_simulation(&paper_scenarios(), &derive_stream(42, "redteam"));
    let rate = |t| report.get(t).map(|s| s.observed_rate).unwrap_or(f64::NAN);
    let (ph, ml) = (rate(AttackType::Phishing), rate(AttackType::AdversarialMl));
    ensure!((ph - 0.65).abs() <= 0.02, "phishing {ph}");
    ensure!((ml - 0.40).abs() <= 0.02, "adversarial ML {ml}");
    let q = report.get(AttackType::QuantumDecryption).ok_or("no quantum scenario")?;
    ensure!(q.successes == 0 && q.theoretical_flag, "quantum {q:?}");
    Ok(format!("phishing {ph:.4}, adversarial ML {ml:.4}, quantum 0 (theoretical)"))
}

fn seeded(category: VulnCategory, methodology: Methodology, n: u64) -> FindingSet {
    let fs = (0..n).map(|i| Finding::open(FindingId::derive(9, methodology, b"acc", i), methodology, category, "t", i % 5));
    FindingSet::from_findings(category.code(), fs).unwrap()
}

fn resolution_sla() -> Check {
    let policy = RemediationPolicy::paper();
    let mut prng = derive_stream(42, "acceptance/remediation");
    let dast = simulate_scan(&paper_profile(Methodology::Dast).unwrap(), &mut derive_stream(42, "scan/DAST"));
    let ef = simulate_scan(
        &ScanProfile::new(Methodology::Iast, [(VulnCategory::EncryptionFlaw, 60)], 180).unwrap(),
        &mut derive_stream(42, "scan/IAST"),
    );
    let mut sets = vec![dast, ef, seeded(VulnCategory::AdversarialMl, Methodology::RedTeam, 8)];
    remediation_pass(&mut sets, &policy, &mut prng, 0);

    let r = |i: usize, c| resolution_rate(&sets[i], c).map_err(|e| e.to_string());
    let (sqli, xss) = (r(0, VulnCategory::SqlInjection)?, r(0, VulnCategory::Xss)?);
    let (ef, ml) = (r(1, VulnCategory::EncryptionFlaw)?, r(2, VulnCategory::AdversarialMl)?);
    let sla = remediation_sla(&sets[0], 14).map_err(|e| e.to_string())?;
    ensure!(sqli == 0.80 && xss == 0.80, "SQLI {sqli}, XSS {xss}");
    ensure!((ef - 0.8333).abs() <= 0.0005, "EncryptionFlaw {ef}");
    ensure!(ml == 0.875, "AdversarialMl {ml}");
    ensure!((sla - 0.70).abs() <= 0.01, "DAST SLA {sla}");
    Ok(format!("SQLI {sqli:.2}, XSS {xss:.2}, EncryptionFlaw {ef:.4}, AdversarialMl {ml:.3}, DAST SLA(14) {sla:.4}"))
}

fn determinism() -> Check {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/fixture.json");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let out = bin()
            .args(["run", "--config", fixture.to_str().unwrap(), "--seed", "42", "--out", d.path().to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.success(), "run exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    }
    let files = ["ledger.jsonl", "report.csv", "report.json", "summary.json"];
    let mut bytes = 0;
    for f in files {
        let a = std::fs::read(dirs[0].path().join(f)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dirs[1].path().join(f)).map_err(|e| e.to_string())?;
        ensure!(!a.is_empty() && a == b, "{f} differs");
        bytes += a.len();
    }
    Ok(format!("{} artifacts byte-identical ({bytes} bytes)", files.len()))
}

fn workflow_totality() -> Check {
    let mut checked = 0;
    for phase in Phase::ALL {
        let mut s = PipelineState::default();
        while s.phase() != phase {
            s = advance(&s, WorkflowEvent::PhaseComplete).map_err(|e| e.to_string())?;
        }
        for event in WorkflowEvent::ALL {
            let before = s.workflow();
            let got = advance(&s, event).map(|t| t.workflow());
            let expected = match (phase, event) {
                (_, WorkflowEvent::Halt) => Some((phase, before.cycle, true)),
                (Phase::Iteration, WorkflowEvent::PhaseComplete) => Some((Phase::Assessment, before.cycle + 1, false)),
                (_, WorkflowEvent::PhaseComplete) => Some((phase.successor(), before.cycle, false)),
                (Phase::Validation, WorkflowEvent::ValidationFailed) => Some((Phase::Remediation, before.cycle, false)),
                (_, WorkflowEvent::ValidationFailed) => None,
            };
            match (got, expected) {
                (Ok(w), Some(e)) => ensure!((w.phase, w.cycle, w.halted) == e, "({phase:?}, {event:?}) gave {w:?}"),
                (Err(_), None) => ensure!(s.workflow() == before, "state changed on illegal event"),
                (got, _) => return Err(format!("({phase:?}, {event:?}) gave {got:?}")),
            }
            checked += 1;
        }
    }

    let mut cfg = PipelineConfig::from_json(include_bytes!("fixtures/fixture.json")).map_err(|e| e.to_string())?;
    cfg.max_cycles = 3;
    cfg.encrypt_ledger_payloads = false;
    let mut p = Pipeline::new(cfg).map_err(|e| e.to_string())?;
    let mut wraps = 0;
    let mut cycle = 0;
    while let Some(ran) = p.step().map_err(|e| e.to_string())? {
        if ran == Phase::Iteration {
            ensure!(p.state().cycle() == cycle + 1, "cycle did not increment on wrap");
            cycle += 1;
            wraps += 1;
        }
    }
    ensure!(wraps == 3 && p.state().cycle() == 3 && p.state().is_halted(), "wraps {wraps}, cycle {}", p.state().cycle());
    Ok(format!("{checked} (phase, event) pairs; 3-cycle run wrapped {wraps} times, halted at cycle 3"))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 9] = [
        ("1 cost-model fidelity", cost_model, Some(Duration::from_secs(1))),
        ("2 severity-table fidelity", severity_tables, Some(Duration::from_secs(1))),
        ("3 ledger integrity", ledger_integrity, Some(Duration::from_secs(5))),
        ("4 crypto correctness", crypto_correctness, Some(Duration::from_secs(60))),
        ("5 attack sensitivity", attack_sensitivity, Some(Duration::from_secs(10))),
        ("6 red-team rates", redteam_rates, Some(Duration::from_secs(5))),
        ("7 resolution/SLA fidelity", resolution_sla, None),
        ("8 determinism", determinism, None),
        ("9 workflow totality", workflow_totality, None),
    ];
    let mut failed = Vec::new();
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(detail), Some(limit)) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                println!("FAIL  criterion {name}: {why} [{elapsed:.2?}]");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
