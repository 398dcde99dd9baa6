//! Command-line front end. Exit codes: 0 success, 1 usage error, 2 remediation
//! targets unmet, 3 ledger corrupt.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pqpt::analytics::{emit_report, resolution_csv, severity_csv, sla_csv, ReportFormat};
use pqpt::ledger::{paper_scenario_ledger, Ledger};
use pqpt::orchestrator::{replay_paper_scenario, run_pipeline, PipelineConfig, PipelineRunReport, PAPER_SEED};
use pqpt::pqcrypto::{
    decrypt_payload, encrypt, encrypt_payload, keygen, simulate_quantum_attack, RlweKeyPair, RlweParams,
};
use pqpt::redteam::{run_simulation, ScenarioConfig};
use pqpt::scanners::{ingest_report, merge, paper_profile, simulate_scan};
use pqpt::{derive_stream, Methodology};

#[derive(Parser)]
#[command(name = "pqpt", version, about = "Deterministic penetration-testing pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate DAST/SAST/IAST scans, or ingest a findings report.
    Scan {
        /// Findings JSON to validate and re-emit instead of simulating.
        #[arg(long, value_name = "FILE", conflicts_with = "methodology")]
        ingest: Option<PathBuf>,
        /// Scanner to simulate; repeatable. All three when omitted.
        #[arg(long)]
        methodology: Vec<Methodology>,
        #[arg(long, env = "PQPT_SEED", default_value_t = PAPER_SEED)]
        seed: u64,
    },
    /// Verify or export audit ledgers.
    Ledger {
        #[command(subcommand)]
        action: LedgerAction,
    },
    /// Ring-LWE key generation and payload encryption.
    Crypto {
        #[command(subcommand)]
        action: CryptoAction,
    },
    /// Exhaustive key recovery against a fresh key pair.
    Attack {
        /// Parameter set name, e.g. TOY-4 or STD-256.
        #[arg(long)]
        params: RlweParams,
        /// Maximum number of candidate secrets to try.
        #[arg(long)]
        budget: u64,
        #[arg(long, env = "PQPT_SEED", default_value_t = PAPER_SEED)]
        seed: u64,
    },
    /// Run red-team scenarios from a JSON list.
    Simulate {
        #[arg(long, value_name = "FILE")]
        scenarios: PathBuf,
        #[arg(long, env = "PQPT_SEED", default_value_t = PAPER_SEED)]
        seed: u64,
    },
    /// Analytics report of a pipeline run (the published configuration by default).
    Report {
        /// csv for the cost table, json for the full report.
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        #[arg(long, env = "PQPT_SEED")]
        seed: Option<u64>,
    },
    /// Run the full pipeline from a JSON config.
    Run {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        #[arg(long, env = "PQPT_SEED")]
        seed: Option<u64>,
        /// Directory for ledger.jsonl, the report files and summary.json.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Re-run the published scenario and print its cost table.
    ReplayPaper {
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LedgerAction {
    /// Check an exported audit file.
    Verify { file: PathBuf },
    /// Export a ledger as JSON lines: the published six-month trail, or the
    /// ledger of a pipeline run.
    Export {
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        #[arg(long, env = "PQPT_SEED")]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum CryptoAction {
    /// Print a key pair as JSON.
    Keygen {
        #[arg(long)]
        params: RlweParams,
        #[arg(long, env = "PQPT_SEED", default_value_t = PAPER_SEED)]
        seed: u64,
    },
    /// Encrypt stdin to a binary blob on stdout.
    Encrypt {
        #[arg(long)]
        params: RlweParams,
        #[arg(long, value_name = "FILE")]
        key: PathBuf,
        #[arg(long, env = "PQPT_SEED", default_value_t = PAPER_SEED)]
        seed: u64,
    },
    /// Decrypt a blob on stdin.
    Decrypt {
        #[arg(long)]
        params: RlweParams,
        #[arg(long, value_name = "FILE")]
        key: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn stdin_bytes() -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    io::stdin().read_to_end(&mut buf).map_err(Failure::usage)?;
    Ok(buf)
}

fn emit(bytes: &[u8]) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    out.write_all(bytes).and_then(|_| out.flush()).map_err(Failure::usage)
}

fn json_line<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("serializable");
    v.push(b'\n');
    v
}

fn write_files(dir: &Path, files: &[(&str, Vec<u8>)]) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
    for (name, bytes) in files {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn load_config(path: &Path, seed: Option<u64>) -> Result<PipelineConfig, Failure> {
    let mut cfg = PipelineConfig::from_json(&read(path)?).map_err(Failure::usage)?;
    cfg.override_seed(seed, None).map_err(Failure::usage)?;
    Ok(cfg)
}

fn pipeline(config: Option<&Path>, seed: Option<u64>) -> Result<PipelineRunReport, Failure> {
    let cfg = match config {
        Some(path) => load_config(path, seed)?,
        None => PipelineConfig::paper_default(seed.unwrap_or(PAPER_SEED)),
    };
    run_pipeline(cfg).map_err(|e| Failure {
        code: e.exit_code() as u8,
        message: e.to_string(),
    })
}

fn load_keys(path: &Path, params: &RlweParams) -> Result<RlweKeyPair, Failure> {
    let kp: RlweKeyPair = serde_json::from_slice(&read(path)?).map_err(Failure::usage)?;
    if &kp.params != params {
        return Err(Failure::usage(format!("key file holds {} keys, not {params}", kp.params)));
    }
    Ok(kp)
}

fn scan(ingest: Option<PathBuf>, methodologies: Vec<Methodology>, seed: u64) -> Outcome {
    let set = match ingest {
        Some(path) => ingest_report(&read(&path)?).map_err(Failure::usage)?,
        None => {
            let ms = if methodologies.is_empty() {
                vec![Methodology::Dast, Methodology::Sast, Methodology::Iast]
            } else {
                methodologies
            };
            let mut sets = Vec::new();
            for m in ms {
                let profile = paper_profile(m).map_err(Failure::usage)?;
                sets.push(simulate_scan(&profile, &mut derive_stream(seed, format!("scan/{}", m.code()))));
            }
            merge(&sets).map_err(Failure::usage)?
        }
    };
    let mut out = set.to_json().into_bytes();
    out.push(b'\n');
    emit(&out)?;
    Ok(0)
}

fn ledger(action: LedgerAction) -> Outcome {
    match action {
        LedgerAction::Verify { file } => {
            let ledger = Ledger::import_audit(&read(&file)?).map_err(|e| Failure {
                code: 3,
                message: e.to_string(),
            })?;
            let outcome = ledger.verify_chain();
            emit(format!("{outcome}\n").as_bytes())?;
            Ok(if outcome.is_valid() { 0 } else { 3 })
        }
        LedgerAction::Export { config: None, .. } => {
            emit(&paper_scenario_ledger().export_audit())?;
            Ok(0)
        }
        LedgerAction::Export { config: Some(path), seed } => {
            let report = pipeline(Some(&path), seed)?;
            emit(&report.ledger.export_audit())?;
            Ok(0)
        }
    }
}

fn crypto(action: CryptoAction) -> Outcome {
    match action {
        CryptoAction::Keygen { params, seed } => {
            let kp = keygen(&params, &mut derive_stream(seed, "cli/keygen")).map_err(Failure::usage)?;
            emit(&json_line(&kp))?;
        }
        CryptoAction::Encrypt { params, key, seed } => {
            let kp = load_keys(&key, &params)?;
            let blob = encrypt_payload(&kp.public, &params, &stdin_bytes()?, &mut derive_stream(seed, "cli/encrypt"))
                .map_err(Failure::usage)?;
            emit(&blob)?;
        }
        CryptoAction::Decrypt { params, key } => {
            let kp = load_keys(&key, &params)?;
            let plain = decrypt_payload(&kp.secret, &params, &stdin_bytes()?).map_err(Failure::usage)?;
            emit(&plain)?;
        }
    }
    Ok(0)
}

fn attack(params: RlweParams, budget: u64, seed: u64) -> Outcome {
    let kp = keygen(&params, &mut derive_stream(seed, "cli/attack/keygen")).map_err(Failure::usage)?;
    let mut prng = derive_stream(seed, "cli/attack/message");
    let message: Vec<bool> = (0..params.n()).map(|_| prng.next_unit() < 0.5).collect();
    let ct = encrypt(&kp.public, &params, &message, &mut prng).map_err(Failure::usage)?;
    let report = simulate_quantum_attack(&params, &kp.public, &ct, &message, &budget.into());
    emit(&json_line(&report))?;
    Ok(0)
}

fn simulate(scenarios: PathBuf, seed: u64) -> Outcome {
    let configs: Vec<ScenarioConfig> = serde_json::from_slice(&read(&scenarios)?).map_err(Failure::usage)?;
    let report = run_simulation(&configs, &derive_stream(seed, "cli/simulate"));
    emit(&json_line(&report))?;
    Ok(0)
}

fn run_artifacts(report: &PipelineRunReport) -> Vec<(&'static str, Vec<u8>)> {
    vec![
        ("ledger.jsonl", report.ledger.export_audit()),
        ("report.csv", emit_report(&report.analytics, ReportFormat::Csv)),
        ("report.json", emit_report(&report.analytics, ReportFormat::Json)),
        ("severity.csv", severity_csv(&report.analytics.severity_summaries)),
        ("resolution.csv", resolution_csv(&report.analytics.resolution_rates)),
        ("sla.csv", sla_csv(&report.analytics.sla)),
        ("summary.json", report.summary_json()),
    ]
}

fn run(config: PathBuf, seed: Option<u64>, out: Option<PathBuf>) -> Outcome {
    let report = pipeline(Some(&config), seed)?;
    match out {
        Some(dir) => write_files(&dir, &run_artifacts(&report))?,
        None => emit(&report.summary_json())?,
    }
    for unmet in &report.unmet_targets {
        eprintln!(
            "unmet target: cycle {} {} {}: {}/{} resolved",
            unmet.cycle,
            unmet.set,
            unmet.category.code(),
            unmet.resolved,
            unmet.required
        );
    }
    Ok(report.exit_code() as u8)
}

fn replay(out: Option<PathBuf>) -> Outcome {
    let replay = replay_paper_scenario();
    if let Some(dir) = out {
        let mut files = run_artifacts(&replay.run);
        files.push(("audit_ledger.jsonl", replay.audit_ledger.export_audit()));
        write_files(&dir, &files)?;
    }
    emit(&emit_report(&replay.run.analytics, ReportFormat::Csv))?;
    Ok(if replay.audit_verification.is_valid() { replay.run.exit_code() as u8 } else { 3 })
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Scan {
            ingest,
            methodology,
            seed,
        } => scan(ingest, methodology, seed),
        Command::Ledger { action } => ledger(action),
        Command::Crypto { action } => crypto(action),
        Command::Attack { params, budget, seed } => attack(params, budget, seed),
        Command::Simulate { scenarios, seed } => simulate(scenarios, seed),
        Command::Report { format, config, seed } => {
            let report = pipeline(config.as_deref(), seed)?;
            emit(&emit_report(&report.analytics, format))?;
            Ok(report.exit_code() as u8)
        }
        Command::Run { config, seed, out } => run(config, seed, out),
        Command::ReplayPaper { out } => replay(out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("pqpt: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
