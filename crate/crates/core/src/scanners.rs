//! Scanner simulators standing in for DAST, SAST and IAST tools, plus
//! ingestion of externally produced `.findings.json` reports.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::domain::{
    Day, DomainError, Finding, FindingId, FindingSet, Methodology, Severity, Status, VulnCategory,
};
use crate::prng::Prng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("methodology {0} is not a scanner methodology")]
    UnsupportedMethodology(Methodology),
    #[error("scan profile has no findings to emit")]
    EmptyProfile,
    #[error("detection window must be at least one day")]
    ZeroWindow,
    #[error("malformed report at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate finding id {0}")]
    DuplicateId(FindingId),
    #[error("report entry {index}: missing or invalid field `{field}`")]
    Schema { index: usize, field: String },
}

impl From<DomainError> for ScanError {
    fn from(e: DomainError) -> Self {
        match e {
            DomainError::DuplicateId(id) => ScanError::DuplicateId(id),
            other => ScanError::Schema {
                index: 0,
                field: other.to_string(),
            },
        }
    }
}

/// What a simulated scanner emits: how many findings per category, and the
/// window over which detections are spread.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct ScanProfile {
    methodology: Methodology,
    category_counts: BTreeMap<VulnCategory, u32>,
    detection_window_days: u64,
}

#[derive(Deserialize)]
struct RawProfile {
    methodology: Methodology,
    category_counts: BTreeMap<VulnCategory, u32>,
    detection_window_days: u64,
}

impl TryFrom<RawProfile> for ScanProfile {
    type Error = ScanError;

    fn try_from(raw: RawProfile) -> Result<Self, Self::Error> {
        ScanProfile::new(raw.methodology, raw.category_counts, raw.detection_window_days)
    }
}

impl ScanProfile {
    pub fn new(
        methodology: Methodology,
        category_counts: impl IntoIterator<Item = (VulnCategory, u32)>,
        detection_window_days: u64,
    ) -> Result<Self, ScanError> {
        if !methodology.is_scanner() {
            return Err(ScanError::UnsupportedMethodology(methodology));
        }
        let mut counts = BTreeMap::new();
        for (c, n) in category_counts {
            *counts.entry(c).or_insert(0) += n;
        }
        counts.retain(|_, n| *n > 0);
        if counts.is_empty() {
            return Err(ScanError::EmptyProfile);
        }
        if detection_window_days == 0 {
            return Err(ScanError::ZeroWindow);
        }
        Ok(ScanProfile {
            methodology,
            category_counts: counts,
            detection_window_days,
        })
    }

    pub fn methodology(&self) -> Methodology {
        self.methodology
    }

    pub fn category_counts(&self) -> &BTreeMap<VulnCategory, u32> {
        &self.category_counts
    }

    pub fn detection_window_days(&self) -> u64 {
        self.detection_window_days
    }

    pub fn total(&self) -> u64 {
        self.category_counts.values().map(|&n| u64::from(n)).sum()
    }
}

/// Built-in profile reproducing the published category counts.
pub fn paper_profile(methodology: Methodology) -> Result<ScanProfile, ScanError> {
    use VulnCategory::*;
    match methodology {
        Methodology::Dast => ScanProfile::new(
            methodology,
            [(SqlInjection, 10), (Xss, 15), (Csrf, 8), (ConfigOrAuthOther, 20)],
            30,
        ),
        Methodology::Sast => {
            ScanProfile::new(methodology, [(InsecureCoding, 30), (LogicError, 20), (Backdoor, 62)], 30)
        }
        Methodology::Iast => ScanProfile::new(
            methodology,
            [(InsecureDataHandling, 25), (AccessControlWeakness, 18), (EncryptionFlaw, 44)],
            180,
        ),
        other => Err(ScanError::UnsupportedMethodology(other)),
    }
}

/// Number of simulated applications findings are spread across.
const SIMULATED_APPS: u64 = 5;

fn simulated_target(methodology: Methodology, category: VulnCategory, seq: u64) -> String {
    let app = seq % SIMULATED_APPS + 1;
    let slug = category.code().to_ascii_lowercase().replace('_', "-");
    match methodology {
        Methodology::Dast => format!("https://app{app}.test/{slug}/{seq}"),
        Methodology::Sast => format!("app{app}/src/{slug}.rs:{}", 10 + seq * 7),
        _ => format!("app{app}::runtime/{slug}#{seq}"),
    }
}

/// Emit exactly the profiled findings, in category order, each detected on a
/// day drawn uniformly from `[0, window)`. All findings start open.
pub fn simulate_scan(profile: &ScanProfile, prng: &mut Prng) -> FindingSet {
    simulate_scan_from(profile, prng, 0)
}

/// [`simulate_scan`] with detections offset by `start_day`.
pub fn simulate_scan_from(profile: &ScanProfile, prng: &mut Prng, start_day: Day) -> FindingSet {
    let label = prng.label().to_vec();
    let seed = prng.master_seed();
    let mut set = FindingSet::new(format!("simulated:{}", profile.methodology));
    let mut seq = 0u64;
    for (&category, &count) in &profile.category_counts {
        for _ in 0..count {
            let day = start_day + prng.random_range(0..profile.detection_window_days);
            let id = FindingId::derive(seed, profile.methodology, &label, seq);
            let target = simulated_target(profile.methodology, category, seq);
            set.push(Finding::open(id, profile.methodology, category, target, day))
                .expect("derived ids are unique per stream");
            seq += 1;
        }
    }
    set
}

fn schema(index: usize, field: &str) -> ScanError {
    ScanError::Schema {
        index,
        field: field.to_string(),
    }
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, index: usize, name: &str) -> Result<&'a Value, ScanError> {
    obj.get(name).ok_or_else(|| schema(index, name))
}

fn str_field<'a>(obj: &'a serde_json::Map<String, Value>, index: usize, name: &str) -> Result<&'a str, ScanError> {
    field(obj, index, name)?.as_str().ok_or_else(|| schema(index, name))
}

fn enum_field<T: serde::de::DeserializeOwned>(
    obj: &serde_json::Map<String, Value>,
    index: usize,
    name: &str,
) -> Result<T, ScanError> {
    serde_json::from_value(field(obj, index, name)?.clone()).map_err(|_| schema(index, name))
}

/// Parse a findings report: a JSON array of finding objects.
///
/// Unknown category strings degrade to [`VulnCategory::Other`]; how many did
/// so is recorded in the provenance label.
pub fn ingest_report(document: &[u8]) -> Result<FindingSet, ScanError> {
    let root: Value = serde_json::from_slice(document).map_err(|e| ScanError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let items = root.as_array().ok_or_else(|| schema(0, "<root array>"))?;
    let mut set = FindingSet::new("ingested");
    let mut unknown = 0usize;
    for (index, item) in items.iter().enumerate() {
        let obj = item.as_object().ok_or_else(|| schema(index, "<object>"))?;
        let id: FindingId = str_field(obj, index, "id")?
            .parse()
            .map_err(|_| schema(index, "id"))?;
        let methodology: Methodology = enum_field(obj, index, "methodology")?;
        let category_code = str_field(obj, index, "category")?;
        let category = VulnCategory::from_code(category_code).unwrap_or_else(|| {
            unknown += 1;
            VulnCategory::Other
        });
        let severity: Severity = enum_field(obj, index, "severity")?;
        let target = str_field(obj, index, "target")?;
        let detected_at = field(obj, index, "detected_at")?
            .as_u64()
            .ok_or_else(|| schema(index, "detected_at"))?;
        let resolved_at = match obj.get("resolved_at") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| schema(index, "resolved_at"))?),
        };
        let status: Status = enum_field(obj, index, "status")?;

        let mut finding = Finding::with_severity(id, methodology, category, severity, target, detected_at);
        match (status, resolved_at) {
            (Status::Open, None) => {}
            (Status::Resolved, Some(day)) => finding.resolve(day).map_err(|_| schema(index, "resolved_at"))?,
            _ => return Err(schema(index, "status")),
        }
        set.push(finding)?;
    }
    if unknown > 0 {
        set.set_provenance(format!("ingested; unknown_categories={unknown}"));
    }
    Ok(set)
}

/// Concatenate sets in order. Ids must be unique across all inputs.
pub fn merge<'a>(sets: impl IntoIterator<Item = &'a FindingSet>) -> Result<FindingSet, ScanError> {
    let mut labels = Vec::new();
    let mut out = FindingSet::new("");
    for set in sets {
        if !set.provenance().is_empty() {
            labels.push(set.provenance().to_string());
        }
        for f in set {
            out.push(f.clone())?;
        }
    }
    out.set_provenance(labels.join(" + "));
    Ok(out)
}
