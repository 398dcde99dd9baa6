//! Findings, severities, categories and methodologies shared by every module.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Days elapsed since the start of a run. There is no wall clock anywhere in
/// the crate.
pub type Day = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("duplicate finding id {0}")]
    DuplicateId(FindingId),
    #[error("finding {id} resolved on day {resolved_at} before detection on day {detected_at}")]
    ResolvedBeforeDetected {
        id: FindingId,
        detected_at: Day,
        resolved_at: Day,
    },
    #[error("finding {0} is already resolved")]
    AlreadyResolved(FindingId),
    #[error("invalid finding id {0:?}: expected 32 hex characters")]
    BadId(String),
}

/// Ordered `Low < Medium < High < Critical`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Low,
    Medium,
    High,
    Critical,
}

impl Severity {
    /// Most severe first.
    pub const DESCENDING: [Severity; 4] = [
        Severity::Critical,
        Severity::High,
        Severity::Medium,
        Severity::Low,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Methodology {
    #[serde(rename = "DAST")]
    Dast,
    #[serde(rename = "SAST")]
    Sast,
    #[serde(rename = "IAST")]
    Iast,
    #[serde(rename = "BLOCKCHAIN")]
    BlockchainLogging,
    #[serde(rename = "QUANTUM")]
    QuantumCrypto,
    #[serde(rename = "REDTEAM")]
    RedTeam,
}

impl Methodology {
    pub const ALL: [Methodology; 6] = [
        Methodology::Dast,
        Methodology::Sast,
        Methodology::Iast,
        Methodology::BlockchainLogging,
        Methodology::QuantumCrypto,
        Methodology::RedTeam,
    ];

    /// Wire code used in JSON and in id derivation.
    pub fn code(self) -> &'static str {
        match self {
            Methodology::Dast => "DAST",
            Methodology::Sast => "SAST",
            Methodology::Iast => "IAST",
            Methodology::BlockchainLogging => "BLOCKCHAIN",
            Methodology::QuantumCrypto => "QUANTUM",
            Methodology::RedTeam => "REDTEAM",
        }
    }

    pub fn is_scanner(self) -> bool {
        matches!(self, Methodology::Dast | Methodology::Sast | Methodology::Iast)
    }

    /// Label used in aggregate reports. DAST and SAST share one row.
    pub fn report_label(self) -> &'static str {
        match self {
            Methodology::Dast | Methodology::Sast => "DAST & SAST",
            Methodology::Iast => "IAST",
            Methodology::BlockchainLogging => "Blockchain Logging",
            Methodology::QuantumCrypto => "Quantum Cryptography",
            Methodology::RedTeam => "Red Team AI Simulations",
        }
    }

    /// Label used when DAST and SAST are reported separately.
    pub fn detail_label(self) -> &'static str {
        match self {
            Methodology::Dast => "DAST",
            Methodology::Sast => "SAST",
            other => other.report_label(),
        }
    }
}

impl fmt::Display for Methodology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Methodology {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Methodology::ALL
            .into_iter()
            .find(|m| m.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown methodology {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VulnCategory {
    SqlInjection,
    Xss,
    Csrf,
    ConfigOrAuthOther,
    InsecureCoding,
    LogicError,
    Backdoor,
    InsecureDataHandling,
    AccessControlWeakness,
    EncryptionFlaw,
    AdversarialMl,
    PhishingSusceptibility,
    QuantumDecryptionRisk,
    Other,
}

impl VulnCategory {
    pub const ALL: [VulnCategory; 14] = [
        VulnCategory::SqlInjection,
        VulnCategory::Xss,
        VulnCategory::Csrf,
        VulnCategory::ConfigOrAuthOther,
        VulnCategory::InsecureCoding,
        VulnCategory::LogicError,
        VulnCategory::Backdoor,
        VulnCategory::InsecureDataHandling,
        VulnCategory::AccessControlWeakness,
        VulnCategory::EncryptionFlaw,
        VulnCategory::AdversarialMl,
        VulnCategory::PhishingSusceptibility,
        VulnCategory::QuantumDecryptionRisk,
        VulnCategory::Other,
    ];

    pub fn code(self) -> &'static str {
        match self {
            VulnCategory::SqlInjection => "SQL_INJECTION",
            VulnCategory::Xss => "XSS",
            VulnCategory::Csrf => "CSRF",
            VulnCategory::ConfigOrAuthOther => "CONFIG_OR_AUTH_OTHER",
            VulnCategory::InsecureCoding => "INSECURE_CODING",
            VulnCategory::LogicError => "LOGIC_ERROR",
            VulnCategory::Backdoor => "BACKDOOR",
            VulnCategory::InsecureDataHandling => "INSECURE_DATA_HANDLING",
            VulnCategory::AccessControlWeakness => "ACCESS_CONTROL_WEAKNESS",
            VulnCategory::EncryptionFlaw => "ENCRYPTION_FLAW",
            VulnCategory::AdversarialMl => "ADVERSARIAL_ML",
            VulnCategory::PhishingSusceptibility => "PHISHING_SUSCEPTIBILITY",
            VulnCategory::QuantumDecryptionRisk => "QUANTUM_DECRYPTION_RISK",
            VulnCategory::Other => "OTHER",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        VulnCategory::ALL.into_iter().find(|c| c.code() == code)
    }
}

impl fmt::Display for VulnCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Fixed category → severity map.
///
/// Chosen so that the simulated DAST, SAST and IAST category counts land on
/// the published severity rows position for position.
pub fn severity_for(category: VulnCategory) -> Severity {
    use VulnCategory::*;
    match category {
        SqlInjection | InsecureCoding | InsecureDataHandling | QuantumDecryptionRisk => {
            Severity::Critical
        }
        Xss | LogicError | AccessControlWeakness | AdversarialMl | PhishingSusceptibility => {
            Severity::High
        }
        Csrf | Backdoor | EncryptionFlaw => Severity::Medium,
        ConfigOrAuthOther | Other => Severity::Low,
    }
}

/// 128-bit finding identifier, hex encoded on the wire.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FindingId(pub [u8; 16]);

impl FindingId {
    /// `SHA-256(master_seed BE || methodology code || 0x00 || stream label || 0x00 || seq BE)`
    /// truncated to 16 bytes.
    pub fn derive(master_seed: u64, methodology: Methodology, stream_label: &[u8], seq: u64) -> Self {
        let mut h = Sha256::new();
        h.update(master_seed.to_be_bytes());
        h.update(methodology.code().as_bytes());
        h.update([0u8]);
        h.update(stream_label);
        h.update([0u8]);
        h.update(seq.to_be_bytes());
        let digest: [u8; 32] = h.finalize().into();
        let mut id = [0u8; 16];
        id.copy_from_slice(&digest[..16]);
        FindingId(id)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl FromStr for FindingId {
    type Err = DomainError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut id = [0u8; 16];
        if s.len() != 32 {
            return Err(DomainError::BadId(s.to_string()));
        }
        hex::decode_to_slice(s, &mut id).map_err(|_| DomainError::BadId(s.to_string()))?;
        Ok(FindingId(id))
    }
}

impl fmt::Display for FindingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for FindingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FindingId({})", self.to_hex())
    }
}

impl Serialize for FindingId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for FindingId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Open,
    Resolved,
}

/// One detected vulnerability.
///
/// `status` is `Resolved` exactly when `resolved_at` is set, and
/// `resolved_at >= detected_at`. Both are enforced by the constructors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    id: FindingId,
    methodology: Methodology,
    category: VulnCategory,
    severity: Severity,
    target: String,
    detected_at: Day,
    resolved_at: Option<Day>,
    status: Status,
}

impl Finding {
    /// An open finding whose severity follows [`severity_for`].
    pub fn open(
        id: FindingId,
        methodology: Methodology,
        category: VulnCategory,
        target: impl Into<String>,
        detected_at: Day,
    ) -> Self {
        Self::with_severity(id, methodology, category, severity_for(category), target, detected_at)
    }

    /// An open finding with an explicit severity (ingested reports carry their own).
    pub fn with_severity(
        id: FindingId,
        methodology: Methodology,
        category: VulnCategory,
        severity: Severity,
        target: impl Into<String>,
        detected_at: Day,
    ) -> Self {
        Finding {
            id,
            methodology,
            category,
            severity,
            target: target.into(),
            detected_at,
            resolved_at: None,
            status: Status::Open,
        }
    }

    pub fn resolve(&mut self, day: Day) -> Result<(), DomainError> {
        if self.status == Status::Resolved {
            return Err(DomainError::AlreadyResolved(self.id));
        }
        if day < self.detected_at {
            return Err(DomainError::ResolvedBeforeDetected {
                id: self.id,
                detected_at: self.detected_at,
                resolved_at: day,
            });
        }
        self.resolved_at = Some(day);
        self.status = Status::Resolved;
        Ok(())
    }

    pub fn id(&self) -> FindingId {
        self.id
    }
    pub fn methodology(&self) -> Methodology {
        self.methodology
    }
    pub fn category(&self) -> VulnCategory {
        self.category
    }
    pub fn severity(&self) -> Severity {
        self.severity
    }
    pub fn target(&self) -> &str {
        &self.target
    }
    pub fn detected_at(&self) -> Day {
        self.detected_at
    }
    pub fn resolved_at(&self) -> Option<Day> {
        self.resolved_at
    }
    pub fn status(&self) -> Status {
        self.status
    }
    pub fn is_open(&self) -> bool {
        self.status == Status::Open
    }

    /// Days from detection to resolution, if resolved.
    pub fn time_to_resolve(&self) -> Option<Day> {
        self.resolved_at.map(|r| r - self.detected_at)
    }
}

/// Insertion-ordered collection of findings with unique ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FindingSet {
    findings: Vec<Finding>,
    ids: HashSet<FindingId>,
    provenance: String,
}

impl FindingSet {
    pub fn new(provenance: impl Into<String>) -> Self {
        FindingSet {
            findings: Vec::new(),
            ids: HashSet::new(),
            provenance: provenance.into(),
        }
    }

    pub fn from_findings(
        provenance: impl Into<String>,
        findings: impl IntoIterator<Item = Finding>,
    ) -> Result<Self, DomainError> {
        let mut set = FindingSet::new(provenance);
        for f in findings {
            set.push(f)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, finding: Finding) -> Result<(), DomainError> {
        if !self.ids.insert(finding.id) {
            return Err(DomainError::DuplicateId(finding.id));
        }
        self.findings.push(finding);
        Ok(())
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn set_provenance(&mut self, provenance: impl Into<String>) {
        self.provenance = provenance.into();
    }

    pub fn len(&self) -> usize {
        self.findings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Finding> {
        self.findings.iter()
    }

    pub fn findings(&self) -> &[Finding] {
        &self.findings
    }

    pub fn contains(&self, id: FindingId) -> bool {
        self.ids.contains(&id)
    }

    pub fn get(&self, id: FindingId) -> Option<&Finding> {
        self.findings.iter().find(|f| f.id == id)
    }

    /// Mutable access by position; the id of the finding cannot change through
    /// this handle.
    pub fn get_mut_at(&mut self, index: usize) -> Option<&mut Finding> {
        self.findings.get_mut(index)
    }

    /// Serialize as a JSON array of finding objects.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.findings).expect("findings always serialize")
    }
}

impl<'a> IntoIterator for &'a FindingSet {
    type Item = &'a Finding;
    type IntoIter = std::slice::Iter<'a, Finding>;

    fn into_iter(self) -> Self::IntoIter {
        self.findings.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(n: u8) -> FindingId {
        FindingId([n; 16])
    }

    fn count_by_severity(cats: &[(VulnCategory, usize)]) -> [usize; 4] {
        let mut out = [0; 4];
        for &(c, n) in cats {
            let pos = Severity::DESCENDING.iter().position(|s| *s == severity_for(c)).unwrap();
            out[pos] += n;
        }
        out
    }

    #[test]
    fn severity_examples() {
        assert_eq!(severity_for(VulnCategory::SqlInjection), Severity::Critical);
        assert_eq!(severity_for(VulnCategory::Backdoor), Severity::Medium);
        assert_eq!(severity_for(VulnCategory::Other), Severity::Low);
    }

    #[test]
    fn severity_order() {
        assert!(Severity::Critical > Severity::High);
        assert!(Severity::High > Severity::Medium);
        assert!(Severity::Medium > Severity::Low);
    }

    #[test]
    fn dast_sast_iast_multisets_match_severity_rows() {
        use VulnCategory::*;
        assert_eq!(
            count_by_severity(&[(SqlInjection, 10), (Xss, 15), (Csrf, 8), (ConfigOrAuthOther, 20)]),
            [10, 15, 8, 20]
        );
        assert_eq!(
            count_by_severity(&[(InsecureCoding, 30), (LogicError, 20), (Backdoor, 62)]),
            [30, 20, 62, 0]
        );
        assert_eq!(
            count_by_severity(&[
                (InsecureDataHandling, 25),
                (AccessControlWeakness, 18),
                (EncryptionFlaw, 44)
            ]),
            [25, 18, 44, 0]
        );
    }

    #[test]
    fn category_codes_match_serde() {
        for c in VulnCategory::ALL {
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.code()));
            assert_eq!(VulnCategory::from_code(c.code()), Some(c));
        }
        for m in Methodology::ALL {
            let json = serde_json::to_string(&m).unwrap();
            assert_eq!(json, format!("\"{}\"", m.code()));
        }
    }

    #[test]
    fn finding_json_field_names() {
        let mut f = Finding::open(id(1), Methodology::Dast, VulnCategory::SqlInjection, "/login", 3);
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        assert_eq!(v["id"], "01010101010101010101010101010101");
        assert_eq!(v["methodology"], "DAST");
        assert_eq!(v["category"], "SQL_INJECTION");
        assert_eq!(v["severity"], "CRITICAL");
        assert_eq!(v["resolved_at"], serde_json::Value::Null);
        assert_eq!(v["status"], "OPEN");
        f.resolve(5).unwrap();
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        assert_eq!(v["resolved_at"], 5);
        assert_eq!(v["status"], "RESOLVED");
    }

    #[test]
    fn resolve_rules() {
        let mut f = Finding::open(id(2), Methodology::Sast, VulnCategory::LogicError, "x.rs", 10);
        assert!(matches!(f.resolve(9), Err(DomainError::ResolvedBeforeDetected { .. })));
        assert!(f.is_open());
        f.resolve(10).unwrap();
        assert_eq!(f.time_to_resolve(), Some(0));
        assert_eq!(f.resolve(11), Err(DomainError::AlreadyResolved(id(2))));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let f = Finding::open(id(3), Methodology::Iast, VulnCategory::Other, "t", 0);
        let err = FindingSet::from_findings("t", [f.clone(), f]).unwrap_err();
        assert_eq!(err, DomainError::DuplicateId(id(3)));
    }

    #[test]
    fn id_hex_parse() {
        let i = FindingId::derive(42, Methodology::Dast, b"scan", 7);
        assert_eq!(i.to_hex().parse::<FindingId>().unwrap(), i);
        assert!("abc".parse::<FindingId>().is_err());
        assert!("zz".repeat(16).parse::<FindingId>().is_err());
        assert_ne!(i, FindingId::derive(42, Methodology::Dast, b"scan", 8));
        assert_ne!(i, FindingId::derive(43, Methodology::Dast, b"scan", 7));
        assert_ne!(i, FindingId::derive(42, Methodology::Sast, b"scan", 7));
    }
}
