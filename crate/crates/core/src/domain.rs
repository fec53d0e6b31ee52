//! Shared domain types: challenge tasks, fuzzer targets, crash signatures,
//! submissions, bundles, score inputs, and call-graph records.
//!
//! Every type validates its own invariants and serializes to a canonical
//! JSON document whose field names match the struct fields verbatim.

use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diff;
use crate::time::{DurationMillis, TimestampMillis};

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("{type_name} invariant violated: {message}")]
    Invariant {
        type_name: &'static str,
        message: String,
    },
    #[error("serialization failed: {0}")]
    Serialize(String),
    #[error("deserialization failed: {0}")]
    Deserialize(String),
}

pub(crate) fn invariant(type_name: &'static str, message: impl Into<String>) -> DomainError {
    DomainError::Invariant {
        type_name,
        message: message.into(),
    }
}

/// Types that can check their own construction invariants.
pub trait Validate {
    fn validate(&self) -> Result<(), DomainError>;
}

/// Serializes `value` to its canonical JSON document, rejecting values that
/// violate their invariants.
pub fn to_document<T: Serialize + Validate>(value: &T) -> Result<String, DomainError> {
    value.validate()?;
    serde_json::to_string_pretty(value).map_err(|e| DomainError::Serialize(e.to_string()))
}

/// Parses a canonical JSON document and re-checks invariants on the result.
pub fn from_document<T: DeserializeOwned + Validate>(doc: &str) -> Result<T, DomainError> {
    let value: T =
        serde_json::from_str(doc).map_err(|e| DomainError::Deserialize(e.to_string()))?;
    value.validate()?;
    Ok(value)
}

mod serde_hex {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&hex::encode(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<u8>, D::Error> {
        let text = String::deserialize(de)?;
        hex::decode(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChallengeMode {
    DeltaScan,
    FullScan,
    SarifAssessment,
}

impl ChallengeMode {
    /// Modes whose submissions earn points and therefore require harnesses.
    pub fn is_scored(self) -> bool {
        matches!(self, ChallengeMode::DeltaScan | ChallengeMode::FullScan)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Language {
    CCpp,
    Java,
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Sanitizer {
    Address,
    Memory,
    UndefinedBehavior,
    Jazzer,
}

impl Sanitizer {
    pub fn tag(self) -> &'static str {
        match self {
            Sanitizer::Address => "address",
            Sanitizer::Memory => "memory",
            Sanitizer::UndefinedBehavior => "undefined_behavior",
            Sanitizer::Jazzer => "jazzer",
        }
    }
}

/// One competition challenge: a repository snapshot, the harness set, and
/// the submission window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChallengeTask {
    pub task_id: String,
    pub mode: ChallengeMode,
    pub project_name: String,
    pub repo_root: PathBuf,
    pub base_state_ref: Option<String>,
    pub commit_diff: Option<String>,
    pub harness_names: Vec<String>,
    pub language: Language,
    pub time_window: DurationMillis,
    pub received_at: TimestampMillis,
}

impl ChallengeTask {
    /// The instant the submission window closes.
    pub fn deadline(&self) -> TimestampMillis {
        self.received_at + self.time_window
    }
}

impl Validate for ChallengeTask {
    fn validate(&self) -> Result<(), DomainError> {
        const T: &str = "ChallengeTask";
        if self.task_id.is_empty() {
            return Err(invariant(T, "task_id is empty"));
        }
        if self.mode == ChallengeMode::DeltaScan && self.commit_diff.is_none() {
            return Err(invariant(T, "delta_scan mode requires commit_diff"));
        }
        if self.mode.is_scored() && self.harness_names.is_empty() {
            return Err(invariant(T, "scored modes require at least one harness"));
        }
        if self.time_window.is_zero() {
            return Err(invariant(T, "time_window must be positive"));
        }
        Ok(())
    }
}

/// A single (harness, sanitizer) pair produced by task decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FuzzerTarget {
    pub harness_name: String,
    pub sanitizer: Sanitizer,
    pub task_id: String,
}

impl FuzzerTarget {
    /// Checks the language rule; uniqueness per task is enforced by the
    /// decomposition that produces target sets.
    pub fn validate_for_language(&self, language: Language) -> Result<(), DomainError> {
        const T: &str = "FuzzerTarget";
        let jazzer = self.sanitizer == Sanitizer::Jazzer;
        match language {
            Language::Java if !jazzer => Err(invariant(T, "java targets must use jazzer")),
            Language::CCpp if jazzer => Err(invariant(T, "jazzer requires a java task")),
            _ => Ok(()),
        }
    }
}

impl Validate for FuzzerTarget {
    fn validate(&self) -> Result<(), DomainError> {
        const T: &str = "FuzzerTarget";
        if self.harness_name.is_empty() {
            return Err(invariant(T, "harness_name is empty"));
        }
        if self.task_id.is_empty() {
            return Err(invariant(T, "task_id is empty"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignatureKind {
    Location,
    Heuristic,
}

/// Canonical identity of a vulnerability: crash file and line plus the
/// sanitizer, with a digest fallback when no location parses.
///
/// Equality considers only the fields relevant to the kind: location
/// signatures compare on (file, line, sanitizer) and ignore any digest;
/// heuristic signatures compare on (fallback_digest, sanitizer).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrashSignature {
    pub kind: SignatureKind,
    pub file: Option<String>,
    pub line: Option<u32>,
    pub sanitizer: Sanitizer,
    pub fallback_digest: Option<String>,
}

impl CrashSignature {
    pub fn location(file: impl Into<String>, line: u32, sanitizer: Sanitizer) -> Self {
        CrashSignature {
            kind: SignatureKind::Location,
            file: Some(file.into()),
            line: Some(line),
            sanitizer,
            fallback_digest: None,
        }
    }

    pub fn heuristic(digest: impl Into<String>, sanitizer: Sanitizer) -> Self {
        CrashSignature {
            kind: SignatureKind::Heuristic,
            file: None,
            line: None,
            sanitizer,
            fallback_digest: Some(digest.into()),
        }
    }

    fn key(&self) -> (SignatureKind, Sanitizer, &str, u32) {
        match self.kind {
            SignatureKind::Location => (
                self.kind,
                self.sanitizer,
                self.file.as_deref().unwrap_or(""),
                self.line.unwrap_or(0),
            ),
            SignatureKind::Heuristic => (
                self.kind,
                self.sanitizer,
                self.fallback_digest.as_deref().unwrap_or(""),
                0,
            ),
        }
    }
}

impl PartialEq for CrashSignature {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for CrashSignature {}

impl Hash for CrashSignature {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for CrashSignature {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CrashSignature {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl Validate for CrashSignature {
    fn validate(&self) -> Result<(), DomainError> {
        const T: &str = "CrashSignature";
        match self.kind {
            SignatureKind::Location => {
                if self.file.is_none() || self.line.is_none() {
                    return Err(invariant(T, "location signature requires file and line"));
                }
                if self.line == Some(0) {
                    return Err(invariant(T, "line numbers are 1-based"));
                }
            }
            SignatureKind::Heuristic => {
                let digest = self
                    .fallback_digest
                    .as_deref()
                    .ok_or_else(|| invariant(T, "heuristic signature requires a digest"))?;
                if digest.len() != 16 || !digest.chars().all(|c| c.is_ascii_hexdigit()) {
                    return Err(invariant(T, "digest must be 16 hex characters"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubmissionStatus {
    Pending,
    Passed,
    Failed,
    Duplicate,
}

impl SubmissionStatus {
    /// Submissions only ever move out of `Pending`.
    pub fn can_transition_to(self, next: SubmissionStatus) -> bool {
        self == SubmissionStatus::Pending && next != SubmissionStatus::Pending
    }
}

/// A proof of vulnerability: an input that triggers a sanitizer error on a
/// specific fuzzer target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovSubmission {
    pub pov_id: String,
    pub task_id: String,
    pub target: FuzzerTarget,
    #[serde(with = "serde_hex")]
    pub input_blob: Vec<u8>,
    pub crash_report: String,
    pub signature: CrashSignature,
    pub status: SubmissionStatus,
    pub submitted_at: TimestampMillis,
    pub originating_strategy: String,
}

impl PovSubmission {
    pub fn set_status(&mut self, next: SubmissionStatus) -> Result<(), DomainError> {
        if !self.status.can_transition_to(next) {
            return Err(invariant(
                "PovSubmission",
                format!("illegal status transition {:?} -> {:?}", self.status, next),
            ));
        }
        self.status = next;
        Ok(())
    }
}

impl Validate for PovSubmission {
    fn validate(&self) -> Result<(), DomainError> {
        const T: &str = "PovSubmission";
        if self.pov_id.is_empty() {
            return Err(invariant(T, "pov_id is empty"));
        }
        if self.input_blob.is_empty() {
            return Err(invariant(T, "input_blob is empty"));
        }
        self.signature.validate()?;
        self.target.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Unknown,
    Pass,
    Fail,
}

/// Outcome of the four patch validation criteria, in evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationRecord {
    pub applies: TriState,
    pub compiles: TriState,
    pub povs_blocked: TriState,
    pub tests_pass: TriState,
}

impl ValidationRecord {
    pub fn unknown() -> Self {
        ValidationRecord {
            applies: TriState::Unknown,
            compiles: TriState::Unknown,
            povs_blocked: TriState::Unknown,
            tests_pass: TriState::Unknown,
        }
    }

    /// A patch is valid only when all four criteria pass.
    pub fn is_valid(&self) -> bool {
        [self.applies, self.compiles, self.povs_blocked, self.tests_pass]
            .iter()
            .all(|c| *c == TriState::Pass)
    }
}

impl Validate for ValidationRecord {
    fn validate(&self) -> Result<(), DomainError> {
        Ok(())
    }
}

/// A candidate fix in unified-diff form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchSubmission {
    pub patch_id: String,
    pub task_id: String,
    pub diff_text: String,
    pub pov_signature: Option<CrashSignature>,
    pub is_xpatch: bool,
    pub status: SubmissionStatus,
    pub submitted_at: TimestampMillis,
    pub validation: ValidationRecord,
}

impl PatchSubmission {
    pub fn set_status(&mut self, next: SubmissionStatus) -> Result<(), DomainError> {
        if !self.status.can_transition_to(next) {
            return Err(invariant(
                "PatchSubmission",
                format!("illegal status transition {:?} -> {:?}", self.status, next),
            ));
        }
        self.status = next;
        Ok(())
    }
}

impl Validate for PatchSubmission {
    fn validate(&self) -> Result<(), DomainError> {
        const T: &str = "PatchSubmission";
        if self.patch_id.is_empty() {
            return Err(invariant(T, "patch_id is empty"));
        }
        if let Err(e) = diff::parse(&self.diff_text) {
            return Err(invariant(T, format!("diff_text is not a unified diff: {e}")));
        }
        if self.is_xpatch && self.pov_signature.is_some() {
            return Err(invariant(T, "xpatch submissions carry no pov_signature"));
        }
        if let Some(sig) = &self.pov_signature {
            sig.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SarifVerdict {
    Undecided,
    TruePositive,
    FalsePositive,
    Deferred,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffectedFunction {
    pub function_name: String,
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SarifLocation {
    pub file: String,
    pub start_line: u32,
    pub end_line: u32,
}

/// Vulnerability metadata extracted from an externally supplied SARIF report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SarifRecord {
    pub sarif_id: String,
    pub task_id: String,
    pub affected_functions: Vec<AffectedFunction>,
    pub cwe_ids: Vec<String>,
    pub locations: Vec<SarifLocation>,
    pub severity: Option<String>,
    pub stack_trace: Option<Vec<String>>,
    pub verdict: SarifVerdict,
}

impl Validate for SarifRecord {
    fn validate(&self) -> Result<(), DomainError> {
        const T: &str = "SarifRecord";
        if self.sarif_id.is_empty() {
            return Err(invariant(T, "sarif_id is empty"));
        }
        if self.affected_functions.is_empty() && self.locations.is_empty() {
            return Err(invariant(
                T,
                "at least one affected function or location is required",
            ));
        }
        Ok(())
    }
}

/// A grouping of POV, patch, and/or SARIF assessment attributed to one
/// underlying vulnerability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub bundle_id: String,
    pub canonical_signature: CrashSignature,
    pub pov_id: Option<String>,
    pub patch_id: Option<String>,
    pub sarif_id: Option<String>,
}

impl Bundle {
    pub fn member_count(&self) -> usize {
        [
            self.pov_id.is_some(),
            self.patch_id.is_some(),
            self.sarif_id.is_some(),
        ]
        .iter()
        .filter(|present| **present)
        .count()
    }
}

impl Validate for Bundle {
    fn validate(&self) -> Result<(), DomainError> {
        const T: &str = "Bundle";
        if self.bundle_id.is_empty() {
            return Err(invariant(T, "bundle_id is empty"));
        }
        if self.member_count() < 2 {
            return Err(invariant(T, "a bundle groups at least two members"));
        }
        self.canonical_signature.validate()
    }
}

/// Raw accuracy and timing inputs for the scoring formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreInputs {
    pub acc: u64,
    pub inacc: u64,
    pub time_rem: DurationMillis,
    pub time_window: DurationMillis,
}

impl Validate for ScoreInputs {
    fn validate(&self) -> Result<(), DomainError> {
        if self.time_rem > self.time_window {
            return Err(invariant(
                "ScoreInputs",
                "time_rem exceeds time_window",
            ));
        }
        Ok(())
    }
}

/// Per-challenge score components. Each component is either zero or the
/// tau-scaled value of a single accepted submission of that kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreComponents {
    pub vds: f64,
    pub prs: f64,
    pub sas: f64,
    pub bdl: f64,
    pub am: f64,
    pub total: f64,
}

impl Validate for ScoreComponents {
    fn validate(&self) -> Result<(), DomainError> {
        const T: &str = "ScoreComponents";
        const EPS: f64 = 1e-9;
        let zero_or_in = |v: f64, lo: f64, hi: f64| v == 0.0 || (lo..=hi).contains(&v);
        if !zero_or_in(self.vds, 1.0, 2.0) {
            return Err(invariant(T, format!("vds {} outside {{0}} U [1,2]", self.vds)));
        }
        if !zero_or_in(self.prs, 3.0, 6.0) {
            return Err(invariant(T, format!("prs {} outside {{0}} U [3,6]", self.prs)));
        }
        if !zero_or_in(self.sas, 0.5, 1.0) {
            return Err(invariant(T, format!("sas {} outside {{0}} U [0.5,1]", self.sas)));
        }
        if !zero_or_in(self.bdl, 0.5, 1.0) {
            return Err(invariant(T, format!("bdl {} outside {{0}} U [0.5,1]", self.bdl)));
        }
        if !(0.75..=1.0).contains(&self.am) {
            return Err(invariant(T, format!("am {} outside [0.75,1]", self.am)));
        }
        let expected = self.am * (self.vds + self.prs + self.sas + self.bdl);
        if (self.total - expected).abs() > EPS {
            return Err(invariant(
                T,
                format!("total {} != am x component sum {}", self.total, expected),
            ));
        }
        Ok(())
    }
}

/// One function in a call graph, with its source span.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FunctionRecord {
    pub name: String,
    pub file: String,
    pub start_line: u32,
    pub end_line: u32,
    pub source: Option<String>,
    pub parameters: Option<Vec<String>>,
}

impl Validate for FunctionRecord {
    fn validate(&self) -> Result<(), DomainError> {
        const T: &str = "FunctionRecord";
        if self.name.is_empty() {
            return Err(invariant(T, "name is empty"));
        }
        if self.start_line == 0 || self.end_line == 0 {
            return Err(invariant(T, "line numbers are 1-based"));
        }
        if self.start_line > self.end_line {
            return Err(invariant(
                T,
                format!("start_line {} > end_line {}", self.start_line, self.end_line),
            ));
        }
        Ok(())
    }
}

/// A precomputed whole-program call graph with per-harness entrypoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CallGraph {
    pub functions: Vec<FunctionRecord>,
    pub edges: Vec<(usize, usize)>,
    pub entrypoints: BTreeMap<String, usize>,
}

impl Validate for CallGraph {
    fn validate(&self) -> Result<(), DomainError> {
        const T: &str = "CallGraph";
        let n = self.functions.len();
        for (position, record) in self.functions.iter().enumerate() {
            record
                .validate()
                .map_err(|e| invariant(T, format!("functions[{position}]: {e}")))?;
        }
        let mut seen = std::collections::BTreeSet::new();
        for (position, record) in self.functions.iter().enumerate() {
            let key = (record.name.as_str(), record.file.as_str(), record.start_line);
            if !seen.insert(key) {
                return Err(invariant(
                    T,
                    format!(
                        "functions[{position}]: duplicate (name, file, start_line) {key:?}"
                    ),
                ));
            }
        }
        for (position, (caller, callee)) in self.edges.iter().enumerate() {
            if *caller >= n || *callee >= n {
                return Err(invariant(
                    T,
                    format!("edges[{position}]: dangling edge ({caller}, {callee}) with {n} functions"),
                ));
            }
        }
        for (harness, index) in &self.entrypoints {
            if *index >= n {
                return Err(invariant(
                    T,
                    format!("entrypoints[{harness}]: index {index} with {n} functions"),
                ));
            }
        }
        Ok(())
    }
}

/// An ordered entry-to-target function sequence through a call graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CallPath {
    pub functions: Vec<FunctionRecord>,
}

impl CallPath {
    /// Checks the path invariants against the graph it was drawn from.
    pub fn validate_in(&self, graph: &CallGraph) -> Result<(), DomainError> {
        const T: &str = "CallPath";
        if self.functions.is_empty() {
            return Err(invariant(T, "a call path has at least one function"));
        }
        let index_of = |record: &FunctionRecord| {
            graph.functions.iter().position(|f| {
                f.name == record.name && f.file == record.file && f.start_line == record.start_line
            })
        };
        let indices: Vec<usize> = self
            .functions
            .iter()
            .map(|record| {
                index_of(record)
                    .ok_or_else(|| invariant(T, format!("function {} not in graph", record.name)))
            })
            .collect::<Result<_, _>>()?;
        let edge_set: std::collections::BTreeSet<(usize, usize)> =
            graph.edges.iter().copied().collect();
        for pair in indices.windows(2) {
            if !edge_set.contains(&(pair[0], pair[1])) {
                return Err(invariant(
                    T,
                    format!("({}, {}) is not an edge", pair[0], pair[1]),
                ));
            }
        }
        let first = indices[0];
        let last = *indices.last().expect("non-empty");
        for &middle in &indices[1..indices.len().saturating_sub(1)] {
            if middle == first || middle == last {
                return Err(invariant(
                    T,
                    "intermediate functions cannot repeat the entry or target",
                ));
            }
        }
        Ok(())
    }
}

impl Validate for CallPath {
    fn validate(&self) -> Result<(), DomainError> {
        if self.functions.is_empty() {
            return Err(invariant("CallPath", "a call path has at least one function"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_task() -> ChallengeTask {
        ChallengeTask {
            task_id: "task-1".into(),
            mode: ChallengeMode::DeltaScan,
            project_name: "httpd".into(),
            repo_root: PathBuf::from("/tmp/httpd"),
            base_state_ref: Some("base".into()),
            commit_diff: Some("--- a/f\n+++ b/f\n@@ -1 +1 @@\n-a\n+b\n".into()),
            harness_names: vec!["parse".into()],
            language: Language::CCpp,
            time_window: DurationMillis::from_minutes(240),
            received_at: TimestampMillis(1_000),
        }
    }

    #[test]
    fn delta_task_requires_diff() {
        let mut task = sample_task();
        task.commit_diff = None;
        assert!(task.validate().is_err());
    }

    #[test]
    fn signature_equality_ignores_digest_for_locations() {
        let mut a = CrashSignature::location("src/a.c", 42, Sanitizer::Address);
        let b = CrashSignature::location("src/a.c", 42, Sanitizer::Address);
        a.fallback_digest = Some("deadbeefdeadbeef".into());
        assert_eq!(a, b);

        let different_line = CrashSignature::location("src/a.c", 43, Sanitizer::Address);
        assert_ne!(a, different_line);

        let different_sanitizer = CrashSignature::location("src/a.c", 42, Sanitizer::Memory);
        assert_ne!(a, different_sanitizer);
    }

    #[test]
    fn heuristic_and_location_never_compare_equal() {
        let loc = CrashSignature::location("src/a.c", 1, Sanitizer::Address);
        let heur = CrashSignature::heuristic("0123456789abcdef", Sanitizer::Address);
        assert_ne!(loc, heur);
    }

    #[test]
    fn singleton_bundle_rejected() {
        let bundle = Bundle {
            bundle_id: "b-1".into(),
            canonical_signature: CrashSignature::location("src/a.c", 1, Sanitizer::Address),
            pov_id: Some("pov-1".into()),
            patch_id: None,
            sarif_id: None,
        };
        assert!(bundle.validate().is_err());
        assert!(to_document(&bundle).is_err());
    }

    #[test]
    fn status_transitions_only_leave_pending() {
        assert!(SubmissionStatus::Pending.can_transition_to(SubmissionStatus::Passed));
        assert!(SubmissionStatus::Pending.can_transition_to(SubmissionStatus::Duplicate));
        assert!(!SubmissionStatus::Passed.can_transition_to(SubmissionStatus::Failed));
        assert!(!SubmissionStatus::Pending.can_transition_to(SubmissionStatus::Pending));
    }

    #[test]
    fn xpatch_must_not_carry_pov_signature() {
        let patch = PatchSubmission {
            patch_id: "p-1".into(),
            task_id: "task-1".into(),
            diff_text: "--- a/f\n+++ b/f\n@@ -1 +1 @@\n-a\n+b\n".into(),
            pov_signature: Some(CrashSignature::location("f", 1, Sanitizer::Address)),
            is_xpatch: true,
            status: SubmissionStatus::Pending,
            submitted_at: TimestampMillis(0),
            validation: ValidationRecord::unknown(),
        };
        assert!(patch.validate().is_err());
    }

    #[test]
    fn score_components_total_must_match() {
        let bad = ScoreComponents {
            vds: 2.0,
            prs: 6.0,
            sas: 1.0,
            bdl: 1.0,
            am: 1.0,
            total: 9.0,
        };
        assert!(bad.validate().is_err());

        let good = ScoreComponents { total: 10.0, ..bad };
        assert!(good.validate().is_ok());
    }

    #[test]
    fn callgraph_rejects_dangling_edges() {
        let graph = CallGraph {
            functions: vec![FunctionRecord {
                name: "main".into(),
                file: "main.c".into(),
                start_line: 1,
                end_line: 5,
                source: None,
                parameters: None,
            }],
            edges: vec![(0, 99)],
            entrypoints: BTreeMap::new(),
        };
        let err = graph.validate().unwrap_err();
        assert!(err.to_string().contains("dangling edge"));
    }

    #[test]
    fn serialize_round_trips() {
        let task = sample_task();
        let doc = to_document(&task).unwrap();
        let back: ChallengeTask = from_document(&doc).unwrap();
        assert_eq!(task, back);
    }
}
