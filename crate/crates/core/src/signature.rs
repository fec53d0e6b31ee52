//! Crash-report parsing into canonical [`CrashSignature`]s.
//!
//! Two stack-frame grammars are understood:
//!
//! * `AsanLike` — native sanitizer frames of the form
//!   `#N 0xADDR in symbol path/file.c:LINE[:COL]` (the address is optional);
//! * `JazzerLike` — JVM frames of the form
//!   `at pkg.Class.method(File.java:LINE)`.
//!
//! The signature is taken from the topmost frame whose file matches one of
//! the project root markers, so sanitizer-runtime frames above user code do
//! not collapse distinct bugs. When no frame parses, a deterministic digest
//! of the normalized report text is used instead; hex addresses, process
//! ids, and timestamps never influence that digest.

use std::sync::OnceLock;

use regex::Regex;
use sha2::{Digest, Sha256};

use crate::domain::{CrashSignature, Sanitizer};

/// How many leading report lines feed the fallback digest. Bounds hashing
/// cost on megabyte-scale reports.
const DIGEST_LINES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrammarKind {
    AsanLike,
    JazzerLike,
}

/// One parsed stack frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub symbol: String,
    pub file: String,
    pub line: u32,
}

/// The frame grammar used for a given sanitizer's reports.
#[derive(Debug, Clone, Copy)]
pub struct CrashReportGrammar {
    pub kind: GrammarKind,
}

fn asan_frame_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\s*#\d+\s+(?:0x[0-9a-fA-F]+\s+)?in\s+(\S+)\s+(\S+?):(\d+)(?::\d+)?\s*$")
            .expect("static regex")
    })
}

fn jazzer_frame_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\s*at\s+([\w.$<>/]+)\(([^():]+):(\d+)\)\s*$").expect("static regex")
    })
}

impl CrashReportGrammar {
    pub fn for_sanitizer(sanitizer: Sanitizer) -> Self {
        let kind = match sanitizer {
            Sanitizer::Jazzer => GrammarKind::JazzerLike,
            _ => GrammarKind::AsanLike,
        };
        CrashReportGrammar { kind }
    }

    /// Parses a single report line as a stack frame, if it is one.
    pub fn parse_frame(&self, line: &str) -> Option<Frame> {
        match self.kind {
            GrammarKind::AsanLike => asan_frame_re().captures(line).map(|caps| Frame {
                symbol: caps[1].to_string(),
                file: caps[2].to_string(),
                line: caps[3].parse().ok()?,
            }),
            GrammarKind::JazzerLike => jazzer_frame_re().captures(line).map(|caps| Frame {
                symbol: caps[1].to_string(),
                file: caps[2].to_string(),
                line: caps[3].parse().ok()?,
            }),
        }
        .filter(|frame| frame.line > 0)
    }
}

/// Extracts every stack frame in the report, trying both grammars per line.
pub fn extract_frames(report: &str) -> Vec<Frame> {
    let asan = CrashReportGrammar {
        kind: GrammarKind::AsanLike,
    };
    let jazzer = CrashReportGrammar {
        kind: GrammarKind::JazzerLike,
    };
    report
        .lines()
        .filter_map(|line| asan.parse_frame(line).or_else(|| jazzer.parse_frame(line)))
        .collect()
}

fn matches_project(file: &str, markers: &[String]) -> bool {
    markers.is_empty() || markers.iter().any(|marker| file.starts_with(marker.as_str()))
}

/// Derives a crash signature from a sanitizer report.
///
/// Returns a location signature from the topmost frame whose file matches a
/// project root marker (any frame when `project_root_markers` is empty), and
/// falls back to [`heuristic_signature`] when nothing parses. Total: never
/// fails.
pub fn parse_crash_report(
    report: &str,
    sanitizer: Sanitizer,
    project_root_markers: &[String],
) -> CrashSignature {
    let grammar = CrashReportGrammar::for_sanitizer(sanitizer);
    for line in report.lines() {
        if let Some(frame) = grammar.parse_frame(line) {
            if matches_project(&frame.file, project_root_markers) {
                return CrashSignature::location(frame.file, frame.line, sanitizer);
            }
        }
    }
    heuristic_signature(report, sanitizer)
}

fn hex_addr_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"0x[0-9a-fA-F]+").expect("static regex"))
}

fn pid_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\bpid[=:\s]+\d+").expect("static regex"))
}

fn banner_pid_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"==\d+==").expect("static regex"))
}

fn timestamp_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"\d{4}-\d{2}-\d{2}[T ]\d{2}:\d{2}:\d{2}(?:\.\d+)?(?:Z|[+-]\d{2}:?\d{2})?")
            .expect("static regex")
    })
}

fn normalize_for_digest(report: &str) -> String {
    let head: Vec<&str> = report.lines().take(DIGEST_LINES).collect();
    let text = head.join("\n");
    let text = hex_addr_re().replace_all(&text, "<addr>");
    let text = banner_pid_re().replace_all(&text, "==<pid>==");
    let text = pid_re().replace_all(&text, "pid <pid>");
    timestamp_re().replace_all(&text, "<ts>").into_owned()
}

/// Deterministic fallback signature: a truncated hash of the normalized
/// report head plus the sanitizer tag.
pub fn heuristic_signature(report: &str, sanitizer: Sanitizer) -> CrashSignature {
    let mut hasher = Sha256::new();
    hasher.update(normalize_for_digest(report).as_bytes());
    hasher.update(b"\n");
    hasher.update(sanitizer.tag().as_bytes());
    let digest = hex::encode(hasher.finalize());
    CrashSignature::heuristic(&digest[..16], sanitizer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::SignatureKind;

    fn markers() -> Vec<String> {
        vec!["src/".into()]
    }

    #[test]
    fn asan_frame_becomes_location_signature() {
        let report = "==1234==ERROR: AddressSanitizer: heap-buffer-overflow on address 0x602000000011\n    #0 0x55de61f4 in parse_header src/http.c:42:7\n    #1 0x55de6203 in main src/main.c:10\n";
        let sig = parse_crash_report(report, Sanitizer::Address, &markers());
        assert_eq!(
            sig,
            CrashSignature::location("src/http.c", 42, Sanitizer::Address)
        );
    }

    #[test]
    fn runtime_frames_above_project_code_are_skipped() {
        let report = "    #0 0x4f in __asan_memcpy /llvm/asan/asan_interceptors.cpp:22\n    #1 0x55 in parse_header src/http.c:42:7\n";
        let sig = parse_crash_report(report, Sanitizer::Address, &markers());
        assert_eq!(
            sig,
            CrashSignature::location("src/http.c", 42, Sanitizer::Address)
        );
    }

    #[test]
    fn jazzer_frame_becomes_location_signature() {
        let report = "== Java Exception: com.code_intelligence.jazzer.api.FuzzerSecurityIssueHigh\n\tat com.example.Parser.parse(Parser.java:17)\n\tat com.example.Fuzzer.fuzzerTestOneInput(Fuzzer.java:9)\n";
        let sig = parse_crash_report(report, Sanitizer::Jazzer, &["Parser.java".into()]);
        assert_eq!(
            sig,
            CrashSignature::location("Parser.java", 17, Sanitizer::Jazzer)
        );
    }

    #[test]
    fn frameless_report_falls_back_to_heuristic() {
        let report = "SEGV on unknown address";
        let sig = parse_crash_report(report, Sanitizer::Address, &markers());
        assert_eq!(sig.kind, SignatureKind::Heuristic);
        assert_eq!(sig, heuristic_signature(report, Sanitizer::Address));
    }

    #[test]
    fn heuristic_is_deterministic() {
        let report = "something broke\nbadly";
        assert_eq!(
            heuristic_signature(report, Sanitizer::Memory),
            heuristic_signature(report, Sanitizer::Memory)
        );
    }

    #[test]
    fn addresses_pids_and_timestamps_do_not_affect_digest() {
        let a = "==1234==ERROR at 0xdeadbeef pid 777\n2024-01-02T10:20:30Z crash";
        let b = "==9999==ERROR at 0x1337 pid 42\n2025-06-07T01:02:03Z crash";
        assert_eq!(
            heuristic_signature(a, Sanitizer::Address),
            heuristic_signature(b, Sanitizer::Address)
        );
    }

    #[test]
    fn sanitizer_distinguishes_heuristic_signatures() {
        let report = "mystery crash";
        assert_ne!(
            heuristic_signature(report, Sanitizer::Address),
            heuristic_signature(report, Sanitizer::Memory)
        );
    }

    #[test]
    fn location_signature_ignores_rest_of_report() {
        let a = "preamble A\n    #0 0x1 in f src/a.c:7:1\ntail A";
        let b = "totally different preamble\n    #0 0x2 in f src/a.c:7:3\nother tail";
        assert_eq!(
            parse_crash_report(a, Sanitizer::Address, &markers()),
            parse_crash_report(b, Sanitizer::Address, &markers())
        );
    }

    #[test]
    fn digest_only_reads_report_head() {
        let mut long_a = String::new();
        let mut long_b = String::new();
        for i in 0..30 {
            long_a.push_str(&format!("line {i}\n"));
            long_b.push_str(&format!("line {i}\n"));
        }
        long_b.push_str("divergence beyond line 20\n");
        assert_eq!(
            heuristic_signature(&long_a, Sanitizer::Address),
            heuristic_signature(&long_b, Sanitizer::Address)
        );
    }
}
