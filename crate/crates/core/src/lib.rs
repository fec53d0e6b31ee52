//! Core vocabulary and foundation services for an automated vulnerability
//! triage and repair pipeline: domain types, scoring arithmetic, crash-report
//! signatures, unified diffs, call-graph queries, and the model router.

pub mod callgraph;
pub mod diff;
pub mod domain;
pub mod router;
pub mod scoring;
pub mod signature;
pub mod time;
