//! Experiment report schema (JSON, golden-file tested).

use serde::{Deserialize, Serialize};

pub const PRNG_NAME: &str = "chacha8";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RuleResult {
    pub rule: String,
    pub steps: usize,
    /// Exact terminal weight as `p/q`.
    pub terminal_weight: String,
    pub truncated: bool,
    pub millis: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct OracleResult {
    /// Exact flip distance; `null` when the target is unreachable.
    pub distance: Option<usize>,
    /// `bfs` when the full flip-graph oracle ran, `witness` when the
    /// distance comes from a replayed two-flip witness plus a
    /// non-adjacency check.
    pub method: String,
    pub millis: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportRow {
    pub instance_id: String,
    pub n: usize,
    pub big_n: usize,
    pub seed: u64,
    pub prng: String,
    pub oracle: Option<OracleResult>,
    pub rules: Vec<RuleResult>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExperimentReport {
    pub schema: String,
    pub rows: Vec<ReportRow>,
}
