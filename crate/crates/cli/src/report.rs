//! Run and bound reports, rendered as text or JSON.
//!
//! Reports are deterministic: the same scenario produces byte-identical
//! output. Wall-clock time is only included when asked for.

use std::fmt::Write as _;
use std::time::Duration;

use num_rational::Ratio;
use pinkey_core::bounds::{BoundCase, BoundReport};
use pinkey_core::protocols::{Audit, GroupKeyResult};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundSummary {
    pub case: String,
    pub formula: String,
    /// Exact value, `n` or `n/d`.
    pub value: String,
    pub floor: u64,
    pub witness: String,
}

impl From<&BoundReport> for BoundSummary {
    fn from(b: &BoundReport) -> Self {
        let case = match b.case {
            BoundCase::Broadcast => "broadcast".to_owned(),
            BoundCase::Subgroup { s, t } => format!("subgroup({s},{t})"),
            BoundCase::Group => "group".to_owned(),
        };
        BoundSummary {
            case,
            formula: b.formula.name().to_owned(),
            value: b.value.to_string(),
            floor: b.floor(),
            witness: b.witness.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SecrecySummary {
    pub rank_key: usize,
    pub rank_transcript: usize,
    pub rank_joint: usize,
    pub leaked_bits: usize,
    pub uniform: bool,
    pub forms_faithful: bool,
    pub pads_single_use: bool,
    pub replay_failures: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowPathSummary {
    pub nodes: Vec<usize>,
    pub amount: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub protocol: String,
    pub m: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tie_break: Option<String>,
    pub holders: Vec<usize>,
    pub key_bits: usize,
    pub bound: Option<BoundSummary>,
    /// `bound - key_bits`, exact.
    pub gap: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trees: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flow_value: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flow_paths: Vec<FlowPathSummary>,
    pub transcript_messages: usize,
    pub transcript_bits: usize,
    pub secrecy: SecrecySummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_us: Option<u128>,
    #[serde(skip)]
    gap_negative: bool,
}

impl RunReport {
    pub fn new(
        result: &GroupKeyResult,
        audit: &Audit,
        m: usize,
        seed: u64,
        tie_break: Option<&str>,
        wall_time: Option<Duration>,
    ) -> Self {
        let gap = result.gap();
        RunReport {
            protocol: result.protocol.to_string(),
            m,
            seed,
            tie_break: tie_break.map(str::to_owned),
            holders: result.holders.clone(),
            key_bits: result.key.len(),
            bound: result.stats.bound.as_ref().map(BoundSummary::from),
            gap: gap.as_ref().map(Ratio::to_string),
            iterations: result.stats.iterations,
            trees: result
                .stats
                .trees
                .iter()
                .map(|t| {
                    let edges: Vec<String> = t.edges().iter().map(|e| e.to_string()).collect();
                    edges.join(",")
                })
                .collect(),
            flow_value: result.stats.flow.as_ref().map(|f| f.value),
            flow_paths: result
                .stats
                .flow
                .iter()
                .flat_map(|f| &f.paths)
                .map(|p| FlowPathSummary {
                    nodes: p.nodes.clone(),
                    amount: p.amount,
                })
                .collect(),
            transcript_messages: result.transcript.len(),
            transcript_bits: result.transcript.bit_count(),
            secrecy: SecrecySummary {
                rank_key: audit.secrecy.rank_key,
                rank_transcript: audit.secrecy.rank_transcript,
                rank_joint: audit.secrecy.rank_joint,
                leaked_bits: audit.secrecy.leaked_bits,
                uniform: audit.secrecy.uniform,
                forms_faithful: audit.forms_faithful,
                pads_single_use: audit.pads_single_use,
                replay_failures: audit.replay_failures.clone(),
            },
            wall_time_us: wall_time.map(|d| d.as_micros()),
            gap_negative: gap.is_some_and(|g| g < Ratio::from_integer(0)),
        }
    }

    /// No leakage, a uniform key, a clean audit and a key within its bound.
    pub fn passed(&self) -> bool {
        let s = &self.secrecy;
        s.leaked_bits == 0
            && s.uniform
            && s.forms_faithful
            && s.pads_single_use
            && s.replay_failures.is_empty()
            && !self.gap_negative
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &dyn std::fmt::Display| {
            writeln!(out, "{k:<20} {v}").expect("writing to a string");
        };
        line("protocol", &self.protocol);
        line("terminals", &self.m);
        line("seed", &self.seed);
        if let Some(tb) = &self.tie_break {
            line("tie-break", tb);
        }
        line("key bits", &self.key_bits);
        match &self.bound {
            Some(b) => {
                line("bound", &format!("{} (floor {}, {})", b.value, b.floor, b.formula));
                line("bound witness", &b.witness);
            }
            None => line("bound", &"not computed"),
        }
        if let Some(gap) = &self.gap {
            line("gap", gap);
        }
        if let Some(n) = self.iterations {
            line("iterations", &n);
        }
        for (k, tree) in self.trees.iter().enumerate() {
            line(&format!("tree {k}"), tree);
        }
        if let Some(v) = self.flow_value {
            line("flow", &v);
        }
        for p in &self.flow_paths {
            let nodes: Vec<String> = p.nodes.iter().map(usize::to_string).collect();
            line("flow path", &format!("{} x{}", nodes.join("-"), p.amount));
        }
        line(
            "transcript",
            &format!("{} messages, {} bits", self.transcript_messages, self.transcript_bits),
        );
        let s = &self.secrecy;
        line(
            "ranks",
            &format!("key {} transcript {} joint {}", s.rank_key, s.rank_transcript, s.rank_joint),
        );
        line("leaked bits", &s.leaked_bits);
        line("uniform", &s.uniform);
        line("forms faithful", &s.forms_faithful);
        line("pads single use", &s.pads_single_use);
        if !s.replay_failures.is_empty() {
            line("replay failures", &format!("{:?}", s.replay_failures));
        }
        if let Some(us) = self.wall_time_us {
            line("wall time", &format!("{us} us"));
        }
        line("verdict", &if self.passed() { "PASS" } else { "FAIL" });
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundOutput {
    pub bound: BoundSummary,
    /// Group case: the global minimum cut.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_cut: Option<u64>,
    /// Group case: total budget / (m - 1).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub average: Option<String>,
}

impl BoundOutput {
    pub fn to_text(&self) -> String {
        let b = &self.bound;
        let mut out = format!(
            "case                 {}\nformula              {}\nvalue                {}\nfloor                {}\nwitness              {}\n",
            b.case, b.formula, b.value, b.floor, b.witness
        );
        if let Some(c) = self.min_cut {
            writeln!(out, "{:<20} {c}", "global min cut").expect("writing to a string");
        }
        if let Some(a) = &self.average {
            writeln!(out, "{:<20} {a}", "total / (m - 1)").expect("writing to a string");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
