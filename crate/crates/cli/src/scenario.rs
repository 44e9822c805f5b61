//! Scenario files: a versioned TOML document describing one network and
//! one protocol run.
//!
//! ```toml
//! version = 1
//! m = 3
//! seed = 7
//! tie_break = "lex-kruskal"   # optional
//!
//! [protocol]
//! kind = "subgroup"           # broadcast | subgroup | group
//! s = 0
//! t = 2
//!
//! [[pair]]
//! i = 0
//! j = 1
//! bits = 5
//!
//! [output]                    # optional
//! transcript = "run.transcript"
//! format = "text"             # text | machine-readable
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use pinkey_core::graph::TieBreak;
use pinkey_core::protocols::Protocol;
use pinkey_core::NetworkSpec;
use serde::Deserialize;

pub const SCENARIO_VERSION: i64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{field}: {message}")]
    Validation { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    MachineReadable,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "machine-readable" => Ok(OutputFormat::MachineReadable),
            other => Err(format!("unknown format {other:?}, expected text or machine-readable")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OutputOptions {
    pub transcript: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub spec: NetworkSpec,
    pub protocol: Protocol,
    pub tie_break: TieBreak,
    pub seed: u64,
    pub output: OutputOptions,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    version: i64,
    m: i64,
    seed: u64,
    tie_break: Option<String>,
    protocol: RawProtocol,
    #[serde(default)]
    pair: Vec<RawPair>,
    output: Option<RawOutput>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProtocol {
    kind: String,
    s: Option<i64>,
    t: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    i: i64,
    j: i64,
    bits: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    transcript: Option<PathBuf>,
    format: Option<String>,
}

fn terminal(field: &str, value: i64, m: usize) -> Result<usize, ScenarioError> {
    if value < 0 || value as u64 >= m as u64 {
        return Err(invalid(field, format!("terminal {value} out of range 0..{m}")));
    }
    Ok(value as usize)
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        if raw.version != SCENARIO_VERSION {
            return Err(invalid(
                "version",
                format!("unsupported version {}, expected {SCENARIO_VERSION}", raw.version),
            ));
        }
        if raw.m < 2 {
            return Err(invalid("m", format!("need at least 2 terminals, got {}", raw.m)));
        }
        let m = raw.m as usize;
        let mut spec = NetworkSpec::new(m).map_err(|e| invalid("m", e.to_string()))?;
        let mut seen = std::collections::BTreeSet::new();
        for (n, pair) in raw.pair.iter().enumerate() {
            let i = terminal(&format!("pair[{n}].i"), pair.i, m)?;
            let j = terminal(&format!("pair[{n}].j"), pair.j, m)?;
            if i == j {
                return Err(invalid(format!("pair[{n}]"), format!("terminal {i} paired with itself")));
            }
            if pair.bits < 0 {
                return Err(invalid(
                    format!("pair[{n}].bits"),
                    format!("budget must be non-negative, got {}", pair.bits),
                ));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(invalid(format!("pair[{n}]"), format!("pair {i}-{j} listed twice")));
            }
            spec.set_budget(i, j, pair.bits as u64)
                .map_err(|e| invalid(format!("pair[{n}]"), e.to_string()))?;
        }

        let endpoints = |p: &RawProtocol| -> Result<(usize, usize), ScenarioError> {
            let s = p.s.ok_or_else(|| invalid("protocol.s", "required for subgroup"))?;
            let t = p.t.ok_or_else(|| invalid("protocol.t", "required for subgroup"))?;
            let (s, t) = (terminal("protocol.s", s, m)?, terminal("protocol.t", t, m)?);
            if s == t {
                return Err(invalid("protocol.t", format!("must differ from protocol.s (both {s})")));
            }
            Ok((s, t))
        };
        let protocol = match raw.protocol.kind.as_str() {
            "subgroup" => {
                let (s, t) = endpoints(&raw.protocol)?;
                Protocol::Subgroup { s, t }
            }
            kind @ ("broadcast" | "group") => {
                if raw.protocol.s.is_some() || raw.protocol.t.is_some() {
                    return Err(invalid("protocol", format!("s and t only apply to subgroup, not {kind}")));
                }
                if kind == "broadcast" {
                    if let Some(pair) = spec.non_star_pair() {
                        return Err(invalid(
                            "pair",
                            format!("broadcast needs a star centered at 0, but {pair} has a budget"),
                        ));
                    }
                    Protocol::Broadcast
                } else {
                    Protocol::Group
                }
            }
            other => {
                return Err(invalid(
                    "protocol.kind",
                    format!("unknown protocol {other:?}, expected broadcast, subgroup or group"),
                ))
            }
        };

        let tie_break = match raw.tie_break.as_deref() {
            None => TieBreak::default(),
            Some(name) => name.parse().map_err(|e: &str| invalid("tie_break", e))?,
        };
        let output = match raw.output {
            None => OutputOptions::default(),
            Some(o) => OutputOptions {
                transcript: o.transcript,
                format: match o.format.as_deref() {
                    None => OutputFormat::default(),
                    Some(f) => f.parse().map_err(|e: String| invalid("output.format", e))?,
                },
            },
        };
        Ok(Scenario {
            spec,
            protocol,
            tie_break,
            seed: raw.seed,
            output,
        })
    }
}
