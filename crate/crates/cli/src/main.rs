use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use pinkey_cli::report::{BoundOutput, BoundSummary, RunReport};
use pinkey_cli::scenario::{OutputFormat, Scenario, ScenarioError};
use pinkey_cli::transcript;
use pinkey_core::graph::{self, TieBreak, WeightedGraph};
use pinkey_core::protocols::{self, GroupKeyResult, Protocol};
use pinkey_core::secrecy::{self, LinearForm};
use pinkey_core::{bounds, PairwiseKeyStore};
use serde_json::json;

/// Group secret-key agreement over pair-wise independent networks.
#[derive(Parser)]
#[command(name = "pinkey", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the upper bound on the key length for a scenario.
    Bound {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Run the scenario's protocol and print a report.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// Overrides the seed in the scenario file.
        #[arg(long)]
        seed: Option<u64>,
        /// lex-kruskal or degree-min; overrides the scenario file.
        #[arg(long)]
        tie_break: Option<TieBreak>,
        /// Write the public transcript here.
        #[arg(long)]
        emit_transcript: Option<PathBuf>,
        #[arg(long)]
        format: Option<OutputFormat>,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Run a brute-force oracle on a small instance.
    Oracle(OracleArgs),
    /// Check a saved transcript against a fresh run of the same scenario.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tie_break: Option<TieBreak>,
        #[arg(long)]
        format: Option<OutputFormat>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    /// Minimum s-t cut by enumerating every cut.
    Mincut,
    /// Every partition whose blocks each contain a must-split terminal.
    Partitions,
    /// Minimum normalized multi-cut.
    Multicut,
    /// Largest number of edge-disjoint spanning trees.
    Packing,
    /// Mutual information between key and transcript forms.
    Mi,
}

#[derive(clap::Args)]
struct OracleArgs {
    kind: OracleKind,
    /// Take the graph from a scenario file.
    #[arg(long, conflicts_with_all = ["nodes", "edges"])]
    scenario: Option<PathBuf>,
    /// Number of nodes when giving edges directly.
    #[arg(long)]
    nodes: Option<usize>,
    /// Weighted edges such as `0-1:5,1-2:3`.
    #[arg(long)]
    edges: Option<String>,
    #[arg(long)]
    source: Option<usize>,
    #[arg(long)]
    sink: Option<usize>,
    /// Comma-separated terminals every block must meet (default: all).
    #[arg(long)]
    must_split: Option<String>,
    /// Key forms for `mi`: forms separated by `,`, basis ids by `^`, `-` for the empty form.
    #[arg(long)]
    key: Option<String>,
    /// Transcript forms for `mi`, same syntax as `--key`.
    #[arg(long)]
    transcript: Option<String>,
    #[arg(long)]
    basis_size: Option<usize>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

enum Failure {
    Io(String),
    Invalid(String),
    Guard(String),
    Verdict(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Guard(_) => 3,
            Failure::Verdict(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Invalid(m) | Failure::Guard(m) | Failure::Verdict(m) => m,
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Io { .. } => Failure::Io(e.to_string()),
            ScenarioError::Parse(_) | ScenarioError::Validation { .. } => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<pinkey_core::Error> for Failure {
    fn from(e: pinkey_core::Error) -> Self {
        match e {
            pinkey_core::Error::InstanceTooLarge { .. } => Failure::Guard(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path, seed: Option<u64>, tie_break: Option<TieBreak>) -> Result<Scenario, Failure> {
    let mut scenario = Scenario::load(path)?;
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    if let Some(tb) = tie_break {
        scenario.tie_break = tb;
    }
    // Relative output paths in a scenario file are relative to that file.
    if let Some(t) = &scenario.output.transcript {
        if t.is_relative() {
            let dir = path.parent().unwrap_or(Path::new(""));
            scenario.output.transcript = Some(dir.join(t));
        }
    }
    Ok(scenario)
}

fn execute(scenario: &Scenario) -> Result<(GroupKeyResult, PairwiseKeyStore), Failure> {
    let spec = &scenario.spec;
    let mut store = PairwiseKeyStore::generate(spec, scenario.seed);
    let result = match scenario.protocol {
        Protocol::Broadcast => protocols::run_broadcast(&mut store, spec)?,
        Protocol::Subgroup { s, t } => protocols::run_subgroup(&mut store, spec, s, t, scenario.seed)?,
        Protocol::Group => protocols::run_group_key(&mut store, spec, scenario.tie_break)?,
    };
    Ok((result, store))
}

fn bound(path: &Path, format: Option<OutputFormat>) -> Result<String, Failure> {
    let scenario = load(path, None, None)?;
    let spec = &scenario.spec;
    let report = match scenario.protocol {
        Protocol::Broadcast => bounds::broadcast_bound(spec)?,
        Protocol::Subgroup { s, t } => bounds::subgroup_bound(spec, s, t)?,
        Protocol::Group => bounds::group_bound(spec)?,
    };
    let (min_cut, average) = if scenario.protocol == Protocol::Group {
        let (cut, avg) = bounds::corollary_bounds(spec)?;
        (Some(cut), Some(avg.to_string()))
    } else {
        (None, None)
    };
    let out = BoundOutput {
        bound: BoundSummary::from(&report),
        min_cut,
        average,
    };
    Ok(match format.unwrap_or(scenario.output.format) {
        OutputFormat::Text => out.to_text(),
        OutputFormat::MachineReadable => out.to_json(),
    })
}

fn run(
    path: &Path,
    seed: Option<u64>,
    tie_break: Option<TieBreak>,
    emit: Option<PathBuf>,
    format: Option<OutputFormat>,
    timing: bool,
) -> Result<String, Failure> {
    let scenario = load(path, seed, tie_break)?;
    let start = Instant::now();
    let (result, store) = execute(&scenario)?;
    let elapsed = start.elapsed();
    let audit = protocols::audit(&result, &store)?;
    let tie_break = (scenario.protocol == Protocol::Group).then(|| scenario.tie_break.name());
    let report = RunReport::new(
        &result,
        &audit,
        scenario.spec.m(),
        scenario.seed,
        tie_break,
        timing.then_some(elapsed),
    );
    if let Some(path) = emit.or(scenario.output.transcript) {
        write_file(&path, &transcript::write(&result.transcript, store.basis()))?;
    }
    let text = match format.unwrap_or(scenario.output.format) {
        OutputFormat::Text => report.to_text(),
        OutputFormat::MachineReadable => report.to_json(),
    };
    if report.passed() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Verdict("secrecy or bound check failed".to_owned()))
    }
}

fn verify(
    path: &Path,
    saved: &Path,
    seed: Option<u64>,
    tie_break: Option<TieBreak>,
    format: Option<OutputFormat>,
) -> Result<String, Failure> {
    let scenario = load(path, seed, tie_break)?;
    let text = read_file(saved)?;
    let messages = transcript::parse(&text).map_err(|e| Failure::Invalid(e.to_string()))?;
    let (result, store) = execute(&scenario)?;
    let basis = store.basis();

    let mut problems = Vec::new();
    let mut saved_forms = Vec::new();
    for msg in &messages {
        let forms = match msg.resolve(basis) {
            Ok(forms) => forms,
            Err(e) => {
                problems.push(e.to_string());
                continue;
            }
        };
        for (form, &bit) in forms.iter().zip(&msg.payload) {
            if form.evaluate(basis.values()) != bit {
                problems.push(format!("line {}: payload bit does not match its form", msg.line));
                break;
            }
        }
        saved_forms.extend(forms);
    }
    let fresh = result.transcript.messages();
    if fresh.len() != messages.len() {
        problems.push(format!(
            "saved transcript has {} messages, a fresh run has {}",
            messages.len(),
            fresh.len()
        ));
    }
    for (msg, expected) in messages.iter().zip(fresh) {
        let same = msg.round == expected.round
            && msg.sender == expected.sender
            && msg.receiver == expected.receiver
            && msg.payload == expected.payload
            && msg.resolve(basis).ok().as_deref() == Some(&expected.forms[..]);
        if !same {
            problems.push(format!("line {}: differs from the fresh run", msg.line));
        }
    }
    let secrecy = secrecy::verify_independence(&result.key_forms, &saved_forms, basis.len())?;
    if !secrecy.is_secret() {
        problems.push(format!(
            "key leaks {} bits to the saved transcript (uniform: {})",
            secrecy.leaked_bits, secrecy.uniform
        ));
    }

    let out = match format.unwrap_or(scenario.output.format) {
        OutputFormat::Text => {
            let mut s = format!(
                "messages             {}\nkey bits             {}\nleaked bits          {}\n",
                messages.len(),
                result.key.len(),
                secrecy.leaked_bits
            );
            for p in &problems {
                s.push_str(&format!("problem              {p}\n"));
            }
            s.push_str(if problems.is_empty() { "verdict              PASS\n" } else { "verdict              FAIL\n" });
            s
        }
        OutputFormat::MachineReadable => {
            let v = json!({
                "messages": messages.len(),
                "key_bits": result.key.len(),
                "leaked_bits": secrecy.leaked_bits,
                "problems": problems,
                "passed": problems.is_empty(),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
    };
    if problems.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verdict(format!("{} problem(s) in {}", problems.len(), saved.display())))
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Failure::Invalid(format!("{what}: {s:?} is not a terminal"))))
        .collect()
}

fn parse_edges(m: usize, text: &str) -> Result<WeightedGraph, Failure> {
    let mut g = WeightedGraph::new(m);
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let bad = || Failure::Invalid(format!("--edges: expected i-j:w, found {item:?}"));
        let (pair, w) = item.split_once(':').ok_or_else(bad)?;
        let (i, j) = pair.split_once('-').ok_or_else(bad)?;
        let (i, j, w): (usize, usize, u64) = (
            i.parse().map_err(|_| bad())?,
            j.parse().map_err(|_| bad())?,
            w.parse().map_err(|_| bad())?,
        );
        if i >= m || j >= m || i == j {
            return Err(Failure::Invalid(format!("--edges: {item:?} is not a pair of distinct nodes below {m}")));
        }
        g.set_weight(i, j, w);
    }
    Ok(g)
}

fn parse_forms(text: Option<&str>) -> Result<Vec<LinearForm>, Failure> {
    let Some(text) = text else { return Ok(Vec::new()) };
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|form| {
            if form == "-" {
                return Ok(LinearForm::default());
            }
            form.split('^')
                .map(|id| {
                    id.parse::<usize>()
                        .map_err(|_| Failure::Invalid(format!("form {form:?}: {id:?} is not a basis id")))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(LinearForm::from_ids)
        })
        .collect()
}

fn oracle(args: OracleArgs) -> Result<String, Failure> {
    let graph = || -> Result<WeightedGraph, Failure> {
        if let Some(path) = &args.scenario {
            return Ok(load(path, None, None)?.spec.graph());
        }
        let m = args
            .nodes
            .ok_or_else(|| Failure::Invalid("give --scenario or --nodes with --edges".to_owned()))?;
        parse_edges(m, args.edges.as_deref().unwrap_or(""))
    };
    let value = match args.kind {
        OracleKind::Mincut => {
            let g = graph()?;
            let (s, t) = match (args.source, args.sink) {
                (Some(s), Some(t)) => (s, t),
                _ => return Err(Failure::Invalid("mincut needs --source and --sink".to_owned())),
            };
            if s >= g.m() || t >= g.m() {
                return Err(Failure::Invalid(format!("--source and --sink must be below {}", g.m())));
            }
            let cut = graph::min_st_cut_bruteforce(&g, s, t)?;
            json!({ "oracle": "mincut", "value": cut.value, "witness": cut.witness.to_string() })
        }
        OracleKind::Partitions | OracleKind::Multicut => {
            let g = graph()?;
            let must = match &args.must_split {
                Some(list) => parse_list(list, "--must-split")?,
                None => (0..g.m()).collect(),
            };
            if let Some(&bad) = must.iter().find(|&&t| t >= g.m()) {
                return Err(Failure::Invalid(format!("--must-split: terminal {bad} out of range")));
            }
            if matches!(args.kind, OracleKind::Partitions) {
                let all: Vec<String> = graph::enumerate_partitions(g.m(), &must)?
                    .map(|p| p.to_string())
                    .collect();
                json!({ "oracle": "partitions", "count": all.len(), "partitions": all })
            } else {
                let (value, witness) = graph::min_normalized_multicut(&g, &must)?;
                json!({ "oracle": "multicut", "value": value.to_string(), "witness": witness.to_string() })
            }
        }
        OracleKind::Packing => {
            let g = graph()?;
            json!({ "oracle": "packing", "value": graph::optimal_tree_packing_bruteforce(&g)? })
        }
        OracleKind::Mi => {
            let key = parse_forms(args.key.as_deref())?;
            let transcript = parse_forms(args.transcript.as_deref())?;
            let basis = args.basis_size.unwrap_or_else(|| {
                key.iter()
                    .chain(&transcript)
                    .filter_map(|f| f.ids().last())
                    .max()
                    .map_or(0, |&id| id + 1)
            });
            let mi = secrecy::brute_force_mutual_information(&key, &transcript, basis)?;
            json!({ "oracle": "mi", "basis_size": basis, "value": mi.to_string() })
        }
    };
    Ok(match args.format.unwrap_or_default() {
        OutputFormat::MachineReadable => format!("{}\n", serde_json::to_string_pretty(&value).expect("json")),
        OutputFormat::Text => {
            let mut out = String::new();
            for (k, v) in value.as_object().expect("object") {
                match v {
                    serde_json::Value::Array(items) => {
                        for item in items {
                            out.push_str(&format!("{:<20} {}\n", k, item.as_str().unwrap_or_default()));
                        }
                    }
                    serde_json::Value::String(s) => out.push_str(&format!("{k:<20} {s}\n")),
                    other => out.push_str(&format!("{k:<20} {other}\n")),
                }
            }
            out
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bound { scenario, format } => bound(&scenario, format),
        Command::Run {
            scenario,
            seed,
            tie_break,
            emit_transcript,
            format,
            timing,
        } => run(&scenario, seed, tie_break, emit_transcript, format, timing),
        Command::Oracle(args) => oracle(args),
        Command::Verify {
            scenario,
            transcript,
            seed,
            tie_break,
            format,
        } => verify(&scenario, &transcript, seed, tie_break, format),
    };
    match outcome {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
