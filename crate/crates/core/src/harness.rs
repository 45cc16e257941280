//! Batch front end: input documents, seeded random instance generation,
//! report emission and diagram export. All randomness in the crate lives
//! here; the library modules are deterministic.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atom::{Atom, AtomFamily, RelationLevel};
use crate::construction::{pipeline, Construction, PipelineState};
use crate::order::{validate_pair, ElementId, OrderError, QuasiorderPair, Relation};
use crate::space::{embeds_quick, oracle_embeds, Count, MatchingWitness, SpaceError, SymbolicSpace};
use crate::verifier::{verify, verify_quick, VerificationReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),

    #[error("input document is not valid: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Order(#[from] OrderError),

    #[error(transparent)]
    Space(#[from] SpaceError),

    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("element labels must be non-empty")]
    EmptyLabel,

    #[error("command `{0}` requires --input")]
    MissingInput(&'static str),
}

/// The input schema: element labels, the two relations as label pairs, and
/// options. Reflexive pairs are implied and never listed.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub elements: Vec<String>,
    pub leq1: Vec<(String, String)>,
    pub leq2: Vec<(String, String)>,
    #[serde(default)]
    pub options: InputOptions,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputOptions {
    #[serde(default)]
    pub autoclose: bool,
}

/// Parses and validates an input document. `autoclose` from the command line
/// is OR-ed with the document option.
pub fn parse_input(text: &str, autoclose: bool) -> Result<QuasiorderPair, HarnessError> {
    let doc: InputDocument = serde_json::from_str(text)?;
    pair_from_document(&doc, autoclose)
}

pub fn pair_from_document(
    doc: &InputDocument,
    autoclose: bool,
) -> Result<QuasiorderPair, HarnessError> {
    let mut universe = BTreeSet::new();
    for label in &doc.elements {
        if label.is_empty() {
            return Err(HarnessError::EmptyLabel);
        }
        if !universe.insert(ElementId::new(label.clone())) {
            return Err(HarnessError::DuplicateLabel(label.clone()));
        }
    }
    let to_pairs = |pairs: &[(String, String)]| -> Vec<(ElementId, ElementId)> {
        pairs.iter().map(|(a, b)| (ElementId::new(a.clone()), ElementId::new(b.clone()))).collect()
    };
    let pair = validate_pair(
        universe,
        to_pairs(&doc.leq1),
        to_pairs(&doc.leq2),
        autoclose || doc.options.autoclose,
    )?;
    Ok(pair)
}

/// Seeded random pair generator: sample a base relation at `density1` and
/// close it for leq1; extend by extra pairs at `density2` and close again for
/// leq2. Inclusion holds by construction and the seed fully determines the
/// result.
pub fn random_pair(size: usize, seed: u64, density1: f64, density2: f64) -> QuasiorderPair {
    assert!((0.0..=1.0).contains(&density1) && (0.0..=1.0).contains(&density2));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<ElementId> =
        (0..size).map(|i| ElementId::new(format!("q{i:02}"))).collect();
    let universe: BTreeSet<ElementId> = labels.iter().cloned().collect();
    let mut base1 = Vec::new();
    for a in &labels {
        for b in &labels {
            if a != b && rng.random_bool(density1) {
                base1.push((a.clone(), b.clone()));
            }
        }
    }
    let mut base2 = base1.clone();
    for a in &labels {
        for b in &labels {
            if a != b && rng.random_bool(density2) {
                base2.push((a.clone(), b.clone()));
            }
        }
    }
    validate_pair(universe, base1, base2, true).expect("closure makes any sampled pair valid")
}

/// Seeded random space over a fixed small atom pool: up to `max_types`
/// distinct atoms, finite counts up to 3, ω allowed.
pub fn random_space(rng: &mut ChaCha8Rng, max_types: usize) -> SymbolicSpace {
    let mut pool: Vec<Atom> = Vec::new();
    for family in AtomFamily::ALL {
        for index in ["x", "y"] {
            pool.push(Atom::new(family, index));
        }
    }
    let n_types = rng.random_range(0..=max_types.min(pool.len()));
    // Partial Fisher-Yates over the sorted pool keeps the draw deterministic.
    for i in 0..n_types {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    let entries = pool.into_iter().take(n_types).map(|atom| {
        let count =
            if rng.random_bool(0.3) { Count::Omega } else { Count::Finite(rng.random_range(1..=3)) };
        (atom, count)
    });
    SymbolicSpace::normalize(entries)
}

fn quote(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Pairs of a relation without the reflexive diagonal, as label strings.
fn nonreflexive_pairs(rel: &Relation) -> Vec<(String, String)> {
    rel.pairs()
        .iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

/// Transitive reduction of an irreflexive transitive relation: the Hasse
/// edges.
fn hasse_edges(pairs: &BTreeSet<(ElementId, ElementId)>) -> Vec<(ElementId, ElementId)> {
    pairs
        .iter()
        .filter(|(a, b)| {
            a != b
                && !pairs.iter().any(|(c, d)| {
                    c == a && d != b && d != a && pairs.contains(&(d.clone(), b.clone()))
                })
        })
        .cloned()
        .collect()
}

/// Graph-description text for a pipeline state: the Hasse diagram of the
/// strict order, the three component partitions as nested clusters, and the
/// block order as dashed edges.
pub fn export_dot(state: &PipelineState) -> String {
    let mut out = String::from("digraph quasirep {\n  rankdir=BT;\n  node [shape=box];\n");
    for (ti, (t_id, _)) in state.components_t.blocks().iter().enumerate() {
        out.push_str(&format!(
            "  subgraph cluster_t{ti} {{\n    label=\"T {}\";\n    style=dotted;\n",
            quote(t_id.as_str())
        ));
        for (li, (l_id, _)) in state.components_l.blocks().iter().enumerate() {
            if state.components_t.block_of(l_id) != Some(t_id) {
                continue;
            }
            out.push_str(&format!(
                "    subgraph cluster_l{li} {{\n      label=\"L {}\";\n      style=dashed;\n",
                quote(l_id.as_str())
            ));
            for (ci, (c_id, members)) in state.components_c.blocks().iter().enumerate() {
                if state.components_l.block_of(c_id) != Some(l_id) {
                    continue;
                }
                out.push_str(&format!(
                    "      subgraph cluster_c{ci} {{\n        label=\"C {}\";\n        style=solid;\n",
                    quote(c_id.as_str())
                ));
                for member in members {
                    out.push_str(&format!("        \"{}\";\n", quote(member.as_str())));
                }
                out.push_str("      }\n");
            }
            out.push_str("    }\n");
        }
        out.push_str("  }\n");
    }
    for (a, b) in hasse_edges(state.strict.pairs()) {
        out.push_str(&format!("  \"{}\" -> \"{}\";\n", quote(a.as_str()), quote(b.as_str())));
    }
    let l_order_strict: BTreeSet<(ElementId, ElementId)> =
        state.l_order.pairs().iter().filter(|(a, b)| a != b).cloned().collect();
    for (a, b) in hasse_edges(&l_order_strict) {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [style=dashed, constraint=false, label=\"block order\"];\n",
            quote(a.as_str()),
            quote(b.as_str())
        ));
    }
    out.push_str("}\n");
    out
}

/// Bipartite diagram of a matching witness.
pub fn export_witness_dot(witness: &MatchingWitness, level: RelationLevel) -> String {
    let mut out = String::from("digraph witness {\n  rankdir=LR;\n  node [shape=box];\n");
    for transfer in &witness.transfers {
        out.push_str(&format!(
            "  \"src {}\" -> \"dst {}\" [label=\"{} @ {}\"];\n",
            quote(&transfer.from.to_string()),
            quote(&transfer.to.to_string()),
            transfer.count,
            level
        ));
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Construct,
    Verify,
    Random,
    OracleCheck,
    Export,
}

/// Fully resolved run configuration; echoed verbatim into every report so a
/// run can be reproduced from its output alone.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub dot: Option<PathBuf>,
    pub seed: u64,
    pub size: usize,
    pub samples: usize,
    pub density1: f64,
    pub density2: f64,
    pub autoclose: bool,
    pub oracle_bound: u64,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        RunConfig {
            command,
            input: None,
            out: None,
            dot: None,
            seed: 0,
            size: 4,
            samples: 100,
            density1: 0.3,
            density2: 0.3,
            autoclose: false,
            oracle_bound: 12,
        }
    }
}

#[derive(Serialize)]
struct ToolInfo {
    name: &'static str,
    version: &'static str,
}

impl ToolInfo {
    fn current() -> Self {
        ToolInfo { name: "quasirep", version: env!("CARGO_PKG_VERSION") }
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    tool: ToolInfo,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct InputEcho {
    elements: Vec<String>,
    leq1: Vec<(String, String)>,
    leq2: Vec<(String, String)>,
}

impl InputEcho {
    fn from_pair(pair: &QuasiorderPair) -> Self {
        InputEcho {
            elements: pair.universe().iter().map(|e| e.to_string()).collect(),
            leq1: nonreflexive_pairs(pair.leq1()),
            leq2: nonreflexive_pairs(pair.leq2()),
        }
    }
}

#[derive(Serialize)]
struct ConstructBody {
    input: InputEcho,
    spaces: BTreeMap<String, SymbolicSpace>,
    ambient: SymbolicSpace,
}

impl ConstructBody {
    fn new(pair: &QuasiorderPair, construction: &Construction) -> Self {
        ConstructBody {
            input: InputEcho::from_pair(pair),
            spaces: construction
                .spaces
                .iter()
                .map(|(q, s)| (q.to_string(), s.clone()))
                .collect(),
            ambient: construction.ambient.clone(),
        }
    }
}

#[derive(Serialize)]
struct VerifyBody {
    input: InputEcho,
    report: VerificationReport,
}

#[derive(Serialize)]
struct SampleSummary {
    index: usize,
    seed: u64,
    elements: usize,
    pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failed_pairs: Vec<(String, String)>,
}

#[derive(Serialize)]
struct RandomBody {
    samples: Vec<SampleSummary>,
    passed: usize,
    failed: usize,
}

#[derive(Serialize)]
struct LevelAgreement {
    samples: usize,
    agreements: usize,
    skipped_too_large: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    mismatched_samples: Vec<usize>,
}

#[derive(Serialize)]
struct OracleBody {
    per_level: BTreeMap<String, LevelAgreement>,
    mismatches: usize,
}

fn emit(config: &RunConfig, text: &str) -> Result<(), HarnessError> {
    match &config.out {
        Some(path) => fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn emit_dot(config: &RunConfig, text: &str) -> Result<bool, HarnessError> {
    match &config.dot {
        Some(path) => {
            fs::write(path, text)?;
            Ok(true)
        }
        None => Ok(false),
    }
}

fn render<T: Serialize>(config: &RunConfig, body: T) -> String {
    let document = Document { tool: ToolInfo::current(), config, body };
    serde_json::to_string_pretty(&document).expect("reports serialize")
}

fn load_pair(config: &RunConfig, command: &'static str) -> Result<QuasiorderPair, HarnessError> {
    let path = config.input.as_ref().ok_or(HarnessError::MissingInput(command))?;
    let text = fs::read_to_string(path)?;
    parse_input(&text, config.autoclose)
}

fn run_inner(config: &RunConfig) -> Result<i32, HarnessError> {
    match config.command {
        CommandKind::Construct => {
            let pair = load_pair(config, "construct")?;
            let (state, construction) = pipeline(&pair)?;
            emit_dot(config, &export_dot(&state))?;
            emit(config, &render(config, ConstructBody::new(&pair, &construction)))?;
            Ok(0)
        }
        CommandKind::Verify => {
            let pair = load_pair(config, "verify")?;
            let (state, construction) = pipeline(&pair)?;
            emit_dot(config, &export_dot(&state))?;
            let report = verify(&pair, &construction);
            let pass = report.pass;
            let body = VerifyBody { input: InputEcho::from_pair(&pair), report };
            emit(config, &render(config, body))?;
            Ok(if pass { 0 } else { 1 })
        }
        CommandKind::Random => {
            let mut samples = Vec::with_capacity(config.samples);
            let mut passed = 0usize;
            for index in 0..config.samples {
                let seed = config.seed.wrapping_add(index as u64);
                let pair = random_pair(config.size, seed, config.density1, config.density2);
                let (_, construction) = pipeline(&pair)?;
                let report = verify_quick(&pair, &construction);
                if report.pass {
                    passed += 1;
                }
                samples.push(SampleSummary {
                    index,
                    seed,
                    elements: config.size,
                    pass: report.pass,
                    failed_pairs: report
                        .failed_pairs()
                        .map(|v| (v.source.to_string(), v.target.to_string()))
                        .collect(),
                });
            }
            let failed = config.samples - passed;
            emit(config, &render(config, RandomBody { samples, passed, failed }))?;
            Ok(if failed == 0 { 0 } else { 1 })
        }
        CommandKind::OracleCheck => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut per_level = BTreeMap::new();
            let mut mismatches = 0usize;
            for level in RelationLevel::EMBED_LEVELS {
                let mut agreement = LevelAgreement {
                    samples: config.samples,
                    agreements: 0,
                    skipped_too_large: 0,
                    mismatched_samples: Vec::new(),
                };
                for index in 0..config.samples {
                    let x = random_space(&mut rng, 6);
                    let y = random_space(&mut rng, 6);
                    let fast = embeds_quick(&x, &y, level)?;
                    match oracle_embeds(&x, &y, level, config.oracle_bound) {
                        Ok(slow) if slow == fast => agreement.agreements += 1,
                        Ok(_) => {
                            agreement.mismatched_samples.push(index);
                            mismatches += 1;
                        }
                        Err(SpaceError::TooLarge { .. }) => agreement.skipped_too_large += 1,
                        Err(other) => return Err(other.into()),
                    }
                }
                per_level.insert(level.to_string(), agreement);
            }
            emit(config, &render(config, OracleBody { per_level, mismatches }))?;
            Ok(if mismatches == 0 { 0 } else { 1 })
        }
        CommandKind::Export => {
            let pair = load_pair(config, "export")?;
            let (state, _) = pipeline(&pair)?;
            let dot = export_dot(&state);
            if !emit_dot(config, &dot)? {
                println!("{dot}");
            }
            Ok(0)
        }
    }
}

/// Executes one command. Exit status: 0 pass, 1 verification or agreement
/// failure, 2 invalid input (with a structured error on stderr).
pub fn run(config: &RunConfig) -> i32 {
    match run_inner(config) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{}", serde_json::json!({ "error": err.to_string() }));
            2
        }
    }
}
