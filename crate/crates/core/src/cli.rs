//! Command-line front end. Every command emits a certificate that
//! `verify-witness` can replay.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::classify::{self, Classification};
use crate::error::Error;
use crate::hermspace::{Signature, Subspace};
use crate::mappair::{MapPair, Orthogonality};
use crate::parse::{self, InputDocument, SegreInput};
use crate::segre;
use crate::spanlab;
use crate::workbench::{self, Construction, GeneratorSpec, GroundTruth, NullPattern, SearchRegion};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_NOT_ORTHOGONAL: i32 = 2;
pub const EXIT_UNRESOLVED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_UNREADABLE: i32 = 66;

const SUBSPACE_NOTE: &str = "splitting subspaces A are searched among non-degenerate subspaces only";

#[derive(Debug, Parser)]
#[command(name = "orthopair", version, about = "Classify orthogonal pairs of polynomial maps between Hermitian projective spaces")]
struct Cli {
    /// Seed for all genericity sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the certificate here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum ComponentArg {
    F1,
    F2,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum ConstructionArg {
    Standard,
    QuasiStandard,
    Null,
    RemarkFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum NullPatternArg {
    DisjointBlocks,
    IntoRadical,
    IsotropicLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum RegionArg {
    UnitMonomials,
    RemarkSupport,
    Empty,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Decide orthogonality; emits the quotient or a witness point pair.
    CheckOrthogonal { input: PathBuf },
    /// Full classification with witnesses.
    Classify { input: PathBuf },
    /// Linear span of the image of each component.
    Span {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ComponentArg::Both)]
        component: ComponentArg,
    },
    /// Generic plane-to-plane degrees and their propagation.
    Planes {
        input: PathBuf,
        /// Projective dimension of the test planes.
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long, value_enum, default_value_t = ComponentArg::F1)]
        component: ComponentArg,
    },
    /// Replay a certificate: `verify-witness [INPUT] CERTIFICATE`.
    VerifyWitness {
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
    },
    /// Check the Heisenberg pairing identity and classify a Segre map.
    SegreCheck { input: PathBuf },
    /// Convert a Segre map to a map pair document.
    SegreConvert {
        input: PathBuf,
        /// Also write the bare pair document here.
        #[arg(long)]
        pair_output: Option<PathBuf>,
    },
    /// Generate a pair with known classification.
    Generate {
        #[arg(long, value_enum)]
        construction: ConstructionArg,
        /// Source signature as `r,s` or `r,s,t`.
        #[arg(long, default_value = "1,1")]
        source: String,
        #[arg(long, default_value = "2,2")]
        target: String,
        #[arg(long, default_value_t = 1)]
        phi_degree: u32,
        #[arg(long, value_enum, default_value_t = NullPatternArg::DisjointBlocks)]
        null_pattern: NullPatternArg,
        #[arg(long)]
        pair_output: Option<PathBuf>,
    },
    /// Budgeted search for pairs outside the null / quasi-standard dichotomy.
    Falsify {
        #[arg(long, value_enum, default_value_t = RegionArg::UnitMonomials)]
        region: RegionArg,
        #[arg(long, default_value = "1,2")]
        source: String,
        #[arg(long, default_value = "1,2")]
        target: String,
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckOrthogonal { .. } => "check-orthogonal",
            Command::Classify { .. } => "classify",
            Command::Span { .. } => "span",
            Command::Planes { .. } => "planes",
            Command::VerifyWitness { .. } => "verify-witness",
            Command::SegreCheck { .. } => "segre-check",
            Command::SegreConvert { .. } => "segre-convert",
            Command::Generate { .. } => "generate",
            Command::Falsify { .. } => "falsify",
        }
    }

    fn input(&self) -> Option<&Path> {
        match self {
            Command::CheckOrthogonal { input }
            | Command::Classify { input }
            | Command::Span { input, .. }
            | Command::Planes { input, .. }
            | Command::SegreCheck { input }
            | Command::SegreConvert { input, .. } => Some(input),
            Command::VerifyWitness { files } => files.last().map(PathBuf::as_path),
            _ => None,
        }
    }
}

/// Emitted by every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub command: String,
    pub tool_version: String,
    /// `sha256:<hex>` of the input file, or of the parameters for commands
    /// without one.
    pub input_digest: String,
    pub seed: u64,
    pub parameters: Value,
    pub verdict: Value,
    pub transcript: Vec<String>,
    pub notes: Vec<String>,
    pub exit_status: i32,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(Error),
    Unreadable(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Unreadable(_) => EXIT_UNREADABLE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Unreadable(m) => f.write_str(m),
            Failure::Parse(e) => write!(f, "{e}"),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

struct Run {
    verdict: Value,
    transcript: Vec<String>,
    notes: Vec<String>,
    exit: i32,
    summary: String,
}

fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn read_input(path: &Path) -> Outcome<Vec<u8>> {
    fs::read(path).map_err(|e| Failure::Unreadable(format!("cannot read {}: {e}", path.display())))
}

fn text(bytes: &[u8]) -> Outcome<&str> {
    std::str::from_utf8(bytes).map_err(|e| Failure::Parse(Error::Parse { position: e.valid_up_to(), message: "input is not UTF-8".into() }))
}

fn load_pair(bytes: &[u8]) -> Outcome<MapPair> {
    parse::parse_pair(text(bytes)?).map_err(Failure::Parse)
}

fn load_segre(bytes: &[u8]) -> Outcome<SegreInput> {
    match parse::parse_document(text(bytes)?).map_err(Failure::Parse)? {
        InputDocument::Segre(s) => Ok(s),
        _ => Err(Failure::Parse(Error::Parse { position: 0, message: "expected an affine_heisenberg document".into() })),
    }
}

fn parse_signature(s: &str) -> Outcome<Signature> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("bad signature '{s}': expected r,s or r,s,t")))?;
    match parts[..] {
        [r, s] => Ok(Signature::nondegenerate(r, s)),
        [r, s, t] => Ok(Signature::new(r, s, t)),
        _ => Err(Failure::Usage(format!("bad signature '{s}': expected r,s or r,s,t"))),
    }
}

fn data(e: Error) -> Failure {
    Failure::Parse(e)
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn exit_for(c: &Classification) -> i32 {
    match c {
        Classification::NotOrthogonal { .. } => EXIT_NOT_ORTHOGONAL,
        Classification::Unresolved { .. } => EXIT_UNRESOLVED,
        _ => EXIT_OK,
    }
}

fn orthogonality_verdict(pair: &MapPair, seed: u64) -> Outcome<(Value, Vec<String>, i32)> {
    let report = pair.is_orthogonal_seeded(seed).map_err(data)?;
    let mut transcript = vec![format!("pairing polynomial has {} terms", pair.pairing_polynomial().num_terms())];
    if !report.source_has_null_points {
        transcript.push("source has no null points: orthogonality may be vacuous".into());
    }
    let n = pair.source().dim();
    Ok(match &report.verdict {
        Orthogonality::Yes { quotient } => {
            transcript.push("source form divides the pairing polynomial".into());
            let q = parse::format_poly(quotient, &parse::pairing_vars(n));
            (
                json!({ "tag": "Orthogonal", "quotient": q, "source_has_null_points": report.source_has_null_points }),
                transcript,
                EXIT_OK,
            )
        }
        Orthogonality::No { witness } => {
            transcript.push("nonzero remainder; sampled a witness point pair".into());
            (
                json!({
                    "tag": "NotOrthogonal",
                    "witness": parse::point_pair_to_json(witness),
                    "source_has_null_points": report.source_has_null_points,
                }),
                transcript,
                EXIT_NOT_ORTHOGONAL,
            )
        }
    })
}

fn classification_run(pair: &MapPair, seed: u64) -> Outcome<Run> {
    let outcome = classify::classify_traced(pair, seed).map_err(data)?;
    let n = pair.source().dim();
    let mut verdict = parse::classification_to_json(&outcome.classification, n);
    verdict["source_has_null_points"] = json!(outcome.source_has_null_points);
    let mut notes = vec![SUBSPACE_NOTE.to_string()];
    if !outcome.source_has_null_points {
        notes.push("definite source: the classification is recorded but orthogonality may hold vacuously".into());
    }
    let summary = match &outcome.classification {
        Classification::Standard { witness } => format!("Standard, lambda = {}", witness.lambda),
        Classification::QuasiStandard { witness } => format!(
            "QuasiStandard, scenario {}, dim A = {}, lambda = {}",
            witness.scenario.number(),
            witness.a.dim(),
            witness.conformal.lambda
        ),
        c => c.tag().to_string(),
    };
    Ok(Run { verdict, transcript: outcome.transcript, notes, exit: exit_for(&outcome.classification), summary })
}

fn components(which: ComponentArg) -> &'static [usize] {
    match which {
        ComponentArg::F1 => &[0],
        ComponentArg::F2 => &[1],
        ComponentArg::Both => &[0, 1],
    }
}

fn span_run(pair: &MapPair, which: ComponentArg) -> Outcome<Run> {
    let n = pair.source().dim();
    let whole: Vec<_> = (0..n).map(|k| crate::linalg::unit_vector(n, k)).collect();
    let degeneracy = spanlab::is_degenerate_pair(pair);
    let mut entries = serde_json::Map::new();
    let mut summary = Vec::new();
    for &k in components(which) {
        let f = if k == 0 { pair.f1() } else { pair.f2() };
        let name = if k == 0 { "f1" } else { "f2" };
        let report = spanlab::image_span_dim(f, &whole).map_err(data)?;
        let basis = spanlab::image_span_basis(f);
        let restricted = if basis.is_empty() {
            Value::Null
        } else {
            let s = Subspace::new(pair.target(), basis.clone()).map_err(data)?;
            json!(s.restricted_signature().to_string())
        };
        summary.push(format!("{name}: span dim {} ({})", report.span_dim, restricted.as_str().unwrap_or("empty")));
        entries.insert(
            name.into(),
            json!({
                "report": report,
                "restricted_signature": restricted,
                "basis": basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "degenerate": degeneracy[k],
            }),
        );
    }
    Ok(Run {
        verdict: Value::Object(entries),
        transcript: vec!["span computed from the coefficient matrix".into()],
        notes: vec![],
        exit: EXIT_OK,
        summary: summary.join("; "),
    })
}

fn planes_run(pair: &MapPair, l: usize, which: ComponentArg, seed: u64) -> Outcome<Run> {
    let mut entries = serde_json::Map::new();
    let mut exit = EXIT_OK;
    let mut summary = Vec::new();
    let mut transcript = Vec::new();
    for &k in components(which) {
        let f = if k == 0 { pair.f1() } else { pair.f2() };
        let name = if k == 0 { "f1" } else { "f2" };
        let value = match spanlab::check_plane_propagation(f, l, seed) {
            Ok(report) => {
                transcript.push(format!("{name}: generic {l}-planes go to {}-planes", report.l_prime));
                summary.push(format!("{name}: l' = {}, propagation {}", report.l_prime, if report.passed { "holds" } else { "fails" }));
                if !report.passed {
                    exit = EXIT_UNRESOLVED;
                }
                json!({ "tag": if report.passed { "Propagates" } else { "PropagationFails" }, "report": report })
            }
            Err(Error::HypothesisViolated { measured, bound }) => {
                transcript.push(format!("{name}: l' = {measured} exceeds 2l - 1 = {bound}"));
                summary.push(format!("{name}: hypothesis violated (l' = {measured} > {bound})"));
                exit = EXIT_UNRESOLVED;
                json!({ "tag": "HypothesisViolated", "measured": measured, "bound": bound })
            }
            Err(e) => return Err(data(e)),
        };
        entries.insert(name.into(), value);
    }
    Ok(Run {
        verdict: Value::Object(entries),
        transcript,
        notes: vec![format!("maximum over {} seeded random planes", crate::sampling::GENERIC_SAMPLES)],
        exit,
        summary: summary.join("; "),
    })
}

fn segre_check_run(input: &SegreInput, seed: u64) -> Outcome<Run> {
    let identity = segre::segre_pairing_identity(input.n).map_err(data)?;
    let conv = segre::segre_to_orthogonal(&input.f1, &input.f2, input.n, input.big_n).map_err(data)?;
    let mut run = classification_run(&conv.pair, seed)?;
    let mut transcript = vec![format!("pairing identity for n = {}: {}", input.n, if identity.holds() { "holds" } else { "fails" })];
    transcript.append(&mut run.transcript);
    if input.big_n + 2 > 2 * input.n {
        run.notes.push("N > 2n - 2: outside the range where the dichotomy is expected".into());
    }
    run.verdict = json!({
        "identity_holds": identity.holds(),
        "pair": parse::pair_to_json(&conv.pair),
        "degrees": [conv.degrees.0, conv.degrees.1],
        "classification": run.verdict,
    });
    if !identity.holds() {
        run.exit = EXIT_VERIFY_FAILED;
    }
    run.transcript = transcript;
    Ok(run)
}

fn write_pair(path: &Option<PathBuf>, pair: &MapPair) -> Outcome<()> {
    if let Some(p) = path {
        fs::write(p, parse::document_to_string(&parse::pair_to_json(pair)))
            .map_err(|e| Failure::Unreadable(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn truth_json(t: &GroundTruth, arity: usize) -> Value {
    match t {
        GroundTruth::Null => parse::classification_to_json(&Classification::Null, arity),
        GroundTruth::Standard(w) => parse::classification_to_json(&Classification::Standard { witness: w.clone() }, arity),
        GroundTruth::QuasiStandard(w) => {
            parse::classification_to_json(&Classification::QuasiStandard { witness: w.clone() }, arity)
        }
        GroundTruth::Boundary => json!({ "tag": "Boundary" }),
    }
}

fn generator_spec(cmd: &Command, seed: u64) -> Outcome<GeneratorSpec> {
    let Command::Generate { construction, source, target, phi_degree, null_pattern, .. } = cmd else {
        unreachable!("generator_spec on another command")
    };
    let construction = match construction {
        ConstructionArg::Standard => Construction::Standard,
        ConstructionArg::QuasiStandard => Construction::QuasiStandard { phi_degree: *phi_degree },
        ConstructionArg::Null => Construction::Null(match null_pattern {
            NullPatternArg::DisjointBlocks => NullPattern::DisjointBlocks,
            NullPatternArg::IntoRadical => NullPattern::IntoRadical,
            NullPatternArg::IsotropicLine => NullPattern::IsotropicLine,
        }),
        ConstructionArg::RemarkFamily => Construction::RemarkFamily,
    };
    Ok(GeneratorSpec { source: parse_signature(source)?, target: parse_signature(target)?, construction, seed })
}

fn search_region(cmd: &Command) -> Outcome<(SearchRegion, u64)> {
    let Command::Falsify { region, source, target, max_degree, budget } = cmd else {
        unreachable!("search_region on another command")
    };
    let region = match region {
        RegionArg::UnitMonomials => SearchRegion::UnitMonomials {
            source: parse_signature(source)?,
            target: parse_signature(target)?,
            max_degree: *max_degree,
        },
        RegionArg::RemarkSupport => SearchRegion::RemarkSupport,
        RegionArg::Empty => SearchRegion::Empty,
    };
    Ok((region, *budget))
}

/// Runs a command on its input bytes.
fn execute(cmd: &Command, seed: u64, input: Option<&[u8]>) -> Outcome<Run> {
    let input = || input.ok_or_else(|| Failure::Usage("command needs an input file".into()));
    match cmd {
        Command::CheckOrthogonal { .. } => {
            let pair = load_pair(input()?)?;
            let (verdict, transcript, exit) = orthogonality_verdict(&pair, seed)?;
            let summary = verdict["tag"].as_str().unwrap_or_default().to_string();
            let summary = match verdict.get("quotient") {
                Some(q) => format!("{summary}, quotient {}", q.as_str().unwrap_or_default()),
                None => summary,
            };
            Ok(Run { verdict, transcript, notes: vec![], exit, summary })
        }
        Command::Classify { .. } => classification_run(&load_pair(input()?)?, seed),
        Command::Span { component, .. } => span_run(&load_pair(input()?)?, *component),
        Command::Planes { l, component, .. } => planes_run(&load_pair(input()?)?, *l, *component, seed),
        Command::SegreCheck { .. } => segre_check_run(&load_segre(input()?)?, seed),
        Command::SegreConvert { pair_output, .. } => {
            let s = load_segre(input()?)?;
            let conv = segre::segre_to_orthogonal(&s.f1, &s.f2, s.n, s.big_n).map_err(data)?;
            write_pair(pair_output, &conv.pair)?;
            Ok(Run {
                verdict: json!({ "pair": parse::pair_to_json(&conv.pair), "degrees": [conv.degrees.0, conv.degrees.1] }),
                transcript: vec![format!("homogenized with degrees {} and {}", conv.degrees.0, conv.degrees.1)],
                notes: vec![],
                exit: EXIT_OK,
                summary: format!("P^{} -> P^{}", conv.pair.source(), conv.pair.target()),
            })
        }
        Command::Generate { pair_output, .. } => {
            let spec = generator_spec(cmd, seed)?;
            let g = workbench::generate(spec).map_err(usage)?;
            write_pair(pair_output, &g.pair)?;
            let n = g.pair.source().dim();
            Ok(Run {
                verdict: json!({ "pair": parse::pair_to_json(&g.pair), "ground_truth": truth_json(&g.truth, n) }),
                transcript: vec!["generated pair verified orthogonal".into()],
                notes: vec![],
                exit: EXIT_OK,
                summary: format!("{} pair P^{} -> P^{}", g.truth.tag(), g.pair.source(), g.pair.target()),
            })
        }
        Command::Falsify { .. } => {
            let (region, budget) = search_region(cmd)?;
            let report = workbench::falsify(&region, budget).map_err(usage)?;
            let failed = report.within_hypothesis && !report.violations.is_empty();
            let mut notes = vec!["a clean search is no counterexample within budget, not a proof".to_string()];
            if report.budget_exhausted {
                notes.push("budget exhausted before the region was covered".into());
            }
            Ok(Run {
                verdict: serde_json::to_value(&report).expect("serializable"),
                transcript: report.violations.iter().map(|v| format!("violation: {}", v.verdict)).collect(),
                notes,
                exit: if failed { EXIT_UNRESOLVED } else { EXIT_OK },
                summary: report.table(),
            })
        }
        Command::VerifyWitness { files } => verify_witness(files),
    }
}

fn certificate(cmd: &Command, seed: u64, digest: String, run: &Run) -> Certificate {
    Certificate {
        command: cmd.name().into(),
        tool_version: format!("orthopair {}", env!("CARGO_PKG_VERSION")),
        input_digest: digest,
        seed,
        parameters: serde_json::to_value(cmd).expect("serializable"),
        verdict: run.verdict.clone(),
        transcript: run.transcript.clone(),
        notes: run.notes.clone(),
        exit_status: run.exit,
    }
}

fn parameters_digest(cmd: &Command) -> String {
    digest(serde_json::to_string(cmd).expect("serializable").as_bytes())
}

/// Drops fields that legitimately differ between runs.
fn stable(v: &Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(m.iter().filter(|(k, _)| k.as_str() != "wall_time_ms").map(|(k, v)| (k.clone(), stable(v))).collect()),
        Value::Array(a) => Value::Array(a.iter().map(stable).collect()),
        other => other.clone(),
    }
}

/// Command-specific checks that re-derive the verdict from the witnesses.
fn independent_checks(cert: &Certificate, input: Option<&[u8]>, checks: &mut Vec<(String, bool)>) -> Outcome<()> {
    let malformed = |e: Error| Failure::Parse(e);
    match cert.command.as_str() {
        "check-orthogonal" => {
            let pair = load_pair(input.expect("input present"))?;
            match cert.verdict["tag"].as_str() {
                Some("Orthogonal") => {
                    let n = pair.source().dim();
                    let q = cert.verdict["quotient"].as_str().ok_or_else(|| malformed(Error::MalformedWitness("quotient".into())))?;
                    let q = parse::parse_poly(q, &parse::pairing_vars(n)).map_err(malformed)?;
                    let b = pair.source_form().map_err(data)?;
                    checks.push(("pairing polynomial equals quotient times source form".into(), &q * &b == pair.pairing_polynomial()));
                }
                Some("NotOrthogonal") => {
                    let w = parse::point_pair_from_json(&cert.verdict["witness"]).map_err(malformed)?;
                    checks.push(("witness points are orthogonal with non-orthogonal images".into(), w.verify(&pair).map_err(malformed)?));
                }
                _ => return Err(malformed(Error::MalformedWitness("unknown orthogonality tag".into()))),
            }
        }
        "classify" | "segre-check" => {
            let (pair, verdict) = if cert.command == "classify" {
                (load_pair(input.expect("input present"))?, cert.verdict.clone())
            } else {
                let s = load_segre(input.expect("input present"))?;
                let conv = segre::segre_to_orthogonal(&s.f1, &s.f2, s.n, s.big_n).map_err(data)?;
                (conv.pair, cert.verdict["classification"].clone())
            };
            let c = parse::classification_from_json(&verdict, pair.source().dim()).map_err(malformed)?;
            if !matches!(c, Classification::Unresolved { .. }) {
                let ok = classify::verify_classification(&pair, &c).map_err(malformed)?;
                checks.push((format!("{} witness re-verifies", c.tag()), ok));
            }
        }
        "generate" => {
            let pair = parse::parse_pair(&cert.verdict["pair"].to_string()).map_err(malformed)?;
            if let Some(bytes) = input {
                let given = load_pair(bytes)?;
                checks.push(("input file is the generated pair".into(), given == pair));
            }
            let truth = &cert.verdict["ground_truth"];
            checks.push(("generated pair is orthogonal".into(), pair.is_orthogonal().map_err(data)?.is_orthogonal()));
            if truth["tag"] != "Boundary" {
                let c = parse::classification_from_json(truth, pair.source().dim()).map_err(malformed)?;
                checks.push((format!("ground-truth {} witness re-verifies", c.tag()), classify::verify_classification(&pair, &c).map_err(malformed)?));
            }
        }
        "falsify" => {
            if let Some(violations) = cert.verdict["violations"].as_array() {
                for (k, v) in violations.iter().enumerate() {
                    let region = &cert.parameters;
                    let (source, target) = (
                        parse_signature(region["source"].as_str().unwrap_or_default())?,
                        parse_signature(region["target"].as_str().unwrap_or_default())?,
                    );
                    let doc = json!({ "source": source, "target": target, "f1": v["f1"], "f2": v["f2"] });
                    let pair = parse::parse_pair(&doc.to_string()).map_err(malformed)?;
                    checks.push((format!("violation {k} is orthogonal"), pair.is_orthogonal().map_err(data)?.is_orthogonal()));
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn verify_witness(files: &[PathBuf]) -> Outcome<Run> {
    let cert_path = files.last().expect("clap enforces one file");
    let cert_bytes = read_input(cert_path)?;
    let cert: Certificate = serde_json::from_slice(&cert_bytes)
        .map_err(|e| Failure::Parse(Error::Parse { position: e.column(), message: format!("not a certificate: {e}") }))?;
    let mut params = cert.parameters.clone();
    let cmd: Command = serde_json::from_value(params.take())
        .map_err(|e| Failure::Parse(Error::Parse { position: 0, message: format!("bad certificate parameters: {e}") }))?;
    let mut checks: Vec<(String, bool)> = vec![("certificate command matches parameters".into(), cmd.name() == cert.command)];

    let input_bytes = match cmd.input() {
        Some(recorded) => {
            let path = if files.len() == 2 { files[0].as_path() } else { recorded };
            let bytes = read_input(path)?;
            checks.push(("input digest matches".into(), digest(&bytes) == cert.input_digest));
            Some(bytes)
        }
        None => {
            checks.push(("parameter digest matches".into(), parameters_digest(&cmd) == cert.input_digest));
            if files.len() == 2 { Some(read_input(&files[0])?) } else { None }
        }
    };

    // Replays must not write side files.
    let replay_cmd = match cmd.clone() {
        Command::SegreConvert { input, .. } => Command::SegreConvert { input, pair_output: None },
        Command::Generate { construction, source, target, phi_degree, null_pattern, .. } => {
            Command::Generate { construction, source, target, phi_degree, null_pattern, pair_output: None }
        }
        other => other,
    };
    match execute(&replay_cmd, cert.seed, if cmd.input().is_some() { input_bytes.as_deref() } else { None }) {
        Ok(run) => {
            checks.push(("verdict reproduces".into(), stable(&run.verdict) == stable(&cert.verdict)));
            checks.push(("transcript reproduces".into(), run.transcript == cert.transcript));
            checks.push(("exit status reproduces".into(), run.exit == cert.exit_status));
        }
        Err(f) => checks.push((format!("replay: {f}"), false)),
    }
    if let Err(f) = independent_checks(&cert, input_bytes.as_deref(), &mut checks) {
        checks.push((format!("witness: {f}"), false));
    }

    let accepted = checks.iter().all(|(_, ok)| *ok);
    let transcript: Vec<String> = checks.iter().map(|(name, ok)| format!("{}: {name}", if *ok { "pass" } else { "FAIL" })).collect();
    Ok(Run {
        verdict: json!({ "tag": if accepted { "Accepted" } else { "Rejected" }, "replayed_command": cert.command, "replayed_digest": cert.input_digest }),
        summary: format!("{} certificate {}", cert.command, if accepted { "accepted" } else { "rejected" }),
        transcript,
        notes: vec![],
        exit: if accepted { EXIT_OK } else { EXIT_VERIFY_FAILED },
    })
}

fn render_text(cert: &Certificate, summary: &str) -> String {
    let mut s = format!("{}: {}\n", cert.command, summary.trim_end());
    s += &format!("seed {}  input {}\n", cert.seed, cert.input_digest);
    for line in &cert.transcript {
        s += &format!("  {line}\n");
    }
    for note in &cert.notes {
        s += &format!("note: {note}\n");
    }
    s
}

fn emit(output: &Option<PathBuf>, body: &str) -> Outcome<()> {
    match output {
        Some(path) => fs::write(path, body).map_err(|e| Failure::Unreadable(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Outcome<i32> {
    let cmd = &cli.command;
    let (run, digest_value) = match cmd.input() {
        Some(path) => {
            let bytes = read_input(path)?;
            (execute(cmd, cli.seed, Some(&bytes))?, digest(&bytes))
        }
        None => (execute(cmd, cli.seed, None)?, parameters_digest(cmd)),
    };
    let cert = certificate(cmd, cli.seed, digest_value, &run);
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&cert).expect("serializable") + "\n",
        Format::Text => render_text(&cert, &run.summary),
    };
    emit(&cli.output, &body)?;
    Ok(run.exit)
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures_parse() {
        assert_eq!(parse_signature("2,3").unwrap(), Signature::nondegenerate(2, 3));
        assert_eq!(parse_signature("1, 1, 2").unwrap(), Signature::new(1, 1, 2));
        assert!(parse_signature("1").is_err());
        assert!(parse_signature("a,b").is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["orthopair", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["orthopair", "classify", "--bogus", "x.json"]), EXIT_USAGE);
        assert_eq!(run(["orthopair", "classify", "/nonexistent/pair.json"]), EXIT_UNREADABLE);
    }

    #[test]
    fn parameters_round_trip() {
        let cmd = Command::Falsify {
            region: RegionArg::Empty,
            source: "1,2".into(),
            target: "1,2".into(),
            max_degree: 2,
            budget: 10,
        };
        let v = serde_json::to_value(&cmd).unwrap();
        assert_eq!(v["command"], "falsify");
        let back: Command = serde_json::from_value(v).unwrap();
        assert_eq!(parameters_digest(&back), parameters_digest(&cmd));
    }

    #[test]
    fn stable_drops_timing() {
        let a = json!({ "x": 1, "wall_time_ms": 5, "y": [{ "wall_time_ms": 2 }] });
        assert_eq!(stable(&a), json!({ "x": 1, "y": [{}] }));
    }
}
