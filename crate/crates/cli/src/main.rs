//! `ua`: command-line frontend for the unary-algebra toolkit.
//!
//! Every subcommand reads algebras (and fields of sets, subpowers) in the
//! text formats of the core library, computes one pipeline, and prints a
//! deterministic text or JSON report. Exit codes: 0 success, 1 a check
//! computed false (non-isomorphic inputs, a failed verification, an
//! unreachable tuple, not subdirectly irreducible), 2 usage or
//! parse or domain errors, 3 capacity limits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use ua_core::casebook::{
    boolean_power, boolean_power_profile, transposition_distance, tuple_cycle_length,
};
use ua_core::digraph::{gamma, outer_sections};
use ua_core::format::{parse_algebra, parse_field_of_sets, write_subpower};
use ua_core::iso::{are_isomorphic, canonical_form};
use ua_core::powers::{enumerate_monogenic_up_to_iso, Tuple};
use ua_core::witness::{build_witness, verify_claims, VerifyOptions, WitnessConfig};
use ua_core::{Error, Limits, Partition, TypeVerdict, UnaryAlgebra};

const SCHEMA_VERSION: u64 = 1;

#[derive(Parser)]
#[command(
    name = "ua",
    version,
    about = "Classify finite unary algebras and explore their subdirect powers"
)]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Cap on enumerated elements (subpower closures, boolean powers).
    #[arg(long, global = true, value_name = "N")]
    cap_elements: Option<usize>,

    /// Cap on carrier sizes for monoid and congruence computations.
    #[arg(long, global = true, value_name = "N")]
    cap_carrier: Option<usize>,

    /// Upper bound on internal parallelism. The current implementation is
    /// single-threaded, so any positive value behaves identically; results
    /// never depend on it.
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the algebra is of countable or uncountable type.
    Classify { algebra: PathBuf },
    /// Generate the transformation monoid with shortest words.
    Monoid { algebra: PathBuf },
    /// Connected components, strong components, tops and bottoms.
    Components {
        algebra: PathBuf,
        /// Print the labeled digraph in DOT format instead.
        #[arg(long)]
        dot: bool,
    },
    /// Outer sections of a connected algebra with a bottom component.
    OuterSections { algebra: PathBuf },
    /// The full congruence lattice.
    Congruences { algebra: PathBuf },
    /// Subdirect irreducibility (exit 1 when reducible).
    Si { algebra: PathBuf },
    /// Count monogenic subpowers of A^N up to isomorphism.
    Enumerate {
        algebra: PathBuf,
        /// The exponent N.
        #[arg(long)]
        exponent: usize,
    },
    /// Isomorphism test between two algebras (exit 1 when they differ).
    Iso { left: PathBuf, right: PathBuf },
    /// Canonical code of an algebra (equal codes mean isomorphic).
    Canon { algebra: PathBuf },
    /// Build witness subdirect powers for a set of primes and optionally
    /// verify the facts behind their pairwise non-isomorphism.
    Witness {
        algebra: PathBuf,
        /// Comma-separated primes, e.g. `7,11,13`.
        #[arg(long)]
        primes: String,
        /// Re-check every claim and print one line per check (exit 1 on
        /// any failure).
        #[arg(long)]
        verify: bool,
        /// Verify non-isomorphism only for prime subsets up to this size.
        #[arg(long, value_name = "K")]
        subsets_max: Option<usize>,
        /// Node budget per isomorphism search before falling back to the
        /// invariant argument.
        #[arg(long, default_value_t = 1_000_000, value_name = "NODES")]
        search_budget: u64,
    },
    /// The Boolean power of an algebra by a field of sets.
    BooleanPower {
        algebra: PathBuf,
        /// Field-of-sets file (`ground <m>` / `members <masks>`).
        #[arg(long)]
        field: PathBuf,
        /// Print predecessor statistics (chain algebra only).
        #[arg(long)]
        profile: bool,
    },
    /// Least common multiple of per-position cycle lengths.
    CycleLcm {
        #[arg(required = true)]
        lengths: Vec<u64>,
    },
    /// Fewest value transpositions turning one tuple into another
    /// (exit 1 when unreachable).
    TranspositionDistance {
        /// Start tuple literal, e.g. `(0,1)`.
        from: String,
        /// Target tuple literal.
        to: String,
        /// Carrier size the transpositions act on.
        #[arg(long)]
        carrier: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Monoid { .. } => "monoid",
            Command::Components { .. } => "components",
            Command::OuterSections { .. } => "outer-sections",
            Command::Congruences { .. } => "congruences",
            Command::Si { .. } => "si",
            Command::Enumerate { .. } => "enumerate",
            Command::Iso { .. } => "iso",
            Command::Canon { .. } => "canon",
            Command::Witness { .. } => "witness",
            Command::BooleanPower { .. } => "boolean-power",
            Command::CycleLcm { .. } => "cycle-lcm",
            Command::TranspositionDistance { .. } => "transposition-distance",
        }
    }
}

/// What a subcommand produced: parallel text and JSON payloads plus the
/// process exit code.
struct Outcome {
    text: String,
    json: Value,
    check_failed: bool,
}

impl Outcome {
    fn pass(text: String, json: Value) -> Self {
        Outcome {
            text,
            json,
            check_failed: false,
        }
    }

    fn fail(text: String, json: Value) -> Self {
        Outcome {
            text,
            json,
            check_failed: true,
        }
    }
}

enum CliError {
    Core(Error),
    Io { path: PathBuf, message: String },
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        CliError::Core(error)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Capacity { .. }) => 3,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(error) => error.to_string(),
            CliError::Io { path, message } => {
                format!("cannot read {}: {message}", path.display())
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|error| CliError::Io {
        path: path.to_path_buf(),
        message: error.to_string(),
    })
}

fn load_algebra(path: &Path) -> Result<UnaryAlgebra, CliError> {
    Ok(parse_algebra(&read_file(path)?)?)
}

fn blocks_text(partition: &Partition) -> String {
    let inner: Vec<String> = partition
        .blocks()
        .iter()
        .map(|block| {
            let members: Vec<String> = block.iter().map(usize::to_string).collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    format!("{{{}}}", inner.join(","))
}

fn blocks_json(partition: &Partition) -> Value {
    json!(partition.blocks())
}

fn algebra_label(algebra: &UnaryAlgebra) -> &str {
    algebra.name().unwrap_or("(unnamed)")
}

fn parse_primes(raw: &str) -> Result<Vec<usize>, CliError> {
    raw.split(',')
        .map(|part| {
            part.trim().parse::<usize>().map_err(|_| {
                CliError::Core(Error::InvalidWitness(format!(
                    "`{part}` is not a prime number list entry"
                )))
            })
        })
        .collect()
}

fn parse_tuple(raw: &str) -> Result<Tuple, CliError> {
    Ok(raw.parse::<Tuple>()?)
}

fn run(cli: &Cli, limits: &Limits) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Classify { algebra } => {
            let algebra = load_algebra(algebra)?;
            let verdict = algebra.classify_type();
            let (text, json) = match &verdict {
                TypeVerdict::Uncountable { witness } => (
                    format!("Uncountable (witness op: {witness})"),
                    json!({"verdict": "uncountable", "witness": witness}),
                ),
                TypeVerdict::Countable {
                    bijections,
                    constants,
                } => (
                    format!(
                        "Countable (bijections: [{}]; constants: [{}])",
                        bijections.join(", "),
                        constants.join(", ")
                    ),
                    json!({
                        "verdict": "countable",
                        "bijections": bijections,
                        "constants": constants,
                    }),
                ),
            };
            Ok(Outcome::pass(text, json))
        }

        Command::Monoid { algebra } => {
            let algebra = load_algebra(algebra)?;
            let monoid = algebra.generate_monoid(limits)?;
            let mut text = format!(
                "monoid of {}: {} element(s)\n",
                algebra_label(&algebra),
                monoid.len()
            );
            let mut elements = Vec::new();
            for element in monoid.elements() {
                let word = monoid.word_names(element);
                writeln!(text, "{word}: {:?}", element.table()).expect("string write");
                elements.push(json!({"word": word, "table": element.table()}));
            }
            Ok(Outcome::pass(
                text,
                json!({"size": monoid.len(), "elements": elements}),
            ))
        }

        Command::Components { algebra, dot } => {
            let algebra = load_algebra(algebra)?;
            let digraph = gamma(&algebra);
            if *dot {
                let dot_text = digraph.to_dot();
                let json = json!({"dot": dot_text});
                return Ok(Outcome::pass(dot_text, json));
            }
            let analysis = digraph.analyze();
            let mut text = format!(
                "{} vertex(es), {} connected component(s), {} strong component(s)\n",
                digraph.vertex_count(),
                analysis.connected_components().num_classes(),
                analysis.sccs().num_classes()
            );
            writeln!(
                text,
                "connected components: {}",
                blocks_text(analysis.connected_components())
            )
            .expect("string write");
            writeln!(text, "strong components: {}", blocks_text(analysis.sccs()))
                .expect("string write");
            writeln!(text, "top strong components: {:?}", analysis.top_sccs())
                .expect("string write");
            let bottoms: Vec<String> = analysis
                .bottom_scc_per_component()
                .iter()
                .map(|b| match b {
                    Some(scc) => scc.to_string(),
                    None => "-".to_string(),
                })
                .collect();
            writeln!(text, "bottom per component: [{}]", bottoms.join(", "))
                .expect("string write");
            Ok(Outcome::pass(
                text,
                json!({
                    "vertex_count": digraph.vertex_count(),
                    "connected_components": blocks_json(analysis.connected_components()),
                    "strong_components": blocks_json(analysis.sccs()),
                    "top_sccs": analysis.top_sccs(),
                    "bottom_scc_per_component": analysis.bottom_scc_per_component(),
                }),
            ))
        }

        Command::OuterSections { algebra } => {
            let algebra = load_algebra(algebra)?;
            let sections = outer_sections(&algebra)?;
            let mut text = format!("{} outer section(s)\n", sections.len());
            let mut payload = Vec::new();
            for (index, section) in sections.iter().enumerate() {
                let vertices: Vec<String> =
                    section.vertices().iter().map(usize::to_string).collect();
                let edges: Vec<String> = section
                    .edges()
                    .iter()
                    .map(|&(u, v, _)| format!("{u}->{v}"))
                    .collect();
                writeln!(
                    text,
                    "section {index}: vertices [{}], edges [{}]",
                    vertices.join(", "),
                    edges.join(", ")
                )
                .expect("string write");
                payload.push(json!({
                    "vertices": section.vertices(),
                    "edges": section.edges(),
                }));
            }
            Ok(Outcome::pass(text, json!({"sections": payload})))
        }

        Command::Congruences { algebra } => {
            let algebra = load_algebra(algebra)?;
            let lattice = algebra.congruence_lattice(limits)?;
            let mut text = format!("{} congruence(s)\n", lattice.len());
            let mut payload = Vec::new();
            for congruence in &lattice {
                writeln!(text, "{}", blocks_text(congruence.partition())).expect("string write");
                payload.push(blocks_json(congruence.partition()));
            }
            Ok(Outcome::pass(
                text,
                json!({"count": lattice.len(), "congruences": payload}),
            ))
        }

        Command::Si { algebra } => {
            let algebra = load_algebra(algebra)?;
            let verdict = algebra.is_subdirectly_irreducible(limits)?;
            let text = format!("subdirectly irreducible: {verdict}");
            let json = json!({"subdirectly_irreducible": verdict});
            if verdict {
                Ok(Outcome::pass(text, json))
            } else {
                Ok(Outcome::fail(text, json))
            }
        }

        Command::Enumerate { algebra, exponent } => {
            let algebra = load_algebra(algebra)?;
            let codes = enumerate_monogenic_up_to_iso(&algebra, *exponent, limits)?;
            Ok(Outcome::pass(
                format!(
                    "monogenic subpowers at exponent {exponent}, up to isomorphism: {}",
                    codes.len()
                ),
                json!({"exponent": exponent, "count": codes.len()}),
            ))
        }

        Command::Iso { left, right } => {
            let left = load_algebra(left)?;
            let right = load_algebra(right)?;
            match are_isomorphic(&left, &right)? {
                Some(morphism) => {
                    let map: Vec<String> = morphism
                        .iter()
                        .enumerate()
                        .map(|(a, b)| format!("{a}->{b}"))
                        .collect();
                    Ok(Outcome::pass(
                        format!("isomorphic: [{}]", map.join(", ")),
                        json!({"isomorphic": true, "morphism": morphism}),
                    ))
                }
                None => Ok(Outcome::fail(
                    "not isomorphic".to_string(),
                    json!({"isomorphic": false, "morphism": Value::Null}),
                )),
            }
        }

        Command::Canon { algebra } => {
            let algebra = load_algebra(algebra)?;
            let code = canonical_form(&algebra);
            Ok(Outcome::pass(
                code.to_hex(),
                json!({"code": code.to_hex()}),
            ))
        }

        Command::Witness {
            algebra,
            primes,
            verify,
            subsets_max,
            search_budget,
        } => {
            let algebra = load_algebra(algebra)?;
            let primes = parse_primes(primes)?;
            let config = WitnessConfig::new(algebra, &primes, limits)?;
            if !verify {
                let names = config.algebra().sorted_op_names();
                let word: Vec<&str> = config
                    .f_min()
                    .word()
                    .iter()
                    .map(|&index| names[index])
                    .collect();
                let word = if word.is_empty() {
                    "id".to_string()
                } else {
                    word.join(".")
                };
                let mut text = format!(
                    "witness family over primes {:?}: N = {}\n",
                    config.primes(),
                    config.n_positions()
                );
                writeln!(
                    text,
                    "f_min = {:?} (word {word}), merged pair {:?}, carrier roles {:?}",
                    config.f_min().table(),
                    config.merged_pair(),
                    config.reorder()
                )
                .expect("string write");
                let diagonal = build_witness(&config, &[], limits)?;
                writeln!(text, "diagonal size {}", diagonal.len()).expect("string write");
                for &p in config.primes() {
                    let block = ua_core::witness::build_block(&config, p, limits)?;
                    writeln!(text, "block T_{p}: {} element(s)", block.len())
                        .expect("string write");
                }
                let json = json!({
                    "primes": config.primes(),
                    "n_positions": config.n_positions(),
                    "f_min_table": config.f_min().table(),
                    "merged_pair": [config.merged_pair().0, config.merged_pair().1],
                    "reorder": config.reorder(),
                });
                return Ok(Outcome::pass(text, json));
            }
            let options = VerifyOptions {
                subsets_max: *subsets_max,
                search_budget: *search_budget,
            };
            let report = verify_claims(&config, &options, limits)?;
            let text = report.to_string();
            let json = json!({"report": report});
            if report.all_pass {
                Ok(Outcome::pass(text, json))
            } else {
                Ok(Outcome::fail(text, json))
            }
        }

        Command::BooleanPower {
            algebra,
            field,
            profile,
        } => {
            let algebra = load_algebra(algebra)?;
            let field = parse_field_of_sets(&read_file(field)?)?;
            if *profile {
                let profile = boolean_power_profile(&algebra, &field, limits)?;
                let text = format!(
                    "boolean power: {} element(s); sink {} with {} predecessor(s); predecessor counts {:?}",
                    profile.size, profile.sink, profile.sink_predecessors, profile.predecessor_counts
                );
                return Ok(Outcome::pass(text, json!({"profile": profile})));
            }
            let power = boolean_power(&algebra, &field, limits)?;
            let text = write_subpower(&power);
            let elements: Vec<&[usize]> =
                power.elements().iter().map(|t| t.entries()).collect();
            Ok(Outcome::pass(
                text,
                json!({
                    "n_positions": power.n_positions(),
                    "size": power.len(),
                    "subdirect": power.is_subdirect(),
                    "elements": elements,
                }),
            ))
        }

        Command::CycleLcm { lengths } => {
            let lcm = tuple_cycle_length(lengths)?;
            Ok(Outcome::pass(
                format!("cycle length: {lcm}"),
                json!({"lengths": lengths, "lcm": lcm}),
            ))
        }

        Command::TranspositionDistance { from, to, carrier } => {
            let from = parse_tuple(from)?;
            let to = parse_tuple(to)?;
            match transposition_distance(*carrier, &from, &to)? {
                Some(distance) => Ok(Outcome::pass(
                    format!("distance: {distance}"),
                    json!({"reachable": true, "distance": distance}),
                )),
                None => Ok(Outcome::fail(
                    "unreachable: the tuples have different formats".to_string(),
                    json!({"reachable": false, "distance": Value::Null}),
                )),
            }
        }
    }
}

/// Writes to stdout, treating a closed pipe as an orderly shutdown with the
/// conventional 128 + SIGPIPE status instead of a panic.
fn write_stdout(text: &str) {
    use std::io::Write;

    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
        .is_err()
    {
        std::process::exit(141);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if cli.threads == Some(0) {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(2);
    }
    let mut limits = Limits::default();
    if let Some(cap) = cli.cap_elements {
        limits.max_elements = cap;
    }
    if let Some(cap) = cli.cap_carrier {
        limits.max_monoid_carrier = cap;
        limits.max_congruence_carrier = cap;
    }

    let command_name = cli.command.name();
    match run(&cli, &limits) {
        Ok(outcome) => {
            if cli.json {
                let document = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": command_name,
                    "ok": !outcome.check_failed,
                    "payload": outcome.json,
                });
                write_stdout(&format!("{document}\n"));
            } else {
                let mut text = outcome.text;
                if !text.ends_with('\n') {
                    text.push('\n');
                }
                write_stdout(&text);
            }
            if outcome.check_failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(error) => {
            if cli.json {
                let document = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": command_name,
                    "ok": false,
                    "error": error.message(),
                });
                write_stdout(&format!("{document}\n"));
            } else {
                eprintln!("error: {}", error.message());
            }
            ExitCode::from(error.exit_code())
        }
    }
}
