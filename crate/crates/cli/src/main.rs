//! Command-line surface: every subcommand prints one deterministic JSON
//! envelope to stdout (or CSV where a table is natural) and keeps all
//! diagnostics, notices, and timing on stderr.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use cubicfeyn::error::ErrorKind;
use cubicfeyn::graph::{double_factorial, enumerate_graphs, OrientedGraph};
use cubicfeyn::lie::lie_weight;
use cubicfeyn::link::{linking_number, linking_number_exact, self_linking, writhe};
use cubicfeyn::quotient::{quotient_integral_of, RadialIntegrand};
use cubicfeyn::series::{expand, expand_connected, LedgerEntry};
use cubicfeyn::tensor::graph_weight;
use cubicfeyn::verify::{run as run_verify, PropertyReport, VerifyLevel};
use cubicfeyn::{io, Config, Error};

#[derive(Parser)]
#[command(name = "cubicfeyn", version, about = "Feynman-diagram expansions of cubic integrals, graph censuses, Lie weights, and Gauss link invariants")]
struct Cli {
    /// JSON config file; overrides the CUBICFEYN_CONFIG environment variable.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate trivalent multigraph isomorphism classes at a loop order.
    Graphs {
        /// Loop order m (graphs have 2m vertices).
        #[arg(long)]
        loops: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Automorphism order and canonical form of one graph.
    Aut {
        #[arg(long, value_name = "GRAPH.json")]
        graph: PathBuf,
    },
    /// Contraction weight of a graph in a quadratic-plus-cubic model.
    Weight {
        #[arg(long, value_name = "MODEL.json")]
        model: PathBuf,
        #[arg(long, value_name = "GRAPH.json")]
        graph: PathBuf,
    },
    /// Perturbative series coefficients with the per-class ledger.
    Series {
        #[arg(long, value_name = "MODEL.json")]
        model: PathBuf,
        /// Highest loop order to expand to.
        #[arg(long)]
        order: usize,
        /// Restrict to connected graphs (the log-series).
        #[arg(long)]
        connected: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Lie-algebra weight of a graph under its natural orientation.
    LieWeight {
        #[arg(long, value_name = "LIE.json")]
        lie: PathBuf,
        #[arg(long, value_name = "GRAPH.json")]
        graph: PathBuf,
    },
    /// Gauss linking number of two disjoint closed curves.
    Link {
        #[arg(long, value_name = "CURVE.json")]
        c1: PathBuf,
        #[arg(long, value_name = "CURVE.json")]
        c2: PathBuf,
    },
    /// Writhe of one closed curve.
    Writhe {
        #[arg(long, value_name = "CURVE.json")]
        c: PathBuf,
    },
    /// Self-linking number with the turn-normal framing.
    Selflink {
        #[arg(long, value_name = "CURVE.json")]
        c: PathBuf,
        #[arg(long)]
        offset: f64,
    },
    /// Rotation-invariant plane integral reduced to the radial quotient.
    Quotient {
        /// One of: gauss, disc, file:PATH (JSON {"samples": [[r, value], ...]}).
        #[arg(long)]
        integrand: String,
        #[arg(long)]
        rmax: f64,
    },
    /// Run the property-based self-verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        level: Level,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    subcommand: &'static str,
    /// SHA-256 of every input file, keyed by path as given.
    inputs: BTreeMap<String, String>,
    payload: T,
}

fn digest(path: &Path) -> Result<String, Error> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

struct Inputs {
    map: BTreeMap<String, String>,
}

impl Inputs {
    fn new() -> Self {
        Inputs {
            map: BTreeMap::new(),
        }
    }

    fn add(&mut self, path: &Path) -> Result<(), Error> {
        self.map
            .insert(path.display().to_string(), digest(path)?);
        Ok(())
    }
}

fn emit_json<T: Serialize>(subcommand: &'static str, inputs: Inputs, payload: T) {
    let envelope = Envelope {
        subcommand,
        inputs: inputs.map,
        payload,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&envelope).expect("serializable envelope")
    );
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn notices(lines: &[String]) {
    for line in lines {
        eprintln!("notice: {line}");
    }
}

#[derive(Serialize)]
struct GraphRow {
    matching: Vec<(usize, usize)>,
    aut_order: u64,
    multiplicity: u64,
    connected: bool,
}

#[derive(Serialize)]
struct GraphsPayload {
    loop_order: usize,
    classes: Vec<GraphRow>,
    multiplicity_sum: u64,
    total_matchings: u64,
}

#[derive(Serialize)]
struct SeriesPayload {
    max_order: usize,
    connected: bool,
    coefficients: Vec<[f64; 2]>,
    ledger: Vec<LedgerEntry>,
}

#[derive(Serialize)]
struct LinkPayload {
    value: f64,
    nearest_integer: i64,
    estimate_error: f64,
    within_tol: bool,
    crossing_oracle: i64,
}

#[derive(Serialize)]
struct VerifyPayload {
    level: &'static str,
    properties: Vec<PropertyReport>,
    all_passed: bool,
}

fn matching_text(matching: &[(usize, usize)]) -> String {
    matching
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_command(cli: Cli) -> Result<u8, Error> {
    let cfg = Config::resolve(cli.config.as_deref())?;
    match cli.command {
        Command::Graphs { loops, format } => {
            let table = enumerate_graphs(loops, cfg.max_loop_order)?;
            let payload = GraphsPayload {
                loop_order: table.loop_order,
                classes: table
                    .classes
                    .iter()
                    .map(|class| GraphRow {
                        matching: class.graph.matching().to_vec(),
                        aut_order: class.aut_order,
                        multiplicity: class.multiplicity,
                        connected: class.connected,
                    })
                    .collect(),
                multiplicity_sum: table.multiplicity_sum(),
                total_matchings: double_factorial(6 * loops as u64 - 1),
            };
            match format {
                Format::Json => emit_json("graphs", Inputs::new(), payload),
                Format::Csv => {
                    println!("matching,aut_order,multiplicity,connected");
                    for row in &payload.classes {
                        println!(
                            "{},{},{},{}",
                            csv_field(&matching_text(&row.matching)),
                            row.aut_order,
                            row.multiplicity,
                            row.connected
                        );
                    }
                }
            }
        }
        Command::Aut { graph } => {
            let mut inputs = Inputs::new();
            inputs.add(&graph)?;
            let loaded = io::load_graph(&graph)?;
            notices(&loaded.notices);
            let g = loaded.value;
            #[derive(Serialize)]
            struct AutPayload {
                vertices: usize,
                loop_order: usize,
                connected: bool,
                aut_order: u64,
                canonical_matching: Vec<(usize, usize)>,
            }
            let payload = AutPayload {
                vertices: g.num_vertices(),
                loop_order: g.loop_order(),
                connected: g.is_connected(),
                aut_order: g.automorphism_order(),
                canonical_matching: g.canonical_form().matching().to_vec(),
            };
            emit_json("aut", inputs, payload);
        }
        Command::Weight { model, graph } => {
            let mut inputs = Inputs::new();
            inputs.add(&model)?;
            inputs.add(&graph)?;
            let loaded_model = io::load_model(&model, &cfg)?;
            notices(&loaded_model.notices);
            let loaded_graph = io::load_graph(&graph)?;
            let weight = graph_weight(&loaded_model.value, &loaded_graph.value)?;
            #[derive(Serialize)]
            struct WeightPayload {
                weight: f64,
            }
            emit_json("weight", inputs, WeightPayload { weight });
        }
        Command::Series {
            model,
            order,
            connected,
            format,
        } => {
            let mut inputs = Inputs::new();
            inputs.add(&model)?;
            let loaded = io::load_model(&model, &cfg)?;
            notices(&loaded.notices);
            let (coefficients, ledger, max_order) = if connected {
                let s = expand_connected(&loaded.value, order, &cfg)?;
                (s.coefficients, s.ledger, s.max_order)
            } else {
                let s = expand(&loaded.value, order, &cfg)?;
                (s.coefficients, s.ledger, s.max_order)
            };
            let payload = SeriesPayload {
                max_order,
                connected,
                coefficients: coefficients.iter().map(|c| [c.re, c.im]).collect(),
                ledger,
            };
            match format {
                Format::Json => emit_json("series", inputs, payload),
                Format::Csv => {
                    println!("order,re,im");
                    for (order, c) in payload.coefficients.iter().enumerate() {
                        println!("{order},{},{}", c[0], c[1]);
                    }
                }
            }
        }
        Command::LieWeight { lie, graph } => {
            let mut inputs = Inputs::new();
            inputs.add(&lie)?;
            inputs.add(&graph)?;
            let loaded_lie = io::load_lie(&lie)?;
            notices(&loaded_lie.notices);
            let loaded_graph = io::load_graph(&graph)?;
            let oriented = OrientedGraph::with_identity(loaded_graph.value);
            let weight = lie_weight(&loaded_lie.value, &oriented)?;
            #[derive(Serialize)]
            struct LiePayload {
                weight: f64,
                orientation: &'static str,
            }
            emit_json(
                "lie-weight",
                inputs,
                LiePayload {
                    weight,
                    orientation: "identity",
                },
            );
        }
        Command::Link { c1, c2 } => {
            let mut inputs = Inputs::new();
            inputs.add(&c1)?;
            inputs.add(&c2)?;
            let curve1 = io::load_curve(&c1)?.value;
            let curve2 = io::load_curve(&c2)?.value;
            let result = linking_number(&curve1, &curve2, cfg.link_tol)?;
            let oracle = linking_number_exact(&curve1, &curve2)?;
            emit_json(
                "link",
                inputs,
                LinkPayload {
                    value: result.value,
                    nearest_integer: result.nearest_integer,
                    estimate_error: result.estimate_error,
                    within_tol: result.within_tol,
                    crossing_oracle: oracle,
                },
            );
        }
        Command::Writhe { c } => {
            let mut inputs = Inputs::new();
            inputs.add(&c)?;
            let curve = io::load_curve(&c)?.value;
            let value = writhe(&curve)?;
            #[derive(Serialize)]
            struct WrithePayload {
                value: f64,
            }
            emit_json("writhe", inputs, WrithePayload { value });
        }
        Command::Selflink { c, offset } => {
            let mut inputs = Inputs::new();
            inputs.add(&c)?;
            let curve = io::load_curve(&c)?.value;
            let result = self_linking(&curve, offset, cfg.link_tol)?;
            #[derive(Serialize)]
            struct SelflinkPayload {
                offset: f64,
                value: f64,
                nearest_integer: i64,
                estimate_error: f64,
                within_tol: bool,
            }
            emit_json(
                "selflink",
                inputs,
                SelflinkPayload {
                    offset,
                    value: result.value,
                    nearest_integer: result.nearest_integer,
                    estimate_error: result.estimate_error,
                    within_tol: result.within_tol,
                },
            );
        }
        Command::Quotient { integrand, rmax } => {
            let mut inputs = Inputs::new();
            let profile = if integrand == "gauss" {
                RadialIntegrand::gauss(1.0)?
            } else if integrand == "disc" {
                RadialIntegrand::disc(1.0)?
            } else if let Some(path) = integrand.strip_prefix("file:") {
                let path = Path::new(path);
                inputs.add(path)?;
                #[derive(serde::Deserialize)]
                #[serde(deny_unknown_fields)]
                struct SamplesFile {
                    samples: Vec<(f64, f64)>,
                }
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
                let file: SamplesFile =
                    serde_json::from_str(&text).map_err(|source| Error::Parse {
                        path: path.to_path_buf(),
                        source,
                    })?;
                RadialIntegrand::from_samples(file.samples)?
            } else {
                return Err(Error::ParameterDomain(format!(
                    "unknown integrand '{integrand}'; expected gauss, disc, or file:PATH"
                )));
            };
            let value = quotient_integral_of(&profile, rmax)?;
            #[derive(Serialize)]
            struct QuotientPayload {
                integrand: String,
                r_max: f64,
                value: f64,
            }
            emit_json(
                "quotient",
                inputs,
                QuotientPayload {
                    integrand,
                    r_max: rmax,
                    value,
                },
            );
        }
        Command::Verify { level, format } => {
            let (verify_level, name) = match level {
                Level::Quick => (VerifyLevel::Quick, "quick"),
                Level::Full => (VerifyLevel::Full, "full"),
            };
            let properties = run_verify(verify_level, &cfg);
            let all_passed = properties.iter().all(|p| p.passed);
            match format {
                Format::Json => emit_json(
                    "verify",
                    Inputs::new(),
                    VerifyPayload {
                        level: name,
                        properties,
                        all_passed,
                    },
                ),
                Format::Csv => {
                    println!("name,passed,details");
                    for p in &properties {
                        println!("{},{},{}", p.name, p.passed, csv_field(&p.details));
                    }
                }
            }
            if !all_passed {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Validation => 2,
        ErrorKind::NumericDomain => 3,
        ErrorKind::Bounds => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run_command(cli) {
        Ok(code) => {
            eprintln!("elapsed: {:.3?}", started.elapsed());
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            eprintln!("elapsed: {:.3?}", started.elapsed());
            ExitCode::from(exit_code(err.kind()))
        }
    }
}
