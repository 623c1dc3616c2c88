use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ramsey_forge::bounds::{deletion_trials, ramsey_upper_estimate, turan_bound};
use ramsey_forge::certify::{
    check_center_uniqueness, find_edge_h3, find_edge_h4, independence_number, DEFAULT_ALPHA_BUDGET,
};
use ramsey_forge::error::Error;
use ramsey_forge::grid::{enumerate_edges, write_edge_list};
use ramsey_forge::manifest::ManifestBuilder;
use ramsey_forge::search::{sample_indices, search_center_property, OrderFamily};
use ramsey_forge::trees::scan_tree_freeness;
use ramsey_forge::{ConstructionSpec, GridPoint};

pub const CERTIFICATE_VERSION: u32 = 1;

const EXIT_HOLDS: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "ramsey-forge",
    version,
    about = "Grid hypergraph constructions for tight-tree Ramsey lower bounds"
)]
struct Cli {
    /// Thread cap for parallel phases (overrides RAMSEY_FORGE_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write a reproducibility manifest (seeds, versions, output digests)
    /// to this path. Never mixed into the primary outputs.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the edges of a construction and write an edge-list file.
    Construct {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        n: usize,
        /// Destination for the edge list (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a finite structural property and emit a JSON certificate.
    Certify {
        #[command(subcommand)]
        property: CertifyCommand,
    },
    /// Sweep the signed-lex order family for the center property.
    Search {
        /// Uniformity of the candidate constructions.
        #[arg(long)]
        r: usize,
        /// Largest grid side tested per tuple.
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, value_parser = ["full", "sampled"], default_value = "full")]
        mode: String,
        #[arg(long, default_value_t = 10_000)]
        sample_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSONL destination for per-tuple records.
        #[arg(long)]
        out: PathBuf,
        /// Checkpoint file; a matching prior run resumes from it.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Test only one representative per coordinate-relabeling orbit and
        /// replicate its result across the orbit.
        #[arg(long)]
        symmetry: bool,
    },
    /// Turán bound and deletion-method estimates.
    Bounds {
        #[command(subcommand)]
        kind: BoundsCommand,
    },
    /// Enumerate tight trees up to a size and report which embed.
    TreeScan {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        t_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CertifyCommand {
    /// Every edge has a unique center and codegree-adjacent edges share it.
    Centers(SpecN),
    /// A large vertex set contains an edge (guarantee solvers for the
    /// built-in 3- and 4-uniform constructions).
    EdgeInSet {
        #[command(flatten)]
        base: SpecN,
        /// File with one grid point per line, e.g. "(1,2)".
        #[arg(long)]
        points: PathBuf,
    },
    /// Exact independence number by branch and bound.
    Alpha {
        #[command(flatten)]
        base: SpecN,
        #[arg(long, default_value_t = DEFAULT_ALPHA_BUDGET)]
        budget: u64,
    },
    /// No non-trivial tight tree with at most t-max edges embeds.
    TreeFreeness {
        #[command(flatten)]
        base: SpecN,
        #[arg(long, default_value_t = 4)]
        t_max: usize,
    },
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Vertex bound N and sampling probability p for the deletion method.
    Estimate {
        /// Edge count of the forbidden tight tree.
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        /// Target independent-set size.
        #[arg(long)]
        n: usize,
    },
    /// The Turán-type bound (k-1) * C(n, r-1).
    Turan {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
    },
    /// Empirical random-deletion trials against the expectation bound.
    DeleteMethod {
        #[command(flatten)]
        base: SpecN,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct SpecN {
    /// Construction id: h3, h4, sym4, or general:<r>:<orders>.
    #[arg(long)]
    spec: String,
    /// Grid side length.
    #[arg(long)]
    n: usize,
    /// Destination for the JSON certificate (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    configure_threads(cli.threads);
    let mut mb = ManifestBuilder::new(argv);
    let code = match run(cli.command, &mut mb) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INCONCLUSIVE);
        }
    };
    if let Some(path) = cli.manifest {
        if let Err(e) = mb.finish().write(&path) {
            eprintln!("error: cannot write manifest: {e}");
            return ExitCode::from(EXIT_INCONCLUSIVE);
        }
    }
    ExitCode::from(code)
}

fn configure_threads(cli_threads: Option<usize>) {
    #[cfg(feature = "parallel")]
    {
        let threads = cli_threads.or_else(|| {
            std::env::var("RAMSEY_FORGE_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        });
        if let Some(t) = threads.filter(|&t| t > 0) {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = cli_threads;
}

/// Writes `body` to `out` or stdout and records its digest in the manifest.
fn emit(body: &str, out: Option<&Path>, mb: &mut ManifestBuilder) -> ramsey_forge::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, body)?;
            mb.output(&path.display().to_string(), body.as_bytes());
        }
        None => {
            print!("{body}");
            std::io::stdout().flush()?;
            mb.output("stdout", body.as_bytes());
        }
    }
    Ok(())
}

fn certificate_body(
    property: &str,
    spec: &str,
    n: usize,
    status: &str,
    witness: serde_json::Value,
    extra: &[(&str, serde_json::Value)],
) -> String {
    let mut v = json!({
        "version": CERTIFICATE_VERSION,
        "property": property,
        "spec": spec,
        "n": n,
        "status": status,
        "witness": witness,
    });
    for (key, val) in extra {
        v[*key] = val.clone();
    }
    let mut s = serde_json::to_string_pretty(&v).expect("certificate serializes");
    s.push('\n');
    s
}

fn run(command: Command, mb: &mut ManifestBuilder) -> ramsey_forge::Result<u8> {
    match command {
        Command::Construct { spec, n, out } => {
            let spec = ConstructionSpec::parse_id(&spec)?;
            mb.spec(&spec.id());
            mb.n(n);
            let edges = enumerate_edges(&spec, n);
            let mut buf = Vec::new();
            write_edge_list(&edges, &mut buf)?;
            let body = String::from_utf8(buf).expect("edge list is ASCII");
            match out {
                Some(path) => {
                    fs::write(&path, &body)?;
                    mb.output(&path.display().to_string(), body.as_bytes());
                    println!("{} edges", edges.len());
                    mb.output("stdout", format!("{} edges\n", edges.len()).as_bytes());
                }
                None => emit(&body, None, mb)?,
            }
            Ok(EXIT_HOLDS)
        }
        Command::Certify { property } => certify(property, mb),
        Command::Search {
            r,
            n_max,
            mode,
            sample_size,
            seed,
            out,
            checkpoint,
            symmetry,
        } => {
            let family = OrderFamily::new(r)?;
            let indices: Vec<u64> = match mode.as_str() {
                "full" => (0..family.tuple_count()).collect(),
                "sampled" => {
                    mb.seed(seed);
                    sample_indices(family.tuple_count(), sample_size, seed)
                }
                _ => unreachable!("clap restricts the values"),
            };
            let resuming = checkpoint.as_deref().is_some_and(Path::exists);
            let mut file = fs::OpenOptions::new()
                .create(true)
                .append(resuming)
                .truncate(!resuming)
                .write(true)
                .open(&out)?;
            let summary = search_center_property(
                &family,
                &indices,
                n_max,
                &mut file,
                checkpoint.as_deref(),
                symmetry,
            )?;
            file.flush()?;
            drop(file);
            mb.output(&out.display().to_string(), &fs::read(&out)?);
            let mut body = serde_json::to_string_pretty(&summary)?;
            body.push('\n');
            emit(&body, None, mb)?;
            Ok(if summary.inconclusive == 0 && summary.fails > 0 {
                EXIT_VIOLATION
            } else if summary.fails == 0 {
                EXIT_HOLDS
            } else {
                EXIT_INCONCLUSIVE
            })
        }
        Command::Bounds { kind } => bounds(kind, mb),
        Command::TreeScan { spec, n, t_max, out } => {
            let spec = ConstructionSpec::parse_id(&spec)?;
            mb.spec(&spec.id());
            mb.n(n);
            let report = scan_tree_freeness(&spec, n, t_max)?;
            let free = report.tree_free();
            let mut body = serde_json::to_string_pretty(&report)?;
            body.push('\n');
            emit(&body, out.as_deref(), mb)?;
            Ok(if free { EXIT_HOLDS } else { EXIT_VIOLATION })
        }
    }
}

fn certify(property: CertifyCommand, mb: &mut ManifestBuilder) -> ramsey_forge::Result<u8> {
    match property {
        CertifyCommand::Centers(base) => {
            let spec = ConstructionSpec::parse_id(&base.spec)?;
            mb.spec(&spec.id());
            mb.n(base.n);
            let violation = check_center_uniqueness(&spec, base.n);
            let (status, witness, code) = match &violation {
                None => ("holds", serde_json::Value::Null, EXIT_HOLDS),
                Some(cert) => ("violated", serde_json::to_value(cert)?, EXIT_VIOLATION),
            };
            let body = certificate_body(
                "center-uniqueness",
                &spec.id(),
                base.n,
                status,
                witness,
                &[],
            );
            emit(&body, base.out.as_deref(), mb)?;
            Ok(code)
        }
        CertifyCommand::EdgeInSet { base, points } => {
            let spec = ConstructionSpec::parse_id(&base.spec)?;
            mb.spec(&spec.id());
            mb.n(base.n);
            let text = fs::read_to_string(&points)?;
            let pts = parse_points(&text)?;
            let found = match spec.id().as_str() {
                "h3" => find_edge_h3(&pts, base.n),
                "h4" => find_edge_h4(&pts, base.n),
                other => {
                    return Err(Error::Parameter(format!(
                        "edge-in-set guarantees exist only for h3 and h4, not {other}"
                    )))
                }
            };
            match found {
                Ok(edge) => {
                    let body = certificate_body(
                        "edge-in-large-set",
                        &spec.id(),
                        base.n,
                        "holds",
                        json!({ "edges": [edge.to_string()] }),
                        &[("set_size", json!(pts.len()))],
                    );
                    emit(&body, base.out.as_deref(), mb)?;
                    Ok(EXIT_HOLDS)
                }
                Err(Error::GuaranteeNotApplicable { got, required }) => {
                    let body = certificate_body(
                        "edge-in-large-set",
                        &spec.id(),
                        base.n,
                        "inconclusive",
                        serde_json::Value::Null,
                        &[("set_size", json!(got)), ("required", json!(required))],
                    );
                    emit(&body, base.out.as_deref(), mb)?;
                    Ok(EXIT_INCONCLUSIVE)
                }
                Err(e) => Err(e),
            }
        }
        CertifyCommand::Alpha { base, budget } => {
            let spec = ConstructionSpec::parse_id(&base.spec)?;
            mb.spec(&spec.id());
            mb.n(base.n);
            let result = independence_number(&spec, base.n, budget)?;
            let status = if result.exact { "exact" } else { "lower-bound" };
            let set: Vec<String> = result
                .witness
                .vertices
                .iter()
                .map(|p| p.to_string())
                .collect();
            let body = certificate_body(
                "independence-number",
                &spec.id(),
                base.n,
                status,
                json!({ "set": set }),
                &[
                    ("value", json!(result.value)),
                    ("nodes", json!(result.nodes)),
                ],
            );
            emit(&body, base.out.as_deref(), mb)?;
            Ok(if result.exact {
                EXIT_HOLDS
            } else {
                EXIT_INCONCLUSIVE
            })
        }
        CertifyCommand::TreeFreeness { base, t_max } => {
            let spec = ConstructionSpec::parse_id(&base.spec)?;
            mb.spec(&spec.id());
            mb.n(base.n);
            let report = scan_tree_freeness(&spec, base.n, t_max)?;
            let free = report.tree_free();
            let body = certificate_body(
                "tight-tree-freeness",
                &spec.id(),
                base.n,
                if free { "holds" } else { "violated" },
                serde_json::to_value(&report)?,
                &[("t_max", json!(t_max))],
            );
            emit(&body, base.out.as_deref(), mb)?;
            Ok(if free { EXIT_HOLDS } else { EXIT_VIOLATION })
        }
    }
}

fn bounds(kind: BoundsCommand, mb: &mut ManifestBuilder) -> ramsey_forge::Result<u8> {
    match kind {
        BoundsCommand::Estimate { k, r, n } => {
            let est = ramsey_upper_estimate(k, r, n)?;
            let mut body = serde_json::to_string_pretty(&json!({
                "k": est.k,
                "r": est.r,
                "n": est.n,
                "vertex_bound": est.vertex_bound.to_string(),
                "p": est.p,
            }))?;
            body.push('\n');
            emit(&body, None, mb)?;
            Ok(EXIT_HOLDS)
        }
        BoundsCommand::Turan { k, r, n } => {
            let bound = turan_bound(k, r, n)?;
            let mut body = serde_json::to_string_pretty(&json!({
                "k": k,
                "r": r,
                "n": n,
                "max_edges": bound.to_string(),
            }))?;
            body.push('\n');
            emit(&body, None, mb)?;
            Ok(EXIT_HOLDS)
        }
        BoundsCommand::DeleteMethod {
            base,
            p,
            trials,
            seed,
        } => {
            let spec = ConstructionSpec::parse_id(&base.spec)?;
            mb.spec(&spec.id());
            mb.n(base.n);
            mb.seed(seed);
            let summary = deletion_trials(&spec, base.n, p, trials, seed)?;
            let mut body = serde_json::to_string_pretty(&summary)?;
            body.push('\n');
            emit(&body, base.out.as_deref(), mb)?;
            Ok(if summary.pass {
                EXIT_HOLDS
            } else {
                EXIT_VIOLATION
            })
        }
    }
}

fn parse_points(text: &str) -> ramsey_forge::Result<Vec<GridPoint>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::parse)
        .collect()
}
