use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use comdet::dot::to_dot;
use comdet::graph::{parse_edge_list, Format, Graph};
use comdet::nash::StabilizeError;
use comdet::pipeline::{detect, run_pipeline, PipelineConfig};
use comdet::verify::{verify, VerifyConfig};
use comdet::Error;

const EXIT_INPUT: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "comdet", version, about = "Community detection with equilibrium refinement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Louvain partition only.
    Detect(InputArgs),
    /// Louvain, stabilization and overlap analysis.
    Pipeline {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1e-9)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.2)]
        alpha: f64,
        #[arg(long, default_value_t = 100_000)]
        max_moves: usize,
        #[arg(long)]
        allow_empty_target: bool,
        /// Graphviz output of the stabilized communities.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Legitimacy matrix as CSV; defaults to `<output>.legitimacy.csv`
        /// when --output is given.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Random cross-check of the incremental gain formulas.
    Verify {
        #[arg(long = "verify-trials", default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 30)]
        max_n: usize,
        #[arg(long, env = "COMDET_SEED", default_value_t = 0)]
        seed: u64,
        /// Perturb incremental values to exercise the failure path.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// `unipartite` or `bipartite`.
    #[arg(long, default_value = "unipartite")]
    format: Format,
    #[arg(long, env = "COMDET_SEED", default_value_t = 0)]
    seed: u64,
    /// JSON report destination; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InconsistentCase(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<StabilizeError> for Failure {
    fn from(e: StabilizeError) -> Self {
        match e {
            StabilizeError::Input(e) => e.into(),
            other => Failure {
                code: EXIT_INTERNAL,
                message: other.to_string(),
            },
        }
    }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INTERNAL,
        message: message.into(),
    }
}

fn load(args: &InputArgs) -> Result<Graph, Failure> {
    let file = fs::File::open(&args.input).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", args.input.display()),
    })?;
    let parsed = parse_edge_list(BufReader::new(file), args.format).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", args.input.display()),
    })?;
    if !parsed.duplicate_lines.is_empty() {
        log::warn!(
            "{}: {} duplicate edges ignored",
            args.input.display(),
            parsed.duplicate_lines.len()
        );
    }
    Ok(parsed.graph)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let res = match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("writing output: {e}"),
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| internal(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Detect(args) => {
            let g = load(&args)?;
            let cfg = PipelineConfig {
                seed: args.seed,
                ..Default::default()
            };
            let start = Instant::now();
            let (_, report) = detect(&g, &cfg, Some(args.input.display().to_string()))?;
            log::info!("louvain finished in {:?}", start.elapsed());
            write_out(args.output.as_deref(), &to_json(&report)?)
        }
        Command::Pipeline {
            input,
            epsilon,
            alpha,
            max_moves,
            allow_empty_target,
            dot,
            csv,
        } => {
            let g = load(&input)?;
            let cfg = PipelineConfig {
                seed: input.seed,
                epsilon,
                alpha,
                max_moves,
                allow_empty_target,
            };
            let start = Instant::now();
            let out = run_pipeline(&g, &cfg, Some(input.input.display().to_string()))?;
            log::info!("pipeline finished in {:?}", start.elapsed());

            let report = &out.report;
            if report.q_stabilized.unwrap_or(f64::NEG_INFINITY) < report.q_initial {
                return Err(internal("stabilized modularity fell below the initial value"));
            }
            write_out(input.output.as_deref(), &to_json(report)?)?;

            let csv = csv.or_else(|| input.output.as_ref().map(|o| o.with_extension("legitimacy.csv")));
            if let Some(path) = csv {
                let file = fs::File::create(&path).map_err(|e| Failure {
                    code: EXIT_INPUT,
                    message: format!("{}: {e}", path.display()),
                })?;
                out.legitimacy.write_csv(&g, file)?;
            }
            if let Some(path) = dot {
                let text = to_dot(&g, &out.stabilized, &out.trace.moved_vertices());
                write_out(Some(&path), &text)?;
            }
            Ok(())
        }
        Command::Verify {
            trials,
            max_n,
            seed,
            inject_fault,
        } => {
            let summary = verify(&VerifyConfig {
                trials,
                max_n,
                seed,
                inject_fault,
                ..Default::default()
            })?;
            write_out(None, &to_json(&summary)?)?;
            if summary.passed() {
                Ok(())
            } else {
                Err(Failure {
                    code: EXIT_VERIFY,
                    message: "verification mismatch; failing instance in the summary above".into(),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
