//! Front end for the certificate suites. `run` parses arguments, executes one
//! subcommand and returns the exit code with the rendered artifact, so the
//! binary and the tests share one code path.

mod commands;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use kummer_core::Error;
pub use report::{Check, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CERTIFICATE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Dot,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "kummer",
    version,
    about = "Exact certificates for Kummer quartic surfaces"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Certificates run concurrently within one invocation.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

/// Four coordinates of a parameter point, as integers or "p/q".
#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(num_args = 4, value_names = ["A1", "A2", "A3", "A4"], allow_negative_numbers = true, required = true)]
    pub a: Vec<String>,
}

/// Parameter point defaulting to the Cefalù values `0 1 1 1`.
#[derive(Debug, Args)]
pub struct OptionalParamArgs {
    #[arg(
        num_args = 4,
        value_names = ["A1", "A2", "A3", "A4"],
        allow_negative_numbers = true,
        default_values = ["0", "1", "1", "1"]
    )]
    pub a: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the nondegeneracy conditions on a parameter point.
    Validate(ParamArgs),
    /// Nodes, tropes, incidence and Hudson coefficients.
    Build(ParamArgs),
    /// Nodes, configuration, double-conic tropes, self-duality and the branch sextic.
    Certify {
        #[command(flatten)]
        params: ParamArgs,
        /// Node used for the projection.
        #[arg(long, default_value_t = 0)]
        node: usize,
    },
    /// Orthogonality graph of the nodes: invariants, independent sets, double cover.
    Graph(OptionalParamArgs),
    /// Isometries of the lattice spanned by H and the nodal classes.
    Picard {
        #[command(flatten)]
        params: OptionalParamArgs,
        /// Nodes swapped after projecting from the first one (1-based).
        #[arg(long, num_args = 2, value_names = ["I", "J"], default_values = ["1", "2"])]
        swap: Vec<usize>,
    },
    /// Projection of the Segre cubic from a point, and the gallery of cubics.
    Segre {
        /// Centre in the chart s1 = 0 (five coordinates).
        #[arg(
            long,
            num_args = 5,
            allow_negative_numbers = true,
            conflicts_with = "search"
        )]
        center: Option<Vec<String>>,
        /// Search integral centres with coordinates bounded by this value.
        #[arg(long)]
        search: Option<i64>,
    },
    /// Numerical theta pipeline for a period matrix.
    Theta {
        /// `[[[re,im],[re,im]],[[re,im],[re,im]]]` or `{"re": [[..]], "im": [[..]]}`.
        #[arg(long)]
        tau: String,
        /// Truncation error of the theta series.
        #[arg(long, default_value_t = kummer_core::theta::DEFAULT_EPSILON)]
        epsilon: f64,
        /// Threshold on the embedding residual.
        #[arg(long, default_value_t = kummer_core::theta::RESIDUAL_TOL)]
        residual_tol: f64,
        /// Random points for the identities and the embedding.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Certificates specific to the parameters 0 1 1 1.
    Cefalu,
}

/// Exit code and rendered artifact of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(message: String) -> Self {
        let body = json!({ "passed": false, "error": { "kind": "input", "message": message } });
        Outcome {
            code: EXIT_INPUT,
            stdout: format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Certificate failures exit 1; anything else the core rejects is bad input.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Certificate(_) => EXIT_CERTIFICATE,
        _ => EXIT_INPUT,
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
            return Outcome {
                code,
                stdout: if code == EXIT_PASS {
                    e.to_string()
                } else {
                    String::new()
                },
                stderr: if code == EXIT_PASS {
                    String::new()
                } else {
                    e.to_string()
                },
            };
        }
    };
    execute(&cfg)
}

pub fn execute(cfg: &RunConfig) -> Outcome {
    if cfg.jobs == 0 {
        return Outcome::input_error("--jobs must be positive".into());
    }
    if cfg.format == Format::Dot && !matches!(cfg.command, Command::Graph(_)) {
        return Outcome::input_error("dot output is only available for graph".into());
    }
    let report = match commands::dispatch(cfg) {
        Ok(r) => r,
        Err(e) => {
            let code = exit_code_for(&e);
            let kind = if code == EXIT_CERTIFICATE {
                "certificate"
            } else {
                "input"
            };
            let body =
                json!({ "passed": false, "error": { "kind": kind, "message": e.to_string() } });
            return Outcome {
                code,
                stdout: format!("{}\n", serde_json::to_string_pretty(&body).unwrap()),
                stderr: format!("error: {e}\n"),
            };
        }
    };
    let rendered = report.render(cfg.format);
    let mut out = Outcome {
        code: report.exit_code(),
        stdout: rendered.clone(),
        stderr: String::new(),
    };
    if let Some(path) = &cfg.output {
        if let Err(e) = std::fs::write(path, &rendered) {
            return Outcome::input_error(format!("cannot write {}: {e}", path.display()));
        }
        out.stdout.clear();
    }
    out
}
