//! `dmc` command-line front end.
//!
//! [`run_command`] parses an argv, runs one subcommand and returns the exit
//! code with the complete stdout and stderr text. Nothing is printed on
//! failure except a one-line JSON error on stderr.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage or input-parse error.

pub mod documents;
pub mod output;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use dmc_core::construct::{construct_channel, construct_channel_with_subset, ConstructionResult};
use dmc_core::geom::row_divergences;
use dmc_core::info::{d_mutual_info_binary, mutual_information};
use dmc_core::solve::{
    binary_optimal_input, blahut_arimoto, constrained_binary_capacity, CostSpec, SolverOptions,
    SolverRegistry, BISECTION_TOL, DEFAULT_MAX_ITER,
};
use dmc_core::verify::{ensemble_run_parallel, f_surface, verify_bound_with, EnsembleConfig};
use dmc_core::{Channel, Nats, INV_E, MAX_INPUT_PROB};

use documents::{load_channel, load_distribution};
use output::{cell, num, nums, Units};

#[derive(Debug, Parser)]
#[command(
    name = "dmc",
    version,
    about = "Capacity tools for discrete memoryless channels"
)]
pub struct Cli {
    /// Solver tolerance in nats.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Iteration cap for Blahut–Arimoto.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Units for reported information quantities.
    #[arg(long, global = true, value_enum, default_value_t = Units::Nats)]
    pub units: Units,
    /// Rescale input rows whose sums are within 1e-6 of one.
    #[arg(long, global = true)]
    pub renormalize: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity with optimal input and output laws.
    Capacity {
        channel: PathBuf,
        /// Registered solver name; defaults to `equalizer` for two inputs
        /// and `blahut-arimoto` otherwise.
        #[arg(long)]
        solver: Option<String>,
    },
    /// Optimal input of a two-input channel by bisection.
    BinaryOptimal { channel: PathBuf },
    /// Equalizing weight of a two-input channel with the bracket derivatives.
    Equalizer { channel: PathBuf },
    /// Two-input capacity with cost (0, 1) and budget rho; row 1 is the costly symbol.
    CostCapacity {
        channel: PathBuf,
        #[arg(long)]
        rho: f64,
    },
    /// Compare the largest optimal input probability with 1 - 1/e.
    VerifyBound { channel: PathBuf },
    /// Random Dirichlet channels checked against the bound (CSV).
    Ensemble {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        concentration: f64,
        /// Emit a JSON summary instead of per-trial CSV rows.
        #[arg(long)]
        summary: bool,
    },
    /// Build a channel for which the given law is capacity-achieving.
    Construct {
        distribution: PathBuf,
        /// Comma-separated input indices to group.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
    },
    /// f(1/e; p1, p2) on a (grid + 1)^2 lattice (CSV).
    FSurface {
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Largest row divergence from a candidate center.
    DualRadius { channel: PathBuf, center: PathBuf },
}

/// A failure with a stable `kind` string.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    kind: String,
    message: String,
    code: i32,
}

impl CliError {
    pub fn domain(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.to_string(),
            message: message.into(),
            code: 1,
        }
    }

    pub fn parse(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.to_string(),
            message: message.into(),
            code: 2,
        }
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn exit_code(&self) -> i32 {
        self.code
    }

    fn to_json(&self) -> String {
        json!({"kind": self.kind, "message": self.message}).to_string()
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::domain(e.kind(), e.to_string())
            }
        }
    )*};
}

domain_from!(
    dmc_core::solve::SolveError,
    dmc_core::construct::ConstructError,
    dmc_core::geom::GeomError,
    dmc_core::info::InfoError,
    dmc_core::verify::VerifyError
);

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Outcome {
                code: e.exit_code(),
                stdout,
                stderr,
            };
        }
    };
    match run(&cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: e.to_json() + "\n",
        },
    }
}

fn check_options(cli: &Cli) -> Result<SolverOptions, CliError> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::parse(
            "InvalidTolerance",
            format!("--tol must be positive, got {}", cli.tol),
        ));
    }
    if cli.max_iter == 0 {
        return Err(CliError::parse(
            "InvalidMaxIter",
            "--max-iter must be at least 1",
        ));
    }
    Ok(SolverOptions {
        tol: Nats::new(cli.tol),
        max_iter: cli.max_iter,
    })
}

fn document(fields: Vec<(String, Value)>) -> String {
    let map: Map<String, Value> = fields.into_iter().collect();
    Value::Object(map).to_string() + "\n"
}

fn require_binary(ch: &Channel) -> Result<(), CliError> {
    if ch.inputs() == 2 {
        Ok(())
    } else {
        Err(CliError::domain(
            "UnsupportedAlphabet",
            format!("expected a two-input channel, got {} inputs", ch.inputs()),
        ))
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let opts = check_options(cli)?;
    let u = cli.units;
    let info = |x: Nats| num(u.scale(x));
    let renorm = cli.renormalize;

    match &cli.command {
        Command::Capacity { channel, solver } => {
            let ch = load_channel(channel, renorm)?;
            let solver = solver.as_deref().unwrap_or(if ch.inputs() == 2 {
                "equalizer"
            } else {
                "blahut-arimoto"
            });
            let registry = SolverRegistry::with_defaults();
            let chosen = registry.get(solver).map_err(|e| {
                let names: Vec<_> = registry.names().collect();
                CliError::parse(e.kind(), format!("{e}; available: {}", names.join(", ")))
            })?;
            let res = chosen.solve(&ch, &opts)?;
            Ok(document(vec![
                (u.key("capacity"), info(res.capacity)),
                ("input".into(), nums(res.input.iter())),
                ("output".into(), nums(res.output.iter())),
                ("iterations".into(), res.iterations.into()),
                (u.key("gap"), info(res.gap)),
                ("trivial".into(), res.trivial.into()),
                ("solver".into(), solver.into()),
            ]))
        }
        Command::BinaryOptimal { channel } => {
            let ch = load_channel(channel, renorm)?;
            require_binary(&ch)?;
            let opt = binary_optimal_input(ch.row(0), ch.row(1), BISECTION_TOL)?;
            Ok(document(vec![
                ("alpha_star".into(), num(opt.alpha_star)),
                (u.key("capacity"), info(opt.capacity)),
                ("input".into(), nums([opt.alpha_star, 1.0 - opt.alpha_star])),
                ("iterations".into(), opt.iterations.into()),
            ]))
        }
        Command::Equalizer { channel } => {
            let ch = load_channel(channel, renorm)?;
            require_binary(&ch)?;
            let (p1, p2) = (ch.row(0), ch.row(1));
            let opt = binary_optimal_input(p1, p2, BISECTION_TOL)?;
            let q = dmc_core::info::mixture(opt.alpha_star, p1, p2)?;
            let divs = row_divergences(&ch, &q)?;
            let lower = d_mutual_info_binary(INV_E, p1, p2)?;
            let upper = d_mutual_info_binary(MAX_INPUT_PROB, p1, p2)?;
            Ok(document(vec![
                ("alpha".into(), num(opt.alpha_star)),
                (u.key("divergence_row0"), info(divs[0])),
                (u.key("divergence_row1"), info(divs[1])),
                ("center".into(), nums(q.iter())),
                ("interval".into(), nums([INV_E, MAX_INPUT_PROB])),
                (u.key("derivative_at_lower"), info(Nats::new(lower))),
                (u.key("derivative_at_upper"), info(Nats::new(upper))),
            ]))
        }
        Command::CostCapacity { channel, rho } => {
            let ch = load_channel(channel, renorm)?;
            require_binary(&ch)?;
            let opt = constrained_binary_capacity(ch.row(1), ch.row(0), &CostSpec::binary(*rho))?;
            Ok(document(vec![
                ("rho".into(), num(*rho)),
                ("alpha_star".into(), num(opt.alpha_star)),
                (u.key("capacity"), info(opt.capacity)),
                ("input".into(), nums([1.0 - opt.alpha_star, opt.alpha_star])),
                ("unconstrained_alpha".into(), num(opt.unconstrained_alpha)),
                ("constraint_active".into(), opt.constraint_active.into()),
            ]))
        }
        Command::VerifyBound { channel } => {
            let ch = load_channel(channel, renorm)?;
            let rep = verify_bound_with(&ch, opts.tol, opts.max_iter)?;
            Ok(document(vec![
                (u.key("capacity"), info(rep.capacity)),
                ("input".into(), nums(rep.input.iter())),
                ("max_input_prob".into(), num(rep.max_input_prob)),
                ("threshold".into(), num(rep.threshold)),
                ("margin".into(), num(rep.margin)),
                ("trivial".into(), rep.trivial.into()),
                ("pass".into(), rep.pass.into()),
            ]))
        }
        Command::Ensemble {
            m,
            n,
            trials,
            seed,
            concentration,
            summary,
        } => {
            let config = EnsembleConfig {
                concentration: *concentration,
                tol: opts.tol,
                max_iter: opts.max_iter,
                ..EnsembleConfig::new(*m, *n, *trials, *seed)
            };
            let out = ensemble_run_parallel(&config)?;
            if *summary {
                let s = &out.summary;
                let opt = |v: Option<f64>| v.map_or(Value::Null, num);
                return Ok(document(vec![
                    ("m".into(), (*m).into()),
                    ("n".into(), (*n).into()),
                    ("trials".into(), (*trials).into()),
                    ("seed".into(), (*seed).into()),
                    ("concentration".into(), num(*concentration)),
                    ("failures".into(), s.failures.into()),
                    ("solver_errors".into(), s.solver_errors.into()),
                    ("trivial".into(), s.trivial.into()),
                    ("min_margin".into(), opt(s.min_margin)),
                    ("max_input_prob".into(), opt(s.max_input_prob)),
                ]));
            }
            let mut csv = format!(
                "trial,{},max_input_prob,threshold,margin,trivial,pass,error\n",
                u.key("capacity")
            );
            for rec in &out.records {
                match &rec.outcome {
                    Ok(r) => writeln!(
                        csv,
                        "{},{},{},{},{},{},{},",
                        rec.trial,
                        cell(u.scale(r.capacity)),
                        cell(r.max_input_prob),
                        cell(r.threshold),
                        cell(r.margin),
                        r.trivial,
                        r.pass
                    ),
                    Err(e) => writeln!(csv, "{},,,,,,,{}", rec.trial, e.kind()),
                }
                .expect("write to String");
            }
            Ok(csv)
        }
        Command::Construct {
            distribution,
            subset,
        } => {
            let p = load_distribution(distribution, renorm)?;
            let built = match subset {
                Some(idx) => construct_channel_with_subset(&p, idx)?,
                None => construct_channel(&p)?,
            };
            construction_document(&built, &p, &opts, u)
        }
        Command::FSurface { grid } => {
            let mut csv = format!("p1,p2,{}\n", u.key("f"));
            for pt in f_surface(*grid)? {
                writeln!(
                    csv,
                    "{},{},{}",
                    cell(pt.p1),
                    cell(pt.p2),
                    cell(u.scale(Nats::new(pt.value)))
                )
                .expect("write to String");
            }
            Ok(csv)
        }
        Command::DualRadius { channel, center } => {
            let ch = load_channel(channel, renorm)?;
            let q = load_distribution(center, renorm)?;
            let divs = row_divergences(&ch, &q)?;
            let radius = divs.iter().map(|d| d.value()).fold(0.0, f64::max);
            let attained: Vec<Value> = divs
                .iter()
                .enumerate()
                .filter(|(_, d)| {
                    d.value() == radius
                        || (radius.is_finite() && radius - d.value() <= 1e-12 * radius.max(1.0))
                })
                .map(|(i, _)| i.into())
                .collect();
            Ok(document(vec![
                (u.key("radius"), info(Nats::new(radius))),
                ("infinite".into(), radius.is_infinite().into()),
                (
                    u.key("divergences"),
                    Value::Array(divs.iter().map(|d| info(*d)).collect()),
                ),
                ("attained_by".into(), Value::Array(attained)),
            ]))
        }
    }
}

fn construction_document(
    built: &ConstructionResult,
    p: &dmc_core::Distribution,
    opts: &SolverOptions,
    u: Units,
) -> Result<String, CliError> {
    let mi = mutual_information(p, &built.channel)?;
    let cap = blahut_arimoto(&built.channel, opts.tol, opts.max_iter)?;
    Ok(document(vec![
        (
            "subset".into(),
            Value::Array(built.subset.indices.iter().map(|&i| i.into()).collect()),
        ),
        ("subset_mass".into(), num(built.subset.mass)),
        ("delta".into(), num(built.base.delta)),
        ("noisy_index".into(), built.base.noisy_index.into()),
        (
            "rows".into(),
            Value::Array(
                built
                    .channel
                    .rows()
                    .iter()
                    .map(|r| nums(r.iter()))
                    .collect(),
            ),
        ),
        (u.key("mutual_information"), num(u.scale(mi))),
        (u.key("capacity"), num(u.scale(cap.capacity))),
    ]))
}
