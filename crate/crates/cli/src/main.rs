//! `qso`: enumerate irreps, print Casimir elements, normalize elements and
//! verify the representation theory of U'_q(so_n) numerically and exactly.

mod output;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qso::casimir::{self, CasimirKind};
use qso::gtrep::{dominant_weights, HighestWeight};
use qso::pbw::{normalize, NCPoly};
use qso::qnum::HalfInt;
use qso::syntax::{parse_rational, Sign};
use qso::verify::{self, VerifyConfig, DEFAULT_SYMBOLIC_LIMIT};

#[derive(Parser)]
#[command(
    name = "qso",
    version,
    about = "Casimir elements and Gel'fand-Tsetlin irreps of the nonstandard q-deformed algebras U'_q(so_n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Digits printed for numeric values in text and CSV output.
    #[arg(long, global = true, env = "QSO_PRECISION", default_value_t = 10)]
    precision: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List dominant weights with entries bounded by --max, with dimensions.
    Irreps {
        /// Rank parameter n of so_n (at least 2).
        #[arg(long)]
        n: u32,
        /// Largest absolute value of a weight entry (exact rational, e.g. 3/2).
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        max: String,
        /// Also list the Gel'fand-Tsetlin patterns of each irrep (text format).
        #[arg(long)]
        patterns: bool,
    },
    /// Print a Casimir element built from the q-tensor operators.
    Casimir {
        #[arg(long)]
        n: u32,
        /// Order 2r of C^(2r)_n (an even number).
        #[arg(long, conflicts_with = "top", required_unless_present = "top")]
        order: Option<u32>,
        /// Sign of the top element C^(n)±_n, for even n: + or -.
        #[arg(long, allow_hyphen_values = true)]
        top: Option<String>,
        /// Also print the PBW normal form.
        #[arg(long)]
        normal_form: bool,
    },
    /// Run relation, scalarness, eigenvalue and identity checks; exit 1 on failure.
    Verify {
        #[command(flatten)]
        job: JobArgs,
        /// Also check centrality exactly by PBW normalization.
        #[arg(long)]
        symbolic: bool,
        /// Largest n for which the exact centrality check is attempted.
        #[arg(long, default_value_t = DEFAULT_SYMBOLIC_LIMIT)]
        symbolic_limit: u32,
        /// Seed choosing the perturbed coefficient of the negative control.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tabulate closed-form Casimir eigenvalues and measured matrix values.
    Spectrum {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Print the PBW normal form of an element (argument or standard input).
    Normalize {
        /// Rank n; defaults to the largest index in the element.
        #[arg(long)]
        n: Option<u32>,
        /// Element text, e.g. "I(3,2) I(2,1)". Read from standard input if absent.
        #[arg(allow_hyphen_values = true)]
        element: Option<String>,
    },
}

#[derive(Args)]
struct JobArgs {
    #[arg(long)]
    n: u32,
    /// Highest weights as comma-separated exact rationals; repeat the flag or
    /// separate weights with ';'. Defaults to every dominant weight with
    /// entries bounded by --max.
    #[arg(long, allow_hyphen_values = true)]
    weights: Vec<String>,
    /// Entry bound for the default weight list.
    #[arg(long, default_value = "1")]
    max: String,
    /// Values of q0 (decimal or a/b, positive); repeat or separate with ','.
    #[arg(long = "q", allow_hyphen_values = true, value_delimiter = ',', default_values_t = vec!["1.2".to_string(), "0.85".to_string(), "2.0".to_string()])]
    q: Vec<String>,
    /// Casimir orders 2r to include (e.g. 2,4). With neither --order nor
    /// --top, every Casimir for n is included.
    #[arg(long, value_delimiter = ',')]
    order: Vec<u32>,
    /// Top elements C^(n)± to include, for even n: +, - or both (+,-).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    top: Vec<String>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

pub enum CliError {
    /// Bad arguments; exit code 2.
    Usage(String),
    /// A check failed; exit code 1.
    Check(String),
    /// Computation error; exit code 1.
    Runtime(String),
}

impl From<qso::Error> for CliError {
    fn from(e: qso::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Check(m)) | Err(CliError::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let out = output::Sink::new(cli.output.clone(), cli.format, cli.precision);
    match &cli.command {
        Command::Irreps { n, max, patterns } => {
            check_n(*n)?;
            let max: HalfInt = max.parse().map_err(usage)?;
            if max < HalfInt::ZERO {
                return Err(usage("--max must be nonnegative"));
            }
            out.irreps(*n, &dominant_weights(*n, max), *patterns)
        }
        Command::Casimir { n, order, top, normal_form } => {
            check_n(*n)?;
            let kind = match (order, top) {
                (Some(o), _) => order_kind(*n, *o)?,
                (None, Some(t)) => top_kind(*n, t)?,
                (None, None) => return Err(usage("one of --order or --top is required")),
            };
            let c = casimir::build(*n, kind).map_err(usage)?;
            let nf = if *normal_form { Some(normalize(&c.body, *n)?) } else { None };
            out.casimir(&c, nf.as_ref())
        }
        Command::Verify { job, symbolic, symbolic_limit, seed } => {
            let mut config = job_config(job)?;
            config.symbolic = *symbolic;
            config.symbolic_limit = *symbolic_limit;
            config.seed = *seed;
            let report = in_pool(job.jobs, || verify::run(&config))??;
            out.report(&report)?;
            if report.verdict.pass {
                Ok(())
            } else {
                Err(CliError::Check(format!(
                    "{} failed checks, {} misbehaving controls",
                    report.verdict.failures, report.verdict.misbehaving_controls
                )))
            }
        }
        Command::Spectrum { job } => {
            let config = job_config(job)?;
            let rows = in_pool(job.jobs, || output::spectrum_rows(&config))??;
            out.spectrum(&rows)
        }
        Command::Normalize { n, element } => {
            let text = match element {
                Some(t) => t.clone(),
                None => {
                    let mut s = String::new();
                    std::io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            let p: NCPoly = text.trim().parse().map_err(usage)?;
            let n = n.unwrap_or_else(|| p.max_index().max(2));
            check_n(n)?;
            let nf = normalize(&p, n).map_err(usage)?;
            out.normal_form(n, &nf)
        }
    }
}

fn check_n(n: u32) -> CliResult<()> {
    if n < 2 {
        return Err(usage(format!("--n must be at least 2, got {n}")));
    }
    Ok(())
}

fn order_kind(n: u32, order: u32) -> CliResult<CasimirKind> {
    if order == 0 || !order.is_multiple_of(2) || order > n {
        return Err(usage(format!("--order must be an even number between 2 and {n}, got {order}")));
    }
    Ok(CasimirKind::Order(order / 2))
}

fn top_kind(n: u32, sign: &str) -> CliResult<CasimirKind> {
    if !n.is_multiple_of(2) {
        return Err(usage(format!("C^(n)± exists only for even n, got n = {n}")));
    }
    Ok(CasimirKind::Top(sign.parse::<Sign>().map_err(usage)?))
}

fn job_config(job: &JobArgs) -> CliResult<VerifyConfig> {
    check_n(job.n)?;
    let weights = if job.weights.is_empty() {
        let max: HalfInt = job.max.parse().map_err(usage)?;
        dominant_weights(job.n, max)
    } else {
        job.weights
            .iter()
            .flat_map(|w| w.split(';'))
            .filter(|w| !w.trim().is_empty())
            .map(|w| HighestWeight::parse(job.n, w).map_err(usage))
            .collect::<CliResult<Vec<_>>>()?
    };
    let q0 = job
        .q
        .iter()
        .map(|s| {
            let v = parse_rational(s.trim()).map_err(usage)?.to_complex();
            if v.im != 0.0 || v.re <= 0.0 {
                return Err(usage(format!("q0 must be a positive real, got {s}")));
            }
            Ok(v.re)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut kinds = Vec::new();
    for &o in &job.order {
        kinds.push(order_kind(job.n, o)?);
    }
    for t in &job.top {
        kinds.push(top_kind(job.n, t)?);
    }
    let mut config = VerifyConfig::new(job.n, weights);
    config.q0 = q0;
    if !kinds.is_empty() {
        kinds.dedup();
        config.kinds = kinds;
    }
    Ok(config)
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(pool.install(f))
}
