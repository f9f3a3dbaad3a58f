mod commands;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use paleyvec::forms::FormSpec;
use paleyvec::graph::{DEFAULT_MAX_CLIQUES, DEFAULT_MAX_VERTICES};
use paleyvec::verify::Suite;
use paleyvec::{Elem, Error, FieldSpec, SolverOptions, SubspaceSpec};

/// Clique numbers of product graphs over finite fields.
#[derive(Parser, Debug)]
#[command(name = "paleyvec", version)]
struct Cli {
    #[command(flatten)]
    budget: Budget,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Budget {
    /// Largest field (in elements) whose graph may be built.
    #[arg(long, global = true, env = "PALEYVEC_BUDGET_VERTICES", default_value_t = DEFAULT_MAX_VERTICES,
          value_parser = positive)]
    pub max_vertices: usize,
    /// Cap on enumerated maximal cliques.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CLIQUES, value_parser = positive)]
    pub max_cliques: usize,
    /// Wall-clock limit in seconds for each clique search.
    #[arg(long, global = true, value_parser = positive_secs)]
    pub time_limit: Option<f64>,
    /// Solver threads.
    #[arg(long, global = true, default_value_t = 1, value_parser = positive)]
    pub workers: usize,
    /// Disable the structural pruning rule in the clique search.
    #[arg(long, global = true)]
    pub no_dominance: bool,
}

impl Budget {
    pub fn solver(&self) -> SolverOptions {
        let mut opts = SolverOptions::default()
            .with_workers(self.workers)
            .with_dominance(!self.no_dominance);
        if let Some(secs) = self.time_limit {
            opts = opts.with_deadline(Some(Instant::now() + Duration::from_secs_f64(secs)));
        }
        opts
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_secs(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be a positive number of seconds".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Predict,
    Both,
}

/// Subspace dimension, either a number or `n-1`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Dim {
    Fixed(u32),
    Hyperplane,
}

impl FromStr for Dim {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "n-1" => Ok(Dim::Hyperplane),
            t => t
                .parse()
                .map(Dim::Fixed)
                .map_err(|_| format!("expected a dimension or n-1, got {s:?}")),
        }
    }
}

impl Dim {
    pub fn resolve(self, n: u32) -> u32 {
        match self {
            Dim::Fixed(d) => d,
            Dim::Hyperplane => n - 1,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SuiteArg {
    All,
    One(Suite),
}

impl FromStr for SuiteArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(SuiteArg::All);
        }
        s.parse()
            .map(SuiteArg::One)
            .map_err(|e: Error| e.to_string())
    }
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_subspace(s: &str) -> Result<SubspaceSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_form(s: &str) -> Result<FormSpec, String> {
    let s = if s.contains('=') {
        s.to_string()
    } else {
        format!("gram={s}")
    };
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe a field F_{q^n} given as p^m^n, q^n or q=<q>,n=<n>.
    Field {
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        /// Print both moduli as coefficient lists, constant term first.
        #[arg(long)]
        print_modulus: bool,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Exact and/or predicted clique number of G_U.
    Omega {
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        /// basis=<i,j,...> or ker-trace-of=<c>
        #[arg(long, value_parser = parse_subspace)]
        subspace: SubspaceSpec,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        /// Leave out runtime_ms so repeated runs print identical bytes.
        #[arg(long)]
        no_timing: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// One row per subspace of a given dimension.
    Survey {
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        /// A dimension or n-1.
        #[arg(long)]
        dim: Dim,
        /// Render bases as polynomials instead of element indices.
        #[arg(long)]
        pretty: bool,
        /// Refuse families with more subspaces than this.
        #[arg(long, default_value_t = 100_000, value_parser = positive)]
        max_subspaces: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a verification suite against exhaustive computation.
    Verify {
        /// main, main1, main3, prop-basic, n-1, crucial, basis, trace-equiv,
        /// sumproduct, census or all
        #[arg(long)]
        suite: SuiteArg,
        #[arg(long)]
        qmax: Option<u64>,
        #[arg(long)]
        nmax: Option<u32>,
        /// Seed for the sampled suites.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Invariants of the bilinear form Tr(λxy) or of an explicit Gram matrix.
    Form {
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        /// Index of λ in F_{q^n}.
        #[arg(long, conflicts_with = "gram", required_unless_present = "gram")]
        lambda: Option<u32>,
        /// Rows separated by ';', entries by ','.
        #[arg(long, value_parser = parse_form)]
        gram: Option<FormSpec>,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Time the clique search with and without pruning.
    Bench {
        /// Repeatable; defaults to 3^4.
        #[arg(long, value_parser = parse_field)]
        field: Vec<FieldSpec>,
        #[arg(long, default_value = "n-1")]
        dim: Dim,
        /// Timed runs per instance and mode.
        #[arg(long, default_value_t = 3, value_parser = positive)]
        reps: usize,
        /// Instances per class, taken in canonical order.
        #[arg(long, default_value_t = 32, value_parser = positive)]
        limit: usize,
        /// Worker count compared against a single worker.
        #[arg(long, default_value_t = 4, value_parser = positive)]
        compare_workers: usize,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
}

/// Failure of a command, already mapped to an exit code.
pub enum Failure {
    Error(Error),
    /// Results were computed but some check failed.
    Mismatch,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("output error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("output error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("output error: {e}"))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } | Error::CapExceeded(_) | Error::TimeLimit => 3,
        Error::StructureViolation(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let b = &cli.budget;
    let res = match cli.command {
        Command::Field {
            field,
            print_modulus,
            format,
        } => commands::field(&mut out, field, print_modulus, format),
        Command::Omega {
            field,
            subspace,
            mode,
            no_timing,
            format,
        } => commands::omega(&mut out, b, field, &subspace, mode, !no_timing, format),
        Command::Survey {
            field,
            dim,
            pretty,
            max_subspaces,
            format,
        } => commands::survey(&mut out, b, field, dim, pretty, max_subspaces, format),
        Command::Verify {
            suite,
            qmax,
            nmax,
            seed,
            format,
        } => commands::verify(&mut out, b, suite, qmax, nmax, seed, format),
        Command::Form {
            field,
            lambda,
            gram,
            format,
        } => {
            let spec = match (lambda, gram) {
                (Some(l), _) => FormSpec::Trace { lambda: Elem(l) },
                (None, Some(g)) => g,
                (None, None) => unreachable!("clap requires one of them"),
            };
            commands::form(&mut out, b, field, &spec, format)
        }
        Command::Bench {
            field,
            dim,
            reps,
            limit,
            compare_workers,
            format,
        } => {
            let fields = if field.is_empty() {
                vec![FieldSpec { p: 3, m: 1, n: 4 }]
            } else {
                field
            };
            let cfg = commands::BenchConfig {
                dim,
                reps,
                limit,
                compare_workers,
            };
            commands::bench(&mut out, b, &fields, &cfg, format)
        }
    };
    let flushed = out.flush();
    match res {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(2),
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
