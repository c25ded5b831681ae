use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use hopfaut_core::expr::parse_point;
use hopfaut_core::moebius::zero_and_roots;
use hopfaut_core::suite::{self, SuiteOptions};
use hopfaut_core::{ManifoldSpec, ProjPoint, Rational, Report};

/// Exact checks on the automorphism group of the 3-folds X(a, b).
#[derive(Parser)]
#[command(name = "hopfaut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpecArgs {
    /// Degree of the O(a) summand; a > 3.
    a: u32,
    /// Degree of the O(b) summand; b >= 3a.
    b: u32,
    /// Contraction factor p/q with 0 < p/q < 1.
    #[arg(long, default_value = "1/2")]
    lambda: String,
}

#[derive(Args)]
struct Output {
    /// Write the JSON report to PATH, or to stdout when PATH is omitted or `-`.
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct Sampling {
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = SuiteOptions::default().seed)]
    seed: u64,
    /// Random samples per randomized check.
    #[arg(long, default_value_t = SuiteOptions::default().samples)]
    samples: usize,
}

impl Sampling {
    fn options(&self) -> SuiteOptions {
        SuiteOptions { seed: self.seed, samples: self.samples }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification suite.
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Output,
    },
    /// Setwise stabilizer of a finite set of points of P^1.
    Stabilizer {
        /// Points such as `0`, `1/2`, `zeta(5,2)`, `1+zeta(4,1)`, `inf`. Write
        /// negative expressions as `(-zeta(4,1))` or after `--`.
        #[arg(allow_negative_numbers = true, required_unless_present = "zero_and_roots", conflicts_with = "zero_and_roots")]
        points: Vec<String>,
        /// Use {0} together with the n-th roots of unity.
        #[arg(long, value_name = "N")]
        zero_and_roots: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Component group of the automorphism group.
    Components {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        out: Output,
    },
    /// Solve the linear lifting conditions over t -> zeta^k t.
    Solve {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        k: i64,
        /// Degree bound for the unknown polynomials; at least b - a.
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        out: Output,
    },
}

struct UsageError(String);

fn build_spec(args: &SpecArgs) -> Result<ManifoldSpec, UsageError> {
    let lambda = Rational::from_str(&args.lambda).map_err(|e| UsageError(format!("invalid --lambda {:?}: {e}", args.lambda)))?;
    ManifoldSpec::canonical(args.a, args.b, lambda).map_err(|e| UsageError(e.to_string()))
}

fn run(cmd: Command) -> Result<(Report, Output), UsageError> {
    Ok(match cmd {
        Command::Verify { spec, sampling, out } => (suite::verify(&build_spec(&spec)?, sampling.options()), out),
        Command::Components { spec, sampling, out } => (suite::components_report(&build_spec(&spec)?, sampling.options()), out),
        Command::Solve { spec, k, degree, out } => {
            let s = build_spec(&spec)?;
            let min = (s.b() - s.a()) as usize;
            if degree < min {
                return Err(UsageError(format!("--degree must be at least b - a = {min}")));
            }
            (suite::solve_report(&s, k, degree), out)
        }
        Command::Stabilizer { points, zero_and_roots: n, out } => {
            let pts: Vec<ProjPoint> = match n {
                Some(n) => zero_and_roots(n).map_err(|e| UsageError(e.to_string()))?,
                None => points
                    .iter()
                    .map(|p| parse_point(p).map_err(|e| UsageError(format!("cannot parse point {p:?}: {e}"))))
                    .collect::<Result<_, _>>()?,
            };
            let distinct = pts.iter().enumerate().all(|(i, p)| pts[..i].iter().all(|q| !q.same_point(p)));
            if pts.len() < 3 || !distinct {
                return Err(UsageError("need at least 3 distinct points".into()));
            }
            (suite::stabilizer_report(&pts, n.filter(|&n| n >= 3)), out)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, out) = match run(cli.command) {
        Ok(r) => r,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match out.json.as_deref() {
        Some(p) if p.as_os_str() == "-" => println!("{}", report.to_json()),
        Some(p) => {
            if let Err(e) = std::fs::write(p, report.to_json() + "\n") {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
            println!("{report}");
        }
        None => println!("{report}"),
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
