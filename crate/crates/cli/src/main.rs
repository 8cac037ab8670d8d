use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cplstab::checks::{self, CheckOptions, SuiteReport};
use cplstab::combinatorics::{enum_p, IndexTriple, Partition};
use cplstab::fock::FockVector;
use cplstab::limit::{self, StableBasisEntry};
use cplstab::straighten::{self, HeisenbergPoly};
use cplstab::{cpl, fkops, weights, Error};

#[derive(Parser, Debug)]
#[command(name = "cplstab", version, about = "CPL bases of local Weyl modules inside level-1 affine sl2 modules")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// CL(ξ) for ξ given as n:k:parts, e.g. 4:2:2,1.
    Cl {
        #[arg(long)]
        xi: String,
    },
    /// B(ξ).
    B {
        #[arg(long)]
        xi: String,
    },
    /// B̄(ξ).
    Bbar {
        #[arg(long)]
        xi: String,
    },
    /// The generating vector w_n.
    Wn {
        #[arg(long)]
        n: u32,
    },
    /// The Heisenberg polynomial of y t^{p_1} ⋯ y t^{p_r} x t^{-q_1} ⋯ x t^{-q_r} v_Λ0.
    Straighten {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// f_λ.
    Flambda {
        #[arg(long)]
        lam: String,
    },
    /// The stable basis of the weight space t_{jα1}(Λ) − dδ.
    StableBasis {
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
        #[arg(long)]
        d: u32,
        /// Use L(Λ1) instead of L(Λ0).
        #[arg(long)]
        odd: bool,
    },
    /// Run verification suites.
    Check {
        /// A suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long, default_value_t = checks::DEFAULT_SEED)]
        seed: u64,
    },
    /// dim W(n).
    Dim {
        #[arg(long)]
        n: u32,
    },
    /// T_{pα1} applied to CL(ξ), to a given vector, or to v_Λ0.
    #[command(name = "apply-T", alias = "apply-t")]
    ApplyT {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, conflicts_with = "vector")]
        xi: Option<String>,
        /// A vector in text form or as JSON.
        #[arg(long)]
        vector: Option<String>,
    },
}

enum Failure {
    Invalid(String),
    Checks(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Failure::Invalid(format!("bad integer list `{s}`"))))
        .collect()
}

fn max_degree() -> Result<Option<u32>, Failure> {
    match std::env::var("CPLSTAB_MAX_DEGREE") {
        Ok(v) => v
            .trim()
            .parse::<u32>()
            .map(Some)
            .map_err(|_| Failure::Invalid(format!("CPLSTAB_MAX_DEGREE must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn guard_degree(cap: Option<u32>, degree: u32) -> Result<(), Failure> {
    match cap {
        Some(c) if degree > c => Err(Failure::Invalid(format!("output degree {degree} exceeds CPLSTAB_MAX_DEGREE = {c}"))),
        _ => Ok(()),
    }
}

fn triple_degree(xi: &IndexTriple) -> u32 {
    weights::state_data_of_weight(&weights::weight_of_cl(xi)).map_or(0, |(_, d)| d)
}

fn vector_out(v: &FockVector, format: Format) -> String {
    match format {
        Format::Text => v.to_string(),
        Format::Json => v.to_json(),
    }
}

fn poly_out(p: &HeisenbergPoly, format: Format) -> String {
    match format {
        Format::Text => p.to_string(),
        Format::Json => p.to_json(),
    }
}

fn basis_out(e: &StableBasisEntry, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(e).expect("serializable"),
        Format::Text => {
            let mut lines = vec![format!("μ = {}  (j = {}, d = {}, n = {})", e.mu, e.j, e.d, e.chosen_n)];
            lines.extend(e.vectors.iter().map(|v| format!("{}: {}", v.xi, v.vector)));
            lines.join("\n")
        }
    }
}

fn reports_out(reports: &[SuiteReport], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(reports).expect("serializable"),
        Format::Text => {
            let mut lines = Vec::new();
            for r in reports {
                let status = if r.passed { "ok" } else { "FAIL" };
                lines.push(format!("{}: {status} ({} checks, {} ms)", r.name, r.checked, r.elapsed_ms));
                lines.extend(r.failures.iter().map(|f| format!("  {f}")));
            }
            lines.join("\n")
        }
    }
}

fn parse_vector(s: &str) -> Result<FockVector, Failure> {
    let t = s.trim_start();
    let v = if t.starts_with('{') || t.starts_with('[') {
        FockVector::from_json(s)?
    } else {
        s.parse::<FockVector>()?
    };
    Ok(v)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let cap = max_degree()?;
    let format = cli.format;
    match &cli.command {
        Command::Cl { xi } => {
            let xi: IndexTriple = xi.parse()?;
            guard_degree(cap, triple_degree(&xi))?;
            Ok(vector_out(&cpl::cl_vec_checked(&xi)?, format))
        }
        Command::B { xi } => {
            let xi: IndexTriple = xi.parse()?;
            guard_degree(cap, triple_degree(&xi.complement()))?;
            Ok(vector_out(&cpl::b_vec(&xi), format))
        }
        Command::Bbar { xi } => {
            let xi: IndexTriple = xi.parse()?;
            guard_degree(cap, triple_degree(&xi.complement()))?;
            Ok(vector_out(&cpl::bbar_vec(&xi)?, format))
        }
        Command::Wn { n } => Ok(vector_out(&cpl::make_wn(*n), format)),
        Command::Straighten { p, q } => {
            let (p, q) = (parse_ints(p)?, parse_ints(q)?);
            let degree = q.iter().sum::<i64>() - p.iter().sum::<i64>();
            guard_degree(cap, degree.max(0) as u32)?;
            Ok(poly_out(&straighten::straighten_yx(&p, &q)?, format))
        }
        Command::Flambda { lam } => {
            let lam: Partition = lam.parse()?;
            guard_degree(cap, lam.weight())?;
            Ok(poly_out(&straighten::f_lambda(&lam), format))
        }
        Command::StableBasis { j, d, odd } => {
            guard_degree(cap, *d)?;
            let entry = if *odd {
                limit::stable_basis_odd_at(*j, *d)?
            } else {
                limit::stable_basis_at(*j, *d)?
            };
            Ok(basis_out(&entry, format))
        }
        Command::Check { suite, n_max, seed } => {
            let opts = CheckOptions { n_max: *n_max, seed: *seed };
            let reports = if suite == "all" {
                checks::run_all(&opts)
            } else {
                vec![checks::run_suite(suite, &opts)?]
            };
            let text = reports_out(&reports, format);
            if reports.iter().all(|r| r.passed) {
                Ok(text)
            } else {
                Err(Failure::Checks(text))
            }
        }
        Command::Dim { n } => {
            let dim = enum_p(*n).len();
            Ok(match format {
                Format::Text => dim.to_string(),
                Format::Json => serde_json::json!({ "n": n, "dim": dim }).to_string(),
            })
        }
        Command::ApplyT { p, xi, vector } => {
            let v = match (xi, vector) {
                (Some(xi), _) => cpl::cl_vec(&xi.parse::<IndexTriple>()?)?,
                (None, Some(s)) => parse_vector(s)?,
                (None, None) => FockVector::vacuum0(),
            };
            guard_degree(cap, v.max_degree())?;
            Ok(vector_out(&fkops::translate(*p, &v)?, format))
        }
    }
}

fn emit(out: &Option<String>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| format!("cannot write {path}: {e}")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match run(&cli) {
        Ok(text) => (text, ExitCode::SUCCESS),
        Err(Failure::Checks(text)) => (text, ExitCode::from(1)),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(msg) = emit(&cli.out, &text) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    code
}
