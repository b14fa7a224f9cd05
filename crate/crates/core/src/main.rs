//! Command-line front end. Every subcommand prints deterministic JSON (or
//! CSV for `sweep`): fixed key order, terms sorted, big integers as decimal
//! strings.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qtheta::coset_theta::{
    coset_theta_enum, coset_theta_formula, klein_orbit, orbit_representatives,
};
use qtheta::lattice_theta::{level_agreement_prefix, theta_via_cwe, theta_via_enum};
use qtheta::quadring::{admissible_levels, Level};
use qtheta::uniqueness::{conjecture_flags, nullity_experiment};
use qtheta::{CodeFile, Error, LinearCode, Result};

#[derive(Parser)]
#[command(
    name = "qtheta",
    about = "Theta series of lattices from codes over imaginary quadratic rings",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Print progress information to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CosetMethod {
    Formula,
    Enum,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum LatticeMethod {
    Cwe,
    Enum,
}

#[derive(Subcommand)]
enum Cmd {
    /// List all admissible levels ell <= max for the prime p.
    Levels {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max: u64,
    },
    /// List the Klein four-group orbits of coset labels mod p.
    Orbits {
        #[arg(long)]
        p: u64,
        /// Only the orbit of this (a, b) pair, given as "a,b".
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(i64, i64)>,
    },
    /// Theta series of the coset a - b*w + pO_K.
    CosetTheta {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        precision: u64,
        #[arg(long, value_enum, default_value_t = CosetMethod::Formula)]
        method: CosetMethod,
    },
    /// Complete weight enumerator of a code file.
    Cwe {
        #[arg(long)]
        code: String,
    },
    /// Symmetric weight enumerator of a code file.
    Swe {
        #[arg(long)]
        code: String,
    },
    /// Theta series of the Construction-A lattice of a code.
    CodeTheta {
        #[arg(long)]
        code: String,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        precision: u64,
        #[arg(long, value_enum, default_value_t = LatticeMethod::Cwe)]
        method: LatticeMethod,
    },
    /// First exponent where the lattice thetas of a code differ across levels.
    LevelAgreement {
        #[arg(long)]
        code: String,
        #[arg(long)]
        ell1: u64,
        #[arg(long)]
        ell2: u64,
        #[arg(long)]
        precision: u64,
    },
    /// Rank/nullity of the coefficient matrix for one (p, n, ell) cell.
    Nullity {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: u64,
    },
    /// Rank/nullity reports for every (n, admissible ell <= ell-max), as CSV.
    Sweep {
        #[arg(long)]
        p: u64,
        /// Comma-separated list of code lengths, e.g. "3,4,5".
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long = "ell-max")]
        ell_max: u64,
        /// Output path, or "-" for standard output.
        #[arg(long, default_value = "-")]
        out: String,
    },
}

fn parse_pair(s: &str) -> std::result::Result<(i64, i64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected \"a,b\"".into());
    }
    let a = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let b = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !qtheta::quadring::is_prime(p) {
        return Err(Error::NotAdmissible(format!("p = {p} is not an odd prime")));
    }
    Ok(())
}

fn load_code(path: &str) -> Result<(Level, LinearCode)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidCode(format!("cannot read {path}: {e}")))?;
    let file: CodeFile = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidCode(format!("cannot parse {path}: {e}")))?;
    file.build()
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Levels { p, max } => {
            check_prime(*p)?;
            println!("{}", json!(admissible_levels(*p, *max)));
        }
        Cmd::Orbits { p, pair } => {
            check_prime(*p)?;
            match pair {
                Some((a, b)) => println!("{}", klein_orbit(*p, *a, *b).to_json()),
                None => {
                    let orbits: Vec<_> = orbit_representatives(*p)
                        .iter()
                        .map(|c| c.to_json())
                        .collect();
                    println!("{}", json!(orbits));
                }
            }
        }
        Cmd::CosetTheta {
            p,
            ell,
            a,
            b,
            precision,
            method,
        } => {
            let level = Level::make(*p, *ell)?;
            let series = match method {
                CosetMethod::Formula => coset_theta_formula(&level, *a, *b, *precision)?,
                CosetMethod::Enum => coset_theta_enum(&level, *a, *b, *precision),
            };
            println!("{}", series.to_json());
        }
        Cmd::Cwe { code } => {
            let (_, c) = load_code(code)?;
            println!("{}", c.cwe().to_json());
        }
        Cmd::Swe { code } => {
            let (_, c) = load_code(code)?;
            println!("{}", c.swe().to_json());
        }
        Cmd::CodeTheta {
            code,
            ell,
            precision,
            method,
        } => {
            let (_, c) = load_code(code)?;
            let level = Level::make(c.ring().p, *ell)?;
            let series = match method {
                LatticeMethod::Cwe => theta_via_cwe(&c, &level, *precision)?,
                LatticeMethod::Enum => theta_via_enum(&c, &level, *precision)?,
            };
            println!("{}", series.to_json());
        }
        Cmd::LevelAgreement {
            code,
            ell1,
            ell2,
            precision,
        } => {
            let (_, c) = load_code(code)?;
            let first = level_agreement_prefix(&c, *ell1, *ell2, *precision)?;
            let bound = (ell1.min(ell2) + 1) / 4;
            println!("{}", json!({ "first_difference": first, "bound": bound }));
        }
        Cmd::Nullity { p, n, ell } => {
            let report = nullity_experiment(*p, *n, *ell)?;
            println!("{}", report.to_json());
        }
        Cmd::Sweep { p, n, ell_max, out } => {
            check_prime(*p)?;
            let mut csv = String::from("p,n,ell,s,rows_used,rank,nullity,b_estimate\n");
            for &ni in n {
                for ell in admissible_levels(*p, *ell_max) {
                    if cli.verbose {
                        eprintln!("computing p={p} n={ni} ell={ell}");
                    }
                    let r = nullity_experiment(*p, ni, ell)?;
                    for flag in conjecture_flags(&r) {
                        eprintln!("conjecture violation: {flag}");
                    }
                    csv.push_str(&format!(
                        "{},{},{},{},{},{},{},{}\n",
                        r.p, r.n, r.ell, r.s, r.rows_used, r.rank, r.nullity, r.b_estimate
                    ));
                }
            }
            if out == "-" {
                let mut stdout = std::io::stdout();
                stdout.write_all(csv.as_bytes()).expect("write to stdout");
            } else {
                fs::write(out, csv)
                    .map_err(|e| Error::InvalidCode(format!("cannot write output: {e}")))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
