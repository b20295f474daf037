use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wittclasses::coeff::FieldTag;
use wittclasses::commands::{split_check_text, verify, Session, Space, Theory};
use wittclasses::polyring::DEFAULT_MAX_DEGREE;
use wittclasses::verify::{VerifyOptions, DEFAULT_SEED};

/// Characteristic classes in Chow-Witt rings of classifying spaces.
#[derive(Parser)]
#[command(name = "wittclasses", version)]
struct Cli {
    /// bsl:<n>, bsp:<n>, sl2xn:<n>, hp:<m> or pn:<d>
    #[arg(long, global = true, default_value = "bsl:3")]
    space: String,
    /// R, C, Fq1 or Fq3
    #[arg(long, global = true, default_value = "R")]
    field: String,
    /// chow, ch2, icoh or cw (default depends on the command)
    #[arg(long, global = true)]
    theory: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate and multiply expressions
    Mul { exprs: Vec<String> },
    /// Apply Sq^2 to a mod-2 class
    Sq2 { expr: String },
    /// Bockstein of a mod-2 class
    Beta { expr: String },
    /// Reduce an I-cohomology class mod 2
    Rho { expr: String },
    /// Restrict along BSL_{n-1} -> BSL_n
    Restrict { expr: String },
    /// List the characteristic classes of the space
    Classes,
    /// Per-degree group structure as TSV
    Poincare {
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
    },
    /// Run a self-check suite: relations, cube, sq2, oracle, symplectic or all
    Verify {
        suite: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Evaluate the odd-rank splitting criterion on a ring/bundle file
    SplitCheck { file: std::path::PathBuf },
}

fn degree_cap() -> Result<u32, String> {
    match std::env::var("WITTCLASSES_MAX_DEGREE") {
        Ok(v) => v.trim().parse().map_err(|_| format!("WITTCLASSES_MAX_DEGREE must be a non-negative integer, got '{v}'")),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

fn run(cli: Cli) -> Result<(String, bool), String> {
    let cap = degree_cap()?;
    let field: FieldTag = cli.field.parse().map_err(|e| format!("{e}"))?;
    let default_theory = match cli.command {
        Command::Sq2 { .. } | Command::Beta { .. } => "ch2",
        Command::Rho { .. } => "icoh",
        Command::Mul { .. } | Command::Restrict { .. } | Command::Classes | Command::Poincare { .. } => "cw",
        Command::Verify { .. } | Command::SplitCheck { .. } => "cw",
    };
    let session = || -> Result<Session, String> {
        let space: Space = cli.space.parse().map_err(|e| format!("{e}"))?;
        let theory: Theory = cli.theory.as_deref().unwrap_or(default_theory).parse().map_err(|e| format!("{e}"))?;
        Ok(Session { space, field, theory, cap })
    };
    let ok = |r: wittclasses::Result<String>| r.map(|s| (s, true)).map_err(|e| e.to_string());
    match &cli.command {
        Command::Mul { exprs } => ok(session()?.mul(exprs)),
        Command::Sq2 { expr } => ok(session()?.sq2(expr)),
        Command::Beta { expr } => ok(session()?.beta(expr)),
        Command::Rho { expr } => ok(session()?.rho(expr)),
        Command::Restrict { expr } => ok(session()?.restrict(expr)),
        Command::Classes => ok(session()?.classes()),
        Command::Poincare { max_degree } => ok(session()?.poincare(*max_degree)),
        Command::Verify { suite, n, max_degree, samples, seed } => {
            let opts = VerifyOptions { n: *n, field, max_degree: *max_degree, samples: *samples, seed: *seed };
            verify(suite, &opts).map_err(|e| e.to_string())
        }
        Command::SplitCheck { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            ok(split_check_text(&text, cap))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
