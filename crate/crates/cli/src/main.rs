mod commands;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sympvoa::weylreal::Sector;

/// Exact checks for the symplectic affine vertex algebras at level `n - 3/2`.
#[derive(Debug, Parser)]
#[command(name = "sympvoa", version)]
pub struct RunConfig {
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    #[value(name = "S1")]
    S1,
    #[value(name = "S2")]
    S2,
    #[value(name = "P+1")]
    PPlus1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Source {
    ClosedForm,
    Uea,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots of C_l and, with --bound, the positive real affine coroots.
    Roots {
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// List a weight family.
    Weights {
        #[arg(long)]
        set: Family,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Bounded admissibility check of one weight or of a whole family.
    Admissible {
        /// Comma-separated Lambda coefficients, e.g. "-1/2,0,0".
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "set",
            required_unless_present = "set"
        )]
        weight: Option<String>,
        #[arg(long, value_parser = ["S1", "S2"])]
        set: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        /// Largest delta multiplicity examined; defaults to 2n + 2.
        #[arg(long)]
        bound: Option<u32>,
    },
    /// The polynomials p1, p2, p3 computed in the enveloping algebra.
    Polys {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        check_closed_form: bool,
    },
    /// Common zeros T1, T2 of p1, p2, p3.
    Zeros {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Source::ClosedForm)]
        source: Source,
        #[arg(long)]
        check_recursion: bool,
    },
    /// Highest weights of the modules at level n - 3/2.
    Classify {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        /// Fail unless the pair-constrained sets equal the recursive families.
        #[arg(long)]
        cross_check: bool,
        /// File of candidate weights, one per line as comma-separated Lambda
        /// coefficients; each gets a Verma-image flag.
        #[arg(long)]
        candidates: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Raising operators applied to the singular vector v_n.
    Singular {
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Added to the level n - 3/2; any nonzero shift should break singularity.
        #[arg(long, allow_hyphen_values = true)]
        perturb_level: Option<String>,
    },
    /// Free-field check that the composite field annihilates a Fock sector.
    Fock {
        #[arg(long)]
        sector: Sector,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        /// Inclusive mode range, e.g. -4..4.
        #[arg(long, default_value = "-4..4", allow_hyphen_values = true, value_parser = parse_modes)]
        modes: (i64, i64),
        /// Flip the relative sign; the check is then expected to fail.
        #[arg(long)]
        sign_flip: bool,
    },
}

fn parse_modes(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let a: i64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound {a:?}"))?;
    let b: i64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound {b:?}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(raw) = std::env::var("SYMPVOA_THREADS") {
        let n: usize = raw.parse().map_err(|_| {
            anyhow::anyhow!("SYMPVOA_THREADS must be a positive integer, got {raw:?}")
        })?;
        if n == 0 {
            anyhow::bail!("SYMPVOA_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn emit(config: &RunConfig, text: &str) -> anyhow::Result<()> {
    match &config.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let result = init_threads().and_then(|()| commands::dispatch(&config.command));
    match result {
        Ok(report) => {
            if let Err(e) = emit(&config, &report.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                if let Some(w) = &report.witness {
                    eprintln!("verification failed: {w}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
