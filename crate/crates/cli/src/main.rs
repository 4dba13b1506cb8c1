#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

mod commands;
mod files;
mod outcome;

use outcome::Status;

#[derive(Parser, Debug)]
#[command(
    name = "homqg",
    version,
    about = "Quasi-triangular Hom-bialgebras: construct, twist and verify"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Residual tolerance (default 1e-9, or the value stored in the file)
    #[arg(long, global = true, value_parser = positive_f64)]
    pub tolerance: Option<f64>,

    /// Truncation order of h-series (default 8)
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub order: Option<u32>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Output file (structure, operator or report, depending on the command)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Skip re-verification of constructed outputs
    #[arg(long, global = true)]
    pub no_verify: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify every axiom of one or more structure files
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Write a structure or operator from the built-in families
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Yau-twist a classical structure along an alpha matrix, and/or R-twist it
    Twist {
        #[arg(long)]
        structure: PathBuf,
        /// Matrix file with `alpha[row][col]`, column j the image of e_j
        #[arg(long)]
        alpha: Option<PathBuf>,
        /// Replace R by (alpha^n ⊗ alpha^n)(R)
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        power: Option<u32>,
    },
    /// Build and check a Hom-Yang-Baxter operator
    Hybe(HybeArgs),
    /// Check the braid relations of an operator file written by `hybe --emit-matrix`
    Braid {
        #[arg(long)]
        matrix: PathBuf,
        /// Alpha matrix file; defaults to the operator file's `alpha`, then the identity
        #[arg(long)]
        alpha: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        strands: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogCmd {
    /// Anyonic quantum group on Z/n, twisted by g -> g^k
    Anyon {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Also R-twist by alpha^t (needs gcd(k, n) = 1)
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        t: Option<u32>,
    },
    /// Group bialgebra kG with an R table read from a file
    Kg {
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<usize>,
        #[arg(long)]
        r: PathBuf,
    },
    /// Function bialgebra k(G) with R given by a bicharacter
    Kfun {
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Bicharacter::Exp)]
        bicharacter: Bicharacter,
    },
    /// The U_h(sl2) R operator on V_n ⊗ V_m
    Uhsl2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Parameter c of the inner automorphism, e.g. 0.3 or 1+0.5i
        #[arg(long, default_value = "0")]
        c: Complex64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bicharacter {
    Exp,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct HybeArgs {
    #[command(subcommand)]
    pub model: Option<HybeModel>,

    /// Quasi-triangular structure file
    #[arg(long)]
    pub structure: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = ModuleKind::Regular)]
    pub module: ModuleKind,

    #[command(flatten)]
    pub shared: HybeShared,
}

#[derive(Args, Debug, Clone)]
pub struct HybeShared {
    /// Also check braid relations on this many strands
    #[arg(long)]
    pub strands: Option<usize>,

    /// Write the B operator (with its alpha) to this file
    #[arg(long)]
    pub emit_matrix: Option<PathBuf>,

    /// Build B even if its hypotheses fail; the report is then marked `unverified-hypotheses`
    #[arg(long)]
    pub force: bool,
}

#[derive(Subcommand, Debug)]
pub enum HybeModel {
    /// B_alpha on the twisted module V_n over U_h(sl2)
    Uhsl2 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0")]
        c: Complex64,
        #[command(flatten)]
        shared: HybeShared,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Regular,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err("tolerance must be positive and finite".into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                Status::Input.code()
            } else {
                0
            });
        }
    };
    match commands::run(&cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.status.code())
        }
    }
}
