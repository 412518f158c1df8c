mod commands;
mod input;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cfree::verify::{Perturbation, Theorem};
use cfree::Rational;

use input::{rat_list, RatList};

/// Exact two-state free probability: partitions, moments, cumulants,
/// Jacobi parameters and identity checks.
#[derive(Parser, Debug)]
#[command(name = "cfree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Non-crossing partitions of {1..n} with inner/outer block labels.
    Nc(NcArgs),
    /// Moment table of a law pair.
    Moments(MomentsArgs),
    /// Free and two-state cumulants from moment sequences.
    Cumulants(CumulantsArgs),
    /// Moments to Jacobi parameters, or back.
    Jacobi(JacobiArgs),
    /// Free and c-free convolutions and convolution powers.
    Convolve(ConvolveArgs),
    /// Check an identity at a truncation order.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Copy)]
#[group(multiple = false)]
struct Format {
    /// Machine-readable JSON.
    #[arg(long)]
    json: bool,
    /// Comma-separated rows.
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct NcArgs {
    #[arg(long)]
    n: usize,
    /// Print only the number of partitions.
    #[arg(long)]
    count_only: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct LawArg {
    /// Catalog name, `normal:a,b`, or a JSON file (law pair, cumulants or Jacobi data).
    #[arg(long, value_name = "LAW")]
    law: Option<String>,
    /// Two-state normal law parameter a.
    #[arg(long, requires = "b", conflicts_with = "law", allow_hyphen_values = true)]
    a: Option<Rational>,
    /// Two-state normal law parameter b.
    #[arg(long, requires = "a", conflicts_with = "law", allow_hyphen_values = true)]
    b: Option<Rational>,
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[command(flatten)]
    law: LawArg,
    #[arg(long)]
    order: Option<usize>,
    #[command(flatten)]
    format: Format,
}

#[derive(Args, Debug)]
struct CumulantsArgs {
    /// Moments under φ, starting at m_0 = 1.
    #[arg(long, value_parser = rat_list, allow_hyphen_values = true)]
    phi: Option<RatList>,
    /// Moments under ψ, starting at m_0 = 1.
    #[arg(long, value_parser = rat_list, allow_hyphen_values = true)]
    psi: Option<RatList>,
    /// JSON file with `phi` and `psi` moment lists.
    #[arg(long, conflicts_with_all = ["phi", "psi"])]
    moments_file: Option<PathBuf>,
    #[command(flatten)]
    format: Format,
}

#[derive(Args, Debug)]
struct JacobiArgs {
    /// Moments m_0 = 1, m_1, ... to invert.
    #[arg(long, value_parser = rat_list, allow_hyphen_values = true, conflicts_with_all = ["alpha", "beta", "jacobi_file"])]
    moments: Option<RatList>,
    #[arg(long, value_parser = rat_list, allow_hyphen_values = true, requires = "beta")]
    alpha: Option<RatList>,
    #[arg(long, value_parser = rat_list, allow_hyphen_values = true, requires = "alpha")]
    beta: Option<RatList>,
    /// JSON file with `alpha` and `beta`.
    #[arg(long, conflicts_with_all = ["alpha", "beta"])]
    jacobi_file: Option<PathBuf>,
    #[arg(long)]
    order: Option<usize>,
    #[command(flatten)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ConvolveOp {
    /// ν1 ⊞ ν2 of two single measures.
    Free,
    /// (μ1, ν1) ⊞_c (μ2, ν2).
    Cfree,
    /// The t-th c-free convolution power.
    Power,
}

#[derive(Args, Debug)]
struct ConvolveArgs {
    #[arg(long, value_enum, default_value = "cfree")]
    op: ConvolveOp,
    /// First law: catalog name, `normal:a,b`, or a JSON file.
    #[arg(long, value_name = "LAW")]
    left: String,
    /// Second law, for `free` and `cfree`.
    #[arg(long, value_name = "LAW")]
    right: Option<String>,
    /// Exponent for `power`.
    #[arg(long)]
    t: Option<Rational>,
    #[arg(long)]
    order: Option<usize>,
    /// Also print the moment table of the result.
    #[arg(long)]
    moments: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Theorem id; may instead come from the `theorem` key of `--params`.
    #[arg(long, required_unless_present = "params")]
    theorem: Option<Theorem>,
    /// JSON file with parameters and optional `law`, `variable`, `jacobi`, `perturbation`.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    a_tilde: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    b_tilde: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<Rational>,
    /// Law pair or cumulant spec: catalog name, `normal:a,b`, or a JSON file.
    #[arg(long, value_name = "LAW")]
    law: Option<String>,
    /// JSON cumulant spec with `r` and `R`.
    #[arg(long)]
    variable_file: Option<PathBuf>,
    #[arg(long, value_parser = rat_list, allow_hyphen_values = true, requires = "jacobi_beta")]
    jacobi_alpha: Option<RatList>,
    #[arg(long, value_parser = rat_list, allow_hyphen_values = true, requires = "jacobi_alpha")]
    jacobi_beta: Option<RatList>,
    /// Corrupted input, e.g. `r3=1/5`, `Y.R4+=1`, `beta1=2`.
    #[arg(long, allow_hyphen_values = true)]
    perturb: Option<Perturbation>,
    /// Truncation order; defaults to $CFREE_ORDER, then 12.
    #[arg(long)]
    order: Option<usize>,
    #[command(flatten)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Nc(a) => commands::nc(&a),
        Command::Moments(a) => commands::moments(&a),
        Command::Cumulants(a) => commands::cumulants(&a),
        Command::Jacobi(a) => commands::jacobi(&a),
        Command::Convolve(a) => commands::convolve(&a),
        Command::Verify(a) => verify::run(&a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
