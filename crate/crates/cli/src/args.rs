use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "carlitz", version, about = "Carlitz module arithmetic and identity verification over F_q(T)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Field size, an odd prime power.
    #[arg(long = "q", global = true, default_value_t = 3)]
    pub q: u64,

    /// Irreducible modulus for q = p^e, e > 1: coefficients low to high, e.g. "1,0,1" for x^2 + 1.
    #[arg(long, global = true)]
    pub modulus: Option<String>,

    /// Working precision N in U-digits (values are known down to U^-N).
    #[arg(long, global = true, default_value_t = 60)]
    pub prec: i64,

    /// Worker threads for monic enumeration.
    #[arg(long, global = true, env = "CARLITZ_THREADS")]
    pub threads: Option<usize>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodMethod {
    Product,
    Kernel,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bernoulli-Carlitz numbers BC_0..=BC_max.
    Bc {
        /// Largest index computed.
        #[arg(long, default_value_t = 8)]
        max: u64,
    },
    /// Goss zeta value at a positive integer.
    Zeta {
        #[arg(long)]
        m: u32,
        /// Largest monic degree summed; chosen from the precision when absent.
        #[arg(long)]
        dmax: Option<u32>,
    },
    /// The period constant w = pi~^(q-1).
    Period {
        #[arg(long, value_enum, default_value_t = PeriodMethod::Both)]
        method: PeriodMethod,
    },
    /// Identity checks.
    #[command(subcommand)]
    Verify(Verify),
    /// Reduced-precision run of the property checks.
    Selftest,
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// zeta((q-1)i) = w^i BC/Gamma.
    EulerCarlitz {
        #[arg(long)]
        i: u32,
    },
    /// The function-field Ramanujan identity.
    Ramanujan {
        /// Positive integer index of the identity.
        #[arg(long)]
        j: i64,
        /// Largest monic degree in the lattice sums; chosen from the precision when absent.
        #[arg(long)]
        dmax: Option<u32>,
    },
    /// Euler's zeta(2m) and Ramanujan's zeta(2m+1) formulas in floating point.
    Classical {
        #[arg(long)]
        m: u32,
        /// Check Ramanujan's formula at this alpha only (beta = pi^2/alpha).
        #[arg(long)]
        alpha: Option<f64>,
    },
}
