use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Obstructions in the rational homology cobordism group, in exact arithmetic.
#[derive(Debug, Parser)]
#[command(name = "qcob", version)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for per-metabolizer and per-manifold work.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for `--form random`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// rho-invariants of n-surgery on the unknot.
    RhoSurgery {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// H_1, linking form and refinement from a symmetric integer matrix.
    AnalyzePresentation {
        #[arg(long)]
        file: PathBuf,
    },
    /// All metabolizers of a linking form.
    EnumerateMetabolizers {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Check the vanishing statement on every metabolizer of a form on (Z/p^n)^(2m).
    VerifyProposition {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Infinite order of odd n-surgery on a knot.
    CheckSurgery {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Independence of a family of manifolds; with --p, the primary-part test
    /// for the first member against the sum of the rest.
    CheckIndependence {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        main: MainArgs,
    },
    /// Independence of a family of knots; with --p, the primary-part test for
    /// the first knot against the second.
    CheckKnots {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        main: MainArgs,
    },
    /// Check d-tables against the properties of correction terms.
    ValidateDtable {
        #[arg(long)]
        file: PathBuf,
        /// Surgery coefficient for a bare table; S^3 when absent.
        #[arg(long, allow_negative_numbers = true)]
        n: Option<i64>,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct FormArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Half the number of summands.
    #[arg(long)]
    pub m: Option<u32>,
    /// `sum<k>-unit<u>`, `diag:<u1>,<u2>,...` or `random`.
    #[arg(long, conflicts_with = "file")]
    pub form: Option<String>,
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, clap::Args)]
pub struct MainArgs {
    #[arg(long, requires_all = ["n", "m"])]
    pub p: Option<u64>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<i64>,
}
