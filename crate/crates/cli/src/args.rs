//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cubic_orders_core::Method;

use crate::table::Format;

#[derive(Debug, Parser)]
#[command(
    name = "cubic-orders",
    version,
    about = "Orders of prime-power index in pure cubic fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of orders of index p^n, per n and cumulative.
    Count(CountArgs),
    /// Every order of index p^n with its index-form coefficients.
    Enumerate(EnumerateArgs),
    /// Bounded monogenicity census with Thue-Mahler linkage.
    Monogenic(MonogenicArgs),
    /// Primitive solutions of k U^3 - h V^3 = +-p^N in a box.
    ThueMahler(ThueMahlerArgs),
    /// Cross-checks the classifiers, the fast enumeration and the count over a grid.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Cube-free radicand, m^2 != 1 (mod 9).
    #[arg(long, allow_negative_numbers = true)]
    pub m: i64,
    /// Prime >= 5.
    #[arg(long)]
    pub p: u64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Largest exponent.
    #[arg(long, visible_alias = "n-max")]
    pub n: u32,
    /// Also count by scanning every lattice.
    #[arg(long)]
    pub verify_scan: bool,
    /// Classifier used by --verify-scan.
    #[arg(long, default_value = "oracle", value_parser = parse_method)]
    pub method: Method,
    /// Largest n for which a full scan is allowed.
    #[arg(long, default_value_t = 6)]
    pub scan_max: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value = "fast", value_parser = parse_method)]
    pub method: Method,
    #[arg(long, default_value_t = 6)]
    pub scan_max: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MonogenicArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, visible_alias = "n")]
    pub n_max: u32,
    /// Index-form search box |x|, |y| <= bound.
    #[arg(long, default_value_t = 50)]
    pub search_bound: u32,
    /// Thue-Mahler box |U|, |V| <= height.
    #[arg(long, default_value_t = 200)]
    pub tm_height: u64,
    /// Largest N in the Thue-Mahler box.
    #[arg(long, default_value_t = 12)]
    pub tm_nmax: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ThueMahlerArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long, default_value_t = 200)]
    pub tm_height: u64,
    #[arg(long, default_value_t = 12)]
    pub tm_nmax: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub const DEFAULT_GRID_M: [i64; 7] = [2, 3, 5, 6, 7, 11, 12];
pub const DEFAULT_GRID_P: [u64; 3] = [5, 7, 11];

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated radicands; an empty list gives an empty grid.
    #[arg(long, value_delimiter = ',', num_args = 0.., allow_negative_numbers = true,
          default_values_t = DEFAULT_GRID_M)]
    pub m: Vec<i64>,
    #[arg(long, value_delimiter = ',', num_args = 0.., default_values_t = DEFAULT_GRID_P)]
    pub p: Vec<u64>,
    #[arg(long, default_value_t = 5)]
    pub n_max: u32,
    #[arg(long, default_value_t = 6)]
    pub scan_max: u32,
    /// Test hook: swaps in a classifier that misjudges one lattice per level.
    #[arg(long, hide = true)]
    pub corrupt_classifier: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|_| {
        format!("unknown method {s:?}; expected oracle, valuation, closed-form or fast")
    })
}
