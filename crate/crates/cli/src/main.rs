mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_NON_UNIQUE: u8 = 3;
pub const EXIT_INADMISSIBLE: u8 = 4;
pub const EXIT_USAGE: u8 = 64;

/// Default output directory for verbs that write files.
pub const OUT_DIR_VAR: &str = "G2FIB_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "g2fib", version, about = "Genus-2 singular fibers: dual graphs, indices, germs and holonomy")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FiberArg {
    #[value(name = "0")]
    Zero,
    Inf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate fiber graphs and write one file per model plus a manifest.
    Catalog {
        /// One of i, ii, iii, iv, v or all.
        #[arg(long, default_value = "all")]
        case: String,
        #[arg(long, default_value_t = 64)]
        depth: usize,
        #[arg(long = "chain-bound", default_value_t = 16)]
        chain_bound: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the fiber conditions on a fiber-graph file.
    Validate { file: PathBuf },
    /// Camacho-Sad indices and eigenpairs at every node.
    Indices {
        file: PathBuf,
        /// Solve from the shape alone and ignore the stored multiplicities.
        #[arg(long = "no-mults")]
        no_mults: bool,
    },
    /// Generation and terminality of a first-integral germ.
    ClassifyGerm { germ: String },
    /// Resolve the base point of a pencil `N / D`.
    Resolve {
        /// Pencil germ such as 'y^4 / x^10'; omit with --global.
        pencil: Option<String>,
        /// Resolve the global pencil x^5 y^4 (x - y) / z^10 instead.
        #[arg(long)]
        global: bool,
        #[arg(long, value_enum, default_value_t = FiberArg::Zero)]
        fiber: FiberArg,
        /// Also write the fiber as DOT.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Holonomy orders, elliptic invariants and monodromy order.
    Holonomy { file: PathBuf },
    /// Isotriviality test on the multiplicities.
    IsotrivialCheck { file: PathBuf },
    /// Write a fiber graph as DOT.
    ExportDot {
        file: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(commands::dispatch(&cli.command, cli.format))
}
