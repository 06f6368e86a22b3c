mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ppart_core::extensions::DEFAULT_EXTENSION_CAP;
use ppart_core::presentation::{ExportFormat, IdealKind};
use ppart_core::{Flavor, Grading};

#[derive(Parser)]
#[command(
    name = "ppart",
    version,
    about = "P-partitions, linear extensions and presentations of finite posets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Poset file, or `-` for standard input.
    pub poset: PathBuf,
    /// Truncation order for series.
    #[arg(long, default_value_t = 12)]
    pub trunc: u32,
    /// Largest number of linear extensions to enumerate.
    #[arg(long, default_value_t = DEFAULT_EXTENSION_CAP)]
    pub cap: u64,
    /// Worker threads (defaults to the number of cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Add wall-clock timing to the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// The generating function itself.
    Series,
    /// The numerator over `Π(1 - t x^J)`.
    Numerator,
    /// The sum over linear extensions.
    RationalSum,
    /// The closed product for forests with duplications.
    Product,
    /// `1 / H(-t, x)` and its nonnegativity.
    Koszul,
    /// The series of the initial ideal quotient.
    Initial,
}

#[derive(Subcommand)]
enum Command {
    /// Ideals, connected ideals, nontrivially intersecting pairs and δ.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Count linear extensions and their major-index polynomial.
    Extensions {
        #[command(flatten)]
        common: Common,
        /// List every extension with its statistics.
        #[arg(long)]
        list: bool,
    },
    /// Decompose into a forest with duplications, or certify that none exists.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Also search for the forbidden induced subposets.
        #[arg(long)]
        forbidden: bool,
        /// Randomise the choices made during decomposition.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// The q-hook formula for forests with duplications.
    Hook {
        #[command(flatten)]
        common: Common,
        /// Only the q = 1 count, valid for any labelling.
        #[arg(long)]
        count: bool,
    },
    /// Truncated Hilbert series and related generating functions.
    Hilbert {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "weak")]
        flavor: Flavor,
        #[arg(long, default_value = "q")]
        grading: Grading,
        #[arg(long, value_enum, default_value = "series")]
        form: Form,
    },
    /// Generators of the toric, graded or initial ideal.
    Presentation {
        #[command(flatten)]
        common: Common,
        /// Emit the ring and ideal as `text` or `m2` instead of JSON.
        #[arg(long)]
        format: Option<ExportFormat>,
        #[arg(long, default_value = "toric")]
        ideal: IdealKind,
        /// Write the exported ring to this file.
        #[arg(long, requires = "format")]
        out: Option<PathBuf>,
    },
    /// Facets of the connected-ideal complex and the P-forests.
    Complex {
        #[command(flatten)]
        common: Common,
        /// Largest number of connected ideals to build the complex on.
        #[arg(long, default_value_t = ppart_core::complexes::DEFAULT_VERTEX_CAP)]
        vertex_cap: usize,
    },
    /// Run the cross-module identity checks on one poset.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                report::EXIT_USAGE
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (name, common) = match &cli.command {
        Command::Analyze { common } => ("analyze", common),
        Command::Extensions { common, .. } => ("extensions", common),
        Command::Classify { common, .. } => ("classify", common),
        Command::Hook { common, .. } => ("hook", common),
        Command::Hilbert { common, .. } => ("hilbert", common),
        Command::Presentation { common, .. } => ("presentation", common),
        Command::Complex { common, .. } => ("complex", common),
        Command::Selftest { common } => ("selftest", common),
    };
    if let Some(threads) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("ppart: cannot start thread pool: {e}");
            return ExitCode::from(report::EXIT_USAGE);
        }
    }
    let code = report::run(name, common, |input| match &cli.command {
        Command::Analyze { .. } => commands::analyze(input),
        Command::Extensions { list, .. } => commands::extensions(input, common, *list),
        Command::Classify {
            forbidden, seed, ..
        } => commands::classify(input, *forbidden, *seed),
        Command::Hook { count, .. } => commands::hook(input, *count),
        Command::Hilbert {
            flavor,
            grading,
            form,
            ..
        } => commands::hilbert(input, common, *flavor, *grading, *form),
        Command::Presentation {
            format, ideal, out, ..
        } => commands::presentation(input, *format, *ideal, out.as_deref()),
        Command::Complex { vertex_cap, .. } => commands::complex(input, common, *vertex_cap),
        Command::Selftest { .. } => commands::selftest(input, common),
    });
    ExitCode::from(code)
}
