//! Command-line front end for the cliffdiv workbench.
//!
//! Every command prints one JSON report (or a text rendering of it) and
//! exits 0 on success, 1 on a mathematical failure and 2 on bad input.

mod commands;
mod envelope;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cliffdiv::division::DivisionKind;
use cliffdiv::verify::Suite;

/// Environment variable holding the worker count for batch commands.
pub const WORKERS_VAR: &str = "CLIFFDIV_WORKERS";

#[derive(Debug, Parser)]
#[command(
    name = "cliffdiv",
    version,
    about = "Division of Clifford semigroups into Ward quasigroup unions and back"
)]
struct Cli {
    /// Report rendering on stdout.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Also write the JSON report to this file.
    #[arg(long, value_name = "FILE", global = true)]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a table has a structural property.
    Check {
        #[arg(long, value_enum)]
        kind: CheckKind,
        file: PathBuf,
    },
    /// Divide a semilattice of groups into a union of quasigroups.
    Divide(DivisionArgs),
    /// Rebuild the semilattice of groups from a divided table.
    Reconstruct(DivisionArgs),
    /// Divide and reconstruct, comparing tables exactly.
    Roundtrip {
        #[arg(long, value_enum)]
        kind: Kind,
        file: PathBuf,
    },
    /// Decide membership in SLWQ, SLWDQ or SLDWQ and find the decoration.
    Membership(DivisionArgs),
    /// Build a Clifford semigroup from a strong semilattice spec.
    Build {
        spec: PathBuf,
        /// Write the built table here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Split a semilattice of groups into groups and linking maps.
    Decompose {
        file: PathBuf,
        /// Write the recovered spec here.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Check named identities on a table.
    Identity(IdentityArgs),
    /// Enumerate small structures up to isomorphism.
    Enumerate(EnumerateArgs),
    /// Run the theorem checks over an enumerated corpus.
    VerifyTheorems(VerifyArgs),
    /// Bounded search for double-Ward unions that satisfy the double
    /// division identities without the class idempotents forming Y.
    #[command(name = "search-question1")]
    SearchQuestion1 {
        #[arg(long, default_value_t = 6)]
        max_total: usize,
        #[arg(long, default_value_t = 6)]
        max_classes: usize,
        /// Counterexample tables kept in the report.
        #[arg(long, default_value_t = 10)]
        max_examples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Ward,
    WardDual,
    DoubleWard,
    Group,
    Quasigroup,
    Semilattice,
    Associative,
    Slg,
    Medial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Right,
    Left,
    Double,
}

impl From<Kind> for DivisionKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Right => DivisionKind::Right,
            Kind::Left => DivisionKind::Left,
            Kind::Double => DivisionKind::Double,
        }
    }
}

#[derive(Debug, Args)]
pub struct DivisionArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    pub file: PathBuf,
    /// Write the resulting decorated table here.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InverseSource {
    /// Take inverses from the decoration: semilattice of groups first, then
    /// whichever division the classes fit.
    Auto,
    Slg,
    Right,
    Left,
    Double,
    /// The table's own two-sided inverses.
    Groupoid,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    /// Identity name; repeat for several. A chain name selects all parts.
    #[arg(long = "name", required = true)]
    pub names: Vec<String>,
    /// Identity file to use instead of the bundled corpus.
    #[arg(long, value_name = "FILE")]
    pub identities: Option<PathBuf>,
    /// Bind a constant, as NAME=VALUE.
    #[arg(long = "bind", value_name = "NAME=VALUE")]
    pub binds: Vec<String>,
    /// Search for the least value of this constant that makes each identity hold.
    #[arg(long, value_name = "NAME")]
    pub exists: Option<String>,
    #[arg(long, value_enum, default_value_t = InverseSource::Auto)]
    pub inverse: InverseSource,
    pub file: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Groups,
    Semilattices,
    Ward,
    Slgs,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long, value_enum)]
    pub what: What,
    /// Order for groups, semilattices and Ward quasigroups.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 6)]
    pub max_total: usize,
    #[arg(long, default_value_t = 4)]
    pub max_group: usize,
    #[arg(long, default_value_t = 3)]
    pub max_classes: usize,
    /// Write one table file per item plus a manifest into this directory.
    #[arg(long, value_name = "DIR")]
    pub export: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 10)]
    pub max_total: usize,
    /// Largest group order inside an enumerated semilattice of groups.
    #[arg(long, default_value_t = 4)]
    pub max_group: usize,
    #[arg(long, default_value_t = 3)]
    pub max_classes: usize,
    /// Largest order of the stand-alone groups added to the corpus.
    #[arg(long, default_value_t = 8)]
    pub group_order: usize,
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    pub suite: Suite,
    /// Write the corpus, the full report and a manifest into this directory.
    #[arg(long, value_name = "DIR")]
    pub export: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let env = envelope::run(&cli.command, args);

    let json = cliffdiv::format::to_json(&env);
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("cannot write report {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    match cli.format {
        Format::Json => print!("{json}"),
        Format::Text => print!("{}", envelope::render_text(&env)),
    }
    ExitCode::from(env.exit_code)
}
