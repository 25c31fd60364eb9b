//! `gauge`: validate, verify, enumerate and generate finite gauge models.

mod commands;
mod params;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gauge_core::verify::{Theorem, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "gauge", version, about = "Finite principal bundles, connections and curvature")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every axiom of a groupoid, bundle, model or form document.
    Validate {
        path: PathBuf,
        /// Emit a JSON report instead of text.
        #[arg(long)]
        report: bool,
        /// Model to resolve a form document against.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Check one of the correspondences on a model.
    Verify {
        path: PathBuf,
        #[arg(long, value_parser = parse_theorem)]
        theorem: Theorem,
        #[arg(long)]
        report: bool,
        /// Seed for the random samples used on large models.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Print the curvature of a named connection.
    Curvature {
        path: PathBuf,
        #[arg(long)]
        connection: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a model document.
    Generate {
        #[arg(long, value_enum)]
        model: ModelKind,
        /// Kn, Pn, Cn, Dn, or an explicit `a,b,c;a-b,b-c`.
        #[arg(long)]
        base: String,
        /// Zn or Sn.
        #[arg(long)]
        group: String,
        /// For twisted models: `flat`, `full`, or `a-b=g|h,...`.
        #[arg(long)]
        twist: Option<String>,
        #[arg(long, default_value_t = gauge_core::neighbourhood::DEFAULT_MAX_LIFT)]
        max_lift: usize,
        /// `NAME` for the flat connection, or `NAME:a-b=g,...` to shift edges.
        #[arg(long = "connection")]
        connections: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List simplices, connections, or flat connections of a model.
    Enumerate {
        path: PathBuf,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, value_enum, default_value_t = Space::Base)]
        space: Space,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, env = "GAUGE_CEILING", default_value_t = gauge_core::connection::DEFAULT_CEILING)]
        ceiling: u128,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Trivial,
    Twisted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Simplices,
    Connections,
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Base,
    Total,
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Theorem::ALL.iter().map(|t| t.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Validate { path, report, model } => commands::validate(&path, model.as_deref(), report),
        Command::Verify { path, theorem, report, seed } => commands::verify(&path, theorem, report, seed),
        Command::Curvature { path, connection, format, output } => {
            commands::curvature(&path, &connection, format, output.as_deref())
        }
        Command::Generate { model, base, group, twist, max_lift, connections, output } => {
            commands::generate(model, &base, &group, twist.as_deref(), max_lift, &connections, output.as_deref())
        }
        Command::Enumerate { path, what, space, degree, ceiling } => {
            commands::enumerate(&path, what, space, degree, ceiling)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
