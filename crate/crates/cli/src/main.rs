//! `tautrel`: Frobenius charts, R-matrices, reconstructed classes and
//! tautological relations from the command line.
//!
//! Exit codes: 0 success, 1 computation error (including failed
//! verification), 2 input error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Compute(String),
}

impl From<tautrel::Error> for CliError {
    fn from(e: tautrel::Error) -> Self {
        use tautrel::Error as E;
        match e {
            E::Parse(_) | E::Input(_) | E::Chart(_) | E::Dimension(_) => CliError::Input(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tautrel", version, about = "Tautological relations from semisimple Frobenius manifolds")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Overrides for the config file.
#[derive(Args, Debug)]
struct Common {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Chart file, or builtin:NAME.
    #[arg(long, global = true)]
    chart: Option<String>,
    /// Series truncation order in the local parameter.
    #[arg(long, global = true)]
    precision: Option<String>,
    #[arg(long, global = true)]
    z_order: Option<usize>,
    /// Largest codimension.
    #[arg(long, global = true)]
    codim: Option<u32>,
    /// A (g,n) cell, repeatable.
    #[arg(long = "gn", global = true, value_parser = config::parse_cell)]
    cells: Vec<(u32, usize)>,
    /// Use every stable cell with 3g-3+n up to this bound.
    #[arg(long, global = true)]
    max_dim: Option<u32>,
    /// Probe field for the idempotents, comma separated.
    #[arg(long, global = true)]
    probe: Option<String>,
    /// Write the artifact here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Idempotents, canonical coordinates, norms and local structure.
    Frame,
    /// Solve the flatness equation, or the two-dimensional family with --family.
    Rmatrix {
        /// `f` in the potential t0^2 t/2 + F(t) with F''' = f.
        #[arg(long)]
        family: Option<String>,
    },
    /// Reconstruct Omega_{g,n} on flat insertions.
    Reconstruct {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
        /// Flat insertion vector, repeat once per leg.
        #[arg(long = "input")]
        inputs: Vec<String>,
    },
    /// Extract (and by default close) the relations of a chart.
    Relations {
        #[arg(long)]
        no_close: bool,
    },
    /// Compare the closed spans of two charts or relation files.
    Compare { first: String, second: String },
    /// Check every relation in a file against the pairing.
    Verify { file: PathBuf },
    /// Genus-one potential against the reconstructed correlator.
    Genus1 {
        /// Flat direction, comma separated.
        #[arg(long)]
        direction: String,
    },
}

fn resolve(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(common.config.as_deref())?;
    if let Some(c) = &common.chart {
        cfg.chart = Some(c.clone());
    }
    if let Some(p) = &common.precision {
        cfg.precision = p.clone();
    }
    if let Some(k) = common.z_order {
        cfg.z_order = k;
    }
    if let Some(c) = common.codim {
        cfg.max_codim = c;
    }
    if !common.cells.is_empty() {
        cfg.cells = common.cells.clone();
    }
    if let Some(d) = common.max_dim {
        cfg.max_dim = d;
    }
    if let Some(p) = &common.probe {
        cfg.probe = Some(p.split(',').map(|s| s.trim().to_string()).collect());
    }
    if let Some(d) = &common.output_dir {
        cfg.output_dir = Some(d.clone());
    }
    if let Some(w) = common.workers {
        cfg.workers = Some(w);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let cfg = resolve(&cli.common)?;
    if let Some(w) = cfg.workers {
        if w == 0 {
            return Err(CliError::Input("workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().map_err(|e| CliError::Compute(e.to_string()))?;
    }
    let (name, doc, ok) = match &cli.command {
        Command::Frame => ("frame", commands::frame(&cfg)?, true),
        Command::Rmatrix { family } => ("rmatrix", commands::rmatrix(&cfg, family.as_deref())?, true),
        Command::Reconstruct { g, n, inputs } => ("reconstruct", commands::reconstruct(&cfg, *g, *n, inputs)?, true),
        Command::Relations { no_close } => ("relations", commands::relations(&cfg, !no_close)?, true),
        Command::Compare { first, second } => ("compare", commands::compare(&cfg, first, second)?, true),
        Command::Verify { file } => {
            let (doc, ok) = commands::verify(&cfg, file)?;
            ("verify", doc, ok)
        }
        Command::Genus1 { direction } => ("genus1", commands::genus1(&cfg, direction)?, true),
    };
    let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
    let target = cli.common.out.clone().or_else(|| cfg.output_dir.as_ref().map(|d| d.join(format!("{name}.json"))));
    match target {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(&p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        }
        None => print!("{text}"),
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
