//! Command-line front end: align once, sweep thresholds, run the
//! exhaustive baseline, or export a truncated derivative.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use beamalign::{
    align, dump_series_csv, exhaustive_search, run_sweep, sweep_to_csv, sweep_to_svg, write_file,
    AlignmentConfig, Config64,
};

#[derive(Parser)]
#[command(
    name = "beamalign",
    version,
    about = "Beam alignment via truncated rate series and sparse root solving"
)]
struct Cli {
    /// Config file with key=value lines (CLI flags win over the file).
    #[arg(long, global = true)]
    config: Option<String>,
    /// Channel seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Receive antenna count.
    #[arg(long, global = true)]
    nr: Option<usize>,
    /// Transmit antenna count.
    #[arg(long, global = true)]
    nt: Option<usize>,
    /// Taylor truncation degree of the rate series.
    #[arg(long, global = true)]
    degree_cap: Option<usize>,
    /// Expansion center as rx:tx (radians).
    #[arg(long, global = true)]
    center: Option<String>,
    /// Report wall_ms as 0 so outputs are byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one alignment at a fixed threshold pair.
    Solve {
        /// Truncation threshold for the rx derivative.
        #[arg(long, default_value_t = 0.7)]
        eps1: f64,
        /// Truncation threshold for the tx derivative.
        #[arg(long, default_value_t = 0.7)]
        eps2: f64,
    },
    /// Benchmark threshold pairs against the exhaustive baseline.
    Sweep {
        /// Threshold pairs as a:b,c:d,...
        #[arg(long)]
        eps_pairs: Option<String>,
        /// CSV report path.
        #[arg(long, default_value = "results.csv")]
        out: String,
        /// Optional SVG plot path.
        #[arg(long)]
        svg: Option<String>,
    },
    /// Exhaustively sweep the angle grid and report the best pair.
    Baseline {
        /// Grid points per angle.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Export one truncated derivative as per-monomial CSV.
    Series {
        /// Which derivative: f1 (rx) or f2 (tx).
        #[arg(long, default_value = "f1")]
        which: String,
        /// Truncation threshold for the selected column.
        #[arg(long, default_value_t = 0.7)]
        eps: f64,
        /// CSV output path.
        #[arg(long, default_value = "coeffs.csv")]
        out: String,
    },
}

fn run() -> beamalign::Result<()> {
    let cli = Cli::parse();
    let mut config: Config64 = match &cli.config {
        Some(path) => AlignmentConfig::from_file(path)?,
        None => AlignmentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(nr) = cli.nr {
        config.n_rx = nr;
    }
    if let Some(nt) = cli.nt {
        config.n_tx = nt;
    }
    if let Some(cap) = cli.degree_cap {
        config.degree_cap = cap;
    }
    if let Some(center) = &cli.center {
        config.centers = vec![beamalign::pipeline::parse_center(center)?];
    }
    if cli.no_timing {
        config.record_timing = false;
    }

    match cli.command {
        Command::Solve { eps1, eps2 } => {
            let h = config.channel()?;
            let params = config.params()?;
            let out = align(&h, &params, eps1, eps2, &config)?;
            println!("theta_rx = {}", out.angles.theta_rx);
            println!("theta_tx = {}", out.angles.theta_tx);
            println!("rate = {}", out.rate);
            println!("eta = {}", out.eta);
            println!("delta = {}", out.delta);
            println!("objective = {}", out.objective);
            println!("real_roots = {}", out.n_real_roots);
            if out.used_fallback {
                println!("note: no usable root; kept the expansion center");
            }
        }
        Command::Sweep {
            eps_pairs,
            out,
            svg,
        } => {
            if let Some(pairs) = &eps_pairs {
                config.eps_pairs = beamalign::pipeline::parse_eps_pairs(pairs)?;
            }
            let records = run_sweep(&config)?;
            write_file(&out, &sweep_to_csv(&records))?;
            println!("wrote {} rows to {}", records.len(), out);
            if let Some(svg_path) = svg {
                write_file(&svg_path, &sweep_to_svg(&records))?;
                println!("wrote plot to {svg_path}");
            }
        }
        Command::Baseline { grid } => {
            if let Some(g) = grid {
                config.grid_points = g;
            }
            config.validate()?;
            let h = config.channel()?;
            let params = config.params()?;
            let (angles, rate) = exhaustive_search(&h, &params, config.grid_points)?;
            println!("grid = {}", config.grid_points);
            println!("theta_rx = {}", angles.theta_rx);
            println!("theta_tx = {}", angles.theta_tx);
            println!("rate = {rate}");
        }
        Command::Series { which, eps, out } => {
            let kind = which.parse()?;
            write_file(&out, &dump_series_csv(&config, kind, eps)?)?;
            println!("wrote series table to {out}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
