mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};

/// Differential cross-sections for single-photon annihilation of planar
/// channeled positrons on K-shell electrons, plus free-atom references.
#[derive(Parser)]
#[command(name = "spa", version, about)]
struct Cli {
    /// Key-value configuration file; flags override file values.
    #[arg(long, global = true, env = "SPA_CONFIG")]
    config: Option<std::path::PathBuf>,

    /// Override a single configuration key (repeatable), e.g.
    /// --set e_par_mev=70.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output directory for the CSV files.
    #[arg(long, global = true)]
    output_dir: Option<std::path::PathBuf>,

    /// Worker threads for the scan grid (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Also write a JSON mirror next to each CSV.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Photon angular distribution and screen projection at one
    /// (energy, entry angle, band).
    Angular,
    /// dσ_max/dΩ scan over energy, entry angle, and band, with the
    /// exponential fit per curve.
    SigmaMax,
    /// Free-atom reference cross-section maxima over a γ range.
    AtomRef,
    /// Transverse band diagram dump.
    Bands,
}

fn main() {
    let cli = Cli::parse();

    let mut cfg = match config::Config::load(cli.config.as_deref(), &cli.set) {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: usage: {err}");
            std::process::exit(2);
        }
    };
    if let Some(dir) = cli.output_dir {
        cfg.output_dir = dir;
    }
    if let Some(threads) = cli.threads {
        cfg.threads = Some(threads);
    }
    cfg.json = cfg.json || cli.json;

    #[cfg(feature = "parallel")]
    if let Some(threads) = cfg.threads {
        // A second initialization (e.g. in tests) keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let run = match cli.command {
        Command::Angular => commands::run_angular_distribution(&cfg),
        Command::SigmaMax => commands::run_sigma_max_scan(&cfg),
        Command::AtomRef => commands::run_atom_reference(&cfg),
        Command::Bands => commands::run_band_diagram(&cfg),
    };

    if let Err(err) = run {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}
