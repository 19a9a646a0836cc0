use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use netscale::coarse::coarse_grain;
use netscale::ei::effective_information;
use netscale::graph::Network;
use netscale::harness::{run_sweep, write_outputs, Algorithm, ExperimentConfig, SearchSettings};
use netscale::io::{format_edge_list, read_edge_list, read_partition, write_edge_list, write_partition};
use netscale::metrics::MetricsReport;
use netscale::netgen::{complete, cycle, erdos_renyi, preferential_attachment, star, PAConfig};

/// Effective information and causal emergence on weighted directed networks.
#[derive(Parser, Debug)]
#[command(name = "netscale", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated network as an edge list.
    Generate {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        n: usize,
        /// Edges added per node (preferential attachment).
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Attachment exponent (preferential attachment).
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Edge probability (Erdos-Renyi).
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the EI breakdown of a network as JSON.
    Ei { file: PathBuf },
    /// Search for an informative macroscale and print it as JSON.
    Coarsen {
        file: PathBuf,
        #[arg(long)]
        algorithm: String,
        /// Flat TOML file with search settings.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the macro network as an edge list.
        #[arg(long)]
        macro_out: Option<PathBuf>,
        /// Also write the partition, one group per line.
        #[arg(long)]
        partition_out: Option<PathBuf>,
    },
    /// Print network properties as JSON, at the macroscale if a partition is given.
    Metrics {
        file: PathBuf,
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Run a preferential-attachment sweep and write runs.csv and summary.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides output_dir from the config.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Overrides workers from the config.
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Model {
    Pa,
    Star,
    Cycle,
    Complete,
    Er,
}

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

fn load(path: &PathBuf) -> CliResult<Network> {
    let net = read_edge_list(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(net.normalize())
}

fn node_json(net: &Network, i: usize) -> Value {
    match net.labels() {
        Some(l) => json!(l[i]),
        None => json!(i),
    }
}

fn print_json(v: &impl serde::Serialize) -> CliResult<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate {
            model,
            n,
            m,
            alpha,
            p,
            seed,
            out,
        } => {
            let net = match model {
                Model::Pa => preferential_attachment(&PAConfig::new(n, m, alpha, seed))?,
                Model::Star => star(n)?,
                Model::Cycle => cycle(n)?,
                Model::Complete => complete(n)?,
                Model::Er => erdos_renyi(n, p, seed)?,
            };
            match out {
                Some(path) => write_edge_list(path, &net)?,
                None => print!("{}", format_edge_list(&net)),
            }
        }
        Command::Ei { file } => print_json(&effective_information(&load(&file)?))?,
        Command::Coarsen {
            file,
            algorithm,
            config,
            macro_out,
            partition_out,
        } => {
            let net = load(&file)?;
            let algorithm: Algorithm = algorithm.parse()?;
            let settings = match config {
                Some(path) => SearchSettings::from_file(&path).map_err(|e| format!("{}: {e}", path.display()))?,
                None => SearchSettings::default(),
            };
            let r = settings.run(algorithm, &net)?;
            let groups: Vec<Vec<Value>> = r
                .partition
                .groups()
                .iter()
                .map(|g| g.iter().map(|&i| node_json(&net, i)).collect())
                .collect();
            print_json(&json!({
                "algorithm": algorithm,
                "partition": groups,
                "macro_nodes": r.macro_node_count(),
                "ei_micro": r.ei_micro,
                "ei_macro": r.ei_macro,
                "causal_emergence": r.causal_emergence,
                "accuracy": r.accuracy,
            }))?;
            if let Some(path) = macro_out {
                write_edge_list(path, &r.macro_net)?;
            }
            if let Some(path) = partition_out {
                write_partition(path, &r.partition, &net)?;
            }
        }
        Command::Metrics { file, partition } => {
            let net = load(&file)?;
            let report = match partition {
                Some(path) => {
                    let part = read_partition(&path, &net).map_err(|e| format!("{}: {e}", path.display()))?;
                    let macro_net = coarse_grain(&net, &net.stationary(), &part)?;
                    MetricsReport::compute(&macro_net, Some(&part))?
                }
                None => MetricsReport::compute(&net, None)?,
            };
            print_json(&report)?;
        }
        Command::Sweep {
            config,
            output_dir,
            workers,
        } => {
            let mut cfg = ExperimentConfig::from_file(&config).map_err(|e| format!("{}: {e}", config.display()))?;
            if let Some(dir) = output_dir {
                cfg.output_dir = dir;
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let records = run_sweep(&cfg)?;
            let failed = records.iter().filter(|r| !r.is_ok()).count();
            let out = write_outputs(&cfg, &records)?;
            eprintln!(
                "{} runs ({failed} failed): {} and {}",
                records.len(),
                out.runs.display(),
                out.summary.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
