use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hybridbf::{config::RawConfig, emit_csv, plot, run_experiment, ExperimentId};

#[derive(Parser)]
#[command(
    name = "hybridbf",
    version,
    about = "Robust hybrid beamforming experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSV.
    Run(RunArgs),
    /// List experiment ids.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// beam-pattern, sinr-vs-snr, sinr-vs-snr-robust, rmse-vs-epsilon or sinr-vs-snapshots
    experiment: ExperimentId,
    /// Scenario file (key = value lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV; falls back to the config's `output` key.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Absolute diagonal loading.
    #[arg(long, conflicts_with = "gamma_noise_mult")]
    gamma: Option<f64>,
    /// Diagonal loading as a multiple of the noise power.
    #[arg(long)]
    gamma_noise_mult: Option<f64>,
    #[arg(long)]
    epsilon_deg: Option<f64>,
    #[arg(long)]
    snapshots: Option<usize>,
    /// Run the DL baseline fully digital on all N elements.
    #[arg(long)]
    full_digital_dl: bool,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    plot: bool,
}

fn run(args: RunArgs) -> Result<(), Box<dyn std::error::Error>> {
    let mut raw = match &args.config {
        Some(p) => RawConfig::read(p)?,
        None => RawConfig::default(),
    };
    if let Some(s) = args.seed {
        raw.set("seed", s.to_string());
    }
    if let Some(t) = args.trials {
        raw.set("trials", t.to_string());
    }
    if let Some(g) = args.gamma {
        raw.remove("gamma_noise_mult");
        raw.set("gamma", g.to_string());
    }
    if let Some(f) = args.gamma_noise_mult {
        raw.remove("gamma");
        raw.set("gamma_noise_mult", f.to_string());
    }
    if let Some(e) = args.epsilon_deg {
        raw.set("epsilon", format!("{e}deg"));
    }
    if let Some(l) = args.snapshots {
        raw.set("snapshots", l.to_string());
    }
    if args.full_digital_dl {
        raw.set("full_digital_dl", "true");
    }
    let spec = raw.resolve(Some(args.experiment))?;
    let out = args
        .out
        .or_else(|| spec.output.clone())
        .ok_or("no output path: pass --out or set `output` in the config")?;

    let table = run_experiment(&spec)?;
    emit_csv(&table, &out)?;
    log::info!("wrote {}", out.display());
    if args.plot {
        let script = out.with_extension("gp");
        plot::emit_gnuplot(&table, spec.experiment, &out, &script)?;
        log::info!("wrote {}", script.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::List => {
            for e in ExperimentId::ALL {
                println!("{e}");
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
