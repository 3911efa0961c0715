use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use chanmeas::config::SEED_ENV;
use chanmeas::{
    evaluate_trace, export_csv, format_report, measure, pairs_csv, read_trace, CsvSelection, Error,
    Result, RunConfig,
};

#[derive(Parser)]
#[command(name = "chanmeas", version, about = "Simulated LTE uplink channel measurement and prediction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ConfigArgs {
    /// key=value configuration file
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Override one configuration key, e.g. --set channel.doppler_hz=100
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl ConfigArgs {
    /// Defaults, then the config file, then CHTR_SEED, then --set.
    fn resolve(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        config.apply_seed_override(std::env::var(SEED_ENV).ok().as_deref())?;
        for assignment in &self.overrides {
            config.apply_assignment(assignment)?;
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportMode {
    Surface,
    Subcarrier,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a frozen-grant run and write a .chtr trace
    Measure {
        #[command(flatten)]
        config: ConfigArgs,
        /// Trace output path (overrides output.trace)
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Export a trace as CSV
    Export {
        trace: PathBuf,
        #[arg(long, value_enum, default_value = "surface")]
        mode: ExportMode,
        /// Subcarrier index within the grant for --mode subcarrier
        #[arg(long, short)]
        k: Option<usize>,
        /// CSV output path, stdout if omitted
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Fit and evaluate the predictor on one subcarrier of a trace
    Predict {
        trace: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
        /// Report output path (overrides output.report)
        #[arg(long)]
        report: Option<PathBuf>,
        /// (instant, actual, predicted) CSV path (overrides output.csv)
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print a trace header
    Info { trace: PathBuf },
}

fn load_trace(path: &Path) -> Result<chanmeas::ChannelTrace> {
    let bytes = fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    read_trace(&bytes)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Measure { config, out } => {
            let config = config.resolve()?;
            let path = out.unwrap_or_else(|| config.trace_path.clone());
            if config.n_instants == 0 {
                eprintln!("warning: run.n_instants = 0, writing a header-only trace");
            }
            let file = fs::File::create(&path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
            let (writer, summary) = measure(&config, BufWriter::new(file))?;
            writer
                .into_inner()
                .map_err(|e| Error::io(format!("writing {}", path.display()), e.into_error()))?;
            print!("trace={}\n{}", path.display(), summary.render());
        }
        Command::Export { trace, mode, k, out } => {
            let trace = load_trace(&trace)?;
            let selection = match (mode, k) {
                (ExportMode::Surface, _) => CsvSelection::Surface,
                (ExportMode::Subcarrier, Some(k)) => CsvSelection::Subcarrier(k),
                (ExportMode::Subcarrier, None) => {
                    return Err(Error::Config("--mode subcarrier needs --k".into()));
                }
            };
            let csv = export_csv(&trace, selection)?;
            match out {
                Some(path) => write_file(&path, &csv)?,
                None => std::io::stdout()
                    .lock()
                    .write_all(csv.as_bytes())
                    .map_err(|e| Error::io("writing stdout", e))?,
            }
        }
        Command::Predict { trace, config, report, csv } => {
            let config = config.resolve()?;
            let trace = load_trace(&trace)?;
            let outcome = evaluate_trace(&trace, &config.eval_config(), config.subcarrier)?;
            let text = format_report(&outcome);
            print!("{text}");
            if let Some(path) = report.or(config.report_path) {
                write_file(&path, &text)?;
            }
            if let Some(path) = csv.or(config.csv_path) {
                write_file(&path, &pairs_csv(&outcome.report))?;
            }
        }
        Command::Info { trace } => {
            let trace = load_trace(&trace)?;
            let h = &trace.header;
            println!("version=1");
            println!("bandwidth_mhz={}", h.bandwidth);
            println!("start_rb={}", h.start_rb);
            println!("rb_count={}", h.rb_count);
            println!("subcarriers={}", h.n_subcarriers());
            println!("pilot_interval_slots={}", h.pilot_interval);
            println!("scale_exponent={}", h.scale_exponent);
            println!("n_instants={}", h.n_instants);
            println!("span_s={}", chanmeas_core::instants_to_duration(h.n_instants).as_secs_f64());
            println!("seed={}", h.seed);
            println!("channel_model={}", h.channel_model.name());
            println!("doppler_hz={}", h.doppler_hz);
            println!("snr_db={}", h.snr_db);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
