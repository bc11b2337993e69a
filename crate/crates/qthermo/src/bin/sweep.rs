//! Driving-time sweep CLI.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical or invariant
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qthermo::sweep::{emit_csv, emit_svg_plot, run_sweep, PartialConfig, SweepConfig};
use qthermo::Error;

#[derive(Parser, Debug)]
#[command(
    name = "sweep",
    about = "Driven-qubit entropy production sweeps over driving time",
    long_about = "Drives a Gibbs-initialized qubit through a linear gap ramp for a grid of \
                  driving times, records entropy production, its coherence/population split, \
                  the Bures-length bound, and the Jarzynski check, and writes CSV plus \
                  optional SVG plots.\n\nFlags override config-file values; defaults fill \
                  the rest."
)]
struct Cli {
    /// Flat `key = value` config file with `#` comments.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Spin temperature (beta h)^-1 in Hz.
    #[arg(long)]
    temperature_hz: Option<f64>,

    /// Initial energy gap in Hz.
    #[arg(long)]
    nu_i: Option<f64>,

    /// Final energy gaps in Hz, comma separated.
    #[arg(long, value_delimiter = ',')]
    nu_f: Option<Vec<f64>>,

    /// First driving time in seconds.
    #[arg(long)]
    tau_start: Option<f64>,

    /// Last driving time in seconds.
    #[arg(long)]
    tau_end: Option<f64>,

    /// Number of driving-time grid points.
    #[arg(long)]
    tau_steps: Option<usize>,

    /// Initial propagator slice count.
    #[arg(long)]
    slices: Option<usize>,

    /// Propagator convergence tolerance.
    #[arg(long)]
    tolerance: Option<f64>,

    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,

    /// SVG output path; one file per final gap, value suffixed.
    #[arg(long)]
    plot: Option<PathBuf>,
}

impl Cli {
    fn into_partial(self) -> (Option<PathBuf>, PartialConfig) {
        (
            self.config,
            PartialConfig {
                temperature_hz: self.temperature_hz,
                nu_i_hz: self.nu_i,
                nu_f_list_hz: self.nu_f,
                tau_start_s: self.tau_start,
                tau_end_s: self.tau_end,
                tau_steps: self.tau_steps,
                slices: self.slices,
                tolerance: self.tolerance,
                output_path: self.out,
                plot_path: self.plot,
            },
        )
    }
}

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn main() -> ExitCode {
    // clap exits 2 on usage errors and 0 for --help/--version on its own.
    let cli = Cli::parse();
    let (config_path, flags) = cli.into_partial();

    let file_partial = match config_path {
        Some(path) => match std::fs::read_to_string(&path) {
            Ok(text) => match PartialConfig::from_config_text(&text) {
                Ok(partial) => Some(partial),
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(EXIT_CONFIG);
                }
            },
            Err(e) => {
                eprintln!("error: cannot read config file {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG);
            }
        },
        None => None,
    };

    let cfg = match SweepConfig::resolve(file_partial, flags) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let rows = match run_sweep(&cfg) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };

    if let Err(e) = emit_csv(&rows, &cfg.output_path) {
        eprintln!("error: {e}");
        return ExitCode::from(exit_code_for(&e));
    }
    println!("wrote {} rows to {}", rows.len(), cfg.output_path.display());

    if let Some(plot_path) = &cfg.plot_path {
        match emit_svg_plot(&rows, plot_path) {
            Ok(written) => {
                for path in written {
                    println!("wrote plot {}", path.display());
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(exit_code_for(&e));
            }
        }
    }

    ExitCode::SUCCESS
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}
