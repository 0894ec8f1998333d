use std::process::ExitCode;

use clap::{Parser, Subcommand};
use titop_cli::tables::{table_beam, TableKind};
use titop_cli::{output, CliError};

#[derive(Parser)]
#[command(name = "titop", version, about = "Linear models of spinning flexible spacecraft")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every analysis of a scenario file or built-in scenario.
    Run {
        scenario: String,
        /// Override the nominal spin rate, rad/s.
        #[arg(long)]
        spin: Option<f64>,
        /// Override a body mass, NAME=KG (repeatable).
        #[arg(long, value_parser = parse_mass)]
        mass: Vec<(String, f64)>,
    },
    /// Frequency-ratio table of the uniform cantilever (printed and written).
    Table {
        kind: String,
        #[arg(long)]
        elements: Option<usize>,
        /// Add finite-element reference columns (T4).
        #[arg(long)]
        oracle: bool,
    },
    /// Natural frequencies over a uniform spin grid starting at zero.
    Campbell {
        scenario: String,
        #[arg(long)]
        omega_max: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Frequency response of one input/output pair.
    Freqresp {
        scenario: String,
        /// `Tin2:wdot2` or full channel names `in:out`.
        #[arg(long)]
        channel: String,
        /// `log:a:b:n` or `lin:a:b:n`, rad/s.
        #[arg(long, default_value = "log:1e-3:1e3:400")]
        grid: String,
    },
}

fn parse_mass(s: &str) -> Result<(String, f64), String> {
    let (n, v) = s.split_once('=').ok_or("expected NAME=KG")?;
    let v: f64 = v.parse().map_err(|e| format!("{e}"))?;
    Ok((n.to_string(), v))
}

fn execute(cmd: Command) -> Result<(), CliError> {
    let dir = titop_cli::output_dir();
    let artifacts = match cmd {
        Command::Run { scenario, spin, mass } => {
            let mut cfg = titop_cli::load_scenario(&scenario)?;
            if let Some(s) = spin {
                cfg.spin.nominal = s;
            }
            for (n, m) in &mass {
                cfg.set_mass(n, *m)?;
            }
            titop_cli::run_scenario(&cfg)?
        }
        Command::Table { kind, elements, oracle } => {
            let k = TableKind::parse(&kind).ok_or_else(|| CliError::Usage(format!("unknown table {kind}; use T1..T4")))?;
            let a = titop_cli::table(k, elements, oracle, &table_beam())?;
            print!("{}", a.contents);
            vec![a]
        }
        Command::Campbell { scenario, omega_max, steps } => {
            let cfg = titop_cli::load_scenario(&scenario)?;
            let branches = cfg
                .analyses
                .iter()
                .find_map(|a| match a {
                    titop_cli::config::Analysis::Campbell { branches, .. } => Some(branches.clone()),
                    _ => None,
                })
                .unwrap_or_default();
            vec![titop_cli::campbell(&cfg, omega_max, steps, &branches)?]
        }
        Command::Freqresp { scenario, channel, grid } => {
            let cfg = titop_cli::load_scenario(&scenario)?;
            vec![titop_cli::freqresp(&cfg, &channel, &grid)?]
        }
    };
    for p in titop_cli::write_artifacts(&dir, &artifacts)? {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprint!("{}", output::to_json(&e.report()));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
