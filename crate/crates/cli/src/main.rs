//! `qrecover`: command-line front end for the recovery simulator.

mod args;
mod commands;
mod failure;
mod plot;
mod state;

use std::fs::{self, File};
use std::io::BufReader;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, PlotArgs, PlotKind};
use failure::Failure;

const THREADS_ENV: &str = "QRECOVER_THREADS";

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Failure::usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(format!("{THREADS_ENV}: {e}")))
}

fn plot(args: &PlotArgs) -> Result<(), Failure> {
    let file = File::open(&args.input).map_err(|e| Failure::io(args.input.display(), e))?;
    let table = plot::Table::read(BufReader::new(file))?;
    let default_title = args.input.display().to_string();
    let title = args.title.as_deref().unwrap_or(&default_title);
    let svg = match args.kind {
        PlotKind::Line => plot::line_chart(
            &table,
            &plot::LineSpec { x: &args.x, y: &args.y, group: args.group.as_deref(), title },
        )?,
        PlotKind::Heatmap => plot::heatmap(&table, &plot::HeatmapSpec { x: &args.x, y: &args.y, z: &args.z, title })?,
    };
    fs::write(&args.out, svg).map_err(|e| Failure::io(args.out.display(), e))?;
    eprintln!("wrote {}", args.out.display());
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    configure_threads()?;
    match &cli.command {
        Command::Run(a) => commands::run(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Pareto(a) => commands::pareto_cmd(a),
        Command::Validate => commands::validate(),
        Command::Plot(a) => plot(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(failure::USAGE),
            };
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
