use clap::Parser;
use std::process::ExitCode;
use vslab_cli::args::{Cli, Command};
use vslab_cli::experiments::{render_fig1, render_file, render_scaling, render_walkdemo};
use vslab_cli::{run, CliError, Experiment, EXIT_NOT_CONVERGED, EXIT_OK};

fn render(csv: &std::path::Path) -> Result<(), CliError> {
    let stem = csv.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    let renderer = match stem {
        "fig1" => render_fig1,
        "scaling" => render_scaling,
        "walkdemo" => render_walkdemo,
        _ => return Err(CliError::Input(format!("no chart is defined for {}", csv.display()))),
    };
    let svg = render_file(csv, renderer)?;
    println!("{}", svg.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, flags) = match cli.command {
        Command::Fig1(f) => (Experiment::Fig1, f),
        Command::Scaling(f) => (Experiment::Scaling, f),
        Command::Solve(f) => (Experiment::Solve, f),
        Command::Walkdemo(f) => (Experiment::Walkdemo, f),
        Command::Render { csv } => {
            return match render(&csv) {
                Ok(()) => ExitCode::from(EXIT_OK as u8),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
    };
    let result = flags.resolve(experiment).and_then(|cfg| run(&cfg));
    match result {
        Ok(out) => {
            for line in &out.summary {
                println!("{line}");
            }
            for f in &out.files {
                eprintln!("wrote {}", f.display());
            }
            if out.converged {
                ExitCode::from(EXIT_OK as u8)
            } else {
                eprintln!("not converged");
                ExitCode::from(EXIT_NOT_CONVERGED as u8)
            }
        }
        Err(e) => {
            if matches!(e, CliError::Budget(_)) {
                eprintln!("warning: required sample count exceeds the budget; raise --max-samples to run anyway");
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
