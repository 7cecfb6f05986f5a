use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use setlp::poly::ProjectionStrategy;
use setlp::session::Status;
use setlp_cli::api::{serve, AppState};
use setlp_cli::{commands, Settings, TieBreakChoice};

/// Interactive optimizer design for polyhedral set optimization problems.
#[derive(Parser)]
#[command(name = "setlp", version)]
struct Cli {
    /// Membership tolerance for selected points.
    #[arg(long, global = true, env = "SETLP_TOL", default_value_t = 1e-6)]
    tol: f64,
    /// Projection strategy: auto, fm or lp_hull.
    #[arg(long, global = true, env = "SETLP_STRATEGY", default_value = "auto")]
    strategy: ProjectionStrategy,
    /// How to choose among admissible decisions.
    #[arg(long, global = true, value_enum, default_value_t = TieBreakChoice::Cost)]
    tiebreak: TieBreakChoice,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check nonemptiness and whether optimizers exist.
    Check { problem: PathBuf },
    /// Compute the optimal value.
    Optval {
        problem: PathBuf,
        /// Directory for optval.vrep, optval.hrep and optval.svg.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a SELECT/REMOVE script; exits 0 iff an optimizer is found.
    Session {
        problem: PathBuf,
        script: PathBuf,
        /// Snap selections to nearby vertices and outside points to the nearest option.
        #[arg(long)]
        snap: bool,
        /// Where to write the replayable log.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, env = "SETLP_BIND", default_value = "127.0.0.1:8080")]
        bind: String,
        #[arg(long, env = "SETLP_FIXTURES", default_value = "fixtures")]
        fixtures: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = Settings {
        tol: cli.tol,
        strategy: cli.strategy,
        tiebreak: cli.tiebreak,
    };
    let mut out = String::new();
    let result = match cli.command {
        Command::Check { problem } => commands::check(&problem, &settings, &mut out).map(|exist| {
            if exist {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }),
        Command::Optval { problem, out: dir } => {
            commands::optval(&problem, &settings, dir.as_deref(), &mut out).map(|_| ExitCode::SUCCESS)
        }
        Command::Session {
            problem,
            script,
            snap,
            out: log_path,
        } => commands::session(&problem, &script, &settings, snap, &mut out).and_then(|run| {
            if let Some(p) = log_path {
                std::fs::write(&p, &run.log).map_err(|e| format!("{}: {e}", p.display()))?;
            }
            Ok(if run.status == Status::Found {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }),
        Command::Serve { bind, fixtures } => {
            let state = Arc::new(AppState::new(fixtures, settings));
            let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
            runtime.block_on(serve(&bind, state)).map_err(|e| e.to_string()).map(|_| ExitCode::SUCCESS)
        }
    };
    print!("{out}");
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
