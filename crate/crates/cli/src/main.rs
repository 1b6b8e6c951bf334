mod args;
mod commands;
mod report;

use std::process::ExitCode;

use chaoscope_core::analysis::LiYorkeParams;
use chaoscope_core::bouquet::{BouquetError, SPINE_WARN_LEVEL};
use chaoscope_core::dsl::DslError;
use chaoscope_core::dynamics::DynamicsError;
use clap::Parser;
use thiserror::Error;

use args::{Cli, Command, Format};
use report::{Report, RunInfo};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Bouquet(#[from] BouquetError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Dsl(#[from] DslError),
}

fn warn_spine(spine: usize) {
    if spine > SPINE_WARN_LEVEL {
        eprintln!("warning: spine level {spine} is above {SPINE_WARN_LEVEL}; cycle lengths have millions of digits");
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    let cover = g.cover.as_deref();
    let tower = || commands::construction(cover);
    match &cli.command {
        Command::Levels { max, verify } => commands::levels(&tower()?, *max, *verify, g.budget),
        Command::Validate { max, samples } => commands::validate(cover, *max, *samples, g.budget, g.seed),
        Command::Materialize { level, .. } => commands::materialize(&tower()?, *level, g.budget),
        Command::Orbit {
            spine,
            cycle,
            pos,
            obs,
            horizon,
            from,
            times,
        } => {
            warn_spine(*spine);
            commands::orbit(&tower()?, *spine, *cycle, pos, *obs, *horizon, from, times)
        }
        Command::Distance { spine, a, b, at } => commands::distance_cmd(&tower()?, *spine, a, b, at),
        Command::FixedPoint { spine, deltas } => {
            warn_spine(*spine);
            commands::fixed_point(&tower()?, *spine, deltas)
        }
        Command::Roundtrip {
            count,
            spine,
            max_delta,
        } => commands::roundtrip(&tower()?, *count, *spine, *max_delta, g.seed),
        Command::Liyorke {
            pairs,
            spine,
            horizon,
            prox_depth,
            sep_depth,
            condition_level,
            min_separated,
        } => {
            let params = LiYorkeParams {
                horizon: *horizon,
                prox_depth: *prox_depth,
                sep_depth: *sep_depth,
            };
            commands::liyorke(&tower()?, *pairs, *spine, params, *condition_level, *min_separated, g.seed)
        }
        Command::Proximal {
            level,
            spine,
            handles,
            windows,
            window_len,
        } => commands::proximal(&tower()?, *level, *spine, *handles, *windows, *window_len, g.seed),
        Command::MixingGaps { m, j, expect_gaps } => {
            commands::mixing_gaps(&tower()?, *m, j, expect_gaps.as_deref(), g.budget)
        }
        Command::Semigroup { gens, span, realized_by } => {
            commands::semigroup(&tower()?, gens, *span, realized_by, g.budget)
        }
        Command::Degree { handle, samples, handles } => {
            warn_spine(handle.spine);
            match handle.cycle {
                Some(cycle) => commands::degree_one(&tower()?, handle.spine, cycle, &handle.pos),
                None => commands::degree_corpus(&tower()?, handle.spine, *samples, *handles, g.seed),
            }
        }
        Command::Lift { level, cycle, pos, max } => commands::lift(&tower()?, *level, *cycle, pos, *max),
        Command::DslCheck {
            file,
            builtin,
            compare,
            mutants,
        } => commands::dsl_check(file.as_deref(), *builtin, *compare, *mutants),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|report| {
        let format = match (&cli.command, cli.global.format) {
            (_, Some(f)) => f,
            (Command::Materialize { dot: true, .. }, None) => Format::Dot,
            _ => report.default_format,
        };
        let rendered = report.render(format)?;
        if let Some(dir) = &cli.global.out {
            let info = RunInfo {
                command: cli.command.name(),
                seed: cli.global.seed,
                budget: cli.global.budget,
                cover: cli.global.cover.as_deref(),
            };
            report::write_artifacts(dir, &info, &report, format)?;
        }
        print!("{rendered}");
        Ok(report.passed)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
