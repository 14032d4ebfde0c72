use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use episolve::commands::{self, Kind, Outcome};
use episolve_core::logic::CommonKnowledgeMode;

/// Epistemic models of distributed tasks: conversion, product update,
/// model checking, protocol complexes and solvability.
///
/// Exit codes: 0 success / true / solvable, 1 false / unsolvable /
/// obstructed, 2 error.
#[derive(Parser)]
#[command(name = "episolve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Kripke,
    Simplicial,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Kripke => Kind::Kripke,
            KindArg::Simplicial => Kind::Simplicial,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Components,
    Fixpoint,
    Crosscheck,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a document.
    Validate { path: String },
    /// Convert between Kripke and simplicial models.
    Convert {
        path: String,
        #[arg(long, value_enum)]
        to: KindArg,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Product update of a model with an action model.
    Update {
        model: String,
        action: String,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Full-information immediate-snapshot protocol model after N rounds.
    Protocol {
        path: String,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long, value_enum)]
        to: Option<KindArg>,
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Evaluate a formula at one state, or at every state.
    Check {
        path: String,
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        formula: String,
        /// Action model for `[NAME]` modalities, as NAME=FILE.
        #[arg(long = "action")]
        actions: Vec<String>,
        #[arg(long, value_enum, default_value = "components")]
        mode: ModeArg,
    },
    /// Decide solvability of a task in N rounds.
    Solve {
        path: String,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        /// Write the protocol model decorated with decisions here.
        #[arg(long)]
        witness: Option<String>,
        /// Shuffle the search order.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Connected components, optionally for a group of agents.
    Components {
        path: String,
        /// Comma-separated agent names.
        #[arg(long)]
        group: Option<String>,
    },
    /// Betti numbers over GF(2), of the model or of its protocol complex.
    Betti {
        path: String,
        #[arg(long)]
        rounds: Option<usize>,
    },
    /// Homology obstruction test for a task.
    Obstruct {
        path: String,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
    },
    /// Graphviz rendering of the 1-skeleton.
    Dot { path: String },
}

fn run(cmd: Command) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Validate { path } => commands::validate(&path),
        Command::Convert { path, to, output } => commands::convert(&path, to.into(), output.as_deref()),
        Command::Update { model, action, output } => commands::update(&model, &action, output.as_deref()),
        Command::Protocol {
            path,
            rounds,
            to,
            output,
        } => commands::protocol(&path, rounds, to.map(Into::into), output.as_deref()),
        Command::Check {
            path,
            state,
            formula,
            actions,
            mode,
        } => {
            let mode = match mode {
                ModeArg::Components => CommonKnowledgeMode::Components,
                ModeArg::Fixpoint => CommonKnowledgeMode::Fixpoint,
                ModeArg::Crosscheck => CommonKnowledgeMode::CrossCheck,
            };
            commands::check(&path, state.as_deref(), &formula, &actions, mode)
        }
        Command::Solve {
            path,
            rounds,
            witness,
            seed,
        } => commands::solve_task(&path, rounds, seed, witness.as_deref()),
        Command::Components { path, group } => commands::components(&path, group.as_deref()),
        Command::Betti { path, rounds } => commands::betti(&path, rounds),
        Command::Obstruct { path, rounds } => commands::obstruct(&path, rounds),
        Command::Dot { path } => commands::export_dot(&path),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", out.stdout);
            if out.positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
