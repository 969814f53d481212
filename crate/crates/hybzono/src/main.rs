//   Copyright 2026 hybzono developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.


use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hybzono::cli::{convert, info, load_set};
use hybzono::core::Solver;
use hybzono::{run, RunError, RunFlags};

#[derive(Parser)]
#[command(name = "hybzono", version, about = "Run hybrid zonotope scenarios and inspect set files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario document and write its exports and report.
    Run {
        scenario: PathBuf,
        out_dir: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Solver backend; only "builtin" ships with the tool.
        #[arg(long)]
        solver: Option<String>,
        /// Feasibility tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Worker threads for leaf meshing and audits.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Extra export, as name:format[:file]; repeatable.
        #[arg(long = "export")]
        exports: Vec<String>,
        /// Count the nonempty leaves of every set (MILP-priced).
        #[arg(long)]
        leaves: bool,
        /// Pre-activation bound for ReLU encodings.
        #[arg(long)]
        activation_bound: Option<f64>,
    },
    /// Print a summary of a set document.
    Info {
        set: PathBuf,
        /// Also count nonempty leaves.
        #[arg(long)]
        leaves: bool,
    },
    /// Lift a set document to a more expressive representation.
    Convert { set: PathBuf, target: String, out: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<(), RunError> = match cli.command {
        Command::Run {
            scenario,
            out_dir,
            seed,
            solver,
            tolerance,
            jobs,
            exports,
            leaves,
            activation_bound,
        } => {
            let flags = RunFlags {
                seed,
                solver,
                tolerance,
                jobs,
                exports,
                leaves,
                activation_bound,
            };
            run(&scenario, &out_dir, &flags).map(|report| {
                for s in &report.sets {
                    let t = s.leaves.map_or(String::new(), |t| format!(", |T| = {t}"));
                    println!("{}: {} ({}, {}, {}){t}", s.name, s.rep, s.n_g, s.n_b, s.n_c);
                }
                for w in &report.warnings {
                    eprintln!("warning: {w}");
                }
                println!("wrote {} file(s) to {}", report.outputs.len(), out_dir.display());
            })
        }
        Command::Info { set, leaves } => load_set(&set).and_then(|s| info(&s, leaves, &Solver::default())).map(|text| print!("{text}")),
        Command::Convert { set, target, out } => load_set(&set).and_then(|s| convert(&s, &target, &out)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
