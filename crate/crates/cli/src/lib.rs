//! Command-line front end for `spinlet`: accuracy harness, kernel tiling
//! export, file-driven analysis, synthesis and denoising.

pub mod args;
pub mod commands;
pub mod error;
pub mod mapfile;

pub use args::Cli;
pub use error::{CliError, CliResult};

use args::Command;
use commands::*;

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Roundtrip(a) => {
            let report = cmd_roundtrip(a.bandlimit, &a.harness)?;
            write_json(&report, a.harness.report.as_deref())
        }
        Command::Bench(a) => {
            let report = cmd_bench(&a.bandlimits, &a.harness)?;
            write_json(&report, a.harness.report.as_deref())
        }
        Command::Tiling(a) => write_tiling(&cmd_tiling(a.bandlimit, a.alpha, a.jmin)?, a.out.as_deref()),
        Command::Generate(a) => cmd_generate(&a),
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Synth(a) => cmd_synth(&a),
        Command::Denoise(a) => {
            let report = cmd_denoise(&a)?;
            write_json(&report, a.report.as_deref())
        }
    }
}
