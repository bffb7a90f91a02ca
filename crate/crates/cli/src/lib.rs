//! Command-line front end: every subcommand writes its outputs and a run
//! manifest to the output directory.
//!
//! Exit status is 0 on success, 1 for usage errors, invalid parameters and
//! I/O failures, and 2 when a numerical routine fails.

pub mod args;
pub mod commands;
pub mod error;
pub mod figures;
pub mod manifest;
pub mod svg;
pub mod table;

use std::ffi::OsString;
use std::path::Path;
use std::time::Instant;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};
use crate::manifest::{strip_out_dir, RunManifest};

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}

fn dispatch(argv: Vec<String>) -> Result<(), (i32, String)> {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                print!("{text}");
                return Ok(());
            }
            return Err((code, text.trim_end().to_string()));
        }
    };
    execute(&cli, &argv).map_err(|e| (e.exit_code(), format!("error: {e}")))
}

fn execute(cli: &Cli, argv: &[String]) -> CliResult<()> {
    if let Command::Rerun { manifest } = &cli.command {
        let m = RunManifest::read(manifest)?;
        let mut again = vec!["dml".to_string()];
        again.extend(m.args.iter().cloned());
        again.push("--out-dir".into());
        again.push(cli.out_dir.display().to_string());
        let re = Cli::try_parse_from(&again)
            .map_err(|e| CliError::Usage(format!("{}: {}", manifest.display(), e.render().to_string().trim_end())))?;
        if matches!(re.command, Command::Rerun { .. }) {
            return Err(CliError::Usage("a manifest cannot record another rerun".into()));
        }
        return execute(&re, &again);
    }

    let started = Instant::now();
    let out = commands::execute(&cli.command)?;
    eprint!("{}", out.stderr);
    print!("{}", out.stdout);
    if !commands::writes_manifest(&cli.command) {
        return Ok(());
    }
    let dir = &cli.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for (name, contents) in &out.files {
        write_file(dir, name, contents)?;
        println!("wrote {}", dir.join(name).display());
    }
    let name = commands::subcommand_name(&cli.command);
    let manifest = RunManifest {
        subcommand: name.to_string(),
        args: strip_out_dir(argv.get(1..).unwrap_or(&[])),
        parameters: out.parameters,
        solver: out.solver,
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: out.files.iter().map(|(n, _)| n.clone()).collect(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    write_file(dir, &RunManifest::file_name(name), &text)
}

/// Run the program on `argv` (including the program name) and return the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<String> = argv
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    match dispatch(argv) {
        Ok(()) => 0,
        Err((code, msg)) => {
            eprintln!("{msg}");
            code
        }
    }
}
