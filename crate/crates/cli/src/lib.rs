//! Command-line runner for the `seba-core` experiments.
//!
//! Each subcommand writes its artifacts plus a `manifest.json` into
//! `--out-dir`. The manifest echoes every resolved parameter, where it came
//! from, and the artifact names. It has no timestamps, so reruns with the
//! same parameters produce identical files.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::Path;

use clap::{Arg, ArgMatches};
use serde::Serialize;

pub use commands::{Command, Outputs, COMMANDS};
use config::{parse_kv, Params, Source, Value, ENV_VARS};
pub use error::CliError;

pub const MANIFEST: &str = "manifest.json";

fn cli() -> clap::Command {
    let mut root = clap::Command::new("seba")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Point scatterer spectra, quasimodes and localisation experiments")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for c in COMMANDS {
        let mut sub = clap::Command::new(c.name()).about(c.about()).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("key = value file, overridden by environment and flags"),
        );
        for p in c.schema() {
            let help = match p.presence {
                config::Presence::Default(d) => format!("{} [default: {d}]", p.help),
                _ => p.help.to_owned(),
            };
            sub = sub.arg(
                Arg::new(p.key)
                    .long(p.key)
                    .value_name(p.kind.placeholder())
                    .allow_hyphen_values(true)
                    .help(help),
            );
        }
        root = root.subcommand(sub);
    }
    root
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    params: &'a BTreeMap<String, Value>,
    sources: &'a BTreeMap<String, Source>,
    outputs: &'a [String],
    summary: &'a serde_json::Value,
}

/// Outcome of a successful run.
#[derive(Debug)]
pub struct Run {
    pub command: Command,
    pub params: Params,
    pub outputs: Outputs,
}

fn flags_of(m: &ArgMatches, c: Command) -> BTreeMap<String, String> {
    c.schema()
        .iter()
        .filter_map(|p| {
            m.get_one::<String>(p.key)
                .map(|v| (p.key.to_owned(), v.clone()))
        })
        .collect()
}

/// Parse `args` (program name first) and run. `env` looks up environment
/// variables so tests can pass their own.
pub fn run<I, T>(args: I, env: impl Fn(&str) -> Option<String>) -> Result<Run, RunError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = cli().try_get_matches_from(args).map_err(RunError::Clap)?;
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let command = Command::from_name(name).expect("subcommands come from COMMANDS");
    run_command(command, sub, env).map_err(RunError::Cli)
}

fn run_command(
    command: Command,
    m: &ArgMatches,
    env: impl Fn(&str) -> Option<String>,
) -> Result<Run, CliError> {
    let file = match m.get_one::<String>("config") {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_kv(&text)?
        }
        None => Vec::new(),
    };
    let env: BTreeMap<String, String> = ENV_VARS
        .iter()
        .filter_map(|(var, key)| env(var).map(|v| (key.to_string(), v)))
        .collect();
    let mut params = Params::resolve(&command.schema(), &flags_of(m, command), &env, &file)?;

    let out = params.text("out-dir")?.to_owned();
    let out = Path::new(&out);
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;

    let threads = params.int("threads")? as usize;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Threads(e.to_string()))?;
    let outputs = pool.install(|| command.run(&mut params, out))?;

    let manifest = Manifest {
        tool: "seba",
        version: env!("CARGO_PKG_VERSION"),
        command: command.name(),
        params: params.values(),
        sources: params.sources(),
        outputs: &outputs.files,
        summary: &outputs.summary,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    let path = out.join(MANIFEST);
    fs::write(&path, text).map_err(|e| CliError::io(path, e))?;
    Ok(Run {
        command,
        params,
        outputs,
    })
}

#[derive(Debug)]
pub enum RunError {
    /// Usage errors, and also `--help` and `--version`.
    Clap(clap::Error),
    Cli(CliError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Clap(e) => e.exit_code(),
            RunError::Cli(e) => e.exit_code(),
        }
    }
}

/// Entry point for the binary: runs, reports to stderr and returns the exit status.
pub fn main_with_env() -> i32 {
    match run(std::env::args_os(), |k| std::env::var(k).ok()) {
        Ok(_) => 0,
        Err(RunError::Clap(e)) => {
            let _ = e.print();
            e.exit_code()
        }
        Err(RunError::Cli(e)) => {
            eprintln!("seba: {e}");
            e.exit_code()
        }
    }
}
