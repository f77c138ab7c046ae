mod archive;
mod commands;
mod error;
mod output;
mod params;
mod svg;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use clap::error::ErrorKind;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::params::Params;

pub const RUN_MANIFEST: &str = "run.json";

/// Everything needed to repeat a run.
#[derive(Debug, Serialize, Deserialize)]
struct RunManifest {
    tool: String,
    version: String,
    command: String,
    params: BTreeMap<String, String>,
}

fn execute(p: &Params) -> CliResult<()> {
    let out_dir = p.path("out")?;
    let mut outputs = commands::run(p)?;
    let manifest = RunManifest {
        tool: "motorsig".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: p.command.clone(),
        params: p.values.clone(),
    };
    outputs.add(RUN_MANIFEST, archive::json_bytes(&manifest));
    let written = outputs.commit(&out_dir)?;
    println!("{}: wrote {} files to {}", p.command, written.len(), out_dir.display());
    Ok(())
}

fn rerun(path: &Path, out: Option<&String>) -> CliResult<Params> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let m: RunManifest =
        serde_json::from_str(&text).map_err(|e| CliError::validation(format!("{}: malformed run manifest: {e}", path.display())))?;
    let spec = params::spec(&m.command)
        .ok_or_else(|| CliError::validation(format!("{}: unknown command {:?}", path.display(), m.command)))?;
    let flags: BTreeMap<String, String> = out.map(|o| ("out".to_string(), o.clone())).into_iter().collect();
    params::resolve(spec, &m.params, &flags)
}

fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let matches = match params::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => error::Kind::Validation as i32,
            };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let resolved = if name == "rerun" {
        rerun(Path::new(sub.get_one::<String>("manifest").expect("required")), sub.get_one::<String>("out"))
    } else {
        let spec = params::spec(name).expect("every subcommand has a spec");
        let file = match sub.get_one::<String>("config") {
            Some(c) => params::read_config(Path::new(c)),
            None => Ok(BTreeMap::new()),
        };
        file.and_then(|f| params::resolve(spec, &f, &params::flags(spec, sub)))
    };
    match resolved.and_then(|p| execute(&p)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn main() {
    std::process::exit(run(std::env::args_os()));
}
