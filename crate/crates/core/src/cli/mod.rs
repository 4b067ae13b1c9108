//! Command-line front end: every run resolves a full configuration, echoes
//! it into its output and either writes a result or a JSON error record.

mod commands;
mod config;
mod portrait;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Arg, ArgAction, Command};
use serde_json::{json, Value as Json};

pub use commands::{CliCommand, CommandRegistry, Output};
pub use config::{parse_config_text, read_config_file, KeySpec, Kind, RunConfig, Value};
pub use portrait::{level_extent, phase_portrait, PortraitPoint};

use crate::error::{Error, Result};

/// Exit status for invalid invocations or configurations.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for failures while running a valid configuration.
pub const EXIT_RUN: i32 = 1;

fn clap_command(reg: &CommandRegistry) -> Command {
    let mut app = Command::new("isores")
        .about("Resonance in forced bounded isochronous oscillators")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true);
    for cmd in reg.iter() {
        let mut sub = Command::new(cmd.name()).about(cmd.about()).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("key = value file (or a JSON config echo); flags take precedence"),
        );
        for key in cmd.schema() {
            let help = if key.default.is_empty() {
                key.help.to_string()
            } else {
                format!("{} [default: {}]", key.help, key.default)
            };
            sub = sub.arg(
                Arg::new(key.name)
                    .long(key.flag())
                    .value_name(key.name.to_uppercase())
                    .help(help)
                    .action(ArgAction::Set)
                    .allow_negative_numbers(true),
            );
        }
        app = app.subcommand(sub);
    }
    app
}

/// Reads `--config`, accepting either `key = value` lines or the JSON
/// config echo of an earlier run of the same command.
fn config_layer(path: &Path, command: &str) -> Result<Vec<(String, String)>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if !text.trim_start().starts_with('{') {
        return parse_config_text(&text, &path.display().to_string());
    }
    let json: Json = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let echo = json.get("config").unwrap_or(&json);
    let (cmd, entries) = RunConfig::echo_entries(echo)?;
    if cmd != command {
        return Err(Error::Config(vec![format!(
            "{}: echo belongs to `{cmd}`, not `{command}`",
            path.display()
        )]));
    }
    Ok(entries)
}

/// Parses the arguments into a validated configuration.
pub fn resolve_args<I, T>(
    reg: &CommandRegistry,
    args: I,
) -> Result<(RunConfig, std::sync::Arc<dyn CliCommand>)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = clap_command(reg)
        .try_get_matches_from(args)
        .map_err(|e| Error::Usage(e.to_string().trim().to_string()))?;
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    let cmd = reg.get(name)?;
    let schema = cmd.schema();
    let mut layers = Vec::new();
    if let Some(path) = sub.get_one::<String>("config") {
        layers.push(("config file", config_layer(Path::new(path), name)?));
    }
    let flags = schema
        .iter()
        .filter_map(|k| {
            sub.get_one::<String>(k.name)
                .map(|v| (k.name.to_string(), v.clone()))
        })
        .collect();
    layers.push(("flag", flags));
    let cfg = RunConfig::resolve(name, &schema, &layers)?;
    let problems = cmd.validate(&cfg);
    if !problems.is_empty() {
        return Err(Error::Config(problems));
    }
    Ok((cfg, cmd))
}

/// Formats a real with 17 significant digits.
pub fn format_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// Renders an output with the config echo embedded.
pub fn render(cfg: &RunConfig, output: &Output) -> String {
    match output {
        Output::Json(value) => {
            let mut doc = serde_json::Map::new();
            doc.insert("config".into(), cfg.echo());
            match value {
                Json::Object(map) => doc.extend(map.clone()),
                other => {
                    doc.insert("result".into(), other.clone());
                }
            }
            let mut text =
                serde_json::to_string_pretty(&Json::Object(doc)).expect("JSON values serialize");
            text.push('\n');
            text
        }
        Output::Csv {
            notes,
            columns,
            rows,
        } => {
            let mut text = format!("# config: {}\n", cfg.echo());
            for (name, value) in notes {
                text.push_str(&format!("# {name}: {value}\n"));
            }
            text.push_str(&columns.join(","));
            text.push('\n');
            for row in rows {
                let cells: Vec<String> = row.iter().map(|&v| format_real(v)).collect();
                text.push_str(&cells.join(","));
                text.push('\n');
            }
            text
        }
    }
}

/// The machine-readable record printed on failure.
pub fn error_record(err: &Error) -> Json {
    let kind = match err {
        Error::Config(_) => "config",
        Error::Usage(_) => "usage",
        Error::Io(_) => "io",
        Error::Parse(_) => "parse",
        Error::UnknownName { .. } => "unknown_name",
        Error::InvalidParameter(_)
        | Error::InvalidRadius(_)
        | Error::InvalidRule(_)
        | Error::TooFewSamples(_) => "invalid_parameter",
        Error::Domain { .. } => "domain",
        Error::InvalidUrabe(_) | Error::NonIntegrable(_) => "urabe",
        Error::SingularityApproach { .. } | Error::DomainExit { .. } | Error::StepUnderflow(_) => {
            "integration"
        }
        Error::NoConvergence { .. } | Error::BesselRange(_) | Error::BesselOrder(_) => "numerics",
    };
    let problems = match err {
        Error::Config(p) => p.clone(),
        other => vec![other.to_string()],
    };
    json!({ "error": { "kind": kind, "message": err.to_string(), "problems": problems } })
}

fn exit_status(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Usage(_) | Error::UnknownName { .. } => EXIT_CONFIG,
        _ => EXIT_RUN,
    }
}

/// Runs one invocation, writing results (or the error record) to `out`.
/// Returns the process exit status.
pub fn run<I, T, W>(args: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let reg = CommandRegistry::builtin();
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    // help and version are not errors
    if let Err(e) = clap_command(&reg).try_get_matches_from(&args) {
        use clap::error::ErrorKind;
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            let _ = write!(out, "{e}");
            return 0;
        }
    }
    let result = resolve_args(&reg, &args).and_then(|(cfg, cmd)| {
        let text = render(&cfg, &cmd.execute(&cfg)?);
        match cfg.text("output") {
            "" => out.write_all(text.as_bytes())?,
            path => {
                std::fs::write(path, &text).map_err(|e| Error::Io(format!("{path}: {e}")))?;
                let note = json!({ "command": cfg.command, "output": path });
                writeln!(out, "{note}")?;
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&error_record(&err)).unwrap()
            );
            exit_status(&err)
        }
    }
}
