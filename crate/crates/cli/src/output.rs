//! Report envelope and output targets.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use valnorm::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Emit {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
pub struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value_t)]
    pub emit: Emit,
}

/// The command name plus every argument, echoed into each report.
#[derive(Serialize)]
pub struct RunConfig<'a, A: Serialize> {
    command: &'static str,
    #[serde(flatten)]
    args: &'a A,
}

impl<'a, A: Serialize> RunConfig<'a, A> {
    pub fn new(command: &'static str, args: &'a A) -> Self {
        RunConfig { command, args }
    }
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    /// Only field that differs between identical runs.
    generated_at: String,
    config: &'a C,
    result: &'a R,
}

pub type CsvWriter<'a> = &'a dyn Fn(&mut dyn Write) -> valnorm::Result<()>;

/// Renders the report as JSON (wrapped in the envelope) or CSV and writes it
/// to `--out` or standard output.
pub fn emit<C: Serialize, R: Serialize>(
    out: &OutputArgs,
    config: &C,
    result: &R,
    csv: Option<CsvWriter>,
) -> Result<()> {
    let mut bytes = Vec::new();
    match out.emit {
        Emit::Json => {
            let envelope = Envelope {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                config,
                result,
            };
            serde_json::to_writer_pretty(&mut bytes, &envelope).map_err(Error::from)?;
            bytes.push(b'\n');
        }
        Emit::Csv => {
            let write = csv.ok_or_else(|| Error::Invalid("this command has no CSV form".into()))?;
            write(&mut bytes)?;
        }
    }
    match &out.out {
        Some(path) => fs::write(path, &bytes)
            .map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })
            .with_context(|| format!("writing report to {}", path.display()))?,
        None => io::stdout()
            .lock()
            .write_all(&bytes)
            .context("writing report to standard output")?,
    }
    Ok(())
}
