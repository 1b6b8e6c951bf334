use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::args::Format;
use crate::CliError;

/// What a command produced. `passed` is false when a checked property
/// failed; informational commands always pass.
#[derive(Debug)]
pub struct Report {
    pub passed: bool,
    pub text: String,
    pub json: Value,
    pub csv: Option<String>,
    pub dot: Option<String>,
    pub default_format: Format,
}

impl Report {
    pub fn new(passed: bool, text: String, json: impl Serialize) -> Self {
        Self {
            passed,
            text,
            json: serde_json::to_value(json).expect("reports are plain data"),
            csv: None,
            dot: None,
            default_format: Format::Text,
        }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }

    pub fn prefer(mut self, format: Format) -> Self {
        self.default_format = format;
        self
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let missing = || CliError::Usage(format!("this command has no {format:?} output").to_lowercase());
        Ok(match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("reports are plain data");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone().ok_or_else(missing)?,
            Format::Dot => self.dot.clone().ok_or_else(missing)?,
        })
    }
}

#[derive(Serialize)]
struct FileEntry {
    name: String,
    bytes: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    seed: u64,
    budget: u64,
    cover: Option<String>,
    passed: bool,
    files: Vec<FileEntry>,
}

pub struct RunInfo<'a> {
    pub command: &'a str,
    pub seed: u64,
    pub budget: u64,
    pub cover: Option<&'a Path>,
}

/// Writes the rendered output, the JSON report and a manifest into `dir`.
pub fn write_artifacts(dir: &Path, info: &RunInfo, report: &Report, format: Format) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let mut outputs = vec![(format!("{}.json", info.command), report.render(Format::Json)?)];
    if format != Format::Json {
        outputs.push((format!("{}.{}", info.command, format.extension()), report.render(format)?));
    }
    let mut files = Vec::new();
    for (name, body) in outputs {
        fs::write(dir.join(&name), &body)?;
        files.push(FileEntry { name, bytes: body.len() });
    }
    let manifest = Manifest {
        tool: "chaoscope",
        version: env!("CARGO_PKG_VERSION"),
        command: info.command,
        seed: info.seed,
        budget: info.budget,
        cover: info.cover.map(|p| p.display().to_string()),
        passed: report.passed,
        files,
    };
    let mut body = serde_json::to_string_pretty(&manifest).expect("plain data");
    body.push('\n');
    fs::write(dir.join("manifest.json"), body)?;
    Ok(())
}
