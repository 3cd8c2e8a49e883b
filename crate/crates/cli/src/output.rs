use std::ffi::OsString;
use std::io::Write;

use anyhow::{bail, Context};
use clap::ValueEnum;
use serde::Serialize;

use crate::manifest::RunManifest;
use crate::Global;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A command result in every representation it supports.
pub struct Output {
    pub default: Format,
    pub json: serde_json::Value,
    pub csv: Option<(Vec<String>, Vec<Vec<String>>)>,
    pub text: Option<String>,
    /// Subcommand-specific settings recorded in the manifest.
    pub config: serde_json::Value,
    /// With --out in a non-JSON format, also write the JSON form to `<out>.json`.
    pub companion_json: bool,
}

impl Output {
    pub fn json<T: Serialize>(value: &T, config: serde_json::Value) -> anyhow::Result<Self> {
        Ok(Output { default: Format::Json, json: serde_json::to_value(value)?, csv: None, text: None, config, companion_json: false })
    }

    pub fn with_csv(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.csv = Some((header.iter().map(|s| s.to_string()).collect(), rows));
        self
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    pub fn with_companion_json(mut self) -> Self {
        self.companion_json = true;
        self
    }

    pub fn default_format(mut self, f: Format) -> Self {
        self.default = f;
        self
    }

    pub fn render(&self, format: Format) -> anyhow::Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_vec_pretty(&self.json)?;
                s.push(b'\n');
                Ok(s)
            }
            Format::Csv => {
                let Some((header, rows)) = &self.csv else { bail!("this command has no CSV form") };
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(header)?;
                for r in rows {
                    w.write_record(r)?;
                }
                Ok(w.into_inner()?)
            }
            Format::Text => match &self.text {
                Some(t) => Ok(t.clone().into_bytes()),
                None => {
                    let mut s = serde_json::to_vec_pretty(&self.json)?;
                    s.push(b'\n');
                    Ok(s)
                }
            },
        }
    }
}

/// Writes the rendered output to --out (with its manifest) or to standard output.
pub fn deliver(out: &Output, g: &Global, args: &[OsString], wall_time: f64) -> anyhow::Result<()> {
    let format = g.format.unwrap_or(out.default);
    let bytes = out.render(format)?;
    match &g.out {
        Some(path) => {
            std::fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?;
            let mut written = vec![(path.clone(), bytes)];
            if out.companion_json && format != Format::Json {
                let mut p = path.as_os_str().to_owned();
                p.push(".json");
                let json = out.render(Format::Json)?;
                std::fs::write(&p, &json).with_context(|| format!("writing {}", p.to_string_lossy()))?;
                written.push((p.into(), json));
            }
            let digests: Vec<_> = written.iter().map(|(p, b)| (p.clone(), b.as_slice())).collect();
            let m = RunManifest::new(args, g, out.config.clone(), wall_time, &digests);
            m.write_next_to(path)?;
        }
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

pub fn f(x: f64) -> String {
    format!("{x:.17e}")
}
