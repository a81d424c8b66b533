//! Deterministic CSV/JSON emission of phase diagrams.
//!
//! Floats print at 17 significant digits so files are bit-stable across
//! runs; writes go through a temporary file renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use loschmidt::scan::AxisScale;
use loschmidt::PhaseDiagram64;

use crate::config::{CliError, OutputFormat, RunConfig};

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with the fixed column set, one row per cell, LF line endings.
pub fn to_csv(diagram: &PhaseDiagram64) -> String {
    let mut out = String::with_capacity(diagram.cells.len() * 160 + 64);
    out.push_str("x1,x2,G_re,G_im,echo,phase,rate,divergent\n");
    for cell in &diagram.cells {
        out.push_str(&fmt_float(cell.x1));
        out.push(',');
        out.push_str(&fmt_float(cell.x2));
        out.push(',');
        out.push_str(&fmt_float(cell.g.re));
        out.push(',');
        out.push_str(&fmt_float(cell.g.im));
        out.push(',');
        out.push_str(&fmt_float(cell.echo));
        out.push(',');
        if let Some(phase) = cell.phase {
            out.push_str(&fmt_float(phase));
        }
        out.push(',');
        out.push_str(&fmt_float(cell.rate));
        out.push(',');
        out.push_str(if cell.divergent { "true" } else { "false" });
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct JsonDiagram {
    pub metadata: JsonMetadata,
    pub axes: Vec<JsonAxis>,
    pub cells: Vec<JsonCell>,
    pub criticals: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct JsonMetadata {
    pub model: String,
    pub params: Vec<(String, f64)>,
    pub rate_cap: f64,
    pub n_steps: usize,
    pub system_size: usize,
    pub mode: String,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct JsonAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub n: usize,
    pub scale: String,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct JsonCell {
    pub x1: f64,
    pub x2: f64,
    #[serde(rename = "G_re")]
    pub g_re: f64,
    #[serde(rename = "G_im")]
    pub g_im: f64,
    pub echo: f64,
    pub phase: Option<f64>,
    pub rate: f64,
    pub divergent: bool,
}

pub fn to_json_value(diagram: &PhaseDiagram64) -> JsonDiagram {
    let axis = |a: &loschmidt::scan::GridAxis<f64>| JsonAxis {
        name: a.name.clone(),
        min: a.min,
        max: a.max,
        n: a.n,
        scale: match a.scale {
            AxisScale::Linear => "linear".into(),
            AxisScale::Log => "log".into(),
        },
    };
    let mut axes = vec![axis(&diagram.axis1)];
    if let Some(a2) = &diagram.axis2 {
        axes.push(axis(a2));
    }
    JsonDiagram {
        metadata: JsonMetadata {
            model: diagram.metadata.model.clone(),
            params: diagram.metadata.params.clone(),
            rate_cap: diagram.metadata.rate_cap,
            n_steps: diagram.metadata.n_steps,
            system_size: diagram.metadata.system_size,
            mode: diagram.metadata.mode.clone(),
        },
        axes,
        cells: diagram
            .cells
            .iter()
            .map(|c| JsonCell {
                x1: c.x1,
                x2: c.x2,
                g_re: c.g.re,
                g_im: c.g.im,
                echo: c.echo,
                phase: c.phase,
                rate: c.rate,
                divergent: c.divergent,
            })
            .collect(),
        criticals: diagram.criticals.iter().map(|&(a, b)| [a, b]).collect(),
    }
}

pub fn to_json(diagram: &PhaseDiagram64) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(&to_json_value(diagram))
        .map_err(|e| CliError::Io(format!("json serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Writes atomically: temporary file in the target directory, then rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io_err = |what: &str, e: std::io::Error| {
        CliError::Io(format!("{what} {}: {e}", path.display()))
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut file = fs::File::create(&tmp).map_err(|e| io_err("cannot create", e))?;
    file.write_all(bytes).map_err(|e| io_err("cannot write", e))?;
    file.sync_all().map_err(|e| io_err("cannot sync", e))?;
    drop(file);
    fs::rename(&tmp, path).map_err(|e| io_err("cannot move into place", e))?;
    Ok(())
}

pub fn write(diagram: &PhaseDiagram64, config: &RunConfig) -> Result<PathBuf, CliError> {
    let path = config.resolved_out_path();
    let bytes = match config.format {
        OutputFormat::Csv => to_csv(diagram).into_bytes(),
        OutputFormat::Json => to_json(diagram)?.into_bytes(),
    };
    atomic_write(&path, &bytes)?;
    Ok(path)
}
