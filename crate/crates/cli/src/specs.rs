//! Parsing of sequence and gauge specifications.
//!
//! Inline forms cover the parametric families (`constant:C`, `power:A`,
//! `power-log:B,G`, `explicit:V1,V2,...`); `@path.json` loads a structured
//! spec with keys `kind` / `alpha` / `beta` / `gamma` / `values`.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use lambda_bv::{ModulusOfContinuity, WatermanSequence};

use crate::CliError;

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum SequenceSpecFile {
    /// `alpha` holds the constant weight.
    Constant { alpha: f64 },
    Power { alpha: f64 },
    Explicit { values: Vec<f64> },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum ModulusSpecFile {
    Power { beta: f64 },
    PowerLog { beta: f64, gamma: f64 },
    Tabulated { values: Vec<(f64, f64)> },
}

fn parse_number(text: &str, what: &str) -> Result<f64, CliError> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("{what}: expected a number, got '{text}'")))
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|part| parse_number(part, what))
        .collect()
}

fn read_spec_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(Path::new(path))
        .map_err(|e| CliError::Usage(format!("cannot read spec file '{path}': {e}")))
}

pub fn parse_sequence(spec: &str) -> Result<WatermanSequence, CliError> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = read_spec_file(path)?;
        let file: SequenceSpecFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("malformed sequence spec '{path}': {e}")))?;
        return Ok(match file {
            SequenceSpecFile::Constant { alpha } => WatermanSequence::constant(alpha)?,
            SequenceSpecFile::Power { alpha } => WatermanSequence::power(alpha)?,
            SequenceSpecFile::Explicit { values } => WatermanSequence::explicit(values)?,
        });
    }
    let (kind, args) = spec.split_once(':').ok_or_else(|| {
        CliError::Usage(format!(
            "sequence spec '{spec}' must look like kind:args or @file.json"
        ))
    })?;
    Ok(match kind {
        "constant" => WatermanSequence::constant(parse_number(args, "constant weight")?)?,
        "power" => WatermanSequence::power(parse_number(args, "power exponent")?)?,
        "explicit" => WatermanSequence::explicit(parse_list(args, "explicit weights")?)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown sequence kind '{other}' (expected constant, power or explicit)"
            )))
        }
    })
}

pub fn parse_modulus(spec: &str) -> Result<ModulusOfContinuity, CliError> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = read_spec_file(path)?;
        let file: ModulusSpecFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("malformed gauge spec '{path}': {e}")))?;
        return Ok(match file {
            ModulusSpecFile::Power { beta } => ModulusOfContinuity::power(beta)?,
            ModulusSpecFile::PowerLog { beta, gamma } => {
                ModulusOfContinuity::power_log(beta, gamma)?
            }
            ModulusSpecFile::Tabulated { values } => ModulusOfContinuity::tabulated(values)?,
        });
    }
    let (kind, args) = spec.split_once(':').ok_or_else(|| {
        CliError::Usage(format!(
            "gauge spec '{spec}' must look like kind:args or @file.json"
        ))
    })?;
    Ok(match kind {
        "power" => ModulusOfContinuity::power(parse_number(args, "gauge exponent")?)?,
        "power-log" => {
            let parts = parse_list(args, "power-log parameters")?;
            if parts.len() != 2 {
                return Err(CliError::Usage(
                    "power-log takes exactly two parameters: beta,gamma".into(),
                ));
            }
            ModulusOfContinuity::power_log(parts[0], parts[1])?
        }
        "tabulated" => {
            return Err(CliError::Usage(
                "tabulated gauges are file-only: pass @file.json with kind = \"tabulated\""
                    .into(),
            ))
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown gauge kind '{other}' (expected power, power-log or @file)"
            )))
        }
    })
}
