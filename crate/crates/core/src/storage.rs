//! Text formats for the enrolled face database and controller configuration.
//!
//! Face database (`FACEDB v1`):
//!
//! ```text
//! FACEDB v1
//! TEMPLATE <label> 8 8 256
//! <256 space-separated bins>     (64 lines, row-major cells)
//! ...
//! ```
//!
//! Configuration is `key=value` lines; `#` comments and blank lines are
//! skipped.

use crate::controller::{ConfigError, ControllerConfig};
use crate::facerec::{FaceDb, FaceError, FaceTemplate, Histogram, BINS, GRID};
use std::collections::HashSet;
use thiserror::Error;

pub const FACEDB_HEADER: &str = "FACEDB v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaceDbError {
    #[error("bad header (expected {FACEDB_HEADER:?})")]
    BadHeader,
    #[error("line {line}: {reason}")]
    DimensionMismatch { line: usize, reason: String },
    #[error("duplicate template label {0:?}")]
    DuplicateLabel(String),
    #[error("line {line}: malformed number {text:?}")]
    MalformedNumber { line: usize, text: String },
    #[error("line {line}: expected a TEMPLATE line")]
    MalformedLine { line: usize },
    #[error("file is not valid UTF-8")]
    Encoding,
    #[error(transparent)]
    Template(#[from] FaceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigFileError {
    #[error("missing required key {0:?}")]
    MissingRequiredKey(&'static str),
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: malformed value for {key:?}: {text:?}")]
    MalformedValue {
        line: usize,
        key: String,
        text: String,
    },
    #[error("line {line}: expected key=value")]
    MalformedLine { line: usize },
    #[error("line {line}: key {key:?} given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("file is not valid UTF-8")]
    Encoding,
    #[error("invalid configuration: {0}")]
    Invalid(#[from] ConfigError),
}

/// Shortest-form rendering of `x` rounded to 9 significant digits.
fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let rounded: f64 = sci.parse().expect("round-trips");
        let places = (8 - exp).max(0) as usize;
        let s = format!("{rounded:.places$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s
        }
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{exp}")
    }
}

pub fn save_facedb(db: &FaceDb) -> Vec<u8> {
    let mut out = String::from(FACEDB_HEADER);
    out.push('\n');
    for t in db.templates() {
        out.push_str(&format!("TEMPLATE {} {GRID} {GRID} {BINS}\n", t.label()));
        for cell in t.cells() {
            let line: Vec<String> = cell.bins().iter().map(|&b| sig9(b)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out.into_bytes()
}

pub fn load_facedb(bytes: &[u8]) -> Result<FaceDb, FaceDbError> {
    let text = std::str::from_utf8(bytes).map_err(|_| FaceDbError::Encoding)?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h.trim_end() == FACEDB_HEADER => {}
        _ => return Err(FaceDbError::BadHeader),
    }
    let mut seen = HashSet::new();
    let mut templates = Vec::new();
    while let Some((line_no, line)) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [kw, label, rows, cols, bins] = parts[..] else {
            return Err(FaceDbError::MalformedLine { line: line_no });
        };
        if kw != "TEMPLATE" {
            return Err(FaceDbError::MalformedLine { line: line_no });
        }
        let dims = [rows, cols, bins].map(|d| d.parse::<usize>().ok());
        if dims != [Some(GRID), Some(GRID), Some(BINS)] {
            return Err(FaceDbError::DimensionMismatch {
                line: line_no,
                reason: format!("declared {rows}x{cols}x{bins}, expected {GRID}x{GRID}x{BINS}"),
            });
        }
        if !seen.insert(label.to_owned()) {
            return Err(FaceDbError::DuplicateLabel(label.to_owned()));
        }
        let mut cells = Vec::with_capacity(GRID * GRID);
        for _ in 0..GRID * GRID {
            let Some((row_no, row)) = lines.next() else {
                return Err(FaceDbError::DimensionMismatch {
                    line: line_no,
                    reason: format!("template {label:?} has only {} of {} cells", cells.len(), GRID * GRID),
                });
            };
            let values = row
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite() && *v >= 0.0)
                        .ok_or_else(|| FaceDbError::MalformedNumber {
                            line: row_no,
                            text: tok.to_owned(),
                        })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            if values.len() != BINS {
                return Err(FaceDbError::DimensionMismatch {
                    line: row_no,
                    reason: format!("{} bins, expected {BINS}", values.len()),
                });
            }
            cells.push(Histogram::from_bins(&values)?);
        }
        templates.push(FaceTemplate::new(label, cells)?);
    }
    Ok(FaceDb::from_templates(templates)?)
}

const CONFIG_KEYS: [&str; 8] = [
    "owner_number",
    "passcode",
    "ignite_kw",
    "locate_kw",
    "face_threshold",
    "move_threshold_m",
    "alert_cooldown_ms",
    "max_keypad_attempts",
];

pub fn load_config(bytes: &[u8]) -> Result<ControllerConfig, ConfigFileError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ConfigFileError::Encoding)?;
    let mut config = ControllerConfig::new("", "");
    let mut seen: HashSet<&str> = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(ConfigFileError::MalformedLine { line: line_no })?;
        let (key, value) = (key.trim(), value.trim());
        let Some(&known) = CONFIG_KEYS.iter().find(|k| **k == key) else {
            return Err(ConfigFileError::UnknownKey {
                line: line_no,
                key: key.to_owned(),
            });
        };
        if !seen.insert(known) {
            return Err(ConfigFileError::DuplicateKey {
                line: line_no,
                key: key.to_owned(),
            });
        }
        let malformed = || ConfigFileError::MalformedValue {
            line: line_no,
            key: key.to_owned(),
            text: value.to_owned(),
        };
        match known {
            "owner_number" => config.owner_number = value.to_owned(),
            "passcode" => config.passcode = value.to_owned(),
            "ignite_kw" => config.ignite_kw = value.to_owned(),
            "locate_kw" => config.locate_kw = value.to_owned(),
            "face_threshold" => config.face_threshold = value.parse().map_err(|_| malformed())?,
            "move_threshold_m" => config.move_threshold_m = value.parse().map_err(|_| malformed())?,
            "alert_cooldown_ms" => config.alert_cooldown_ms = value.parse().map_err(|_| malformed())?,
            "max_keypad_attempts" => {
                config.max_keypad_attempts = value.parse().map_err(|_| malformed())?
            }
            _ => unreachable!("key list and match arms agree"),
        }
    }
    for required in ["owner_number", "passcode"] {
        if !seen.contains(required) {
            return Err(ConfigFileError::MissingRequiredKey(required));
        }
    }
    config.validate()?;
    Ok(config)
}

/// Writes every key, including defaults, in a stable order.
pub fn save_config(config: &ControllerConfig) -> Vec<u8> {
    format!(
        "owner_number={}\npasscode={}\nignite_kw={}\nlocate_kw={}\nface_threshold={}\nmove_threshold_m={}\nalert_cooldown_ms={}\nmax_keypad_attempts={}\n",
        config.owner_number,
        config.passcode,
        config.ignite_kw,
        config.locate_kw,
        config.face_threshold,
        config.move_threshold_m,
        config.alert_cooldown_ms,
        config.max_keypad_attempts,
    )
    .into_bytes()
}
