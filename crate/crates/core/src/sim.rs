//! Deterministic scenario replay.
//!
//! A scenario is a text file of timestamped hardware events:
//!
//! ```text
//! # t_ms KIND payload
//! 0     CAMERA faces/owner.pgm
//! 100   KEY 4
//! 150   KEY ENTER
//! 200   SMS +639170000000 LOCATE
//! 300   NMEA $GPGGA,...*47
//! 400   ENGINE_OFF
//! ```
//!
//! Running it drives a fresh controller and records every input and action
//! as a trace line `<t_ms> <TAG> <detail>`. Only scenario timestamps are used
//! as time, so identical inputs always give byte-identical traces.

use crate::controller::{init, Action, ConfigError, ControllerConfig, Event, ImageUploader};
use crate::facerec::FaceDb;
use crate::imaging::{load_frame, save_pgm, GrayImage, ImageError};
use crate::telecom::SmsMessage;
use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const UPLOAD_URL_PREFIX: &str = "https://sim.local/img/";

const FNV_OFFSET_BASIS: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET_BASIS, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(FNV_PRIME)
    })
}

/// Stand-in image host: the URL is derived from the FNV-1a hash of the bytes.
pub fn upload_stub(image_bytes: &[u8]) -> String {
    format!("{UPLOAD_URL_PREFIX}{:016x}", fnv1a64(image_bytes))
}

/// Uploads the canonical P5 encoding of a frame through [`upload_stub`].
#[derive(Debug, Clone, Copy, Default)]
pub struct HashUploader;

impl ImageUploader for HashUploader {
    fn upload(&self, image: &GrayImage) -> String {
        upload_stub(&save_pgm(image))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Key {
    Digit(char),
    Enter,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioKind {
    Camera(PathBuf),
    Key(Key),
    Sms { sender: String, body: String },
    Nmea(String),
    EngineOff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioEvent {
    pub t: u64,
    pub kind: ScenarioKind,
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioKind::Camera(p) => write!(f, "CAMERA {}", p.display()),
            ScenarioKind::Key(Key::Digit(d)) => write!(f, "KEY {d}"),
            ScenarioKind::Key(Key::Enter) => f.write_str("KEY ENTER"),
            ScenarioKind::Sms { sender, body } => write!(f, "SMS {sender} {body}"),
            ScenarioKind::Nmea(s) => write!(f, "NMEA {s}"),
            ScenarioKind::EngineOff => f.write_str("ENGINE_OFF"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("line {0}: malformed scenario line")]
    MalformedLine(usize),
}

/// Parses scenario text. Events come back sorted by time; events with equal
/// timestamps keep their file order.
pub fn parse_scenario(text: &str) -> Result<Vec<ScenarioEvent>, ScenarioError> {
    let mut events = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || ScenarioError::MalformedLine(line_no);
        let (t, rest) = split_word(line).ok_or_else(bad)?;
        let t: u64 = t.parse().map_err(|_| bad())?;
        let (kind, payload) = split_word(rest).unwrap_or((rest, ""));
        let kind = match kind {
            "CAMERA" if !payload.is_empty() && !payload.contains(char::is_whitespace) => {
                ScenarioKind::Camera(PathBuf::from(payload))
            }
            "KEY" => match payload {
                "ENTER" => ScenarioKind::Key(Key::Enter),
                d if d.len() == 1 && d.as_bytes()[0].is_ascii_digit() => {
                    ScenarioKind::Key(Key::Digit(d.chars().next().expect("one char")))
                }
                _ => return Err(bad()),
            },
            "SMS" => {
                let (sender, body) = split_word(payload).unwrap_or((payload, ""));
                if sender.is_empty() {
                    return Err(bad());
                }
                ScenarioKind::Sms {
                    sender: sender.to_owned(),
                    body: body.to_owned(),
                }
            }
            "NMEA" if !payload.is_empty() => ScenarioKind::Nmea(payload.to_owned()),
            "ENGINE_OFF" if payload.is_empty() => ScenarioKind::EngineOff,
            _ => return Err(bad()),
        };
        events.push(ScenarioEvent { t, kind });
    }
    events.sort_by_key(|e| e.t);
    Ok(events)
}

fn split_word(s: &str) -> Option<(&str, &str)> {
    let s = s.trim_start();
    if s.is_empty() {
        return None;
    }
    match s.find(char::is_whitespace) {
        Some(i) => Some((&s[..i], s[i..].trim_start())),
        None => Some((s, "")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceTag {
    Event,
    SmsOut,
    Ignite,
    Stop,
    Ready,
    Error,
}

impl TraceTag {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceTag::Event => "EVENT",
            TraceTag::SmsOut => "SMS_OUT",
            TraceTag::Ignite => "IGNITE",
            TraceTag::Stop => "STOP",
            TraceTag::Ready => "READY",
            TraceTag::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    pub t: u64,
    pub tag: TraceTag,
    pub detail: String,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.t, self.tag.as_str())?;
        if !self.detail.is_empty() {
            write!(f, " {}", self.detail)?;
        }
        Ok(())
    }
}

/// Joins trace lines, one per line, each LF-terminated.
pub fn render_trace(trace: &[TraceLine]) -> String {
    trace.iter().map(|l| format!("{l}\n")).collect()
}

/// For SMS_OUT lines, splits the detail into (recipient, body).
pub fn sms_out_parts(line: &TraceLine) -> Option<(&str, &str)> {
    (line.tag == TraceTag::SmsOut).then(|| line.detail.split_once(' ').unwrap_or((&line.detail, "")))
}

pub fn action_trace(t: u64, action: &Action) -> TraceLine {
    let (tag, detail) = match action {
        Action::IgniteEngine => (TraceTag::Ignite, String::new()),
        Action::StopEngine => (TraceTag::Stop, String::new()),
        Action::SendSms { to, body } => (TraceTag::SmsOut, format!("{to} {body}")),
        Action::CaptureAndUpload { url, .. } => (TraceTag::Event, format!("UPLOAD {url}")),
        Action::ReadyIndicator => (TraceTag::Ready, String::new()),
        Action::LogError(e) => (TraceTag::Error, e.clone()),
    };
    TraceLine { t, tag, detail }
}

/// Where CAMERA events get their frames from.
pub trait FrameSource {
    fn load(&self, path: &Path) -> Result<GrayImage, FrameError>;
}

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Image { path: PathBuf, source: ImageError },
    #[error("{}: no such frame", .0.display())]
    Missing(PathBuf),
}

/// Reads PGM/PPM files, resolving relative paths against `base`.
#[derive(Debug, Clone)]
pub struct DirFrames {
    base: PathBuf,
}

impl DirFrames {
    pub fn new(base: impl Into<PathBuf>) -> Self {
        Self { base: base.into() }
    }
}

impl FrameSource for DirFrames {
    fn load(&self, path: &Path) -> Result<GrayImage, FrameError> {
        let full = self.base.join(path);
        let bytes = std::fs::read(&full).map_err(|source| FrameError::Io {
            path: path.to_owned(),
            source,
        })?;
        load_frame(&bytes).map_err(|source| FrameError::Image {
            path: path.to_owned(),
            source,
        })
    }
}

/// In-memory frames keyed by the path used in the scenario.
#[derive(Debug, Clone, Default)]
pub struct MemoryFrames(pub HashMap<PathBuf, GrayImage>);

impl MemoryFrames {
    pub fn insert(&mut self, path: impl Into<PathBuf>, img: GrayImage) {
        self.0.insert(path.into(), img);
    }
}

impl FrameSource for MemoryFrames {
    fn load(&self, path: &Path) -> Result<GrayImage, FrameError> {
        self.0
            .get(path)
            .cloned()
            .ok_or_else(|| FrameError::Missing(path.to_owned()))
    }
}

/// Replays `events` against a freshly initialised controller.
///
/// Frame loading failures become `ERROR` trace lines; the run continues.
pub fn run_scenario(
    events: &[ScenarioEvent],
    config: &ControllerConfig,
    db: &FaceDb,
    frames: &dyn FrameSource,
) -> Result<Vec<TraceLine>, ConfigError> {
    let (mut state, ready) = init(config)?;
    let mut trace: Vec<TraceLine> = ready.iter().map(|a| action_trace(0, a)).collect();
    let uploader = HashUploader;
    for ev in events {
        trace.push(TraceLine {
            t: ev.t,
            tag: TraceTag::Event,
            detail: ev.kind.to_string(),
        });
        let event = match &ev.kind {
            ScenarioKind::Camera(path) => match frames.load(path) {
                Ok(img) => Event::FaceCaptured(img),
                Err(e) => {
                    trace.push(TraceLine {
                        t: ev.t,
                        tag: TraceTag::Error,
                        detail: format!("camera: {e}"),
                    });
                    continue;
                }
            },
            ScenarioKind::Key(Key::Digit(d)) => Event::KeypadDigit(*d),
            ScenarioKind::Key(Key::Enter) => Event::KeypadSubmit,
            ScenarioKind::Sms { sender, body } => {
                Event::SmsArrived(SmsMessage::new(sender.clone(), body.clone(), ev.t))
            }
            ScenarioKind::Nmea(s) => Event::NmeaSentence(s.clone()),
            ScenarioKind::EngineOff => Event::EngineOff,
        };
        let actions = state.step(&event, config, db, &uploader, ev.t);
        trace.extend(actions.iter().map(|a| action_trace(ev.t, a)));
    }
    Ok(trace)
}
