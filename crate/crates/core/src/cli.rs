//! The `motoguard` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 bad input data.

use crate::facerec::{lbp_map, FaceDb, MatchResult, DEFAULT_THRESHOLD};
use crate::imaging::{load_frame, save_pgm};
use crate::sim::{parse_scenario, render_trace, run_scenario, DirFrames};
use crate::storage::{load_config, load_facedb, save_facedb};
use clap::{Parser, Subcommand};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "motoguard", about = "Anti-theft ignition controller simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Add a face to the database (created if missing).
    Enroll {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        label: String,
        #[arg(long)]
        image: PathBuf,
    },
    /// Match a face image against the database.
    Identify {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        image: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Replay a scenario and print the trace.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Write the LBP code map of an image as a PGM.
    Lbp {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure carrying its exit code and one-line diagnostic.
struct Failure(i32, String);

fn data_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_DATA, format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| data_err(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| data_err(path, e))
}

/// Runs the CLI with explicit arguments and output streams. `argv[0]` is the
/// program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "motoguard: {msg}");
            code
        }
    }
}

/// Entry point used by the binary.
pub fn cli_main(argv: Vec<String>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Enroll { db, label, image } => {
            let current = if db.exists() {
                load_facedb(&read(&db)?).map_err(|e| data_err(&db, e))?
            } else {
                FaceDb::new()
            };
            let img = load_frame(&read(&image)?).map_err(|e| data_err(&image, e))?;
            let updated = current.enroll(&label, &img).map_err(|e| data_err(&db, e))?;
            write(&db, &save_facedb(&updated))?;
            writeln!(out, "ENROLLED {label} ({} templates)", updated.len())
                .map_err(|e| Failure(EXIT_DATA, e.to_string()))
        }
        Command::Identify { db, image, threshold } => {
            if !(threshold.is_finite() && threshold >= 0.0) {
                return Err(Failure(EXIT_USAGE, format!("invalid threshold {threshold}")));
            }
            let faces = load_facedb(&read(&db)?).map_err(|e| data_err(&db, e))?;
            let img = load_frame(&read(&image)?).map_err(|e| data_err(&image, e))?;
            let line = match faces.identify(&img, threshold) {
                MatchResult::Match { label, distance } => format!("MATCH {label} {distance:.6}"),
                MatchResult::NoMatch { best_distance: Some(d) } => format!("NOMATCH {d:.6}"),
                MatchResult::NoMatch { best_distance: None } => "NOMATCH -".to_owned(),
            };
            writeln!(out, "{line}").map_err(|e| Failure(EXIT_DATA, e.to_string()))
        }
        Command::Run { config, db, scenario, trace_out } => {
            let cfg = load_config(&read(&config)?).map_err(|e| data_err(&config, e))?;
            let faces = load_facedb(&read(&db)?).map_err(|e| data_err(&db, e))?;
            let text = String::from_utf8(read(&scenario)?)
                .map_err(|_| data_err(&scenario, "not valid UTF-8"))?;
            let events = parse_scenario(&text).map_err(|e| data_err(&scenario, e))?;
            let base = scenario.parent().map(Path::to_path_buf).unwrap_or_default();
            let trace = run_scenario(&events, &cfg, &faces, &DirFrames::new(base))
                .map_err(|e| data_err(&config, e))?;
            let rendered = render_trace(&trace);
            match trace_out {
                Some(path) => write(&path, rendered.as_bytes()),
                None => out
                    .write_all(rendered.as_bytes())
                    .map_err(|e| Failure(EXIT_DATA, e.to_string())),
            }
        }
        Command::Lbp { image, out: dest } => {
            let img = load_frame(&read(&image)?).map_err(|e| data_err(&image, e))?;
            write(&dest, &save_pgm(&lbp_map(&img).to_image()))
        }
    }
}
