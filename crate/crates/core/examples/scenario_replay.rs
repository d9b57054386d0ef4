//! Replay a scenario file end to end, exactly as `motoguard run` does.
//!
//! ```bash
//! cargo run -p motoguard --example scenario_replay
//! ```

use motoguard::controller::ControllerConfig;
use motoguard::facerec::FaceDb;
use motoguard::geo::{gga_sentence, GeoFix};
use motoguard::imaging::save_pgm;
use motoguard::sim::{parse_scenario, render_trace, run_scenario, DirFrames};
use motoguard::synth;

const OWNER: &str = "+639170000000";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    std::fs::write(dir.path().join("owner.pgm"), save_pgm(&synth::face(96, 96, 0)))?;
    std::fs::write(dir.path().join("thief.pgm"), save_pgm(&synth::face(96, 96, 1)))?;

    let parked = gga_sentence(&GeoFix::new(14.5995, 120.9842));
    let moved = gga_sentence(&GeoFix::new(14.5996, 120.9842));
    let scenario = format!(
        "# morning commute, then a theft attempt\n\
         0 CAMERA owner.pgm\n\
         1000 NMEA {parked}\n\
         2000 ENGINE_OFF\n\
         60000 CAMERA thief.pgm\n\
         60500 KEY 1\n\
         60600 KEY ENTER\n\
         61000 NMEA {moved}\n\
         62000 SMS {OWNER} LOCATE\n"
    );
    let config = ControllerConfig::new(OWNER, "4321");
    let db = FaceDb::new().enroll("owner", &synth::face(96, 96, 0))?;

    let events = parse_scenario(&scenario)?;
    let trace = run_scenario(&events, &config, &db, &DirFrames::new(dir.path()))?;
    print!("{}", render_trace(&trace));

    let again = run_scenario(&events, &config, &db, &DirFrames::new(dir.path()))?;
    assert_eq!(render_trace(&trace), render_trace(&again));
    Ok(())
}
