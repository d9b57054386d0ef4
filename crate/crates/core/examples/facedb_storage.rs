//! Persist the face database and controller configuration.
//!
//! ```bash
//! cargo run -p motoguard --example facedb_storage
//! ```

use motoguard::controller::ControllerConfig;
use motoguard::facerec::FaceDb;
use motoguard::storage::{load_config, load_facedb, save_config, save_facedb};
use motoguard::synth;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let db = FaceDb::new()
        .enroll("rider", &synth::face(96, 96, 0))?
        .enroll("mechanic", &synth::face(96, 96, 3))?;
    let bytes = save_facedb(&db);
    let text = String::from_utf8_lossy(&bytes);
    println!("{} bytes, {} lines", bytes.len(), text.lines().count());
    for line in text.lines().filter(|l| !l.starts_with(|c: char| c.is_ascii_digit())) {
        println!("  {line}");
    }
    let back = load_facedb(&bytes)?;
    let (a, b) = (&db.templates()[0], &db.templates()[1]);
    let (a2, b2) = (&back.templates()[0], &back.templates()[1]);
    println!("distance before {:.9}, after {:.9}", a.distance(b), a2.distance(b2));

    let mut config = ControllerConfig::new("+639170000000", "2468");
    config.move_threshold_m = 7.5;
    let saved = save_config(&config);
    print!("{}", String::from_utf8_lossy(&saved));
    assert_eq!(load_config(&saved)?, config);

    match load_config(b"owner_number=+63\npasscode=1\nmove_treshold_m=3\n") {
        Err(e) => println!("typo caught: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
