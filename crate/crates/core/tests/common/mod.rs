#![allow(dead_code)]

use motoguard::facerec::FaceDb;
use motoguard::geo::frame_sentence;
use motoguard::imaging::{save_pgm, GrayImage};
use motoguard::synth;
use std::path::Path;

pub const OWNER: &str = "+639170000000";
pub const STRANGER: &str = "+15550001111";
pub const PASSCODE: &str = "4321";
pub const EARTH_R: f64 = 6_371_000.0;

pub fn owner_face() -> GrayImage {
    synth::face(96, 96, 0)
}

pub fn intruder_face() -> GrayImage {
    synth::face(96, 96, 1)
}

pub fn enrolled_db() -> FaceDb {
    FaceDb::new().enroll("owner", &owner_face()).unwrap()
}

pub fn config_text() -> String {
    format!("owner_number={OWNER}\npasscode={PASSCODE}\n")
}

pub fn write_pgm(dir: &Path, name: &str, img: &GrayImage) -> Vec<u8> {
    let bytes = save_pgm(img);
    std::fs::write(dir.join(name), &bytes).unwrap();
    bytes
}

/// Reference FNV-1a written straight from the constants.
pub fn fnv1a_oracle(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// NMEA `ddmm.mmmm` text for a non-negative angle, 7 decimal places of minutes.
pub fn ddmm(deg: f64, int_digits: usize) -> String {
    let whole = deg.trunc();
    let minutes = (deg - whole) * 60.0;
    format!("{:0w$}{:010.7}", whole as u32, minutes, w = int_digits)
}

/// GGA sentence for a northern/eastern position with quality 1.
pub fn gga_ne(lat: f64, lon: f64) -> String {
    frame_sentence(&format!(
        "GPGGA,120000,{},N,{},E,1,08,0.9,10.0,M,0.0,M,,",
        ddmm(lat, 2),
        ddmm(lon, 3)
    ))
}

/// Longitude offset along the equator that spans `metres` (arc = R * angle).
pub fn equator_dlon_deg(metres: f64) -> f64 {
    (metres / EARTH_R).to_degrees()
}
