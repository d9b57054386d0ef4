//! Parse GPS sentences and measure how far the vehicle moved.
//!
//! ```bash
//! cargo run -p motoguard --example nmea_tracking
//! ```

use motoguard::geo::{frame_sentence, gga_sentence, haversine_m, nmea_checksum, parse_nmea, GeoFix};

fn main() {
    let feed = [
        "$GPGGA,123519,4807.038,N,01131.000,E,1,08,0.9,545.4,M,46.9,M,,*47\r\n".to_owned(),
        frame_sentence("GPRMC,123520,A,4807.040,N,01131.004,E,0.4,84.4,230394,,"),
        frame_sentence("GPRMC,123521,V,4807.090,N,01131.090,E,0.0,0.0,230394,,"),
        "$GPGGA,123522,4807.038,N,01131.000,E,1,08,0.9,545.4,M,46.9,M,,*48".to_owned(),
        frame_sentence("GPGSV,3,1,11,03,03,111,00"),
    ];

    let mut previous: Option<GeoFix> = None;
    for sentence in &feed {
        match parse_nmea(sentence) {
            Ok(fix) => {
                let step = previous.as_ref().map(|p| haversine_m(p, &fix));
                println!(
                    "{} lat={:.6} lon={:.6} quality={} moved={}",
                    fix.time_tag,
                    fix.lat,
                    fix.lon,
                    fix.quality,
                    step.map_or("-".into(), |m| format!("{m:.2} m"))
                );
                if fix.is_valid() {
                    previous = Some(fix);
                }
            }
            Err(e) => println!("rejected {:?}: {e}", sentence.trim_end()),
        }
    }

    println!("checksum of \"A\" = {}", nmea_checksum("A"));
    let manila = GeoFix { lat: 14.5995, lon: 120.9842, quality: 1, time_tag: "080000".into() };
    println!("synthesized: {}", gga_sentence(&manila));
}
