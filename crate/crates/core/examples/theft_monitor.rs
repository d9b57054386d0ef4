//! The engine-off movement monitor: anchor, threshold and alert cooldown.
//!
//! ```bash
//! cargo run -p motoguard --example theft_monitor
//! ```

use motoguard::geo::{GeoFix, MovementMonitor};
use motoguard::telecom::format_theft_alert;

fn main() {
    let mut monitor = MovementMonitor::new(5.0, 60_000);
    // Parked at the equator, then nudged east a few metres at a time. One
    // micro-degree of longitude is about 0.11 m here.
    let track = [
        (0, 0.0, 1),
        (5_000, 0.000020, 1),
        (10_000, 0.000036, 1),
        (15_000, 0.000054, 1),
        (20_000, 0.000300, 0), // receiver lost the fix
        (30_000, 0.000400, 1),
        (80_000, 0.000900, 1),
    ];
    for (t, lon, quality) in track {
        let fix = GeoFix { lat: 0.0, lon, quality, time_tag: String::new() };
        match monitor.update(&fix, t) {
            Some(moved) => println!("{t:>6} ms  ALERT  {}", format_theft_alert(&fix, moved)),
            None => println!("{t:>6} ms  quiet  lon={lon:.6} q={quality}"),
        }
    }
    println!("anchor stays at {:?}", monitor.anchor().map(|a| (a.lat, a.lon)));
}
