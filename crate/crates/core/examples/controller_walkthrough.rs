//! Drive the ignition controller by hand through every path in its
//! flowchart.
//!
//! ```bash
//! cargo run -p motoguard --example controller_walkthrough
//! ```

use motoguard::controller::{init, Action, ControllerConfig, ControllerState, Event};
use motoguard::facerec::FaceDb;
use motoguard::geo::GeoFix;
use motoguard::geo::gga_sentence;
use motoguard::sim::HashUploader;
use motoguard::synth;
use motoguard::telecom::SmsMessage;

const OWNER: &str = "+639170000000";

fn show(now: u64, label: &str, actions: &[Action]) {
    let rendered: Vec<String> = actions
        .iter()
        .map(|a| match a {
            Action::SendSms { body, .. } => format!("SMS[{body}]"),
            Action::CaptureAndUpload { url, .. } => format!("UPLOAD[{url}]"),
            other => format!("{other:?}"),
        })
        .collect();
    println!("{now:>6} {label:<22} {}", rendered.join(", "));
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ControllerConfig::new(OWNER, "4321");
    let db = FaceDb::new().enroll("owner", &synth::face(96, 96, 0))?;
    let (mut state, boot) = init(&config)?;
    show(0, "power on", &boot);

    let step = |state: &mut ControllerState, now: u64, label: &str, event: Event| {
        let actions = state.step(&event, &config, &db, &HashUploader, now);
        show(now, label, &actions);
    };

    let parked = GeoFix::new(14.5995, 120.9842);
    step(&mut state, 100, "gps fix", Event::NmeaSentence(gga_sentence(&parked)));
    step(&mut state, 200, "stranger at camera", Event::FaceCaptured(synth::face(96, 96, 1)));
    for (i, d) in "1111".chars().enumerate() {
        step(&mut state, 300 + i as u64, "keypad", Event::KeypadDigit(d));
    }
    for t in [400, 410, 420] {
        step(&mut state, t, "keypad enter", Event::KeypadSubmit);
    }
    step(&mut state, 500, "owner asks location", Event::SmsArrived(SmsMessage::new(OWNER, "locate", 500)));
    step(&mut state, 600, "owner at camera", Event::FaceCaptured(synth::face(96, 96, 0)));
    step(&mut state, 700, "engine off", Event::EngineOff);

    let towed = GeoFix::new(14.5995, 120.9843);
    step(&mut state, 5_000, "vehicle moved", Event::NmeaSentence(gga_sentence(&towed)));
    step(&mut state, 6_000, "still moving", Event::NmeaSentence(gga_sentence(&towed)));
    step(&mut state, 7_000, "owner texts ignite", Event::SmsArrived(SmsMessage::new(OWNER, "IGNITE", 7_000)));
    println!("final mode: {:?}", state.mode());
    Ok(())
}
