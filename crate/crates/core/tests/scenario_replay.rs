mod common;

use common::*;
use motoguard::controller::ControllerConfig;
use motoguard::imaging::{save_ppm, RgbImage};
use motoguard::sim::{
    parse_scenario, render_trace, run_scenario, sms_out_parts, DirFrames, MemoryFrames,
    TraceLine, TraceTag,
};
use proptest::prelude::*;

fn config() -> ControllerConfig {
    ControllerConfig::new(OWNER, PASSCODE)
}

fn replay(text: &str, frames: &MemoryFrames) -> Vec<TraceLine> {
    run_scenario(&parse_scenario(text).unwrap(), &config(), &enrolled_db(), frames).unwrap()
}

fn tags(trace: &[TraceLine]) -> Vec<TraceTag> {
    trace.iter().map(|l| l.tag).collect()
}

#[test]
fn theft_alerts_repeat_only_after_cooldown() {
    let home = gga_ne(10.0, 20.0);
    let away = gga_ne(10.0, 20.001);
    let text = format!(
        "0 NMEA {home}\n1000 NMEA {away}\n30000 NMEA {away}\n60999 NMEA {away}\n61000 NMEA {away}\n"
    );
    let trace = replay(&text, &MemoryFrames::default());
    let alert_times: Vec<u64> = trace
        .iter()
        .filter(|l| l.tag == TraceTag::SmsOut)
        .map(|l| l.t)
        .collect();
    assert_eq!(alert_times, [1000, 61000]);
    // Both alerts measure from the original parking spot.
    let bodies: Vec<_> = trace.iter().filter_map(sms_out_parts).map(|(_, b)| b).collect();
    assert_eq!(bodies[0], bodies[1]);
    assert!(bodies[0].starts_with("THEFT moved=109."), "{}", bodies[0]);
}

#[test]
fn engine_off_anchors_at_last_fix() {
    let parked = gga_ne(1.0, 1.0);
    let drift = gga_ne(1.0, 1.0 + equator_dlon_deg(3.0));
    let stolen = gga_ne(1.0, 1.0 + equator_dlon_deg(50.0));
    let text = format!(
        "0 SMS {OWNER} IGNITE\n10 NMEA {stolen}\n20 NMEA {parked}\n30 ENGINE_OFF\n40 NMEA {drift}\n50 NMEA {stolen}\n"
    );
    let trace = replay(&text, &MemoryFrames::default());
    let sms: Vec<_> = trace.iter().filter(|l| l.tag == TraceTag::SmsOut).collect();
    assert_eq!(sms.len(), 1);
    assert_eq!(sms[0].t, 50);
}

#[test]
fn void_fixes_never_anchor_or_alert() {
    let void = motoguard::geo::frame_sentence("GPRMC,000000,V,0000.000,N,00000.000,E,0.0,0.0,010100,,");
    let far = gga_ne(0.0, 0.01);
    let text = format!("0 NMEA {void}\n10 NMEA {far}\n20 NMEA {void}\n30 SMS {OWNER} LOCATE\n");
    let trace = replay(&text, &MemoryFrames::default());
    let sms: Vec<_> = trace.iter().filter_map(sms_out_parts).map(|(_, b)| b).collect();
    // The valid far fix becomes the anchor; the locate reply uses it.
    assert_eq!(sms.len(), 1);
    assert!(sms[0].starts_with("LOC lat=0.000000 lon=0.010000"), "{}", sms[0]);
}

#[test]
fn color_frames_are_converted() {
    let dir = tempfile::tempdir().unwrap();
    let face = owner_face();
    let rgb: Vec<u8> = face.data().iter().flat_map(|&v| [v, v, v]).collect();
    let ppm = RgbImage::new(face.width(), face.height(), rgb).unwrap();
    std::fs::write(dir.path().join("cam.ppm"), save_ppm(&ppm)).unwrap();
    let events = parse_scenario("0 CAMERA cam.ppm").unwrap();
    let trace = run_scenario(&events, &config(), &enrolled_db(), &DirFrames::new(dir.path())).unwrap();
    assert_eq!(tags(&trace), [TraceTag::Ready, TraceTag::Event, TraceTag::Ignite]);
}

#[test]
fn corrupt_frame_does_not_abort_run() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("junk.pgm"), "P2\n2 2\n255\n1 2").unwrap();
    let events = parse_scenario(&format!("0 CAMERA junk.pgm\n5 SMS {OWNER} ignite\n")).unwrap();
    let trace = run_scenario(&events, &config(), &enrolled_db(), &DirFrames::new(dir.path())).unwrap();
    assert_eq!(
        tags(&trace),
        [TraceTag::Ready, TraceTag::Event, TraceTag::Error, TraceTag::Event, TraceTag::Ignite]
    );
    assert!(trace[2].detail.contains("truncated"), "{}", trace[2].detail);
}

#[test]
fn invalid_config_is_rejected_before_running() {
    let mut bad = config();
    bad.passcode = "12x".into();
    assert!(run_scenario(&[], &bad, &enrolled_db(), &MemoryFrames::default()).is_err());
}

#[derive(Debug, Clone)]
enum Line {
    Camera(bool),
    Key(Option<u8>),
    Sms(bool, &'static str),
    Nmea(u16),
    EngineOff,
}

fn line() -> impl Strategy<Value = Line> {
    prop_oneof![
        any::<bool>().prop_map(Line::Camera),
        proptest::option::of(0u8..10).prop_map(Line::Key),
        (any::<bool>(), prop::sample::select(vec!["IGNITE", "locate", "hi", "Ignite "]))
            .prop_map(|(o, b)| Line::Sms(o, b)),
        (0u16..500).prop_map(Line::Nmea),
        Just(Line::EngineOff),
    ]
}

fn render(lines: &[(u64, Line)]) -> String {
    lines
        .iter()
        .map(|(t, l)| match l {
            Line::Camera(owner) => format!("{t} CAMERA {}\n", if *owner { "owner.pgm" } else { "intruder.pgm" }),
            Line::Key(Some(d)) => format!("{t} KEY {d}\n"),
            Line::Key(None) => format!("{t} KEY ENTER\n"),
            Line::Sms(owner, body) => format!("{t} SMS {} {body}\n", if *owner { OWNER } else { STRANGER }),
            Line::Nmea(m) => format!("{t} NMEA {}\n", gga_ne(0.5, 0.5 + equator_dlon_deg(f64::from(*m)))),
            Line::EngineOff => format!("{t} ENGINE_OFF\n"),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_invariants(lines in proptest::collection::vec((0u64..200_000, line()), 0..30)) {
        let mut frames = MemoryFrames::default();
        frames.insert("owner.pgm", owner_face());
        frames.insert("intruder.pgm", intruder_face());
        let text = render(&lines);
        let trace = replay(&text, &frames);

        prop_assert_eq!(trace[0].tag, TraceTag::Ready);
        prop_assert_eq!(trace.iter().filter(|l| l.tag == TraceTag::Ready).count(), 1);
        prop_assert!(trace.windows(2).all(|w| w[0].t <= w[1].t));
        for (to, _) in trace.iter().filter_map(sms_out_parts) {
            prop_assert_eq!(to, OWNER);
        }
        let again = replay(&text, &frames);
        prop_assert_eq!(render_trace(&trace), render_trace(&again));
    }
}
