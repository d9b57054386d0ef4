//! The ignition controller: a single-threaded state machine that turns
//! camera, keypad, SMS and GPS events into engine and messaging actions.
//!
//! Three paths start the engine while it is armed: a recognised face, the
//! correct keypad passcode, or the ignite keyword texted from the owner's
//! number. With the engine off the controller watches GPS fixes and texts the
//! owner when the vehicle drifts past the movement threshold.

use crate::facerec::{FaceDb, MatchResult, DEFAULT_THRESHOLD};
use crate::geo::{
    parse_nmea, GeoFix, MovementMonitor, DEFAULT_ALERT_COOLDOWN_MS, DEFAULT_MOVE_THRESHOLD_M,
};
use crate::imaging::GrayImage;
use crate::telecom::{
    format_intruder_alert, format_location_reply, format_theft_alert, parse_command, Command,
    Inbox, SmsMessage, DEFAULT_IGNITE_KEYWORD, DEFAULT_LOCATE_KEYWORD, KEYPAD_INTRUDER_ALERT,
};
use thiserror::Error;

pub const KEYPAD_BUFFER_CAP: usize = 16;
pub const DEFAULT_MAX_KEYPAD_ATTEMPTS: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("owner_number must not be empty")]
    EmptyOwner,
    #[error("passcode must be a non-empty string of digits")]
    BadPasscode,
    #[error("keywords must not be empty")]
    EmptyKeyword,
    #[error("{0} must be a positive, finite number")]
    BadThreshold(&'static str),
    #[error("max_keypad_attempts must be at least 1")]
    BadAttemptLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerConfig {
    pub owner_number: String,
    pub passcode: String,
    pub ignite_kw: String,
    pub locate_kw: String,
    pub face_threshold: f64,
    pub move_threshold_m: f64,
    pub alert_cooldown_ms: u64,
    pub max_keypad_attempts: u32,
}

impl ControllerConfig {
    /// Config with the given owner and passcode and defaults elsewhere.
    pub fn new(owner_number: impl Into<String>, passcode: impl Into<String>) -> Self {
        Self {
            owner_number: owner_number.into(),
            passcode: passcode.into(),
            ignite_kw: DEFAULT_IGNITE_KEYWORD.to_owned(),
            locate_kw: DEFAULT_LOCATE_KEYWORD.to_owned(),
            face_threshold: DEFAULT_THRESHOLD,
            move_threshold_m: DEFAULT_MOVE_THRESHOLD_M,
            alert_cooldown_ms: DEFAULT_ALERT_COOLDOWN_MS,
            max_keypad_attempts: DEFAULT_MAX_KEYPAD_ATTEMPTS,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.owner_number.trim().is_empty() {
            return Err(ConfigError::EmptyOwner);
        }
        if self.passcode.is_empty() || !self.passcode.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ConfigError::BadPasscode);
        }
        if self.ignite_kw.trim().is_empty() || self.locate_kw.trim().is_empty() {
            return Err(ConfigError::EmptyKeyword);
        }
        if !(self.face_threshold.is_finite() && self.face_threshold >= 0.0) {
            return Err(ConfigError::BadThreshold("face_threshold"));
        }
        if !(self.move_threshold_m.is_finite() && self.move_threshold_m > 0.0) {
            return Err(ConfigError::BadThreshold("move_threshold_m"));
        }
        if self.max_keypad_attempts == 0 {
            return Err(ConfigError::BadAttemptLimit);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    FaceCaptured(GrayImage),
    /// A digit key, `0`-`9`.
    KeypadDigit(char),
    KeypadSubmit,
    SmsArrived(SmsMessage),
    NmeaSentence(String),
    EngineOff,
    Tick,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    IgniteEngine,
    StopEngine,
    SendSms { to: String, body: String },
    /// The intruder's frame and the URL the uploader gave it.
    CaptureAndUpload { image: GrayImage, url: String },
    ReadyIndicator,
    LogError(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Engine off, waiting for authentication, theft monitoring active.
    Armed,
    Running,
}

/// Publishes an intruder's photo and returns where it can be viewed.
pub trait ImageUploader {
    fn upload(&self, image: &GrayImage) -> String;
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerState {
    mode: Mode,
    keypad_buffer: String,
    keypad_attempts: u32,
    monitor: MovementMonitor,
    inbox: Inbox,
    last_fix: Option<GeoFix>,
}

/// Validates `config` and returns the armed start state together with the
/// single ready-indicator action.
pub fn init(config: &ControllerConfig) -> Result<(ControllerState, Vec<Action>), ConfigError> {
    config.validate()?;
    let state = ControllerState {
        mode: Mode::Armed,
        keypad_buffer: String::new(),
        keypad_attempts: 0,
        monitor: MovementMonitor::new(config.move_threshold_m, config.alert_cooldown_ms),
        inbox: Inbox::default(),
        last_fix: None,
    };
    Ok((state, vec![Action::ReadyIndicator]))
}

impl ControllerState {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn keypad_buffer(&self) -> &str {
        &self.keypad_buffer
    }

    pub fn keypad_attempts(&self) -> u32 {
        self.keypad_attempts
    }

    pub fn monitor(&self) -> &MovementMonitor {
        &self.monitor
    }

    pub fn inbox(&self) -> &Inbox {
        &self.inbox
    }

    pub fn last_fix(&self) -> Option<&GeoFix> {
        self.last_fix.as_ref()
    }

    /// Processes one event at simulated time `now_ms` and returns the actions
    /// the hardware layer should carry out, in order.
    pub fn step(
        &mut self,
        event: &Event,
        config: &ControllerConfig,
        db: &FaceDb,
        uploader: &dyn ImageUploader,
        now_ms: u64,
    ) -> Vec<Action> {
        let mut actions = Vec::new();
        match event {
            Event::FaceCaptured(img) => self.on_face(img, config, db, uploader, &mut actions),
            Event::KeypadDigit(d) => {
                if self.mode == Mode::Armed {
                    if d.is_ascii_digit() {
                        if self.keypad_buffer.len() < KEYPAD_BUFFER_CAP {
                            self.keypad_buffer.push(*d);
                        }
                    } else {
                        actions.push(Action::LogError(format!("keypad: not a digit {d:?}")));
                    }
                }
            }
            Event::KeypadSubmit => self.on_submit(config, &mut actions),
            Event::SmsArrived(msg) => self.on_sms(msg, config, &mut actions),
            Event::NmeaSentence(sentence) => self.on_nmea(sentence, config, now_ms, &mut actions),
            Event::EngineOff => {
                if self.mode == Mode::Running {
                    self.mode = Mode::Armed;
                    self.monitor.arm(self.last_fix.clone());
                    actions.push(Action::StopEngine);
                }
            }
            Event::Tick => {}
        }
        actions
    }

    fn ignite(&mut self, actions: &mut Vec<Action>) {
        self.mode = Mode::Running;
        self.keypad_buffer.clear();
        self.keypad_attempts = 0;
        self.monitor.disarm();
        actions.push(Action::IgniteEngine);
    }

    fn send(config: &ControllerConfig, body: String) -> Action {
        Action::SendSms {
            to: config.owner_number.clone(),
            body,
        }
    }

    fn on_face(
        &mut self,
        img: &GrayImage,
        config: &ControllerConfig,
        db: &FaceDb,
        uploader: &dyn ImageUploader,
        actions: &mut Vec<Action>,
    ) {
        if self.mode == Mode::Running {
            return;
        }
        match db.identify(img, config.face_threshold) {
            MatchResult::Match { .. } => self.ignite(actions),
            MatchResult::NoMatch { .. } => {
                let url = uploader.upload(img);
                let body = format_intruder_alert(&url);
                actions.push(Action::CaptureAndUpload {
                    image: img.clone(),
                    url,
                });
                actions.push(Self::send(config, body));
            }
        }
    }

    fn on_submit(&mut self, config: &ControllerConfig, actions: &mut Vec<Action>) {
        if self.mode == Mode::Running {
            return;
        }
        if self.keypad_buffer == config.passcode {
            self.ignite(actions);
            return;
        }
        self.keypad_buffer.clear();
        self.keypad_attempts += 1;
        if self.keypad_attempts >= config.max_keypad_attempts {
            self.keypad_attempts = 0;
            actions.push(Self::send(config, KEYPAD_INTRUDER_ALERT.to_owned()));
        }
    }

    fn on_sms(&mut self, msg: &SmsMessage, config: &ControllerConfig, actions: &mut Vec<Action>) {
        if !self.inbox.push(msg.clone()) {
            actions.push(Action::LogError(format!(
                "inbox full, dropped message from {}",
                msg.sender
            )));
        }
        for m in self.inbox.drain() {
            match parse_command(&m, &config.owner_number, &config.ignite_kw, &config.locate_kw) {
                Command::Ignite if self.mode == Mode::Armed => self.ignite(actions),
                Command::Ignite | Command::Unknown => {}
                Command::Locate => match &self.last_fix {
                    Some(fix) => actions.push(Self::send(config, format_location_reply(fix))),
                    None => actions.push(Action::LogError("no fix".to_owned())),
                },
            }
        }
    }

    fn on_nmea(
        &mut self,
        sentence: &str,
        config: &ControllerConfig,
        now_ms: u64,
        actions: &mut Vec<Action>,
    ) {
        let fix = match parse_nmea(sentence) {
            Ok(fix) => fix,
            Err(e) => {
                actions.push(Action::LogError(format!("nmea: {e}")));
                return;
            }
        };
        if !fix.is_valid() {
            return;
        }
        if self.mode == Mode::Armed {
            if let Some(moved) = self.monitor.update(&fix, now_ms) {
                actions.push(Self::send(config, format_theft_alert(&fix, moved)));
            }
        }
        self.last_fix = Some(fix);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::frame_sentence;
    use crate::synth;

    const OWNER: &str = "+639170000000";

    struct FixedUrl;

    impl ImageUploader for FixedUrl {
        fn upload(&self, _: &GrayImage) -> String {
            "https://sim.local/img/0000000000000000".into()
        }
    }

    fn setup() -> (ControllerState, ControllerConfig, FaceDb) {
        let config = ControllerConfig::new(OWNER, "4321");
        let (state, _) = init(&config).unwrap();
        let db = FaceDb::new().enroll("owner", &synth::face(96, 96, 0)).unwrap();
        (state, config, db)
    }

    fn gga(lat_field: &str, lon_field: &str) -> String {
        frame_sentence(&format!(
            "GPGGA,000000,{lat_field},N,{lon_field},E,1,08,0.9,0.0,M,0.0,M,,"
        ))
    }

    fn sms_bodies(actions: &[Action]) -> Vec<&str> {
        actions
            .iter()
            .filter_map(|a| match a {
                Action::SendSms { body, .. } => Some(body.as_str()),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn init_emits_ready_once() {
        let config = ControllerConfig::new(OWNER, "4321");
        let (state, actions) = init(&config).unwrap();
        assert_eq!(state.mode(), Mode::Armed);
        assert_eq!(actions, vec![Action::ReadyIndicator]);
        assert_eq!(init(&config).unwrap().0, state);
    }

    #[test]
    fn init_rejects_bad_config() {
        assert_eq!(
            init(&ControllerConfig::new(OWNER, "")).unwrap_err(),
            ConfigError::BadPasscode
        );
        assert_eq!(
            init(&ControllerConfig::new(OWNER, "12a")).unwrap_err(),
            ConfigError::BadPasscode
        );
        assert_eq!(
            init(&ControllerConfig::new("", "1")).unwrap_err(),
            ConfigError::EmptyOwner
        );
        let mut c = ControllerConfig::new(OWNER, "1");
        c.move_threshold_m = 0.0;
        assert!(matches!(init(&c), Err(ConfigError::BadThreshold(_))));
        let mut c = ControllerConfig::new(OWNER, "1");
        c.max_keypad_attempts = 0;
        assert_eq!(init(&c).unwrap_err(), ConfigError::BadAttemptLimit);
    }

    #[test]
    fn owner_sms_ignites() {
        let (mut s, c, db) = setup();
        let msg = SmsMessage::new(OWNER, "IGNITE", 5);
        let acts = s.step(&Event::SmsArrived(msg), &c, &db, &FixedUrl, 5);
        assert_eq!(acts, vec![Action::IgniteEngine]);
        assert_eq!(s.mode(), Mode::Running);
        assert!(s.inbox().is_empty());
    }

    #[test]
    fn stranger_sms_is_ignored() {
        let (mut s, c, db) = setup();
        let msg = SmsMessage::new("+1555", "IGNITE", 5);
        assert!(s.step(&Event::SmsArrived(msg), &c, &db, &FixedUrl, 5).is_empty());
        assert_eq!(s.mode(), Mode::Armed);
    }

    #[test]
    fn keypad_paths() {
        let (mut s, c, db) = setup();
        for d in "4321".chars() {
            assert!(s.step(&Event::KeypadDigit(d), &c, &db, &FixedUrl, 0).is_empty());
        }
        assert_eq!(
            s.step(&Event::KeypadSubmit, &c, &db, &FixedUrl, 0),
            vec![Action::IgniteEngine]
        );

        let (mut s, c, db) = setup();
        let mut alerts = 0;
        for attempt in 1..=3 {
            s.step(&Event::KeypadDigit('9'), &c, &db, &FixedUrl, 0);
            let acts = s.step(&Event::KeypadSubmit, &c, &db, &FixedUrl, 0);
            alerts += sms_bodies(&acts)
                .iter()
                .filter(|b| **b == KEYPAD_INTRUDER_ALERT)
                .count();
            assert_eq!(s.keypad_attempts(), attempt % 3);
            assert!(s.keypad_buffer().is_empty());
        }
        assert_eq!(alerts, 1);
    }

    #[test]
    fn keypad_buffer_is_capped() {
        let (mut s, c, db) = setup();
        for _ in 0..40 {
            s.step(&Event::KeypadDigit('1'), &c, &db, &FixedUrl, 0);
        }
        assert_eq!(s.keypad_buffer().len(), KEYPAD_BUFFER_CAP);
        let acts = s.step(&Event::KeypadDigit('x'), &c, &db, &FixedUrl, 0);
        assert!(matches!(acts[..], [Action::LogError(_)]));
    }

    #[test]
    fn face_paths() {
        let (mut s, c, db) = setup();
        let stranger = synth::checkerboard(96, 96, 6);
        let acts = s.step(&Event::FaceCaptured(stranger), &c, &db, &FixedUrl, 0);
        assert!(matches!(acts[0], Action::CaptureAndUpload { .. }));
        assert_eq!(sms_bodies(&acts), ["INTRUDER attempt - photo: https://sim.local/img/0000000000000000"]);
        assert_eq!(s.mode(), Mode::Armed);

        let acts = s.step(&Event::FaceCaptured(synth::face(96, 96, 0)), &c, &db, &FixedUrl, 0);
        assert_eq!(acts, vec![Action::IgniteEngine]);
        // Already running: further captures are ignored.
        let acts = s.step(&Event::FaceCaptured(synth::checkerboard(96, 96, 6)), &c, &db, &FixedUrl, 0);
        assert!(acts.is_empty());
    }

    #[test]
    fn theft_alert_only_while_armed() {
        let (mut s, c, db) = setup();
        assert!(s.step(&Event::NmeaSentence(gga("0000.0000", "00000.0000")), &c, &db, &FixedUrl, 0).is_empty());
        // 0.000054 deg of longitude = 0.00324 minutes, about 6 m at the equator.
        let acts = s.step(&Event::NmeaSentence(gga("0000.0000", "00000.00324")), &c, &db, &FixedUrl, 1000);
        assert_eq!(sms_bodies(&acts), ["THEFT moved=6.0m lat=0.000000 lon=0.000054"]);

        let (mut s, c, db) = setup();
        s.step(&Event::SmsArrived(SmsMessage::new(OWNER, "ignite", 0)), &c, &db, &FixedUrl, 0);
        s.step(&Event::NmeaSentence(gga("0000.0000", "00000.0000")), &c, &db, &FixedUrl, 0);
        let far = gga("0000.0000", "00000.0540");
        assert!(s.step(&Event::NmeaSentence(far), &c, &db, &FixedUrl, 1000).is_empty());
        assert!(s.monitor().anchor().is_none());
    }

    #[test]
    fn engine_off_rearms_at_last_fix() {
        let (mut s, c, db) = setup();
        s.step(&Event::SmsArrived(SmsMessage::new(OWNER, "IGNITE", 0)), &c, &db, &FixedUrl, 0);
        s.step(&Event::NmeaSentence(gga("1000.0000", "01000.0000")), &c, &db, &FixedUrl, 10);
        let acts = s.step(&Event::EngineOff, &c, &db, &FixedUrl, 20);
        assert_eq!(acts, vec![Action::StopEngine]);
        assert_eq!(s.mode(), Mode::Armed);
        assert_eq!(s.monitor().anchor().unwrap().lat, 10.0);
        // EngineOff while already armed does nothing.
        assert!(s.step(&Event::EngineOff, &c, &db, &FixedUrl, 30).is_empty());
    }

    #[test]
    fn locate_reply_and_missing_fix() {
        let (mut s, c, db) = setup();
        let locate = Event::SmsArrived(SmsMessage::new(OWNER, "LOCATE", 0));
        assert_eq!(
            s.step(&locate, &c, &db, &FixedUrl, 0),
            vec![Action::LogError("no fix".into())]
        );
        s.step(&Event::NmeaSentence(gga("4807.038", "01131.000")), &c, &db, &FixedUrl, 1);
        let acts = s.step(&locate, &c, &db, &FixedUrl, 2);
        assert_eq!(
            acts,
            vec![Action::SendSms {
                to: OWNER.into(),
                body: "LOC lat=48.117300 lon=11.516667 https://maps.google.com/?q=48.117300,11.516667".into()
            }]
        );
    }

    #[test]
    fn bad_nmea_is_logged() {
        let (mut s, c, db) = setup();
        let acts = s.step(&Event::NmeaSentence("$GPGGA,bogus*00".into()), &c, &db, &FixedUrl, 0);
        assert!(matches!(&acts[..], [Action::LogError(e)] if e.starts_with("nmea:")));
        assert!(s.last_fix().is_none());
    }
}
