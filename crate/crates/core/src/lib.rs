//! Anti-theft ignition control for a motorcycle.
//!
//! The engine starts only after one of three authentications succeeds: an
//! enrolled face (LBP texture templates), the keypad passcode, or an ignite
//! keyword texted from the owner's phone. The owner can text a locate keyword
//! to get the vehicle's GPS position back. While the engine is off, movement
//! beyond a few metres triggers a theft alert. Unknown faces get their photo
//! uploaded and the link is texted to the owner.
//!
//! Hardware is replaced by plain data: netpbm frames for the camera, NMEA
//! sentences for the GPS receiver, and [`telecom::SmsMessage`] values for the
//! GSM modem. The [`sim`] module replays timestamped scenario files against
//! the [`controller`] and produces reproducible traces.
//!
//! ```
//! use motoguard::controller::{init, ControllerConfig, Event, Action};
//! use motoguard::facerec::FaceDb;
//! use motoguard::sim::HashUploader;
//! use motoguard::telecom::SmsMessage;
//!
//! let config = ControllerConfig::new("+639170000000", "4321");
//! let (mut state, ready) = init(&config).unwrap();
//! assert_eq!(ready, vec![Action::ReadyIndicator]);
//!
//! let sms = Event::SmsArrived(SmsMessage::new("+639170000000", "ignite", 0));
//! let actions = state.step(&sms, &config, &FaceDb::new(), &HashUploader, 0);
//! assert_eq!(actions, vec![Action::IgniteEngine]);
//! ```

pub mod cli;
pub mod controller;
pub mod facerec;
pub mod geo;
pub mod imaging;
pub mod sim;
pub mod storage;
pub mod synth;
pub mod telecom;
