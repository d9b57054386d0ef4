//! The simulated GSM channel: SMS values, the owner command grammar, the
//! bounded SIM inbox, and the outbound message templates.

use crate::geo::GeoFix;
use std::collections::VecDeque;

pub const DEFAULT_IGNITE_KEYWORD: &str = "IGNITE";
pub const DEFAULT_LOCATE_KEYWORD: &str = "LOCATE";
pub const DEFAULT_INBOX_CAPACITY: usize = 10;
pub const KEYPAD_INTRUDER_ALERT: &str = "INTRUDER attempt - keypad";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmsMessage {
    pub sender: String,
    pub body: String,
    pub received_at: u64,
}

impl SmsMessage {
    pub fn new(sender: impl Into<String>, body: impl Into<String>, received_at: u64) -> Self {
        Self {
            sender: sender.into(),
            body: body.into(),
            received_at,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Ignite,
    Locate,
    Unknown,
}

/// Classifies an inbound message. Only the owner's number can command the
/// vehicle; the body is trimmed and compared case-insensitively.
pub fn parse_command(msg: &SmsMessage, owner_number: &str, ignite_kw: &str, locate_kw: &str) -> Command {
    if msg.sender != owner_number {
        return Command::Unknown;
    }
    let body = msg.body.trim();
    if body.eq_ignore_ascii_case(ignite_kw.trim()) {
        Command::Ignite
    } else if body.eq_ignore_ascii_case(locate_kw.trim()) {
        Command::Locate
    } else {
        Command::Unknown
    }
}

/// SIM message storage with a fixed capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inbox {
    capacity: usize,
    queue: VecDeque<SmsMessage>,
}

impl Default for Inbox {
    fn default() -> Self {
        Self::with_capacity(DEFAULT_INBOX_CAPACITY)
    }
}

impl Inbox {
    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            capacity,
            queue: VecDeque::with_capacity(capacity),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.queue.len() >= self.capacity
    }

    /// Stores `msg` unless the inbox is full. Returns whether it was stored.
    pub fn push(&mut self, msg: SmsMessage) -> bool {
        if self.is_full() {
            return false;
        }
        self.queue.push_back(msg);
        true
    }

    /// Removes and returns every stored message, oldest first.
    pub fn drain(&mut self) -> Vec<SmsMessage> {
        self.queue.drain(..).collect()
    }
}

/// Fixed-point decimal with `places` digits, rounding half away from zero.
/// Values that round to zero print without a sign.
pub(crate) fn fixed(value: f64, places: u32) -> String {
    let scale = 10f64.powi(places as i32);
    let scaled = (value * scale).round() as i64;
    let sign = if scaled < 0 { "-" } else { "" };
    let mag = scaled.unsigned_abs();
    let div = 10u64.pow(places);
    if places == 0 {
        return format!("{sign}{mag}");
    }
    format!(
        "{sign}{}.{:0width$}",
        mag / div,
        mag % div,
        width = places as usize
    )
}

pub fn format_location_reply(fix: &GeoFix) -> String {
    let (lat, lon) = (fixed(fix.lat, 6), fixed(fix.lon, 6));
    format!("LOC lat={lat} lon={lon} https://maps.google.com/?q={lat},{lon}")
}

pub fn format_theft_alert(fix: &GeoFix, displacement_m: f64) -> String {
    format!(
        "THEFT moved={}m lat={} lon={}",
        fixed(displacement_m, 1),
        fixed(fix.lat, 6),
        fixed(fix.lon, 6)
    )
}

pub fn format_intruder_alert(url: &str) -> String {
    debug_assert!(!url.is_empty(), "intruder alert needs a photo url");
    format!("INTRUDER attempt - photo: {url}")
}
