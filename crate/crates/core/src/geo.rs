//! NMEA 0183 GGA/RMC parsing, great-circle displacement, and the engine-off
//! movement monitor.

use thiserror::Error;

pub const EARTH_RADIUS_M: f64 = 6_371_000.0;
pub const DEFAULT_MOVE_THRESHOLD_M: f64 = 5.0;
pub const DEFAULT_ALERT_COOLDOWN_MS: u64 = 60_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NmeaError {
    #[error("sentence is not framed as $<payload>*HH")]
    MalformedSentence,
    #[error("checksum mismatch: sentence says {stated:02X}, payload gives {computed:02X}")]
    BadChecksum { stated: u8, computed: u8 },
    #[error("unsupported sentence type {0:?}")]
    UnsupportedSentence(String),
    #[error("malformed coordinate {0:?}")]
    MalformedCoordinate(String),
    #[error("minutes out of range in {0:?}")]
    MinutesOutOfRange(String),
    #[error("latitude/longitude fields are empty")]
    EmptyFixFields,
    #[error("malformed field {0:?}")]
    MalformedField(String),
}

/// A position fix. `quality` 0 means the receiver has no valid fix.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoFix {
    pub lat: f64,
    pub lon: f64,
    pub quality: u8,
    pub time_tag: String,
}

impl GeoFix {
    /// A valid (quality 1) fix with no time tag.
    pub fn new(lat: f64, lon: f64) -> Self {
        Self {
            lat,
            lon,
            quality: 1,
            time_tag: String::new(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.quality > 0
    }
}

/// XOR of every payload byte as two uppercase hex digits.
pub fn nmea_checksum(payload: &str) -> String {
    format!("{:02X}", checksum_byte(payload))
}

fn checksum_byte(payload: &str) -> u8 {
    payload.bytes().fold(0, |acc, b| acc ^ b)
}

/// Wraps a payload as a complete sentence: `$payload*HH`.
pub fn frame_sentence(payload: &str) -> String {
    format!("${payload}*{}", nmea_checksum(payload))
}

/// Converts an NMEA `ddmm.mmmm` / `dddmm.mmmm` field to signed degrees.
pub fn ddmm_to_degrees(field: &str, hemi: &str) -> Result<f64, NmeaError> {
    let malformed = || NmeaError::MalformedCoordinate(format!("{field},{hemi}"));
    let sign = match hemi {
        "N" | "E" => 1.0,
        "S" | "W" => -1.0,
        _ => return Err(malformed()),
    };
    let (int_part, frac_part) = field.split_once('.').unwrap_or((field, ""));
    if int_part.len() < 3
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(malformed());
    }
    let split = int_part.len() - 2;
    let degrees: f64 = int_part[..split].parse().map_err(|_| malformed())?;
    let minutes: f64 = format!("{}.{}0", &int_part[split..], frac_part)
        .parse()
        .map_err(|_| malformed())?;
    if minutes >= 60.0 {
        return Err(NmeaError::MinutesOutOfRange(field.to_owned()));
    }
    Ok(sign * (degrees + minutes / 60.0))
}

fn coordinate(
    lat: &str,
    lat_hemi: &str,
    lon: &str,
    lon_hemi: &str,
) -> Result<(f64, f64), NmeaError> {
    if lat.is_empty() || lon.is_empty() {
        return Err(NmeaError::EmptyFixFields);
    }
    if !matches!(lat_hemi, "N" | "S") {
        return Err(NmeaError::MalformedCoordinate(format!("{lat},{lat_hemi}")));
    }
    if !matches!(lon_hemi, "E" | "W") {
        return Err(NmeaError::MalformedCoordinate(format!("{lon},{lon_hemi}")));
    }
    let lat_deg = ddmm_to_degrees(lat, lat_hemi)?;
    let lon_deg = ddmm_to_degrees(lon, lon_hemi)?;
    if lat_deg.abs() > 90.0 {
        return Err(NmeaError::MalformedCoordinate(lat.to_owned()));
    }
    if lon_deg.abs() > 180.0 {
        return Err(NmeaError::MalformedCoordinate(lon.to_owned()));
    }
    Ok((lat_deg, lon_deg))
}

/// Parses a checksummed GGA or RMC sentence (any talker id).
pub fn parse_nmea(sentence: &str) -> Result<GeoFix, NmeaError> {
    let s = sentence.trim_end_matches(['\r', '\n']);
    let body = s.strip_prefix('$').ok_or(NmeaError::MalformedSentence)?;
    let (payload, sum) = body.rsplit_once('*').ok_or(NmeaError::MalformedSentence)?;
    if sum.len() != 2 || payload.contains('$') || payload.contains('*') {
        return Err(NmeaError::MalformedSentence);
    }
    let stated = u8::from_str_radix(sum, 16).map_err(|_| NmeaError::MalformedSentence)?;
    let computed = checksum_byte(payload);
    if stated != computed {
        return Err(NmeaError::BadChecksum { stated, computed });
    }

    let fields: Vec<&str> = payload.split(',').collect();
    let id = fields[0];
    let kind = if id.len() == 5 { &id[2..] } else { "" };
    let field = |i: usize| fields.get(i).copied().unwrap_or("");
    match kind {
        "GGA" => {
            let (lat, lon) = coordinate(field(2), field(3), field(4), field(5))?;
            let q = field(6);
            let quality = if q.is_empty() {
                0
            } else {
                q.parse()
                    .map_err(|_| NmeaError::MalformedField(q.to_owned()))?
            };
            Ok(GeoFix {
                lat,
                lon,
                quality,
                time_tag: field(1).to_owned(),
            })
        }
        "RMC" => {
            let quality = match field(2) {
                "A" => 1,
                "V" => 0,
                other => return Err(NmeaError::MalformedField(other.to_owned())),
            };
            let (lat, lon) = coordinate(field(3), field(4), field(5), field(6))?;
            Ok(GeoFix {
                lat,
                lon,
                quality,
                time_tag: field(1).to_owned(),
            })
        }
        _ => Err(NmeaError::UnsupportedSentence(id.to_owned())),
    }
}

fn to_ddmm(deg: f64, int_digits: usize) -> String {
    let abs = deg.abs();
    let mut whole = abs.trunc() as u32;
    let mut minutes = (abs - f64::from(whole)) * 60.0;
    // Rounding to 7 places may carry into a full degree.
    if (minutes * 1e7).round() >= 60.0 * 1e7 {
        whole += 1;
        minutes = 0.0;
    }
    format!("{whole:0int_digits$}{minutes:010.7}")
}

/// Synthesizes a GGA sentence for a fix, with a correct checksum.
pub fn gga_sentence(fix: &GeoFix) -> String {
    let payload = format!(
        "GPGGA,{},{},{},{},{},{},08,0.9,0.0,M,0.0,M,,",
        fix.time_tag,
        to_ddmm(fix.lat, 2),
        if fix.lat < 0.0 { 'S' } else { 'N' },
        to_ddmm(fix.lon, 3),
        if fix.lon < 0.0 { 'W' } else { 'E' },
        fix.quality,
    );
    frame_sentence(&payload)
}

/// Great-circle distance in metres on a sphere of radius [`EARTH_RADIUS_M`].
pub fn haversine_m(a: &GeoFix, b: &GeoFix) -> f64 {
    let (p1, p2) = (a.lat.to_radians(), b.lat.to_radians());
    let dp = p2 - p1;
    let dl = (b.lon - a.lon).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

/// Watches for displacement away from an anchor position while the engine
/// is off.
#[derive(Debug, Clone, PartialEq)]
pub struct MovementMonitor {
    anchor: Option<GeoFix>,
    threshold_m: f64,
    cooldown_ms: u64,
    last_alert_ms: Option<u64>,
}

impl Default for MovementMonitor {
    fn default() -> Self {
        Self::new(DEFAULT_MOVE_THRESHOLD_M, DEFAULT_ALERT_COOLDOWN_MS)
    }
}

impl MovementMonitor {
    pub fn new(threshold_m: f64, cooldown_ms: u64) -> Self {
        assert!(threshold_m > 0.0, "movement threshold must be positive");
        Self {
            anchor: None,
            threshold_m,
            cooldown_ms,
            last_alert_ms: None,
        }
    }

    pub fn anchor(&self) -> Option<&GeoFix> {
        self.anchor.as_ref()
    }

    pub fn threshold_m(&self) -> f64 {
        self.threshold_m
    }

    pub fn last_alert_ms(&self) -> Option<u64> {
        self.last_alert_ms
    }

    /// Restarts monitoring from `anchor`. With `None` the next valid fix
    /// becomes the anchor.
    pub fn arm(&mut self, anchor: Option<GeoFix>) {
        self.anchor = anchor.filter(GeoFix::is_valid);
        self.last_alert_ms = None;
    }

    pub fn disarm(&mut self) {
        self.anchor = None;
        self.last_alert_ms = None;
    }

    /// Feeds one fix. Returns the displacement in metres when an alert fires.
    pub fn update(&mut self, fix: &GeoFix, now_ms: u64) -> Option<f64> {
        if !fix.is_valid() {
            return None;
        }
        let Some(anchor) = &self.anchor else {
            self.anchor = Some(fix.clone());
            return None;
        };
        let moved = haversine_m(anchor, fix);
        if moved <= self.threshold_m {
            return None;
        }
        let cooled = self
            .last_alert_ms
            .map_or(true, |t| now_ms.saturating_sub(t) >= self.cooldown_ms);
        if !cooled {
            return None;
        }
        self.last_alert_ms = Some(now_ms);
        Some(moved)
    }
}
