//! The SMS command grammar, SIM inbox limits and reply templates.
//!
//! ```bash
//! cargo run -p motoguard --example sms_commands
//! ```

use motoguard::geo::GeoFix;
use motoguard::sim::upload_stub;
use motoguard::telecom::{
    format_intruder_alert, format_location_reply, parse_command, Inbox, SmsMessage,
};

const OWNER: &str = "+639170000000";

fn main() {
    let messages = [
        SmsMessage::new(OWNER, "IGNITE", 0),
        SmsMessage::new(OWNER, "  locate \n", 10),
        SmsMessage::new("+15550001111", "IGNITE", 20),
        SmsMessage::new(OWNER, "start please", 30),
    ];
    for m in &messages {
        let cmd = parse_command(m, OWNER, "IGNITE", "LOCATE");
        println!("{:>14} {:?} -> {cmd:?}", m.sender, m.body);
    }

    let mut inbox = Inbox::with_capacity(3);
    for (i, m) in messages.iter().enumerate() {
        println!("push #{i}: stored={}", inbox.push(m.clone()));
    }
    let drained = inbox.drain();
    println!("drained {} messages, inbox now holds {}", drained.len(), inbox.len());

    println!("{}", format_location_reply(&GeoFix::new(14.5995, 120.9842)));
    println!("{}", format_intruder_alert(&upload_stub(b"intruder frame bytes")));
}
