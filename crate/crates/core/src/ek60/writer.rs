//! Synthesis of RAW files, used for fixtures and round-trip tests.

use super::{CalibrationParams, Configuration, Datagram, Raw0Header, Transceiver, RAW0};
use crate::{Error, Result};

/// Samples of one ping to be written. Angle vectors may be empty for a
/// power-only ping; otherwise all three share one length.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PingData {
    pub timestamp: u64,
    pub power: Vec<i16>,
    pub along: Vec<i16>,
    pub athwart: Vec<i16>,
}

fn angle_byte(v: i16, ping: usize, what: &str) -> Result<u8> {
    i8::try_from(v).map(|b| b as u8).map_err(|_| {
        Error::Parameter(format!("{what} angle count {v} in ping {ping} is outside [-128, 127]"))
    })
}

/// Writes one CON0 datagram describing a single transceiver, followed by one
/// RAW0 datagram per ping on channel 1 (low angle byte athwart-ship).
pub fn write_raw(pings: &[PingData], calib: &CalibrationParams) -> Result<Vec<u8>> {
    calib.validate()?;
    let transceiver = Transceiver {
        channel_id: format!("GPT {:3} kHz synthetic", calib.frequency),
        beam_type: 1,
        frequency: (calib.frequency * 1000.0) as f32,
        gain: calib.gain as f32,
        equivalent_beam_angle: calib.equivalent_beam_angle as f32,
        pulse_length_table: [calib.pulse_duration as f32, 0.0, 0.0, 0.0, 0.0],
        gain_table: [calib.gain as f32, 0.0, 0.0, 0.0, 0.0],
        sa_correction_table: [calib.sa_correction as f32, 0.0, 0.0, 0.0, 0.0],
        ..Default::default()
    };
    let config = Configuration {
        sounder_name: "ER60".into(),
        version: "2.4.3".into(),
        transceivers: vec![transceiver],
        ..Default::default()
    };
    let first_time = pings.first().map_or(0, |p| p.timestamp);
    let mut out = config.to_datagram(first_time).encode();

    for (i, ping) in pings.iter().enumerate() {
        let n = ping.power.len();
        let has_angles = !(ping.along.is_empty() && ping.athwart.is_empty());
        if has_angles && (ping.along.len() != n || ping.athwart.len() != n) {
            return Err(Error::Parameter(format!(
                "ping {i}: power, along and athwart lengths differ ({n}, {}, {})",
                ping.along.len(),
                ping.athwart.len()
            )));
        }
        let header = Raw0Header {
            channel: 1,
            mode: Raw0Header::mode_for(has_angles),
            frequency: (calib.frequency * 1000.0) as f32,
            transmit_power: calib.transmit_power as f32,
            pulse_length: calib.pulse_duration as f32,
            sample_interval: calib.sample_interval as f32,
            sound_velocity: calib.sound_speed as f32,
            absorption_coefficient: calib.absorption as f32,
            count: i32::try_from(n).map_err(|_| Error::Parameter(format!("ping {i} is too long")))?,
            ..Default::default()
        };
        let mut body = Vec::with_capacity(72 + 4 * n);
        header.write(&mut body);
        for p in &ping.power {
            body.extend_from_slice(&p.to_le_bytes());
        }
        if has_angles {
            for (&al, &at) in ping.along.iter().zip(&ping.athwart) {
                body.push(angle_byte(at, i, "athwart")?);
                body.push(angle_byte(al, i, "along")?);
            }
        }
        out.extend(Datagram::new(RAW0, ping.timestamp, body).encode());
    }
    Ok(out)
}
