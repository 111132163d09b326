use super::{get_text, put_text, Datagram, Le, CON0};
use crate::{Error, Result};

const HEADER_TEXT_LEN: usize = 128 * 3 + 30 + 98;
const TRANSCEIVER_LEN: usize = 320;

/// Per-transceiver block of a CON0 datagram. Frequencies are in Hz.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Transceiver {
    pub channel_id: String,
    pub beam_type: i32,
    pub frequency: f32,
    pub gain: f32,
    pub equivalent_beam_angle: f32,
    pub beamwidth_along: f32,
    pub beamwidth_athwart: f32,
    pub angle_sensitivity_along: f32,
    pub angle_sensitivity_athwart: f32,
    pub angle_offset_along: f32,
    pub angle_offset_athwart: f32,
    pub position: [f32; 3],
    pub direction: [f32; 3],
    pub pulse_length_table: [f32; 5],
    pub gain_table: [f32; 5],
    pub sa_correction_table: [f32; 5],
}

impl Transceiver {
    /// Gain and Sa correction for a pulse length, falling back to the
    /// nominal gain and zero correction when the table has no match.
    pub fn gain_and_sa(&self, pulse_length: f32) -> (f32, f32) {
        self.pulse_length_table
            .iter()
            .position(|&p| p > 0.0 && ((p - pulse_length) / p).abs() < 1e-4)
            .map_or((self.gain, 0.0), |i| (self.gain_table[i], self.sa_correction_table[i]))
    }

    fn read(r: &mut Le<'_>) -> Option<Self> {
        let channel_id = get_text(r.bytes(128)?);
        let beam_type = r.i32()?;
        let mut f = || r.f32();
        let mut t = Self {
            channel_id,
            beam_type,
            frequency: f()?,
            gain: f()?,
            equivalent_beam_angle: f()?,
            beamwidth_along: f()?,
            beamwidth_athwart: f()?,
            angle_sensitivity_along: f()?,
            angle_sensitivity_athwart: f()?,
            angle_offset_along: f()?,
            angle_offset_athwart: f()?,
            position: [f()?, f()?, f()?],
            direction: [f()?, f()?, f()?],
            ..Default::default()
        };
        for v in &mut t.pulse_length_table {
            *v = r.f32()?;
        }
        r.bytes(8)?;
        for v in &mut t.gain_table {
            *v = r.f32()?;
        }
        r.bytes(8)?;
        for v in &mut t.sa_correction_table {
            *v = r.f32()?;
        }
        r.bytes(52)?;
        Some(t)
    }

    fn write(&self, out: &mut Vec<u8>) {
        let start = out.len();
        put_text(out, &self.channel_id, 128);
        out.extend_from_slice(&self.beam_type.to_le_bytes());
        let scalars = [
            self.frequency,
            self.gain,
            self.equivalent_beam_angle,
            self.beamwidth_along,
            self.beamwidth_athwart,
            self.angle_sensitivity_along,
            self.angle_sensitivity_athwart,
            self.angle_offset_along,
            self.angle_offset_athwart,
        ];
        let floats = scalars
            .iter()
            .chain(&self.position)
            .chain(&self.direction)
            .chain(&self.pulse_length_table);
        for v in floats {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&[0; 8]);
        for v in &self.gain_table {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&[0; 8]);
        for v in &self.sa_correction_table {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&[0; 52]);
        debug_assert_eq!(out.len() - start, TRANSCEIVER_LEN);
    }
}

/// Decoded CON0 datagram.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Configuration {
    pub survey_name: String,
    pub transect_name: String,
    pub sounder_name: String,
    pub version: String,
    pub transceivers: Vec<Transceiver>,
}

impl Configuration {
    pub fn parse(d: &Datagram) -> Result<Self> {
        if d.tag != CON0 {
            return Err(Error::DatagramType {
                expected: "CON0".into(),
                found: d.tag_str(),
            });
        }
        let mut r = Le::new(&d.body);
        let short = |at: usize| Error::Corrupt {
            offset: at as u64,
            reason: format!("CON0 body of {} bytes ends early", d.body.len()),
        };
        let header = r.bytes(HEADER_TEXT_LEN).ok_or_else(|| short(0))?;
        let count = r.i32().ok_or_else(|| short(HEADER_TEXT_LEN))?;
        let count = usize::try_from(count).map_err(|_| Error::Corrupt {
            offset: HEADER_TEXT_LEN as u64,
            reason: format!("negative transceiver count {count}"),
        })?;
        let mut transceivers = Vec::with_capacity(count.min(64));
        for _ in 0..count {
            let at = r.pos();
            transceivers.push(Transceiver::read(&mut r).ok_or_else(|| short(at))?);
        }
        Ok(Self {
            survey_name: get_text(&header[0..128]),
            transect_name: get_text(&header[128..256]),
            sounder_name: get_text(&header[256..384]),
            version: get_text(&header[384..414]),
            transceivers,
        })
    }

    pub fn to_datagram(&self, timestamp: u64) -> Datagram {
        let mut body = Vec::with_capacity(HEADER_TEXT_LEN + 4 + TRANSCEIVER_LEN * self.transceivers.len());
        put_text(&mut body, &self.survey_name, 128);
        put_text(&mut body, &self.transect_name, 128);
        put_text(&mut body, &self.sounder_name, 128);
        put_text(&mut body, &self.version, 30);
        body.extend_from_slice(&[0; 98]);
        let n = i32::try_from(self.transceivers.len()).expect("transceiver count fits in i32");
        body.extend_from_slice(&n.to_le_bytes());
        for t in &self.transceivers {
            t.write(&mut body);
        }
        Datagram::new(CON0, timestamp, body)
    }

    /// Transceiver for a 1-based RAW0 channel number.
    pub fn transceiver(&self, channel: i16) -> Option<&Transceiver> {
        usize::try_from(channel)
            .ok()
            .and_then(|c| c.checked_sub(1))
            .and_then(|i| self.transceivers.get(i))
    }
}
