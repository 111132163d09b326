use super::{Datagram, Le, RAW0};
use crate::{Error, Result};

/// Size of the fixed RAW0 body header preceding the samples.
pub const RAW0_HEADER_LEN: usize = 72;

const MODE_POWER: i16 = 1;
const MODE_ANGLE: i16 = 2;

/// Which byte of a 16-bit angle word holds which channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleByteOrder {
    /// Low byte athwart-ship, high byte along-ship (standard EK60 layout).
    #[default]
    AthwartLow,
    /// Low byte along-ship, for writers that swap the pair.
    AlongLow,
}

/// Fixed header of a RAW0 body. Frequencies are in Hz as stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Raw0Header {
    pub channel: i16,
    pub mode: i16,
    pub transducer_depth: f32,
    pub frequency: f32,
    pub transmit_power: f32,
    pub pulse_length: f32,
    pub bandwidth: f32,
    pub sample_interval: f32,
    pub sound_velocity: f32,
    pub absorption_coefficient: f32,
    pub heave: f32,
    pub roll: f32,
    pub pitch: f32,
    pub temperature: f32,
    pub trawl_upper_depth_valid: i16,
    pub trawl_opening_valid: i16,
    pub trawl_upper_depth: f32,
    pub trawl_opening: f32,
    pub offset: i32,
    pub count: i32,
}

impl Raw0Header {
    fn read(r: &mut Le<'_>) -> Option<Self> {
        Some(Self {
            channel: r.i16()?,
            mode: r.i16()?,
            transducer_depth: r.f32()?,
            frequency: r.f32()?,
            transmit_power: r.f32()?,
            pulse_length: r.f32()?,
            bandwidth: r.f32()?,
            sample_interval: r.f32()?,
            sound_velocity: r.f32()?,
            absorption_coefficient: r.f32()?,
            heave: r.f32()?,
            roll: r.f32()?,
            pitch: r.f32()?,
            temperature: r.f32()?,
            trawl_upper_depth_valid: r.i16()?,
            trawl_opening_valid: r.i16()?,
            trawl_upper_depth: r.f32()?,
            trawl_opening: r.f32()?,
            offset: r.i32()?,
            count: r.i32()?,
        })
    }

    pub(crate) fn write(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.channel.to_le_bytes());
        out.extend_from_slice(&self.mode.to_le_bytes());
        for v in [
            self.transducer_depth,
            self.frequency,
            self.transmit_power,
            self.pulse_length,
            self.bandwidth,
            self.sample_interval,
            self.sound_velocity,
            self.absorption_coefficient,
            self.heave,
            self.roll,
            self.pitch,
            self.temperature,
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&self.trawl_upper_depth_valid.to_le_bytes());
        out.extend_from_slice(&self.trawl_opening_valid.to_le_bytes());
        out.extend_from_slice(&self.trawl_upper_depth.to_le_bytes());
        out.extend_from_slice(&self.trawl_opening.to_le_bytes());
        out.extend_from_slice(&self.offset.to_le_bytes());
        out.extend_from_slice(&self.count.to_le_bytes());
    }

    pub fn has_power(&self) -> bool {
        self.mode & MODE_POWER != 0
    }

    pub fn has_angles(&self) -> bool {
        self.mode & MODE_ANGLE != 0
    }

    pub(crate) fn mode_for(angles: bool) -> i16 {
        if angles {
            MODE_POWER | MODE_ANGLE
        } else {
            MODE_POWER
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SplitBeamAngles {
    pub along: Vec<i8>,
    pub athwart: Vec<i8>,
}

/// Decoded RAW0 datagram.
#[derive(Debug, Clone, PartialEq)]
pub struct PingRecord {
    pub timestamp: u64,
    pub header: Raw0Header,
    /// Raw power words, 10·log10(2)/256 dB per unit.
    pub power: Vec<i16>,
    /// Present when the ping was recorded in split-beam mode.
    pub angles: Option<SplitBeamAngles>,
}

impl PingRecord {
    pub fn channel(&self) -> i16 {
        self.header.channel
    }

    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }
}

pub fn parse_raw0(d: &Datagram) -> Result<PingRecord> {
    parse_raw0_with(d, AngleByteOrder::default())
}

/// Decodes a RAW0 body. Offsets in errors are relative to the body start.
pub fn parse_raw0_with(d: &Datagram, order: AngleByteOrder) -> Result<PingRecord> {
    if d.tag != RAW0 {
        return Err(Error::DatagramType {
            expected: "RAW0".into(),
            found: d.tag_str(),
        });
    }
    let mut r = Le::new(&d.body);
    let header = Raw0Header::read(&mut r).ok_or_else(|| Error::Corrupt {
        offset: 0,
        reason: format!(
            "RAW0 body of {} bytes is shorter than its {RAW0_HEADER_LEN}-byte header",
            d.body.len()
        ),
    })?;
    let count = usize::try_from(header.count).map_err(|_| Error::Corrupt {
        offset: (RAW0_HEADER_LEN - 4) as u64,
        reason: format!("negative sample count {}", header.count),
    })?;
    if !header.has_power() {
        return Err(Error::Corrupt {
            offset: 2,
            reason: format!("mode {} carries no power samples", header.mode),
        });
    }
    let per_sample = 2 + if header.has_angles() { 2 } else { 0 };
    let expected = count.checked_mul(per_sample).and_then(|n| n.checked_add(RAW0_HEADER_LEN));
    if expected != Some(d.body.len()) {
        return Err(Error::Corrupt {
            offset: r.pos() as u64,
            reason: format!(
                "RAW0 body is {} bytes but mode {} with {count} samples needs {}",
                d.body.len(),
                header.mode,
                expected.map_or_else(|| "more than addressable".to_string(), |n| n.to_string()),
            ),
        });
    }
    let power: Vec<i16> = (0..count).map(|_| r.i16().expect("length checked")).collect();
    let angles = header.has_angles().then(|| {
        let raw = r.bytes(2 * count).expect("length checked");
        let mut along = Vec::with_capacity(count);
        let mut athwart = Vec::with_capacity(count);
        for pair in raw.chunks_exact(2) {
            let (lo, hi) = (pair[0] as i8, pair[1] as i8);
            match order {
                AngleByteOrder::AthwartLow => {
                    athwart.push(lo);
                    along.push(hi);
                }
                AngleByteOrder::AlongLow => {
                    along.push(lo);
                    athwart.push(hi);
                }
            }
        }
        SplitBeamAngles { along, athwart }
    });
    debug_assert_eq!(r.remaining(), 0);
    Ok(PingRecord {
        timestamp: d.timestamp,
        header,
        power,
        angles,
    })
}
