//! RAW file to grid bundle.

use std::collections::BTreeMap;
use std::path::Path;

use ndarray::Array2;

use super::{
    parse_raw0_with, power_to_sv, read_datagrams, AngleByteOrder, CalibrationOverrides,
    CalibrationParams, Configuration, PingRecord, CON0, RAW0,
};
use crate::bundle::Bundle;
use crate::grid::{AngleChannels, Echogram, NO_DATA};
use crate::{Error, Result};

/// Which channel of a multi-channel file to ingest.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ChannelSelector {
    /// Channel of the first RAW0 datagram.
    #[default]
    First,
    /// 1-based channel number.
    Number(i16),
    /// Nominal frequency in kHz.
    Frequency(f64),
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub channel: ChannelSelector,
    pub angle_order: AngleByteOrder,
    pub overrides: CalibrationOverrides,
}

/// Datagrams seen, by type tag.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DatagramCounts {
    pub by_tag: BTreeMap<String, usize>,
    /// Datagrams neither CON0 nor RAW0.
    pub skipped: usize,
    /// RAW0 datagrams that went into the bundle.
    pub pings_used: usize,
}

impl DatagramCounts {
    pub fn total(&self) -> usize {
        self.by_tag.values().sum()
    }
}

#[derive(Debug, Clone)]
pub struct IngestOutput {
    pub bundle: Bundle,
    pub counts: DatagramCounts,
    pub calibration: CalibrationParams,
}

pub fn ingest_raw(path: &Path, opts: &IngestOptions) -> Result<IngestOutput> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    ingest_raw_bytes(std::io::BufReader::new(file), opts)
}

fn selected(ping: &PingRecord, sel: ChannelSelector, first: i16) -> bool {
    match sel {
        ChannelSelector::First => ping.channel() == first,
        ChannelSelector::Number(n) => ping.channel() == n,
        ChannelSelector::Frequency(khz) => (f64::from(ping.header.frequency) / 1000.0 - khz).abs() < 1e-3,
    }
}

fn calibration(ping: &PingRecord, config: Option<&Configuration>, opts: &IngestOptions) -> Result<CalibrationParams> {
    let h = &ping.header;
    let transceiver = config.and_then(|c| c.transceiver(h.channel));
    let (gain, sa) = transceiver.map_or((f64::NAN, 0.0), |t| {
        let (g, sa) = t.gain_and_sa(h.pulse_length);
        (f64::from(g), f64::from(sa))
    });
    let mut calib = CalibrationParams {
        transmit_power: f64::from(h.transmit_power),
        gain,
        equivalent_beam_angle: transceiver.map_or(f64::NAN, |t| f64::from(t.equivalent_beam_angle)),
        pulse_duration: f64::from(h.pulse_length),
        absorption: f64::from(h.absorption_coefficient),
        sound_speed: f64::from(h.sound_velocity),
        sa_correction: sa,
        frequency: f64::from(h.frequency) / 1000.0,
        sample_interval: f64::from(h.sample_interval),
    };
    opts.overrides.apply(&mut calib);
    calib.validate().map_err(|e| match transceiver {
        None => Error::Parameter(format!(
            "no CON0 entry for channel {}; supply gain and equivalent beam angle explicitly ({e})",
            h.channel
        )),
        Some(_) => e,
    })?;
    Ok(calib)
}

/// Reads a RAW stream and assembles one channel into a bundle. Ragged pings
/// are padded at depth with the no-data sentinel.
pub fn ingest_raw_bytes(reader: impl std::io::Read, opts: &IngestOptions) -> Result<IngestOutput> {
    let datagrams = read_datagrams(reader)?;
    let mut counts = DatagramCounts::default();
    let mut config = None;
    let mut pings = Vec::new();
    let mut first_channel = None;
    for d in &datagrams {
        *counts.by_tag.entry(d.tag_str()).or_default() += 1;
        match d.tag {
            CON0 => {
                if config.is_none() {
                    config = Some(Configuration::parse(d)?);
                }
            }
            RAW0 => {
                let ping = parse_raw0_with(d, opts.angle_order)?;
                let first = *first_channel.get_or_insert(ping.channel());
                if selected(&ping, opts.channel, first) {
                    pings.push(ping);
                }
            }
            _ => counts.skipped += 1,
        }
    }
    if pings.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no RAW0 datagrams for channel selection {:?}",
            opts.channel
        )));
    }
    counts.pings_used = pings.len();

    let calib = calibration(&pings[0], config.as_ref(), opts)?;
    let rows = pings.iter().map(PingRecord::len).max().unwrap_or(0);
    let cols = pings.len();
    let mut sv = Array2::from_elem((rows, cols), NO_DATA);
    let mut along = Array2::from_elem((rows, cols), None);
    let mut athwart = Array2::from_elem((rows, cols), None);
    for (col, ping) in pings.iter().enumerate() {
        if ping.angles.is_none() {
            return Err(Error::Parameter(format!(
                "ping {col} on channel {} has no split-beam angle data",
                ping.channel()
            )));
        }
        let c = calibration(ping, config.as_ref(), opts)?;
        if c.range_step() != calib.range_step() {
            return Err(Error::Parameter(format!(
                "ping {col} has sample spacing {} m, first ping {} m; mixed spacing is not supported",
                c.range_step(),
                calib.range_step()
            )));
        }
        let column = power_to_sv(ping, &c, NO_DATA)?;
        for (row, v) in column.sv.iter().enumerate() {
            sv[[row, col]] = *v;
            along[[row, col]] = column.along[row];
            athwart[[row, col]] = column.athwart[row];
        }
    }

    let times: Vec<u64> = pings.iter().map(|p| p.timestamp).collect();
    let echogram = Echogram::new(sv, calib.range_step(), times.clone(), calib.frequency, NO_DATA)?;
    let angles = AngleChannels::new(along, athwart)?;
    let mut bundle = Bundle::new(echogram, angles)?;
    bundle.sound_speed = Some(calib.sound_speed);
    bundle.ping_interval = median_interval(&times);
    Ok(IngestOutput {
        bundle,
        counts,
        calibration: calib,
    })
}

/// Median spacing of filetime stamps in seconds.
fn median_interval(times: &[u64]) -> Option<f64> {
    let mut gaps: Vec<u64> = times.windows(2).map(|w| w[1].saturating_sub(w[0])).collect();
    if gaps.is_empty() {
        return None;
    }
    gaps.sort_unstable();
    let mid = gaps.len() / 2;
    let ticks = if gaps.len() % 2 == 1 {
        gaps[mid] as f64
    } else {
        (gaps[mid - 1] as f64 + gaps[mid] as f64) / 2.0
    };
    (ticks > 0.0).then_some(ticks / 1e7)
}
