//! Raw power to volume backscatter conversion.

use std::f64::consts::PI;

use super::PingRecord;
use crate::{Error, Result};

/// dB per raw power unit: 10·log10(2)/256.
pub const POWER_DB_PER_UNIT: f64 = 0.011_758_984_205_624_266;

/// Inputs of the Sv sonar equation for one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationParams {
    /// W
    pub transmit_power: f64,
    /// dB
    pub gain: f64,
    /// dB re 1 sr
    pub equivalent_beam_angle: f64,
    /// s
    pub pulse_duration: f64,
    /// dB/m
    pub absorption: f64,
    /// m/s
    pub sound_speed: f64,
    /// dB
    pub sa_correction: f64,
    /// kHz
    pub frequency: f64,
    /// s
    pub sample_interval: f64,
}

impl CalibrationParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("transmit_power", self.transmit_power),
            ("pulse_duration", self.pulse_duration),
            ("absorption", self.absorption),
            ("sound_speed", self.sound_speed),
            ("frequency", self.frequency),
            ("sample_interval", self.sample_interval),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!("{name} must be positive, got {v}")));
            }
        }
        let finite = [
            ("gain", self.gain),
            ("equivalent_beam_angle", self.equivalent_beam_angle),
            ("sa_correction", self.sa_correction),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::Parameter(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Meters per sample, c·Δt/2.
    pub fn range_step(&self) -> f64 {
        self.sound_speed * self.sample_interval / 2.0
    }

    pub fn wavelength(&self) -> f64 {
        self.sound_speed / (self.frequency * 1000.0)
    }

    /// Range-independent term of the sonar equation, dB.
    pub fn sv_constant(&self) -> f64 {
        let g = 10f64.powf(self.gain / 10.0);
        let psi = 10f64.powf(self.equivalent_beam_angle / 10.0);
        let lambda = self.wavelength();
        10.0 * (self.transmit_power * g * g * lambda * lambda * self.sound_speed * self.pulse_duration * psi
            / (32.0 * PI * PI))
            .log10()
            + 2.0 * self.sa_correction
    }
}

/// Optional replacements for calibration values read from the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CalibrationOverrides {
    pub transmit_power: Option<f64>,
    pub gain: Option<f64>,
    pub equivalent_beam_angle: Option<f64>,
    pub pulse_duration: Option<f64>,
    pub absorption: Option<f64>,
    pub sound_speed: Option<f64>,
    pub sa_correction: Option<f64>,
}

impl CalibrationOverrides {
    pub fn apply(&self, c: &mut CalibrationParams) {
        let set = |dst: &mut f64, src: Option<f64>| {
            if let Some(v) = src {
                *dst = v;
            }
        };
        set(&mut c.transmit_power, self.transmit_power);
        set(&mut c.gain, self.gain);
        set(&mut c.equivalent_beam_angle, self.equivalent_beam_angle);
        set(&mut c.pulse_duration, self.pulse_duration);
        set(&mut c.absorption, self.absorption);
        set(&mut c.sound_speed, self.sound_speed);
        set(&mut c.sa_correction, self.sa_correction);
    }
}

/// One calibrated ping: Sv plus the angle counts, aligned sample for sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SvColumn {
    pub sv: Vec<f64>,
    pub along: Vec<Option<i8>>,
    pub athwart: Vec<Option<i8>>,
}

/// Sv for one sample at `range` meters from a raw power word.
pub(crate) fn sample_sv(raw: i16, range: f64, calib: &CalibrationParams, constant: f64) -> f64 {
    f64::from(raw) * POWER_DB_PER_UNIT + 20.0 * range.log10() + 2.0 * calib.absorption * range - constant
}

/// Converts a ping to Sv. Sample 0 sits at zero range, where spreading loss
/// is undefined, and is set to `no_data` along with its angles.
pub fn power_to_sv(ping: &PingRecord, calib: &CalibrationParams, no_data: f64) -> Result<SvColumn> {
    calib.validate()?;
    let constant = calib.sv_constant();
    let step = calib.range_step();
    let sv = ping
        .power
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            if i == 0 {
                no_data
            } else {
                sample_sv(p, i as f64 * step, calib, constant)
            }
        })
        .collect();
    let wrap = |v: &[i8]| {
        v.iter()
            .enumerate()
            .map(|(i, &a)| (i > 0).then_some(a))
            .collect::<Vec<_>>()
    };
    let (along, athwart) = match &ping.angles {
        Some(a) => (wrap(&a.along), wrap(&a.athwart)),
        None => (vec![None; ping.len()], vec![None; ping.len()]),
    };
    Ok(SvColumn { sv, along, athwart })
}
