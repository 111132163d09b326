//! Alias-range arithmetic.
//!
//! A seabed at range `R_S` beyond the logging range `R_L` returns its echo
//! during a later ping's listening window. With sound speed `c` and ping
//! interval `I_T` it appears at
//!
//! ```text
//! R_A = mod(2 R_S, c I_T) / 2,    R_L < R_S < R_max
//! ```
//!
//! where `R_max` is the deepest seabed the frequency can detect.

use crate::{Error, Result};

/// Default maximum seabed detection range (m) by frequency (kHz) for
/// typical EK60 transducer settings.
pub const DEFAULT_MAX_RANGES: [(f64, f64); 5] = [
    (18.0, 7000.0),
    (38.0, 2800.0),
    (70.0, 1100.0),
    (120.0, 850.0),
    (200.0, 550.0),
];

pub const DEFAULT_SOUND_SPEED: f64 = 1500.0;

#[derive(Debug, Clone, PartialEq)]
pub struct AliasGeometry {
    /// m/s
    pub sound_speed: f64,
    /// s
    pub ping_interval: f64,
    /// m
    pub logging_range: f64,
    /// (frequency kHz, maximum seabed detection range m)
    pub max_range_table: Vec<(f64, f64)>,
}

impl AliasGeometry {
    /// Geometry with the default sound speed and maximum-range table.
    pub fn new(ping_interval: f64, logging_range: f64) -> Result<Self> {
        let g = Self {
            sound_speed: DEFAULT_SOUND_SPEED,
            ping_interval,
            logging_range,
            max_range_table: DEFAULT_MAX_RANGES.to_vec(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_sound_speed(mut self, sound_speed: f64) -> Result<Self> {
        self.sound_speed = sound_speed;
        self.validate()?;
        Ok(self)
    }

    /// Replaces or adds the maximum range for one frequency.
    pub fn with_max_range(mut self, frequency: f64, max_range: f64) -> Result<Self> {
        match self.max_range_table.iter_mut().find(|(f, _)| same_frequency(*f, frequency)) {
            Some(entry) => entry.1 = max_range,
            None => self.max_range_table.push((frequency, max_range)),
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must be positive, got {v}")))
            }
        };
        positive("sound speed", self.sound_speed)?;
        positive("ping interval", self.ping_interval)?;
        positive("logging range", self.logging_range)?;
        for &(f, r) in &self.max_range_table {
            positive("table frequency", f)?;
            positive("table maximum range", r)?;
        }
        Ok(())
    }

    /// Range travelled by sound in half a ping interval, `c I_T / 2`: the
    /// spacing between successive aliases of one seabed.
    pub fn alias_period(&self) -> f64 {
        self.sound_speed * self.ping_interval / 2.0
    }

    pub fn max_range(&self, frequency: f64) -> Result<f64> {
        self.max_range_table
            .iter()
            .find(|(f, _)| same_frequency(*f, frequency))
            .map(|&(_, r)| r)
            .ok_or(Error::UnknownFrequency(frequency))
    }
}

fn same_frequency(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-6
}

/// Apparent range of a seabed at `seabed_range` beyond the logging range.
pub fn aliased_range(seabed_range: f64, g: &AliasGeometry) -> Result<f64> {
    g.validate()?;
    if !(seabed_range > g.logging_range && seabed_range.is_finite()) {
        return Err(Error::Domain(format!(
            "seabed range {seabed_range} m must exceed the logging range {} m (R_L < R_S < R_max)",
            g.logging_range
        )));
    }
    Ok((2.0 * seabed_range).rem_euclid(g.sound_speed * g.ping_interval) / 2.0)
}

/// Every seabed range in `(R_L, R_max)` whose alias appears at `alias_range`,
/// ascending.
pub fn candidate_true_depths(alias_range: f64, g: &AliasGeometry, frequency: f64) -> Result<Vec<f64>> {
    g.validate()?;
    let max_range = g.max_range(frequency)?;
    let period = g.alias_period();
    if !(alias_range >= 0.0 && alias_range < period) {
        return Err(Error::Domain(format!(
            "alias range {alias_range} m must lie in [0, {period}) for this ping interval"
        )));
    }
    let mut out = Vec::new();
    for k in 0u64.. {
        let r = alias_range + k as f64 * period;
        if r >= max_range {
            break;
        }
        if r > g.logging_range {
            out.push(r);
        }
    }
    Ok(out)
}

/// Whether a seabed at `seabed_range` is within reach of `frequency`. A
/// `false` verdict means an echo seen at that frequency cannot be an alias of
/// this seabed.
pub fn cross_frequency_plausible(seabed_range: f64, frequency: f64, g: &AliasGeometry) -> Result<bool> {
    Ok(seabed_range < g.max_range(frequency)?)
}
