use std::fmt;
use std::path::Path;

use crate::kv::{self, Entry};
use crate::{Error, Result};

/// Pixel adjacency used when labeling regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    #[default]
    Four,
    Eight,
}

impl Connectivity {
    pub(crate) fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &[(-1, 0), (1, 0), (0, -1), (0, 1)],
            Connectivity::Eight => &[
                (-1, -1),
                (-1, 0),
                (-1, 1),
                (0, -1),
                (0, 1),
                (1, -1),
                (1, 0),
                (1, 1),
            ],
        }
    }
}

impl TryFrom<u32> for Connectivity {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        match n {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            _ => Err(Error::Parameter(format!("connectivity must be 4 or 8, got {n}"))),
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connectivity::Four => "4",
            Connectivity::Eight => "8",
        })
    }
}

/// Tunable parameters of the detector. Defaults are the published values.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionConfig {
    /// Window side for the along-ship mean-square.
    pub window_along: usize,
    /// Window side for the athwart-ship mean-square.
    pub window_athwart: usize,
    /// Threshold on mean-square along-ship counts (counts²).
    pub t_theta: f64,
    /// Threshold on mean-square athwart-ship counts (counts²).
    pub t_phi: f64,
    /// Floor for the dynamic Sv threshold, dB.
    pub t_min: Option<f64>,
    pub connectivity: Connectivity,
    pub fill_holes: bool,
    /// Replacement value used when cleaning an echogram.
    pub token: f64,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            window_along: 28,
            window_athwart: 52,
            t_theta: 702.0,
            t_phi: 282.0,
            t_min: Some(-70.0),
            connectivity: Connectivity::Four,
            fill_holes: true,
            token: -999.0,
        }
    }
}

/// Field names accepted in configuration files, in canonical order.
pub const CONFIG_KEYS: [&str; 8] = [
    "window_along",
    "window_athwart",
    "t_theta",
    "t_phi",
    "t_min",
    "connectivity",
    "fill_holes",
    "token",
];

impl DetectionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_along < 1 || self.window_athwart < 1 {
            return Err(Error::Parameter(format!(
                "window sides must be >= 1, got {} and {}",
                self.window_along, self.window_athwart
            )));
        }
        for (name, t) in [("t_theta", self.t_theta), ("t_phi", self.t_phi)] {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Parameter(format!("{name} must be finite and >= 0, got {t}")));
            }
        }
        if let Some(t) = self.t_min {
            if !t.is_finite() {
                return Err(Error::Parameter(format!("t_min must be finite, got {t}")));
            }
        }
        if !self.token.is_finite() {
            return Err(Error::Parameter(format!("token must be finite, got {}", self.token)));
        }
        Ok(())
    }

    /// Applies `key = value` entries on top of `self`. Unknown keys are an
    /// error. `t_min = none` disables the floor.
    pub fn apply_entries(&mut self, entries: &[Entry], path: &Path) -> Result<()> {
        for e in entries {
            match e.key.as_str() {
                "window_along" => self.window_along = e.parse_value(path)?,
                "window_athwart" => self.window_athwart = e.parse_value(path)?,
                "t_theta" => self.t_theta = e.parse_value(path)?,
                "t_phi" => self.t_phi = e.parse_value(path)?,
                "t_min" => {
                    self.t_min = if e.value.eq_ignore_ascii_case("none") {
                        None
                    } else {
                        Some(e.parse_value(path)?)
                    }
                }
                "connectivity" => {
                    let n: u32 = e.parse_value(path)?;
                    self.connectivity =
                        Connectivity::try_from(n).map_err(|err| e.error(path, err.to_string()))?;
                }
                "fill_holes" => self.fill_holes = e.parse_value(path)?,
                "token" => self.token = e.parse_value(path)?,
                other => {
                    return Err(e.error(
                        path,
                        format!("unknown key `{other}`; expected one of {}", CONFIG_KEYS.join(", ")),
                    ))
                }
            }
        }
        self.validate()
    }

    /// Reads a configuration file over the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_entries(&kv::read(path)?, path)?;
        Ok(cfg)
    }

    /// Entries in canonical key order, in the configuration-file syntax.
    pub fn to_entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("window_along", self.window_along.to_string()),
            ("window_athwart", self.window_athwart.to_string()),
            ("t_theta", self.t_theta.to_string()),
            ("t_phi", self.t_phi.to_string()),
            ("t_min", self.t_min.map_or_else(|| "none".into(), |t| t.to_string())),
            ("connectivity", self.connectivity.to_string()),
            ("fill_holes", self.fill_holes.to_string()),
            ("token", self.token.to_string()),
        ]
    }

    pub fn to_config_text(&self) -> String {
        kv::render(&self.to_entries())
    }
}
