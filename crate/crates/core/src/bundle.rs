//! Grid bundles: a directory of plain text files holding one echogram, its
//! split-beam angles and optional per-ping data.
//!
//! Layout:
//!
//! ```text
//! meta        key = value lines: frequency_khz, range_step_m, no_data,
//!             ping_interval_s, sound_speed_ms, rows, cols
//! sv          rows lines of cols comma-separated reals, row 0 shallowest
//! along       same layout, integer counts (invalid cells hold no_data)
//! athwart     same layout
//! seabed      optional, one line of cols fields: range in m or `*`
//! ping_times  optional, one timestamp per line
//! ```
//!
//! Unknown `meta` keys are ignored. `ping_interval_s` and `sound_speed_ms`
//! may be `*` when not known. Reals are written in shortest round-trip form
//! so a write/read cycle is bit-exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::grid::{AngleChannels, AngleGrid, Echogram, Mask, SeabedLine};
use crate::kv;
use crate::{Error, Result};

pub const META_FILE: &str = "meta";
pub const SV_FILE: &str = "sv";
pub const ALONG_FILE: &str = "along";
pub const ATHWART_FILE: &str = "athwart";
pub const SEABED_FILE: &str = "seabed";
pub const PING_TIMES_FILE: &str = "ping_times";

/// Echogram, angles and the per-survey values carried alongside them.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub echogram: Echogram,
    pub angles: AngleChannels,
    pub seabed: Option<SeabedLine>,
    /// Seconds between transmissions, when known.
    pub ping_interval: Option<f64>,
    /// m/s, when known.
    pub sound_speed: Option<f64>,
}

impl Bundle {
    pub fn new(echogram: Echogram, angles: AngleChannels) -> Result<Self> {
        if angles.shape() != echogram.shape() {
            return Err(Error::shape("angles", angles.shape(), "sv", echogram.shape()));
        }
        let angles = angles.align_validity(&echogram)?;
        Ok(Self {
            echogram,
            angles,
            seabed: None,
            ping_interval: None,
            sound_speed: None,
        })
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let e = &self.echogram;
        let (rows, cols) = e.shape();
        let opt = |v: Option<f64>| v.map_or_else(|| "*".to_string(), |v| v.to_string());
        let meta = kv::render(&[
            ("frequency_khz", e.frequency().to_string()),
            ("range_step_m", e.range_step().to_string()),
            ("no_data", e.no_data().to_string()),
            ("ping_interval_s", opt(self.ping_interval)),
            ("sound_speed_ms", opt(self.sound_speed)),
            ("rows", rows.to_string()),
            ("cols", cols.to_string()),
        ]);
        write_file(&dir.join(META_FILE), &meta)?;
        write_file(&dir.join(SV_FILE), &format_grid(e.sv(), |v| v.to_string()))?;
        let nd = e.no_data().to_string();
        let angle_text = |g: &AngleGrid| format_grid(g, |v| v.map_or_else(|| nd.clone(), |v| v.to_string()));
        write_file(&dir.join(ALONG_FILE), &angle_text(self.angles.along()))?;
        write_file(&dir.join(ATHWART_FILE), &angle_text(self.angles.athwart()))?;
        if let Some(seabed) = &self.seabed {
            let fields: Vec<String> = seabed.ranges().iter().map(|r| opt(*r)).collect();
            write_file(&dir.join(SEABED_FILE), &(fields.join(",") + "\n"))?;
        }
        let mut times = String::new();
        for t in e.ping_times() {
            let _ = writeln!(times, "{t}");
        }
        write_file(&dir.join(PING_TIMES_FILE), &times)?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let meta = Meta::read(&dir.join(META_FILE))?;
        let shape = (meta.rows, meta.cols);

        let sv_path = dir.join(SV_FILE);
        let sv = read_grid(&sv_path, shape, |s| s.parse::<f64>().map_err(|e| e.to_string()))?;

        let nd = meta.no_data;
        let parse_angle = |s: &str| -> std::result::Result<Option<i8>, String> {
            let v: f64 = s.parse().map_err(|e: std::num::ParseFloatError| e.to_string())?;
            if v == nd {
                return Ok(None);
            }
            if v.fract() != 0.0 || !(-128.0..=127.0).contains(&v) {
                return Err(format!("angle count {s} is not an integer in [-128, 127]"));
            }
            Ok(Some(v as i8))
        };
        let along = read_grid(&dir.join(ALONG_FILE), shape, parse_angle)?;
        let athwart = read_grid(&dir.join(ATHWART_FILE), shape, parse_angle)?;

        let times_path = dir.join(PING_TIMES_FILE);
        let ping_times = if times_path.exists() {
            read_ping_times(&times_path, meta.cols)?
        } else {
            (0..meta.cols as u64).collect()
        };

        let echogram = Echogram::new(sv, meta.range_step, ping_times, meta.frequency, nd)
            .map_err(|e| Error::Parse {
                path: sv_path,
                line: 0,
                reason: e.to_string(),
            })?;
        let angles = AngleChannels::new(along, athwart)?;
        let mut bundle = Bundle::new(echogram, angles)?;
        bundle.ping_interval = meta.ping_interval;
        bundle.sound_speed = meta.sound_speed;

        let seabed_path = dir.join(SEABED_FILE);
        if seabed_path.exists() {
            let seabed = read_seabed(&seabed_path, meta.cols)?;
            seabed.validate(bundle.echogram.max_range())?;
            bundle.seabed = Some(seabed);
        }
        Ok(bundle)
    }
}

struct Meta {
    frequency: f64,
    range_step: f64,
    no_data: f64,
    ping_interval: Option<f64>,
    sound_speed: Option<f64>,
    rows: usize,
    cols: usize,
}

impl Meta {
    fn read(path: &Path) -> Result<Self> {
        let entries = kv::read(path)?;
        let find = |key: &str| {
            entries.iter().find(|e| e.key == key).ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                line: 0,
                reason: format!("missing key `{key}`"),
            })
        };
        let optional = |key: &str| -> Result<Option<f64>> {
            match entries.iter().find(|e| e.key == key) {
                None => Ok(None),
                Some(e) if e.value == "*" => Ok(None),
                Some(e) => e.parse_value(path).map(Some),
            }
        };
        Ok(Self {
            frequency: find("frequency_khz")?.parse_value(path)?,
            range_step: find("range_step_m")?.parse_value(path)?,
            no_data: find("no_data")?.parse_value(path)?,
            ping_interval: optional("ping_interval_s")?,
            sound_speed: optional("sound_speed_ms")?,
            rows: find("rows")?.parse_value(path)?,
            cols: find("cols")?.parse_value(path)?,
        })
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Formats a grid as comma-separated lines, one per row.
pub fn format_grid<T>(grid: &Array2<T>, fmt: impl Fn(&T) -> String) -> String {
    let mut out = String::with_capacity(grid.len() * 6);
    for row in grid.rows() {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&fmt(v));
        }
        out.push('\n');
    }
    out
}

/// Reads a comma-separated grid of the expected shape.
pub fn read_grid<T>(
    path: &Path,
    shape: (usize, usize),
    parse: impl Fn(&str) -> std::result::Result<T, String>,
) -> Result<Array2<T>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_grid(&text, path, shape, parse)
}

fn parse_grid<T>(
    text: &str,
    path: &Path,
    (rows, cols): (usize, usize),
    parse: impl Fn(&str) -> std::result::Result<T, String>,
) -> Result<Array2<T>> {
    let err = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut data = Vec::with_capacity(rows * cols);
    let mut n_lines = 0;
    for (idx, line) in text.lines().enumerate() {
        if idx >= rows {
            if line.trim().is_empty() {
                continue;
            }
            return Err(err(idx + 1, format!("expected {rows} rows, found more")));
        }
        n_lines += 1;
        let before = data.len();
        if cols > 0 {
            for field in line.split(',') {
                data.push(parse(field.trim()).map_err(|r| err(idx + 1, r))?);
            }
        } else if !line.trim().is_empty() {
            return Err(err(idx + 1, "expected an empty row".into()));
        }
        if data.len() - before != cols {
            return Err(err(
                idx + 1,
                format!("expected {cols} fields, found {}", data.len() - before),
            ));
        }
    }
    if n_lines != rows {
        return Err(err(n_lines, format!("expected {rows} rows, found {n_lines}")));
    }
    Ok(Array2::from_shape_vec((rows, cols), data).expect("row and field counts checked"))
}

fn read_ping_times(path: &Path, cols: usize) -> Result<Vec<u64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut times = Vec::with_capacity(cols);
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        times.push(line.parse::<u64>().map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            reason: format!("bad timestamp {line:?}: {e}"),
        })?);
    }
    if times.len() != cols {
        return Err(Error::Length {
            what: "ping_times",
            expected: cols,
            found: times.len(),
        });
    }
    Ok(times)
}

fn read_seabed(path: &Path, cols: usize) -> Result<SeabedLine> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let line = text.lines().next().unwrap_or("").trim();
    let mut ranges = Vec::with_capacity(cols);
    if !line.is_empty() {
        for field in line.split(',') {
            let field = field.trim();
            ranges.push(if field == "*" {
                None
            } else {
                Some(field.parse::<f64>().map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: 1,
                    reason: format!("bad seabed range {field:?}: {e}"),
                })?)
            });
        }
    }
    if ranges.len() != cols {
        return Err(Error::Length {
            what: "seabed",
            expected: cols,
            found: ranges.len(),
        });
    }
    Ok(SeabedLine::new(ranges))
}

/// Writes a mask as a grid of `0`/`1` fields.
pub fn write_mask(path: &Path, mask: &Mask) -> Result<()> {
    write_file(path, &format_grid(mask.bits(), |&b| if b { "1" } else { "0" }.to_string()))
}

/// Reads a `0`/`1` mask grid of the expected shape.
pub fn read_mask(path: &Path, shape: (usize, usize)) -> Result<Mask> {
    read_grid(path, shape, |s| match s {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(format!("mask cells must be 0 or 1, got {other:?}")),
    })
    .map(Mask::new)
}
