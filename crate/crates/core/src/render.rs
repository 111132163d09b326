//! PNG rendering of echograms for visual inspection.
//!
//! The image holds the data area only: one cell becomes a `scale × scale`
//! block, row 0 at the top. No axes or labels are drawn so output bytes are
//! reproducible.

use std::path::Path;
use std::str::FromStr;

use image::{ImageFormat, Rgb, RgbImage};

use crate::grid::{Echogram, Mask};
use crate::{Error, Result};

const VIRIDIS: [[u8; 3]; 9] = [
    [68, 1, 84],
    [71, 44, 122],
    [59, 81, 139],
    [44, 113, 142],
    [33, 144, 141],
    [39, 173, 129],
    [92, 200, 99],
    [170, 220, 50],
    [253, 231, 37],
];

const GRAY: [[u8; 3]; 2] = [[0, 0, 0], [255, 255, 255]];

/// Colour ramp from low to high Sv.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Colormap {
    #[default]
    Viridis,
    Gray,
}

impl Colormap {
    fn anchors(self) -> &'static [[u8; 3]] {
        match self {
            Colormap::Viridis => &VIRIDIS,
            Colormap::Gray => &GRAY,
        }
    }

    /// Colour at `t` in [0, 1], linearly interpolated between anchors.
    pub fn at(self, t: f64) -> [u8; 3] {
        let anchors = self.anchors();
        let t = t.clamp(0.0, 1.0);
        let pos = t * (anchors.len() - 1) as f64;
        let i = (pos.floor() as usize).min(anchors.len() - 2);
        let frac = pos - i as f64;
        let (a, b) = (anchors[i], anchors[i + 1]);
        std::array::from_fn(|k| {
            (f64::from(a[k]) + frac * (f64::from(b[k]) - f64::from(a[k]))).round() as u8
        })
    }

    pub fn top(self) -> [u8; 3] {
        *self.anchors().last().expect("non-empty ramp")
    }

    pub fn bottom(self) -> [u8; 3] {
        self.anchors()[0]
    }
}

impl FromStr for Colormap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "viridis" => Ok(Colormap::Viridis),
            "gray" | "grey" => Ok(Colormap::Gray),
            other => Err(Error::Parameter(format!(
                "unknown colormap {other:?}; expected viridis or gray"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    /// dB mapped to the bottom of the ramp.
    pub sv_min: f64,
    /// dB mapped to the top of the ramp.
    pub sv_max: f64,
    pub colormap: Colormap,
    /// RGBA; alpha 0 leaves the echogram untouched, 255 paints over it.
    pub overlay_color: [u8; 4],
    pub no_data_color: [u8; 3],
    /// Pixels per cell along each axis.
    pub scale: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            sv_min: -90.0,
            sv_max: -30.0,
            colormap: Colormap::Viridis,
            overlay_color: [255, 0, 0, 128],
            no_data_color: [128, 128, 128],
            scale: 1,
        }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<()> {
        if self.sv_min >= self.sv_max || !self.sv_min.is_finite() || !self.sv_max.is_finite() {
            return Err(Error::Parameter(format!(
                "colour scale needs sv_min < sv_max, got {} and {}",
                self.sv_min, self.sv_max
            )));
        }
        if self.scale < 1 {
            return Err(Error::Parameter("scale must be >= 1".into()));
        }
        Ok(())
    }

    fn cell_color(&self, sv: f64) -> [u8; 3] {
        self.colormap.at((sv - self.sv_min) / (self.sv_max - self.sv_min))
    }
}

/// Alpha-blends `over` (RGBA) onto `base`.
pub fn blend(base: [u8; 3], over: [u8; 4]) -> [u8; 3] {
    let a = u32::from(over[3]);
    std::array::from_fn(|k| ((a * u32::from(over[k]) + (255 - a) * u32::from(base[k]) + 127) / 255) as u8)
}

pub fn render_echogram(echogram: &Echogram, mask: Option<&Mask>, opts: &RenderOptions) -> Result<RgbImage> {
    opts.validate()?;
    if let Some(m) = mask {
        if m.shape() != echogram.shape() {
            return Err(Error::shape("echogram", echogram.shape(), "mask", m.shape()));
        }
    }
    let (rows, cols) = echogram.shape();
    let s = opts.scale;
    let width = u32::try_from(cols).ok().and_then(|c| c.checked_mul(s));
    let height = u32::try_from(rows).ok().and_then(|r| r.checked_mul(s));
    let (Some(width), Some(height)) = (width, height) else {
        return Err(Error::Parameter("image dimensions overflow".into()));
    };
    let mut img = RgbImage::new(width, height);
    for ((r, c), &sv) in echogram.sv().indexed_iter() {
        let mut color = if sv == echogram.no_data() {
            opts.no_data_color
        } else {
            opts.cell_color(sv)
        };
        if mask.is_some_and(|m| m.get(r, c)) {
            color = blend(color, opts.overlay_color);
        }
        let (x0, y0) = (c as u32 * s, r as u32 * s);
        for dy in 0..s {
            for dx in 0..s {
                img.put_pixel(x0 + dx, y0 + dy, Rgb(color));
            }
        }
    }
    Ok(img)
}

pub fn write_png(img: &RgbImage, path: &Path) -> Result<()> {
    img.save_with_format(path, ImageFormat::Png)?;
    Ok(())
}

/// Encodes to PNG bytes in memory.
pub fn encode_png(img: &RgbImage) -> Result<Vec<u8>> {
    let mut out = std::io::Cursor::new(Vec::new());
    img.write_to(&mut out, ImageFormat::Png)?;
    Ok(out.into_inner())
}
