//! Seeded generator of echograms with a known aliased-seabed band.
//!
//! The scene has three parts, painted in this order:
//!
//! - background: Sv uniform in `background_db ± background_jitter_db`, both
//!   angle channels uniform in `[-incoherent_counts, incoherent_counts]`;
//! - a horizontal scattering layer `layer_thickness` samples thick at
//!   `layer_db ± target_jitter_db`, angles drawn like the background;
//! - a straight alias band `band_thickness` samples thick crossing the grid
//!   from one depth on the first ping to another on the last, at
//!   `band_db ± target_jitter_db`. Along-ship counts carry the sign of the
//!   band's slope and grow linearly across its thickness from
//!   `band_along_counts` to `band_along_counts + band_along_gradient`;
//!   athwart counts are incoherent.
//!
//! Where band and layer cross, the band wins. Band start depth, end depth,
//! direction and layer depth are drawn from the seed.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{AngleChannels, Echogram, Mask, NO_DATA};

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub rows: usize,
    pub cols: usize,
    pub range_step: f64,
    pub background_db: f64,
    pub background_jitter_db: f64,
    pub layer_db: f64,
    pub layer_thickness: usize,
    pub band_db: f64,
    pub band_thickness: usize,
    pub target_jitter_db: f64,
    pub incoherent_counts: i8,
    pub band_along_counts: i8,
    pub band_along_gradient: i8,
}

impl Default for SceneSpec {
    fn default() -> Self {
        Self {
            rows: 1000,
            cols: 1500,
            range_step: 0.5,
            background_db: -85.0,
            background_jitter_db: 3.0,
            layer_db: -65.0,
            layer_thickness: 40,
            band_db: -55.0,
            band_thickness: 60,
            target_jitter_db: 1.0,
            incoherent_counts: 10,
            band_along_counts: 40,
            band_along_gradient: 8,
        }
    }
}

/// Generated scene with its ground-truth labels.
#[derive(Debug, Clone)]
pub struct Scene {
    pub echogram: Echogram,
    pub angles: AngleChannels,
    /// Cells of the alias band.
    pub band: Mask,
    /// Layer cells not covered by the band.
    pub layer: Mask,
}

impl SceneSpec {
    pub fn generate(&self, seed: u64) -> Scene {
        let (rows, cols) = (self.rows, self.cols);
        assert!(
            rows >= self.band_thickness + 2 && rows >= self.layer_thickness + 2,
            "scene too shallow for its band and layer"
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let span = rows - self.band_thickness;
        let shallow = rng.gen_range(span / 10..=span / 4);
        let deep = rng.gen_range(span * 3 / 4..=span * 9 / 10);
        let descending = rng.gen_bool(0.5);
        let (start, end) = if descending { (shallow, deep) } else { (deep, shallow) };
        let layer_top = rng.gen_range(rows * 2 / 5..=rows / 2);
        let sign: i16 = if descending { 1 } else { -1 };

        let band_top = |c: usize| -> usize {
            let t = if cols > 1 { c as f64 / (cols - 1) as f64 } else { 0.0 };
            (start as f64 + t * (end as f64 - start as f64)).round() as usize
        };

        let mut sv = Array2::from_elem((rows, cols), NO_DATA);
        let mut along = Array2::from_elem((rows, cols), 0i8);
        let mut athwart = Array2::from_elem((rows, cols), 0i8);
        let mut band = Array2::from_elem((rows, cols), false);
        let mut layer = Array2::from_elem((rows, cols), false);
        let k = self.incoherent_counts;

        for c in 0..cols {
            let top = band_top(c);
            for r in 0..rows {
                let in_band = r >= top && r < top + self.band_thickness;
                let in_layer = r >= layer_top && r < layer_top + self.layer_thickness;
                let jitter = |rng: &mut ChaCha8Rng, j: f64| if j > 0.0 { rng.gen_range(-j..=j) } else { 0.0 };
                if in_band {
                    band[[r, c]] = true;
                    sv[[r, c]] = self.band_db + jitter(&mut rng, self.target_jitter_db);
                    let depth = (r - top) as f64 / self.band_thickness as f64;
                    let magnitude =
                        f64::from(self.band_along_counts) + depth * f64::from(self.band_along_gradient);
                    along[[r, c]] = (sign * magnitude.round() as i16).clamp(-128, 127) as i8;
                } else if in_layer {
                    layer[[r, c]] = true;
                    sv[[r, c]] = self.layer_db + jitter(&mut rng, self.target_jitter_db);
                    along[[r, c]] = rng.gen_range(-k..=k);
                } else {
                    sv[[r, c]] = self.background_db + jitter(&mut rng, self.background_jitter_db);
                    along[[r, c]] = rng.gen_range(-k..=k);
                }
                athwart[[r, c]] = rng.gen_range(-k..=k);
            }
        }

        let echogram = Echogram::from_sv(sv, self.range_step).expect("finite synthetic Sv");
        let angles = AngleChannels::from_counts(along, athwart, &echogram).expect("matching shapes");
        Scene {
            echogram,
            angles,
            band: Mask::new(band),
            layer: Mask::new(layer),
        }
    }
}
