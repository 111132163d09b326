//! Sample × ping grids.
//!
//! Every grid in the crate uses the same orientation: rows are samples in
//! order of increasing range, columns are pings in order of increasing time.

use ndarray::{Array2, Zip};

use crate::{Error, Result};

/// Default sentinel marking removed or missing samples.
pub const NO_DATA: f64 = -999.0;

/// Split-beam angle grid in raw signed counts. `None` marks an invalid cell.
pub type AngleGrid = Array2<Option<i8>>;

/// Volume backscatter (Sv, dB re 1 m⁻¹) on a sample × ping grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Echogram {
    sv: Array2<f64>,
    range_step: f64,
    ping_times: Vec<u64>,
    frequency: f64,
    no_data: f64,
}

impl Echogram {
    /// Builds an echogram, checking that every cell is finite or exactly
    /// `no_data`, that `range_step` and `frequency` are positive and that
    /// there is one non-decreasing timestamp per ping.
    pub fn new(
        sv: Array2<f64>,
        range_step: f64,
        ping_times: Vec<u64>,
        frequency: f64,
        no_data: f64,
    ) -> Result<Self> {
        if !(range_step > 0.0 && range_step.is_finite()) {
            return Err(Error::Parameter(format!(
                "range step must be positive, got {range_step}"
            )));
        }
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::Parameter(format!(
                "frequency must be positive, got {frequency}"
            )));
        }
        if !no_data.is_finite() {
            return Err(Error::Parameter("no_data sentinel must be finite".into()));
        }
        if ping_times.len() != sv.ncols() {
            return Err(Error::Length {
                what: "ping_times",
                expected: sv.ncols(),
                found: ping_times.len(),
            });
        }
        if ping_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Parameter("ping times must be non-decreasing".into()));
        }
        if let Some(((r, c), v)) = sv.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Parameter(format!(
                "Sv cell ({r}, {c}) is {v}; cells must be finite or the no_data sentinel"
            )));
        }
        Ok(Self {
            sv,
            range_step,
            ping_times,
            frequency,
            no_data,
        })
    }

    /// Convenience constructor with sequential ping times, 38 kHz and the
    /// default sentinel. Mostly useful in tests.
    pub fn from_sv(sv: Array2<f64>, range_step: f64) -> Result<Self> {
        let times = (0..sv.ncols() as u64).collect();
        Self::new(sv, range_step, times, 38.0, NO_DATA)
    }

    pub fn sv(&self) -> &Array2<f64> {
        &self.sv
    }

    pub fn range_step(&self) -> f64 {
        self.range_step
    }

    pub fn ping_times(&self) -> &[u64] {
        &self.ping_times
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn no_data(&self) -> f64 {
        self.no_data
    }

    /// (rows, cols) = (samples, pings).
    pub fn shape(&self) -> (usize, usize) {
        self.sv.dim()
    }

    /// Range of the deepest sample boundary, rows × range_step.
    pub fn max_range(&self) -> f64 {
        self.sv.nrows() as f64 * self.range_step
    }

    pub fn is_valid(&self, row: usize, col: usize) -> bool {
        self.sv[[row, col]] != self.no_data
    }

    /// Validity of every cell.
    pub fn validity(&self) -> Array2<bool> {
        let nd = self.no_data;
        self.sv.mapv(|v| v != nd)
    }

    pub fn into_sv(self) -> Array2<f64> {
        self.sv
    }
}

/// Along-ship and athwart-ship split-beam angles in raw counts.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleChannels {
    along: AngleGrid,
    athwart: AngleGrid,
}

impl AngleChannels {
    pub fn new(along: AngleGrid, athwart: AngleGrid) -> Result<Self> {
        if along.dim() != athwart.dim() {
            return Err(Error::shape("along", along.dim(), "athwart", athwart.dim()));
        }
        Ok(Self { along, athwart })
    }

    /// Builds angle channels from plain counts, marking cells invalid
    /// wherever the companion echogram holds its sentinel.
    pub fn from_counts(along: Array2<i8>, athwart: Array2<i8>, echogram: &Echogram) -> Result<Self> {
        if along.dim() != echogram.shape() {
            return Err(Error::shape("along", along.dim(), "sv", echogram.shape()));
        }
        if athwart.dim() != echogram.shape() {
            return Err(Error::shape("athwart", athwart.dim(), "sv", echogram.shape()));
        }
        let valid = echogram.validity();
        let wrap = |g: Array2<i8>| {
            Zip::from(&g)
                .and(&valid)
                .map_collect(|&v, &ok| ok.then_some(v))
        };
        Ok(Self {
            along: wrap(along),
            athwart: wrap(athwart),
        })
    }

    /// Invalidates every angle cell that is invalid in `echogram`.
    pub fn align_validity(mut self, echogram: &Echogram) -> Result<Self> {
        if self.shape() != echogram.shape() {
            return Err(Error::shape("angles", self.shape(), "sv", echogram.shape()));
        }
        let valid = echogram.validity();
        for grid in [&mut self.along, &mut self.athwart] {
            Zip::from(grid).and(&valid).for_each(|v, &ok| {
                if !ok {
                    *v = None;
                }
            });
        }
        Ok(self)
    }

    pub fn along(&self) -> &AngleGrid {
        &self.along
    }

    pub fn athwart(&self) -> &AngleGrid {
        &self.athwart
    }

    pub fn shape(&self) -> (usize, usize) {
        self.along.dim()
    }
}

/// Boolean classification grid; `true` marks aliased seabed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    bits: Array2<bool>,
}

impl Mask {
    pub fn new(bits: Array2<bool>) -> Self {
        Self { bits }
    }

    pub fn empty(shape: (usize, usize)) -> Self {
        Self::new(Array2::from_elem(shape, false))
    }

    pub fn full(shape: (usize, usize)) -> Self {
        Self::new(Array2::from_elem(shape, true))
    }

    pub fn bits(&self) -> &Array2<bool> {
        &self.bits
    }

    pub fn into_bits(self) -> Array2<bool> {
        self.bits
    }

    pub fn shape(&self) -> (usize, usize) {
        self.bits.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[[row, col]]
    }

    pub fn any(&self) -> bool {
        self.bits.iter().any(|&b| b)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Number of true cells and their fraction of the grid. An empty grid
    /// yields `(0, 0.0)`.
    pub fn stats(&self) -> (usize, f64) {
        let count = self.count();
        let total = self.bits.len();
        let fraction = if total == 0 {
            0.0
        } else {
            count as f64 / total as f64
        };
        (count, fraction)
    }

    /// True when every true cell of `self` is also true in `other`.
    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.shape() == other.shape()
            && Zip::from(&self.bits)
                .and(&other.bits)
                .all(|&a, &b| !a || b)
    }

    /// Cellwise AND with a validity grid.
    pub(crate) fn restrict_to(&mut self, valid: &Array2<bool>) {
        Zip::from(&mut self.bits).and(valid).for_each(|b, &ok| *b &= ok);
    }
}

/// Cellwise OR of two masks.
pub fn combine_masks(a: &Mask, b: &Mask) -> Result<Mask> {
    if a.shape() != b.shape() {
        return Err(Error::shape("mask a", a.shape(), "mask b", b.shape()));
    }
    Ok(Mask::new(
        Zip::from(&a.bits).and(&b.bits).map_collect(|&x, &y| x || y),
    ))
}

/// Replaces every masked Sv cell with `token`. Axes and metadata are kept.
pub fn apply_mask(echogram: &Echogram, mask: &Mask, token: f64) -> Result<Echogram> {
    if echogram.shape() != mask.shape() {
        return Err(Error::shape("echogram", echogram.shape(), "mask", mask.shape()));
    }
    if !token.is_finite() {
        return Err(Error::Parameter(format!("token must be finite, got {token}")));
    }
    let mut out = echogram.clone();
    Zip::from(&mut out.sv).and(&mask.bits).for_each(|v, &m| {
        if m {
            *v = token;
        }
    });
    Ok(out)
}

/// `(count, fraction)` of true cells.
pub fn mask_stats(mask: &Mask) -> (usize, f64) {
    mask.stats()
}

/// Per-ping range of a detected true seabed, in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct SeabedLine {
    ranges: Vec<Option<f64>>,
}

impl SeabedLine {
    pub fn new(ranges: Vec<Option<f64>>) -> Self {
        Self { ranges }
    }

    pub fn absent(pings: usize) -> Self {
        Self::new(vec![None; pings])
    }

    pub fn ranges(&self) -> &[Option<f64>] {
        &self.ranges
    }

    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    /// Checks that every present range is within `(0, max_range]`.
    pub fn validate(&self, max_range: f64) -> Result<()> {
        for (ping, r) in self.ranges.iter().enumerate() {
            if let Some(r) = *r {
                if !(r > 0.0 && r <= max_range) {
                    return Err(Error::Parameter(format!(
                        "seabed range {r} m at ping {ping} is outside (0, {max_range}]"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn mask(rows: &[&[u8]]) -> Mask {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let flat: Vec<bool> = rows.iter().flat_map(|row| row.iter().map(|&v| v != 0)).collect();
        Mask::new(Array2::from_shape_vec((r, c), flat).unwrap())
    }

    #[test]
    fn combine_identity_and_absorption() {
        let m = mask(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(combine_masks(&Mask::empty((2, 3)), &m).unwrap(), m);
        assert_eq!(combine_masks(&Mask::full((2, 3)), &m).unwrap(), Mask::full((2, 3)));
    }

    #[test]
    fn combine_by_hand() {
        let a = mask(&[&[1, 0], &[0, 0]]);
        let b = mask(&[&[0, 0], &[0, 1]]);
        assert_eq!(combine_masks(&a, &b).unwrap(), mask(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn combine_shape_mismatch_names_both_shapes() {
        let err = combine_masks(&Mask::empty((2, 3)), &Mask::empty((3, 2))).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("(2, 3)") && msg.contains("(3, 2)"), "{msg}");
    }

    #[test]
    fn apply_mask_cases() {
        let e = Echogram::from_sv(array![[-60.0, -80.0]], 1.0).unwrap();
        let out = apply_mask(&e, &Mask::empty((1, 2)), NO_DATA).unwrap();
        assert_eq!(out, e);
        let out = apply_mask(&e, &Mask::full((1, 2)), NO_DATA).unwrap();
        assert!(out.sv().iter().all(|&v| v == -999.0));
        let out = apply_mask(&e, &mask(&[&[1, 0]]), -999.0).unwrap();
        assert_eq!(out.sv(), &array![[-999.0, -80.0]]);
        assert_eq!(out.ping_times(), e.ping_times());
        assert!(apply_mask(&e, &Mask::empty((2, 1)), NO_DATA).is_err());
    }

    #[test]
    fn stats_cases() {
        assert_eq!(mask_stats(&Mask::empty((10, 10))), (0, 0.0));
        assert_eq!(mask_stats(&Mask::full((4, 5))), (20, 1.0));
        assert_eq!(mask_stats(&mask(&[&[1, 0], &[1, 0]])), (2, 0.5));
        assert_eq!(mask_stats(&Mask::empty((0, 0))), (0, 0.0));
    }

    #[test]
    fn echogram_rejects_bad_cells_and_axes() {
        assert!(Echogram::from_sv(array![[f64::NAN]], 1.0).is_err());
        assert!(Echogram::from_sv(array![[-50.0]], 0.0).is_err());
        assert!(Echogram::new(array![[-50.0, -50.0]], 1.0, vec![2, 1], 38.0, NO_DATA).is_err());
        assert!(Echogram::new(array![[-50.0]], 1.0, vec![], 38.0, NO_DATA).is_err());
    }

    #[test]
    fn angle_validity_follows_sv() {
        let e = Echogram::from_sv(array![[-50.0, NO_DATA]], 1.0).unwrap();
        let a = AngleChannels::from_counts(array![[3, 4]], array![[5, 6]], &e).unwrap();
        assert_eq!(a.along(), &array![[Some(3), None]]);
        assert_eq!(a.athwart(), &array![[Some(5), None]]);
    }

    #[test]
    fn seabed_validation() {
        assert!(SeabedLine::new(vec![Some(5.0), None]).validate(10.0).is_ok());
        assert!(SeabedLine::new(vec![Some(0.0)]).validate(10.0).is_err());
        assert!(SeabedLine::new(vec![Some(10.5)]).validate(10.0).is_err());
    }
}
