use ndarray::{Axis, Zip};

use super::regions::{fill_holes, grow_regions};
use super::window::mean_square_window;
use super::DetectionConfig;
use crate::grid::{combine_masks, AngleChannels, Echogram, Mask, SeabedLine};
use crate::{Error, Result};

/// Output of [`detect_aliased_seabed`].
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    /// Final classification.
    pub mask: Mask,
    /// Sv threshold applied during region growing, dB. `None` when the
    /// angle mask was empty and growing was skipped.
    pub t_used: Option<f64>,
    /// Angle mask restricted to valid cells and to pings without a detected
    /// true seabed. Always a subset of `mask`.
    pub m_angle: Mask,
}

/// Union of the thresholded along-ship and athwart-ship mean-square grids.
/// Both comparisons are strict; windows without valid samples never pass.
pub fn angle_mask(angles: &AngleChannels, cfg: &DetectionConfig) -> Result<Mask> {
    let along = mean_square_window(angles.along(), cfg.window_along)?;
    let athwart = mean_square_window(angles.athwart(), cfg.window_athwart)?;
    let above = |t: f64| move |v: &Option<f64>| v.is_some_and(|v| v > t);
    let m1 = Mask::new(along.map(above(cfg.t_theta)));
    let m2 = Mask::new(athwart.map(above(cfg.t_phi)));
    combine_masks(&m1, &m2)
}

/// Median of the valid Sv cells under `m` (mean of the two middle values
/// for an even count), floored at `t_min` when given. `None` when the mask
/// selects no valid cell.
pub fn dynamic_threshold(echogram: &Echogram, m: &Mask, t_min: Option<f64>) -> Result<Option<f64>> {
    if echogram.shape() != m.shape() {
        return Err(Error::shape("echogram", echogram.shape(), "mask", m.shape()));
    }
    let nd = echogram.no_data();
    let mut selected: Vec<f64> = Zip::from(echogram.sv())
        .and(m.bits())
        .fold(Vec::new(), |mut acc, &v, &b| {
            if b && v != nd {
                acc.push(v);
            }
            acc
        });
    if selected.is_empty() {
        return Ok(None);
    }
    let n = selected.len();
    let mid = n / 2;
    let (lower, upper, _) = selected.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    let median = if n % 2 == 1 {
        upper
    } else {
        let below = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (below + upper) / 2.0
    };
    Ok(Some(match t_min {
        Some(floor) => median.max(floor),
        None => median,
    }))
}

/// Clears every ping column that has a detected true seabed.
pub fn exclude_below_seabed(m: &Mask, seabed: &SeabedLine, range_step: f64) -> Result<Mask> {
    let (rows, cols) = m.shape();
    if seabed.len() != cols {
        return Err(Error::Length {
            what: "seabed line",
            expected: cols,
            found: seabed.len(),
        });
    }
    seabed.validate(rows as f64 * range_step)?;
    let mut bits = m.bits().clone();
    for (mut column, range) in bits.axis_iter_mut(Axis(1)).zip(seabed.ranges()) {
        if range.is_some() {
            column.fill(false);
        }
    }
    Ok(Mask::new(bits))
}

/// Runs the full detector on one echogram.
pub fn detect_aliased_seabed(
    echogram: &Echogram,
    angles: &AngleChannels,
    seabed: Option<&SeabedLine>,
    cfg: &DetectionConfig,
) -> Result<DetectionResult> {
    cfg.validate()?;
    if angles.shape() != echogram.shape() {
        return Err(Error::shape("angles", angles.shape(), "echogram", echogram.shape()));
    }
    if let Some(line) = seabed {
        if line.len() != echogram.shape().1 {
            return Err(Error::Length {
                what: "seabed line",
                expected: echogram.shape().1,
                found: line.len(),
            });
        }
    }
    let valid = echogram.validity();

    let mut m = angle_mask(angles, cfg)?;
    m.restrict_to(&valid);
    if !m.any() {
        return Ok(DetectionResult {
            mask: m.clone(),
            t_used: None,
            m_angle: m,
        });
    }

    let t = dynamic_threshold(echogram, &m, cfg.t_min)?
        .expect("non-empty mask restricted to valid cells selects at least one value");
    let mut mask = grow_regions(echogram, &m, t, cfg.connectivity)?;
    if cfg.fill_holes {
        mask = fill_holes(&mask);
        mask.restrict_to(&valid);
    }
    if let Some(line) = seabed {
        mask = exclude_below_seabed(&mask, line, echogram.range_step())?;
        m = exclude_below_seabed(&m, line, echogram.range_step())?;
    }
    Ok(DetectionResult {
        mask,
        t_used: Some(t),
        m_angle: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::NO_DATA;
    use ndarray::{array, Array2};

    fn constant_angles(shape: (usize, usize), along: i8, athwart: i8) -> AngleChannels {
        AngleChannels::new(
            Array2::from_elem(shape, Some(along)),
            Array2::from_elem(shape, Some(athwart)),
        )
        .unwrap()
    }

    #[test]
    fn zero_angles_give_empty_mask() {
        let m = angle_mask(&constant_angles((30, 30), 0, 0), &DetectionConfig::default()).unwrap();
        assert!(!m.any());
    }

    #[test]
    fn strong_along_channel_marks_everything() {
        let m = angle_mask(&constant_angles((30, 40), 127, 0), &DetectionConfig::default()).unwrap();
        assert_eq!(m, Mask::full((30, 40)));
    }

    #[test]
    fn athwart_channel_alone_can_trigger() {
        // 26² = 676 < 702 but 17² = 289 > 282.
        let cfg = DetectionConfig::default();
        let m = angle_mask(&constant_angles((20, 20), 26, 0), &cfg).unwrap();
        assert!(!m.any());
        let m = angle_mask(&constant_angles((20, 20), 26, 17), &cfg).unwrap();
        assert_eq!(m, Mask::full((20, 20)));
        let m = angle_mask(&constant_angles((20, 20), -26, -17), &cfg).unwrap();
        assert_eq!(m, Mask::full((20, 20)));
    }

    #[test]
    fn threshold_cases() {
        let e = Echogram::from_sv(array![[-60.0, -75.0, -50.0, -80.0]], 1.0).unwrap();
        assert_eq!(dynamic_threshold(&e, &Mask::empty((1, 4)), Some(-70.0)).unwrap(), None);
        let sel = Mask::new(array![[true, true, true, false]]);
        assert_eq!(dynamic_threshold(&e, &sel, None).unwrap(), Some(-60.0));
        let e2 = Echogram::from_sv(array![[-80.0, -90.0]], 1.0).unwrap();
        assert_eq!(dynamic_threshold(&e2, &Mask::full((1, 2)), Some(-70.0)).unwrap(), Some(-70.0));
        assert_eq!(dynamic_threshold(&e2, &Mask::full((1, 2)), None).unwrap(), Some(-85.0));
    }

    #[test]
    fn threshold_ignores_no_data() {
        let e = Echogram::from_sv(array![[NO_DATA, -75.0]], 1.0).unwrap();
        assert_eq!(dynamic_threshold(&e, &Mask::full((1, 2)), None).unwrap(), Some(-75.0));
    }

    #[test]
    fn seabed_exclusion() {
        let m = Mask::full((2, 2));
        let out = exclude_below_seabed(&m, &SeabedLine::absent(2), 1.0).unwrap();
        assert_eq!(out, m);
        let out = exclude_below_seabed(&m, &SeabedLine::new(vec![Some(1.0), Some(2.0)]), 1.0).unwrap();
        assert!(!out.any());
        let out = exclude_below_seabed(&m, &SeabedLine::new(vec![Some(500.0), None]), 300.0).unwrap();
        assert_eq!(out.bits(), &array![[false, true], [false, true]]);
        assert!(exclude_below_seabed(&m, &SeabedLine::absent(3), 1.0).is_err());
    }

    #[test]
    fn pipeline_short_circuits_without_angle_signal() {
        let e = Echogram::from_sv(Array2::from_elem((40, 40), -40.0), 1.0).unwrap();
        let r = detect_aliased_seabed(&e, &constant_angles((40, 40), 0, 0), None, &Default::default())
            .unwrap();
        assert!(!r.mask.any());
        assert_eq!(r.t_used, None);
    }

    #[test]
    fn pipeline_clamps_threshold() {
        let e = Echogram::from_sv(Array2::from_elem((40, 40), -85.0), 1.0).unwrap();
        let r = detect_aliased_seabed(&e, &constant_angles((40, 40), 127, 0), None, &Default::default())
            .unwrap();
        assert_eq!(r.t_used, Some(-70.0));
        assert_eq!(r.mask, Mask::full((40, 40)));
    }

    #[test]
    fn pipeline_rejects_mismatched_shapes() {
        let e = Echogram::from_sv(Array2::from_elem((4, 5), -85.0), 1.0).unwrap();
        let a = constant_angles((5, 4), 0, 0);
        assert!(detect_aliased_seabed(&e, &a, None, &Default::default()).is_err());
    }
}
