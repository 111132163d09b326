//! Windowed mean-square of angle counts using summed-area tables.

use ndarray::Array2;
use rayon::prelude::*;

use crate::grid::AngleGrid;
use crate::{Error, Result};

/// Half-open index range `[start, end)` covered by a window of side `w`
/// anchored at `i` along an axis of length `len`.
///
/// The unclipped window spans `[i - w/2, i + ceil(w/2) - 1]`, so even sides
/// extend one cell further before the anchor than after it.
pub fn window_bounds(i: usize, w: usize, len: usize) -> (usize, usize) {
    let before = w / 2;
    let after = w - before;
    (i.saturating_sub(before), (i + after).min(len))
}

/// Summed-area tables of squared counts and valid-cell counts, one row and
/// one column larger than the source grid.
struct Integral {
    cols: usize,
    sq: Vec<i64>,
    n: Vec<i64>,
}

impl Integral {
    fn new(grid: &AngleGrid) -> Self {
        let (rows, cols) = grid.dim();
        let stride = cols + 1;
        let mut sq = vec![0i64; (rows + 1) * stride];
        let mut n = vec![0i64; (rows + 1) * stride];
        for r in 0..rows {
            let mut row_sq = 0i64;
            let mut row_n = 0i64;
            for c in 0..cols {
                if let Some(v) = grid[[r, c]] {
                    row_sq += i64::from(v) * i64::from(v);
                    row_n += 1;
                }
                let at = (r + 1) * stride + c + 1;
                sq[at] = sq[at - stride] + row_sq;
                n[at] = n[at - stride] + row_n;
            }
        }
        Self { cols, sq, n }
    }

    /// Sums over rows `[r0, r1)` and columns `[c0, c1)`.
    fn rect(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> (i64, i64) {
        let s = self.cols + 1;
        let f = |t: &[i64]| t[r1 * s + c1] - t[r0 * s + c1] - t[r1 * s + c0] + t[r0 * s + c0];
        (f(&self.sq), f(&self.n))
    }
}

/// Mean of squared counts over the `w × w` window around every cell,
/// clipped to the grid and normalised by the number of valid cells inside
/// it. Cells whose window holds no valid sample are `None`.
pub fn mean_square_window(grid: &AngleGrid, w: usize) -> Result<Array2<Option<f64>>> {
    if w < 1 {
        return Err(Error::Parameter(format!("window side must be >= 1, got {w}")));
    }
    let (rows, cols) = grid.dim();
    let table = Integral::new(grid);
    let mut out = vec![None; rows * cols];
    if cols > 0 {
        out.par_chunks_mut(cols).enumerate().for_each(|(r, line)| {
            let (r0, r1) = window_bounds(r, w, rows);
            for (c, cell) in line.iter_mut().enumerate() {
                let (c0, c1) = window_bounds(c, w, cols);
                let (sum, n) = table.rect(r0, r1, c0, c1);
                if n > 0 {
                    *cell = Some(sum as f64 / n as f64);
                }
            }
        });
    }
    Ok(Array2::from_shape_vec((rows, cols), out).expect("shape preserved"))
}
