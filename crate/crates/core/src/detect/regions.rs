//! Region growing from the angle mask and binary hole filling.

use ndarray::Array2;

use super::Connectivity;
use crate::grid::{Echogram, Mask};
use crate::{Error, Result};

fn neighbours(
    idx: usize,
    rows: usize,
    cols: usize,
    connectivity: Connectivity,
) -> impl Iterator<Item = usize> {
    let (r, c) = ((idx / cols) as isize, (idx % cols) as isize);
    connectivity.offsets().iter().filter_map(move |&(dr, dc)| {
        let (nr, nc) = (r + dr, c + dc);
        (nr >= 0 && nc >= 0 && (nr as usize) < rows && (nc as usize) < cols)
            .then(|| nr as usize * cols + nc as usize)
    })
}

/// Union of `m` with every connected region of valid cells where
/// `Sv > threshold` that shares at least one cell with `m`.
///
/// Equivalent to labeling all regions and keeping those that intersect the
/// mask; implemented as a flood fill seeded from masked candidate cells.
pub fn grow_regions(
    echogram: &Echogram,
    m: &Mask,
    threshold: f64,
    connectivity: Connectivity,
) -> Result<Mask> {
    if echogram.shape() != m.shape() {
        return Err(Error::shape("echogram", echogram.shape(), "mask", m.shape()));
    }
    let (rows, cols) = m.shape();
    let nd = echogram.no_data();
    let sv = echogram.sv().as_standard_layout();
    let sv = sv.as_slice().expect("standard layout");
    let mbits = m.bits().as_standard_layout();
    let mbits = mbits.as_slice().expect("standard layout");

    let candidate = |i: usize| sv[i] != nd && sv[i] > threshold;
    let mut out: Vec<bool> = mbits.to_vec();
    let mut visited = vec![false; rows * cols];
    let mut stack = Vec::new();
    for seed in 0..rows * cols {
        if !mbits[seed] || visited[seed] || !candidate(seed) {
            continue;
        }
        visited[seed] = true;
        stack.push(seed);
        while let Some(i) = stack.pop() {
            out[i] = true;
            for n in neighbours(i, rows, cols, connectivity) {
                if !visited[n] && candidate(n) {
                    visited[n] = true;
                    stack.push(n);
                }
            }
        }
    }
    Ok(Mask::new(
        Array2::from_shape_vec((rows, cols), out).expect("shape preserved"),
    ))
}

/// Sets every false region that cannot reach the grid border through
/// 4-connected false cells.
pub fn fill_holes(m: &Mask) -> Mask {
    let (rows, cols) = m.shape();
    let bits = m.bits().as_standard_layout();
    let bits = bits.as_slice().expect("standard layout");
    let mut reached = vec![false; rows * cols];
    let mut stack = Vec::new();
    let on_border = |i: usize| {
        let (r, c) = (i / cols, i % cols);
        r == 0 || c == 0 || r + 1 == rows || c + 1 == cols
    };
    for i in (0..rows * cols).filter(|&i| on_border(i) && !bits[i]) {
        reached[i] = true;
        stack.push(i);
    }
    while let Some(i) = stack.pop() {
        for n in neighbours(i, rows, cols, Connectivity::Four) {
            if !bits[n] && !reached[n] {
                reached[n] = true;
                stack.push(n);
            }
        }
    }
    let out = reached.into_iter().map(|r| !r).collect();
    Mask::new(Array2::from_shape_vec((rows, cols), out).expect("shape preserved"))
}
