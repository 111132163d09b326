//! Reference implementations used to check the fast paths. They share no
//! code with the library beyond its data types.
#![allow(dead_code)]

use falsebottom::detect::Connectivity;
use falsebottom::AngleGrid;
use ndarray::Array2;
use rand::Rng;

/// Mean-square by direct summation over the clipped window.
pub fn naive_mean_square(grid: &AngleGrid, w: usize) -> Array2<Option<f64>> {
    let (rows, cols) = grid.dim();
    let (rows_i, cols_i) = (rows as i64, cols as i64);
    let before = (w / 2) as i64;
    let after = w.div_ceil(2) as i64 - 1;
    Array2::from_shape_fn((rows, cols), |(i, j)| {
        let (i, j) = (i as i64, j as i64);
        let mut sum = 0.0;
        let mut n = 0u32;
        for r in (i - before)..=(i + after) {
            for c in (j - before)..=(j + after) {
                if r < 0 || c < 0 || r >= rows_i || c >= cols_i {
                    continue;
                }
                if let Some(v) = grid[[r as usize, c as usize]] {
                    sum += f64::from(v) * f64::from(v);
                    n += 1;
                }
            }
        }
        (n > 0).then(|| sum / f64::from(n))
    })
}

fn neighbours(conn: Connectivity) -> Vec<(i64, i64)> {
    let mut out = vec![(-1, 0), (1, 0), (0, -1), (0, 1)];
    if conn == Connectivity::Eight {
        out.extend([(-1, -1), (-1, 1), (1, -1), (1, 1)]);
    }
    out
}

fn flood(cand: &Array2<bool>, labels: &mut Array2<usize>, r: i64, c: i64, id: usize, offs: &[(i64, i64)]) {
    let (rows, cols) = cand.dim();
    if r < 0 || c < 0 || r >= rows as i64 || c >= cols as i64 {
        return;
    }
    let (ru, cu) = (r as usize, c as usize);
    if !cand[[ru, cu]] || labels[[ru, cu]] != 0 {
        return;
    }
    labels[[ru, cu]] = id;
    for &(dr, dc) in offs {
        flood(cand, labels, r + dr, c + dc, id, offs);
    }
}

/// Labels connected components of `cand` by recursive flood fill. Label 0
/// marks cells outside `cand`.
pub fn label_components(cand: &Array2<bool>, conn: Connectivity) -> Array2<usize> {
    let offs = neighbours(conn);
    let mut labels = Array2::zeros(cand.dim());
    let mut next = 1;
    for ((r, c), &v) in cand.indexed_iter() {
        if v && labels[[r, c]] == 0 {
            flood(cand, &mut labels, r as i64, c as i64, next, &offs);
            next += 1;
        }
    }
    labels
}

/// Labels all components above threshold, keeps those touching `m`, ORs `m`.
pub fn grow_oracle(sv: &Array2<f64>, no_data: f64, m: &Array2<bool>, t: f64, conn: Connectivity) -> Array2<bool> {
    let cand = sv.mapv(|v| v != no_data && v > t);
    let labels = label_components(&cand, conn);
    let mut keep = std::collections::BTreeSet::new();
    for ((r, c), &l) in labels.indexed_iter() {
        if l != 0 && m[[r, c]] {
            keep.insert(l);
        }
    }
    Array2::from_shape_fn(sv.dim(), |(r, c)| m[[r, c]] || keep.contains(&labels[[r, c]]))
}

/// Hole filling by morphological reconstruction: dilate the border part of
/// the complement inside the complement until stable, then invert.
pub fn fill_oracle(m: &Array2<bool>) -> Array2<bool> {
    let (rows, cols) = m.dim();
    let comp = m.mapv(|b| !b);
    let mut marker = Array2::from_shape_fn((rows, cols), |(r, c)| {
        comp[[r, c]] && (r == 0 || c == 0 || r + 1 == rows || c + 1 == cols)
    });
    loop {
        let next = Array2::from_shape_fn((rows, cols), |(r, c)| {
            if !comp[[r, c]] {
                return false;
            }
            marker[[r, c]]
                || (r > 0 && marker[[r - 1, c]])
                || (r + 1 < rows && marker[[r + 1, c]])
                || (c > 0 && marker[[r, c - 1]])
                || (c + 1 < cols && marker[[r, c + 1]])
        });
        if next == marker {
            break;
        }
        marker = next;
    }
    marker.mapv(|b| !b)
}

/// Random angle grid with roughly `invalid` of its cells missing.
pub fn random_angles(rng: &mut impl Rng, rows: usize, cols: usize, invalid: f64) -> AngleGrid {
    Array2::from_shape_fn((rows, cols), |_| {
        if rng.gen_bool(invalid) {
            None
        } else {
            Some(rng.gen_range(i8::MIN..=i8::MAX))
        }
    })
}

pub fn random_mask(rng: &mut impl Rng, rows: usize, cols: usize, density: f64) -> Array2<bool> {
    Array2::from_shape_fn((rows, cols), |_| rng.gen_bool(density))
}

/// Relative difference with an absolute floor of 1 to guard zero.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
