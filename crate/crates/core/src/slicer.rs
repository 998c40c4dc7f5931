//! Standardization, noise injection, anchor grids and hypercylinder slices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dataset, Slice1D, SliceSpec};

/// Per-column mean and sample standard deviation (`N - 1` denominator).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl ColumnStats {
    pub fn of(ds: &Dataset) -> Result<Self> {
        let n = ds.n_rows();
        if n < 2 {
            return Err(Error::TooFewRows {
                needed: 2,
                found: n,
            });
        }
        let m = ds.n_cols();
        let mut means = vec![0.0; m];
        for row in ds.rows() {
            for (acc, v) in means.iter_mut().zip(row) {
                *acc += v;
            }
        }
        means.iter_mut().for_each(|s| *s /= n as f64);
        let mut ss = vec![0.0; m];
        for row in ds.rows() {
            for ((acc, v), mu) in ss.iter_mut().zip(row).zip(&means) {
                *acc += (v - mu) * (v - mu);
            }
        }
        let sds = ss
            .into_iter()
            .map(|s| (s / (n - 1) as f64).sqrt())
            .collect();
        Ok(ColumnStats { means, sds })
    }

    /// Maps a standardized value of column `col` back to the original scale.
    pub fn restore(&self, col: usize, z: f64) -> f64 {
        z * self.sds[col] + self.means[col]
    }
}

/// Rescales every column to mean 0 and sample standard deviation 1.
///
/// An empty dataset is returned unchanged with unit statistics.
pub fn standardize(ds: &Dataset) -> Result<(Dataset, ColumnStats)> {
    if ds.n_rows() == 0 {
        let m = ds.n_cols();
        let stats = ColumnStats {
            means: vec![0.0; m],
            sds: vec![1.0; m],
        };
        return Ok((ds.clone(), stats));
    }
    let stats = ColumnStats::of(ds)?;
    for (c, (&sd, &mu)) in stats.sds.iter().zip(&stats.means).enumerate() {
        // a column whose deviations vanish relative to its magnitude is
        // constant up to rounding
        if sd.is_nan() || sd <= mu.abs() * 1e-14 {
            return Err(Error::ConstantColumn(ds.names()[c].clone()));
        }
    }
    let m = ds.n_cols();
    let values = ds
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| (v - stats.means[i % m]) / stats.sds[i % m])
        .collect();
    Ok((ds.with_values(values), stats))
}

/// Adds i.i.d. `Uniform[-amplitude, amplitude]` noise to every value.
///
/// The draw for cell `(row, col)` depends only on `(seed, row, col)`: each
/// row reads its own ChaCha stream.
pub fn add_uniform_noise(ds: &Dataset, amplitude: f64, seed: u64) -> Result<Dataset> {
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise amplitude must be finite and non-negative, got {amplitude}"
        )));
    }
    if amplitude == 0.0 {
        return Ok(ds.clone());
    }
    let mut values = Vec::with_capacity(ds.values().len());
    for (r, row) in ds.rows().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        values.extend(
            row.iter()
                .map(|v| v + rng.random_range(-amplitude..=amplitude)),
        );
    }
    Ok(ds.with_values(values))
}

/// All anchors for slicing along `free_index` in an `m`-feature space: the
/// Cartesian power of `values` over the other `m - 1` coordinates, in
/// lexicographic order. Repeated entries in `values` are kept, so the result
/// always has `values.len().pow(m - 1)` anchors.
pub fn grid_anchors(m: usize, values: &[f64], free_index: usize) -> Result<Vec<Vec<f64>>> {
    if m == 0 {
        return Err(Error::TooFewFeatures {
            needed: 1,
            found: 0,
        });
    }
    if free_index >= m {
        return Err(Error::FreeIndexOutOfRange {
            index: free_index,
            dims: m,
        });
    }
    if values.is_empty() {
        return Err(Error::InvalidParameter(
            "grid values must not be empty".into(),
        ));
    }
    let dims = m - 1;
    let total = values.len().pow(dims as u32);
    let mut anchors = Vec::with_capacity(total);
    let mut digits = vec![0usize; dims];
    for _ in 0..total {
        anchors.push(digits.iter().map(|&d| values[d]).collect());
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < values.len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(anchors)
}

/// Rows within `spec.radius` of the line through `spec.anchor` parallel to
/// the free axis (boundary included), sorted by free coordinate then row.
pub fn slice(ds: &Dataset, spec: &SliceSpec) -> Result<Slice1D> {
    let m = ds.n_cols();
    if spec.dims() != m {
        return Err(Error::DimensionMismatch {
            expected: m - 1,
            found: spec.anchor.len(),
        });
    }
    if spec.free_index >= m {
        return Err(Error::FreeIndexOutOfRange {
            index: spec.free_index,
            dims: m,
        });
    }
    let i = spec.free_index;
    let r2 = spec.radius * spec.radius;
    let mut hits: Vec<(f64, usize)> = ds
        .rows()
        .enumerate()
        .filter(|(_, row)| {
            let fixed = row[..i].iter().chain(&row[i + 1..]);
            let d2: f64 = fixed
                .zip(&spec.anchor)
                .map(|(v, a)| (v - a) * (v - a))
                .sum();
            d2 <= r2
        })
        .map(|(r, row)| (row[i], r))
        .collect();
    hits.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (coords, rows) = hits.into_iter().unzip();
    Ok(Slice1D::from_parts_unchecked(coords, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(names: &[&str], rows: Vec<Vec<f64>>) -> Dataset {
        Dataset::new(names.iter().map(|s| s.to_string()).collect(), rows, None).unwrap()
    }

    #[test]
    fn standardize_small_column() {
        let d = ds(&["a"], vec![vec![1.0], vec![2.0], vec![3.0]]);
        let (z, stats) = standardize(&d).unwrap();
        assert_eq!(z.column(0), vec![-1.0, 0.0, 1.0]);
        assert_eq!(stats.means, vec![2.0]);
        assert_eq!(stats.sds, vec![1.0]);
        assert_eq!(stats.restore(0, 1.0), 3.0);
    }

    #[test]
    fn constant_column_is_named() {
        let d = ds(
            &["a", "flat"],
            vec![vec![1.0, 2.0], vec![2.0, 2.0], vec![3.0, 2.0]],
        );
        match standardize(&d) {
            Err(Error::ConstantColumn(name)) => assert_eq!(name, "flat"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            standardize(&ds(&["a"], vec![vec![1.0]])),
            Err(Error::TooFewRows { .. })
        ));
        let empty = ds(&["a", "b"], vec![]);
        assert_eq!(standardize(&empty).unwrap().0, empty);
    }

    #[test]
    fn zero_noise_is_identity() {
        let d = ds(&["a", "b"], vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(add_uniform_noise(&d, 0.0, 9).unwrap(), d);
        assert!(add_uniform_noise(&d, -0.1, 9).is_err());
    }

    #[test]
    fn noise_is_bounded_and_reproducible() {
        let rows = (0..200).map(|i| vec![i as f64, -(i as f64)]).collect();
        let d = ds(&["a", "b"], rows);
        let a = add_uniform_noise(&d, 0.2, 42).unwrap();
        let b = add_uniform_noise(&d, 0.2, 42).unwrap();
        assert_eq!(a, b);
        for (x, y) in d.values().iter().zip(a.values()) {
            assert!((x - y).abs() <= 0.2);
        }
        let c = add_uniform_noise(&d, 0.2, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn noise_depends_on_cell_not_table() {
        let d = ds(&["a", "b"], (0..10).map(|i| vec![i as f64, 0.0]).collect());
        let head = ds(&["a", "b"], (0..4).map(|i| vec![i as f64, 0.0]).collect());
        let full = add_uniform_noise(&d, 0.5, 1).unwrap();
        let part = add_uniform_noise(&head, 0.5, 1).unwrap();
        assert_eq!(&full.values()[..8], part.values());
    }

    #[test]
    fn anchor_grid_sizes() {
        let five = [-2.0, -1.0, 0.0, 1.0, 2.0];
        for free in 0..5 {
            assert_eq!(grid_anchors(5, &five, free).unwrap().len(), 625);
        }
        assert_eq!(
            grid_anchors(2, &[0.0, 1.0], 0).unwrap(),
            vec![vec![0.0], vec![1.0]]
        );
        assert_eq!(
            grid_anchors(1, &[0.0, 1.0], 0).unwrap(),
            vec![Vec::<f64>::new()]
        );
        let lex = grid_anchors(3, &[0.0, 1.0], 2).unwrap();
        assert_eq!(
            lex,
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0]
            ]
        );
        assert!(matches!(
            grid_anchors(3, &five, 3),
            Err(Error::FreeIndexOutOfRange { index: 3, dims: 3 })
        ));
        assert!(grid_anchors(3, &[], 0).is_err());
    }

    #[test]
    fn slice_membership() {
        let d = ds(
            &["x", "y"],
            vec![vec![0.3, 0.55], vec![0.3, 0.7], vec![0.1, 0.45]],
        );
        let spec = SliceSpec::new(0, vec![0.5], 0.1).unwrap();
        let s = slice(&d, &spec).unwrap();
        assert_eq!(s.coords(), &[0.1, 0.3]);
        assert_eq!(s.source_rows(), &[2, 0]);
    }

    #[test]
    fn boundary_is_inclusive() {
        let d = ds(&["x", "y"], vec![vec![0.0, 1.5], vec![0.0, 2.5]]);
        let spec = SliceSpec::new(0, vec![2.0], 0.5).unwrap();
        assert_eq!(slice(&d, &spec).unwrap().len(), 2);
    }

    #[test]
    fn wide_slice_takes_everything() {
        let d = ds(
            &["x", "y"],
            vec![vec![3.0, 0.0], vec![1.0, 9.0], vec![2.0, -4.0]],
        );
        let spec = SliceSpec::new(0, vec![0.0], 100.0).unwrap();
        let s = slice(&d, &spec).unwrap();
        assert_eq!(s.coords(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn slice_checks_dimensions() {
        let d = ds(&["x", "y", "z"], vec![]);
        let spec = SliceSpec::new(0, vec![0.0], 1.0).unwrap();
        assert!(slice(&d, &spec).is_err());
        let empty = slice(&d, &SliceSpec::new(2, vec![0.0, 0.0], 1.0).unwrap()).unwrap();
        assert!(empty.is_empty());
    }
}
