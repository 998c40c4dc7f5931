//! Seeded generators for the synthetic configurations: homogeneous Poisson
//! scatters, normal samples, the two-interval cluster model, the
//! circles/squares shape table and two elongated 2D bands.
//!
//! Every generator is a pure function of its parameters and seed.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Dataset;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// How interval generators decide how many points to draw.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// Poisson process: exponential gaps, Poisson-distributed count.
    #[default]
    Process,
    /// Exactly `round(lambda * length)` uniform points.
    FixedCount,
}

fn check_interval(lambda: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(invalid(format!(
            "intensity must be finite and positive, got {lambda}"
        )));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(invalid(format!("invalid interval [{lo}, {hi})")));
    }
    Ok(())
}

fn poisson_points<R: Rng>(rng: &mut R, lambda: f64, lo: f64, hi: f64, out: &mut Vec<f64>) {
    let gap = Exp::new(lambda).expect("positive intensity");
    let mut x = lo + gap.sample(rng);
    while x < hi {
        // a gap too small to move x is merged into the next one
        if out.last().is_none_or(|&last| x > last) {
            out.push(x);
        }
        x += gap.sample(rng);
    }
}

fn fixed_points<R: Rng>(rng: &mut R, count: usize, lo: f64, hi: f64, out: &mut Vec<f64>) {
    let start = out.len();
    out.extend((0..count).map(|_| rng.random_range(lo..hi)));
    out[start..].sort_by(f64::total_cmp);
}

/// Homogeneous Poisson scatter with intensity `lambda` on `[lo, hi)`:
/// successive gaps are i.i.d. `Exp(lambda)`, starting from `lo`. Output is
/// strictly increasing.
pub fn gen_poisson_uniform(lambda: f64, lo: f64, hi: f64, seed: u64) -> Result<Vec<f64>> {
    check_interval(lambda, lo, hi)?;
    let mut out = Vec::new();
    poisson_points(&mut rng(seed), lambda, lo, hi, &mut out);
    Ok(out)
}

/// `count` uniform points on `[lo, hi)`, sorted.
pub fn gen_uniform_fixed(count: usize, lo: f64, hi: f64, seed: u64) -> Result<Vec<f64>> {
    check_interval(1.0, lo, hi)?;
    let mut out = Vec::with_capacity(count);
    fixed_points(&mut rng(seed), count, lo, hi, &mut out);
    Ok(out)
}

pub fn gen_normal(count: usize, mu: f64, sigma: f64, seed: u64) -> Result<Vec<f64>> {
    if !(sigma.is_finite() && sigma > 0.0) || !mu.is_finite() {
        return Err(invalid(format!(
            "need finite mu and sigma > 0, got {mu}, {sigma}"
        )));
    }
    let dist = Normal::new(mu, sigma).expect("validated");
    let mut r = rng(seed);
    Ok((0..count).map(|_| dist.sample(&mut r)).collect())
}

/// Two dense intervals `[0, x1)` and `[x2, 1)` around a sparser interstice
/// `[x1, x2)`; intensities are points per unit length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoClusterModel {
    pub x1: f64,
    pub x2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl Default for TwoClusterModel {
    fn default() -> Self {
        TwoClusterModel {
            x1: 0.4,
            x2: 0.6,
            lambda1: 140.0,
            lambda2: 20.0,
            lambda3: 120.0,
        }
    }
}

impl TwoClusterModel {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.x1, self.x2, self.lambda1, self.lambda2, self.lambda3]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(invalid("model parameters must be finite"));
        }
        if !(0.0 <= self.x1 && self.x1 <= self.x2 && self.x2 <= 1.0) {
            return Err(invalid(format!(
                "need 0 <= x1 <= x2 <= 1, got x1={}, x2={}",
                self.x1, self.x2
            )));
        }
        if self.lambda1 < 0.0 || self.lambda2 < 0.0 || self.lambda3 < 0.0 {
            return Err(invalid("intensities must be non-negative"));
        }
        if self.lambda2 >= self.lambda1.min(self.lambda3) {
            return Err(invalid(format!(
                "interstice intensity {} must be below both cluster intensities",
                self.lambda2
            )));
        }
        Ok(())
    }

    pub fn gap_width(&self) -> f64 {
        self.x2 - self.x1
    }

    /// `(intensity, lo, hi)` for each of the three intervals.
    pub fn intervals(&self) -> [(f64, f64, f64); 3] {
        [
            (self.lambda1, 0.0, self.x1),
            (self.lambda2, self.x1, self.x2),
            (self.lambda3, self.x2, 1.0),
        ]
    }

    /// Expected number of points per interval.
    pub fn expected_counts(&self) -> [f64; 3] {
        self.intervals().map(|(l, lo, hi)| l * (hi - lo))
    }
}

pub fn gen_two_cluster_model(model: &TwoClusterModel, seed: u64) -> Result<Vec<f64>> {
    gen_two_cluster_model_with(model, Sampling::Process, seed)
}

/// Union of three independent scatters, one per interval, sorted.
pub fn gen_two_cluster_model_with(
    model: &TwoClusterModel,
    sampling: Sampling,
    seed: u64,
) -> Result<Vec<f64>> {
    model.validate()?;
    let mut r = rng(seed);
    let mut out = Vec::new();
    for (lambda, lo, hi) in model.intervals() {
        if lambda == 0.0 || lo >= hi {
            continue;
        }
        match sampling {
            Sampling::Process => poisson_points(&mut r, lambda, lo, hi, &mut out),
            Sampling::FixedCount => {
                let count = (lambda * (hi - lo)).round() as usize;
                fixed_points(&mut r, count, lo, hi, &mut out);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Circle,
    Square,
}

impl ShapeKind {
    pub fn label(self) -> i64 {
        match self {
            ShapeKind::Circle => 0,
            ShapeKind::Square => 1,
        }
    }
}

/// Column names of the shape table, in order.
pub const SHAPE_FEATURES: [&str; 5] = [
    "gamma",
    "perimeter",
    "area",
    "relative_perimeter",
    "circularity",
];

/// A circle of radius `gamma` or a square of side `gamma` and its five
/// features. Relative perimeter and circularity are the closed-form
/// constants for the kind, so they are identical across all rows of a kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeRecord {
    pub kind: ShapeKind,
    pub gamma: f64,
    pub perimeter: f64,
    pub area: f64,
    pub relative_perimeter: f64,
    pub circularity: f64,
}

impl ShapeRecord {
    pub fn new(kind: ShapeKind, gamma: f64) -> Self {
        match kind {
            ShapeKind::Circle => ShapeRecord {
                kind,
                gamma,
                perimeter: 2.0 * PI * gamma,
                area: PI * gamma * gamma,
                relative_perimeter: 2.0 * PI,
                circularity: 1.0,
            },
            ShapeKind::Square => ShapeRecord {
                kind,
                gamma,
                perimeter: 4.0 * gamma,
                area: gamma * gamma,
                relative_perimeter: 4.0,
                circularity: PI / 4.0,
            },
        }
    }

    pub fn features(&self) -> [f64; 5] {
        [
            self.gamma,
            self.perimeter,
            self.area,
            self.relative_perimeter,
            self.circularity,
        ]
    }
}

/// `count / 2` circles and `count / 2` squares with `gamma ~ U[1, 2]`, rows
/// shuffled. Labels: 0 circle, 1 square.
pub fn gen_shapes(count: usize, seed: u64) -> Result<Dataset> {
    if count < 2 || !count.is_multiple_of(2) {
        return Err(invalid(format!(
            "shape count must be even and >= 2, got {count}"
        )));
    }
    gen_shapes_split(count / 2, count / 2, seed)
}

pub fn gen_shapes_split(circles: usize, squares: usize, seed: u64) -> Result<Dataset> {
    let mut r = rng(seed);
    let mut kinds: Vec<ShapeKind> = std::iter::repeat_n(ShapeKind::Circle, circles)
        .chain(std::iter::repeat_n(ShapeKind::Square, squares))
        .collect();
    kinds.shuffle(&mut r);
    let records: Vec<ShapeRecord> = kinds
        .into_iter()
        .map(|k| ShapeRecord::new(k, r.random_range(1.0..=2.0)))
        .collect();
    let labels = records.iter().map(|s| s.kind.label()).collect();
    let values = records.iter().flat_map(|s| s.features()).collect();
    Dataset::from_flat(
        SHAPE_FEATURES.iter().map(|s| s.to_string()).collect(),
        values,
        records.len(),
        Some(labels),
    )
}

/// Ground truth of [`gen_elongated_2d`]: the empty band along `f1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElongatedTruth {
    pub gap_lo: f64,
    pub gap_hi: f64,
    pub left_band: (f64, f64),
    pub right_band: (f64, f64),
}

/// Two vertical uniform bands in the unit square separated along `f1` by an
/// empty band of width `gap` centred at 0.5. The left band gets `count / 2`
/// points, the right band the rest. Labels: 0 left, 1 right.
pub fn gen_elongated_2d(count: usize, gap: f64, seed: u64) -> Result<(Dataset, ElongatedTruth)> {
    if count < 2 {
        return Err(invalid(format!("need at least 2 points, got {count}")));
    }
    if !(gap.is_finite() && gap > 0.0 && gap < 1.0) {
        return Err(invalid(format!("gap must lie in (0, 1), got {gap}")));
    }
    let truth = ElongatedTruth {
        gap_lo: 0.5 - gap / 2.0,
        gap_hi: 0.5 + gap / 2.0,
        left_band: (0.0, 0.5 - gap / 2.0),
        right_band: (0.5 + gap / 2.0, 1.0),
    };
    let mut r = rng(seed);
    let left = count / 2;
    let mut values = Vec::with_capacity(count * 2);
    let mut labels = Vec::with_capacity(count);
    for i in 0..count {
        let (band, label) = if i < left {
            (truth.left_band, 0)
        } else {
            (truth.right_band, 1)
        };
        values.push(r.random_range(band.0..=band.1));
        values.push(r.random_range(0.0..=1.0));
        labels.push(label);
    }
    let ds = Dataset::from_flat(vec!["f1".into(), "f2".into()], values, count, Some(labels))?;
    Ok((ds, truth))
}

/// An isotropic Gaussian blob in 2D: a single granular cluster.
pub fn gen_gaussian_blob_2d(
    count: usize,
    center: (f64, f64),
    sd: f64,
    seed: u64,
) -> Result<Dataset> {
    if !(sd.is_finite() && sd > 0.0) {
        return Err(invalid(format!("sd must be finite and positive, got {sd}")));
    }
    let dist = Normal::new(0.0, sd).expect("validated");
    let mut r = rng(seed);
    let values = (0..count)
        .flat_map(|_| {
            [
                center.0 + dist.sample(&mut r),
                center.1 + dist.sample(&mut r),
            ]
        })
        .collect();
    Dataset::from_flat(vec!["f1".into(), "f2".into()], values, count, None)
}
