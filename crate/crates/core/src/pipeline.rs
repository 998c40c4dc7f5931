//! End-to-end procedures: filter-style feature selection over grids of
//! slices, slice population statistics, and interstice mapping.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkage::single_linkage_slice;
use crate::model::{Dataset, RelevanceReport, SliceSpec};
use crate::relevance::{find_interstices, relevance_with, OccurrenceRule};
use crate::slicer::{add_uniform_noise, grid_anchors, slice, standardize};

/// Default anchor values, exactly as listed for the shapes experiment.
/// The repeated `-2` is kept, so anchors that use it are scanned more than once.
pub const DEFAULT_GRID: [f64; 5] = [-2.0, -2.0, 0.0, 1.0, 2.0];

/// Number of bins in [`slice_population_histogram`].
pub const HISTOGRAM_BINS: usize = 20;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be finite and positive, got {v}"
        )))
    }
}

fn check_grid(values: &[f64]) -> Result<()> {
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "grid values must be non-empty and finite".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct FeatureSelectionConfig {
    pub grid_values: Vec<f64>,
    pub radius: f64,
    pub alpha: f64,
    /// Slices need strictly more points than this to be analysed.
    pub min_slice_points: usize,
    pub noise_amplitude: f64,
    pub seed: u64,
    pub occurrence: OccurrenceRule,
}

impl Default for FeatureSelectionConfig {
    fn default() -> Self {
        FeatureSelectionConfig {
            grid_values: DEFAULT_GRID.to_vec(),
            radius: 2.0,
            alpha: 4.0,
            min_slice_points: 150,
            noise_amplitude: 0.2,
            seed: 0,
            occurrence: OccurrenceRule::default(),
        }
    }
}

impl FeatureSelectionConfig {
    pub fn validate(&self) -> Result<()> {
        check_grid(&self.grid_values)?;
        check_positive("radius", self.radius)?;
        check_positive("alpha", self.alpha)?;
        if !(self.noise_amplitude.is_finite() && self.noise_amplitude >= 0.0) {
            return Err(Error::InvalidParameter(
                "noise amplitude must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureReportRow {
    pub feature: String,
    /// Retained slices on which clusters occurred.
    pub occurrences: usize,
    /// Mean relevance over the occurred slices only.
    pub mean_relevance: f64,
    pub product: f64,
    /// Slices with more than `min_slice_points` points.
    pub retained_slices: usize,
}

/// Outcome of slicing along one free axis at one anchor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceOutcome {
    pub anchor: Vec<f64>,
    pub population: usize,
    /// `None` when the slice had too few points to be analysed.
    pub report: Option<RelevanceReport>,
}

impl SliceOutcome {
    pub fn occurred(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.occurred)
    }
}

/// Slices `ds` along `free_index` at each anchor and scores the populated
/// slices. Output order follows `anchors`.
pub fn scan_slices(
    ds: &Dataset,
    free_index: usize,
    anchors: &[Vec<f64>],
    radius: f64,
    alpha: f64,
    min_slice_points: usize,
    rule: OccurrenceRule,
) -> Result<Vec<SliceOutcome>> {
    check_positive("alpha", alpha)?;
    anchors
        .par_iter()
        .map(|anchor| {
            let spec = SliceSpec::new(free_index, anchor.clone(), radius)?
                .with_min_points(min_slice_points);
            let s = slice(ds, &spec)?;
            let report = if s.len() > min_slice_points {
                Some(relevance_with(&single_linkage_slice(&s), alpha, rule)?)
            } else {
                None
            };
            Ok(SliceOutcome {
                anchor: anchor.clone(),
                population: s.len(),
                report,
            })
        })
        .collect()
}

/// Standardizes every column, then adds the configured uniform noise.
pub fn prepare_features(ds: &Dataset, cfg: &FeatureSelectionConfig) -> Result<Dataset> {
    cfg.validate()?;
    let (z, _) = standardize(ds)?;
    add_uniform_noise(&z, cfg.noise_amplitude, cfg.seed)
}

/// Standardizes and perturbs `ds`, then ranks features by
/// `occurrences x mean relevance`.
pub fn select_features(
    ds: &Dataset,
    cfg: &FeatureSelectionConfig,
) -> Result<Vec<FeatureReportRow>> {
    check_features(ds)?;
    select_features_prepared(&prepare_features(ds, cfg)?, cfg)
}

fn check_features(ds: &Dataset) -> Result<()> {
    if ds.n_cols() < 2 {
        return Err(Error::TooFewFeatures {
            needed: 2,
            found: ds.n_cols(),
        });
    }
    Ok(())
}

/// Feature ranking on data that is already standardized and perturbed.
pub fn select_features_prepared(
    ds: &Dataset,
    cfg: &FeatureSelectionConfig,
) -> Result<Vec<FeatureReportRow>> {
    check_features(ds)?;
    cfg.validate()?;
    let m = ds.n_cols();
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let anchors = grid_anchors(m, &cfg.grid_values, i)?;
        let outcomes = scan_slices(
            ds,
            i,
            &anchors,
            cfg.radius,
            cfg.alpha,
            cfg.min_slice_points,
            cfg.occurrence,
        )?;
        let retained_slices = outcomes.iter().filter(|o| o.report.is_some()).count();
        let rhos: Vec<f64> = outcomes
            .iter()
            .filter_map(|o| o.report.as_ref())
            .filter(|r| r.occurred)
            .map(|r| r.rho)
            .collect();
        let occurrences = rhos.len();
        let mean_relevance = if occurrences == 0 {
            0.0
        } else {
            rhos.iter().sum::<f64>() / occurrences as f64
        };
        rows.push(FeatureReportRow {
            feature: ds.names()[i].clone(),
            occurrences,
            mean_relevance,
            product: occurrences as f64 * mean_relevance,
            retained_slices,
        });
    }
    // stable: ties keep column order
    rows.sort_by(|a, b| b.product.total_cmp(&a.product));
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `counts.len() + 1` bin edges; empty when nothing was retained.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// Mean retained-slice population; `None` when no slice was retained.
    pub mean: Option<f64>,
    /// Population of every retained slice, features in column order.
    pub populations: Vec<usize>,
    pub total_slices: usize,
}

impl Histogram {
    pub fn from_populations(populations: Vec<usize>, total_slices: usize, bins: usize) -> Self {
        let Some((&lo, &hi)) = populations.iter().min().zip(populations.iter().max()) else {
            return Histogram {
                edges: Vec::new(),
                counts: Vec::new(),
                mean: None,
                populations,
                total_slices,
            };
        };
        let bins = bins.max(1);
        let (lo, hi) = (lo as f64, hi as f64);
        let width = if hi > lo {
            (hi - lo) / bins as f64
        } else {
            1.0
        };
        let edges: Vec<f64> = (0..=bins).map(|b| lo + b as f64 * width).collect();
        let mut counts = vec![0; bins];
        for &p in &populations {
            let b = (((p as f64 - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
        let mean = populations.iter().sum::<usize>() as f64 / populations.len() as f64;
        Histogram {
            edges,
            counts,
            mean: Some(mean),
            populations,
            total_slices,
        }
    }
}

/// Histogram of retained-slice populations over every feature and anchor.
pub fn slice_population_histogram(ds: &Dataset, cfg: &FeatureSelectionConfig) -> Result<Histogram> {
    slice_population_histogram_prepared(&prepare_features(ds, cfg)?, cfg)
}

pub fn slice_population_histogram_prepared(
    ds: &Dataset,
    cfg: &FeatureSelectionConfig,
) -> Result<Histogram> {
    cfg.validate()?;
    let m = ds.n_cols();
    let mut populations = Vec::new();
    let mut total_slices = 0;
    for i in 0..m {
        let anchors = grid_anchors(m, &cfg.grid_values, i)?;
        total_slices += anchors.len();
        let counts: Vec<usize> = anchors
            .par_iter()
            .map(|a| {
                let spec = SliceSpec::new(i, a.clone(), cfg.radius)?;
                Ok(slice(ds, &spec)?.len())
            })
            .collect::<Result<_>>()?;
        populations.extend(counts.into_iter().filter(|&c| c > cfg.min_slice_points));
    }
    Ok(Histogram::from_populations(
        populations,
        total_slices,
        HISTOGRAM_BINS,
    ))
}

fn unit_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct InterstitialConfig {
    pub free_index: usize,
    /// Anchor values for every fixed coordinate; ignored when `anchors` is set.
    pub grid_values: Vec<f64>,
    /// Explicit anchors, each with one value per fixed coordinate.
    pub anchors: Option<Vec<Vec<f64>>>,
    pub radius: f64,
    pub alpha: f64,
    /// Slices need strictly more points than this to be analysed.
    pub min_slice_points: usize,
    pub standardize: bool,
    pub occurrence: OccurrenceRule,
}

impl Default for InterstitialConfig {
    fn default() -> Self {
        InterstitialConfig {
            free_index: 0,
            grid_values: unit_grid(),
            anchors: None,
            radius: 0.1,
            alpha: 4.0,
            min_slice_points: 100,
            standardize: false,
            occurrence: OccurrenceRule::default(),
        }
    }
}

impl InterstitialConfig {
    pub fn resolve_anchors(&self, m: usize) -> Result<Vec<Vec<f64>>> {
        match &self.anchors {
            Some(anchors) => {
                if let Some(a) = anchors.iter().find(|a| a.len() + 1 != m) {
                    return Err(Error::DimensionMismatch {
                        expected: m - 1,
                        found: a.len(),
                    });
                }
                Ok(anchors.clone())
            }
            None => {
                check_grid(&self.grid_values)?;
                grid_anchors(m, &self.grid_values, self.free_index)
            }
        }
    }
}

/// A marked piece of separation: the interstice found on one slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterstitialPatch {
    pub anchor: Vec<f64>,
    pub free_index: usize,
    pub xa: f64,
    pub xb: f64,
    pub radius: f64,
    pub rho: f64,
}

/// Slices along the free axis at every anchor and emits one patch per
/// interstice of every slice where clusters occurred. Patches are ordered by
/// anchor, then by `xa`.
pub fn detect_interstices(
    ds: &Dataset,
    cfg: &InterstitialConfig,
) -> Result<Vec<InterstitialPatch>> {
    check_positive("radius", cfg.radius)?;
    let m = ds.n_cols();
    if cfg.free_index >= m {
        return Err(Error::FreeIndexOutOfRange {
            index: cfg.free_index,
            dims: m,
        });
    }
    let anchors = cfg.resolve_anchors(m)?;
    let standardized;
    let data = if cfg.standardize {
        standardized = standardize(ds)?.0;
        &standardized
    } else {
        ds
    };

    let per_anchor: Vec<Vec<InterstitialPatch>> = anchors
        .par_iter()
        .map(|anchor| {
            let spec = SliceSpec::new(cfg.free_index, anchor.clone(), cfg.radius)?;
            let s = slice(data, &spec)?;
            if s.len() <= cfg.min_slice_points {
                return Ok(Vec::new());
            }
            let report = relevance_with(&single_linkage_slice(&s), cfg.alpha, cfg.occurrence)?;
            if !report.occurred {
                return Ok(Vec::new());
            }
            Ok(find_interstices(&s, &report)?
                .into_iter()
                .map(|gap| InterstitialPatch {
                    anchor: anchor.clone(),
                    free_index: cfg.free_index,
                    xa: gap.xa,
                    xb: gap.xb,
                    radius: cfg.radius,
                    rho: report.rho,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_anchor.into_iter().flatten().collect())
}

/// Union of closed intervals as sorted, disjoint intervals.
pub fn interval_union(intervals: impl IntoIterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = intervals.into_iter().filter(|(a, b)| a <= b).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// Intersection over union of a set of disjoint intervals and one target.
pub fn interval_iou(union: &[(f64, f64)], target: (f64, f64)) -> f64 {
    let covered: f64 = union.iter().map(|(a, b)| b - a).sum();
    let inter: f64 = union
        .iter()
        .map(|&(a, b)| (b.min(target.1) - a.max(target.0)).max(0.0))
        .sum();
    let total = covered + (target.1 - target.0) - inter;
    if total > 0.0 {
        inter / total
    } else {
        0.0
    }
}
