//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Seeds are fixed in advance.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use patchclust::linkage::single_linkage_naive;
use patchclust::pipeline::{
    interval_iou, interval_union, prepare_features, select_features_prepared,
    slice_population_histogram_prepared,
};
use patchclust::slicer::{slice, standardize};
use patchclust::synth::{
    gen_elongated_2d, gen_gaussian_blob_2d, gen_normal, gen_poisson_uniform, gen_shapes,
    gen_two_cluster_model, TwoClusterModel,
};
use patchclust::{
    cut, detect_interstices, relevance_1d, single_linkage_1d, Dataset, FeatureReportRow,
    FeatureSelectionConfig, InterstitialConfig, SliceSpec,
};

const SEEDS: u64 = 200;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let t = start.elapsed();
    (
        t < limit,
        format!("{:.2} s (limit {} s)", t.as_secs_f64(), limit.as_secs()),
    )
}

fn random_instance(rng: &mut ChaCha8Rng, kind: u64, max_n: usize) -> Vec<f64> {
    let n = rng.random_range(0..=max_n);
    match kind % 3 {
        0 => (0..n).map(|_| rng.random_range(0.0..1.0)).collect(),
        1 => {
            let d = Normal::new(0.0, 1.0).unwrap();
            (0..n).map(|_| d.sample(rng)).collect()
        }
        _ => {
            let k = (n / 4).max(1) as i64;
            (0..n).map(|_| rng.random_range(0..=k) as f64).collect()
        }
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    for i in 0..SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(i);
        let x = random_instance(&mut rng, i, 64);
        let fast = single_linkage_1d(&x).unwrap();
        let slow = single_linkage_naive(&x).unwrap();
        let same_members = (0..fast.n_nodes()).all(|v| {
            let a: HashSet<usize> = fast.rows(v).into_iter().collect();
            let b: HashSet<usize> = slow.rows(v).into_iter().collect();
            a == b && fast.node_height(v) == slow.node_height(v)
        });
        if fast != slow || !same_members {
            mismatches += 1;
        }
    }
    let (fast_enough, time) = within(Duration::from_secs(5), start);
    outcome(
        mismatches == 0 && fast_enough,
        format!("{mismatches} mismatches in {SEEDS} instances, {time}"),
    )
}

fn gap_multiset() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut bad_len = 0;
    for i in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
        let x = random_instance(&mut rng, i, 1000);
        let tree = single_linkage_1d(&x).unwrap();
        let mut s = x.clone();
        s.sort_by(f64::total_cmp);
        let mut gaps: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
        gaps.sort_by(f64::total_cmp);
        let mut heights: Vec<f64> = tree.merges().iter().map(|m| m.height).collect();
        heights.sort_by(f64::total_cmp);
        if gaps.len() != heights.len() {
            bad_len += 1;
            continue;
        }
        for (g, h) in gaps.iter().zip(&heights) {
            worst = worst.max((g - h).abs());
        }
    }
    let (fast_enough, time) = within(Duration::from_secs(5), start);
    outcome(
        bad_len == 0 && worst <= 1e-12 && fast_enough,
        format!("max |height - gap| = {worst:e}, {bad_len} length mismatches, {time}"),
    )
}

fn poisson_gap_law() -> Outcome {
    let mut gap_sum = 0.0;
    let mut gap_count = 0usize;
    let mut top_ok = 0;
    for seed in 0..SEEDS {
        let x = gen_poisson_uniform(500.0, 0.0, 1.0, seed).unwrap();
        gap_sum += x.windows(2).map(|w| w[1] - w[0]).sum::<f64>();
        gap_count += x.len() - 1;
        let h = single_linkage_1d(&x).unwrap().height();
        if (0.005..=0.02).contains(&h) {
            top_ok += 1;
        }
    }
    let mean = gap_sum / gap_count as f64;
    let rel = (mean - 0.002).abs() / 0.002;
    let frac = top_ok as f64 / SEEDS as f64;
    outcome(
        rel < 0.05 && frac >= 0.9,
        format!(
            "mean gap {mean:.6} ({:.2}% off 0.002), final merge within 2x of 0.01 on {:.1}% of seeds",
            rel * 100.0,
            frac * 100.0
        ),
    )
}

struct RhoStats {
    mean_rho: f64,
    rate: f64,
}

fn rho_stats(samples: impl Iterator<Item = Vec<f64>>) -> RhoStats {
    let (mut sum, mut occurred, mut n) = (0.0, 0, 0);
    for x in samples {
        let r = relevance_1d(&x, 4.0).unwrap();
        sum += r.rho;
        occurred += usize::from(r.occurred);
        n += 1;
    }
    RhoStats {
        mean_rho: sum / n as f64,
        rate: occurred as f64 / n as f64,
    }
}

fn null_models() -> (RhoStats, RhoStats) {
    let uniform = rho_stats((0..SEEDS).map(|s| gen_poisson_uniform(500.0, 0.0, 1.0, s).unwrap()));
    let normal = rho_stats((0..SEEDS).map(|s| gen_normal(500, 0.0, 0.1, s).unwrap()));
    (uniform, normal)
}

fn null_rejection(uniform: &RhoStats, normal: &RhoStats) -> Outcome {
    let ok = |s: &RhoStats| s.mean_rho < 0.35 && s.rate < 0.5;
    outcome(
        ok(uniform) && ok(normal),
        format!(
            "uniform: mean rho {:.4}, occurrence {:.1}%; normal: mean rho {:.4}, occurrence {:.1}% (need < 0.35 and < 50%)",
            uniform.mean_rho,
            uniform.rate * 100.0,
            normal.mean_rho,
            normal.rate * 100.0
        ),
    )
}

fn model_detection(uniform: &RhoStats, normal: &RhoStats) -> Outcome {
    let model = TwoClusterModel::default();
    let stats = rho_stats((0..SEEDS).map(|s| gen_two_cluster_model(&model, s).unwrap()));
    let gap = stats.mean_rho - uniform.mean_rho.max(normal.mean_rho);
    outcome(
        stats.rate >= 0.9 && (stats.mean_rho - 0.7453).abs() <= 0.15 && gap > 0.25,
        format!(
            "occurrence {:.1}%, mean rho {:.4} (target 0.7453 +/- 0.15), gap to null {gap:.4}",
            stats.rate * 100.0,
            stats.mean_rho
        ),
    )
}

fn feature_ranking(rows: &[FeatureReportRow], elapsed: Duration) -> Outcome {
    let get = |name: &str| rows.iter().find(|r| r.feature == name).unwrap();
    let (g, p, a, rp, c) = (
        get("gamma"),
        get("perimeter"),
        get("area"),
        get("relative_perimeter"),
        get("circularity"),
    );
    let size_max = a.product.max(p.product);
    let ordering =
        c.product > rp.product && rp.product > size_max && a.product.min(p.product) > g.product;
    let means_ok = [c, rp]
        .iter()
        .all(|r| (0.2..=0.5).contains(&r.mean_relevance));
    let occ_ok = [c, rp]
        .iter()
        .all(|r| r.occurrences >= 10 * a.occurrences.max(p.occurrences));
    let fast_enough = elapsed < Duration::from_secs(120);
    let table: Vec<String> = rows
        .iter()
        .map(|r| {
            format!(
                "{} {}/{:.4}/{:.4}",
                r.feature, r.occurrences, r.mean_relevance, r.product
            )
        })
        .collect();
    outcome(
        g.occurrences == 0 && ordering && means_ok && occ_ok && fast_enough,
        format!(
            "gamma occurrences {}, ordering {ordering}, mean relevance in range {means_ok}, 10x occurrences {occ_ok}, {:.1} s; {}",
            g.occurrences,
            elapsed.as_secs_f64(),
            table.join(", ")
        ),
    )
}

fn slice_population(prepared: &Dataset, cfg: &FeatureSelectionConfig) -> Outcome {
    let hist = slice_population_histogram_prepared(prepared, cfg).unwrap();
    match hist.mean {
        Some(mean) => outcome(
            (mean - 940.0).abs() <= 0.2 * 940.0,
            format!(
                "mean retained population {mean:.2} over {} of {} slices (target 940 +/- 20%)",
                hist.populations.len(),
                hist.total_slices
            ),
        ),
        None => outcome(false, "no slice retained".into()),
    }
}

fn interstice_detection() -> Outcome {
    let start = Instant::now();
    let (ds, truth) = gen_elongated_2d(1000, 0.2, 0).unwrap();
    let cfg = InterstitialConfig {
        free_index: 0,
        anchors: Some((0..=100).map(|i| vec![i as f64 / 100.0]).collect()),
        radius: 0.1,
        alpha: 4.0,
        min_slice_points: 100,
        ..Default::default()
    };
    let patches = detect_interstices(&ds, &cfg).unwrap();
    let union = interval_union(patches.iter().map(|p| (p.xa, p.xb)));
    let iou = interval_iou(&union, (truth.gap_lo, truth.gap_hi));

    let control = gen_gaussian_blob_2d(1000, (0.5, 0.5), 0.15, 0).unwrap();
    let control_patches = detect_interstices(&control, &cfg).unwrap().len();
    let (fast_enough, time) = within(Duration::from_secs(10), start);
    outcome(
        iou >= 0.5 && control_patches == 0 && fast_enough,
        format!(
            "{} patches, IoU {iou:.3} against [{}, {}]; {control_patches} patches on the single-cluster control; {time}",
            patches.len(),
            truth.gap_lo,
            truth.gap_hi
        ),
    )
}

fn property_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..300u64 {
        let x = random_instance(&mut rng, i, 150);
        let alpha = rng.random_range(1.0..10.0);
        let r = relevance_1d(&x, alpha).unwrap();
        if !(0.0..=1.0).contains(&r.rho) {
            failures.push(format!("rho {} out of range", r.rho));
        }

        // distinct gaps so that affine maps cannot reorder merges
        let n = rng.random_range(2..80);
        let mut gaps: Vec<f64> = (1..n).map(|g| g as f64 * 1e-2).collect();
        for k in (1..gaps.len()).rev() {
            gaps.swap(k, rng.random_range(0..=k));
        }
        let mut y = vec![0.0];
        for g in gaps {
            y.push(y.last().unwrap() + g);
        }
        let base = relevance_1d(&y, alpha).unwrap().rho;
        let shift = rng.random_range(-1e3..1e3);
        let scale = rng.random_range(1e-3..1e3);
        let moved: Vec<f64> = y.iter().map(|v| v + shift).collect();
        let scaled: Vec<f64> = y.iter().map(|v| v * scale).collect();
        for (what, z) in [("translation", moved), ("scale", scaled)] {
            let rho = relevance_1d(&z, alpha).unwrap().rho;
            if (rho - base).abs() > 1e-9 {
                failures.push(format!("{what} changed rho {base} -> {rho}"));
            }
        }

        let tree = single_linkage_1d(&x).unwrap();
        let k = rng.random_range(1..10);
        let mut pos = vec![0; tree.n_leaves()];
        for (p, l) in tree.leaves().iter().enumerate() {
            pos[l.row] = p;
        }
        for cluster in cut(&tree, k).unwrap().clusters {
            let mut p: Vec<usize> = cluster.iter().map(|&r| pos[r]).collect();
            p.sort_unstable();
            if p.windows(2).any(|w| w[1] != w[0] + 1) {
                failures.push("non-contiguous cut cluster".into());
            }
        }
    }

    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(3..200);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..3).map(|_| rng.random_range(-3.0..3.0)).collect())
            .collect();
        let ds = Dataset::new(vec!["a".into(), "b".into(), "c".into()], rows, None).unwrap();
        let anchor = vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let (r1, r2) = (rng.random_range(0.1..1.0), rng.random_range(1.0..2.0));
        let small = slice(&ds, &SliceSpec::new(1, anchor.clone(), r1).unwrap()).unwrap();
        let large: HashSet<usize> = slice(&ds, &SliceSpec::new(1, anchor, r2).unwrap())
            .unwrap()
            .source_rows()
            .iter()
            .copied()
            .collect();
        if !small.source_rows().iter().all(|r| large.contains(r)) {
            failures.push("slice not nested under radius".into());
        }
        let (z, _) = standardize(&ds).unwrap();
        for c in 0..3 {
            let col = z.column(c);
            let m = col.len() as f64;
            let mean = col.iter().sum::<f64>() / m;
            let sd = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt();
            if mean.abs() > 1e-9 || (sd - 1.0).abs() > 1e-9 {
                failures.push(format!("standardized column has mean {mean}, sd {sd}"));
            }
        }
    }
    let detail = if failures.is_empty() {
        "300 random signals, 30 random tables: all invariants hold".to_string()
    } else {
        format!("{} violations, first: {}", failures.len(), failures[0])
    };
    outcome(failures.is_empty(), detail)
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("1 oracle equivalence", oracle_equivalence()));
    results.push(("2 gap multiset", gap_multiset()));
    results.push(("3 poisson gap law", poisson_gap_law()));

    let (uniform, normal) = null_models();
    results.push(("4 null rejection", null_rejection(&uniform, &normal)));
    results.push(("5 model detection", model_detection(&uniform, &normal)));

    let start = Instant::now();
    let shapes = gen_shapes(5000, 0).unwrap();
    let cfg = FeatureSelectionConfig::default();
    let prepared = prepare_features(&shapes, &cfg).unwrap();
    let rows = select_features_prepared(&prepared, &cfg).unwrap();
    results.push(("6 feature ranking", feature_ranking(&rows, start.elapsed())));
    results.push(("7 slice population", slice_population(&prepared, &cfg)));

    results.push(("8 interstice map", interstice_detection()));
    results.push(("9 property suite", property_suite()));

    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "{} [{name}] {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
