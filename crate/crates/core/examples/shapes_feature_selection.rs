//! Filter-style feature selection on 5000 circles and squares.
//!
//! Only the two dimensionless features (relative perimeter, circularity)
//! separate the classes; the size features and `gamma` do not.
//!
//!     cargo run --release --example shapes_feature_selection -- [seed]

use patchclust::pipeline::{
    prepare_features, select_features_prepared, slice_population_histogram_prepared,
};
use patchclust::synth::gen_shapes;
use patchclust::FeatureSelectionConfig;

fn main() -> patchclust::Result<()> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map_or(0, |s| s.parse().expect("seed"));
    let shapes = gen_shapes(5000, seed)?;
    let cfg = FeatureSelectionConfig {
        seed,
        ..Default::default()
    };
    let prepared = prepare_features(&shapes, &cfg)?;

    let rows = select_features_prepared(&prepared, &cfg)?;
    println!(
        "{:<20} {:>11} {:>14} {:>10} {:>9}",
        "feature", "occurrences", "mean relevance", "product", "retained"
    );
    for r in &rows {
        println!(
            "{:<20} {:>11} {:>14.4} {:>10.4} {:>9}",
            r.feature, r.occurrences, r.mean_relevance, r.product, r.retained_slices
        );
    }

    let hist = slice_population_histogram_prepared(&prepared, &cfg)?;
    println!(
        "\n{} of {} slices retained, mean population {:.2}",
        hist.populations.len(),
        hist.total_slices,
        hist.mean.unwrap_or(f64::NAN)
    );
    let widest = hist.counts.iter().copied().max().unwrap_or(1).max(1);
    for (i, c) in hist.counts.iter().enumerate() {
        let bar = "#".repeat(c * 40 / widest);
        println!(
            "{:>7.0}..{:<7.0} {c:>4} {bar}",
            hist.edges[i],
            hist.edges[i + 1]
        );
    }
    Ok(())
}
