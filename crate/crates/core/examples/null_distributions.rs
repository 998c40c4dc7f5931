//! Relevance of structureless data: uniform scatters and normal samples.
//!
//!     cargo run --release --example null_distributions

use patchclust::synth::{gen_normal, gen_poisson_uniform};
use patchclust::{relevance_with, single_linkage_1d, OccurrenceRule};

struct Tally {
    occurred: usize,
    rho_sum: f64,
    runs: usize,
}

fn tally(samples: &[Vec<f64>], rule: OccurrenceRule) -> patchclust::Result<Tally> {
    let mut t = Tally {
        occurred: 0,
        rho_sum: 0.0,
        runs: samples.len(),
    };
    for x in samples {
        let r = relevance_with(&single_linkage_1d(x)?, 4.0, rule)?;
        t.occurred += usize::from(r.occurred);
        t.rho_sum += r.rho;
    }
    Ok(t)
}

fn main() -> patchclust::Result<()> {
    let seeds = 0..200u64;
    let uniform: Vec<_> = seeds
        .clone()
        .map(|s| gen_poisson_uniform(500.0, 0.0, 1.0, s))
        .collect::<Result<_, _>>()?;
    let normal: Vec<_> = seeds
        .map(|s| gen_normal(500, 0.0, 0.1, s))
        .collect::<Result<_, _>>()?;

    println!(
        "{:<10} {:<10} {:>10} {:>10}",
        "data", "rule", "occurred", "mean rho"
    );
    for (name, data) in [("uniform", &uniform), ("normal", &normal)] {
        for rule in [OccurrenceRule::RootSplit, OccurrenceRule::AnySplit] {
            let t = tally(data, rule)?;
            println!(
                "{name:<10} {:<10} {:>9.1}% {:>10.4}",
                format!("{rule:?}"),
                100.0 * t.occurred as f64 / t.runs as f64,
                t.rho_sum / t.runs as f64
            );
        }
    }
    Ok(())
}
