//! Nearest-neighbour gaps of a homogeneous Poisson scatter follow an
//! exponential law with mean `1 / lambda`, and the single-linkage merge
//! heights are exactly those gaps.
//!
//!     cargo run --example poisson_gaps -- [lambda] [seeds]

use patchclust::single_linkage_1d;
use patchclust::synth::gen_poisson_uniform;

fn main() -> patchclust::Result<()> {
    let mut args = std::env::args().skip(1);
    let lambda: f64 = args.next().map_or(500.0, |s| s.parse().expect("lambda"));
    let seeds: u64 = args.next().map_or(200, |s| s.parse().expect("seeds"));

    let mut gaps = Vec::new();
    let mut top_ratio = Vec::new();
    for seed in 0..seeds {
        let x = gen_poisson_uniform(lambda, 0.0, 1.0, seed)?;
        let tree = single_linkage_1d(&x)?;
        let heights: Vec<f64> = tree.merges().iter().map(|m| m.height).collect();
        let mean = heights.iter().sum::<f64>() / heights.len() as f64;
        top_ratio.push(tree.height() / mean);
        gaps.extend(heights);
    }
    gaps.sort_by(f64::total_cmp);
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    println!("lambda = {lambda}, {seeds} seeds, {} gaps", gaps.len());
    println!(
        "mean gap        {mean:.6}  (1/lambda = {:.6})",
        1.0 / lambda
    );

    println!("\n  quantile   empirical   exponential");
    for q in [0.1, 0.25, 0.5, 0.75, 0.9, 0.99] {
        let emp = gaps[((gaps.len() - 1) as f64 * q) as usize];
        let theory = -(1.0 - q).ln() / lambda;
        println!("  {q:>8.2}   {emp:>9.6}   {theory:>11.6}");
    }

    top_ratio.sort_by(f64::total_cmp);
    println!(
        "\nfinal merge / mean gap: median {:.2}, 10%..90% {:.2}..{:.2}",
        top_ratio[top_ratio.len() / 2],
        top_ratio[top_ratio.len() / 10],
        top_ratio[top_ratio.len() * 9 / 10],
    );
    Ok(())
}
