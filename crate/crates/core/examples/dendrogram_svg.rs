//! Renders the pruned dendrogram of a two-cluster signal to SVG.
//!
//!     cargo run --example dendrogram_svg -- out.svg

use patchclust::synth::{gen_two_cluster_model, TwoClusterModel};
use patchclust::{
    cut, dendrogram_svg, prune_and_contract, relevance, single_linkage_1d, SvgOptions,
};

fn main() -> patchclust::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "dendrogram.svg".into());
    let x = gen_two_cluster_model(&TwoClusterModel::default(), 3)?;
    let tree = single_linkage_1d(&x)?;
    let pruned = prune_and_contract(&tree, 4.0)?;
    let report = relevance(&tree, 4.0)?;

    let two = cut(&tree, 2)?;
    println!(
        "{} leaves, H = {:.4}, rho = {:.4}",
        tree.n_leaves(),
        tree.height(),
        report.rho
    );
    println!(
        "cut at k = 2: sizes {:?}",
        two.clusters.iter().map(Vec::len).collect::<Vec<_>>()
    );

    let opts = SvgOptions {
        title: Some(format!("two-interval model, rho = {:.3}", report.rho)),
        ..Default::default()
    };
    std::fs::write(&path, dendrogram_svg(&tree, Some(&pruned), &opts))?;
    println!("wrote {path}");
    Ok(())
}
