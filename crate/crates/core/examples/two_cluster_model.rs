//! Two dense intervals around a sparse gap: relevance over many seeds and the
//! interstice recovered on one of them.
//!
//!     cargo run --release --example two_cluster_model

use patchclust::synth::{gen_two_cluster_model, TwoClusterModel};
use patchclust::{find_interstices, relevance, single_linkage_slice, Slice1D};

fn main() -> patchclust::Result<()> {
    let model = TwoClusterModel::default();
    println!(
        "model {model:?}, expected counts {:?}",
        model.expected_counts()
    );

    let mut rhos = Vec::new();
    let mut occurred = 0;
    for seed in 0..200 {
        let x = gen_two_cluster_model(&model, seed)?;
        let r = relevance(&single_linkage_slice(&Slice1D::from_signal(x)?), 4.0)?;
        occurred += usize::from(r.occurred);
        rhos.push(r.rho);
    }
    let mean = rhos.iter().sum::<f64>() / rhos.len() as f64;
    println!("occurred on {occurred}/200 seeds, mean rho {mean:.4}");

    let x = gen_two_cluster_model(&model, 7)?;
    let slice = Slice1D::from_signal(x)?;
    let report = relevance(&single_linkage_slice(&slice), 4.0)?;
    println!(
        "\nseed 7: {} points, rho {:.4}, H {:.4}",
        slice.len(),
        report.rho,
        report.h
    );
    for b in &report.branches {
        println!(
            "  branch of {:>3} points: formed {:.4}, split {:.4}",
            b.rows.len(),
            b.formation_height,
            b.split_height
        );
    }
    if report.occurred {
        for gap in find_interstices(&slice, &report)? {
            println!(
                "  interstice [{:.4}, {:.4}]  (true gap [{}, {}])",
                gap.xa, gap.xb, model.x1, model.x2
            );
        }
    }
    Ok(())
}
