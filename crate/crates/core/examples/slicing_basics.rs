//! Standardization, anchor grids and hypercylinder slices on a small table.
//!
//!     cargo run --example slicing_basics

use patchclust::slicer::{add_uniform_noise, grid_anchors, slice, standardize};
use patchclust::{Dataset, SliceSpec};

fn main() -> patchclust::Result<()> {
    let rows = (0..12)
        .map(|i| {
            let t = i as f64;
            vec![t, (t * 0.7).sin() * 3.0, if i % 2 == 0 { 1.0 } else { 5.0 }]
        })
        .collect();
    let ds = Dataset::new(vec!["t".into(), "wave".into(), "level".into()], rows, None)?;

    let (z, stats) = standardize(&ds)?;
    println!("means {:?}\nsds   {:?}", stats.means, stats.sds);
    let noisy = add_uniform_noise(&z, 0.2, 1)?;

    let anchors = grid_anchors(3, &[-1.0, 1.0], 0)?;
    println!("\nanchors for free feature `t`: {anchors:?}");
    for anchor in anchors {
        let spec = SliceSpec::new(0, anchor.clone(), 1.0)?;
        let s = slice(&noisy, &spec)?;
        let coords: Vec<String> = s.coords().iter().map(|c| format!("{c:.2}")).collect();
        println!(
            "  {anchor:?}: rows {:?} at t = [{}]",
            s.source_rows(),
            coords.join(", ")
        );
    }

    for r in [0.5, 1.0, 2.0, 4.0] {
        let s = slice(&noisy, &SliceSpec::new(0, vec![0.0, 0.0], r)?)?;
        println!("radius {r}: {} points", s.len());
    }
    Ok(())
}
