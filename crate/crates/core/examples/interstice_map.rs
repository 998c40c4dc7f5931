//! Marks the empty band between two elongated clusters, slice by slice, and
//! draws the result as a character map of the unit square.
//!
//!     cargo run --release --example interstice_map

use patchclust::pipeline::{interval_iou, interval_union};
use patchclust::synth::gen_elongated_2d;
use patchclust::{detect_interstices, InterstitialConfig};

const COLS: usize = 60;

fn main() -> patchclust::Result<()> {
    let (ds, truth) = gen_elongated_2d(1000, 0.2, 0)?;
    let cfg = InterstitialConfig {
        anchors: Some((0..=100).map(|i| vec![i as f64 / 100.0]).collect()),
        ..Default::default()
    };
    let patches = detect_interstices(&ds, &cfg)?;

    let union = interval_union(patches.iter().map(|p| (p.xa, p.xb)));
    let iou = interval_iou(&union, (truth.gap_lo, truth.gap_hi));
    println!(
        "{} patches, true gap [{}, {}], IoU {iou:.3}",
        patches.len(),
        truth.gap_lo,
        truth.gap_hi
    );

    // one text row per 0.05 of the anchor axis, top row is y = 1
    for step in (0..=20).rev() {
        let y = step as f64 / 20.0;
        let mut line = vec![' '; COLS + 1];
        for row in ds.rows().filter(|r| (r[1] - y).abs() < 0.025) {
            line[(row[0] * COLS as f64).round() as usize] = '.';
        }
        for p in patches.iter().filter(|p| (p.anchor[0] - y).abs() < 1e-9) {
            let (a, b) = (
                (p.xa * COLS as f64).round() as usize,
                (p.xb * COLS as f64).round() as usize,
            );
            for c in &mut line[a..=b] {
                if *c == ' ' {
                    *c = '=';
                }
            }
        }
        println!("{y:>4.2} |{}|", line.into_iter().collect::<String>());
    }
    Ok(())
}
