//! Dendrogram rendering to standalone SVG.

use std::fmt::Write;

use crate::model::{MergeTree, PrunedTree};

#[derive(Debug, Clone)]
pub struct SvgOptions {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub title: Option<String>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width: 900.0,
            height: 480.0,
            margin: 40.0,
            title: None,
        }
    }
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Draws the merge tree with leaves in sorted order along the horizontal
/// axis and merge height on the vertical axis. When `pruned` is given, each
/// leaf branch is coloured and marked from formation to split.
pub fn dendrogram_svg(tree: &MergeTree, pruned: Option<&PrunedTree>, opts: &SvgOptions) -> String {
    let mut out = String::new();
    let (w, h, m) = (opts.width, opts.height, opts.margin);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    if let Some(title) = &opts.title {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
            w / 2.0,
            m * 0.6,
            escape(title)
        );
    }

    let n = tree.n_leaves();
    let top = tree.height();
    let plot_w = (w - 2.0 * m).max(1.0);
    let plot_h = (h - 2.0 * m).max(1.0);
    let y_of = |height: f64| {
        if top > 0.0 {
            h - m - height / top * plot_h
        } else {
            h - m
        }
    };
    let step = if n > 1 { plot_w / (n - 1) as f64 } else { 0.0 };

    let mut colour: Vec<Option<&str>> = vec![None; tree.n_nodes()];
    if let Some(p) = pruned {
        for (b, branch) in p.branches.iter().enumerate() {
            let c = PALETTE[b % PALETTE.len()];
            let (lo, hi) = tree.span(branch.node);
            for node in (0..tree.n_nodes()).filter(|&v| v < n || v <= branch.node) {
                let (a, z) = tree.span(node);
                if a >= lo && z <= hi {
                    colour[node] = Some(c);
                }
            }
        }
    }

    let mut xs = vec![0.0; tree.n_nodes()];
    for (i, x) in xs.iter_mut().enumerate().take(n) {
        *x = m + i as f64 * step;
    }
    let _ = writeln!(out, r#"<g fill="none" stroke-width="1">"#);
    for (k, merge) in tree.merges().iter().enumerate() {
        let node = n + k;
        let (l, r) = (merge.left, merge.right);
        xs[node] = (xs[l] + xs[r]) / 2.0;
        let y = y_of(merge.height);
        let stroke = colour[node].unwrap_or("#555");
        let _ = writeln!(
            out,
            r#"<path d="M{:.2},{:.2}V{y:.2}H{:.2}V{:.2}" stroke="{stroke}"/>"#,
            xs[l],
            y_of(tree.node_height(l)),
            xs[r],
            y_of(tree.node_height(r)),
        );
    }
    let _ = writeln!(out, "</g>");

    if let Some(p) = pruned {
        if top > 0.0 {
            for (b, branch) in p.branches.iter().enumerate() {
                let c = PALETTE[b % PALETTE.len()];
                let x = xs[branch.node];
                let _ = writeln!(
                    out,
                    r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="{c}" stroke-width="4" stroke-opacity="0.5"/>"#,
                    y_of(branch.formation_height),
                    y_of(branch.split_height),
                );
            }
        }
    }

    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{}" x2="{m}" y2="{}" stroke="black"/>"#,
        h - m,
        m
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{top:.4}</text>"#,
        m - 4.0,
        m + 4.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">0</text>"#,
        m - 4.0,
        h - m + 4.0
    );
    out.push_str("</svg>\n");
    out
}
