//! Streak pruning, the relevance index and interstice extraction.
//!
//! A node of the dendrogram *qualifies* when it holds at least
//! `n = N / alpha` points. Qualifying nodes form an upward-closed subtree;
//! a chain where a qualifying node has exactly one qualifying child is a
//! streak absorption (the other child is a handful of stray points) and is
//! contracted into a single branch. The branches that end in a qualifying
//! node without qualifying children are the *leaf branches*.
//!
//! A branch starts at the height of the merge that created its lowest
//! qualifying node and ends at the first merge joining it to another
//! qualifying subtree (or at the root height for the topmost chain).
//! Relevance is the length of the second-longest leaf branch over `H`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkage::single_linkage_1d;
use crate::model::{LeafBranch, MergeTree, PrunedTree, RelevanceReport, Slice1D};

/// When a dendrogram counts as showing clusters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OccurrenceRule {
    /// Both sides of the top-level split hold at least `n` points: the sweep
    /// starts at `k = 2` and stops immediately when fewer than two branches
    /// qualify there.
    #[default]
    RootSplit,
    /// Any split anywhere in the tree with two qualifying sides.
    AnySplit,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

pub fn qualifying_threshold(n_points: usize, alpha: f64) -> f64 {
    n_points as f64 / alpha
}

/// Removes sub-threshold subtrees and contracts absorption chains.
pub fn prune_and_contract(tree: &MergeTree, alpha: f64) -> Result<PrunedTree> {
    check_alpha(alpha)?;
    let threshold = qualifying_threshold(tree.n_leaves(), alpha);
    let qualifies = |v: usize| tree.size(v) as f64 >= threshold;
    let parents = tree.parents();
    let root_height = tree.height();

    let mut branches = Vec::new();
    for v in 0..tree.n_nodes() {
        if !qualifies(v) {
            continue;
        }
        if let Some((l, r)) = tree.children(v) {
            if qualifies(l) || qualifies(r) {
                continue;
            }
        }
        let formation_height = tree.node_height(v);
        let mut top = v;
        let mut split_height = root_height;
        while let Some(p) = parents[top] {
            let (l, r) = tree.children(p).expect("parent is a merge");
            let sibling = if l == top { r } else { l };
            if qualifies(sibling) {
                split_height = tree.node_height(p);
                break;
            }
            top = p;
        }
        branches.push(LeafBranch {
            node: top,
            rows: tree.rows(top),
            formation_height,
            split_height,
        });
    }
    branches.sort_by_key(|b| tree.span(b.node).0);
    Ok(PrunedTree {
        threshold,
        root_height,
        branches,
    })
}

pub fn relevance(tree: &MergeTree, alpha: f64) -> Result<RelevanceReport> {
    relevance_with(tree, alpha, OccurrenceRule::default())
}

pub fn relevance_with(
    tree: &MergeTree,
    alpha: f64,
    rule: OccurrenceRule,
) -> Result<RelevanceReport> {
    let pruned = prune_and_contract(tree, alpha)?;
    let h = tree.height();
    let degenerate = tree.n_leaves() < 2 || h == 0.0;

    let occurred = !degenerate
        && match rule {
            OccurrenceRule::RootSplit => {
                let root = tree.root().expect("at least two leaves");
                let (l, r) = tree.children(root).expect("root is a merge");
                tree.size(l) as f64 >= pruned.threshold && tree.size(r) as f64 >= pruned.threshold
            }
            OccurrenceRule::AnySplit => pruned.branches.len() >= 2,
        };

    let mut branches = pruned.branches;
    branches.sort_by(|a, b| b.length().total_cmp(&a.length()));
    let rho = if occurred {
        branches[1].length() / h
    } else {
        0.0
    };

    Ok(RelevanceReport {
        rho,
        h,
        occurred,
        degenerate,
        threshold: pruned.threshold,
        branches,
    })
}

/// Builds the dendrogram of `x` and scores it.
pub fn relevance_1d(x: &[f64], alpha: f64) -> Result<RelevanceReport> {
    relevance(&single_linkage_1d(x)?, alpha)
}

/// The gap `[xa, xb]` between two neighbouring clusters of a slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interstice {
    pub xa: f64,
    pub xb: f64,
    pub left_rows: Vec<usize>,
    pub right_rows: Vec<usize>,
}

impl Interstice {
    pub fn width(&self) -> f64 {
        self.xb - self.xa
    }
}

/// One interstice per pair of neighbouring leaf branches, left to right.
///
/// `xa` is the largest coordinate of the left cluster and `xb` the smallest
/// of the right one. Streak points that no branch absorbed may lie inside.
/// Neighbours that touch (`xa == xb`, possible only when `n <= 1`) are skipped.
pub fn find_interstices(slice: &Slice1D, report: &RelevanceReport) -> Result<Vec<Interstice>> {
    if !report.occurred {
        return Err(Error::NotOccurred);
    }
    let coord_of: HashMap<usize, f64> = slice
        .source_rows()
        .iter()
        .copied()
        .zip(slice.coords().iter().copied())
        .collect();

    let mut clusters = Vec::with_capacity(report.branches.len());
    for b in &report.branches {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for row in &b.rows {
            let c = *coord_of.get(row).ok_or(Error::UnknownRow(*row))?;
            lo = lo.min(c);
            hi = hi.max(c);
        }
        clusters.push((lo, hi, &b.rows));
    }
    clusters.sort_by(|a, b| a.0.total_cmp(&b.0));

    Ok(clusters
        .windows(2)
        .filter(|w| w[0].1 < w[1].0)
        .map(|w| Interstice {
            xa: w[0].1,
            xb: w[1].0,
            left_rows: w[0].2.clone(),
            right_rows: w[1].2.clone(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkage::single_linkage_slice;

    const TRIPLES: [f64; 6] = [0.0, 0.01, 0.02, 0.5, 0.51, 0.52];

    #[test]
    fn two_tight_triples() {
        let tree = single_linkage_1d(&TRIPLES).unwrap();
        let pruned = prune_and_contract(&tree, 4.0).unwrap();
        assert_eq!(pruned.threshold, 1.5);
        assert_eq!(pruned.branches.len(), 2);
        // gaps computed in floating point: 0.01, 0.01, 0.48, 0.01, 0.01
        let g = |i: usize| TRIPLES[i + 1] - TRIPLES[i];
        let left = &pruned.branches[0];
        assert_eq!(left.rows, vec![0, 1, 2]);
        assert_eq!(left.formation_height, g(0).min(g(1)));
        assert_eq!(left.split_height, g(2));
        let right = &pruned.branches[1];
        assert_eq!(right.rows, vec![3, 4, 5]);
        assert_eq!(right.formation_height, g(3).min(g(4)));
        assert_eq!(right.split_height, g(2));
        assert!((left.formation_height - 0.01).abs() < 1e-12);
        assert!((left.split_height - 0.48).abs() < 1e-12);

        let report = relevance(&tree, 4.0).unwrap();
        assert!(report.occurred);
        assert!((report.rho - 0.47 / 0.48).abs() < 1e-9, "{}", report.rho);
        assert!((report.rho - 0.9792).abs() < 1e-4);
    }

    #[test]
    fn single_blob_has_one_branch() {
        // gaps widen left to right, so the tree is a pure chain plus a lone
        // straggler: only one side of any split reaches n
        let mut x = vec![0.0];
        for i in 0..19 {
            x.push(x[i] + 0.01 + 0.001 * i as f64);
        }
        x.push(1.0);
        let tree = single_linkage_1d(&x).unwrap();
        let pruned = prune_and_contract(&tree, 4.0).unwrap();
        assert_eq!(pruned.branches.len(), 1);
        assert_eq!(pruned.branches[0].split_height, tree.height());
        let report = relevance(&tree, 4.0).unwrap();
        assert!(!report.occurred);
        assert_eq!(report.rho, 0.0);
    }

    #[test]
    fn singletons_qualify_when_alpha_exceeds_n() {
        let x = [0.0, 1.0, 3.0, 3.5];
        let tree = single_linkage_1d(&x).unwrap();
        let pruned = prune_and_contract(&tree, 10.0).unwrap();
        // every leaf qualifies and every leaf branch is a single point
        assert_eq!(pruned.branches.len(), 4);
        for b in &pruned.branches {
            assert_eq!(b.rows.len(), 1);
            assert_eq!(b.formation_height, 0.0);
        }
        let splits: Vec<f64> = pruned.branches.iter().map(|b| b.split_height).collect();
        assert_eq!(splits, vec![1.0, 1.0, 0.5, 0.5]);
    }

    #[test]
    fn nothing_qualifies_below_alpha_one() {
        let tree = single_linkage_1d(&TRIPLES).unwrap();
        let pruned = prune_and_contract(&tree, 0.5).unwrap();
        assert!(pruned.branches.is_empty());
        assert!(!relevance(&tree, 0.5).unwrap().occurred);
    }

    #[test]
    fn rejects_bad_alpha() {
        let tree = single_linkage_1d(&TRIPLES).unwrap();
        for alpha in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                prune_and_contract(&tree, alpha),
                Err(Error::InvalidAlpha(_))
            ));
        }
    }

    #[test]
    fn degenerate_inputs() {
        let same = relevance_1d(&[2.0; 8], 4.0).unwrap();
        assert!(same.degenerate && !same.occurred);
        assert_eq!(same.rho, 0.0);
        let one = relevance_1d(&[2.0], 4.0).unwrap();
        assert!(one.degenerate && !one.occurred);
        let none = relevance_1d(&[], 4.0).unwrap();
        assert!(none.degenerate && none.branches.is_empty());
    }

    #[test]
    fn streaks_are_contracted() {
        // a stray point sits above the left cluster and is absorbed before the
        // clusters meet; it belongs to the left branch
        let x = [0.0, 0.01, 0.02, 0.03, 0.1, 0.5, 0.51, 0.52, 0.53];
        let tree = single_linkage_1d(&x).unwrap();
        let pruned = prune_and_contract(&tree, 4.0).unwrap();
        assert_eq!(pruned.branches.len(), 2);
        assert_eq!(pruned.branches[0].rows, vec![0, 1, 2, 3, 4]);
        assert!((pruned.branches[0].split_height - 0.4).abs() < 1e-12);
        assert!((pruned.branches[0].formation_height - 0.01).abs() < 1e-12);
    }

    #[test]
    fn root_rule_is_stricter_than_any_split() {
        // two tight pairs split below a top-level streak
        let x = [0.0, 0.01, 0.1, 0.11, 5.0];
        let tree = single_linkage_1d(&x).unwrap();
        let any = relevance_with(&tree, 4.0, OccurrenceRule::AnySplit).unwrap();
        let root = relevance_with(&tree, 4.0, OccurrenceRule::RootSplit).unwrap();
        assert!(any.occurred);
        assert!(!root.occurred);
        assert_eq!(root.rho, 0.0);
        assert_eq!(any.branches, root.branches);
    }

    #[test]
    fn interstice_between_two_clusters() {
        let slice = Slice1D::new(
            vec![0.1, 0.12, 0.14, 0.8, 0.82, 0.84],
            vec![10, 11, 12, 13, 14, 15],
        )
        .unwrap();
        let report = relevance(&single_linkage_slice(&slice), 4.0).unwrap();
        let gaps = find_interstices(&slice, &report).unwrap();
        assert_eq!(gaps.len(), 1);
        assert_eq!((gaps[0].xa, gaps[0].xb), (0.14, 0.8));
        assert_eq!(gaps[0].left_rows, vec![10, 11, 12]);
        assert_eq!(gaps[0].right_rows, vec![13, 14, 15]);
    }

    #[test]
    fn three_clusters_give_two_ordered_interstices() {
        let x = [0.0, 0.01, 0.02, 0.5, 0.51, 0.52, 1.5, 1.51, 1.52];
        let slice = Slice1D::from_signal(x.to_vec()).unwrap();
        let report = relevance(&single_linkage_slice(&slice), 4.0).unwrap();
        assert!(report.occurred);
        let gaps = find_interstices(&slice, &report).unwrap();
        let bounds: Vec<(f64, f64)> = gaps.iter().map(|g| (g.xa, g.xb)).collect();
        assert_eq!(bounds, vec![(0.02, 0.5), (0.52, 1.5)]);
    }

    #[test]
    fn interstices_need_occurrence() {
        let slice = Slice1D::from_signal(vec![0.0, 0.1, 0.2]).unwrap();
        let report = relevance(&single_linkage_slice(&slice), 1.0).unwrap();
        assert!(!report.occurred);
        assert!(matches!(
            find_interstices(&slice, &report),
            Err(Error::NotOccurred)
        ));
    }

    #[test]
    fn interstices_reject_foreign_rows() {
        let slice = Slice1D::from_signal(TRIPLES.to_vec()).unwrap();
        let report = relevance(&single_linkage_slice(&slice), 4.0).unwrap();
        let other = Slice1D::new(TRIPLES.to_vec(), vec![6, 7, 8, 9, 10, 11]).unwrap();
        assert!(matches!(
            find_interstices(&other, &report),
            Err(Error::UnknownRow(_))
        ));
    }
}
