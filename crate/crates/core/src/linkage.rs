//! Exact single-linkage clustering of one-dimensional signals.
//!
//! In one dimension the minimum spanning tree is the sorted path, so the
//! dendrogram is fully determined by the consecutive gaps of the sorted
//! input: merging them in ascending order (ties left to right) with a
//! union-find over adjacent runs gives the single-linkage tree in
//! `O(N log N)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Leaf, Merge, MergeTree, Slice1D};

/// Default size limit for [`single_linkage_naive`].
pub const ORACLE_LIMIT: usize = 512;

/// Sorts points by coordinate, then by row.
fn sorted_leaves(coords: &[f64], rows: &[usize]) -> Result<Vec<Leaf>> {
    if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFiniteInput { index });
    }
    let mut leaves: Vec<Leaf> = coords
        .iter()
        .zip(rows)
        // adding 0.0 folds -0.0 into 0.0
        .map(|(&coord, &row)| Leaf {
            coord: coord + 0.0,
            row,
        })
        .collect();
    leaves.sort_by(|a, b| a.coord.total_cmp(&b.coord).then(a.row.cmp(&b.row)));
    Ok(leaves)
}

struct RunSets {
    parent: Vec<usize>,
    node: Vec<usize>,
}

impl RunSets {
    fn new(n: usize) -> Self {
        RunSets {
            parent: (0..n).collect(),
            node: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}

fn build(leaves: Vec<Leaf>) -> MergeTree {
    let n = leaves.len();
    let gaps: Vec<f64> = leaves.windows(2).map(|w| w[1].coord - w[0].coord).collect();
    let mut order: Vec<usize> = (0..gaps.len()).collect();
    // stable sort keeps equal gaps in left-to-right order
    order.sort_by(|&a, &b| gaps[a].total_cmp(&gaps[b]));

    let mut runs = RunSets::new(n);
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for g in order {
        let (a, b) = (runs.find(g), runs.find(g + 1));
        merges.push(Merge {
            left: runs.node[a],
            right: runs.node[b],
            height: gaps[g],
        });
        runs.parent[b] = a;
        runs.node[a] = n + merges.len() - 1;
    }
    MergeTree::from_parts_unchecked(leaves, merges)
}

/// Single-linkage dendrogram of `x`; leaf rows are positions in `x`.
pub fn single_linkage_1d(x: &[f64]) -> Result<MergeTree> {
    let rows: Vec<usize> = (0..x.len()).collect();
    Ok(build(sorted_leaves(x, &rows)?))
}

/// Single-linkage dendrogram of a slice, keeping its source rows.
pub fn single_linkage_slice(slice: &Slice1D) -> MergeTree {
    // slice coordinates are finite by construction
    build(sorted_leaves(slice.coords(), slice.source_rows()).expect("finite slice"))
}

/// Textbook single linkage: repeatedly merge the two clusters with the
/// smallest minimum pairwise distance. Cubic in `N` and only meant as an
/// independent check of [`single_linkage_1d`].
pub fn single_linkage_naive(x: &[f64]) -> Result<MergeTree> {
    single_linkage_naive_with_limit(x, ORACLE_LIMIT)
}

pub fn single_linkage_naive_with_limit(x: &[f64], limit: usize) -> Result<MergeTree> {
    if x.len() > limit {
        return Err(Error::OracleLimit { n: x.len(), limit });
    }
    let rows: Vec<usize> = (0..x.len()).collect();
    let leaves = sorted_leaves(x, &rows)?;
    let n = leaves.len();

    // (node id, member leaf positions)
    let mut clusters: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
    let mut merges = Vec::new();
    while clusters.len() > 1 {
        // Ties on distance go to the lexicographically smallest closest pair
        // of leaf positions, which is the left-to-right gap rule.
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut closest: Option<(f64, (usize, usize))> = None;
                for &i in &clusters[a].1 {
                    for &j in &clusters[b].1 {
                        let d = (leaves[i].coord - leaves[j].coord).abs();
                        let key = (d, (i.min(j), i.max(j)));
                        if closest.is_none_or(|c| key < c) {
                            closest = Some(key);
                        }
                    }
                }
                let (d, pair) = closest.expect("clusters are non-empty");
                if best.is_none_or(|(bd, bp, _, _)| (d, pair) < (bd, bp)) {
                    best = Some((d, pair, a, b));
                }
            }
        }
        let (height, _, a, b) = best.expect("at least two clusters");
        let (cb_id, cb) = clusters.remove(b);
        let (ca_id, ca) = &mut clusters[a];
        let (left, right) = if ca.iter().min() < cb.iter().min() {
            (*ca_id, cb_id)
        } else {
            (cb_id, *ca_id)
        };
        merges.push(Merge {
            left,
            right,
            height,
        });
        ca.extend(cb);
        *ca_id = n + merges.len() - 1;
    }
    MergeTree::new(leaves, merges)
}

/// A partition of the leaves into `min(k, N)` contiguous clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub k: usize,
    /// Member rows of each cluster, clusters ordered left to right.
    pub clusters: Vec<Vec<usize>>,
}

/// Undoes the last `min(k, N) - 1` merges of `tree`.
pub fn cut(tree: &MergeTree, k: usize) -> Result<Cut> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let n = tree.n_leaves();
    let keep = n.saturating_sub(k.min(n).max(1));
    let mut is_top = vec![false; tree.n_nodes()];
    is_top[..n].fill(true);
    for (j, m) in tree.merges()[..keep].iter().enumerate() {
        is_top[m.left] = false;
        is_top[m.right] = false;
        is_top[n + j] = true;
    }
    let mut tops: Vec<usize> = (0..n + keep).filter(|&v| is_top[v]).collect();
    tops.sort_by_key(|&v| tree.span(v).0);
    Ok(Cut {
        k,
        clusters: tops.into_iter().map(|v| tree.rows(v)).collect(),
    })
}
