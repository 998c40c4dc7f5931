//! Shared data model: datasets, 1D merge trees, pruned trees, relevance
//! reports and slice descriptions.
//!
//! All types are immutable once built. Rows are always referenced by their
//! 0-based index in the ingested [`Dataset`], so anything derived from a
//! slice can be mapped back to the full feature space.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `N x M` table of finite reals with unique column names and optional
/// integer labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDataset", into = "RawDataset")]
pub struct Dataset {
    names: Vec<String>,
    values: Vec<f64>,
    n_rows: usize,
    labels: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct RawDataset {
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<i64>>,
}

impl TryFrom<RawDataset> for Dataset {
    type Error = Error;

    fn try_from(raw: RawDataset) -> Result<Self> {
        Dataset::new(raw.names, raw.rows, raw.labels)
    }
}

impl From<Dataset> for RawDataset {
    fn from(ds: Dataset) -> Self {
        let rows = ds.rows().map(<[f64]>::to_vec).collect();
        RawDataset {
            names: ds.names,
            rows,
            labels: ds.labels,
        }
    }
}

/// Validates a rectangular table and wraps it as a [`Dataset`].
pub fn validate_dataset(names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Dataset> {
    Dataset::new(names, rows, None)
}

impl Dataset {
    pub fn new(names: Vec<String>, rows: Vec<Vec<f64>>, labels: Option<Vec<i64>>) -> Result<Self> {
        let m = names.len();
        let mut values = Vec::with_capacity(rows.len() * m);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Ragged {
                    row: r,
                    expected: m,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::from_flat(names, values, rows.len(), labels)
    }

    /// Builds a dataset from row-major values.
    pub fn from_flat(
        names: Vec<String>,
        values: Vec<f64>,
        n_rows: usize,
        labels: Option<Vec<i64>>,
    ) -> Result<Self> {
        let m = names.len();
        if m == 0 {
            return Err(Error::NoColumns);
        }
        let mut seen = HashSet::with_capacity(m);
        for (c, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::EmptyColumnName(c));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateColumn(name.clone()));
            }
        }
        if values.len() != n_rows * m {
            return Err(Error::DimensionMismatch {
                expected: n_rows * m,
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: i / m,
                column: i % m,
            });
        }
        if let Some(labels) = &labels {
            if labels.len() != n_rows {
                return Err(Error::LabelCount {
                    expected: n_rows,
                    found: labels.len(),
                });
            }
        }
        Ok(Dataset {
            names,
            values,
            n_rows,
            labels,
        })
    }

    /// Same shape, names and labels; new values. Callers guarantee finiteness.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Dataset {
            names: self.names.clone(),
            values,
            n_rows: self.n_rows,
            labels: self.labels.clone(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_cols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let m = self.n_cols();
        &self.values[row * m..(row + 1) * m]
    }

    pub fn rows(&self) -> impl DoubleEndedIterator<Item = &[f64]> + ExactSizeIterator + '_ {
        // chunks_exact panics on 0, but n_cols is always >= 1
        self.values.chunks_exact(self.n_cols())
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.rows().map(|r| r[col]).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Resolves a column given either its name or its 0-based index.
    pub fn resolve_column(&self, key: &str) -> Result<usize> {
        if let Some(i) = self.column_index(key) {
            return Ok(i);
        }
        match key.parse::<usize>() {
            Ok(i) if i < self.n_cols() => Ok(i),
            _ => Err(Error::UnknownColumn(key.to_string())),
        }
    }
}

/// A leaf of a 1D dendrogram: its coordinate and the dataset row it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Leaf {
    pub coord: f64,
    pub row: usize,
}

/// Node `left` and node `right` joined at `height`. Leaves are nodes
/// `0..N`; the `k`-th merge creates node `N + k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
}

/// Single-linkage dendrogram of a one-dimensional signal.
///
/// Leaves are stored in ascending coordinate order (row index breaks ties),
/// so every node covers a contiguous run of leaf positions and every merge
/// joins two adjacent runs, `left` being the lower one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMergeTree")]
pub struct MergeTree {
    leaves: Vec<Leaf>,
    merges: Vec<Merge>,
    #[serde(skip)]
    spans: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct RawMergeTree {
    leaves: Vec<Leaf>,
    merges: Vec<Merge>,
}

impl TryFrom<RawMergeTree> for MergeTree {
    type Error = Error;

    fn try_from(raw: RawMergeTree) -> Result<Self> {
        MergeTree::new(raw.leaves, raw.merges)
    }
}

impl MergeTree {
    /// Checks every structural invariant and builds the tree.
    pub fn new(leaves: Vec<Leaf>, merges: Vec<Merge>) -> Result<Self> {
        let n = leaves.len();
        let bad = |msg: String| Err(Error::InvalidTree(msg));
        if merges.len() != n.saturating_sub(1) {
            return bad(format!("{} merges for {} leaves", merges.len(), n));
        }
        if let Some(i) = leaves.iter().position(|l| !l.coord.is_finite()) {
            return bad(format!("non-finite leaf coordinate at position {i}"));
        }
        for (i, pair) in leaves.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let ordered = a.coord < b.coord || (a.coord == b.coord && a.row < b.row);
            if !ordered {
                return bad(format!(
                    "leaves not in ascending order at position {}",
                    i + 1
                ));
            }
        }
        let mut spans: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        let mut used = vec![false; n + merges.len()];
        let mut last = f64::NEG_INFINITY;
        for (k, m) in merges.iter().enumerate() {
            let id = n + k;
            if !m.height.is_finite() || m.height < 0.0 {
                return bad(format!("merge {k} has invalid height {}", m.height));
            }
            if m.height < last {
                return bad(format!("merge {k} height decreases"));
            }
            last = m.height;
            for child in [m.left, m.right] {
                if child >= id {
                    return bad(format!("merge {k} references later node {child}"));
                }
                if std::mem::replace(&mut used[child], true) {
                    return bad(format!("node {child} merged twice"));
                }
            }
            let (l, r) = (spans[m.left], spans[m.right]);
            if l.1 + 1 != r.0 {
                return bad(format!("merge {k} does not join adjacent runs"));
            }
            spans.push((l.0, r.1));
        }
        Ok(MergeTree {
            leaves,
            merges,
            spans,
        })
    }

    pub(crate) fn from_parts_unchecked(leaves: Vec<Leaf>, merges: Vec<Merge>) -> Self {
        let n = leaves.len();
        let mut spans: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        for m in &merges {
            spans.push((spans[m.left].0, spans[m.right].1));
        }
        MergeTree {
            leaves,
            merges,
            spans,
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.leaves.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.spans.len()
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Height of the final merge (`H`), or 0 when there are fewer than two leaves.
    pub fn height(&self) -> f64 {
        self.merges.last().map_or(0.0, |m| m.height)
    }

    pub fn root(&self) -> Option<usize> {
        self.spans.len().checked_sub(1)
    }

    /// Inclusive range of leaf positions covered by `node`.
    pub fn span(&self, node: usize) -> (usize, usize) {
        self.spans[node]
    }

    pub fn size(&self, node: usize) -> usize {
        let (a, b) = self.spans[node];
        b - a + 1
    }

    /// Height at which `node` was formed; 0 for leaves.
    pub fn node_height(&self, node: usize) -> f64 {
        node.checked_sub(self.n_leaves())
            .map_or(0.0, |k| self.merges[k].height)
    }

    pub fn members(&self, node: usize) -> &[Leaf] {
        let (a, b) = self.spans[node];
        &self.leaves[a..=b]
    }

    pub fn rows(&self, node: usize) -> Vec<usize> {
        self.members(node).iter().map(|l| l.row).collect()
    }

    pub fn children(&self, node: usize) -> Option<(usize, usize)> {
        node.checked_sub(self.n_leaves())
            .map(|k| (self.merges[k].left, self.merges[k].right))
    }

    /// Parent of every node; `None` for the root.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let n = self.n_leaves();
        let mut parents = vec![None; self.n_nodes()];
        for (k, m) in self.merges.iter().enumerate() {
            parents[m.left] = Some(n + k);
            parents[m.right] = Some(n + k);
        }
        parents
    }
}

/// One contracted leaf branch of a [`PrunedTree`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafBranch {
    /// Topmost node of the contracted chain.
    pub node: usize,
    /// Source rows under `node`, in ascending coordinate order.
    pub rows: Vec<usize>,
    pub formation_height: f64,
    pub split_height: f64,
}

impl LeafBranch {
    pub fn length(&self) -> f64 {
        self.split_height - self.formation_height
    }
}

/// A merge tree with streak subtrees removed and absorption chains contracted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrunedTree {
    /// Minimum leaf count `n = N / alpha` for a node to qualify.
    pub threshold: f64,
    pub root_height: f64,
    /// Leaf branches in ascending coordinate order.
    pub branches: Vec<LeafBranch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelevanceReport {
    pub rho: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub occurred: bool,
    /// Fewer than two leaves, or all points identical (`H = 0`).
    #[serde(default)]
    pub degenerate: bool,
    pub threshold: f64,
    /// Leaf branches sorted by length, longest first.
    pub branches: Vec<LeafBranch>,
}

/// An axis-aligned hypercylinder: all features except `free_index` are pinned
/// to `anchor`, and points within `radius` of that line are kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceSpec {
    pub free_index: usize,
    pub anchor: Vec<f64>,
    pub radius: f64,
    #[serde(default)]
    pub min_points: usize,
}

impl SliceSpec {
    pub fn new(free_index: usize, anchor: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "radius must be finite and positive, got {radius}"
            )));
        }
        if anchor.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "anchor values must be finite".into(),
            ));
        }
        Ok(SliceSpec {
            free_index,
            anchor,
            radius,
            min_points: 0,
        })
    }

    pub fn with_min_points(mut self, min_points: usize) -> Self {
        self.min_points = min_points;
        self
    }

    /// Number of features of the space being sliced.
    pub fn dims(&self) -> usize {
        self.anchor.len() + 1
    }
}

/// The free-axis coordinates of the rows captured by a slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slice1D {
    coords: Vec<f64>,
    source_rows: Vec<usize>,
}

impl Slice1D {
    pub fn new(coords: Vec<f64>, source_rows: Vec<usize>) -> Result<Self> {
        if coords.len() != source_rows.len() {
            return Err(Error::DimensionMismatch {
                expected: coords.len(),
                found: source_rows.len(),
            });
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        let mut seen = HashSet::with_capacity(source_rows.len());
        if let Some(&dup) = source_rows.iter().find(|r| !seen.insert(**r)) {
            return Err(Error::InvalidParameter(format!(
                "row {dup} appears twice in slice"
            )));
        }
        Ok(Slice1D {
            coords,
            source_rows,
        })
    }

    /// A slice over a bare signal, rows numbered by position.
    pub fn from_signal(coords: Vec<f64>) -> Result<Self> {
        let rows = (0..coords.len()).collect();
        Self::new(coords, rows)
    }

    pub(crate) fn from_parts_unchecked(coords: Vec<f64>, source_rows: Vec<usize>) -> Self {
        Slice1D {
            coords,
            source_rows,
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn source_rows(&self) -> &[usize] {
        &self.source_rows
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}
