//! Ordinal margin matrices stored as skew-symmetric even-integer weight matrices.
//!
//! The order on ordered pairs is induced by the weights: `(a, b)` is stronger
//! than `(c, d)` exactly when `w[a][b] > w[c][d]`. Every strict weak order on
//! pairs that satisfies ordinal skew-symmetry has such a representation, so
//! the weight matrix is used as the single canonical form throughout the crate.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

pub type Alternative = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrdinalMarginMatrix {
    n: usize,
    w: Vec<i64>,
}

impl OrdinalMarginMatrix {
    /// Validates a square weight matrix, collecting every violated invariant.
    pub fn from_weights(n: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut violations = Vec::new();
        if rows.len() != n {
            violations.push(Violation::BadShape { expected: n, row: None, found: rows.len() });
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                violations.push(Violation::BadShape { expected: n, row: Some(r), found: row.len() });
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidMatrix(violations));
        }
        Self::from_flat(n, rows.iter().flatten().copied().collect())
    }

    /// Same as [`from_weights`](Self::from_weights) for a row-major buffer.
    pub fn from_flat(n: usize, w: Vec<i64>) -> Result<Self> {
        if n == 0 || w.len() != n * n {
            return Err(Error::InvalidMatrix(vec![Violation::BadShape {
                expected: n * n,
                row: None,
                found: w.len(),
            }]));
        }
        let mut violations = Vec::new();
        for a in 0..n {
            let d = w[a * n + a];
            if d != 0 {
                violations.push(Violation::NonZeroDiagonal { a, value: d });
            }
            for b in 0..n {
                if a == b {
                    continue;
                }
                let ab = w[a * n + b];
                let ba = w[b * n + a];
                if a < b && ab != -ba {
                    violations.push(Violation::NotSkewSymmetric { a, b, ab, ba });
                }
                if ab % 2 != 0 {
                    violations.push(Violation::OddEntry { a, b, value: ab });
                }
            }
        }
        if violations.is_empty() {
            Ok(OrdinalMarginMatrix { n, w })
        } else {
            Err(Error::InvalidMatrix(violations))
        }
    }

    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "a margin matrix needs at least one alternative");
        OrdinalMarginMatrix { n, w: vec![0; n * n] }
    }

    /// Builds a tournament from edges listed weakest first; the `k`-th edge
    /// (1-based) gets weight `2k`.
    pub fn from_ranked_edges(n: usize, edges: &[(Alternative, Alternative)]) -> Result<Self> {
        let mut w = vec![0; n * n];
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::NoSuchAlternative(a.max(b), n));
            }
            let weight = 2 * (k as i64 + 1);
            w[a * n + b] = weight;
            w[b * n + a] = -weight;
        }
        Self::from_flat(n, w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, a: Alternative, b: Alternative) -> i64 {
        self.w[a * self.n + b]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.w.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    /// `(a, b)` is strictly stronger than `(c, d)`.
    #[inline]
    pub fn stronger(&self, (a, b): (Alternative, Alternative), (c, d): (Alternative, Alternative)) -> bool {
        self.weight(a, b) > self.weight(c, d)
    }

    /// True iff no two distinct off-diagonal pairs tie, which for a
    /// skew-symmetric matrix means every |w[a][b]| is nonzero and distinct.
    pub fn is_linear(&self) -> bool {
        let mut seen = BTreeSet::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                let v = self.weight(a, b).abs();
                if v == 0 || !seen.insert(v) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_linear(&self) -> Result<LinearOrdinalMarginMatrix> {
        LinearOrdinalMarginMatrix::new(self.clone())
    }

    pub fn majority_graph(&self) -> MajorityGraph {
        let n = self.n;
        let adj = (0..n * n).map(|i| self.w[i] > 0).collect();
        MajorityGraph { n, adj }
    }

    /// Deletes alternative `b`. The returned id map sends each new id to the
    /// original id it came from.
    pub fn restrict(&self, b: Alternative) -> Result<(Self, Vec<Alternative>)> {
        if b >= self.n {
            return Err(Error::NoSuchAlternative(b, self.n));
        }
        if self.n == 1 {
            return Err(Error::LastAlternative);
        }
        let keep: Vec<_> = (0..self.n).filter(|&x| x != b).collect();
        Ok((self.submatrix(&keep), keep))
    }

    /// The matrix restricted to `keep`, relabelled densely in the given order.
    pub fn submatrix(&self, keep: &[Alternative]) -> Self {
        let m = keep.len();
        let mut w = Vec::with_capacity(m * m);
        for &a in keep {
            for &b in keep {
                w.push(self.weight(a, b));
            }
        }
        OrdinalMarginMatrix { n: m, w }
    }

    /// The reversed matrix: every pair comparison flips.
    pub fn reverse(&self) -> Self {
        OrdinalMarginMatrix { n: self.n, w: self.w.iter().map(|&x| -x).collect() }
    }

    /// Relabels alternatives so that old alternative `a` becomes `perm[a]`.
    pub fn relabel(&self, perm: &[Alternative]) -> Self {
        let n = self.n;
        assert_eq!(perm.len(), n);
        let mut w = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                w[perm[a] * n + perm[b]] = self.weight(a, b);
            }
        }
        OrdinalMarginMatrix { n, w }
    }

    /// Canonical weights for the same order on pairs: zero-margin pairs get
    /// 0, and the successive classes of positive pairs get 2, 4, 6, ...
    pub fn normalized(&self) -> Self {
        let positives: BTreeSet<i64> = self.w.iter().copied().filter(|&x| x > 0).collect();
        let rank = |v: i64| -> i64 {
            let r = positives.range(..=v.abs()).count() as i64;
            2 * r * v.signum()
        };
        OrdinalMarginMatrix { n: self.n, w: self.w.iter().map(|&x| rank(x)).collect() }
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalized()
    }

    /// Both matrices induce the same order on pairs.
    pub fn same_ordering(&self, other: &Self) -> bool {
        self.n == other.n && self.normalized() == other.normalized()
    }

    /// Positive-margin edges sorted from weakest to strongest.
    pub fn edges_by_strength(&self) -> Vec<(Alternative, Alternative)> {
        let mut edges = self.majority_graph().edges();
        edges.sort_by_key(|&(a, b)| (self.weight(a, b), a, b));
        edges
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(&fs::read_to_string(path)?)?;
        file.into_matrix()
    }
}

/// An ordinal margin matrix whose off-diagonal pairs are totally ordered.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearOrdinalMarginMatrix(OrdinalMarginMatrix);

impl LinearOrdinalMarginMatrix {
    pub fn new(m: OrdinalMarginMatrix) -> Result<Self> {
        if m.is_linear() {
            Ok(LinearOrdinalMarginMatrix(m))
        } else {
            Err(Error::NotLinear)
        }
    }

    pub fn from_ranked_edges(n: usize, edges: &[(Alternative, Alternative)]) -> Result<Self> {
        Self::new(OrdinalMarginMatrix::from_ranked_edges(n, edges)?)
    }

    pub fn as_matrix(&self) -> &OrdinalMarginMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> OrdinalMarginMatrix {
        self.0
    }

    pub fn reverse(&self) -> Self {
        LinearOrdinalMarginMatrix(self.0.reverse())
    }

    pub fn relabel(&self, perm: &[Alternative]) -> Self {
        LinearOrdinalMarginMatrix(self.0.relabel(perm))
    }

    pub fn normalized(&self) -> Self {
        LinearOrdinalMarginMatrix(self.0.normalized())
    }
}

impl std::ops::Deref for LinearOrdinalMarginMatrix {
    type Target = OrdinalMarginMatrix;

    fn deref(&self) -> &OrdinalMarginMatrix {
        &self.0
    }
}

impl From<LinearOrdinalMarginMatrix> for OrdinalMarginMatrix {
    fn from(m: LinearOrdinalMarginMatrix) -> Self {
        m.0
    }
}

/// Directed graph with an edge `a -> b` whenever `w[a][b] > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorityGraph {
    n: usize,
    adj: Vec<bool>,
}

impl MajorityGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, a: Alternative, b: Alternative) -> bool {
        self.adj[a * self.n + b]
    }

    pub fn edges(&self) -> Vec<(Alternative, Alternative)> {
        let n = self.n;
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.has_edge(a, b))
            .collect()
    }

    pub fn is_tournament(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.has_edge(a, b) || self.has_edge(b, a)))
    }
}

/// On-disk matrix format: `{"n": 4, "weights": [[...], ...], "labels": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub weights: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl MatrixFile {
    pub fn new(m: &OrdinalMarginMatrix) -> Self {
        MatrixFile { n: m.n(), weights: m.rows(), labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    /// Validates and converts to canonical (normalized) weights.
    pub fn into_matrix(self) -> Result<OrdinalMarginMatrix> {
        if let Some(labels) = &self.labels {
            if labels.len() != self.n {
                return Err(Error::InvalidMatrix(vec![Violation::BadShape {
                    expected: self.n,
                    row: None,
                    found: labels.len(),
                }]));
            }
        }
        Ok(OrdinalMarginMatrix::from_weights(self.n, &self.weights)?.normalized())
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .weights
            .iter()
            .map(|r| format!("    {}", serde_json::to_string(r).expect("integers serialize")))
            .collect();
        let mut out = format!("{{\n  \"n\": {},\n  \"weights\": [\n{}\n  ]", self.n, rows.join(",\n"));
        if let Some(labels) = &self.labels {
            out.push_str(&format!(",\n  \"labels\": {}", serde_json::to_string(labels).expect("strings serialize")));
        }
        out.push_str("\n}\n");
        out
    }
}
