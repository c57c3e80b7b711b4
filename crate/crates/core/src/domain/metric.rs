use std::fmt;

use serde::{Deserialize, Serialize};

use super::Universe;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Built-in distance constructions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    /// `|i - j|` on universe positions.
    Ordinal,
    /// 1 between any two distinct items.
    Uniform,
    /// `|rank[i] - rank[j]|` for a permutation `rank` of `0..n`.
    Ranking(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    NonNegativity,
    IdentityOfIndiscernibles,
    Symmetry,
    TriangleInequality,
}

/// A failed axiom together with the indices that witness it. Triangle
/// violations are reported as `(i, j, k)` with `d(i,k) > d(i,j) + d(j,k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub indices: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {:?}", self.axiom, self.indices)
    }
}

/// Dense pairwise distance table over universe indices.
#[derive(Debug, Clone)]
pub struct Metric<T = f64> {
    size: usize,
    dist: Vec<T>,
    // set by constructors that produce a metric by construction
    known_valid: bool,
}

impl<T: PartialEq> PartialEq for Metric<T> {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.dist == other.dist
    }
}

impl<T: Scalar> Metric<T> {
    pub fn build(universe: &Universe, kind: &MetricKind) -> Result<Self> {
        let n = universe.size();
        match kind {
            MetricKind::Ordinal => Ok(Self::ordinal(n)),
            MetricKind::Uniform => Ok(Self::uniform(n)),
            MetricKind::Ranking(rank) => {
                if rank.len() != n {
                    return Err(Error::InvalidRankVector(format!(
                        "length {} does not match universe size {n}",
                        rank.len()
                    )));
                }
                Self::ranking(rank)
            }
        }
    }

    pub fn ordinal(n: usize) -> Self {
        Self::from_fn(n, |i, j| T::from_usize(i.abs_diff(j)).unwrap()).trusted()
    }

    pub fn uniform(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::zero() } else { T::one() }).trusted()
    }

    fn trusted(mut self) -> Self {
        self.known_valid = true;
        self
    }

    /// `rank[i]` is the position of item `i` in the order.
    pub fn ranking(rank: &[usize]) -> Result<Self> {
        let n = rank.len();
        let mut seen = vec![false; n];
        for &r in rank {
            if r >= n || seen[r] {
                return Err(Error::InvalidRankVector(format!(
                    "{rank:?} is not a permutation of 0..{n}"
                )));
            }
            seen[r] = true;
        }
        Ok(Self::from_fn(n, |i, j| {
            T::from_usize(rank[i].abs_diff(rank[j])).unwrap()
        })
        .trusted())
    }

    /// Ranking metric for an ordering listed item-by-item, i.e. `order[p]` is
    /// the item at position `p`.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let mut rank = vec![usize::MAX; order.len()];
        for (pos, &item) in order.iter().enumerate() {
            if item >= order.len() || rank[item] != usize::MAX {
                return Err(Error::InvalidRankVector(format!(
                    "{order:?} is not a permutation of 0..{}",
                    order.len()
                )));
            }
            rank[item] = pos;
        }
        Self::ranking(&rank)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut dist = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                dist.push(f(i, j));
            }
        }
        Self {
            size: n,
            dist,
            known_valid: false,
        }
    }

    /// Wraps an arbitrary square table. Only the shape is checked; use
    /// [`Metric::validate`] for the axioms.
    pub fn from_table(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            dist.extend(row);
        }
        Ok(Self {
            size: n,
            dist,
            known_valid: false,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.dist[i * self.size + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.dist[i * self.size..(i + 1) * self.size]
    }

    pub fn max_distance(&self) -> T {
        self.dist.iter().copied().fold(T::zero(), T::max)
    }

    /// Checks all four metric axioms exhaustively (O(n^3)). Empty iff valid.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.size;
        let tol = T::tolerance();
        let mut out = Vec::new();
        let mut push = |axiom, indices: &[usize]| {
            out.push(Violation {
                axiom,
                indices: indices.to_vec(),
            })
        };
        for i in 0..n {
            for j in 0..n {
                let d = self.get(i, j);
                if !(d >= -tol) || !d.is_finite() {
                    push(Axiom::NonNegativity, &[i, j]);
                }
                if i == j {
                    if d.abs() > tol {
                        push(Axiom::IdentityOfIndiscernibles, &[i, j]);
                    }
                } else if d <= tol {
                    push(Axiom::IdentityOfIndiscernibles, &[i, j]);
                }
                if i < j && (d - self.get(j, i)).abs() > tol {
                    push(Axiom::Symmetry, &[i, j]);
                }
            }
        }
        for i in 0..n {
            let row_i = self.row(i);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let dij = row_i[j];
                let row_j = self.row(j);
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    if row_i[k] > dij + row_j[k] + tol {
                        push(Axiom::TriangleInequality, &[i, j, k]);
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Errors with the first few violations unless the table is a metric.
    /// Skips the O(n^3) scan for tables built as metrics by construction.
    pub fn ensure_valid(&self) -> Result<()> {
        if self.known_valid {
            return Ok(());
        }
        let violations = self.validate();
        if violations.is_empty() {
            return Ok(());
        }
        let shown: Vec<String> = violations.iter().take(3).map(|v| v.to_string()).collect();
        Err(Error::InvalidMetric(format!(
            "{} violation(s): {}",
            violations.len(),
            shown.join("; ")
        )))
    }

    /// Entry-wise `max(d, other)`; a metric whenever both inputs are.
    pub fn pointwise_max(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::SizeMismatch {
                expected: self.size,
                actual: other.size,
            });
        }
        Ok(Self {
            size: self.size,
            dist: self
                .dist
                .iter()
                .zip(&other.dist)
                .map(|(&a, &b)| a.max(b))
                .collect(),
            known_valid: self.known_valid && other.known_valid,
        })
    }
}
