use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// A set of coordinate indices in `[1, dim]`, kept sorted and duplicate-free.
///
/// Indices are one-based to match the block numbering used throughout the
/// Penner analysis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportSet {
    dim: usize,
    members: Vec<usize>,
}

impl SupportSet {
    pub fn new(dim: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&i| i == 0 || i > dim) {
            return Err(Error::Input(format!("support index {bad} outside [1, {dim}]")));
        }
        Ok(SupportSet { dim, members })
    }

    pub fn empty(dim: usize) -> Self {
        SupportSet { dim, members: Vec::new() }
    }

    /// The indices `lo..=hi`, clipped to `[1, dim]`.
    pub fn interval(dim: usize, lo: usize, hi: usize) -> Self {
        SupportSet { dim, members: (lo.max(1)..=hi.min(dim)).collect() }
    }

    /// Support of a vector.
    pub fn of_vector<T: Zero>(v: &[T]) -> Self {
        SupportSet {
            dim: v.len(),
            members: v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i + 1).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// 0/1 indicator vector.
    pub fn indicator<T: From<u8>>(&self) -> Vec<T> {
        let mut v: Vec<T> = (0..self.dim).map(|_| T::from(0)).collect();
        for &i in &self.members {
            v[i - 1] = T::from(1);
        }
        v
    }
}

/// `{ i : pattern[i][j] != 0 for some j in s }`: the support of `pattern`
/// applied to any nonnegative vector that is strictly positive exactly on
/// `s`.
pub fn support_propagate(pattern: &IntMatrix, s: &SupportSet) -> Result<SupportSet> {
    if !pattern.is_square() {
        return Err(Error::NotSquare { rows: pattern.rows(), cols: pattern.cols() });
    }
    if pattern.rows() != s.dim() {
        return Err(Error::DimensionMismatch(format!(
            "support of dimension {} against a {}x{} pattern",
            s.dim(),
            pattern.rows(),
            pattern.cols()
        )));
    }
    let members = (0..pattern.rows())
        .filter(|&i| s.members().iter().any(|&j| !pattern.get(i, j - 1).is_zero()))
        .map(|i| i + 1);
    SupportSet::new(s.dim(), members)
}

/// Smallest `t <= cap` with every entry of `a^t` strictly positive.
///
/// Works on the boolean pattern, which is exact for nonnegative matrices.
pub fn positivity_index(a: &IntMatrix, cap: u64) -> Result<Option<u64>> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !a.has_nonneg_entries() {
        return Err(Error::Input("positivity_index needs a nonnegative matrix".into()));
    }
    let base = a.pattern();
    let mut power = base.clone();
    for t in 1..=cap {
        if power.is_full() {
            return Ok(Some(t));
        }
        if t < cap {
            power = power.mul(&base);
        }
    }
    Ok(None)
}

/// Wielandt's bound `(n-1)^2 + 1` on the primitivity index of an `n x n`
/// primitive matrix.
pub fn wielandt_bound(dim: usize) -> u64 {
    let d = dim as u64;
    (d.saturating_sub(1)).pow(2) + 1
}
