use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

pub const DEFAULT_PARTITION_CAP: usize = 30;

/// An integer partition with its `z` and sign statistics precomputed.
///
/// `z = prod_i i^{m_i} m_i!` where `m_i` counts parts equal to `i`, and
/// `eps = (-1)^{|λ| - l(λ)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
    z: BigInt,
    eps: i8,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Input("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Input(format!("parts {parts:?} are not weakly decreasing")));
        }
        let weight: usize = parts.iter().sum();
        let eps = if (weight - parts.len()).is_multiple_of(2) { 1 } else { -1 };
        let mut z = BigInt::one();
        let mut start = 0;
        while start < parts.len() {
            let part = parts[start];
            let count = parts[start..].iter().take_while(|&&p| p == part).count();
            for k in 1..=count {
                z *= BigInt::from(part) * BigInt::from(k);
            }
            start += count;
        }
        Ok(Partition { parts, z, eps })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// Number of parts equal to `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    pub fn z_lambda(&self) -> &BigInt {
        &self.z
    }

    pub fn eps_lambda(&self) -> i8 {
        self.eps
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n` in reverse-lexicographic order, `n <= 30`.
pub fn partitions_of(n: usize) -> Result<Vec<Partition>> {
    partitions_with_cap(n, DEFAULT_PARTITION_CAP)
}

pub fn partitions_with_cap(n: usize, cap: usize) -> Result<Vec<Partition>> {
    if n > cap {
        return Err(Error::DimensionCap { dim: n, cap });
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    collect(n, n, &mut current, &mut out);
    out.into_iter().map(Partition::new).collect()
}

fn collect(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        current.push(part);
        collect(remaining - part, part, current, out);
        current.pop();
    }
}
