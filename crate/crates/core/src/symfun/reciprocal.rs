use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::identities::coefficient_bound;
use crate::error::{Error, Result};
use crate::exactmat::IntPolynomial;
use crate::parallel::{map_ordered, Execution};
use crate::rational::int;

pub const DEFAULT_ENUMERATION_DEGREE_CAP: usize = 6;

/// Monic palindromic integer polynomial of even positive degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReciprocalPoly {
    poly: IntPolynomial,
}

impl ReciprocalPoly {
    pub fn new(poly: IntPolynomial) -> Result<Self> {
        let n = poly.degree();
        if poly.is_zero() || n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Input(format!("reciprocal polynomial needs even positive degree, got {poly}")));
        }
        if !poly.is_monic() {
            return Err(Error::Input(format!("{poly} is not monic")));
        }
        let c = poly.coefficients();
        if (0..=n).any(|i| c[i] != c[n - i]) {
            return Err(Error::Input(format!("{poly} is not palindromic")));
        }
        Ok(ReciprocalPoly { poly })
    }

    /// From the free coefficients `c_1..=c_{N/2}` (coefficient of `x^i`).
    pub fn from_half(degree: usize, half: &[BigInt]) -> Result<Self> {
        if degree == 0 || !degree.is_multiple_of(2) || half.len() != degree / 2 {
            return Err(Error::Input(format!("{} free coefficients for degree {degree}", half.len())));
        }
        let mut c = vec![BigInt::one(); degree + 1];
        for (i, v) in half.iter().enumerate() {
            c[i + 1] = v.clone();
            c[degree - i - 1] = v.clone();
        }
        ReciprocalPoly::new(IntPolynomial::new(c))
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn coefficients(&self) -> &[BigInt] {
        self.poly.coefficients()
    }

    pub fn as_poly(&self) -> &IntPolynomial {
        &self.poly
    }

    /// `q(-x)`; still monic and reciprocal because the degree is even.
    pub fn negate_variable(&self) -> ReciprocalPoly {
        let c = self.coefficients().iter().enumerate().map(|(i, v)| if i % 2 == 0 { v.clone() } else { -v }).collect();
        ReciprocalPoly { poly: IntPolynomial::new(c) }
    }

    /// `x^N q(1/x)`, the identity on palindromic polynomials.
    pub fn reciprocal(&self) -> ReciprocalPoly {
        let c: Vec<BigInt> = self.coefficients().iter().rev().cloned().collect();
        ReciprocalPoly { poly: IntPolynomial::new(c) }
    }
}

/// Does `q` have `|p_k| <= delta` for every `k <= window`?
///
/// Runs the coefficient recurrence in `i128` and rejects on the first
/// violation; an overflow can only come from a power sum far above `delta`.
fn power_sums_within(c: &[i128], delta: i128, window: usize) -> bool {
    let n = c.len() - 1;
    let mut p: Vec<i128> = Vec::with_capacity(window);
    for j in 1..=window {
        let mut acc: i128 = 0;
        for i in 1..=(j - 1).min(n) {
            match c[n - i].checked_mul(p[j - i - 1]).and_then(|t| acc.checked_sub(t)) {
                Some(v) => acc = v,
                None => return false,
            }
        }
        if j <= n {
            match c[n - j].checked_mul(j as i128).and_then(|t| acc.checked_sub(t)) {
                Some(v) => acc = v,
                None => return false,
            }
        }
        if acc.abs() > delta {
            return false;
        }
        p.push(acc);
    }
    true
}

/// All monic reciprocal integer polynomials of degree `N` with
/// `|p_k| <= delta` for every `k <= N(N+1)`.
///
/// The free coefficient `c_i` (`i <= N/2`) equals `±e_i`, so it ranges over
/// `|c_i| <= floor(min(B_i, B_{N-i}))` with `B_n = coefficient_bound(n, δ)`.
/// Output is sorted by coefficient vector, lowest degree first.
pub fn enumerate_bounded_reciprocal(degree: usize, delta: u64) -> Result<Vec<ReciprocalPoly>> {
    enumerate_bounded_reciprocal_with(degree, delta, DEFAULT_ENUMERATION_DEGREE_CAP, Execution::Parallel)
}

pub fn enumerate_bounded_reciprocal_with(
    degree: usize,
    delta: u64,
    degree_cap: usize,
    exec: Execution,
) -> Result<Vec<ReciprocalPoly>> {
    if degree == 0 || !degree.is_multiple_of(2) {
        return Err(Error::Input(format!("degree must be even and positive, got {degree}")));
    }
    if degree > degree_cap {
        return Err(Error::DimensionCap { dim: degree, cap: degree_cap });
    }
    let half = degree / 2;
    let delta_q = int(delta as i64);
    let mut radii = Vec::with_capacity(half);
    for i in 1..=half {
        let b = coefficient_bound(i, &delta_q)?.min(coefficient_bound(degree - i, &delta_q)?);
        let radius = b.floor().to_integer().to_i64().ok_or_else(|| Error::Input("coefficient box too large".into()))?;
        radii.push(radius);
    }
    let sizes: Vec<u64> = radii.iter().map(|&r| 2 * r as u64 + 1).collect();
    let total: u64 = sizes.iter().product();
    let window = degree * (degree + 1);
    let delta = delta as i128;

    const SHARD: u64 = 4096;
    let shards: Vec<(u64, u64)> = (0..total.div_ceil(SHARD)).map(|s| (s * SHARD, ((s + 1) * SHARD).min(total))).collect();
    let found = map_ordered(shards, exec, |(lo, hi)| {
        let mut hits = Vec::new();
        let mut coeffs = vec![1i128; degree + 1];
        for index in lo..hi {
            let mut rest = index;
            for (i, (&size, &radius)) in sizes.iter().zip(&radii).enumerate() {
                let (q, digit) = rest.div_rem(&size);
                rest = q;
                let v = digit as i128 - radius as i128;
                coeffs[i + 1] = v;
                coeffs[degree - i - 1] = v;
            }
            if power_sums_within(&coeffs, delta, window) {
                hits.push(coeffs.clone());
            }
        }
        hits
    });

    let mut out = found
        .into_iter()
        .flatten()
        .map(|c| ReciprocalPoly::new(IntPolynomial::new(c.into_iter().map(BigInt::from).collect())))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}
