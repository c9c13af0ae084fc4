use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::matrix::{mat_mul, IntMatrix};
use super::polynomial::IntPolynomial;
use super::support::{positivity_index, wielandt_bound};
use crate::error::{Error, Result};

pub const DEFAULT_CHAR_POLY_CAP: usize = 16;
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;

/// Result of a Perron power iteration.
///
/// `lower`/`upper` are the Collatz–Wielandt bounds `min (Ax)_i/x_i` and
/// `max (Ax)_i/x_i` at the final positive iterate; the spectral radius lies
/// between them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerronEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

/// Spectral radius of a primitive nonnegative matrix to absolute accuracy
/// `tol`.
pub fn perron_eigenvalue(a: &IntMatrix, tol: f64) -> Result<f64> {
    perron_estimate(a, tol, DEFAULT_MAX_ITERATIONS).map(|e| e.value)
}

/// Power iteration from the all-ones vector.
///
/// Stops once successive Rayleigh quotients differ by less than `tol/2`, the
/// residual `|Ax - rho x| / |x|` is below `tol`, and the Collatz–Wielandt
/// bracket is narrower than `tol`.
pub fn perron_estimate(a: &IntMatrix, tol: f64, max_iterations: usize) -> Result<PerronEstimate> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Input(format!("tolerance must be positive, got {tol}")));
    }
    if !a.has_nonneg_entries() {
        return Err(Error::Contract("Perron root requested for a matrix with negative entries".into()));
    }
    let n = a.rows();
    if positivity_index(a, wielandt_bound(n))?.is_none() {
        return Err(Error::Contract("matrix is not primitive".into()));
    }

    let dense: Vec<f64> = a.entries().iter().map(|e| e.to_f64().unwrap_or(f64::INFINITY)).collect();
    let apply = |x: &[f64]| -> Vec<f64> {
        dense.chunks(n).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    };

    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut previous = f64::NAN;
    for iteration in 1..=max_iterations {
        let y = apply(&x);
        // x has unit norm.
        let rho: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let residual = y.iter().zip(&x).map(|(yi, xi)| (yi - rho * xi).powi(2)).sum::<f64>().sqrt();
        let (lower, upper) = y.iter().zip(&x).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (yi, xi)| {
            let q = yi / xi;
            (lo.min(q), hi.max(q))
        });
        if (rho - previous).abs() < tol / 2.0 && residual < tol && upper - lower < tol {
            return Ok(PerronEstimate { value: rho.clamp(lower, upper), lower, upper, iterations: iteration });
        }
        previous = rho;
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = y.into_iter().map(|v| v / norm).collect();
    }
    Err(Error::NoConvergence { iterations: max_iterations })
}

/// Characteristic polynomial `det(xI - a)` with the default dimension cap.
pub fn char_poly(a: &IntMatrix) -> Result<IntPolynomial> {
    char_poly_with_cap(a, DEFAULT_CHAR_POLY_CAP)
}

/// Faddeev–LeVerrier trace recurrence in exact integer arithmetic:
/// `M_1 = I`, `c_{n-k} = -tr(A M_k) / k`, `M_{k+1} = A M_k + c_{n-k} I`.
pub fn char_poly_with_cap(a: &IntMatrix, cap: usize) -> Result<IntPolynomial> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if n > cap {
        return Err(Error::DimensionCap { dim: n, cap });
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::from(1);
    let mut m = IntMatrix::identity(n);
    for k in 1..=n {
        let am = mat_mul(a, &m)?;
        let (c, r) = (-am.trace()).div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return Err(Error::Invariant(format!("trace recurrence division by {k} was not exact")));
        }
        if k < n {
            m = am;
            for i in 0..n {
                let d = m.get(i, i) + &c;
                m.set(i, i, d);
            }
        }
        coeffs[n - k] = c;
    }
    Ok(IntPolynomial::new(coeffs))
}

/// Determinant, read off the characteristic polynomial.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    let n = a.rows();
    let p = char_poly_with_cap(a, n.max(DEFAULT_CHAR_POLY_CAP))?;
    let c0 = p.coeff(0);
    Ok(if n.is_multiple_of(2) { c0 } else { -c0 })
}
