use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::partition::partitions_of;
use super::reciprocal::ReciprocalPoly;
use crate::error::{Error, Result};
use crate::exactmat::IntPolynomial;
use crate::rational::Rational;

fn sign(exponent: usize) -> Rational {
    if exponent.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// `p_λ = p_{λ_1} ... p_{λ_l}` with `p` holding `p_1, p_2, ...`.
fn power_product(parts: &[usize], p: &[Rational]) -> Rational {
    parts.iter().map(|&k| &p[k - 1]).product()
}

/// `e_n = sum_{|λ|=n} eps_λ z_λ^{-1} p_λ`.
pub fn elementary_from_power(n: usize, p: &[Rational]) -> Result<Rational> {
    if p.len() < n {
        return Err(Error::Input(format!("need {n} power sums, got {}", p.len())));
    }
    Ok(partitions_of(n)?
        .iter()
        .map(|lambda| {
            let weight = BigRational::from_integer(lambda.z_lambda().clone()).recip();
            sign(n - lambda.length()) * weight * power_product(lambda.parts(), p)
        })
        .sum())
}

/// `e_0..=e_n` from Newton's recursion `k e_k = sum_{r=1}^k (-1)^{r-1} p_r e_{k-r}`.
pub fn elementary_by_newton(n: usize, p: &[Rational]) -> Result<Vec<Rational>> {
    if p.len() < n {
        return Err(Error::Input(format!("need {n} power sums, got {}", p.len())));
    }
    let mut e = vec![Rational::one()];
    for k in 1..=n {
        let s: Rational = (1..=k).map(|r| sign(r - 1) * &p[r - 1] * &e[k - r]).sum();
        e.push(s / Rational::from_integer(BigInt::from(k)));
    }
    Ok(e)
}

/// Exact check of `n e_n = sum_{r=1}^n (-1)^{r-1} p_r e_{n-r}`.
///
/// `e` holds `e_0..=e_n` and `p` holds `p_1..=p_n`; shorter inputs return
/// `false`.
pub fn newton_check(n: usize, e: &[Rational], p: &[Rational]) -> bool {
    if n == 0 || e.len() < n + 1 || p.len() < n {
        return false;
    }
    let rhs: Rational = (1..=n).map(|r| sign(r - 1) * &p[r - 1] * &e[n - r]).sum();
    Rational::from_integer(BigInt::from(n)) * &e[n] == rhs
}

/// Power sums `p_1..=p_k` of the roots of a monic integer polynomial,
/// straight from its coefficients.
///
/// With `q = sum_i c_i x^i` of degree `N`,
/// `p_j = -sum_{i=1}^{min(j-1, N)} c_{N-i} p_{j-i} - [j <= N] j c_{N-j}`.
pub fn power_sums(q: &IntPolynomial, k: usize) -> Result<Vec<BigInt>> {
    if !q.is_monic() {
        return Err(Error::Input(format!("polynomial {q} is not monic")));
    }
    let n = q.degree();
    let c = q.coefficients();
    let mut p: Vec<BigInt> = Vec::with_capacity(k);
    for j in 1..=k {
        let mut acc = BigInt::zero();
        for i in 1..=(j - 1).min(n) {
            acc -= &c[n - i] * &p[j - i - 1];
        }
        if j <= n {
            acc -= BigInt::from(j) * &c[n - j];
        }
        p.push(acc);
    }
    Ok(p)
}

/// Power sums `p_1..=p_k` of the root multiset of a reciprocal polynomial.
pub fn power_from_coefficients(q: &ReciprocalPoly, k: usize) -> Vec<BigInt> {
    power_sums(q.as_poly(), k).expect("reciprocal polynomials are monic")
}

/// Both evaluations of `p_{N+1}` for `N` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NextPowerSum {
    /// The double sum over `r` and `|λ| = N+1-r` with sign
    /// `(-1)^{2N+1-l(λ)}`.
    pub formula: Rational,
    /// Newton's recursion for `e_1..e_N`, then `e_{N+1} = 0`.
    pub newton: Rational,
}

impl NextPowerSum {
    pub fn agree(&self) -> bool {
        self.formula == self.newton
    }
}

/// `p_{N+1}` from `p_1..=p_N`, by the closed double sum and by Newton's
/// recursion.
pub fn p_next(n: usize, p: &[Rational]) -> Result<NextPowerSum> {
    if n == 0 || p.len() != n {
        return Err(Error::Input(format!("expected exactly N = {n} power sums, got {}", p.len())));
    }
    let mut formula = Rational::zero();
    for r in 1..=n {
        for lambda in partitions_of(n + 1 - r)? {
            let weight = BigRational::from_integer(lambda.z_lambda().clone()).recip();
            formula += sign(2 * n + 1 - lambda.length()) * weight * power_product(lambda.parts(), p) * &p[r - 1];
        }
    }
    // 0 = (N+1) e_{N+1} = sum_{r=1}^{N+1} (-1)^{r-1} p_r e_{N+1-r}
    let e = elementary_by_newton(n, p)?;
    let rest: Rational = (1..=n).map(|r| sign(r - 1) * &p[r - 1] * &e[n + 1 - r]).sum();
    let newton = -rest * sign(n);
    Ok(NextPowerSum { formula, newton })
}

/// `sum_{|λ|=n} z_λ^{-1} δ^{l(λ)}`, which bounds `|e_n|` whenever
/// `|p_k| <= δ` for all `k <= n`.
pub fn coefficient_bound(n: usize, delta: &Rational) -> Result<Rational> {
    Ok(partitions_of(n)?
        .iter()
        .map(|lambda| {
            let weight = BigRational::from_integer(lambda.z_lambda().clone()).recip();
            weight * num_traits::pow(delta.clone(), lambda.length())
        })
        .sum())
}
