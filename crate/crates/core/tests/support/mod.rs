//! Independent oracles and seeded generators shared by the integration and
//! acceptance suites. Nothing here calls the code paths it is used to check.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use translen_core::exactmat::{IntMatrix, IntPolynomial};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

type Q = BigRational;
type QPoly = Vec<Q>;

fn q_trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn q_from(p: &IntPolynomial) -> QPoly {
    p.coefficients().iter().map(|c| Q::from_integer(c.clone())).collect()
}

fn q_deriv(p: &QPoly) -> QPoly {
    q_trim(p.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer(BigInt::from(i))).collect())
}

fn q_rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    while r.len() > db && !r.is_empty() {
        let factor = r.last().unwrap() / &lead;
        let shift = r.len() - 1 - db;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &factor * c;
        }
        r.pop();
        r = q_trim(r);
    }
    r
}

fn q_div_exact(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    let mut quot = vec![Q::zero(); a.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let factor = r.last().unwrap() / &lead;
        let shift = r.len() - 1 - db;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &factor * c;
        }
        quot[shift] = factor;
        r.pop();
        r = q_trim(r);
    }
    q_trim(quot)
}

fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = q_rem(&x, &y);
        x = y;
        y = r;
    }
    let lead = x.last().unwrap().clone();
    x.into_iter().map(|c| c / &lead).collect()
}

fn q_eval(p: &QPoly, x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn sign_changes(chain: &[QPoly], x: &Q) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| q_eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Largest real root by Sturm-sequence bisection in exact rationals.
pub fn largest_real_root(p: &IntPolynomial, tol: f64) -> Option<f64> {
    let poly = q_from(p);
    let mut chain = vec![poly.clone(), q_deriv(&poly)];
    while chain.last().unwrap().len() > 1 {
        let n = chain.len();
        let r: QPoly = q_rem(&chain[n - 2], &chain[n - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        chain.push(r);
    }
    let lead = poly.last().unwrap().abs();
    let bound = Q::one() + poly.iter().map(|c| c.abs() / &lead).fold(Q::zero(), |a, b| if b > a { b } else { a });
    let v_hi = sign_changes(&chain, &bound);
    let mut lo = -bound.clone();
    let mut hi = bound;
    if sign_changes(&chain, &lo) == v_hi {
        return None;
    }
    let tol_q = Q::from_float(tol).unwrap();
    while &hi - &lo > tol_q {
        let mut mid = (&lo + &hi) / Q::from_integer(BigInt::from(2));
        if q_eval(&poly, &mid).is_zero() {
            // mid is a root; the largest root is mid unless one lies above it.
            let above = &mid + (&hi - &lo) / Q::from_integer(BigInt::from(1 << 20));
            if sign_changes(&chain, &above) == v_hi && !q_eval(&poly, &above).is_zero() {
                return mid.to_f64();
            }
            mid = above;
        }
        if sign_changes(&chain, &mid) > v_hi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ((lo + hi) / Q::from_integer(BigInt::from(2))).to_f64()
}

/// Roots of the square-free part of a monic integer polynomial, by
/// Durand–Kerner iteration.
pub fn squarefree_roots(p: &IntPolynomial) -> Vec<Complex64> {
    let poly = q_from(p);
    if poly.len() <= 1 {
        return Vec::new();
    }
    let g = q_gcd(&poly, &q_deriv(&poly));
    let sf = q_div_exact(&poly, &g);
    let lead = sf.last().unwrap().clone();
    let coeffs: Vec<f64> = sf.iter().map(|c| (c / &lead).to_f64().unwrap()).collect();
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let denom = (0..n).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    roots
}

pub fn all_roots_on_unit_circle(p: &IntPolynomial, tol: f64) -> bool {
    squarefree_roots(p).iter().all(|z| (z.norm() - 1.0).abs() < tol)
}

/// `e_0..=e_N` of a multiset, by expanding `prod (1 + mu t)`.
pub fn elementary_direct(mu: &[i64]) -> Vec<BigInt> {
    let mut e = vec![BigInt::one()];
    for &m in mu {
        let mut next = e.clone();
        next.push(BigInt::zero());
        for k in 1..next.len() {
            next[k] += &e[k - 1] * BigInt::from(m);
        }
        e = next;
    }
    e
}

pub fn power_sums_direct(mu: &[i64], k: usize) -> Vec<BigInt> {
    (1..=k as u32).map(|j| mu.iter().map(|&m| BigInt::from(m).pow(j)).sum()).collect()
}

/// Random nonnegative matrix with entries in `0..=max`, redrawn until it is
/// primitive (checked by brute-force powering of the 0/1 pattern).
pub fn random_primitive(rng: &mut ChaCha8Rng, dim: usize, max: i64, density: f64) -> IntMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..dim)
            .map(|_| (0..dim).map(|_| if rng.random_bool(density) { rng.random_range(1..=max) } else { 0 }).collect())
            .collect();
        if primitive_by_brute_force(&rows) {
            return IntMatrix::from_rows(&rows).unwrap();
        }
    }
}

fn primitive_by_brute_force(rows: &[Vec<i64>]) -> bool {
    let n = rows.len();
    let base: Vec<Vec<bool>> = rows.iter().map(|r| r.iter().map(|&x| x != 0).collect()).collect();
    let mut p = base.clone();
    for _ in 0..(n - 1) * (n - 1) + 1 {
        if p.iter().all(|r| r.iter().all(|&b| b)) {
            return true;
        }
        p = (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| p[i][k] && base[k][j])).collect()).collect();
    }
    false
}

/// Monic integer polynomial: either a product of cyclotomic factors written
/// out by hand, or random small coefficients.
pub fn random_monic(rng: &mut ChaCha8Rng) -> IntPolynomial {
    const CYCLOTOMIC: [&[i64]; 8] = [
        &[-1, 1],
        &[1, 1],
        &[1, 1, 1],
        &[1, 0, 1],
        &[1, -1, 1],
        &[1, 1, 1, 1, 1],
        &[1, 0, 0, 1],
        &[1, -1, 1, -1, 1],
    ];
    if rng.random_bool(0.5) {
        let mut p = IntPolynomial::one();
        loop {
            let f = IntPolynomial::from_i64(CYCLOTOMIC[rng.random_range(0..CYCLOTOMIC.len())]);
            if p.degree() + f.degree() > 6 {
                break;
            }
            p = p.mul(&f);
            if rng.random_bool(0.3) {
                break;
            }
        }
        if p.degree() == 0 {
            IntPolynomial::from_i64(&[1, 1])
        } else {
            p
        }
    } else {
        let deg = rng.random_range(1..=6);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.random_range(-2..=2)).collect();
        if c[0] == 0 {
            c[0] = 1;
        }
        c.push(1);
        IntPolynomial::from_i64(&c)
    }
}
