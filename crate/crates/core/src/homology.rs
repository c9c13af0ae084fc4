//! Mapping classes acting on `H_1` of a closed genus-`g` surface.
//!
//! Punctures are forgotten, so homology is always `Z^{2g}` with basis
//! `a_1, b_1, ..., a_g, b_g` (coordinates `2k`, `2k+1`) and the standard
//! intersection form `<a_k, b_k> = 1`. A Dehn twist about a curve of class
//! `c` acts as the transvection `x -> x + s <x, c> c`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{char_poly_with_cap, mat_mul, IntMatrix, IntPolynomial, DEFAULT_CHAR_POLY_CAP};

pub type HomologyClass = Vec<BigInt>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticSpace {
    genus: usize,
}

impl SymplecticSpace {
    pub fn new(genus: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::Input("genus must be positive".into()));
        }
        Ok(SymplecticSpace { genus })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn dim(&self) -> usize {
        2 * self.genus
    }

    fn check(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "class of length {} in genus {} (expected {})",
                x.len(),
                self.genus,
                self.dim()
            )));
        }
        Ok(())
    }

    /// `<x, y> = sum_k x_{a_k} y_{b_k} - x_{b_k} y_{a_k}`.
    pub fn pairing(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.check(x)?;
        self.check(y)?;
        Ok((0..self.genus).map(|k| &x[2 * k] * &y[2 * k + 1] - &x[2 * k + 1] * &y[2 * k]).sum())
    }

    /// Gram matrix `J` of the form: `<x, y> = x^T J y`.
    pub fn form_matrix(&self) -> IntMatrix {
        let mut j = IntMatrix::zeros(self.dim(), self.dim());
        for k in 0..self.genus {
            j.set(2 * k, 2 * k + 1, BigInt::one());
            j.set(2 * k + 1, 2 * k, -BigInt::one());
        }
        j
    }

    pub fn a(&self, k: usize) -> HomologyClass {
        self.unit(2 * (k - 1))
    }

    pub fn b(&self, k: usize) -> HomologyClass {
        self.unit(2 * (k - 1) + 1)
    }

    pub fn zero(&self) -> HomologyClass {
        vec![BigInt::zero(); self.dim()]
    }

    fn unit(&self, i: usize) -> HomologyClass {
        let mut v = self.zero();
        v[i] = BigInt::one();
        v
    }

    /// `f^T J f == J`.
    pub fn preserves_form(&self, f: &IntMatrix) -> Result<bool> {
        if f.rows() != self.dim() || f.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!("{}x{} map in genus {}", f.rows(), f.cols(), self.genus)));
        }
        let j = self.form_matrix();
        Ok(mat_mul(&mat_mul(&f.transpose(), &j)?, f)? == j)
    }
}

/// One Dehn twist: a homology class and a direction `±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistLetter {
    pub class: HomologyClass,
    pub sign: i8,
}

/// Twists applied left to right: the first letter acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistWord {
    pub space: SymplecticSpace,
    pub letters: Vec<TwistLetter>,
}

impl TwistWord {
    pub fn new(space: SymplecticSpace, letters: Vec<TwistLetter>) -> Result<Self> {
        for letter in &letters {
            space.check(&letter.class)?;
            if letter.sign != 1 && letter.sign != -1 {
                return Err(Error::Input(format!("twist sign must be ±1, got {}", letter.sign)));
            }
        }
        Ok(TwistWord { space, letters })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: TwistWordJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let space = SymplecticSpace::new(raw.genus)?;
        let letters = raw
            .letters
            .into_iter()
            .map(|l| {
                let class = l
                    .class
                    .into_iter()
                    .map(|c| match c {
                        Coord::Int(v) => Ok(BigInt::from(v)),
                        Coord::Text(s) => s.trim().parse().map_err(|_| Error::Parse(format!("{s:?} is not an integer"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(TwistLetter { class, sign: l.sign })
            })
            .collect::<Result<Vec<_>>>()?;
        TwistWord::new(space, letters)
    }

    pub fn to_json(&self) -> String {
        let raw = TwistWordJson {
            genus: self.space.genus(),
            letters: self
                .letters
                .iter()
                .map(|l| LetterJson {
                    class: l.class.iter().map(|c| c.to_i64().map_or_else(|| Coord::Text(c.to_string()), Coord::Int)).collect(),
                    sign: l.sign,
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("word serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coord {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct LetterJson {
    class: Vec<Coord>,
    sign: i8,
}

#[derive(Serialize, Deserialize)]
struct TwistWordJson {
    genus: usize,
    letters: Vec<LetterJson>,
}

/// Matrix of `x -> x + sign <x, c> c`.
pub fn transvection(space: &SymplecticSpace, c: &[BigInt], sign: i8) -> Result<IntMatrix> {
    space.check(c)?;
    if sign != 1 && sign != -1 {
        return Err(Error::Input(format!("twist sign must be ±1, got {sign}")));
    }
    let n = space.dim();
    let s = BigInt::from(sign);
    let mut t = IntMatrix::identity(n);
    for k in 0..space.genus() {
        // <a_k, c> = c_{b_k}, <b_k, c> = -c_{a_k}
        let columns = [(2 * k, c[2 * k + 1].clone()), (2 * k + 1, -&c[2 * k])];
        for (j, pairing) in columns {
            if pairing.is_zero() {
                continue;
            }
            let scale = &s * &pairing;
            for (i, ci) in c.iter().enumerate() {
                let v = t.get(i, j) + &scale * ci;
                t.set(i, j, v);
            }
        }
    }
    Ok(t)
}

/// `T_last ... T_first`, checked to preserve the intersection form.
pub fn compose_word(word: &TwistWord) -> Result<IntMatrix> {
    let mut f = IntMatrix::identity(word.space.dim());
    for letter in &word.letters {
        let t = transvection(&word.space, &letter.class, letter.sign)?;
        f = mat_mul(&t, &f)?;
    }
    if !word.space.preserves_form(&f)? {
        return Err(Error::Invariant("composed twist word does not preserve the intersection form".into()));
    }
    Ok(f)
}

/// `Lf = Tr f_0 - Tr f_1 + Tr f_2 = 2 - Tr f` on a closed orientable surface.
pub fn lefschetz(f: &IntMatrix, genus: usize) -> Result<BigInt> {
    if f.rows() != 2 * genus || f.cols() != 2 * genus {
        return Err(Error::DimensionMismatch(format!("{}x{} map in genus {genus}", f.rows(), f.cols())));
    }
    Ok(BigInt::from(2) - f.trace())
}

/// The chain `c_1 .. c_{2g+1}` in homology: `a_1, b_1, a_2 - a_1, b_2, ...,
/// a_g - a_{g-1}, b_g, -a_g`. Consecutive classes pair to `±1`, all others
/// to 0.
pub fn standard_chain(space: &SymplecticSpace) -> Vec<HomologyClass> {
    let g = space.genus();
    let mut chain = vec![space.a(1), space.b(1)];
    for k in 2..=g {
        let diff: HomologyClass = space.a(k).iter().zip(space.a(k - 1)).map(|(x, y)| x - y).collect();
        chain.push(diff);
        chain.push(space.b(k));
    }
    chain.push(space.a(g).into_iter().map(|x| -x).collect());
    chain
}

/// Twist word for `psi_{g,n}`: `2g + n` letters, positive on odd positions
/// and negative on even ones. The first `2g + 1` classes are the standard
/// chain; the remaining `n - 1` curves enclose punctures and default to the
/// zero class.
pub fn psi_preset(genus: usize, punctures: usize) -> Result<TwistWord> {
    let tail = vec![None; punctures.saturating_sub(1)];
    psi_preset_with_tail(genus, punctures, tail)
}

/// [`psi_preset`] with explicit classes for the trailing `n - 1` curves
/// (`None` keeps the zero class).
pub fn psi_preset_with_tail(genus: usize, punctures: usize, tail: Vec<Option<HomologyClass>>) -> Result<TwistWord> {
    if genus < 2 {
        return Err(Error::Input(format!("psi preset needs genus > 1, got {genus}")));
    }
    if punctures == 0 {
        return Err(Error::Input("psi preset needs at least one puncture".into()));
    }
    if tail.len() != punctures - 1 {
        return Err(Error::Input(format!("expected {} tail classes, got {}", punctures - 1, tail.len())));
    }
    let space = SymplecticSpace::new(genus)?;
    let classes = standard_chain(&space)
        .into_iter()
        .chain(tail.into_iter().map(|c| c.unwrap_or_else(|| space.zero())));
    let letters = classes
        .enumerate()
        .map(|(i, class)| TwistLetter { class, sign: if i % 2 == 0 { 1 } else { -1 } })
        .collect();
    TwistWord::new(space, letters)
}

/// Outcome of the escape search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum EscapeOutcome {
    /// Smallest `C` with `Tr(a^C) > 2`.
    EscapeAt { iterate: u64 },
    /// No escape within the cap and the spectrum is roots of unity; the
    /// trace sequence is periodic with this minimal period.
    PeriodicCertificate { period: u64 },
    /// No escape within the cap, and the characteristic polynomial is not a
    /// product of cyclotomics.
    CapExhausted { cap: u64 },
}

/// `4g^2 + 2` for a `2g x 2g` matrix.
pub fn default_escape_cap(dim: usize) -> u64 {
    let g = dim.div_ceil(2) as u64;
    4 * g * g + 2
}

pub fn escape_iterate(a: &IntMatrix, cap: u64) -> Result<EscapeOutcome> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let q = char_poly_with_cap(a, a.rows().max(DEFAULT_CHAR_POLY_CAP))?;
    let det = if a.rows().is_multiple_of(2) { q.coeff(0) } else { -q.coeff(0) };
    if det.abs() != BigInt::one() {
        return Err(Error::Input(format!("matrix has determinant {det}, not ±1")));
    }
    let two = BigInt::from(2);
    let mut power = IntMatrix::identity(a.rows());
    for c in 1..=cap {
        power = mat_mul(&power, a)?;
        if power.trace() > two {
            return Ok(EscapeOutcome::EscapeAt { iterate: c });
        }
    }
    match cyclotomic_orders(&q)? {
        Some(orders) => {
            let period_bound = orders.iter().fold(1u64, |acc, &d| acc.lcm(&(d as u64)));
            Ok(EscapeOutcome::PeriodicCertificate { period: trace_period(a, period_bound)? })
        }
        None => Ok(EscapeOutcome::CapExhausted { cap }),
    }
}

/// Minimal period of `k -> Tr(a^k)`, given a known period `bound`.
fn trace_period(a: &IntMatrix, bound: u64) -> Result<u64> {
    let mut traces = Vec::with_capacity(2 * bound as usize);
    let mut power = IntMatrix::identity(a.rows());
    for _ in 0..2 * bound {
        power = mat_mul(&power, a)?;
        traces.push(power.trace());
    }
    let b = bound as usize;
    let period = (1..=b)
        .filter(|p| b.is_multiple_of(*p))
        .find(|&p| (0..b).all(|k| traces[k] == traces[k + p]))
        .unwrap_or(b);
    Ok(period as u64)
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// `Φ_1 .. Φ_max` via `Φ_d = (x^d - 1) / prod_{e | d, e < d} Φ_e`.
pub fn cyclotomic_table(max: usize) -> Vec<IntPolynomial> {
    let mut table: Vec<IntPolynomial> = vec![IntPolynomial::one()];
    for d in 1..=max {
        let mut p = IntPolynomial::x_pow_minus_one(d);
        for e in (1..d).filter(|e| d % e == 0) {
            p = p.div_rem_monic(&table[e]).expect("cyclotomic polynomials are monic").0;
        }
        table.push(p);
    }
    table
}

pub fn cyclotomic(d: usize) -> IntPolynomial {
    cyclotomic_table(d).pop().expect("table is nonempty")
}

/// The orders `d` (with multiplicity) of the cyclotomic factors of `q`, or
/// `None` when `q` is not a product of cyclotomic polynomials.
fn cyclotomic_orders(q: &IntPolynomial) -> Result<Option<Vec<usize>>> {
    if !q.is_monic() {
        return Err(Error::Input(format!("{q} is not monic")));
    }
    let n = q.degree();
    // phi(d) >= sqrt(d / 2), so phi(d) <= n forces d <= 2n^2.
    let max_d = 2 * n * n + 2;
    let table = cyclotomic_table(max_d);
    let mut rest = q.clone();
    let mut orders = Vec::new();
    for (d, phi_d) in table.iter().enumerate().skip(1) {
        if euler_phi(d as u64) as usize > rest.degree() {
            continue;
        }
        loop {
            let (quot, rem) = rest.div_rem_monic(phi_d)?;
            if !rem.is_zero() || rest.degree() == 0 {
                break;
            }
            rest = quot;
            orders.push(d);
        }
    }
    Ok((rest == IntPolynomial::one()).then_some(orders))
}

/// True iff the monic integer polynomial `q` is a product of cyclotomic
/// polynomials, decided by exact trial division.
pub fn is_cyclotomic_product(q: &IntPolynomial) -> Result<bool> {
    Ok(cyclotomic_orders(q)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> HomologyClass {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn pairing_is_standard() {
        let s = SymplecticSpace::new(2).unwrap();
        assert_eq!(s.pairing(&s.a(1), &s.b(1)).unwrap(), BigInt::from(1));
        assert_eq!(s.pairing(&s.b(1), &s.a(1)).unwrap(), BigInt::from(-1));
        assert_eq!(s.pairing(&s.a(1), &s.b(2)).unwrap(), BigInt::from(0));
        assert!(s.pairing(&v(&[1, 0]), &s.a(1)).is_err());
    }

    #[test]
    fn transvection_examples() {
        let s = SymplecticSpace::new(1).unwrap();
        assert_eq!(transvection(&s, &v(&[0, 0]), 1).unwrap(), IntMatrix::identity(2));
        let t = transvection(&s, &v(&[1, 0]), 1).unwrap();
        assert_eq!(t, m(&[vec![1, -1], vec![0, 1]]));
        assert_eq!(t.trace(), BigInt::from(2));
        assert!(transvection(&s, &v(&[1, 0, 0]), 1).is_err());
        assert!(transvection(&s, &v(&[1, 0]), 2).is_err());
    }

    #[test]
    fn two_twist_traces() {
        let s = SymplecticSpace::new(1).unwrap();
        let mut traces = Vec::new();
        for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let w = TwistWord::new(
                s,
                vec![TwistLetter { class: s.a(1), sign: sa }, TwistLetter { class: s.b(1), sign: sb }],
            )
            .unwrap();
            traces.push(compose_word(&w).unwrap().trace());
        }
        assert_eq!(traces, vec![BigInt::from(1), BigInt::from(3), BigInt::from(3), BigInt::from(1)]);
    }

    #[test]
    fn inverse_pair() {
        let s = SymplecticSpace::new(2).unwrap();
        let c = v(&[1, -2, 3, 1]);
        let prod = mat_mul(&transvection(&s, &c, 1).unwrap(), &transvection(&s, &c, -1).unwrap()).unwrap();
        assert_eq!(prod, IntMatrix::identity(4));
    }

    #[test]
    fn word_examples() {
        let s = SymplecticSpace::new(2).unwrap();
        assert_eq!(compose_word(&TwistWord::new(s, vec![]).unwrap()).unwrap(), IntMatrix::identity(4));
        let single = TwistWord::new(s, vec![TwistLetter { class: s.b(2), sign: -1 }]).unwrap();
        assert_eq!(compose_word(&single).unwrap(), transvection(&s, &s.b(2), -1).unwrap());
        let disjoint = TwistWord::new(
            s,
            vec![TwistLetter { class: s.a(1), sign: 1 }, TwistLetter { class: s.a(2), sign: -1 }],
        )
        .unwrap();
        assert_eq!(compose_word(&disjoint).unwrap().trace(), BigInt::from(4));
    }

    #[test]
    fn lefschetz_examples() {
        assert_eq!(lefschetz(&IntMatrix::identity(4), 2).unwrap(), BigInt::from(-2));
        assert_eq!(lefschetz(&m(&[vec![0, -1], vec![1, 0]]), 1).unwrap(), BigInt::from(2));
        let s = SymplecticSpace::new(3).unwrap();
        let w = TwistWord::new(
            s,
            vec![
                TwistLetter { class: s.a(1), sign: 1 },
                TwistLetter { class: s.a(2), sign: 1 },
                TwistLetter { class: v(&[1, 0, 1, 0, 1, 0]), sign: -1 },
            ],
        )
        .unwrap();
        assert_eq!(lefschetz(&compose_word(&w).unwrap(), 3).unwrap(), BigInt::from(-4));
        assert!(lefschetz(&IntMatrix::identity(4), 3).is_err());
    }

    #[test]
    fn chain_pairings() {
        for g in 2..=5 {
            let s = SymplecticSpace::new(g).unwrap();
            let chain = standard_chain(&s);
            assert_eq!(chain.len(), 2 * g + 1);
            for i in 0..chain.len() {
                for j in 0..chain.len() {
                    let p = s.pairing(&chain[i], &chain[j]).unwrap();
                    if i.abs_diff(j) == 1 {
                        assert_eq!(p.abs(), BigInt::one());
                    } else {
                        assert!(p.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn psi_examples() {
        let w = psi_preset(2, 1).unwrap();
        assert_eq!(w.letters.len(), 5);
        assert!(w.letters.iter().all(|l| l.class.iter().any(|c| !c.is_zero())));
        let signs: Vec<i8> = w.letters.iter().map(|l| l.sign).collect();
        assert_eq!(signs, vec![1, -1, 1, -1, 1]);

        let w = psi_preset(3, 5).unwrap();
        assert_eq!(w.letters.len(), 11);
        assert!(w.letters[7..].iter().all(|l| l.class.iter().all(Zero::is_zero)));
        assert_eq!(compose_word(&w).unwrap(), compose_word(&psi_preset(3, 1).unwrap()).unwrap());

        assert!(psi_preset(1, 3).is_err());
        assert!(psi_preset(2, 0).is_err());
    }

    #[test]
    fn psi_tail_override() {
        let s = SymplecticSpace::new(2).unwrap();
        let w = psi_preset_with_tail(2, 3, vec![Some(s.b(1)), None]).unwrap();
        assert_eq!(w.letters[5].class, s.b(1));
        assert_eq!(w.letters[5].sign, -1);
        assert!(psi_preset_with_tail(2, 3, vec![None]).is_err());
    }

    #[test]
    fn escape_examples() {
        assert_eq!(escape_iterate(&m(&[vec![2, 1], vec![1, 1]]), 10).unwrap(), EscapeOutcome::EscapeAt { iterate: 1 });
        let rot = m(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(
            escape_iterate(&rot, default_escape_cap(2)).unwrap(),
            EscapeOutcome::PeriodicCertificate { period: 4 }
        );
        assert_eq!(
            escape_iterate(&IntMatrix::identity(2), 6).unwrap(),
            EscapeOutcome::PeriodicCertificate { period: 1 }
        );
        assert!(escape_iterate(&m(&[vec![2, 0], vec![0, 1]]), 6).unwrap_err().is_input_error());
    }

    #[test]
    fn escape_after_negative_traces() {
        // Trace -3, so the first iterate stays below 2; the square has trace 7.
        let a = m(&[vec![-2, 1], vec![1, -1]]);
        assert_eq!(escape_iterate(&a, 10).unwrap(), EscapeOutcome::EscapeAt { iterate: 2 });
        assert_eq!(escape_iterate(&a, 1).unwrap(), EscapeOutcome::CapExhausted { cap: 1 });
    }

    #[test]
    fn cyclotomic_detection() {
        assert!(is_cyclotomic_product(&IntPolynomial::from_i64(&[1, 0, 1])).unwrap());
        assert!(!is_cyclotomic_product(&IntPolynomial::from_i64(&[1, -3, 1])).unwrap());
        assert!(is_cyclotomic_product(&IntPolynomial::from_i64(&[-1, 1])).unwrap());
        assert!(is_cyclotomic_product(&IntPolynomial::one()).unwrap());
        assert!(!is_cyclotomic_product(&IntPolynomial::from_i64(&[0, 1])).unwrap());
        assert!(is_cyclotomic_product(&IntPolynomial::x_pow_minus_one(12)).unwrap());
        assert!(is_cyclotomic_product(&IntPolynomial::from_i64(&[1, -2, 1])).unwrap());
        assert!(is_cyclotomic_product(&IntPolynomial::from_i64(&[1, 1])).unwrap());
        assert!(is_cyclotomic_product(&IntPolynomial::from_i64(&[1, 2])).is_err());
    }

    #[test]
    fn cyclotomic_degrees() {
        let table = cyclotomic_table(30);
        for (d, phi_d) in table.iter().enumerate().skip(1) {
            assert_eq!(phi_d.degree() as u64, euler_phi(d as u64));
        }
        assert_eq!(cyclotomic(6), IntPolynomial::from_i64(&[1, -1, 1]));
    }

    #[test]
    fn word_json() {
        let text = r#"{"genus":1,"letters":[{"class":[1,0],"sign":1},{"class":["0","1"],"sign":-1}]}"#;
        let w = TwistWord::from_json(text).unwrap();
        assert_eq!(w.letters.len(), 2);
        assert_eq!(TwistWord::from_json(&w.to_json()).unwrap(), w);
        assert!(TwistWord::from_json(r#"{"genus":1,"letters":[{"class":[1],"sign":1}]}"#).is_err());
        assert!(TwistWord::from_json(r#"{"genus":1,"letters":[{"class":[1,0],"sign":0}]}"#).is_err());
    }
}
