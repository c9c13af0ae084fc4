use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::Execution;

/// Dense row-major matrix of arbitrary-precision integers.
///
/// `nonneg` records whether the matrix is known to be a transition-matrix
/// instance (all entries `>= 0`). It is computed by scanning on
/// construction and propagated as `a.nonneg && b.nonneg` through products.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "MatrixLiteral", into = "MatrixLiteral")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
    nonneg: bool,
}

impl PartialEq for IntMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for IntMatrix {}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Input(format!("matrix dimensions must be positive, got {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let nonneg = entries.iter().all(|e| !e.is_negative());
        Ok(IntMatrix { rows, cols, entries, nonneg })
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        IntMatrix::new(r, c, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols], nonneg: true }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// The propagated non-negativity flag.
    pub fn is_nonneg(&self) -> bool {
        self.nonneg
    }

    /// Scans the entries, ignoring the flag.
    pub fn has_nonneg_entries(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(Signed::is_positive)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// Zero-based access.
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        if value.is_negative() {
            self.nonneg = false;
        }
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.cols).map(<[BigInt]>::to_vec).collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t.nonneg = self.nonneg;
        t
    }

    pub fn negate(&self) -> IntMatrix {
        let entries: Vec<BigInt> = self.entries.iter().map(|e| -e).collect();
        IntMatrix::new(self.rows, self.cols, entries).expect("same shape")
    }

    /// Copies `block` into the submatrix whose top-left corner is `(row, col)`.
    pub fn place_block(&mut self, row: usize, col: usize, block: &IntMatrix) -> Result<()> {
        if row + block.rows > self.rows || col + block.cols > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} block at ({row},{col}) overflows {}x{}",
                block.rows, block.cols, self.rows, self.cols
            )));
        }
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.entries[(row + i) * self.cols + col + j] = block.get(i, j).clone();
            }
        }
        self.nonneg &= block.nonneg;
        Ok(())
    }

    /// Exact product with a column vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self
            .entries
            .chunks(self.cols)
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Boolean pattern of nonzero entries.
    pub fn pattern(&self) -> BoolMatrix {
        BoolMatrix::from_fn(self.rows, |i, j| !self.get(i, j).is_zero())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.chunks(self.cols).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn check_mul(a: &IntMatrix, b: &IntMatrix) -> Result<()> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(())
}

fn mul_row(a_row: &[BigInt], b: &IntMatrix, out: &mut [BigInt]) {
    for (k, aik) in a_row.iter().enumerate() {
        if aik.is_zero() {
            continue;
        }
        for (c, bkj) in out.iter_mut().zip(b.row(k)) {
            if !bkj.is_zero() {
                *c += aik * bkj;
            }
        }
    }
}

// Below this many scalar multiply-adds the thread hand-off costs more than it saves.
const PARALLEL_MUL_THRESHOLD: usize = 32 * 32 * 32;

/// Exact product `a * b`.
pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    let exec = if a.rows * a.cols * b.cols >= PARALLEL_MUL_THRESHOLD {
        Execution::Parallel
    } else {
        Execution::Sequential
    };
    mat_mul_with(a, b, exec)
}

/// Exact product with an explicit execution strategy (row-parallel when
/// parallel).
pub fn mat_mul_with(a: &IntMatrix, b: &IntMatrix, exec: Execution) -> Result<IntMatrix> {
    check_mul(a, b)?;
    let mut entries = vec![BigInt::zero(); a.rows * b.cols];
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            entries
                .par_chunks_mut(b.cols)
                .enumerate()
                .for_each(|(i, out)| mul_row(a.row(i), b, out));
        }
        _ => {
            for (i, out) in entries.chunks_mut(b.cols).enumerate() {
                mul_row(a.row(i), b, out);
            }
        }
    }
    Ok(IntMatrix { rows: a.rows, cols: b.cols, entries, nonneg: a.nonneg && b.nonneg })
}

/// Exact `a^t` by binary exponentiation; `a^0` is the identity.
pub fn mat_pow(a: &IntMatrix, t: u64) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    let mut result = IntMatrix::identity(a.rows);
    if t == 0 {
        return Ok(result);
    }
    let mut base = a.clone();
    let mut e = t;
    loop {
        if e & 1 == 1 {
            result = mat_mul(&result, &base)?;
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = mat_mul(&base, &base)?;
    }
    result.nonneg = a.nonneg;
    Ok(result)
}

/// Square boolean matrix stored as row bitsets, used for support and
/// primitivity questions on nonnegative matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolMatrix {
    dim: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let words = dim.div_ceil(64);
        let mut bits = vec![0u64; dim * words];
        for i in 0..dim {
            for j in 0..dim {
                if f(i, j) {
                    bits[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        BoolMatrix { dim, words, bits }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row_bits(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Boolean product `self * other`.
    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        let mut bits = vec![0u64; self.bits.len()];
        for i in 0..self.dim {
            let out = &mut bits[i * self.words..(i + 1) * self.words];
            for k in 0..self.dim {
                if self.get(i, k) {
                    for (o, b) in out.iter_mut().zip(other.row_bits(k)) {
                        *o |= b;
                    }
                }
            }
        }
        BoolMatrix { dim: self.dim, words: self.words, bits }
    }

    pub fn is_full(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(i, j)))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryLiteral {
    Text(String),
    Int(i64),
}

/// JSON matrix literal: `{ "rows": R, "cols": C, "entries": [[...], ...] }`.
///
/// Entries are written as decimal strings; plain JSON integers are accepted
/// on input.
#[derive(Serialize, Deserialize)]
struct MatrixLiteral {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<EntryLiteral>>,
}

impl TryFrom<MatrixLiteral> for IntMatrix {
    type Error = Error;

    fn try_from(lit: MatrixLiteral) -> Result<Self> {
        if lit.entries.len() != lit.rows || lit.entries.iter().any(|r| r.len() != lit.cols) {
            return Err(Error::DimensionMismatch(format!(
                "matrix literal entries do not match declared {}x{}",
                lit.rows, lit.cols
            )));
        }
        let entries = lit
            .entries
            .into_iter()
            .flatten()
            .map(|e| match e {
                EntryLiteral::Int(v) => Ok(BigInt::from(v)),
                EntryLiteral::Text(s) => s
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("matrix entry {s:?} is not an integer"))),
            })
            .collect::<Result<Vec<_>>>()?;
        IntMatrix::new(lit.rows, lit.cols, entries)
    }
}

impl From<IntMatrix> for MatrixLiteral {
    fn from(m: IntMatrix) -> Self {
        MatrixLiteral {
            rows: m.rows,
            cols: m.cols,
            entries: m
                .entries
                .chunks(m.cols)
                .map(|row| row.iter().map(|e| EntryLiteral::Text(e.to_string())).collect())
                .collect(),
        }
    }
}

impl IntMatrix {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix literal serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn identity_times_a() {
        let a = m(&[vec![3, -1], vec![4, 7]]);
        assert_eq!(mat_mul(&IntMatrix::identity(2), &a).unwrap(), a);
    }

    #[test]
    fn fibonacci_square() {
        let f = m(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(mat_mul(&f, &f).unwrap(), m(&[vec![2, 1], vec![1, 1]]));
    }

    #[test]
    fn scalar_product() {
        assert_eq!(mat_mul(&m(&[vec![3]]), &m(&[vec![5]])).unwrap(), m(&[vec![15]]));
    }

    #[test]
    fn product_dimension_mismatch() {
        let a = m(&[vec![1, 2, 3]]);
        assert!(matches!(mat_mul(&a, &a), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn nonneg_flag_propagates() {
        let p = m(&[vec![1, 2], vec![0, 1]]);
        let s = m(&[vec![-1, 0], vec![0, -1]]);
        assert!(mat_mul(&p, &p).unwrap().is_nonneg());
        let ss = mat_mul(&s, &s).unwrap();
        assert!(!ss.is_nonneg());
        assert!(ss.has_nonneg_entries());
    }

    #[test]
    fn powers() {
        let f = m(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(mat_pow(&f, 0).unwrap(), IntMatrix::identity(2));
        assert_eq!(mat_pow(&f, 5).unwrap(), m(&[vec![8, 5], vec![5, 3]]));
        let p = m(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(mat_pow(&p, 3).unwrap(), IntMatrix::identity(3));
        assert!(matches!(mat_pow(&m(&[vec![1, 2]]), 2), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn big_power_does_not_overflow() {
        let f = m(&[vec![1, 1], vec![1, 0]]);
        let p = mat_pow(&f, 300).unwrap();
        // F(301) has 63 digits.
        assert_eq!(p.get(0, 1).to_string().len(), 63);
    }

    #[test]
    fn sequential_and_parallel_products_agree() {
        let a = IntMatrix::from_rows(
            &(0..40).map(|i| (0..40).map(|j| ((i * 7 + j * 3) % 5) as i64 - 2).collect()).collect::<Vec<_>>(),
        )
        .unwrap();
        let s = mat_mul_with(&a, &a, Execution::Sequential).unwrap();
        let p = mat_mul_with(&a, &a, Execution::Parallel).unwrap();
        assert_eq!(s, p);
    }

    #[test]
    fn json_literal() {
        let a = m(&[vec![1, -2], vec![3, 4]]);
        let text = a.to_json();
        assert_eq!(text, r#"{"rows":2,"cols":2,"entries":[["1","-2"],["3","4"]]}"#);
        assert_eq!(IntMatrix::from_json(&text).unwrap(), a);
        let mixed = IntMatrix::from_json(r#"{"rows":1,"cols":2,"entries":[[5,"123456789012345678901234567890"]]}"#).unwrap();
        assert_eq!(mixed.get(0, 1).to_string(), "123456789012345678901234567890");
        assert!(IntMatrix::from_json(r#"{"rows":2,"cols":2,"entries":[[1,2]]}"#).is_err());
        assert!(IntMatrix::from_json(r#"{"rows":1,"cols":1,"entries":[["x"]]}"#).is_err());
    }
}
