//! Penner-sequence block transition matrices and their support-vanishing
//! certificates.
//!
//! A Penner sequence on `m` glued copies of a building-block surface has an
//! `m`-th power transition matrix with an `m x m` block layout of `r x r`
//! blocks `A..H`:
//!
//! ```text
//! row 1      : A@1  D@2                       F@m
//! row 2      : B@1  E@2  G@3                  F²@m
//! row i      :          F@(i-1) H@i G@(i+1)          (3 <= i <= m-1)
//! row m      : C@1                 F@(m-1)    H@m
//! ```
//!
//! Applying this matrix to a vector supported in block `n` (away from the
//! ends) spreads the support to blocks `n-1..=n+1`. Starting from the
//! middle block, `floor(m/2) - 1` applications never reach block `m`, so the
//! starting curve and its image have disjoint supports and lie at curve
//! complex distance at most 2.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{mat_mul, support_propagate, IntMatrix, SupportSet};
use crate::parallel::{map_ordered, Execution};
use crate::rational::{ratio, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl BlockLabel {
    pub const ALL: [BlockLabel; 8] = [
        BlockLabel::A,
        BlockLabel::B,
        BlockLabel::C,
        BlockLabel::D,
        BlockLabel::E,
        BlockLabel::F,
        BlockLabel::G,
        BlockLabel::H,
    ];
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// How [`shadow`] computes supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShadowMode {
    /// Exact integer iteration of the full matrix.
    #[default]
    Exact,
    /// Reachability on the block-level nonzero pattern, expanded to indices.
    Pattern,
}

/// Affine Euler characteristic model `chi(m) = c1 * m + c0` for the surface
/// carrying the `m`-th member of the sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiModel {
    pub c1: i64,
    pub c0: i64,
}

impl ChiModel {
    pub fn chi(&self, m: u64) -> i64 {
        self.c1 * m as i64 + self.c0
    }

    /// The `m` with `chi(m) == chi`, when one exists.
    pub fn solve(&self, chi: i64) -> Option<u64> {
        if self.c1 == 0 {
            return None;
        }
        let diff = chi - self.c0;
        if diff % self.c1 != 0 {
            return None;
        }
        u64::try_from(diff / self.c1).ok()
    }
}

impl Default for ChiModel {
    /// Building block: a torus with one puncture and two boundary circles,
    /// `chi = -3`.
    fn default() -> Self {
        ChiModel { c1: -3, c0: 0 }
    }
}

/// Optional affine genus/puncture model `g(m) = g1*m + g0`,
/// `n(m) = n1*m + n0`; when present it must agree with the [`ChiModel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub g1: i64,
    pub g0: i64,
    pub n1: i64,
    pub n0: i64,
}

impl SurfaceModel {
    pub fn genus(&self, m: u64) -> i64 {
        self.g1 * m as i64 + self.g0
    }

    pub fn punctures(&self, m: u64) -> i64 {
        self.n1 * m as i64 + self.n0
    }

    pub fn chi_model(&self) -> ChiModel {
        ChiModel { c1: -2 * self.g1 - self.n1, c0: 2 - 2 * self.g0 - self.n0 }
    }
}

impl Default for SurfaceModel {
    /// `m` copies of the default block glued in a cycle: genus `m + 1`,
    /// `m` punctures.
    fn default() -> Self {
        SurfaceModel { g1: 1, g0: 1, n1: 1, n0: 0 }
    }
}

/// Parameters of the Penner block transition matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct PennerSpec {
    pub r: usize,
    pub m: usize,
    pub mode: ShadowMode,
    pub blocks: BTreeMap<BlockLabel, IntMatrix>,
    pub chi: ChiModel,
    pub surface: Option<SurfaceModel>,
}

impl PennerSpec {
    /// Every block the all-ones `r x r` matrix, the smallest strictly
    /// positive choice.
    pub fn all_ones(r: usize, m: usize) -> Self {
        let ones = IntMatrix::new(r, r, vec![BigInt::from(1); r * r]).expect("r >= 1");
        PennerSpec::with_blocks(r, m, BlockLabel::ALL.iter().map(|&l| (l, ones.clone())).collect())
    }

    pub fn with_blocks(r: usize, m: usize, blocks: BTreeMap<BlockLabel, IntMatrix>) -> Self {
        PennerSpec {
            r,
            m,
            mode: ShadowMode::Exact,
            blocks,
            chi: ChiModel::default(),
            surface: Some(SurfaceModel::default()),
        }
    }

    pub fn block(&self, label: BlockLabel) -> Result<&IntMatrix> {
        self.blocks.get(&label).ok_or_else(|| Error::Input(format!("block {label} missing")))
    }

    pub fn dim(&self) -> usize {
        self.r * self.m
    }

    /// Structural checks: `r >= 1`, `m >= 4`, eight nonnegative `r x r`
    /// blocks, and a surface model consistent with the chi model.
    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::Input("block dimension r must be positive".into()));
        }
        if self.m < 4 {
            return Err(Error::Input(format!("m must be at least 4, got {}", self.m)));
        }
        for label in BlockLabel::ALL {
            let b = self.block(label)?;
            if b.rows() != self.r || b.cols() != self.r {
                return Err(Error::Input(format!(
                    "block {label} is {}x{}, expected {r}x{r}",
                    b.rows(),
                    b.cols(),
                    r = self.r
                )));
            }
            if !b.has_nonneg_entries() {
                return Err(Error::Input(format!("block {label} has a negative entry")));
            }
        }
        if self.blocks.len() != BlockLabel::ALL.len() {
            return Err(Error::Input("unexpected extra blocks".into()));
        }
        if let Some(surface) = &self.surface {
            if surface.chi_model() != self.chi {
                return Err(Error::Input(format!(
                    "surface model implies chi(m) = {}m + {}, but chi is {}m + {}",
                    surface.chi_model().c1,
                    surface.chi_model().c0,
                    self.chi.c1,
                    self.chi.c0
                )));
            }
        }
        Ok(())
    }

    /// [`validate`](Self::validate) plus the positivity hypotheses of the
    /// full-support argument: `F`, `G`, `H` strictly positive and `A..E`
    /// nonzero.
    pub fn validate_strict(&self) -> Result<()> {
        self.validate()?;
        for label in [BlockLabel::F, BlockLabel::G, BlockLabel::H] {
            if !self.block(label)?.is_positive() {
                return Err(Error::Input(format!("block {label} must be strictly positive")));
            }
        }
        for label in [BlockLabel::A, BlockLabel::B, BlockLabel::C, BlockLabel::D, BlockLabel::E] {
            if self.block(label)?.is_zero() {
                return Err(Error::Input(format!("block {label} must be nonzero")));
            }
        }
        Ok(())
    }

    /// Block placements `(block_row, block_col, matrix)`, one-based.
    fn placements(&self) -> Result<Vec<(usize, usize, IntMatrix)>> {
        use BlockLabel::*;
        let m = self.m;
        let get = |l| self.block(l).cloned();
        let f = get(F)?;
        let f2 = mat_mul(&f, &f)?;
        let mut out = vec![
            (1, 1, get(A)?),
            (1, 2, get(D)?),
            (1, m, f.clone()),
            (2, 1, get(B)?),
            (2, 2, get(E)?),
            (2, 3, get(G)?),
            (2, m, f2),
        ];
        for i in 3..m {
            out.push((i, i - 1, f.clone()));
            out.push((i, i, get(H)?));
            out.push((i, i + 1, get(G)?));
        }
        out.push((m, 1, get(C)?));
        out.push((m, m - 1, f));
        out.push((m, m, get(H)?));
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PennerSpecJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let spec = PennerSpec::try_from(raw)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PennerSpecJson::from(self)).expect("spec serializes")
    }
}

impl Default for PennerSpec {
    fn default() -> Self {
        PennerSpec::all_ones(1, 6)
    }
}

/// Builds the `rm x rm` block transition matrix.
pub fn build_penner(spec: &PennerSpec) -> Result<IntMatrix> {
    spec.validate()?;
    let r = spec.r;
    let mut out = IntMatrix::zeros(spec.dim(), spec.dim());
    for (bi, bj, block) in spec.placements()? {
        out.place_block((bi - 1) * r, (bj - 1) * r, &block)?;
    }
    Ok(out)
}

/// `m x m` 0/1 matrix marking the nonzero blocks.
pub fn block_pattern(spec: &PennerSpec) -> Result<IntMatrix> {
    spec.validate()?;
    let mut out = IntMatrix::zeros(spec.m, spec.m);
    for (bi, bj, block) in spec.placements()? {
        if !block.is_zero() {
            out.set(bi - 1, bj - 1, BigInt::from(1));
        }
    }
    Ok(out)
}

/// All indices of the given one-based blocks.
pub fn expand_blocks(r: usize, m: usize, blocks: &[usize]) -> SupportSet {
    SupportSet::new(r * m, blocks.iter().flat_map(|&b| (b - 1) * r + 1..=b * r)).expect("blocks within range")
}

/// One-based blocks touched by a support.
pub fn blocks_touched(r: usize, support: &SupportSet) -> Vec<usize> {
    let mut blocks: Vec<usize> = support.members().iter().map(|&i| (i - 1) / r + 1).collect();
    blocks.dedup();
    blocks
}

/// Supports of `P^s 1_block` for `s = 0..=t`, where `P` is the block
/// transition matrix and `1_block` the indicator of `start_block`.
pub fn shadow(spec: &PennerSpec, start_block: usize, t: usize) -> Result<Vec<SupportSet>> {
    spec.validate()?;
    if start_block == 0 || start_block > spec.m {
        return Err(Error::Input(format!("start block {start_block} outside [1, {}]", spec.m)));
    }
    let start = expand_blocks(spec.r, spec.m, &[start_block]);
    match spec.mode {
        ShadowMode::Exact => {
            let p = build_penner(spec)?;
            let mut v: Vec<BigInt> = start.indicator();
            let mut trace = vec![start];
            for _ in 0..t {
                v = p.mul_vec(&v)?;
                trace.push(SupportSet::of_vector(&v));
            }
            Ok(trace)
        }
        ShadowMode::Pattern => {
            let pattern = block_pattern(spec)?;
            let mut blocks = SupportSet::new(spec.m, [start_block])?;
            let mut trace = vec![start];
            for _ in 0..t {
                blocks = support_propagate(&pattern, &blocks)?;
                trace.push(expand_blocks(spec.r, spec.m, blocks.members()));
            }
            Ok(trace)
        }
    }
}

/// Certificate that the image of the middle block never reaches the last
/// block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishCertificate {
    pub r: usize,
    pub m: usize,
    pub start_block: usize,
    /// Inclusive one-based index range of the starting block,
    /// `r * (start_block - 1) + 1 ..= r * start_block`.
    pub k_low: usize,
    pub k_high: usize,
    pub t: usize,
    pub certified: bool,
    pub support_trace: Vec<SupportSet>,
    /// Indices of the last block present in the final support.
    pub offending: Vec<usize>,
}

/// Middle block used as the starting support: `m/2` for even `m`,
/// `(m+1)/2` for odd `m`.
pub fn start_block(m: usize) -> usize {
    m.div_ceil(2)
}

/// Number of applications of the block matrix: `floor(m/2) - 1`.
pub fn vanishing_steps(m: usize) -> usize {
    m / 2 - 1
}

pub fn vanishing_certificate(spec: &PennerSpec) -> Result<VanishCertificate> {
    let p = build_penner(spec)?;
    certify_matrix(&p, spec.r, spec.m)
}

/// Runs the vanishing walk on an arbitrary `rm x rm` matrix. For matrices of
/// Penner shape with nonnegative blocks the walk always certifies; other
/// matrices may fail, and the offending last-block indices are reported.
pub fn certify_matrix(p: &IntMatrix, r: usize, m: usize) -> Result<VanishCertificate> {
    if m < 4 || r == 0 {
        return Err(Error::Input(format!("need r >= 1 and m >= 4, got r = {r}, m = {m}")));
    }
    if p.rows() != r * m || p.cols() != r * m {
        return Err(Error::DimensionMismatch(format!("expected a {0}x{0} matrix", r * m)));
    }
    let c = start_block(m);
    let t = vanishing_steps(m);
    let start = expand_blocks(r, m, &[c]);
    let mut v: Vec<BigInt> = start.indicator();
    let mut support_trace = vec![start];
    for _ in 0..t {
        v = p.mul_vec(&v)?;
        support_trace.push(SupportSet::of_vector(&v));
    }
    let last = support_trace.last().expect("trace has t + 1 entries");
    let offending: Vec<usize> = last.members().iter().copied().filter(|&i| i > r * (m - 1)).collect();
    Ok(VanishCertificate {
        r,
        m,
        start_block: c,
        k_low: r * (c - 1) + 1,
        k_high: r * c,
        t,
        certified: offending.is_empty(),
        support_trace,
        offending,
    })
}

/// Certificates for many specs, in input order.
pub fn certify_all(specs: Vec<PennerSpec>, exec: Execution) -> Vec<Result<VanishCertificate>> {
    map_ordered(specs, exec, |spec| vanishing_certificate(&spec))
}

/// `2 / (m (floor(m/2) - 1))`.
pub fn penner_exact_bound(m: usize) -> Rational {
    ratio(2, (m * (m / 2 - 1)) as i64)
}

/// `4 / (m^2 - 2m)`.
pub fn penner_closed_form(m: usize) -> Rational {
    ratio(4, (m * m - 2 * m) as i64)
}

/// The two upper-bound expressions for `l(phi_m)`.
///
/// `exact_bound` is the bound the certificate proves. `closed_form` equals it
/// for even `m`; for odd `m` it is strictly smaller, so only `exact_bound`
/// is a valid upper bound there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PennerUpperBound {
    pub m: usize,
    pub exact_bound: Rational,
    pub closed_form: Rational,
}

impl PennerUpperBound {
    pub fn closed_form_dominates(&self) -> bool {
        self.exact_bound <= self.closed_form
    }
}

pub fn penner_upper_bound(spec: &PennerSpec) -> Result<PennerUpperBound> {
    let cert = vanishing_certificate(spec)?;
    if !cert.certified {
        return Err(Error::Contract(format!(
            "vanishing certificate failed for m = {}: last-block indices {:?} reached",
            spec.m, cert.offending
        )));
    }
    Ok(PennerUpperBound { m: spec.m, exact_bound: penner_exact_bound(spec.m), closed_form: penner_closed_form(spec.m) })
}

// ---- JSON ----

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Cell {
    Text(String),
    Int(i64),
}

#[derive(Serialize, Deserialize)]
struct PennerSpecJson {
    r: usize,
    m: usize,
    #[serde(default)]
    mode: ShadowMode,
    blocks: BTreeMap<String, Vec<Vec<Cell>>>,
    #[serde(default)]
    chi: Option<ChiModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    surface: Option<SurfaceModel>,
}

impl TryFrom<PennerSpecJson> for PennerSpec {
    type Error = Error;

    fn try_from(raw: PennerSpecJson) -> Result<Self> {
        let mut blocks = BTreeMap::new();
        for (name, rows) in raw.blocks {
            let label = match name.as_str() {
                "A" => BlockLabel::A,
                "B" => BlockLabel::B,
                "C" => BlockLabel::C,
                "D" => BlockLabel::D,
                "E" => BlockLabel::E,
                "F" => BlockLabel::F,
                "G" => BlockLabel::G,
                "H" => BlockLabel::H,
                other => return Err(Error::Input(format!("unknown block label {other:?}"))),
            };
            let rows = rows
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|c| match c {
                            Cell::Int(v) => Ok(BigInt::from(v)),
                            Cell::Text(s) => s
                                .trim()
                                .parse::<BigInt>()
                                .map_err(|_| Error::Parse(format!("block {name}: {s:?} is not an integer"))),
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.insert(label, IntMatrix::from_rows(&rows)?);
        }
        // chi defaults from the surface model when only that is given.
        let (chi, surface) = match (raw.chi, raw.surface) {
            (Some(chi), surface) => (chi, surface),
            (None, Some(surface)) => (surface.chi_model(), Some(surface)),
            (None, None) => (ChiModel::default(), Some(SurfaceModel::default())),
        };
        Ok(PennerSpec { r: raw.r, m: raw.m, mode: raw.mode, blocks, chi, surface })
    }
}

impl From<&PennerSpec> for PennerSpecJson {
    fn from(spec: &PennerSpec) -> Self {
        PennerSpecJson {
            r: spec.r,
            m: spec.m,
            mode: spec.mode,
            blocks: spec
                .blocks
                .iter()
                .map(|(l, b)| {
                    let rows = b.to_rows().into_iter().map(|row| row.into_iter().map(|e| Cell::Text(e.to_string())).collect()).collect();
                    (l.to_string(), rows)
                })
                .collect(),
            chi: Some(spec.chi),
            surface: spec.surface,
        }
    }
}

#[derive(Serialize)]
struct CertificateJson<'a> {
    r: usize,
    m: usize,
    start_block: usize,
    k_low: usize,
    k_high: usize,
    k_range_note: &'static str,
    t: usize,
    certified: bool,
    support_trace: Vec<&'a [usize]>,
    offending: &'a [usize],
}

impl VanishCertificate {
    /// JSON with supports as sorted one-based index arrays.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(CertificateJson {
            r: self.r,
            m: self.m,
            start_block: self.start_block,
            k_low: self.k_low,
            k_high: self.k_high,
            k_range_note: "starting indices (r*(c-1), r*c] of the middle block c; upper limit read with the factor r",
            t: self.t,
            certified: self.certified,
            support_trace: self.support_trace.iter().map(SupportSet::members).collect(),
            offending: &self.offending,
        })
        .expect("certificate serializes")
    }
}

/// Does `support` cover exactly the blocks `lo..=hi`?
pub fn is_block_interval(r: usize, m: usize, support: &SupportSet, lo: usize, hi: usize) -> bool {
    let blocks: Vec<usize> = (lo..=hi).collect();
    *support == expand_blocks(r, m, &blocks)
}
