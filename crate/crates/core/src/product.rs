//! CSS codes from products of classical codes.
//!
//! Conventions: `hx` holds the X-type stabilizers (they detect Z errors) and
//! `hz` the Z-type stabilizers (they detect X errors). For seeds `h1: m1 x n1`
//! and `h2: m2 x n2` the hypergraph product is
//!
//! ```text
//! hx = [ I_n1 ⊗ h2   | h1ᵀ ⊗ I_m2 ]
//! hz = [ h1 ⊗ I_n2   | I_m1 ⊗ h2ᵀ ]
//! ```
//!
//! so there are `n1·n2 + m1·m2` qubits, and the left sector ends at column
//! `n1·n2`.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::gf2::{BinaryMatrix, BitVec, MatrixError, RowBasis};
use crate::protograph::{Protograph, ProtographError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Protograph(#[from] ProtographError),
    #[error("hx has {hx} columns but hz has {hz}")]
    ColumnMismatch { hx: usize, hz: usize },
    #[error("stabilizers do not commute: {which} is nonzero at ({row}, {col})")]
    NotCommuting {
        which: &'static str,
        row: usize,
        col: usize,
    },
    #[error("metacheck {which} does not annihilate its checks at ({row}, {col})")]
    Metacheck {
        which: &'static str,
        row: usize,
        col: usize,
    },
    #[error("split {split} is outside 0..={n}")]
    InvalidSplit { split: usize, n: usize },
    #[error("code encodes no logical qubits")]
    NoLogicals,
    #[error("search budget must be at least 1")]
    ZeroBudget,
    #[error("lift size must be at least 1")]
    ZeroLift,
    #[error("code file line {line}: {message}")]
    Format { line: usize, message: String },
}

/// A CSS code with optional metachecks and a symplectic-paired logical basis
/// (`lx · lzᵀ = I`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    pub hx: BinaryMatrix,
    pub hz: BinaryMatrix,
    pub mx: Option<BinaryMatrix>,
    pub mz: Option<BinaryMatrix>,
    pub lx: BinaryMatrix,
    pub lz: BinaryMatrix,
    pub n: usize,
    pub k: usize,
    /// Column index where the second qubit sector begins.
    pub split: usize,
}

impl CssCode {
    /// Validates the commutation and metacheck conditions and derives the
    /// logical operators.
    pub fn new(
        hx: BinaryMatrix,
        hz: BinaryMatrix,
        mx: Option<BinaryMatrix>,
        mz: Option<BinaryMatrix>,
        split: usize,
    ) -> Result<Self, CodeError> {
        let n = hx.cols();
        if split > n {
            return Err(CodeError::InvalidSplit { split, n });
        }
        let (lx, lz) = compute_logicals(&hx, &hz)?;
        let code = CssCode {
            k: lx.rows(),
            hx,
            hz,
            mx,
            mz,
            lx,
            lz,
            n,
            split,
        };
        code.check()?;
        Ok(code)
    }

    /// Re-verifies every structural condition, reporting the first failure.
    pub fn check(&self) -> Result<(), CodeError> {
        if self.hx.cols() != self.hz.cols() {
            return Err(CodeError::ColumnMismatch {
                hx: self.hx.cols(),
                hz: self.hz.cols(),
            });
        }
        zero_or(self.hx.matmul(&self.hz.transpose())?, |row, col| CodeError::NotCommuting {
            which: "hx·hzᵀ",
            row,
            col,
        })?;
        if let Some(mx) = &self.mx {
            zero_or(mx.matmul(&self.hx)?, |row, col| CodeError::Metacheck { which: "mx·hx", row, col })?;
        }
        if let Some(mz) = &self.mz {
            zero_or(mz.matmul(&self.hz)?, |row, col| CodeError::Metacheck { which: "mz·hz", row, col })?;
        }
        if self.k > 0 {
            zero_or(self.hz.matmul(&self.lx.transpose())?, |row, col| CodeError::NotCommuting {
                which: "hz·lxᵀ",
                row,
                col,
            })?;
            zero_or(self.hx.matmul(&self.lz.transpose())?, |row, col| CodeError::NotCommuting {
                which: "hx·lzᵀ",
                row,
                col,
            })?;
        }
        Ok(())
    }

    pub fn has_metachecks(&self) -> bool {
        self.mx.is_some() && self.mz.is_some()
    }

    pub fn rank_hx(&self) -> usize {
        self.hx.rank()
    }

    pub fn rank_hz(&self) -> usize {
        self.hz.rank()
    }

    /// Serializes into the line-oriented code file format.
    pub fn export(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n {}", self.n).unwrap();
        writeln!(out, "k {}", self.k).unwrap();
        writeln!(out, "split {}", self.split).unwrap();
        let sections: [(&str, Option<&BinaryMatrix>); 6] = [
            ("hx", Some(&self.hx)),
            ("hz", Some(&self.hz)),
            ("mx", self.mx.as_ref()),
            ("mz", self.mz.as_ref()),
            ("lx", Some(&self.lx)),
            ("lz", Some(&self.lz)),
        ];
        for (name, m) in sections {
            writeln!(out, "[{name}]").unwrap();
            match m {
                Some(m) => out.push_str(&m.to_text()),
                None => out.push_str("none\n"),
            }
        }
        out
    }

    /// Parses a code file without validating it, so that damaged files can
    /// still be inspected. Call [`CssCode::check`] afterwards.
    pub fn import(text: &str) -> Result<CssCode, CodeError> {
        let lines: Vec<&str> = text.lines().collect();
        let mut header = [None::<usize>; 3];
        let mut mats: [Option<BinaryMatrix>; 6] = Default::default();
        let names = ["hx", "hz", "mx", "mz", "lx", "lz"];
        let mut i = 0;
        while i < lines.len() {
            let line = lines[i].trim();
            let line_no = i + 1;
            if line.is_empty() {
                i += 1;
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let slot = names.iter().position(|n| *n == name).ok_or_else(|| CodeError::Format {
                    line: line_no,
                    message: format!("unknown section {name:?}"),
                })?;
                let body_start = i + 1;
                let first = lines.get(body_start).map(|l| l.trim()).unwrap_or("");
                if first == "none" {
                    i = body_start + 1;
                    continue;
                }
                let rows: usize = first
                    .split_whitespace()
                    .next()
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(|| CodeError::Format {
                        line: body_start + 1,
                        message: "expected matrix header \"rows cols\"".into(),
                    })?;
                let end = (body_start + 1 + rows).min(lines.len());
                let block = lines[body_start..end].join("\n");
                let m = BinaryMatrix::parse_text(&block).map_err(|e| CodeError::Format {
                    line: body_start + 1,
                    message: e.to_string(),
                })?;
                mats[slot] = Some(m);
                i = end;
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or("");
            let slot = ["n", "k", "split"].iter().position(|k| *k == key).ok_or_else(|| CodeError::Format {
                line: line_no,
                message: format!("unexpected line {line:?}"),
            })?;
            let value = parts.next().and_then(|v| v.parse().ok()).ok_or_else(|| CodeError::Format {
                line: line_no,
                message: format!("{key} needs an integer value"),
            })?;
            header[slot] = Some(value);
            i += 1;
        }
        let missing = |what: &str| CodeError::Format {
            line: lines.len(),
            message: format!("missing {what}"),
        };
        let [hx, hz, mx, mz, lx, lz] = mats;
        let hx = hx.ok_or_else(|| missing("[hx]"))?;
        let hz = hz.ok_or_else(|| missing("[hz]"))?;
        let n = header[0].ok_or_else(|| missing("n"))?;
        let k = header[1].ok_or_else(|| missing("k"))?;
        let split = header[2].ok_or_else(|| missing("split"))?;
        if hx.cols() != n {
            return Err(CodeError::Format {
                line: 1,
                message: format!("n = {n} but hx has {} columns", hx.cols()),
            });
        }
        Ok(CssCode {
            lx: lx.unwrap_or_else(|| BinaryMatrix::zeros(0, n)),
            lz: lz.unwrap_or_else(|| BinaryMatrix::zeros(0, n)),
            hx,
            hz,
            mx,
            mz,
            n,
            k,
            split,
        })
    }
}

fn zero_or(m: BinaryMatrix, err: impl FnOnce(usize, usize) -> CodeError) -> Result<(), CodeError> {
    match m.first_nonzero() {
        None => Ok(()),
        Some((r, c)) => Err(err(r, c)),
    }
}

/// Hypergraph product of two classical parity-check matrices.
pub fn hgp(h1: &BinaryMatrix, h2: &BinaryMatrix) -> Result<CssCode, CodeError> {
    let (m1, n1) = h1.shape();
    let (m2, n2) = h2.shape();
    let hx = BinaryMatrix::hstack(&[
        &BinaryMatrix::identity(n1).kron(h2)?,
        &h1.transpose().kron(&BinaryMatrix::identity(m2))?,
    ])?;
    let hz = BinaryMatrix::hstack(&[
        &h1.kron(&BinaryMatrix::identity(n2))?,
        &BinaryMatrix::identity(m1).kron(&h2.transpose())?,
    ])?;
    CssCode::new(hx, hz, None, None, n1 * n2)
}

/// Symbolic hypergraph-product blocks over the ring of circulants:
/// `(hx_left, hx_right, hz_left, hz_right)`.
fn lifted_product_blocks(a1: &Protograph, a2: &Protograph) -> [Protograph; 4] {
    let (m1, n1) = a1.shape();
    let (m2, n2) = a2.shape();
    [
        Protograph::identity(n1).kron(a2),
        a1.transpose().kron(&Protograph::identity(m2)),
        a1.kron(&Protograph::identity(n2)),
        Protograph::identity(m1).kron(&a2.transpose()),
    ]
}

/// Lifted product: the hypergraph-product layout assembled over the ring and
/// then lifted, so the block length is `(n1·n2 + m1·m2)·L`.
pub fn lifted_product(a1: &Protograph, a2: &Protograph, lift: usize) -> Result<CssCode, CodeError> {
    if lift == 0 {
        return Err(CodeError::ZeroLift);
    }
    let [xl, xr, zl, zr] = lifted_product_blocks(a1, a2);
    let hx = Protograph::hstack(&[&xl, &xr])?.lift(lift)?;
    let hz = Protograph::hstack(&[&zl, &zr])?.lift(lift)?;
    CssCode::new(hx, hz, None, None, xl.cols() * lift)
}

/// Lifted product with the Hadamard-rotated layout applied to the symbolic
/// blocks before lifting.
pub fn lifted_product_tailored(a1: &Protograph, a2: &Protograph, lift: usize) -> Result<TailoredCode, CodeError> {
    let base = lifted_product(a1, a2, lift)?;
    let [xl, xr, zl, zr] = lifted_product_blocks(a1, a2);
    let zero = |p: &Protograph| Protograph::zeros(p.rows(), p.cols());
    let x_checks = Symplectic {
        x: Protograph::hstack(&[&xl, &zero(&xr)])?.lift(lift)?,
        z: Protograph::hstack(&[&zero(&xl), &xr])?.lift(lift)?,
    };
    let z_checks = Symplectic {
        x: Protograph::hstack(&[&zero(&zl), &zr])?.lift(lift)?,
        z: Protograph::hstack(&[&zl, &zero(&zr)])?.lift(lift)?,
    };
    let split = base.split;
    let tailored = TailoredCode {
        x_checks,
        z_checks,
        logical_x: Symplectic::x_type(&base.lx).rotate(split),
        logical_z: Symplectic::z_type(&base.lz).rotate(split),
        mx: base.mx,
        mz: base.mz,
        n: base.n,
        k: base.k,
        split,
    };
    tailored.check()?;
    Ok(tailored)
}

/// Pauli operators as rows of a pair of binary matrices: `x` marks X
/// components, `z` marks Z components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symplectic {
    pub x: BinaryMatrix,
    pub z: BinaryMatrix,
}

impl Symplectic {
    pub fn x_type(m: &BinaryMatrix) -> Self {
        Self {
            x: m.clone(),
            z: BinaryMatrix::zeros(m.rows(), m.cols()),
        }
    }

    pub fn z_type(m: &BinaryMatrix) -> Self {
        Self {
            x: BinaryMatrix::zeros(m.rows(), m.cols()),
            z: m.clone(),
        }
    }

    pub fn rows(&self) -> usize {
        self.x.rows()
    }

    /// Applies a Hadamard to every qubit at index `split` or above.
    pub fn rotate(&self, split: usize) -> Self {
        let n = self.x.cols();
        let xl = self.x.column_range(0, split);
        let xr = self.x.column_range(split, n);
        let zl = self.z.column_range(0, split);
        let zr = self.z.column_range(split, n);
        Self {
            x: BinaryMatrix::hstack(&[&xl, &zr]).expect("equal row counts"),
            z: BinaryMatrix::hstack(&[&zl, &xr]).expect("equal row counts"),
        }
    }

    /// Symplectic inner products with the rows of `other`.
    pub fn commutator(&self, other: &Symplectic) -> Result<BinaryMatrix, MatrixError> {
        self.x.matmul(&other.z.transpose())?.add(&self.z.matmul(&other.x.transpose())?)
    }

    /// Outcome of measuring each row on the Pauli error `(ex, ez)`.
    pub fn syndrome(&self, ex: &BitVec, ez: &BitVec) -> Result<BitVec, MatrixError> {
        Ok(self.x.mul_vec(ez)?.xor(&self.z.mul_vec(ex)?))
    }
}

/// A CSS code with a Hadamard applied to every qubit in columns
/// `split..n`. The stabilizers are no longer of pure X or Z type, so they are
/// kept in symplectic form; the row groups still descend from `hx` and `hz`
/// and the metachecks act on them unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailoredCode {
    pub x_checks: Symplectic,
    pub z_checks: Symplectic,
    pub logical_x: Symplectic,
    pub logical_z: Symplectic,
    pub mx: Option<BinaryMatrix>,
    pub mz: Option<BinaryMatrix>,
    pub n: usize,
    pub k: usize,
    pub split: usize,
}

impl TailoredCode {
    pub fn check(&self) -> Result<(), CodeError> {
        let groups = [&self.x_checks, &self.z_checks];
        for a in groups {
            for b in groups {
                zero_or(a.commutator(b)?, |row, col| CodeError::NotCommuting {
                    which: "rotated stabilizers",
                    row,
                    col,
                })?;
            }
            for l in [&self.logical_x, &self.logical_z] {
                zero_or(a.commutator(l)?, |row, col| CodeError::NotCommuting {
                    which: "rotated stabilizer and logical",
                    row,
                    col,
                })?;
            }
        }
        if let Some(mx) = &self.mx {
            let s = &self.x_checks;
            zero_or(mx.matmul(&s.x)?, |row, col| CodeError::Metacheck { which: "mx", row, col })?;
            zero_or(mx.matmul(&s.z)?, |row, col| CodeError::Metacheck { which: "mx", row, col })?;
        }
        if let Some(mz) = &self.mz {
            let s = &self.z_checks;
            zero_or(mz.matmul(&s.x)?, |row, col| CodeError::Metacheck { which: "mz", row, col })?;
            zero_or(mz.matmul(&s.z)?, |row, col| CodeError::Metacheck { which: "mz", row, col })?;
        }
        Ok(())
    }

    /// Undoes the rotation, recovering the CSS code.
    pub fn untailor(&self) -> Result<CssCode, CodeError> {
        let s = self.split;
        let xc = self.x_checks.rotate(s);
        let zc = self.z_checks.rotate(s);
        let lx = self.logical_x.rotate(s);
        let lz = self.logical_z.rotate(s);
        for (which, part) in [("x_checks", &xc.z), ("z_checks", &zc.x), ("logical_x", &lx.z), ("logical_z", &lz.x)] {
            zero_or(part.clone(), |row, col| CodeError::NotCommuting { which, row, col })?;
        }
        let code = CssCode {
            hx: xc.x,
            hz: zc.z,
            mx: self.mx.clone(),
            mz: self.mz.clone(),
            lx: lx.x,
            lz: lz.z,
            n: self.n,
            k: self.k,
            split: s,
        };
        code.check()?;
        Ok(code)
    }
}

/// Hadamard rotation of every qubit at column `split` or above.
///
/// The literal CSS half-swap (`hx′ = [hx_L | hz_R]`) breaks commutation for
/// the product codes built here, so the rotation is carried out on the
/// symplectic representation, which preserves all commutation relations
/// and is an involution.
pub fn bias_tailor_swap(code: &CssCode, split: usize) -> Result<TailoredCode, CodeError> {
    if split > code.n {
        return Err(CodeError::InvalidSplit { split, n: code.n });
    }
    let tailored = TailoredCode {
        x_checks: Symplectic::x_type(&code.hx).rotate(split),
        z_checks: Symplectic::z_type(&code.hz).rotate(split),
        logical_x: Symplectic::x_type(&code.lx).rotate(split),
        logical_z: Symplectic::z_type(&code.lz).rotate(split),
        mx: code.mx.clone(),
        mz: code.mz.clone(),
        n: code.n,
        k: code.k,
        split,
    };
    tailored.check()?;
    Ok(tailored)
}

/// Logical bases: `lx` spans `ker(hz)` modulo `rowspace(hx)` and `lz` spans
/// `ker(hx)` modulo `rowspace(hz)`. `lz` is re-paired so that `lx·lzᵀ = I`.
pub fn compute_logicals(hx: &BinaryMatrix, hz: &BinaryMatrix) -> Result<(BinaryMatrix, BinaryMatrix), CodeError> {
    if hx.cols() != hz.cols() {
        return Err(CodeError::ColumnMismatch {
            hx: hx.cols(),
            hz: hz.cols(),
        });
    }
    zero_or(hx.matmul(&hz.transpose())?, |row, col| CodeError::NotCommuting {
        which: "hx·hzᵀ",
        row,
        col,
    })?;
    let n = hx.cols();
    let lx = quotient_basis(&hz.nullspace_basis(), hx, n);
    let lz = quotient_basis(&hx.nullspace_basis(), hz, n);
    debug_assert_eq!(lx.rows(), lz.rows());
    if lx.rows() == 0 {
        return Ok((lx, lz));
    }
    let pairing = lx.matmul(&lz.transpose())?;
    let inv = pairing.inverse().expect("logical pairing is nondegenerate");
    let lz = inv.transpose().matmul(&lz)?;
    Ok((lx, lz))
}

/// Rows of `space` completing a basis of `span(space)` modulo `span(sub)`.
fn quotient_basis(space: &BinaryMatrix, sub: &BinaryMatrix, n: usize) -> BinaryMatrix {
    let mut basis = RowBasis::new(n);
    for r in 0..sub.rows() {
        basis.insert(&sub.row(r));
    }
    let mut picked = Vec::new();
    for r in 0..space.rows() {
        let v = space.row(r);
        if basis.insert(&v) {
            picked.push(v);
        }
    }
    BinaryMatrix::from_bitvec_rows(n, &picked)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceConfig {
    /// Random information-set restarts per sector.
    pub budget: usize,
    pub seed: u64,
    /// Largest `C(n, w)` for which weight level `w` is searched exhaustively.
    pub exhaustive_cap: u128,
}

impl Default for DistanceConfig {
    fn default() -> Self {
        Self {
            budget: 200,
            seed: 0,
            exhaustive_cap: 20_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceEstimate {
    /// Proven lower bound: every weight below it was exhausted.
    pub lower_hint: usize,
    pub upper_bound: usize,
    /// A nontrivial logical operator of weight `upper_bound`.
    pub witness: BitVec,
    /// True when the witness is an X-type operator.
    pub witness_is_x: bool,
}

impl DistanceEstimate {
    pub fn is_exact(&self) -> bool {
        self.lower_hint == self.upper_bound
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Bounds the code distance: a randomized information-set search gives an
/// upper bound, exhaustive enumeration of low weights gives a lower bound.
pub fn estimate_distance(code: &CssCode, cfg: &DistanceConfig) -> Result<DistanceEstimate, CodeError> {
    if code.k == 0 {
        return Err(CodeError::NoLogicals);
    }
    if cfg.budget == 0 {
        return Err(CodeError::ZeroBudget);
    }
    // X-type logicals live in ker(hz) and are detected by lz; Z-type dually.
    let sectors = [(&code.hz, &code.lz, true), (&code.hx, &code.lx, false)];

    let mut cleared = 0;
    let mut best: Option<(BitVec, bool)> = None;
    for w in 1..=code.n {
        if binomial(code.n, w) > cfg.exhaustive_cap {
            break;
        }
        for &(checks, dual, is_x) in &sectors {
            if let Some(v) = exhaustive_level(checks, dual, w) {
                best = Some((v, is_x));
                break;
            }
        }
        if best.is_some() {
            break;
        }
        cleared = w;
    }
    if let Some((witness, witness_is_x)) = best {
        let w = witness.weight();
        return Ok(DistanceEstimate {
            lower_hint: w,
            upper_bound: w,
            witness,
            witness_is_x,
        });
    }

    let mut found: Option<(usize, usize, BitVec, bool)> = None;
    for (sector, &(checks, dual, is_x)) in sectors.iter().enumerate() {
        let kernel = checks.nullspace_basis();
        let hit = (0..cfg.budget)
            .into_par_iter()
            .filter_map(|restart| {
                let stream = (sector * cfg.budget + restart) as u64;
                information_set_sample(&kernel, dual, cfg.seed, stream).map(|v| (v.weight(), restart, v))
            })
            .min_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        if let Some((w, r, v)) = hit {
            let better = found.as_ref().is_none_or(|f| w < f.0);
            if better {
                found = Some((w, r, v, is_x));
            }
        }
    }
    let (upper, _, witness, witness_is_x) = found.expect("a code with k > 0 has a nontrivial logical");
    Ok(DistanceEstimate {
        lower_hint: (cleared + 1).min(upper),
        upper_bound: upper,
        witness,
        witness_is_x,
    })
}

/// Lowest-weight nontrivial logical among the rows of the kernel basis
/// reduced with pivots in a random column order.
fn information_set_sample(kernel: &BinaryMatrix, dual: &BinaryMatrix, seed: u64, stream: u64) -> Option<BitVec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut order: Vec<usize> = (0..kernel.cols()).collect();
    order.shuffle(&mut rng);
    let ech = crate::gf2::Echelon::with_pivot_order(kernel.clone(), None, &order);
    let reduced = ech.reduced();
    let rows: Vec<BitVec> = (0..ech.rank()).map(|r| reduced.row(r)).collect();
    let is_logical = |v: &BitVec| !dual.mul_vec(v).expect("matching width").is_zero();
    let mut best: Option<BitVec> = None;
    let mut consider = |v: BitVec| {
        if is_logical(&v) && best.as_ref().is_none_or(|b| v.weight() < b.weight()) {
            best = Some(v);
        }
    };
    for (i, a) in rows.iter().enumerate() {
        consider(a.clone());
        for b in &rows[i + 1..] {
            consider(a.xor(b));
        }
    }
    best
}

/// Searches all weight-`w` vectors for one in `ker(checks)` that is detected
/// by `dual`, i.e. a nontrivial logical.
fn exhaustive_level(checks: &BinaryMatrix, dual: &BinaryMatrix, w: usize) -> Option<BitVec> {
    let n = checks.cols();
    let stacked = BinaryMatrix::vstack(&[checks, dual]).expect("matching width");
    let split = checks.rows();
    let cols: Vec<BitVec> = (0..n).map(|c| stacked.column(c)).collect();
    let mut chosen = Vec::with_capacity(w);
    let acc = BitVec::zeros(stacked.rows());
    fn rec(cols: &[BitVec], split: usize, start: usize, w: usize, acc: &BitVec, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == w {
            let syndrome_zero = (0..split).all(|i| !acc.get(i));
            return syndrome_zero && (split..acc.len()).any(|i| acc.get(i));
        }
        let remaining = w - chosen.len();
        for c in start..=cols.len() - remaining {
            chosen.push(c);
            if rec(cols, split, c + 1, w, &acc.xor(&cols[c]), chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    if rec(&cols, split, 0, w, &acc, &mut chosen) {
        Some(BitVec::from_support(n, chosen))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep3() -> BinaryMatrix {
        BinaryMatrix::from_rows(&[[1, 1, 0], [0, 1, 1]])
    }

    #[test]
    fn surface_code_parameters() {
        let code = hgp(&rep3(), &rep3()).unwrap();
        assert_eq!((code.n, code.k), (13, 1));
        assert_eq!(code.split, 9);
        assert_eq!(code.rank_hx() + code.rank_hz(), 12);
        let d = estimate_distance(&code, &DistanceConfig::default()).unwrap();
        assert_eq!((d.lower_hint, d.upper_bound), (3, 3));
    }

    #[test]
    fn scalar_seeds_have_no_logicals() {
        let one = BinaryMatrix::from_rows(&[[1]]);
        let code = hgp(&one, &one).unwrap();
        assert_eq!((code.n, code.k), (2, 0));
        assert_eq!(code.lx.rows(), 0);
        assert_eq!(
            estimate_distance(&code, &DistanceConfig::default()),
            Err(CodeError::NoLogicals)
        );
    }

    #[test]
    fn logical_pairing_is_identity() {
        let code = hgp(&rep3(), &rep3()).unwrap();
        assert_eq!(code.lx.matmul(&code.lz.transpose()).unwrap(), BinaryMatrix::identity(1));
        assert!(code.hz.matmul(&code.lx.transpose()).unwrap().is_zero());
    }

    #[test]
    fn rotation_is_an_involution() {
        let code = hgp(&rep3(), &rep3()).unwrap();
        for split in [0, 4, 9, 13] {
            let t = bias_tailor_swap(&code, split).unwrap();
            assert_eq!(t.untailor().unwrap(), CssCode { split, ..code.clone() });
        }
        assert!(matches!(bias_tailor_swap(&code, 14), Err(CodeError::InvalidSplit { .. })));
    }

    #[test]
    fn full_split_is_a_no_op() {
        let code = hgp(&rep3(), &rep3()).unwrap();
        let t = bias_tailor_swap(&code, code.n).unwrap();
        assert_eq!(t.x_checks, Symplectic::x_type(&code.hx));
        assert_eq!(t.z_checks, Symplectic::z_type(&code.hz));
    }

    #[test]
    fn literal_half_swap_breaks_commutation() {
        let code = hgp(&rep3(), &rep3()).unwrap();
        let s = code.split;
        let hx = BinaryMatrix::hstack(&[&code.hx.column_range(0, s), &code.hz.column_range(s, code.n)]).unwrap();
        let hz = BinaryMatrix::hstack(&[&code.hz.column_range(0, s), &code.hx.column_range(s, code.n)]).unwrap();
        assert!(matches!(
            CssCode::new(hx, hz, None, None, s),
            Err(CodeError::NotCommuting { .. })
        ));
    }

    #[test]
    fn lifted_product_small_examples() {
        let id = Protograph::identity(1);
        let code = lifted_product(&id, &id, 3).unwrap();
        assert_eq!(code.n, 6);
        assert_eq!(code.hx.shape(), (3, 6));

        let a = crate::protograph::example_protograph();
        let code = lifted_product(&a, &a, 3).unwrap();
        assert_eq!(code.n, 39);
        assert_eq!(code.k, code.n - code.rank_hx() - code.rank_hz());
    }

    #[test]
    fn tailored_layout_matches_rotation_after_lift() {
        let a = crate::protograph::example_protograph();
        let symbolic = lifted_product_tailored(&a, &a, 3).unwrap();
        let code = lifted_product(&a, &a, 3).unwrap();
        let lifted = bias_tailor_swap(&code, code.split).unwrap();
        assert_eq!(symbolic, lifted);
    }

    #[test]
    fn export_round_trip() {
        let code = hgp(&rep3(), &rep3()).unwrap();
        let text = code.export();
        assert_eq!(CssCode::import(&text).unwrap(), code);
        assert!(matches!(CssCode::import("n 3\n[hx]\n1 2\n1"), Err(CodeError::Format { .. })));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(13, 3), 286);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
    }
}
