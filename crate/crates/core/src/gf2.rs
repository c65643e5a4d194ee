//! Dense and sparse matrices over GF(2).
//!
//! [`BinaryMatrix`] stores each row as packed 64-bit words and is the
//! representation used for elimination, rank and products. [`SparseMatrix`]
//! keeps row and column adjacency lists for message passing. Both convert
//! losslessly into each other.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("{op}: dimension mismatch, left is {}x{}, right is {}x{}", .left.0, .left.1, .right.0, .right.1)]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op}: expected vector of length {expected}, got {got}")]
    LengthMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{0}: empty operand")]
    EmptyOperand(&'static str),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Fixed-length bit vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Builds a vector from 0/1 bytes; any nonzero byte is a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.flip(i);
        }
        v
    }

    fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        Self { len, words }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of bit vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of bit vectors with different lengths");
        parity_and(&self.words, &other.words)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Sub-vector covering `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        assert!(start <= end && end <= self.len);
        let mut out = BitVec::zeros(end - start);
        for i in self.iter_ones().filter(|&i| i >= start && i < end) {
            out.set(i - start, true);
        }
        out
    }

    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, "]")
    }
}

#[inline]
fn parity_and(a: &[u64], b: &[u64]) -> bool {
    let mut acc = 0u64;
    for (x, y) in a.iter().zip(b) {
        acc ^= x & y;
    }
    acc.count_ones() % 2 == 1
}

/// Row-major bit-packed matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from nested 0/1 rows.
    ///
    /// Panics on ragged input.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &b) in row.iter().enumerate() {
                if b != 0 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn from_bitvec_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of {}x{}", self.rows, self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of {}x{}", self.rows, self.cols);
        let mask = 1u64 << (c % WORD);
        let w = &mut self.data[r * self.stride + c / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[inline]
    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn row_support(&self, r: usize) -> Vec<usize> {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
            .iter_ones()
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// First set entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        (0..self.rows).find_map(|r| {
            self.row_words(r)
                .iter()
                .enumerate()
                .find(|(_, &w)| w != 0)
                .map(|(wi, w)| (r, wi * WORD + w.trailing_zeros() as usize))
        })
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|r| self.row_words(r).iter().map(|w| w.count_ones() as usize).sum())
            .collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for r in 0..self.rows {
            for c in self.row_support(r) {
                w[c] += 1;
            }
        }
        w
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn matmul(&self, other: &BinaryMatrix) -> Result<BinaryMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = BinaryMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row_support(r) {
                let src = other.row_words(k).to_vec();
                for (d, s) in out.row_words_mut(r).iter_mut().zip(&src) {
                    *d ^= s;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self · v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::LengthMismatch {
                op: "mul_vec",
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if parity_and(self.row_words(r), v.words()) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    pub fn kron(&self, other: &BinaryMatrix) -> Result<BinaryMatrix, MatrixError> {
        if self.rows == 0 || self.cols == 0 || other.rows == 0 || other.cols == 0 {
            return Err(MatrixError::EmptyOperand("kron"));
        }
        let mut out = BinaryMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in self.row_support(i) {
                for a in 0..other.rows {
                    for b in other.row_support(a) {
                        out.set(i * other.rows + a, j * other.cols + b, true);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &BinaryMatrix) -> Result<BinaryMatrix, MatrixError> {
        if self.shape() != other.shape() {
            return Err(MatrixError::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    pub fn hstack(parts: &[&BinaryMatrix]) -> Result<BinaryMatrix, MatrixError> {
        let rows = parts.first().map_or(0, |p| p.rows);
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = BinaryMatrix::zeros(rows, cols);
        let mut offset = 0;
        for p in parts {
            if p.rows != rows {
                return Err(MatrixError::DimensionMismatch {
                    op: "hstack",
                    left: (rows, offset),
                    right: p.shape(),
                });
            }
            out.paste(p, 0, offset);
            offset += p.cols;
        }
        Ok(out)
    }

    pub fn vstack(parts: &[&BinaryMatrix]) -> Result<BinaryMatrix, MatrixError> {
        let cols = parts.first().map_or(0, |p| p.cols);
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = BinaryMatrix::zeros(rows, cols);
        let mut offset = 0;
        for p in parts {
            if p.cols != cols {
                return Err(MatrixError::DimensionMismatch {
                    op: "vstack",
                    left: (offset, cols),
                    right: p.shape(),
                });
            }
            for r in 0..p.rows {
                out.row_words_mut(offset + r).copy_from_slice(p.row_words(r));
            }
            offset += p.rows;
        }
        Ok(out)
    }

    /// Writes `block` into `self` with its top-left corner at `(row, col)`.
    pub(crate) fn paste(&mut self, block: &BinaryMatrix, row: usize, col: usize) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in block.row_support(r) {
                self.set(row + r, col + c, true);
            }
        }
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_range(&self, start: usize, end: usize) -> BinaryMatrix {
        assert!(start <= end && end <= self.cols);
        let mut out = BinaryMatrix::zeros(self.rows, end - start);
        for r in 0..self.rows {
            for c in self.row_support(r).into_iter().filter(|&c| c >= start && c < end) {
                out.set(r, c - start, true);
            }
        }
        out
    }

    pub fn row_range(&self, start: usize, end: usize) -> BinaryMatrix {
        assert!(start <= end && end <= self.rows);
        let mut out = BinaryMatrix::zeros(end - start, self.cols);
        for r in start..end {
            out.row_words_mut(r - start).copy_from_slice(self.row_words(r));
        }
        out
    }

    /// New matrix whose column `i` is column `order[i]` of `self`.
    pub fn select_columns(&self, order: &[usize]) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.rows, order.len());
        for (new, &old) in order.iter().enumerate() {
            for r in 0..self.rows {
                if self.get(r, old) {
                    out.set(r, new, true);
                }
            }
        }
        out
    }

    /// Reduced row echelon form with pivots searched in natural column order.
    pub fn echelon(&self) -> Echelon {
        Echelon::new(self.clone(), None)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of `{x : self · x = 0}`, one vector per row.
    pub fn nullspace_basis(&self) -> BinaryMatrix {
        let ech = self.echelon();
        let pivots = ech.pivots();
        let mut is_pivot = vec![false; self.cols];
        for &p in pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = BinaryMatrix::zeros(free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            basis.set(i, f, true);
            for (row, &p) in pivots.iter().enumerate() {
                if ech.matrix.get(row, f) {
                    basis.set(i, p, true);
                }
            }
        }
        basis
    }

    /// Some `x` with `self · x = rhs`, or `Ok(None)` when `rhs` is outside the
    /// column space.
    pub fn solve(&self, rhs: &BitVec) -> Result<Option<BitVec>, MatrixError> {
        if rhs.len() != self.rows {
            return Err(MatrixError::LengthMismatch {
                op: "solve",
                expected: self.rows,
                got: rhs.len(),
            });
        }
        let ech = Echelon::new(self.clone(), Some(rhs.clone()));
        Ok(ech.particular_solution())
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<BinaryMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = BinaryMatrix::hstack(&[self, &BinaryMatrix::identity(n)]).ok()?;
        let order: Vec<usize> = (0..n).collect();
        let ech = Echelon::with_pivot_order(aug, None, &order);
        if ech.rank() != n {
            return None;
        }
        Some(ech.matrix.column_range(n, 2 * n))
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let row_adj: Vec<Vec<usize>> = (0..self.rows).map(|r| self.row_support(r)).collect();
        SparseMatrix::from_row_adjacency(self.rows, self.cols, row_adj)
    }

    /// Text rendering: `"rows cols"` then one line of `0`/`1` per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<BinaryMatrix, MatrixError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(MatrixError::Parse {
            line: 1,
            column: 1,
            message: "missing header".into(),
        })?;
        let mut dims = header.split_whitespace();
        let mut dim = |name: &str| -> Result<usize, MatrixError> {
            dims.next()
                .ok_or_else(|| MatrixError::Parse {
                    line: 1,
                    column: 1,
                    message: format!("missing {name} in header"),
                })?
                .parse()
                .map_err(|_| MatrixError::Parse {
                    line: 1,
                    column: 1,
                    message: format!("invalid {name} in header"),
                })
        };
        let rows = dim("row count")?;
        let cols = dim("column count")?;
        let mut m = BinaryMatrix::zeros(rows, cols);
        for r in 0..rows {
            let (idx, line) = lines.next().ok_or(MatrixError::Parse {
                line: r + 2,
                column: 1,
                message: format!("expected {rows} rows, found {r}"),
            })?;
            let line = line.trim_end_matches('\r');
            if line.chars().count() != cols {
                return Err(MatrixError::Parse {
                    line: idx + 1,
                    column: line.chars().count().min(cols) + 1,
                    message: format!("expected {cols} entries, found {}", line.chars().count()),
                });
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    other => {
                        return Err(MatrixError::Parse {
                            line: idx + 1,
                            column: c + 1,
                            message: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
        }
        Ok(m)
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(64) {
            for c in 0..self.cols.min(128) {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for BinaryMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BinaryMatrix::parse_text(s)
    }
}

/// Reduced row echelon form of a matrix, optionally carrying a right-hand
/// side through the same row operations.
#[derive(Clone, Debug)]
pub struct Echelon {
    matrix: BinaryMatrix,
    rhs: Option<BitVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new(matrix: BinaryMatrix, rhs: Option<BitVec>) -> Self {
        let order: Vec<usize> = (0..matrix.cols).collect();
        Self::with_pivot_order(matrix, rhs, &order)
    }

    /// Gauss-Jordan elimination that considers columns in `order` when
    /// choosing pivots. Pivot rows are chosen as the first remaining row with
    /// a one in the pivot column.
    pub fn with_pivot_order(mut matrix: BinaryMatrix, mut rhs: Option<BitVec>, order: &[usize]) -> Self {
        let stride = matrix.stride;
        let rows = matrix.rows;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for &col in order {
            if rank == rows {
                break;
            }
            let word = col / WORD;
            let mask = 1u64 << (col % WORD);
            let Some(p) = (rank..rows).find(|&r| matrix.data[r * stride + word] & mask != 0) else {
                continue;
            };
            if p != rank {
                for w in 0..stride {
                    matrix.data.swap(p * stride + w, rank * stride + w);
                }
                if let Some(b) = rhs.as_mut() {
                    let (x, y) = (b.get(p), b.get(rank));
                    b.set(p, y);
                    b.set(rank, x);
                }
            }
            let pivot_row: Vec<u64> = matrix.row_words(rank).to_vec();
            let pivot_rhs = rhs.as_ref().map(|b| b.get(rank));
            for r in 0..rows {
                if r != rank && matrix.data[r * stride + word] & mask != 0 {
                    for (d, s) in matrix.row_words_mut(r).iter_mut().zip(&pivot_row) {
                        *d ^= s;
                    }
                    if let (Some(b), Some(true)) = (rhs.as_mut(), pivot_rhs) {
                        b.flip(r);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        Self { matrix, rhs, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Pivot column of each nonzero row, in row order.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduced(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn reduced_rhs(&self) -> Option<&BitVec> {
        self.rhs.as_ref()
    }

    /// Solution with all non-pivot variables set to zero.
    pub fn particular_solution(&self) -> Option<BitVec> {
        let rhs = self.rhs.as_ref()?;
        if (self.rank()..self.matrix.rows).any(|r| rhs.get(r)) {
            return None;
        }
        let mut x = BitVec::zeros(self.matrix.cols);
        for (row, &p) in self.pivots.iter().enumerate() {
            if rhs.get(row) {
                x.set(p, true);
            }
        }
        Some(x)
    }
}

/// Row/column adjacency view of a binary matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
}

impl SparseMatrix {
    /// Duplicate entries in a row cancel in pairs.
    pub fn from_row_adjacency(rows: usize, cols: usize, row_adj: Vec<Vec<usize>>) -> Self {
        assert_eq!(row_adj.len(), rows);
        let mut clean = Vec::with_capacity(rows);
        let mut col_adj = vec![Vec::new(); cols];
        for (r, mut entries) in row_adj.into_iter().enumerate() {
            entries.sort_unstable();
            let mut kept: Vec<usize> = Vec::with_capacity(entries.len());
            for c in entries {
                assert!(c < cols, "column {c} out of range {cols}");
                if kept.last() == Some(&c) {
                    kept.pop();
                } else {
                    kept.push(c);
                }
            }
            for &c in &kept {
                col_adj[c].push(r);
            }
            clean.push(kept);
        }
        Self {
            rows,
            cols,
            row_adj: clean,
            col_adj,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_adj[r]
    }

    pub fn col(&self, c: usize) -> &[usize] {
        &self.col_adj[c]
    }

    pub fn nnz(&self) -> usize {
        self.row_adj.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(self.rows, self.cols);
        for (r, entries) in self.row_adj.iter().enumerate() {
            for &c in entries {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols);
        let mut out = BitVec::zeros(self.rows);
        for (r, entries) in self.row_adj.iter().enumerate() {
            if entries.iter().filter(|&&c| v.get(c)).count() % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }
}

impl From<&BinaryMatrix> for SparseMatrix {
    fn from(m: &BinaryMatrix) -> Self {
        m.to_sparse()
    }
}

impl From<&SparseMatrix> for BinaryMatrix {
    fn from(m: &SparseMatrix) -> Self {
        m.to_dense()
    }
}

/// Incrementally grown basis of a row span, kept fully reduced so that
/// membership tests are a single pass.
#[derive(Clone, Debug, Default)]
pub struct RowBasis {
    len: usize,
    vectors: Vec<(usize, BitVec)>,
}

impl RowBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            vectors: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.len, "RowBasis::reduce length mismatch");
        let mut v = v.clone();
        for (p, b) in &self.vectors {
            if v.get(*p) {
                v.xor_assign(b);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns false when it was already a member.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter_ones().next() else {
            return false;
        };
        for (_, b) in self.vectors.iter_mut() {
            if b.get(p) {
                b.xor_assign(&r);
            }
        }
        self.vectors.push((p, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BinaryMatrix {
        let rows: Vec<Vec<u8>> = rows
            .iter()
            .map(|r| r.bytes().map(|b| b - b'0').collect())
            .collect();
        BinaryMatrix::from_rows(&rows)
    }

    #[test]
    fn identity_product() {
        let i3 = BinaryMatrix::identity(3);
        assert_eq!(i3.matmul(&i3).unwrap(), i3);
    }

    #[test]
    fn product_with_transpose() {
        let a = m(&["110", "011"]);
        assert_eq!(a.matmul(&a.transpose()).unwrap(), m(&["01", "10"]));
    }

    #[test]
    fn matmul_reports_dimensions() {
        let err = BinaryMatrix::zeros(2, 3).matmul(&BinaryMatrix::zeros(2, 3)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("2x3"), "{msg}");
    }

    #[test]
    fn kron_examples() {
        let i2 = BinaryMatrix::identity(2);
        assert_eq!(i2.kron(&i2).unwrap(), BinaryMatrix::identity(4));
        assert_eq!(m(&["11"]).kron(&m(&["1", "1"])).unwrap(), m(&["11", "11"]));
        let swap = m(&["01", "10"]);
        assert_eq!(
            i2.kron(&swap).unwrap(),
            m(&["0100", "1000", "0001", "0010"])
        );
        assert!(matches!(
            BinaryMatrix::zeros(0, 2).kron(&i2),
            Err(MatrixError::EmptyOperand(_))
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BinaryMatrix::identity(5).rank(), 5);
        assert_eq!(BinaryMatrix::zeros(4, 7).rank(), 0);
        // r0 + r1 + r2 = r3
        let hx = m(&["110100", "101010", "011001", "000111"]);
        assert_eq!(hx.rank(), 3);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(BinaryMatrix::identity(3).nullspace_basis().rows(), 0);
        let k = m(&["110", "011"]).nullspace_basis();
        assert_eq!(k, m(&["111"]));
        let z = BinaryMatrix::zeros(2, 4).nullspace_basis();
        assert_eq!(z.rows(), 4);
        assert_eq!(z.rank(), 4);
    }

    #[test]
    fn solve_examples() {
        let s = BitVec::from_bits(&[1, 0, 1]);
        assert_eq!(BinaryMatrix::identity(3).solve(&s).unwrap(), Some(s.clone()));

        let a = m(&["11"]);
        let x = a.solve(&BitVec::from_bits(&[1])).unwrap().unwrap();
        assert_eq!(x.weight() % 2, 1);

        let none = BinaryMatrix::zeros(2, 2).solve(&BitVec::from_bits(&[1, 0])).unwrap();
        assert_eq!(none, None);

        assert!(BinaryMatrix::zeros(2, 2).solve(&BitVec::zeros(3)).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&["110", "011", "001"]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.matmul(&inv).unwrap(), BinaryMatrix::identity(3));
        assert!(m(&["11", "11"]).inverse().is_none());
    }

    #[test]
    fn text_format() {
        let a = m(&["101", "010"]);
        assert_eq!(a.to_text(), "2 3\n101\n010\n");
        assert_eq!(BinaryMatrix::parse_text(&a.to_text()).unwrap(), a);
        let err = BinaryMatrix::parse_text("2 3\n101\n0x0\n").unwrap_err();
        assert_eq!(
            err,
            MatrixError::Parse {
                line: 3,
                column: 2,
                message: "unexpected character 'x'".into()
            }
        );
        assert!(BinaryMatrix::parse_text("2 3\n101\n").is_err());
        assert!(BinaryMatrix::parse_text("2 3\n101\n0101\n").is_err());
    }

    #[test]
    fn sparse_conversion() {
        let a = m(&["1010", "0111", "0000"]);
        let s = a.to_sparse();
        assert_eq!(s.row(1), &[1, 2, 3]);
        assert_eq!(s.col(2), &[0, 1]);
        assert_eq!(s.to_dense(), a);
        assert_eq!(s.nnz(), 5);
    }

    #[test]
    fn bitvec_basics() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.weight(), 3);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        v.flip(64);
        assert!(!v.get(64));
        assert_eq!(v.slice(120, 130).iter_ones().collect::<Vec<_>>(), vec![9]);
    }
}
