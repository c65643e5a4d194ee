//! Quasi-cyclic matrices over the ring of circulants.
//!
//! A [`RingElement`] is a sum of cyclic shift matrices `λ(a) + λ(b) + ...`,
//! stored as a set of shift exponents. Shifts stay symbolic (and may be
//! negative) until [`Protograph::lift`] reduces them modulo the lift size, so
//! the same protograph can be lifted at several sizes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf2::BinaryMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtographError {
    #[error("{op}: dimension mismatch, left is {}x{}, right is {}x{}", .left.0, .left.1, .right.0, .right.1)]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("lift size must be at least 1")]
    ZeroLift,
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// Element of GF(2)[x]/(x^L - 1) written as a set of shifts.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    shifts: BTreeSet<i64>,
}

impl RingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(shift: i64) -> Self {
        Self {
            shifts: BTreeSet::from([shift]),
        }
    }

    /// Duplicate shifts cancel in pairs.
    pub fn from_shifts(shifts: impl IntoIterator<Item = i64>) -> Self {
        let mut set = BTreeSet::new();
        for s in shifts {
            if !set.remove(&s) {
                set.insert(s);
            }
        }
        Self { shifts: set }
    }

    pub fn is_zero(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn shifts(&self) -> impl Iterator<Item = i64> + '_ {
        self.shifts.iter().copied()
    }

    /// Number of circulant permutations in the sum.
    pub fn weight(&self) -> usize {
        self.shifts.len()
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        RingElement {
            shifts: self.shifts.symmetric_difference(&other.shifts).copied().collect(),
        }
    }

    pub fn mul(&self, other: &RingElement) -> RingElement {
        RingElement::from_shifts(
            self.shifts
                .iter()
                .flat_map(|a| other.shifts.iter().map(move |b| a + b)),
        )
    }

    /// Image under transposition of the lifted circulant: every shift negated.
    pub fn conjugate(&self) -> RingElement {
        RingElement {
            shifts: self.shifts.iter().map(|s| -s).collect(),
        }
    }

    /// Shifts reduced modulo `lift`, with pairwise cancellation applied.
    pub fn reduced(&self, lift: usize) -> RingElement {
        RingElement::from_shifts(self.shifts.iter().map(|s| s.rem_euclid(lift as i64)))
    }

    /// The `lift x lift` binary circulant.
    pub fn lift(&self, lift: usize) -> Result<BinaryMatrix, ProtographError> {
        if lift == 0 {
            return Err(ProtographError::ZeroLift);
        }
        let mut m = BinaryMatrix::zeros(lift, lift);
        for s in self.shifts() {
            let s = s.rem_euclid(lift as i64) as usize;
            for r in 0..lift {
                m.flip(r, (r + s) % lift);
            }
        }
        Ok(m)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ(")?;
        for (i, s) in self.shifts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rectangular matrix of ring elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Protograph {
    rows: usize,
    cols: usize,
    cells: Vec<RingElement>,
}

impl Protograph {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            cells: vec![RingElement::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut p = Self::zeros(n, n);
        for i in 0..n {
            p.cells[i * n + i] = RingElement::one();
        }
        p
    }

    /// Panics on ragged input.
    pub fn from_cells(cells: Vec<Vec<RingElement>>) -> Self {
        let rows = cells.len();
        let cols = cells.first().map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(rows * cols);
        for (i, row) in cells.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged protograph row {i}");
            flat.extend(row);
        }
        Self {
            rows,
            cols,
            cells: flat,
        }
    }

    /// Convenience constructor from shift lists, e.g. `&[&[&[1, 2], &[]]]`.
    pub fn from_shift_lists(rows: &[Vec<Vec<i64>>]) -> Self {
        Self::from_cells(
            rows.iter()
                .map(|r| r.iter().map(|c| RingElement::from_shifts(c.iter().copied())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &RingElement {
        &self.cells[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: RingElement) {
        self.cells[r * self.cols + c] = value;
    }

    pub fn transpose(&self) -> Protograph {
        let mut t = Protograph::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).conjugate());
            }
        }
        t
    }

    pub fn matmul(&self, other: &Protograph) -> Result<Protograph, ProtographError> {
        if self.cols != other.rows {
            return Err(ProtographError::DimensionMismatch {
                op: "proto_matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Protograph::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RingElement::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Kronecker product over the ring: cell products use [`RingElement::mul`].
    pub fn kron(&self, other: &Protograph) -> Protograph {
        let mut out = Protograph::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for r in 0..other.rows {
                    for c in 0..other.cols {
                        out.set(i * other.rows + r, j * other.cols + c, a.mul(other.get(r, c)));
                    }
                }
            }
        }
        out
    }

    pub fn lift(&self, lift: usize) -> Result<BinaryMatrix, ProtographError> {
        if lift == 0 {
            return Err(ProtographError::ZeroLift);
        }
        let mut m = BinaryMatrix::zeros(self.rows * lift, self.cols * lift);
        for r in 0..self.rows {
            for c in 0..self.cols {
                for s in self.get(r, c).shifts() {
                    let s = s.rem_euclid(lift as i64) as usize;
                    for a in 0..lift {
                        m.flip(r * lift + a, c * lift + (a + s) % lift);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Total shift count per row, which is the row weight of every lifted row
    /// when no two shifts in a cell coincide modulo the lift.
    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).weight()).sum())
            .collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c).weight()).sum())
            .collect()
    }

    /// Sub-protograph covering `rows x cols`.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Protograph {
        assert!(rows.end <= self.rows && cols.end <= self.cols);
        Protograph::from_cells(
            rows.map(|r| cols.clone().map(|c| self.get(r, c).clone()).collect())
                .collect(),
        )
    }

    pub fn hstack(parts: &[&Protograph]) -> Result<Protograph, ProtographError> {
        let rows = parts.first().map_or(0, |p| p.rows);
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Protograph::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            if p.rows != rows {
                return Err(ProtographError::DimensionMismatch {
                    op: "hstack",
                    left: (rows, off),
                    right: p.shape(),
                });
            }
            out.paste(p, 0, off);
            off += p.cols;
        }
        Ok(out)
    }

    pub(crate) fn paste(&mut self, block: &Protograph, row: usize, col: usize) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(row + r, col + c, block.get(r, c).clone());
            }
        }
    }

    /// Canonical text: one line per row, cells separated by single spaces.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses rows separated by newlines or `;`, cells separated by
    /// whitespace. A cell is `λ(a,b,...)`, `λ()`, `L(...)` or `0`.
    pub fn parse(text: &str) -> Result<Protograph, ProtographError> {
        let mut rows: Vec<Vec<RingElement>> = Vec::new();
        let mut row_pos: Vec<(usize, usize)> = Vec::new();
        for (li, line) in text.lines().enumerate() {
            let line_no = li + 1;
            let mut col_offset = 0usize;
            for segment in line.split(';') {
                let seg_chars: Vec<char> = segment.chars().collect();
                let cells = parse_row(&seg_chars, line_no, col_offset)?;
                col_offset += seg_chars.len() + 1;
                if !cells.is_empty() {
                    row_pos.push((line_no, col_offset - seg_chars.len()));
                    rows.push(cells);
                }
            }
        }
        let cols = rows.first().map_or(0, Vec::len);
        for (row, &(line, column)) in rows.iter().zip(&row_pos) {
            if row.len() != cols {
                return Err(ProtographError::Parse {
                    line,
                    column,
                    message: format!("ragged row: expected {cols} cells, found {}", row.len()),
                });
            }
        }
        Ok(Protograph::from_cells(rows))
    }
}

fn parse_row(chars: &[char], line: usize, col_offset: usize) -> Result<Vec<RingElement>, ProtographError> {
    let err = |idx: usize, message: String| ProtographError::Parse {
        line,
        column: col_offset + idx + 1,
        message,
    };
    let mut cells = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        match chars[i] {
            '0' if chars.get(i + 1).is_none_or(|c| c.is_whitespace()) => {
                cells.push(RingElement::zero());
                i += 1;
            }
            'λ' | 'L' => {
                if chars.get(i + 1) != Some(&'(') {
                    return Err(err(i + 1, "expected '(' after λ".into()));
                }
                let close = chars[i + 2..]
                    .iter()
                    .position(|&c| c == ')')
                    .map(|p| p + i + 2)
                    .ok_or_else(|| err(start, "unterminated cell".into()))?;
                let body: String = chars[i + 2..close].iter().collect();
                let mut shifts = Vec::new();
                if !body.trim().is_empty() {
                    let mut pos = i + 2;
                    for part in body.split(',') {
                        let value: i64 = part
                            .trim()
                            .parse()
                            .map_err(|_| err(pos, format!("invalid shift {:?}", part.trim())))?;
                        shifts.push(value);
                        pos += part.chars().count() + 1;
                    }
                }
                cells.push(RingElement::from_shifts(shifts));
                i = close + 1;
                if chars.get(i).is_some_and(|c| !c.is_whitespace()) {
                    return Err(err(i, "expected whitespace between cells".into()));
                }
            }
            other => return Err(err(i, format!("unexpected character {other:?}"))),
        }
    }
    Ok(cells)
}

impl fmt::Display for Protograph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Protograph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Protograph {}x{}", self.rows, self.cols)?;
        f.write_str(&self.render())
    }
}

impl FromStr for Protograph {
    type Err = ProtographError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Protograph::parse(s)
    }
}

/// The 2x3 example protograph `[[λ(1,2), λ(0), 0], [0, λ(0,1), λ(1)]]`.
pub fn example_protograph() -> Protograph {
    Protograph::from_shift_lists(&[
        vec![vec![1, 2], vec![0], vec![]],
        vec![vec![], vec![0, 1], vec![1]],
    ])
}

/// The 4x6 seed protograph with high local girth used by the `paper-L<lift>` presets.
pub const SEED_PROTOGRAPH_TEXT: &str = "\
λ(2) λ() λ(0) λ(0) λ() λ(2)
λ() λ(0) λ(2) λ() λ(2) λ(0)
λ(0) λ(1) λ() λ(1) λ(0) λ(2)
λ(0) λ(1) λ(1) λ(1) λ(1) λ()
";

pub fn seed_protograph() -> Protograph {
    Protograph::parse(SEED_PROTOGRAPH_TEXT).expect("built-in protograph parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &[i64]) -> RingElement {
        RingElement::from_shifts(s.iter().copied())
    }

    #[test]
    fn ring_add_examples() {
        assert_eq!(el(&[1]).add(&el(&[2])), el(&[1, 2]));
        assert_eq!(el(&[1]).add(&el(&[1])), RingElement::zero());
        assert_eq!(RingElement::zero().add(&el(&[0])), el(&[0]));
    }

    #[test]
    fn ring_mul_examples() {
        assert_eq!(el(&[1]).mul(&el(&[2])), el(&[3]));
        assert_eq!(el(&[0]).mul(&el(&[4, 7])), el(&[4, 7]));
        // 1+1, 1+2, 2+1, 2+2: the two cross terms cancel
        assert_eq!(el(&[1, 2]).mul(&el(&[1, 2])), el(&[2, 4]));
    }

    #[test]
    fn lift_single_shift() {
        let m = el(&[1]).lift(3).unwrap();
        assert_eq!(m, BinaryMatrix::from_rows(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]));
        assert!(RingElement::zero().lift(4).unwrap().is_zero());
        assert_eq!(el(&[1]).lift(0), Err(ProtographError::ZeroLift));
    }

    #[test]
    fn lift_example_protograph() {
        let expected = BinaryMatrix::from_rows(&[
            [0, 1, 1, 1, 0, 0, 0, 0, 0],
            [1, 0, 1, 0, 1, 0, 0, 0, 0],
            [1, 1, 0, 0, 0, 1, 0, 0, 0],
            [0, 0, 0, 1, 1, 0, 0, 1, 0],
            [0, 0, 0, 0, 1, 1, 0, 0, 1],
            [0, 0, 0, 1, 0, 1, 1, 0, 0],
        ]);
        assert_eq!(example_protograph().lift(3).unwrap(), expected);
    }

    #[test]
    fn transpose_examples() {
        let p = Protograph::from_cells(vec![vec![el(&[1])]]);
        let t = p.transpose();
        assert_eq!(t.get(0, 0), &el(&[-1]));
        assert_eq!(t.lift(3).unwrap(), p.lift(3).unwrap().transpose());
        let id = Protograph::identity(1);
        assert_eq!(id.transpose(), id);
    }

    #[test]
    fn matmul_examples() {
        let a = Protograph::from_cells(vec![vec![el(&[0])]]);
        let b = Protograph::from_cells(vec![vec![el(&[2])]]);
        assert_eq!(a.matmul(&b).unwrap().get(0, 0), &el(&[2]));

        let a = Protograph::from_cells(vec![vec![el(&[1]), RingElement::zero()]]);
        let b = Protograph::from_cells(vec![vec![el(&[0])], vec![el(&[5])]]);
        assert_eq!(a.matmul(&b).unwrap().get(0, 0), &el(&[1]));

        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn parse_examples() {
        let p = Protograph::parse("λ(2) λ() λ(0)").unwrap();
        assert_eq!(p.shape(), (1, 3));
        assert_eq!(p.get(0, 1), &RingElement::zero());

        let p = Protograph::parse("λ(1,1)").unwrap();
        assert_eq!(p.get(0, 0), &RingElement::zero());

        let p = Protograph::parse("L(1) 0; L(-2,3) λ()").unwrap();
        assert_eq!(p.shape(), (2, 2));
        assert_eq!(p.get(1, 0), &el(&[-2, 3]));

        let seed = seed_protograph();
        assert_eq!(seed.shape(), (4, 6));
        assert_eq!(seed.get(0, 0), &el(&[2]));
        assert_eq!(seed.get(3, 5), &RingElement::zero());
        assert_eq!(seed.render(), SEED_PROTOGRAPH_TEXT);
    }

    #[test]
    fn parse_errors_carry_position() {
        match Protograph::parse("λ(1) λ(x)") {
            Err(ProtographError::Parse { line: 1, column, .. }) => assert_eq!(column, 8),
            other => panic!("unexpected {other:?}"),
        }
        match Protograph::parse("λ(1) λ(2)\nλ(0)") {
            Err(ProtographError::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(Protograph::parse("λ(1").is_err());
        assert!(Protograph::parse("q(1)").is_err());
        assert!(Protograph::parse("λ(1.5)").is_err());
    }
}
