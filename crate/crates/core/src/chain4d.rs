//! Length-four chain complex built from four classical seeds.
//!
//! Every space of the complex is a direct sum of tensor products indexed by
//! 4-bit nodes `(A, B, C, D)`. In slot `Y` a node carries the check dimension
//! `m_Y` of seed `δ_Y` when its bit is set and the bit dimension `n_Y`
//! otherwise. Nodes with `j` bits set form the space of degree `j - 2`:
//!
//! ```text
//! degree -2   0000                            (Z metachecks)
//! degree -1   1000 0100 0010 0001             (Z stabilizers)
//! degree  0   1100 1010 1001 0110 0101 0011   (qubits)
//! degree  1   1110 1101 1011 0111             (X stabilizers)
//! degree  2   1111                            (X metachecks)
//! ```
//!
//! The boundary map sends node `v` to `v + bit(Y)` through `δ_Y` in slot `Y`
//! and identities elsewhere. Both routes between two nodes agree, so all
//! composites vanish over GF(2). Then `hx = δ₀`, `hz = δ₋₁ᵀ`, `mx = δ₁` and
//! `mz = δ₋₂ᵀ`.

use std::fmt;

use thiserror::Error;

use crate::gf2::{BinaryMatrix, MatrixError};
use crate::product::{bias_tailor_swap, CodeError, CssCode, TailoredCode};
use crate::protograph::{seed_protograph, Protograph, ProtographError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Protograph(#[from] ProtographError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("seed {slot} is empty")]
    EmptySeed { slot: char },
    #[error("lift size must be at least 1")]
    ZeroLift,
    #[error("chain condition {composite} fails at ({row}, {col}), block {dst_node:04b} <- {src_node:04b}")]
    ChainCondition {
        composite: &'static str,
        row: usize,
        col: usize,
        src_node: u8,
        dst_node: u8,
    },
    #[error("seed block rows {rows:?} cols {cols:?} exceeds the {shape:?} protograph")]
    BlockOutOfRange {
        rows: (usize, usize),
        cols: (usize, usize),
        shape: (usize, usize),
    },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("unknown seed mapping {0:?}")]
    UnknownMapping(String),
}

pub const SLOT_NAMES: [char; 4] = ['A', 'B', 'C', 'D'];

/// Nodes of each degree, in block order.
pub const NODES: [&[u8]; 5] = [
    &[0b0000],
    &[0b1000, 0b0100, 0b0010, 0b0001],
    &[0b1100, 0b1010, 0b1001, 0b0110, 0b0101, 0b0011],
    &[0b1110, 0b1101, 0b1011, 0b0111],
    &[0b1111],
];

/// Bit of slot `s` (0 = A, the outermost tensor factor).
pub fn slot_bit(s: usize) -> u8 {
    0b1000 >> s
}

/// Seeds `δ_A..δ_D`, either as binary matrices or as protographs with a lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FourSeeds {
    Binary([BinaryMatrix; 4]),
    Symbolic { seeds: [Protograph; 4], lift: usize },
}

impl FourSeeds {
    pub fn binary(seeds: [BinaryMatrix; 4]) -> Self {
        FourSeeds::Binary(seeds)
    }

    pub fn symbolic(seeds: [Protograph; 4], lift: usize) -> Self {
        FourSeeds::Symbolic { seeds, lift }
    }

    /// `(m, n)` of each seed at the level where the tensor products are
    /// formed (protograph cells in symbolic mode).
    pub fn shapes(&self) -> [(usize, usize); 4] {
        match self {
            FourSeeds::Binary(s) => std::array::from_fn(|i| s[i].shape()),
            FourSeeds::Symbolic { seeds, .. } => std::array::from_fn(|i| seeds[i].shape()),
        }
    }

    /// Block size of one symbolic cell; 1 in binary mode.
    pub fn lift(&self) -> usize {
        match self {
            FourSeeds::Binary(_) => 1,
            FourSeeds::Symbolic { lift, .. } => *lift,
        }
    }

    pub fn validate(&self) -> Result<(), ChainError> {
        for (i, (m, n)) in self.shapes().into_iter().enumerate() {
            if m == 0 || n == 0 {
                return Err(ChainError::EmptySeed { slot: SLOT_NAMES[i] });
            }
        }
        if self.lift() == 0 {
            return Err(ChainError::ZeroLift);
        }
        Ok(())
    }

    /// Binary dimension of node `v`.
    pub fn node_dim(&self, v: u8) -> usize {
        node_dim(&self.shapes(), v) * self.lift()
    }
}

fn node_dim(shapes: &[(usize, usize); 4], v: u8) -> usize {
    (0..4)
        .map(|s| if v & slot_bit(s) != 0 { shapes[s].0 } else { shapes[s].1 })
        .product()
}

/// Operations shared by binary matrices and protographs during assembly.
trait Block: Clone {
    fn zeros(rows: usize, cols: usize) -> Self;
    fn identity(n: usize) -> Self;
    fn kron(&self, other: &Self) -> Self;
    fn put(&mut self, block: &Self, row: usize, col: usize);
}

impl Block for BinaryMatrix {
    fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix::zeros(rows, cols)
    }
    fn identity(n: usize) -> Self {
        BinaryMatrix::identity(n)
    }
    fn kron(&self, other: &Self) -> Self {
        BinaryMatrix::kron(self, other).expect("seeds are non-empty")
    }
    fn put(&mut self, block: &Self, row: usize, col: usize) {
        self.paste(block, row, col)
    }
}

impl Block for Protograph {
    fn zeros(rows: usize, cols: usize) -> Self {
        Protograph::zeros(rows, cols)
    }
    fn identity(n: usize) -> Self {
        Protograph::identity(n)
    }
    fn kron(&self, other: &Self) -> Self {
        Protograph::kron(self, other)
    }
    fn put(&mut self, block: &Self, row: usize, col: usize) {
        self.paste(block, row, col)
    }
}

/// `δ_Y` in slot `Y` and identities of the source node's dimensions elsewhere.
fn expand<M: Block>(seeds: &[M; 4], shapes: &[(usize, usize); 4], slot: usize, src: u8) -> M {
    let mut acc: Option<M> = None;
    for s in 0..4 {
        let factor = if s == slot {
            seeds[s].clone()
        } else if src & slot_bit(s) != 0 {
            M::identity(shapes[s].0)
        } else {
            M::identity(shapes[s].1)
        };
        acc = Some(match acc {
            None => factor,
            Some(a) => a.kron(&factor),
        });
    }
    acc.expect("four slots")
}

fn offsets(shapes: &[(usize, usize); 4], nodes: &[u8]) -> Vec<usize> {
    let mut out = Vec::with_capacity(nodes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for &v in nodes {
        acc += node_dim(shapes, v);
        out.push(acc);
    }
    out
}

/// Boundary map from degree `d` nodes to degree `d + 1` nodes, where `d` is
/// the number of set bits in the source.
fn boundary<M: Block>(seeds: &[M; 4], shapes: &[(usize, usize); 4], bits: usize) -> M {
    let src_nodes = NODES[bits];
    let dst_nodes = NODES[bits + 1];
    let col_off = offsets(shapes, src_nodes);
    let row_off = offsets(shapes, dst_nodes);
    let mut out = M::zeros(*row_off.last().unwrap(), *col_off.last().unwrap());
    for (j, &src) in src_nodes.iter().enumerate() {
        for (i, &dst) in dst_nodes.iter().enumerate() {
            if let Some(slot) = step_slot(src, dst) {
                out.put(&expand(seeds, shapes, slot, src), row_off[i], col_off[j]);
            }
        }
    }
    out
}

/// Slot `Y` with `dst = src + bit(Y)`, if any.
pub fn step_slot(src: u8, dst: u8) -> Option<usize> {
    let diff = src ^ dst;
    (src & dst == src && diff.count_ones() == 1).then(|| diff.leading_zeros() as usize - 4)
}

/// One identity-expanded seed block of the complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedSeed {
    pub slot: usize,
    pub src: u8,
    pub dst: u8,
    pub matrix: BinaryMatrix,
}

/// Every identity-expanded seed `δ̃_Y` at every source node where it acts.
pub fn expand_seeds(seeds: &FourSeeds) -> Result<Vec<ExpandedSeed>, ChainError> {
    seeds.validate()?;
    let shapes = seeds.shapes();
    let mut out = Vec::new();
    for nodes in &NODES[..4] {
        for &src in *nodes {
            for slot in 0..4 {
                if src & slot_bit(slot) != 0 {
                    continue;
                }
                let matrix = match seeds {
                    FourSeeds::Binary(s) => expand(s, &shapes, slot, src),
                    FourSeeds::Symbolic { seeds: s, lift } => expand(s, &shapes, slot, src).lift(*lift)?,
                };
                out.push(ExpandedSeed {
                    slot,
                    src,
                    dst: src | slot_bit(slot),
                    matrix,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex4D {
    pub delta_m2: BinaryMatrix,
    pub delta_m1: BinaryMatrix,
    pub delta_0: BinaryMatrix,
    pub delta_1: BinaryMatrix,
    /// Binary dimension of every node, indexed by the node's bit pattern.
    pub node_dims: [usize; 16],
}

impl ChainComplex4D {
    /// Dimensions of the spaces of degree -2..=2.
    pub fn space_dims(&self) -> [usize; 5] {
        std::array::from_fn(|d| NODES[d].iter().map(|&v| self.node_dims[v as usize]).sum())
    }

    pub fn maps(&self) -> [&BinaryMatrix; 4] {
        [&self.delta_m2, &self.delta_m1, &self.delta_0, &self.delta_1]
    }

    /// Locates a matrix entry of the map leaving degree `bits` nodes.
    fn block_of(&self, bits: usize, row: usize, col: usize) -> (u8, u8) {
        let find = |nodes: &[u8], mut idx: usize| {
            for &v in nodes {
                let d = self.node_dims[v as usize];
                if idx < d {
                    return v;
                }
                idx -= d;
            }
            *nodes.last().unwrap()
        };
        (find(NODES[bits], col), find(NODES[bits + 2], row))
    }

    /// First failing chain condition, if any.
    pub fn check(&self) -> Result<(), ChainError> {
        let report = validate_chain(self);
        for c in &report.composites {
            if let Some((row, col)) = c.first_nonzero {
                let (src_node, dst_node) = self.block_of(c.source_degree, row, col);
                return Err(ChainError::ChainCondition {
                    composite: c.name,
                    row,
                    col,
                    src_node,
                    dst_node,
                });
            }
        }
        Ok(())
    }

    /// Column where the qubit sector `{0110, 0101, 0011}` begins.
    pub fn qubit_split(&self) -> usize {
        NODES[2][..3].iter().map(|&v| self.node_dims[v as usize]).sum()
    }

    /// Binary dimensions of the six qubit blocks.
    pub fn qubit_blocks(&self) -> [usize; 6] {
        std::array::from_fn(|i| self.node_dims[NODES[2][i] as usize])
    }
}

pub fn build_complex(seeds: &FourSeeds) -> Result<ChainComplex4D, ChainError> {
    seeds.validate()?;
    let shapes = seeds.shapes();
    let maps: [BinaryMatrix; 4] = match seeds {
        FourSeeds::Binary(s) => std::array::from_fn(|b| boundary(s, &shapes, b)),
        FourSeeds::Symbolic { seeds: s, lift } => {
            let mut out = Vec::with_capacity(4);
            for b in 0..4 {
                out.push(boundary(s, &shapes, b).lift(*lift)?);
            }
            out.try_into().expect("four maps")
        }
    };
    let [delta_m2, delta_m1, delta_0, delta_1] = maps;
    let cc = ChainComplex4D {
        delta_m2,
        delta_m1,
        delta_0,
        delta_1,
        node_dims: std::array::from_fn(|v| seeds.node_dim(v as u8)),
    };
    cc.check()?;
    Ok(cc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeReport {
    pub name: &'static str,
    /// Number of set bits in the source nodes of the first map.
    pub source_degree: usize,
    pub max_entry: u8,
    pub first_nonzero: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub composites: Vec<CompositeReport>,
    pub space_dims: [usize; 5],
    pub rank_hx: usize,
    pub rank_hz: usize,
    pub rank_mx: usize,
    pub rank_mz: usize,
    pub n: usize,
    pub k: usize,
}

impl ChainReport {
    pub fn is_valid(&self) -> bool {
        self.composites.iter().all(|c| c.max_entry == 0)
    }
}

impl fmt::Display for ChainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.space_dims;
        writeln!(f, "space dims: {} -> {} -> {} -> {} -> {}", d[0], d[1], d[2], d[3], d[4])?;
        for c in &self.composites {
            match c.first_nonzero {
                None => writeln!(f, "{}: zero", c.name)?,
                Some((r, col)) => writeln!(f, "{}: NONZERO at ({r}, {col})", c.name)?,
            }
        }
        writeln!(
            f,
            "rank hx {} hz {} mx {} mz {}",
            self.rank_hx, self.rank_hz, self.rank_mx, self.rank_mz
        )?;
        write!(f, "n = {}, k = {}", self.n, self.k)
    }
}

/// Checks every composite and gathers dimensions and ranks.
pub fn validate_chain(cc: &ChainComplex4D) -> ChainReport {
    let maps = cc.maps();
    let names = ["δ₋₁·δ₋₂", "δ₀·δ₋₁", "δ₁·δ₀"];
    let composites = (0..3)
        .map(|i| {
            let product = maps[i + 1].matmul(maps[i]).ok();
            let first = match &product {
                Some(p) => p.first_nonzero(),
                None => Some((0, 0)),
            };
            CompositeReport {
                name: names[i],
                source_degree: i,
                max_entry: u8::from(first.is_some()),
                first_nonzero: first,
            }
        })
        .collect();
    let rank_hx = cc.delta_0.rank();
    let rank_hz = cc.delta_m1.rank();
    let n = cc.delta_0.cols();
    ChainReport {
        composites,
        space_dims: cc.space_dims(),
        rank_hx,
        rank_hz,
        rank_mx: cc.delta_1.rank(),
        rank_mz: cc.delta_m2.rank(),
        n,
        k: n.saturating_sub(rank_hx + rank_hz),
    }
}

pub fn to_css(cc: &ChainComplex4D) -> Result<CssCode, ChainError> {
    cc.check()?;
    Ok(CssCode::new(
        cc.delta_0.clone(),
        cc.delta_m1.transpose(),
        Some(cc.delta_1.clone()),
        Some(cc.delta_m2.transpose()),
        cc.qubit_split(),
    )?)
}

/// Hadamard rotation of the second qubit sector (the last three blocks).
pub fn hadamard_rotate(code: &CssCode) -> Result<TailoredCode, ChainError> {
    Ok(bias_tailor_swap(code, code.split)?)
}

/// Which seed drives each block of `hx` (rows: degree-3 nodes, columns:
/// qubit nodes); `None` for zero blocks.
pub fn hx_block_labels() -> Vec<Vec<Option<char>>> {
    NODES[3]
        .iter()
        .map(|&dst| NODES[2].iter().map(|&src| step_slot(src, dst).map(|s| SLOT_NAMES[s])).collect())
        .collect()
}

/// Which seed drives each block of `hz` (rows: degree-1 nodes, columns:
/// qubit nodes).
pub fn hz_block_labels() -> Vec<Vec<Option<char>>> {
    NODES[1]
        .iter()
        .map(|&src| NODES[2].iter().map(|&dst| step_slot(src, dst).map(|s| SLOT_NAMES[s])).collect())
        .collect()
}

/// How the four seeds are cut out of the 4x6 seed protograph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedMapping {
    /// Row `i` becomes seed `i` (four 1x6 seeds).
    Rows,
    /// The four 2x3 quadrants, row-major.
    Quadrants,
    /// Explicit `(row_start, row_end, col_start, col_end)` sub-blocks.
    Blocks([(usize, usize, usize, usize); 4]),
}

impl SeedMapping {
    /// The mapping used by the `paper-L<lift>` presets: the 2x2 sub-block on rows
    /// 2..4 and columns 0..2 for every seed.
    pub fn preset_default() -> Self {
        SeedMapping::Blocks([(2, 4, 0, 2); 4])
    }

    pub fn parse(name: &str) -> Result<Self, ChainError> {
        match name {
            "rows" => Ok(SeedMapping::Rows),
            "quadrants" => Ok(SeedMapping::Quadrants),
            "default" => Ok(Self::preset_default()),
            other => parse_blocks(other).ok_or_else(|| ChainError::UnknownMapping(other.to_string())),
        }
    }

    pub fn apply(&self, proto: &Protograph) -> Result<[Protograph; 4], ChainError> {
        let blocks: [(usize, usize, usize, usize); 4] = match self {
            SeedMapping::Rows => std::array::from_fn(|i| (i, i + 1, 0, proto.cols())),
            SeedMapping::Quadrants => {
                let (hr, hc) = (proto.rows() / 2, proto.cols() / 2);
                [(0, hr, 0, hc), (0, hr, hc, 2 * hc), (hr, 2 * hr, 0, hc), (hr, 2 * hr, hc, 2 * hc)]
            }
            SeedMapping::Blocks(b) => *b,
        };
        let mut out = Vec::with_capacity(4);
        for (r0, r1, c0, c1) in blocks {
            if r0 >= r1 || c0 >= c1 || r1 > proto.rows() || c1 > proto.cols() {
                return Err(ChainError::BlockOutOfRange {
                    rows: (r0, r1),
                    cols: (c0, c1),
                    shape: proto.shape(),
                });
            }
            out.push(proto.block(r0..r1, c0..c1));
        }
        Ok(out.try_into().expect("four seeds"))
    }
}

impl fmt::Display for SeedMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeedMapping::Rows => write!(f, "rows"),
            SeedMapping::Quadrants => write!(f, "quadrants"),
            SeedMapping::Blocks(b) => {
                let parts: Vec<String> = b.iter().map(|(a, b, c, d)| format!("{a}:{b},{c}:{d}")).collect();
                write!(f, "{}", parts.join("/"))
            }
        }
    }
}

/// `r0:r1,c0:c1/...` with four entries.
fn parse_blocks(text: &str) -> Option<SeedMapping> {
    let parse_range = |s: &str| -> Option<(usize, usize)> {
        let (a, b) = s.split_once(':')?;
        Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
    };
    let mut blocks = Vec::new();
    for part in text.split('/') {
        let (rows, cols) = part.split_once(',')?;
        let (r0, r1) = parse_range(rows)?;
        let (c0, c1) = parse_range(cols)?;
        blocks.push((r0, r1, c0, c1));
    }
    Some(SeedMapping::Blocks(blocks.try_into().ok()?))
}

/// Named seed configurations.
pub fn preset(name: &str, mapping: Option<&SeedMapping>) -> Result<FourSeeds, ChainError> {
    let default_mapping = SeedMapping::preset_default();
    let mapping = mapping.unwrap_or(&default_mapping);
    match name {
        "trivial-scalar" => Ok(FourSeeds::binary(std::array::from_fn(|_| BinaryMatrix::from_rows(&[[1u8]])))),
        "rep2" => Ok(FourSeeds::binary(std::array::from_fn(|_| BinaryMatrix::from_rows(&[[1u8, 1]])))),
        _ => {
            let lift = name
                .strip_prefix("paper-L")
                .and_then(|l| l.parse::<usize>().ok())
                .ok_or_else(|| ChainError::UnknownPreset(name.to_string()))?;
            Ok(FourSeeds::symbolic(mapping.apply(&seed_protograph())?, lift))
        }
    }
}

pub const PRESET_NAMES: [&str; 3] = ["paper-L3", "trivial-scalar", "rep2"];

/// Reads four seed protographs from sections `[A]`, `[B]`, `[C]`, `[D]`,
/// each followed by protograph text.
pub fn parse_seed_file(text: &str, lift: usize) -> Result<FourSeeds, ChainError> {
    let mut bodies: [Option<(usize, String)>; 4] = Default::default();
    let mut current: Option<usize> = None;
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let slot = SLOT_NAMES
                .iter()
                .position(|c| name.len() == 1 && name.starts_with(*c))
                .ok_or_else(|| ChainError::Protograph(ProtographError::Parse {
                    line: i + 1,
                    column: 1,
                    message: format!("unknown seed section [{name}]"),
                }))?;
            bodies[slot] = Some((i + 1, String::new()));
            current = Some(slot);
            continue;
        }
        let slot = current.ok_or_else(|| ChainError::Protograph(ProtographError::Parse {
            line: i + 1,
            column: 1,
            message: "protograph text before the first [A]..[D] section".into(),
        }))?;
        let body = &mut bodies[slot].as_mut().expect("section opened").1;
        body.push_str(line);
        body.push('\n');
    }
    let mut seeds = Vec::with_capacity(4);
    for (slot, body) in bodies.into_iter().enumerate() {
        let (header_line, text) = body.ok_or(ChainError::EmptySeed { slot: SLOT_NAMES[slot] })?;
        let proto = Protograph::parse(&text).map_err(|e| match e {
            ProtographError::Parse { line, column, message } => ChainError::Protograph(ProtographError::Parse {
                line: line + header_line,
                column,
                message,
            }),
            other => ChainError::Protograph(other),
        })?;
        seeds.push(proto);
    }
    let seeds = FourSeeds::symbolic(seeds.try_into().expect("four seeds"), lift);
    seeds.validate()?;
    Ok(seeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar() -> FourSeeds {
        preset("trivial-scalar", None).unwrap()
    }

    #[test]
    fn scalar_complex() {
        let cc = build_complex(&scalar()).unwrap();
        assert_eq!(cc.space_dims(), [1, 4, 6, 4, 1]);
        assert_eq!(cc.delta_1, BinaryMatrix::from_rows(&[[1u8, 1, 1, 1]]));
        let report = validate_chain(&cc);
        assert!(report.is_valid());
        assert_eq!((report.n, report.k, report.rank_hx, report.rank_hz), (6, 0, 3, 3));
        let code = to_css(&cc).unwrap();
        assert_eq!((code.n, code.k, code.split), (6, 0, 3));
    }

    #[test]
    fn scalar_hx_layout() {
        let cc = build_complex(&scalar()).unwrap();
        let expected = BinaryMatrix::from_rows(&[
            [1u8, 1, 0, 1, 0, 0],
            [1, 0, 1, 0, 1, 0],
            [0, 1, 1, 0, 0, 1],
            [0, 0, 0, 1, 1, 1],
        ]);
        assert_eq!(cc.delta_0, expected);
    }

    #[test]
    fn rep2_complex_is_valid() {
        let cc = build_complex(&preset("rep2", None).unwrap()).unwrap();
        assert_eq!(cc.space_dims(), [16, 32, 24, 8, 1]);
        assert!(validate_chain(&cc).is_valid());
    }

    #[test]
    fn single_wide_seed_shapes() {
        let one = BinaryMatrix::from_rows(&[[1u8]]);
        let a = BinaryMatrix::from_rows(&[[1u8, 1, 0], [0, 1, 1]]);
        let seeds = FourSeeds::binary([a.clone(), one.clone(), one.clone(), one]);
        let expanded = expand_seeds(&seeds).unwrap();
        let first_a = expanded.iter().find(|e| e.slot == 0).unwrap();
        assert_eq!(first_a.matrix, a);
        let b_at_a_checked = expanded.iter().find(|e| e.slot == 1 && e.src == 0b1000).unwrap();
        assert_eq!(b_at_a_checked.matrix, BinaryMatrix::identity(2));
        let b_at_origin = expanded.iter().find(|e| e.slot == 1 && e.src == 0).unwrap();
        assert_eq!(b_at_origin.matrix, BinaryMatrix::identity(3));
        assert!(build_complex(&seeds).is_ok());
    }

    #[test]
    fn perturbation_is_flagged() {
        let mut cc = build_complex(&scalar()).unwrap();
        cc.delta_0.flip(0, 0);
        let report = validate_chain(&cc);
        assert!(!report.is_valid());
        assert!(report.composites[1].first_nonzero.is_some());
        assert!(matches!(cc.check(), Err(ChainError::ChainCondition { .. })));
    }

    #[test]
    fn rotation_round_trip_on_scalar_code() {
        let code = to_css(&build_complex(&scalar()).unwrap()).unwrap();
        let t = hadamard_rotate(&code).unwrap();
        assert_eq!(t.untailor().unwrap(), code);
    }

    #[test]
    fn block_labels_are_centrosymmetric() {
        let hx = hx_block_labels();
        let hz = hz_block_labels();
        for r in 0..4 {
            for c in 0..3 {
                assert_eq!(hx[3 - r][2 - c], hz[r][3 + c], "block ({r}, {c})");
            }
        }
        assert_eq!(hx[0][..3], [Some('C'), Some('B'), None]);
    }

    #[test]
    fn step_slot_values() {
        assert_eq!(step_slot(0b0000, 0b1000), Some(0));
        assert_eq!(step_slot(0b0100, 0b0101), Some(3));
        assert_eq!(step_slot(0b0100, 0b0011), None);
        assert_eq!(step_slot(0b0110, 0b0110), None);
    }

    #[test]
    fn mapping_parse_and_display() {
        let m = SeedMapping::parse("2:4,0:2/2:4,0:2/1:3,4:6/2:4,3:5").unwrap();
        assert_eq!(SeedMapping::parse(&m.to_string()).unwrap(), m);
        assert!(SeedMapping::parse("nonsense").is_err());
        assert!(matches!(
            SeedMapping::Blocks([(0, 5, 0, 1); 4]).apply(&seed_protograph()),
            Err(ChainError::BlockOutOfRange { .. })
        ));
    }

    #[test]
    fn seed_file_parsing() {
        let text = "[A]\nλ(0) λ(1)\n[B]\nλ(0)\n[C]\nλ(0)\n[D]\nλ(0)\n";
        let seeds = parse_seed_file(text, 3).unwrap();
        assert_eq!(seeds.shapes()[0], (1, 2));
        assert!(build_complex(&seeds).is_ok());
        match parse_seed_file("[A]\nλ(0)\n[B]\nλ(x)\n[C]\nλ(0)\n[D]\nλ(0)\n", 3) {
            Err(ChainError::Protograph(ProtographError::Parse { line: 4, .. })) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_seed_file("[A]\nλ(0)\n", 3),
            Err(ChainError::EmptySeed { slot: 'B' })
        ));
    }

    #[test]
    fn presets_resolve() {
        for name in PRESET_NAMES {
            assert!(preset(name, None).is_ok(), "{name}");
        }
        assert!(matches!(preset("paper-Lx", None), Err(ChainError::UnknownPreset(_))));
    }
}
