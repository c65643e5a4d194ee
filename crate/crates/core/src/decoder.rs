//! Belief propagation with ordered-statistics post-processing.
//!
//! Messages are log-likelihood ratios `ln(P(0) / P(1))`. A [`Decoder`] keeps
//! the Tanner graph of one parity-check matrix and can be shared between
//! threads; every decode call owns its scratch buffers.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf2::{BinaryMatrix, BitVec, Echelon};

/// Messages are clipped to this magnitude to keep the arithmetic finite.
const LLR_CLIP: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("{what} has length {got}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("prior {value} at bit {index} is outside the open interval (0, 1)")]
    InvalidPrior { index: usize, value: f64 },
    #[error("invalid decoder configuration: {0}")]
    InvalidConfig(String),
    #[error("syndrome is outside the column space of the check matrix")]
    Unsatisfiable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BpVariant {
    ProductSum,
    MinSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Schedule {
    /// Flooding: every check updates from the previous iteration's messages.
    Parallel,
    /// Layered: checks update one after another using the freshest posteriors.
    Serial,
}

impl FromStr for BpVariant {
    type Err = DecodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "product-sum" | "product_sum" => Ok(BpVariant::ProductSum),
            "min-sum" | "min_sum" => Ok(BpVariant::MinSum),
            other => Err(DecodeError::InvalidConfig(format!("unknown BP variant {other:?}"))),
        }
    }
}

impl FromStr for Schedule {
    type Err = DecodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "parallel" => Ok(Schedule::Parallel),
            "serial" => Ok(Schedule::Serial),
            other => Err(DecodeError::InvalidConfig(format!("unknown schedule {other:?}"))),
        }
    }
}

impl fmt::Display for BpVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BpVariant::ProductSum => "product-sum",
            BpVariant::MinSum => "min-sum",
        })
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schedule::Parallel => "parallel",
            Schedule::Serial => "serial",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BpConfig {
    pub max_iterations: usize,
    pub variant: BpVariant,
    pub min_sum_scale: f64,
    /// 0 runs OSD-0 only.
    pub osd_order: usize,
    /// Number of least-reliable non-pivot columns searched by the
    /// combination sweep.
    pub osd_cap: usize,
    pub schedule: Schedule,
}

impl Default for BpConfig {
    fn default() -> Self {
        Self {
            max_iterations: 32,
            variant: BpVariant::ProductSum,
            min_sum_scale: 0.625,
            osd_order: 2,
            osd_cap: 40,
            schedule: Schedule::Parallel,
        }
    }
}

impl BpConfig {
    pub fn validate(&self) -> Result<(), DecodeError> {
        if self.max_iterations == 0 {
            return Err(DecodeError::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !(self.min_sum_scale > 0.0 && self.min_sum_scale <= 1.0) {
            return Err(DecodeError::InvalidConfig(format!(
                "min_sum_scale {} is outside (0, 1]",
                self.min_sum_scale
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecodeStage {
    Bp,
    Osd0,
    OsdW,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub estimate: BitVec,
    /// BP alone reproduced the syndrome.
    pub converged: bool,
    /// Posterior LLRs after the last BP iteration; negative favours a flip.
    pub soft_values: Vec<f64>,
    pub stage: DecodeStage,
    pub iterations: usize,
}

/// Tanner graph of one check matrix, stored edge-wise by check.
#[derive(Clone, Debug)]
pub struct Decoder {
    h: BinaryMatrix,
    cfg: BpConfig,
    /// Edges of check `i` are `check_ptr[i]..check_ptr[i + 1]`.
    check_ptr: Vec<usize>,
    edge_var: Vec<usize>,
    /// Edge indices incident to each variable.
    var_edges: Vec<Vec<usize>>,
}

impl Decoder {
    pub fn new(h: &BinaryMatrix, cfg: BpConfig) -> Result<Self, DecodeError> {
        cfg.validate()?;
        let mut check_ptr = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::new();
        let mut var_edges = vec![Vec::new(); h.cols()];
        check_ptr.push(0);
        for r in 0..h.rows() {
            for c in h.row_support(r) {
                var_edges[c].push(edge_var.len());
                edge_var.push(c);
            }
            check_ptr.push(edge_var.len());
        }
        Ok(Self {
            h: h.clone(),
            cfg,
            check_ptr,
            edge_var,
            var_edges,
        })
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.h
    }

    pub fn config(&self) -> &BpConfig {
        &self.cfg
    }

    fn validate_inputs(&self, syndrome: &BitVec, priors: &[f64]) -> Result<(), DecodeError> {
        if syndrome.len() != self.h.rows() {
            return Err(DecodeError::LengthMismatch {
                what: "syndrome",
                expected: self.h.rows(),
                got: syndrome.len(),
            });
        }
        if priors.len() != self.h.cols() {
            return Err(DecodeError::LengthMismatch {
                what: "priors",
                expected: self.h.cols(),
                got: priors.len(),
            });
        }
        if let Some((index, &value)) = priors.iter().enumerate().find(|(_, &p)| !(p > 0.0 && p < 1.0)) {
            return Err(DecodeError::InvalidPrior { index, value });
        }
        Ok(())
    }

    fn satisfies(&self, estimate: &BitVec, syndrome: &BitVec) -> bool {
        (0..self.h.rows()).all(|i| {
            let parity = self.edge_var[self.check_ptr[i]..self.check_ptr[i + 1]]
                .iter()
                .filter(|&&v| estimate.get(v))
                .count()
                % 2
                == 1;
            parity == syndrome.get(i)
        })
    }

    fn hard_decision(llr: &[f64]) -> BitVec {
        BitVec::from_support(llr.len(), llr.iter().enumerate().filter(|(_, &l)| l < 0.0).map(|(i, _)| i))
    }

    /// Check-node update for the edges of one check: writes the outgoing
    /// messages for `inputs` into `out`.
    fn check_update(&self, inputs: &[f64], flip: bool, out: &mut [f64]) {
        let d = inputs.len();
        match self.cfg.variant {
            BpVariant::MinSum => {
                let mut sign_neg = flip;
                let (mut min1, mut min2, mut argmin) = (f64::INFINITY, f64::INFINITY, usize::MAX);
                for (e, &q) in inputs.iter().enumerate() {
                    if q < 0.0 {
                        sign_neg = !sign_neg;
                    }
                    let a = q.abs();
                    if a < min1 {
                        min2 = min1;
                        min1 = a;
                        argmin = e;
                    } else if a < min2 {
                        min2 = a;
                    }
                }
                for (e, o) in out.iter_mut().enumerate() {
                    let mag = if e == argmin { min2 } else { min1 };
                    let neg = sign_neg ^ (inputs[e] < 0.0);
                    let m = (self.cfg.min_sum_scale * mag).min(LLR_CLIP);
                    *o = if neg { -m } else { m };
                }
            }
            BpVariant::ProductSum => {
                // Prefix and suffix boxplus so each output excludes its own input.
                let mut fwd = vec![0.0; d + 1];
                let mut bwd = vec![0.0; d + 1];
                fwd[0] = f64::INFINITY;
                bwd[d] = f64::INFINITY;
                for e in 0..d {
                    fwd[e + 1] = boxplus(fwd[e], inputs[e]);
                }
                for e in (0..d).rev() {
                    bwd[e] = boxplus(bwd[e + 1], inputs[e]);
                }
                for (e, o) in out.iter_mut().enumerate() {
                    let m = boxplus(fwd[e], bwd[e + 1]).clamp(-LLR_CLIP, LLR_CLIP);
                    *o = if flip { -m } else { m };
                }
            }
        }
    }

    /// Belief propagation alone; the estimate is the final hard decision.
    pub fn bp(&self, syndrome: &BitVec, priors: &[f64]) -> Result<DecodeResult, DecodeError> {
        self.validate_inputs(syndrome, priors)?;
        let prior_llr: Vec<f64> = priors.iter().map(|&p| ((1.0 - p) / p).ln().clamp(-LLR_CLIP, LLR_CLIP)).collect();
        let mut posterior = prior_llr.clone();
        let mut estimate = Self::hard_decision(&posterior);
        if self.satisfies(&estimate, syndrome) {
            return Ok(DecodeResult {
                estimate,
                converged: true,
                soft_values: posterior,
                stage: DecodeStage::Bp,
                iterations: 0,
            });
        }
        let edges = self.edge_var.len();
        let mut c2v = vec![0.0; edges];
        let mut v2c: Vec<f64> = self.edge_var.iter().map(|&v| prior_llr[v]).collect();
        let mut scratch_in = Vec::new();
        let mut scratch_out = Vec::new();
        for it in 1..=self.cfg.max_iterations {
            match self.cfg.schedule {
                Schedule::Parallel => {
                    for i in 0..self.h.rows() {
                        let range = self.check_ptr[i]..self.check_ptr[i + 1];
                        scratch_out.resize(range.len(), 0.0);
                        self.check_update(&v2c[range.clone()], syndrome.get(i), &mut scratch_out);
                        c2v[range].copy_from_slice(&scratch_out);
                    }
                    for (v, inc) in self.var_edges.iter().enumerate() {
                        let total: f64 = prior_llr[v] + inc.iter().map(|&e| c2v[e]).sum::<f64>();
                        posterior[v] = total;
                        for &e in inc {
                            v2c[e] = (total - c2v[e]).clamp(-LLR_CLIP, LLR_CLIP);
                        }
                    }
                }
                Schedule::Serial => {
                    for i in 0..self.h.rows() {
                        let range = self.check_ptr[i]..self.check_ptr[i + 1];
                        scratch_in.clear();
                        scratch_in.extend(
                            range
                                .clone()
                                .map(|e| (posterior[self.edge_var[e]] - c2v[e]).clamp(-LLR_CLIP, LLR_CLIP)),
                        );
                        scratch_out.resize(range.len(), 0.0);
                        self.check_update(&scratch_in, syndrome.get(i), &mut scratch_out);
                        for (k, e) in range.enumerate() {
                            posterior[self.edge_var[e]] = scratch_in[k] + scratch_out[k];
                            c2v[e] = scratch_out[k];
                        }
                    }
                }
            }
            estimate = Self::hard_decision(&posterior);
            if self.satisfies(&estimate, syndrome) {
                return Ok(DecodeResult {
                    estimate,
                    converged: true,
                    soft_values: posterior,
                    stage: DecodeStage::Bp,
                    iterations: it,
                });
            }
        }
        Ok(DecodeResult {
            estimate,
            converged: false,
            soft_values: posterior,
            stage: DecodeStage::Bp,
            iterations: self.cfg.max_iterations,
        })
    }

    /// BP, falling back to ordered-statistics decoding when BP does not
    /// reproduce the syndrome.
    pub fn decode(&self, syndrome: &BitVec, priors: &[f64]) -> Result<DecodeResult, DecodeError> {
        let mut result = self.bp(syndrome, priors)?;
        if result.converged {
            return Ok(result);
        }
        let (estimate, stage) = osd(
            &self.h,
            syndrome,
            &result.soft_values,
            self.cfg.osd_order,
            self.cfg.osd_cap,
            false,
        )?;
        result.estimate = estimate;
        result.stage = stage;
        Ok(result)
    }

    /// Like [`Decoder::decode`], but a syndrome outside the column space is
    /// not an error: OSD then satisfies the independent checks of the
    /// information set and ignores the dependent, contradicted ones.
    pub fn decode_best_effort(&self, syndrome: &BitVec, priors: &[f64]) -> Result<DecodeResult, DecodeError> {
        let mut result = self.bp(syndrome, priors)?;
        if result.converged {
            return Ok(result);
        }
        let (estimate, stage) = osd(
            &self.h,
            syndrome,
            &result.soft_values,
            self.cfg.osd_order,
            self.cfg.osd_cap,
            true,
        )?;
        result.estimate = estimate;
        result.stage = stage;
        Ok(result)
    }

    /// Whether `h · estimate = syndrome`.
    pub fn is_consistent(&self, estimate: &BitVec, syndrome: &BitVec) -> bool {
        self.satisfies(estimate, syndrome)
    }
}

/// `a ⊞ b`: LLR of the parity of two independent bits.
#[inline]
fn boxplus(a: f64, b: f64) -> f64 {
    if a.is_infinite() {
        return if a > 0.0 { b } else { -b };
    }
    if b.is_infinite() {
        return if b > 0.0 { a } else { -a };
    }
    let sign = if (a < 0.0) ^ (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// Ordered-statistics decoding. Columns are ranked by posterior probability
/// of error (most likely flips first, ties by index); the information set is
/// the first `rank(h)` independent columns in that order. Order `w` also
/// tries every pattern of at most `w` flips among the first `cap` remaining
/// columns and keeps the lowest-weight solution.
fn osd(
    h: &BinaryMatrix,
    syndrome: &BitVec,
    soft_values: &[f64],
    order: usize,
    cap: usize,
    lenient: bool,
) -> Result<(BitVec, DecodeStage), DecodeError> {
    let n = h.cols();
    let mut ranking: Vec<usize> = (0..n).collect();
    ranking.sort_by(|&a, &b| soft_values[a].total_cmp(&soft_values[b]));
    let ech = Echelon::with_pivot_order(h.clone(), Some(syndrome.clone()), &ranking);
    let base = match ech.particular_solution() {
        Some(x) => x,
        None if lenient => {
            let rhs = ech.reduced_rhs().expect("rhs was supplied");
            BitVec::from_support(
                n,
                ech.pivots().iter().enumerate().filter(|(r, _)| rhs.get(*r)).map(|(_, &p)| p),
            )
        }
        None => return Err(DecodeError::Unsatisfiable),
    };
    if order == 0 {
        return Ok((base, DecodeStage::Osd0));
    }
    let rank = ech.rank();
    let pivots = ech.pivots();
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = ranking.iter().copied().filter(|&c| !is_pivot[c]).take(cap).collect();
    let reduced = ech.reduced();
    let rhs = ech.reduced_rhs().expect("rhs was supplied");
    let rhs_bits = BitVec::from_support(rank, (0..rank).filter(|&r| rhs.get(r)));
    let free_cols: Vec<BitVec> = free
        .iter()
        .map(|&c| BitVec::from_support(rank, (0..rank).filter(|&r| reduced.get(r, c))))
        .collect();

    let mut best_weight = base.weight();
    let mut best: Option<Vec<usize>> = None;
    let mut chosen: Vec<usize> = Vec::with_capacity(order);
    sweep(&free_cols, &rhs_bits, order, 0, &mut chosen, &mut best_weight, &mut best);

    match best {
        None => Ok((base, DecodeStage::Osd0)),
        Some(pattern) => {
            let mut pivot_part = rhs_bits.clone();
            for &t in &pattern {
                pivot_part.xor_assign(&free_cols[t]);
            }
            let mut x = BitVec::zeros(n);
            for r in pivot_part.iter_ones() {
                x.set(pivots[r], true);
            }
            for &t in &pattern {
                x.set(free[t], true);
            }
            Ok((x, DecodeStage::OsdW))
        }
    }
}

fn sweep(
    free_cols: &[BitVec],
    acc: &BitVec,
    order: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    best_weight: &mut usize,
    best: &mut Option<Vec<usize>>,
) {
    if chosen.len() == order {
        return;
    }
    for t in start..free_cols.len() {
        let next = acc.xor(&free_cols[t]);
        chosen.push(t);
        let w = next.weight() + chosen.len();
        if w < *best_weight {
            *best_weight = w;
            *best = Some(chosen.clone());
        }
        sweep(free_cols, &next, order, t + 1, chosen, best_weight, best);
        chosen.pop();
    }
}

pub fn bp_decode(h: &BinaryMatrix, syndrome: &BitVec, priors: &[f64], cfg: &BpConfig) -> Result<DecodeResult, DecodeError> {
    Decoder::new(h, cfg.clone())?.bp(syndrome, priors)
}

pub fn osd_postprocess(
    h: &BinaryMatrix,
    syndrome: &BitVec,
    soft_values: &[f64],
    order: usize,
    cap: usize,
) -> Result<BitVec, DecodeError> {
    if soft_values.len() != h.cols() {
        return Err(DecodeError::LengthMismatch {
            what: "soft values",
            expected: h.cols(),
            got: soft_values.len(),
        });
    }
    if syndrome.len() != h.rows() {
        return Err(DecodeError::LengthMismatch {
            what: "syndrome",
            expected: h.rows(),
            got: syndrome.len(),
        });
    }
    osd(h, syndrome, soft_values, order, cap, false).map(|(x, _)| x)
}

pub fn bp_osd(h: &BinaryMatrix, syndrome: &BitVec, priors: &[f64], cfg: &BpConfig) -> Result<DecodeResult, DecodeError> {
    Decoder::new(h, cfg.clone())?.decode(syndrome, priors)
}
