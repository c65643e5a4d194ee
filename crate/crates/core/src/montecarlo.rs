//! Single-shot Monte Carlo simulation.
//!
//! One trial samples a Pauli error and measurement flips, repairs both noisy
//! syndromes with the metachecks (when single-shot mode is on), decodes Z
//! components before X components, and reports a logical failure when the
//! residual anticommutes with a logical operator.
//!
//! Naming: `_x` quantities concern X error components, which are seen by the
//! Z-type checks `hz` and repaired with `mz`; `_z` quantities concern Z
//! components, seen by `hx` and repaired with `mx`.

use std::io;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decoder::{BpConfig, DecodeError, DecodeResult, DecodeStage, Decoder};
use crate::gf2::{BinaryMatrix, BitVec, MatrixError, SparseMatrix};
use crate::noise::{sample_measurement_error, sample_pauli_error, trial_rng, ChannelError, ChannelSpec, PauliError};
use crate::product::{CssCode, TailoredCode};

/// Priors handed to the decoders are kept inside `[PRIOR_FLOOR, 1 - PRIOR_FLOOR]`.
pub const PRIOR_FLOOR: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("single-shot mode needs a code with metachecks")]
    MissingMetachecks,
    #[error("trial count must be at least 1")]
    ZeroTrials,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimOptions {
    pub single_shot: bool,
    /// Run the Hadamard-rotated code: the channel sees X and Z exchanged on
    /// the code's second qubit sector.
    pub tailored: bool,
    /// After decoding Z components, set the X prior on every qubit flagged by
    /// `ê_Z` to the conditional probability of a Y.
    pub channel_update: bool,
    pub trials: u64,
    pub master_seed: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            single_shot: true,
            tailored: false,
            channel_update: false,
            trials: 1000,
            master_seed: 0,
        }
    }
}

/// Per-qubit probabilities of an X component and of a Z component, plus the
/// conditional X-given-Z probability used by the channel update.
#[derive(Clone, Debug, PartialEq)]
pub struct FramePriors {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub x_given_z: Vec<f64>,
    pub measurement: f64,
}

impl FramePriors {
    pub fn new(channel: &ChannelSpec, n: usize) -> Self {
        let clamp = |v: f64| v.clamp(PRIOR_FLOOR, 1.0 - PRIOR_FLOOR);
        let mut x = Vec::with_capacity(n);
        let mut z = Vec::with_capacity(n);
        let mut x_given_z = Vec::with_capacity(n);
        for i in 0..n {
            let (px, py, pz) = channel.probs_at(i);
            x.push(clamp(px + py));
            z.push(clamp(pz + py));
            x_given_z.push(clamp(if py + pz > 0.0 { py / (py + pz) } else { 0.0 }));
        }
        Self {
            x,
            z,
            x_given_z,
            measurement: clamp(channel.q),
        }
    }
}

/// The four decoders of a simulation: data decoders on `hz` and `hx`,
/// metacheck decoders on `mz` and `mx`.
#[derive(Clone, Debug)]
pub struct Decoders {
    pub dx: Decoder,
    pub dz: Decoder,
    pub dmx: Option<Decoder>,
    pub dmz: Option<Decoder>,
    mx_cols: Option<SparseMatrix>,
    mz_cols: Option<SparseMatrix>,
}

impl Decoders {
    pub fn new(
        hx: &BinaryMatrix,
        hz: &BinaryMatrix,
        mx: Option<&BinaryMatrix>,
        mz: Option<&BinaryMatrix>,
        cfg: &BpConfig,
    ) -> Result<Self, SimError> {
        Ok(Self {
            dx: Decoder::new(hz, cfg.clone())?,
            dz: Decoder::new(hx, cfg.clone())?,
            dmx: mx.map(|m| Decoder::new(m, cfg.clone())).transpose()?,
            dmz: mz.map(|m| Decoder::new(m, cfg.clone())).transpose()?,
            mx_cols: mx.map(SparseMatrix::from),
            mz_cols: mz.map(SparseMatrix::from),
        })
    }

    pub fn for_code(code: &CssCode, cfg: &BpConfig) -> Result<Self, SimError> {
        Self::new(&code.hx, &code.hz, code.mx.as_ref(), code.mz.as_ref(), cfg)
    }

    /// Decoders on the rotated code's stabilizers written in the rotated
    /// frame, where they are again of pure X and Z type.
    pub fn for_tailored(code: &TailoredCode, cfg: &BpConfig) -> Result<Self, SimError> {
        let (hx, hz) = frame_checks(code);
        Self::new(&hx, &hz, code.mx.as_ref(), code.mz.as_ref(), cfg)
    }
}

/// Stabilizers of a rotated code as CSS matrices in the rotated frame.
fn frame_checks(code: &TailoredCode) -> (BinaryMatrix, BinaryMatrix) {
    let (s, n) = (code.split, code.n);
    let hx = BinaryMatrix::hstack(&[&code.x_checks.x.column_range(0, s), &code.x_checks.z.column_range(s, n)])
        .expect("equal row counts");
    let hz = BinaryMatrix::hstack(&[&code.z_checks.z.column_range(0, s), &code.z_checks.x.column_range(s, n)])
        .expect("equal row counts");
    (hx, hz)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairOutcome {
    pub repaired: BitVec,
    pub u_estimate: BitVec,
    pub metasyndrome: BitVec,
    /// False when the metasyndrome could not be explained and the syndrome
    /// was passed on unrepaired.
    pub applied: bool,
}

/// Decodes the metasyndrome `m · noisy` and flips the estimated faulty bits.
pub fn metacheck_repair(m: &BinaryMatrix, noisy: &BitVec, decoder: &Decoder, q: f64) -> Result<RepairOutcome, SimError> {
    let metasyndrome = m.mul_vec(noisy)?;
    let priors = vec![q.clamp(PRIOR_FLOOR, 1.0 - PRIOR_FLOOR); m.cols()];
    match decoder.decode(&metasyndrome, &priors) {
        Ok(r) => Ok(RepairOutcome {
            repaired: noisy.xor(&r.estimate),
            u_estimate: r.estimate,
            metasyndrome,
            applied: true,
        }),
        Err(DecodeError::Unsatisfiable) => Ok(RepairOutcome {
            repaired: noisy.clone(),
            u_estimate: BitVec::zeros(noisy.len()),
            metasyndrome,
            applied: false,
        }),
        Err(e) => Err(e.into()),
    }
}

/// `(hz · ex, hx · ez)`.
pub fn extract_syndromes(code: &CssCode, err: &PauliError) -> Result<(BitVec, BitVec), MatrixError> {
    Ok((code.hz.mul_vec(&err.ex)?, code.hx.mul_vec(&err.ez)?))
}

/// True when the residual anticommutes with some logical operator.
pub fn failure_test(res_x: &BitVec, res_z: &BitVec, lx: &BinaryMatrix, lz: &BinaryMatrix) -> bool {
    !lz.mul_vec(res_x).expect("residual length").is_zero() || !lx.mul_vec(res_z).expect("residual length").is_zero()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SectorRecord {
    pub bp_converged: bool,
    pub stage: Option<DecodeStage>,
    /// The data decoder's output reproduced its (repaired) syndrome.
    pub syndrome_matched: bool,
    pub meas_flipped: usize,
    pub meas_detected: usize,
    pub meas_corrected: usize,
    pub repair_skipped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub logical_failure: bool,
    pub x: SectorRecord,
    pub z: SectorRecord,
    pub residual_weight: usize,
}

impl TrialOutcome {
    pub fn detection_rate(&self, sector: &SectorRecord) -> Option<f64> {
        (sector.meas_flipped > 0).then(|| sector.meas_detected as f64 / sector.meas_flipped as f64)
    }

    pub fn correction_rate(&self, sector: &SectorRecord) -> Option<f64> {
        (sector.meas_flipped > 0).then(|| sector.meas_corrected as f64 / sector.meas_flipped as f64)
    }
}

fn record(result: &DecodeResult, matched: bool) -> SectorRecord {
    SectorRecord {
        bp_converged: result.converged,
        stage: Some(result.stage),
        syndrome_matched: matched,
        ..SectorRecord::default()
    }
}

/// Repair (optional) and data decoding of both syndromes in the decoding
/// frame. Returns the estimates `(ê_X, ê_Z)` and the sector records.
fn decode_frame(
    decoders: &Decoders,
    priors: &FramePriors,
    opts: &SimOptions,
    true_x: &BitVec,
    true_z: &BitVec,
    u_x: &BitVec,
    u_z: &BitVec,
) -> Result<(BitVec, BitVec, SectorRecord, SectorRecord), SimError> {
    let noisy_x = true_x.xor(u_x);
    let noisy_z = true_z.xor(u_z);
    let mut meas_x = SectorRecord::default();
    let mut meas_z = SectorRecord::default();

    let (syn_x, syn_z) = if opts.single_shot {
        let (dmx, dmz) = match (&decoders.dmx, &decoders.dmz) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(SimError::MissingMetachecks),
        };
        let mx_cols = decoders.mx_cols.as_ref().expect("built with mx");
        let mz_cols = decoders.mz_cols.as_ref().expect("built with mz");
        let rx = metacheck_repair(dmz.matrix(), &noisy_x, dmz, priors.measurement)?;
        let rz = metacheck_repair(dmx.matrix(), &noisy_z, dmx, priors.measurement)?;
        debug_assert!(dmz.matrix().mul_vec(true_x).map(|v| v.is_zero()).unwrap_or(false));
        debug_assert!(dmx.matrix().mul_vec(true_z).map(|v| v.is_zero()).unwrap_or(false));
        tally(&mut meas_x, u_x, &rx, mz_cols);
        tally(&mut meas_z, u_z, &rz, mx_cols);
        (rx.repaired, rz.repaired)
    } else {
        meas_x.meas_flipped = u_x.weight();
        meas_z.meas_flipped = u_z.weight();
        (noisy_x, noisy_z)
    };

    let rz = decoders.dz.decode_best_effort(&syn_z, &priors.z)?;
    let matched_z = decoders.dz.is_consistent(&rz.estimate, &syn_z);
    let rx = if opts.channel_update {
        let mut px = priors.x.clone();
        for i in rz.estimate.iter_ones() {
            px[i] = priors.x_given_z[i];
        }
        decoders.dx.decode_best_effort(&syn_x, &px)?
    } else {
        decoders.dx.decode_best_effort(&syn_x, &priors.x)?
    };
    let matched_x = decoders.dx.is_consistent(&rx.estimate, &syn_x);

    let mut sx = record(&rx, matched_x);
    let mut sz = record(&rz, matched_z);
    for (dst, src) in [(&mut sx, meas_x), (&mut sz, meas_z)] {
        dst.meas_flipped = src.meas_flipped;
        dst.meas_detected = src.meas_detected;
        dst.meas_corrected = src.meas_corrected;
        dst.repair_skipped = src.repair_skipped;
    }
    Ok((rx.estimate, rz.estimate, sx, sz))
}

fn tally(rec: &mut SectorRecord, u: &BitVec, repair: &RepairOutcome, m_cols: &SparseMatrix) {
    rec.meas_flipped = u.weight();
    rec.repair_skipped = !repair.applied;
    for j in u.iter_ones() {
        if m_cols.col(j).iter().any(|&r| repair.metasyndrome.get(r)) {
            rec.meas_detected += 1;
        }
        if repair.u_estimate.get(j) {
            rec.meas_corrected += 1;
        }
    }
}

/// The code being simulated together with everything precomputed for it.
pub struct Simulation<'a> {
    target: Target<'a>,
    decoders: Decoders,
    priors: FramePriors,
    channel: ChannelSpec,
    opts: SimOptions,
}

enum Target<'a> {
    Css(&'a CssCode),
    Rotated(&'a TailoredCode),
}

impl<'a> Simulation<'a> {
    /// Simulates `code`. With `opts.tailored` the channel's X and Z rates are
    /// exchanged on qubits `code.split..`, which is how the Hadamard-rotated
    /// code looks from the frame of the original one.
    pub fn new(code: &'a CssCode, channel: &ChannelSpec, bp: &BpConfig, opts: &SimOptions) -> Result<Self, SimError> {
        channel.validate()?;
        if opts.single_shot && !code.has_metachecks() {
            return Err(SimError::MissingMetachecks);
        }
        let channel = channel
            .clone()
            .with_boundary(opts.tailored.then_some(code.split));
        Ok(Self {
            target: Target::Css(code),
            decoders: Decoders::for_code(code, bp)?,
            priors: FramePriors::new(&channel, code.n),
            channel,
            opts: opts.clone(),
        })
    }

    /// Simulates the rotated code directly: errors are sampled in the
    /// physical frame from the unswapped channel, syndromes come from the
    /// symplectic stabilizers and failures from the rotated logicals.
    pub fn rotated(code: &'a TailoredCode, channel: &ChannelSpec, bp: &BpConfig, opts: &SimOptions) -> Result<Self, SimError> {
        channel.validate()?;
        if opts.single_shot && (code.mx.is_none() || code.mz.is_none()) {
            return Err(SimError::MissingMetachecks);
        }
        let channel = channel.clone().with_boundary(None);
        let frame = channel.clone().with_boundary(Some(code.split));
        Ok(Self {
            target: Target::Rotated(code),
            decoders: Decoders::for_tailored(code, bp)?,
            priors: FramePriors::new(&frame, code.n),
            channel,
            opts: opts.clone(),
        })
    }

    pub fn options(&self) -> &SimOptions {
        &self.opts
    }

    fn n(&self) -> usize {
        match self.target {
            Target::Css(c) => c.n,
            Target::Rotated(t) => t.n,
        }
    }

    /// Executes one trial with the stream `(master_seed, trial_index)`.
    pub fn run_trial(&self, trial_index: u64) -> Result<TrialOutcome, SimError> {
        let mut rng = trial_rng(self.opts.master_seed, trial_index);
        let err = sample_pauli_error(&self.channel, self.n(), &mut rng);
        match self.target {
            Target::Css(code) => {
                let (true_x, true_z) = extract_syndromes(code, &err)?;
                let u_x = sample_measurement_error(self.channel.q, true_x.len(), &mut rng);
                let u_z = sample_measurement_error(self.channel.q, true_z.len(), &mut rng);
                let (ex_hat, ez_hat, sx, sz) =
                    decode_frame(&self.decoders, &self.priors, &self.opts, &true_x, &true_z, &u_x, &u_z)?;
                let res = PauliError {
                    ex: err.ex.xor(&ex_hat),
                    ez: err.ez.xor(&ez_hat),
                };
                Ok(TrialOutcome {
                    logical_failure: failure_test(&res.ex, &res.ez, &code.lx, &code.lz),
                    x: sx,
                    z: sz,
                    residual_weight: res.weight(),
                })
            }
            Target::Rotated(code) => {
                let true_z = code.x_checks.syndrome(&err.ex, &err.ez)?;
                let true_x = code.z_checks.syndrome(&err.ex, &err.ez)?;
                let u_x = sample_measurement_error(self.channel.q, true_x.len(), &mut rng);
                let u_z = sample_measurement_error(self.channel.q, true_z.len(), &mut rng);
                let (ex_hat, ez_hat, sx, sz) =
                    decode_frame(&self.decoders, &self.priors, &self.opts, &true_x, &true_z, &u_x, &u_z)?;
                let estimate = PauliError {
                    ex: ex_hat,
                    ez: ez_hat,
                }
                .swap_sector(code.split);
                let res = PauliError {
                    ex: err.ex.xor(&estimate.ex),
                    ez: err.ez.xor(&estimate.ez),
                };
                let fails = !code.logical_x.syndrome(&res.ex, &res.ez)?.is_zero()
                    || !code.logical_z.syndrome(&res.ex, &res.ez)?.is_zero();
                Ok(TrialOutcome {
                    logical_failure: fails,
                    x: sx,
                    z: sz,
                    residual_weight: res.weight(),
                })
            }
        }
    }

    /// All trials, in trial-index order.
    pub fn run_trials(&self) -> Result<Vec<TrialOutcome>, SimError> {
        if self.opts.trials == 0 {
            return Err(SimError::ZeroTrials);
        }
        (0..self.opts.trials).into_par_iter().map(|t| self.run_trial(t)).collect()
    }

    pub fn run(&self) -> Result<RunStats, SimError> {
        Ok(RunStats::from_outcomes(&self.run_trials()?))
    }
}

/// Convenience wrapper: simulate `code` with fresh decoders.
pub fn run_experiment(code: &CssCode, channel: &ChannelSpec, bp: &BpConfig, opts: &SimOptions) -> Result<RunStats, SimError> {
    Simulation::new(code, channel, bp, opts)?.run()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunStats {
    pub trials: u64,
    pub failures: u64,
    pub wer: f64,
    pub wer_stderr: f64,
    /// Means of the per-trial rates over trials with at least one flipped
    /// measurement bit; `None` when there were no such trials.
    pub detection_x: Option<f64>,
    pub detection_z: Option<f64>,
    pub correction_x: Option<f64>,
    pub correction_z: Option<f64>,
    /// Trials left out of the rate averages because nothing was flipped.
    pub excluded_x: u64,
    pub excluded_z: u64,
    /// Fractions of data-decoder calls finishing in each stage.
    pub bp_conv_frac: f64,
    pub osd0_frac: f64,
    pub osdw_frac: f64,
    /// Data-decoder calls whose output did not reproduce the syndrome.
    pub unmatched_syndromes: u64,
    pub repairs_skipped: u64,
}

impl RunStats {
    pub fn from_outcomes(outcomes: &[TrialOutcome]) -> Self {
        let trials = outcomes.len() as u64;
        let failures = outcomes.iter().filter(|o| o.logical_failure).count() as u64;
        let wer = if trials > 0 { failures as f64 / trials as f64 } else { 0.0 };
        let mean_rate = |pick: &dyn Fn(&TrialOutcome) -> Option<f64>| {
            let vals: Vec<f64> = outcomes.iter().filter_map(pick).collect();
            (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
        };
        let calls = (2 * outcomes.len()).max(1) as f64;
        let stage_frac = |stage: DecodeStage| {
            outcomes
                .iter()
                .flat_map(|o| [o.x.stage, o.z.stage])
                .filter(|s| *s == Some(stage))
                .count() as f64
                / calls
        };
        RunStats {
            trials,
            failures,
            wer,
            wer_stderr: if trials > 0 { (wer * (1.0 - wer) / trials as f64).sqrt() } else { 0.0 },
            detection_x: mean_rate(&|o| o.detection_rate(&o.x)),
            detection_z: mean_rate(&|o| o.detection_rate(&o.z)),
            correction_x: mean_rate(&|o| o.correction_rate(&o.x)),
            correction_z: mean_rate(&|o| o.correction_rate(&o.z)),
            excluded_x: outcomes.iter().filter(|o| o.x.meas_flipped == 0).count() as u64,
            excluded_z: outcomes.iter().filter(|o| o.z.meas_flipped == 0).count() as u64,
            bp_conv_frac: stage_frac(DecodeStage::Bp),
            osd0_frac: stage_frac(DecodeStage::Osd0),
            osdw_frac: stage_frac(DecodeStage::OsdW),
            unmatched_syndromes: outcomes
                .iter()
                .flat_map(|o| [&o.x, &o.z])
                .filter(|s| !s.syndrome_matched)
                .count() as u64,
            repairs_skipped: outcomes
                .iter()
                .flat_map(|o| [&o.x, &o.z])
                .filter(|s| s.repair_skipped)
                .count() as u64,
        }
    }
}

/// One line of the results CSV. Field order is the file's column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub p: f64,
    pub q: f64,
    pub beta_x: f64,
    pub beta_y: f64,
    pub beta_z: f64,
    pub eta: f64,
    pub tailored: bool,
    pub single_shot: bool,
    pub trials: u64,
    pub failures: u64,
    pub wer: f64,
    pub wer_stderr: f64,
    pub detection_x: Option<f64>,
    pub detection_z: Option<f64>,
    pub correction_x: Option<f64>,
    pub correction_z: Option<f64>,
    pub bp_conv_frac: f64,
    pub osd0_frac: f64,
    pub osdw_frac: f64,
    pub wall_seconds: f64,
}

pub const CSV_HEADER: [&str; 20] = [
    "p",
    "q",
    "beta_x",
    "beta_y",
    "beta_z",
    "eta",
    "tailored",
    "single_shot",
    "trials",
    "failures",
    "wer",
    "wer_stderr",
    "detection_x",
    "detection_z",
    "correction_x",
    "correction_z",
    "bp_conv_frac",
    "osd0_frac",
    "osdw_frac",
    "wall_seconds",
];

impl ResultRow {
    pub fn new(channel: &ChannelSpec, opts: &SimOptions, stats: &RunStats, wall_seconds: f64) -> Self {
        Self {
            p: channel.p,
            q: channel.q,
            beta_x: channel.beta_x,
            beta_y: channel.beta_y,
            beta_z: channel.beta_z,
            eta: channel.eta(),
            tailored: opts.tailored,
            single_shot: opts.single_shot,
            trials: stats.trials,
            failures: stats.failures,
            wer: stats.wer,
            wer_stderr: stats.wer_stderr,
            detection_x: stats.detection_x,
            detection_z: stats.detection_z,
            correction_x: stats.correction_x,
            correction_z: stats.correction_z,
            bp_conv_frac: stats.bp_conv_frac,
            osd0_frac: stats.osd0_frac,
            osdw_frac: stats.osdw_frac,
            wall_seconds,
        }
    }

    /// Identity of the grid point: every parameter column, formatted exactly
    /// as written.
    pub fn key(&self) -> String {
        format!(
            "{}|{}|{}|{}|{}|{}|{}|{}",
            self.p, self.q, self.beta_x, self.beta_y, self.beta_z, self.eta, self.tailored, self.single_shot
        )
    }
}

/// Runs one grid point and times it.
pub fn run_grid_point(
    code: &CssCode,
    channel: &ChannelSpec,
    bp: &BpConfig,
    opts: &SimOptions,
    record_timing: bool,
) -> Result<ResultRow, SimError> {
    let start = Instant::now();
    let stats = run_experiment(code, channel, bp, opts)?;
    let wall = if record_timing { start.elapsed().as_secs_f64() } else { 0.0 };
    Ok(ResultRow::new(channel, opts, &stats, wall))
}

pub fn write_rows<W: io::Write>(writer: W, rows: &[ResultRow], with_header: bool) -> Result<(), SimError> {
    let mut w = csv::WriterBuilder::new().has_headers(with_header).from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: io::Read>(reader: R) -> Result<Vec<ResultRow>, SimError> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(SimError::Io(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("unexpected csv header {header:?}"),
        )));
    }
    r.deserialize().map(|row| row.map_err(SimError::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain4d::{build_complex, preset, to_css};
    use crate::product::hgp;

    fn scalar_code() -> CssCode {
        to_css(&build_complex(&preset("trivial-scalar", None).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn zero_error_syndromes() {
        let code = scalar_code();
        let (sx, sz) = extract_syndromes(&code, &PauliError::identity(code.n)).unwrap();
        assert!(sx.is_zero() && sz.is_zero());
    }

    #[test]
    fn y_error_syndromes() {
        let code = scalar_code();
        let mut e = PauliError::identity(code.n);
        e.ex.set(2, true);
        e.ez.set(2, true);
        let (sx, sz) = extract_syndromes(&code, &e).unwrap();
        assert_eq!(sx, code.hz.column(2));
        assert_eq!(sz, code.hx.column(2));
    }

    #[test]
    fn single_flip_is_detected() {
        let code = scalar_code();
        let mx = code.mx.clone().unwrap();
        let dec = Decoder::new(&mx, BpConfig::default()).unwrap();
        let noisy = BitVec::from_bits(&[0, 0, 1, 0]);
        let r = metacheck_repair(&mx, &noisy, &dec, 0.05).unwrap();
        assert_eq!(r.metasyndrome, BitVec::from_bits(&[1]));
        assert!(mx.mul_vec(&r.repaired).unwrap().is_zero());
        assert_eq!(r.u_estimate.weight(), 1);
    }

    #[test]
    fn failure_test_examples() {
        let code = hgp(
            &BinaryMatrix::from_rows(&[[1u8, 1, 0], [0, 1, 1]]),
            &BinaryMatrix::from_rows(&[[1u8, 1, 0], [0, 1, 1]]),
        )
        .unwrap();
        let zero = BitVec::zeros(code.n);
        assert!(!failure_test(&zero, &zero, &code.lx, &code.lz));
        assert!(failure_test(&code.lx.row(0), &zero, &code.lx, &code.lz));
        assert!(!failure_test(&code.hx.row(0), &zero, &code.lx, &code.lz));
    }

    #[test]
    fn noiseless_run_never_fails() {
        let code = scalar_code();
        let channel = ChannelSpec::new(0.0, (1.0, 1.0, 1.0), 0.0).unwrap();
        let opts = SimOptions {
            trials: 200,
            ..SimOptions::default()
        };
        let stats = run_experiment(&code, &channel, &BpConfig::default(), &opts).unwrap();
        assert_eq!((stats.trials, stats.failures, stats.wer), (200, 0, 0.0));
        assert_eq!(stats.detection_x, None);
        assert_eq!(stats.excluded_x, 200);
    }

    #[test]
    fn single_shot_requires_metachecks() {
        let code = hgp(&BinaryMatrix::from_rows(&[[1u8, 1]]), &BinaryMatrix::from_rows(&[[1u8, 1]])).unwrap();
        let channel = ChannelSpec::new(0.1, (1.0, 1.0, 1.0), 0.0).unwrap();
        assert!(matches!(
            Simulation::new(&code, &channel, &BpConfig::default(), &SimOptions::default()),
            Err(SimError::MissingMetachecks)
        ));
    }

    #[test]
    fn csv_round_trip() {
        let channel = ChannelSpec::with_eta(0.04, 100.0, 0.0, 0.02).unwrap();
        let stats = RunStats {
            trials: 10,
            failures: 1,
            wer: 0.1,
            detection_x: Some(1.0),
            ..RunStats::default()
        };
        let row = ResultRow::new(&channel, &SimOptions::default(), &stats, 0.0);
        let mut buf = Vec::new();
        write_rows(&mut buf, std::slice::from_ref(&row), true).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&CSV_HEADER.join(",")));
        let back = read_rows(&buf[..]).unwrap();
        assert_eq!(back, vec![row]);
    }
}
