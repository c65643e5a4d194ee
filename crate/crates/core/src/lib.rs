//! Lifted-product quantum LDPC codes from 2D and 4D chain complexes, with
//! bias tailoring, BP+OSD decoding and single-shot metacheck repair.
//!
//! The common types are re-exported at the crate root; the modules hold the
//! rest.

pub mod chain4d;
pub mod decoder;
pub mod gf2;
pub mod montecarlo;
pub mod noise;
pub mod product;
pub mod protograph;

pub use chain4d::{build_complex, preset, to_css, validate_chain, ChainComplex4D, ChainError, FourSeeds, SeedMapping};
pub use decoder::{bp_osd, BpConfig, BpVariant, DecodeError, DecodeResult, DecodeStage, Decoder, Schedule};
pub use gf2::{BinaryMatrix, BitVec, MatrixError, SparseMatrix};
pub use montecarlo::{run_experiment, ResultRow, RunStats, SimError, SimOptions, Simulation, TrialOutcome};
pub use noise::{ChannelError, ChannelSpec, PauliError};
pub use product::{bias_tailor_swap, hgp, lifted_product, CodeError, CssCode, Symplectic, TailoredCode};
pub use protograph::{Protograph, ProtographError, RingElement};

use thiserror::Error;

/// Any error raised by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Protograph(#[from] ProtographError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
