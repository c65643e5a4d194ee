//! Fixtures shared by the benchmarks.

use lhp4d_core::chain4d::{build_complex, preset, to_css};
use lhp4d_core::noise::{sample_pauli_error, trial_rng, ChannelSpec};
use lhp4d_core::{BitVec, CssCode};

pub fn preset_code() -> CssCode {
    to_css(&build_complex(&preset("paper-L3", None).expect("preset exists")).expect("valid seeds"))
        .expect("valid complex")
}

/// `count` Z syndromes of `code` under a depolarizing channel.
pub fn z_syndromes(code: &CssCode, p: f64, count: u64) -> Vec<BitVec> {
    let channel = ChannelSpec::new(p, (1.0, 1.0, 1.0), 0.0).expect("valid channel");
    (0..count)
        .map(|t| {
            let e = sample_pauli_error(&channel, code.n, &mut trial_rng(99, t));
            code.hx.mul_vec(&e.ez).expect("lengths match")
        })
        .collect()
}
