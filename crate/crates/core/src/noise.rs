//! Biased Pauli data noise and measurement bit flips.
//!
//! Each trial draws from its own ChaCha8 stream `(master_seed, trial_index)`,
//! so results do not depend on how trials are scheduled across threads.
//! Every qubit and every syndrome bit consumes exactly one uniform draw,
//! whatever the probabilities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2::BitVec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("bias weights must be non-negative with a positive sum, got ({0}, {1}, {2})")]
    InvalidBias(f64, f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelSpec {
    pub p: f64,
    pub beta_x: f64,
    pub beta_y: f64,
    pub beta_z: f64,
    pub q: f64,
    /// Qubits at this column and above see X and Z exchanged.
    pub sector_swap_boundary: Option<usize>,
}

impl ChannelSpec {
    pub fn new(p: f64, beta: (f64, f64, f64), q: f64) -> Result<Self, ChannelError> {
        let spec = Self {
            p,
            beta_x: beta.0,
            beta_y: beta.1,
            beta_z: beta.2,
            q,
            sector_swap_boundary: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Dephasing-biased channel with `β = (1, β_Y, η)`.
    pub fn with_eta(p: f64, eta: f64, beta_y: f64, q: f64) -> Result<Self, ChannelError> {
        Self::new(p, (1.0, beta_y, eta), q)
    }

    pub fn with_boundary(mut self, boundary: Option<usize>) -> Self {
        self.sector_swap_boundary = boundary;
        self
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        for (name, value) in [("p", self.p), ("q", self.q)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ChannelError::OutOfRange { name, value });
            }
        }
        let b = [self.beta_x, self.beta_y, self.beta_z];
        if b.iter().any(|&v| v < 0.0 || !v.is_finite()) || b.iter().sum::<f64>() <= 0.0 {
            return Err(ChannelError::InvalidBias(self.beta_x, self.beta_y, self.beta_z));
        }
        Ok(())
    }

    /// `p_Z / p_X`; infinite when `β_X = 0`.
    pub fn eta(&self) -> f64 {
        self.beta_z / self.beta_x
    }

    /// `(p_X, p_Y, p_Z)` with `p_P = p·β_P / Σβ`.
    pub fn probs(&self) -> (f64, f64, f64) {
        // Symmetric in β_X and β_Z.
        let total = (self.beta_x + self.beta_z) + self.beta_y;
        (
            self.p * self.beta_x / total,
            self.p * self.beta_y / total,
            self.p * self.beta_z / total,
        )
    }

    /// Probabilities seen by qubit `i`, with X and Z exchanged in the
    /// swapped sector.
    pub fn probs_at(&self, i: usize) -> (f64, f64, f64) {
        let (px, py, pz) = self.probs();
        if self.is_swapped(i) {
            (pz, py, px)
        } else {
            (px, py, pz)
        }
    }

    pub fn is_swapped(&self, i: usize) -> bool {
        self.sector_swap_boundary.is_some_and(|b| i >= b)
    }
}

pub fn channel_probs(spec: &ChannelSpec) -> Result<(f64, f64, f64), ChannelError> {
    spec.validate()?;
    Ok(spec.probs())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliError {
    pub ex: BitVec,
    pub ez: BitVec,
}

impl PauliError {
    pub fn identity(n: usize) -> Self {
        Self {
            ex: BitVec::zeros(n),
            ez: BitVec::zeros(n),
        }
    }

    pub fn len(&self) -> usize {
        self.ex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ex.is_empty()
    }

    /// Number of qubits with a non-identity Pauli.
    pub fn weight(&self) -> usize {
        let mut support = self.ex.clone();
        for i in self.ez.iter_ones() {
            support.set(i, true);
        }
        support.weight()
    }

    /// Exchanges the X and Z components on qubits `boundary..`.
    pub fn swap_sector(&self, boundary: usize) -> Self {
        let mut out = self.clone();
        for i in boundary..self.len() {
            out.ex.set(i, self.ez.get(i));
            out.ez.set(i, self.ex.get(i));
        }
        out
    }
}

/// Generator for one trial.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

/// i.i.d. Pauli error: one uniform `u` per qubit, with `u < p_X` giving X,
/// `u < p_X + p_Y` giving Y and `u < p` giving Z. In the swapped sector the
/// X and Z outcomes of the same draw are exchanged.
pub fn sample_pauli_error<R: Rng + ?Sized>(spec: &ChannelSpec, n: usize, rng: &mut R) -> PauliError {
    let (px, py, pz) = spec.probs();
    let mut err = PauliError::identity(n);
    for i in 0..n {
        let u: f64 = rng.random();
        let (x, z) = if u < px {
            (true, false)
        } else if u < px + py {
            (true, true)
        } else if u < px + py + pz {
            (false, true)
        } else {
            (false, false)
        };
        let (x, z) = if spec.is_swapped(i) { (z, x) } else { (x, z) };
        err.ex.set(i, x);
        err.ez.set(i, z);
    }
    err
}

/// i.i.d. Bernoulli(`q`) flips, one uniform draw per bit.
pub fn sample_measurement_error<R: Rng + ?Sized>(q: f64, bits: usize, rng: &mut R) -> BitVec {
    let mut out = BitVec::zeros(bits);
    for i in 0..bits {
        let u: f64 = rng.random();
        if u < q {
            out.set(i, true);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: (f64, f64, f64), b: (f64, f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-15 && (a.1 - b.1).abs() < 1e-15 && (a.2 - b.2).abs() < 1e-15
    }

    #[test]
    fn probability_split() {
        let s = ChannelSpec::new(0.03, (1.0, 1.0, 1.0), 0.0).unwrap();
        assert!(close(s.probs(), (0.01, 0.01, 0.01)));
        let s = ChannelSpec::new(0.1, (1.0, 0.0, 9.0), 0.0).unwrap();
        assert!(close(s.probs(), (0.01, 0.0, 0.09)));
        assert_eq!(s.eta(), 9.0);
        let s = ChannelSpec::new(0.0, (2.0, 3.0, 5.0), 0.0).unwrap();
        assert_eq!(s.probs(), (0.0, 0.0, 0.0));
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(ChannelSpec::new(0.1, (0.0, 0.0, 0.0), 0.0).is_err());
        assert!(ChannelSpec::new(1.5, (1.0, 1.0, 1.0), 0.0).is_err());
        assert!(ChannelSpec::new(0.1, (1.0, -1.0, 1.0), 0.0).is_err());
        assert!(ChannelSpec::new(0.1, (1.0, 1.0, 1.0), -0.1).is_err());
    }

    #[test]
    fn forced_errors() {
        let mut rng = trial_rng(1, 0);
        let spec = ChannelSpec::new(0.0, (1.0, 1.0, 1.0), 0.0).unwrap();
        let e = sample_pauli_error(&spec, 10, &mut rng);
        assert!(e.ex.is_zero() && e.ez.is_zero());

        let spec = ChannelSpec::new(1.0, (0.0, 0.0, 1.0), 0.0).unwrap();
        let e = sample_pauli_error(&spec, 10, &mut rng);
        assert_eq!(e.ez, BitVec::ones(10));
        assert!(e.ex.is_zero());

        let e = sample_pauli_error(&spec.clone().with_boundary(Some(5)), 10, &mut rng);
        assert_eq!(e.ez, BitVec::from_support(10, 0..5));
        assert_eq!(e.ex, BitVec::from_support(10, 5..10));
    }

    #[test]
    fn measurement_extremes() {
        let mut rng = trial_rng(2, 0);
        assert!(sample_measurement_error(0.0, 100, &mut rng).is_zero());
        assert_eq!(sample_measurement_error(1.0, 100, &mut rng), BitVec::ones(100));
    }

    #[test]
    fn streams_are_reproducible() {
        let spec = ChannelSpec::new(0.3, (1.0, 2.0, 3.0), 0.0).unwrap();
        let a = sample_pauli_error(&spec, 200, &mut trial_rng(9, 4));
        let b = sample_pauli_error(&spec, 200, &mut trial_rng(9, 4));
        let c = sample_pauli_error(&spec, 200, &mut trial_rng(9, 5));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn y_sets_both_components() {
        let spec = ChannelSpec::new(1.0, (0.0, 1.0, 0.0), 0.0).unwrap();
        let e = sample_pauli_error(&spec, 8, &mut trial_rng(0, 0));
        assert_eq!(e.ex, BitVec::ones(8));
        assert_eq!(e.ez, BitVec::ones(8));
        assert_eq!(e.weight(), 8);
    }
}
